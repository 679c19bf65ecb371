//! Perfect `h`-phase arrays: group-ring coefficients over
//! `Z_{n_1} × … × Z_{n_k}` laid out as a `k`-dimensional array.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::cyclotomic::{coeffs_vanish_i64, CycInt};
use crate::group::{make_abelian, mixed_radix_digits, mixed_radix_index, GroupError, GroupLaw};
use crate::group_ring::GroupRingElt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("the group is not given as a product of cyclic factors")]
    NotAbelianFactored,
    #[error("coefficient at element {0} is not a single root of unity")]
    NonUnimodular(usize),
    #[error("array needs {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("exponent {exp} out of range for h={h}")]
    BadExponent { exp: usize, h: usize },
    #[error("dimensions and root order must be positive")]
    ZeroDimension,
    #[error("shift has {got} components, array has {expected} dimensions")]
    BadShift { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Entries `ζ_h^{e}` stored row-major, last index fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectArray {
    dims: Vec<usize>,
    h: usize,
    exponents: Vec<usize>,
}

impl PerfectArray {
    pub fn new(dims: Vec<usize>, h: usize, exponents: Vec<usize>) -> Result<Self, ArrayError> {
        if dims.is_empty() || dims.contains(&0) || h == 0 {
            return Err(ArrayError::ZeroDimension);
        }
        let expected = dims.iter().product();
        if exponents.len() != expected {
            return Err(ArrayError::WrongLength { expected, got: exponents.len() });
        }
        if let Some(&exp) = exponents.iter().find(|&&e| e >= h) {
            return Err(ArrayError::BadExponent { exp, h });
        }
        Ok(PerfectArray { dims, h, exponents })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn get(&self, index: &[usize]) -> usize {
        self.exponents[mixed_radix_index(index, &self.dims)]
    }

    pub fn set(&mut self, index: &[usize], exp: usize) {
        let i = mixed_radix_index(index, &self.dims);
        self.exponents[i] = exp % self.h;
    }

    /// The inverse of [`to_array`].
    pub fn to_group_ring(&self) -> Result<GroupRingElt, ArrayError> {
        let g = Arc::new(make_abelian(&self.dims)?);
        Ok(GroupRingElt::from_exponents(g, self.h, &self.exponents).expect("lengths agree"))
    }
}

/// `a_{i_1,…,i_k}` = exponent of the coefficient at `(i_1, …, i_k)`.
pub fn to_array(d: &GroupRingElt) -> Result<PerfectArray, ArrayError> {
    let GroupLaw::Abelian(dims) = d.group().law() else {
        return Err(ArrayError::NotAbelianFactored);
    };
    // the abelian encoding is already row-major over the factors
    let exponents = d
        .coeffs()
        .iter()
        .enumerate()
        .map(|(g, c)| c.as_root().map(|r| r.exp()).ok_or(ArrayError::NonUnimodular(g)))
        .collect::<Result<_, _>>()?;
    PerfectArray::new(dims.clone(), d.root_order(), exponents)
}

fn shift_histogram(a: &PerfectArray, shift: &[usize]) -> Vec<i64> {
    let h = a.h;
    let mut hist = vec![0i64; h];
    for i in 0..a.len() {
        let digits = mixed_radix_digits(i, &a.dims);
        let shifted: Vec<usize> = digits.iter().zip(shift).zip(&a.dims).map(|((x, s), n)| (x + s) % n).collect();
        let j = mixed_radix_index(&shifted, &a.dims);
        hist[(a.exponents[i] + h - a.exponents[j]) % h] += 1;
    }
    hist
}

/// `Σ_i a_i·conj(a_{i+s})` with indices mod `dims`.
pub fn autocorrelation(a: &PerfectArray, shift: &[usize]) -> Result<CycInt, ArrayError> {
    if shift.len() != a.dims.len() {
        return Err(ArrayError::BadShift { expected: a.dims.len(), got: shift.len() });
    }
    let hist = shift_histogram(a, shift);
    Ok(CycInt::from_i64s(&hist).expect("h is positive"))
}

/// All nonzero shifts have exactly zero autocorrelation.
pub fn verify_perfect(a: &PerfectArray) -> bool {
    first_imperfect_shift(a).is_none()
}

/// The first nonzero shift (in index order) with nonzero autocorrelation.
pub fn first_imperfect_shift(a: &PerfectArray) -> Option<Vec<usize>> {
    (1..a.len())
        .into_par_iter()
        .map(|s| mixed_radix_digits(s, &a.dims))
        .find_first(|shift| !coeffs_vanish_i64(&shift_histogram(a, shift)))
}

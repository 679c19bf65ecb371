//! The group ring `Z[ζ_h][G]`.

use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::cyclotomic::{CycInt, CyclotomicError, RootExp};
use crate::group::{characters, CharacterTable, FiniteGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupRingError {
    #[error("group-ring elements live over different groups")]
    GroupMismatch,
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// `Σ_g a_g·g` with every `a_g ∈ Z[ζ_h]` for one common `h`. Stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElt {
    group: Arc<FiniteGroup>,
    root_order: usize,
    coeffs: Vec<CycInt>,
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GroupRingElt {
    pub fn zero(group: Arc<FiniteGroup>, root_order: usize) -> Self {
        let coeffs = vec![CycInt::zero(root_order); group.order()];
        GroupRingElt { group, root_order, coeffs }
    }

    /// `λ·1_G`.
    pub fn scalar(group: Arc<FiniteGroup>, value: CycInt) -> Self {
        let mut x = Self::zero(group, value.order());
        x.coeffs[0] = value;
        x
    }

    pub fn from_coeffs(group: Arc<FiniteGroup>, coeffs: Vec<CycInt>) -> Result<Self, GroupRingError> {
        if coeffs.len() != group.order() {
            return Err(GroupRingError::WrongLength { expected: group.order(), got: coeffs.len() });
        }
        let root_order = coeffs[0].order();
        if let Some(c) = coeffs.iter().find(|c| c.order() != root_order) {
            return Err(CyclotomicError::OrderMismatch(root_order, c.order()).into());
        }
        Ok(GroupRingElt { group, root_order, coeffs })
    }

    /// Element whose coefficient at `g` is `ζ_h^{exps[g]}`.
    pub fn from_exponents(group: Arc<FiniteGroup>, root_order: usize, exps: &[usize]) -> Result<Self, GroupRingError> {
        let coeffs = exps.iter().map(|&e| CycInt::from_root(RootExp::new(root_order, e as i64))).collect();
        Self::from_coeffs(group, coeffs)
    }

    /// The sum of all group elements (the subset `G` itself).
    pub fn group_sum(group: Arc<FiniteGroup>, root_order: usize) -> Self {
        let n = group.order();
        Self::from_exponents(group, root_order, &vec![0; n]).expect("lengths agree")
    }

    /// Indicator of a subset, with the given coefficient on each member.
    pub fn subset(group: Arc<FiniteGroup>, members: &[usize], coeff: &CycInt) -> Self {
        let mut x = Self::zero(group, coeff.order());
        for &g in members {
            x.coeffs[g].add_assign(coeff).expect("same order");
        }
        x
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn root_order(&self) -> usize {
        self.root_order
    }

    pub fn coeffs(&self) -> &[CycInt] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &CycInt {
        &self.coeffs[g]
    }

    pub fn set_coeff(&mut self, g: usize, value: CycInt) -> Result<(), GroupRingError> {
        if value.order() != self.root_order {
            return Err(CyclotomicError::OrderMismatch(self.root_order, value.order()).into());
        }
        self.coeffs[g] = value;
        Ok(())
    }

    fn check_compatible(&self, other: &GroupRingElt) -> Result<(), GroupRingError> {
        if !same_group(&self.group, &other.group) {
            return Err(GroupRingError::GroupMismatch);
        }
        if self.root_order != other.root_order {
            return Err(CyclotomicError::OrderMismatch(self.root_order, other.root_order).into());
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupRingElt) -> Result<GroupRingElt, GroupRingError> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect::<Result<_, _>>()?;
        Ok(GroupRingElt { group: Arc::clone(&self.group), root_order: self.root_order, coeffs })
    }

    pub fn sub(&self, other: &GroupRingElt) -> Result<GroupRingElt, GroupRingError> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect::<Result<_, _>>()?;
        Ok(GroupRingElt { group: Arc::clone(&self.group), root_order: self.root_order, coeffs })
    }

    /// Convolution `Σ_g (Σ_{kl=g} a_k b_l) g`.
    pub fn mul(&self, other: &GroupRingElt) -> Result<GroupRingElt, GroupRingError> {
        self.check_compatible(other)?;
        let g = &self.group;
        let mut out = GroupRingElt::zero(Arc::clone(g), self.root_order);
        let right: Vec<usize> = (0..g.order()).filter(|&l| !other.coeffs[l].is_structurally_zero()).collect();
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_structurally_zero() {
                continue;
            }
            for &l in &right {
                out.coeffs[g.mul(k, l)].mul_add_assign(a, &other.coeffs[l])?;
            }
        }
        Ok(out)
    }

    /// `X^{(-1)} = Σ conj(a_g)·g^{-1}`.
    pub fn conj_inv(&self) -> GroupRingElt {
        let g = &self.group;
        let mut coeffs = vec![CycInt::zero(self.root_order); g.order()];
        for (a, c) in self.coeffs.iter().enumerate() {
            coeffs[g.inv(a)] = c.conj();
        }
        GroupRingElt { group: Arc::clone(g), root_order: self.root_order, coeffs }
    }

    /// Re-express all coefficients in `Z[ζ_to]`.
    pub fn embed(&self, to: usize) -> Result<GroupRingElt, GroupRingError> {
        let coeffs = self.coeffs.iter().map(|c| c.embed(to)).collect::<Result<_, _>>()?;
        Ok(GroupRingElt { group: Arc::clone(&self.group), root_order: to, coeffs })
    }

    /// Coefficient-wise value equality (exact).
    pub fn equals(&self, other: &GroupRingElt) -> Result<bool, GroupRingError> {
        Ok(self.sub(other)?.coeffs.iter().all(CycInt::is_zero))
    }

    /// True iff the element is `n·1_G` exactly.
    pub fn equals_scalar(&self, n: i64) -> bool {
        self.coeffs[0].equals_integer(n) && self.coeffs[1..].iter().all(CycInt::is_zero)
    }

    /// Exponents of the coefficients when each is a single root of unity.
    pub fn unimodular_exponents(&self) -> Option<Vec<usize>> {
        self.coeffs.iter().map(|c| c.as_root().map(|r| r.exp())).collect()
    }
}

/// `χ(X) = Σ_g a_g·χ(g)` in `Z[ζ_L]`, `L = lcm(h, exp(G))`.
pub fn apply_char(table: &CharacterTable, t: usize, x: &GroupRingElt) -> Result<CycInt, GroupRingError> {
    let e = table.exponent();
    let lcm = x.root_order().lcm(&e);
    let row = table.row(t);
    let mut out = CycInt::zero(lcm);
    for (g, a) in x.coeffs().iter().enumerate() {
        if a.is_structurally_zero() {
            continue;
        }
        let chi = RootExp::new(lcm, (row[g] * (lcm / e)) as i64);
        out.add_assign(&a.embed(lcm)?.mul_root(chi)?)?;
    }
    Ok(out)
}

/// Decide `D = E` through character values (Fourier inversion). Abelian
/// groups only; serves as an oracle for direct coefficient comparison.
pub fn fourier_equal(d: &GroupRingElt, e: &GroupRingElt) -> Result<bool, GroupRingError> {
    d.check_compatible(e)?;
    let table = characters(d.group())?;
    for t in 0..table.len() {
        if !apply_char(&table, t, d)?.equals(&apply_char(&table, t, e)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Materialized BH matrices and the three exact verifiers: row inner
//! products, the group-ring identity `DD^{(-1)} = |G|`, and character norms.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::coeffs_vanish_i64;
use crate::group::{characters, FiniteGroup};
use crate::group_ring::{apply_char, GroupRingElt, GroupRingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("coefficient at group element {0} is not a single root of unity")]
    NonUnimodular(usize),
    #[error("matrix must be {order}x{order}, found a row of length {found}")]
    BadShape { order: usize, found: usize },
    #[error("matrix has {found} rows, expected {order}")]
    BadRowCount { order: usize, found: usize },
    #[error("exponent {exp} out of range for h={h}")]
    BadExponent { exp: usize, h: usize },
    #[error("root order must be positive")]
    ZeroOrder,
    #[error("matrix is not invariant under its group")]
    NotInvariant,
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
}

/// `|G| × |G|` exponent matrix: entry `(g, k)` is `ζ_h^{E[g][k]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BhMatrix {
    h: usize,
    group: Arc<FiniteGroup>,
    exponents: Vec<Vec<usize>>,
}

impl BhMatrix {
    pub fn new(h: usize, group: Arc<FiniteGroup>, exponents: Vec<Vec<usize>>) -> Result<Self, VerifyError> {
        if h == 0 {
            return Err(VerifyError::ZeroOrder);
        }
        let order = group.order();
        if exponents.len() != order {
            return Err(VerifyError::BadRowCount { order, found: exponents.len() });
        }
        for row in &exponents {
            if row.len() != order {
                return Err(VerifyError::BadShape { order, found: row.len() });
            }
            if let Some(&exp) = row.iter().find(|&&e| e >= h) {
                return Err(VerifyError::BadExponent { exp, h });
            }
        }
        Ok(BhMatrix { h, group, exponents })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn order(&self) -> usize {
        self.exponents.len()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.exponents
    }

    pub fn entry(&self, g: usize, k: usize) -> usize {
        self.exponents[g][k]
    }

    /// Overwrites one entry; the exponent is reduced mod `h`.
    pub fn set_entry(&mut self, g: usize, k: usize, exp: usize) {
        self.exponents[g][k] = exp % self.h;
    }

    /// The group-ring element `Σ a_g g` of an invariant matrix, read off the
    /// column of the identity (`E[g][1] = a_g`).
    pub fn to_group_ring(&self) -> Result<GroupRingElt, VerifyError> {
        if !check_invariance(self).0 {
            return Err(VerifyError::NotInvariant);
        }
        let exps: Vec<usize> = (0..self.order()).map(|g| self.exponents[g][0]).collect();
        Ok(GroupRingElt::from_exponents(Arc::clone(&self.group), self.h, &exps)?)
    }
}

/// `E[g][k] = exponent of a_{gk^{-1}}`.
pub fn materialize(d: &GroupRingElt) -> Result<BhMatrix, VerifyError> {
    let exps = unimodular(d)?;
    let g = d.group();
    let n = g.order();
    let exponents = (0..n).map(|a| (0..n).map(|k| exps[g.mul(a, g.inv(k))]).collect()).collect();
    BhMatrix::new(d.root_order(), Arc::clone(g), exponents)
}

fn unimodular(d: &GroupRingElt) -> Result<Vec<usize>, VerifyError> {
    d.coeffs()
        .iter()
        .enumerate()
        .map(|(g, c)| c.as_root().map(|r| r.exp()).ok_or(VerifyError::NonUnimodular(g)))
        .collect()
}

/// Where verification first failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Failure {
    /// Rows with a nonzero inner product.
    RowPair(usize, usize),
    /// `E[gl][kl] ≠ E[g][k]`.
    Invariance { g: usize, k: usize, l: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub is_bh: bool,
    pub is_invariant: bool,
    pub first_failure: Option<Failure>,
    /// Failing row pairs found; at most 1 unless run with `full`.
    pub failing_pairs: usize,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Check every row pair instead of stopping at the first failure.
    pub full: bool,
}

fn rows_orthogonal(h: usize, a: &[usize], b: &[usize], hist: &mut [i64]) -> bool {
    hist.iter_mut().for_each(|c| *c = 0);
    for (&x, &y) in a.iter().zip(b) {
        hist[(x + h - y) % h] += 1;
    }
    coeffs_vanish_i64(hist)
}

/// `(invariant, first violation)`. Comparing `E[g][k]` with `E[gk^{-1}][1]`
/// is equivalent to the full condition over all `l`.
fn check_invariance(m: &BhMatrix) -> (bool, Option<Failure>) {
    let g = &m.group;
    let n = m.order();
    for a in 0..n {
        for k in 0..n {
            let l = g.inv(k);
            if m.exponents[a][k] != m.exponents[g.mul(a, l)][0] {
                return (false, Some(Failure::Invariance { g: a, k, l }));
            }
        }
    }
    (true, None)
}

/// Exact `HH^* = nI` check over all unordered row pairs, plus invariance.
pub fn verify_bh(m: &BhMatrix, opts: VerifyOptions) -> VerifyReport {
    let start = Instant::now();
    let n = m.order();
    let h = m.h;
    let rows = &m.exponents;
    let pair_failures = |r1: usize| -> Vec<(usize, usize)> {
        let mut hist = vec![0i64; h];
        let mut out = Vec::new();
        for r2 in r1 + 1..n {
            if !rows_orthogonal(h, &rows[r1], &rows[r2], &mut hist) {
                out.push((r1, r2));
                if !opts.full {
                    break;
                }
            }
        }
        out
    };
    let (first_pair, failing_pairs) = if opts.full {
        let all: Vec<(usize, usize)> = (0..n).into_par_iter().flat_map_iter(pair_failures).collect();
        (all.first().copied(), all.len())
    } else {
        let first = (0..n).into_par_iter().find_map_first(|r1| pair_failures(r1).into_iter().next());
        (first, first.is_some() as usize)
    };
    let (is_invariant, inv_failure) = check_invariance(m);
    VerifyReport {
        is_bh: first_pair.is_none(),
        is_invariant,
        first_failure: first_pair.map(|(a, b)| Failure::RowPair(a, b)).or(inv_failure),
        failing_pairs,
        millis: start.elapsed().as_millis(),
    }
}

/// `DD^{(-1)} = |G|`. Unimodular inputs use exponent histograms per
/// coefficient of the product; anything else goes through
/// [`verify_group_ring_generic`].
pub fn verify_group_ring(d: &GroupRingElt) -> bool {
    let Some(exps) = d.unimodular_exponents() else {
        return verify_group_ring_generic(d);
    };
    let g = d.group();
    let n = g.order();
    let h = d.root_order();
    // coefficient of a in DD^{(-1)} is Σ_k a_k conj(a_{a^{-1}k})
    (0..n).into_par_iter().all(|a| {
        let ai = g.inv(a);
        let mut hist = vec![0i64; h];
        for (k, &ek) in exps.iter().enumerate() {
            hist[(ek + h - exps[g.mul(ai, k)]) % h] += 1;
        }
        if a == g.identity() {
            hist[0] -= n as i64;
        }
        coeffs_vanish_i64(&hist)
    })
}

/// `DD^{(-1)} = |G|` by full group-ring multiplication.
pub fn verify_group_ring_generic(d: &GroupRingElt) -> bool {
    let prod = d.mul(&d.conj_inv()).expect("same group and order");
    prod.equals_scalar(d.group().order() as i64)
}

/// `|χ(D)|² = |G|` for every character. `None` for non-abelian groups.
pub fn verify_characters(d: &GroupRingElt) -> Option<bool> {
    let g = d.group();
    if !g.is_abelian() {
        return None;
    }
    let table = characters(g).ok()?;
    let n = g.order() as i64;
    Some((0..table.len()).into_par_iter().all(|t| {
        let v = apply_char(&table, t, d).expect("character table matches group");
        v.norm_sq().equals_integer(n)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycInt, RootExp};
    use crate::group::{make_abelian, make_cyclic, make_semidirect};
    use proptest::prelude::*;

    fn cyc(n: usize) -> Arc<FiniteGroup> {
        Arc::new(make_cyclic(n).unwrap())
    }

    #[test]
    fn materialize_examples() {
        let trivial = cyc(1);
        let one = GroupRingElt::scalar(Arc::clone(&trivial), CycInt::one(2));
        assert_eq!(materialize(&one).unwrap().rows(), &[vec![0]]);

        let d = GroupRingElt::from_exponents(cyc(4), 2, &[0, 0, 0, 1]).unwrap();
        let m = materialize(&d).unwrap();
        assert_eq!(m.rows(), &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0]]);
        // every row is a cyclic shift of (0,0,0,1)
        for row in m.rows() {
            let mut sorted = row.clone();
            sorted.sort();
            assert_eq!(sorted, vec![0, 0, 0, 1]);
        }

        let d = GroupRingElt::from_exponents(cyc(2), 4, &[0, 1]).unwrap();
        assert_eq!(materialize(&d).unwrap().rows(), &[vec![0, 1], vec![1, 0]]);

        let z = GroupRingElt::zero(cyc(2), 2);
        assert_eq!(materialize(&z), Err(VerifyError::NonUnimodular(0)));
    }

    #[test]
    fn verify_bh_examples() {
        let d = GroupRingElt::from_exponents(cyc(4), 2, &[0, 0, 0, 1]).unwrap();
        let r = verify_bh(&materialize(&d).unwrap(), VerifyOptions::default());
        assert!(r.is_bh && r.is_invariant);

        let ones = BhMatrix::new(2, cyc(2), vec![vec![0, 0], vec![0, 0]]).unwrap();
        let r = verify_bh(&ones, VerifyOptions::default());
        assert!(!r.is_bh);
        assert_eq!(r.first_failure, Some(Failure::RowPair(0, 1)));

        let single = BhMatrix::new(5, cyc(1), vec![vec![0]]).unwrap();
        assert!(verify_bh(&single, VerifyOptions::default()).is_bh);
    }

    #[test]
    fn full_mode_counts_all_pairs() {
        let zeros = BhMatrix::new(2, cyc(3), vec![vec![0; 3]; 3]).unwrap();
        let r = verify_bh(&zeros, VerifyOptions { full: true });
        assert_eq!(r.failing_pairs, 3);
        assert_eq!(r.first_failure, Some(Failure::RowPair(0, 1)));
    }

    #[test]
    fn invariance_detects_violation() {
        let d = GroupRingElt::from_exponents(cyc(4), 2, &[0, 0, 0, 1]).unwrap();
        let mut m = materialize(&d).unwrap();
        m.set_entry(2, 1, 1);
        let r = verify_bh(&m, VerifyOptions::default());
        assert!(!r.is_invariant);
        assert_eq!(m.to_group_ring(), Err(VerifyError::NotInvariant));
    }

    #[test]
    fn verify_group_ring_examples() {
        let d = GroupRingElt::from_exponents(cyc(2), 4, &[0, 1]).unwrap();
        assert!(verify_group_ring(&d));
        assert!(verify_group_ring_generic(&d));
        let s = GroupRingElt::group_sum(cyc(2), 2);
        assert!(!verify_group_ring(&s));
        assert!(!verify_group_ring_generic(&s));
        let one = GroupRingElt::scalar(cyc(1), CycInt::one(3));
        assert!(verify_group_ring(&one));
        // non-unimodular input takes the generic path
        let two = GroupRingElt::scalar(cyc(1), CycInt::from_integer(3, 2));
        assert!(!verify_group_ring(&two));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(BhMatrix::new(2, cyc(2), vec![vec![0, 0]]), Err(VerifyError::BadRowCount { .. })));
        assert!(matches!(BhMatrix::new(2, cyc(2), vec![vec![0], vec![0]]), Err(VerifyError::BadShape { .. })));
        assert!(matches!(BhMatrix::new(2, cyc(1), vec![vec![2]]), Err(VerifyError::BadExponent { .. })));
    }

    fn arb_instance() -> impl Strategy<Value = (Arc<FiniteGroup>, usize, Vec<usize>)> {
        let groups = vec![
            vec![2],
            vec![3],
            vec![4],
            vec![2, 2],
            vec![6],
            vec![2, 4],
            vec![3, 3],
        ];
        (prop::sample::select(groups), prop::sample::select(vec![2usize, 3, 4, 6])).prop_flat_map(|(f, h)| {
            let g = Arc::new(make_abelian(&f).unwrap());
            let n = g.order();
            (Just(g), Just(h), prop::collection::vec(0..h, n))
        })
    }

    /// Exponent vectors near known solutions so that both outcomes occur.
    fn near_solutions() -> Vec<(Arc<FiniteGroup>, usize, Vec<usize>)> {
        let mut out = vec![
            (cyc(4), 2, vec![0, 0, 0, 1]),
            (cyc(2), 4, vec![0, 1]),
            (Arc::new(make_abelian(&[2, 2]).unwrap()), 2, vec![0, 0, 0, 1]),
        ];
        let extra: Vec<_> = out
            .iter()
            .flat_map(|(g, h, e)| {
                (0..e.len()).map(move |i| {
                    let mut e2 = e.clone();
                    e2[i] = (e2[i] + 1) % h;
                    (Arc::clone(g), *h, e2)
                })
            })
            .collect();
        out.extend(extra);
        out
    }

    #[test]
    fn verifiers_agree_near_solutions() {
        for (g, h, e) in near_solutions() {
            let d = GroupRingElt::from_exponents(g, h, &e).unwrap();
            let a = verify_bh(&materialize(&d).unwrap(), VerifyOptions::default()).is_bh;
            assert_eq!(a, verify_group_ring(&d), "{e:?}");
            assert_eq!(a, verify_group_ring_generic(&d));
            assert_eq!(Some(a), verify_characters(&d));
        }
    }

    #[test]
    fn nonabelian_verifiers_agree() {
        let d4 = Arc::new(make_semidirect(4, 2, 3).unwrap());
        for seed in 0..64usize {
            let e: Vec<usize> = (0..8).map(|i| (seed >> (i % 6)) & 3).collect();
            let d = GroupRingElt::from_exponents(Arc::clone(&d4), 4, &e).unwrap();
            let a = verify_bh(&materialize(&d).unwrap(), VerifyOptions::default()).is_bh;
            assert_eq!(a, verify_group_ring(&d));
            assert_eq!(a, verify_group_ring_generic(&d));
            assert_eq!(verify_characters(&d), None);
        }
    }

    proptest! {
        #[test]
        fn verifiers_agree((g, h, e) in arb_instance()) {
            let d = GroupRingElt::from_exponents(g, h, &e).unwrap();
            let m = materialize(&d).unwrap();
            let a = verify_bh(&m, VerifyOptions::default());
            prop_assert!(a.is_invariant);
            prop_assert_eq!(a.is_bh, verify_group_ring(&d));
            prop_assert_eq!(a.is_bh, verify_group_ring_generic(&d));
            prop_assert_eq!(Some(a.is_bh), verify_characters(&d));
            prop_assert_eq!(m.to_group_ring().unwrap(), d);
        }
    }

    #[test]
    fn materialize_keeps_exponent() {
        let d = GroupRingElt::from_coeffs(cyc(1), vec![CycInt::from_root(RootExp::new(6, 5))]).unwrap();
        assert_eq!(materialize(&d).unwrap().entry(0, 0), 5);
    }
}

//! Vanishing sums and unit sums of roots of unity.
//!
//! A sum of `L` roots of unity of order `h` can vanish only if `L` lies in
//! the numerical semigroup generated by the primes dividing `h`; conversely,
//! concatenating full prime cycles `{ζ_h^{j·h/p} : 0 ≤ j < p}` realises every
//! such `L`. Witnesses built here use only those cycles and are always
//! re-checked with exact arithmetic before they are handed out.

use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{coeffs_vanish_i64, CycInt, RootExp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("{length} is not a sum of the primes {primes:?} dividing {order}; no vanishing sum exists")]
    NoDecomposition { length: usize, order: usize, primes: Vec<usize> },
    #[error("no sum of {length} roots of order {order} equal to zeta^{target} was found")]
    NoSolution { length: usize, order: usize, target: usize },
    #[error("a root of order {target} is not an {order}-th root of unity")]
    TargetOrder { target: usize, order: usize },
    #[error("length must be positive")]
    EmptySum,
}

/// Prime divisors of `n` in increasing order.
pub fn prime_divisors(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// `target = Σ multipliers[i] · generators[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupCert {
    pub target: usize,
    pub generators: Vec<usize>,
    pub multipliers: Vec<usize>,
}

impl SemigroupCert {
    pub fn is_valid(&self) -> bool {
        self.generators.len() == self.multipliers.len()
            && self.generators.iter().zip(&self.multipliers).map(|(g, a)| g * a).sum::<usize>()
                == self.target
    }
}

/// Decide `target ∈ g_1·N + … + g_r·N` by dynamic programming over
/// `0..=target` and return a certificate.
///
/// The backtrack takes the smallest-index generator that still leads to a
/// representable remainder, so the certificate is deterministic.
pub fn semigroup_member(target: usize, generators: &[usize]) -> Option<SemigroupCert> {
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for v in 1..=target {
        reachable[v] = generators.iter().any(|&g| g > 0 && g <= v && reachable[v - g]);
    }
    if !reachable[target] {
        return None;
    }
    let mut multipliers = vec![0; generators.len()];
    let mut v = target;
    while v > 0 {
        let i = generators
            .iter()
            .position(|&g| g > 0 && g <= v && reachable[v - g])
            .expect("reachable value has a predecessor");
        multipliers[i] += 1;
        v -= generators[i];
    }
    Some(SemigroupCert { target, generators: generators.to_vec(), multipliers })
}

/// What a witness sums to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SumTarget {
    Zero,
    Root(usize),
}

/// A list of exponents `e_j` with `Σ ζ_h^{e_j}` equal to the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumWitness {
    pub order: usize,
    pub exps: Vec<usize>,
    pub target: SumTarget,
}

impl SumWitness {
    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = RootExp> + '_ {
        self.exps.iter().map(move |&e| RootExp::new(self.order, e as i64))
    }

    /// Exact check of `Σ ζ^{exps} = target`.
    pub fn verify(&self) -> bool {
        let mut hist = exponent_histogram(self.order, &self.exps);
        if let SumTarget::Root(t) = self.target {
            hist[t % self.order] -= 1;
        }
        coeffs_vanish_i64(&hist)
    }

    /// The sum as a cyclotomic integer.
    pub fn value(&self) -> CycInt {
        CycInt::from_exponents(self.order, self.exps.iter().map(|&e| e as i64))
    }
}

fn exponent_histogram(order: usize, exps: &[usize]) -> Vec<i64> {
    let mut hist = vec![0i64; order];
    for &e in exps {
        hist[e % order] += 1;
    }
    hist
}

/// `L` roots of order `h` with vanishing sum, built from full prime cycles
/// (smaller primes first).
pub fn zero_sum(length: usize, order: usize) -> Result<SumWitness, SumError> {
    if length == 0 {
        return Err(SumError::EmptySum);
    }
    let primes = prime_divisors(order);
    let cert = semigroup_member(length, &primes).ok_or_else(|| SumError::NoDecomposition {
        length,
        order,
        primes: primes.clone(),
    })?;
    let mut exps = Vec::with_capacity(length);
    for (&p, &count) in primes.iter().zip(&cert.multipliers) {
        for _ in 0..count {
            exps.extend((0..p).map(|j| j * (order / p)));
        }
    }
    let w = SumWitness { order, exps, target: SumTarget::Zero };
    assert!(w.verify(), "prime-cycle witness failed exact check");
    Ok(w)
}

/// Upper bound on candidate count for the exhaustive fallback of [`unit_sum`].
pub const UNIT_SUM_SEARCH_CAP: u128 = 10_000_000;

/// `L` roots of order `h` summing to `ζ_h^target`.
///
/// Strategies, in order: the single root itself; the root plus a vanishing
/// sum of length `L-1`; when `6 | h`, the pair `ζ·ζ_6 + ζ·ζ_6^5 = ζ` plus a
/// vanishing sum of length `L-2`; finally an exhaustive search over
/// multisets of exponents for `L ≤ 6`, skipped when `h^L` exceeds
/// [`UNIT_SUM_SEARCH_CAP`].
pub fn unit_sum(length: usize, order: usize, target: RootExp) -> Result<SumWitness, SumError> {
    if length == 0 {
        return Err(SumError::EmptySum);
    }
    let t = target
        .embed(order)
        .map_err(|_| SumError::TargetOrder { target: target.order(), order })?
        .exp();
    let finish = |exps: Vec<usize>| {
        let w = SumWitness { order, exps, target: SumTarget::Root(t) };
        assert!(w.verify(), "unit-sum witness failed exact check");
        w
    };
    if length == 1 {
        return Ok(finish(vec![t]));
    }
    if let Ok(z) = zero_sum(length - 1, order) {
        let mut exps = vec![t];
        exps.extend(z.exps);
        return Ok(finish(exps));
    }
    if order % 6 == 0 {
        let pair = [(t + order / 6) % order, (t + 5 * order / 6) % order];
        if length == 2 {
            return Ok(finish(pair.to_vec()));
        }
        if let Ok(z) = zero_sum(length - 2, order) {
            let mut exps = pair.to_vec();
            exps.extend(z.exps);
            return Ok(finish(exps));
        }
    }
    if length <= 6 && (order as u128).pow(length as u32) <= UNIT_SUM_SEARCH_CAP {
        if let Some(exps) = search_unit_sum(length, order, t) {
            return Ok(finish(exps));
        }
    }
    Err(SumError::NoSolution { length, order, target: t })
}

/// Lexicographically first nondecreasing exponent tuple summing to `ζ^t`.
fn search_unit_sum(length: usize, order: usize, t: usize) -> Option<Vec<usize>> {
    let mut tuple = vec![0usize; length];
    let mut hist = vec![0i64; order];
    loop {
        hist.iter_mut().for_each(|c| *c = 0);
        for &e in &tuple {
            hist[e] += 1;
        }
        hist[t] -= 1;
        if coeffs_vanish_i64(&hist) {
            return Some(tuple);
        }
        // next nondecreasing tuple
        let mut i = length;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if tuple[i] + 1 < order {
                let v = tuple[i] + 1;
                tuple[i..].iter_mut().for_each(|e| *e = v);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force semigroup membership: enumerate all multiplier vectors.
    fn brute_member(target: usize, gens: &[usize]) -> bool {
        fn go(rest: usize, gens: &[usize]) -> bool {
            match gens.split_first() {
                None => rest == 0,
                Some((&g, tail)) => (0..=rest / g).any(|a| go(rest - a * g, tail)),
            }
        }
        go(target, gens)
    }

    #[test]
    fn semigroup_examples() {
        let c = semigroup_member(5, &[2, 3]).unwrap();
        assert_eq!(c.multipliers, vec![1, 1]);
        assert!(c.is_valid());
        assert_eq!(semigroup_member(1, &[2, 3]), None);
        assert_eq!(semigroup_member(3, &[2]), None);
        assert_eq!(semigroup_member(0, &[]).unwrap().multipliers, Vec::<usize>::new());
        assert_eq!(semigroup_member(4, &[]), None);
    }

    #[test]
    fn semigroup_matches_enumeration() {
        let sets: [&[usize]; 7] = [&[2], &[3], &[2, 3], &[2, 5], &[3, 5], &[2, 3, 5], &[5, 7]];
        for gens in sets {
            for l in 0..=30 {
                let got = semigroup_member(l, gens);
                assert_eq!(got.is_some(), brute_member(l, gens), "L={l} gens={gens:?}");
                if let Some(c) = got {
                    assert!(c.is_valid());
                }
            }
        }
    }

    #[test]
    fn two_prime_bound() {
        let primes = [2usize, 3, 5, 7, 11];
        for (i, &p1) in primes.iter().enumerate() {
            for &p2 in &primes[i + 1..] {
                for l in (p1 - 1) * (p2 - 1)..=50 {
                    assert!(semigroup_member(l, &[p1, p2]).is_some(), "{l} in <{p1},{p2}>");
                }
            }
        }
    }

    #[test]
    fn zero_sum_examples() {
        assert_eq!(zero_sum(2, 2).unwrap().exps, vec![0, 1]);
        assert_eq!(zero_sum(5, 6).unwrap().exps, vec![0, 3, 0, 2, 4]);
        assert!(matches!(zero_sum(3, 4), Err(SumError::NoDecomposition { .. })));
        assert!(matches!(zero_sum(1, 1), Err(SumError::NoDecomposition { .. })));
        assert_eq!(zero_sum(0, 6), Err(SumError::EmptySum));
    }

    #[test]
    fn zero_sum_iff_semigroup() {
        for h in [2usize, 3, 4, 6, 10, 12, 30] {
            for l in 1..=30 {
                let member = semigroup_member(l, &prime_divisors(h)).is_some();
                match zero_sum(l, h) {
                    Ok(w) => {
                        assert!(member);
                        assert_eq!(w.len(), l);
                        assert!(w.value().is_zero());
                    }
                    Err(_) => assert!(!member, "L={l} h={h}"),
                }
            }
        }
    }

    #[test]
    fn unit_sum_examples() {
        assert_eq!(unit_sum(1, 12, RootExp::new(12, 5)).unwrap().exps, vec![5]);
        let w = unit_sum(2, 6, RootExp::new(6, 0)).unwrap();
        assert_eq!(w.exps, vec![1, 5]);
        assert!(w.value().equals_integer(1));
        assert_eq!(unit_sum(4, 6, RootExp::new(6, 0)).unwrap().exps, vec![0, 0, 2, 4]);
    }

    #[test]
    fn unit_sum_search_and_failure() {
        // ζ_10 + ζ_10^9 - ... : found by search; checked exactly regardless of which.
        let w = unit_sum(4, 10, RootExp::new(10, 0)).unwrap();
        assert!(w.value().equals_integer(1));
        assert_eq!(w.len(), 4);
        // two square roots of unity never sum to ±1
        assert!(matches!(unit_sum(2, 2, RootExp::new(2, 0)), Err(SumError::NoSolution { .. })));
        assert!(matches!(unit_sum(2, 4, RootExp::new(4, 1)), Err(SumError::NoSolution { .. })));
    }

    #[test]
    fn unit_sum_witnesses_are_exact() {
        for h in [2usize, 3, 4, 5, 6, 10, 12] {
            for l in 1..=8 {
                for t in 0..h {
                    if let Ok(w) = unit_sum(l, h, RootExp::new(h, t as i64)) {
                        assert_eq!(w.len(), l);
                        let diff = w.value().sub(&CycInt::from_root(RootExp::new(h, t as i64))).unwrap();
                        assert!(diff.is_zero(), "L={l} h={h} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn unit_sum_always_succeeds_when_six_divides_order() {
        for h in [6usize, 12, 18, 30] {
            for l in 1..=30 {
                assert!(unit_sum(l, h, RootExp::new(h, 1)).is_ok(), "L={l} h={h}");
            }
        }
    }

    #[test]
    fn prime_divisor_lists() {
        assert_eq!(prime_divisors(1), Vec::<usize>::new());
        assert_eq!(prime_divisors(12), vec![2, 3]);
        assert_eq!(prime_divisors(30), vec![2, 3, 5]);
        assert_eq!(prime_divisors(49), vec![7]);
    }
}

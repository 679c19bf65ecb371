//! Quadratic building blocks over a cyclic group and their assembly over
//! the cosets of a normal cyclic subgroup.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use super::ConstructionError;
use crate::cyclotomic::{coeffs_vanish_i64, CycInt, RootExp};
use crate::group::{coset_reps, is_normal, normal_cyclic_subgroups, FiniteGroup};
use crate::group_ring::GroupRingElt;
use crate::verify::verify_group_ring;

pub fn nu2(n: usize) -> usize {
    n.trailing_zeros() as usize
}

/// `h^2 ≡ 0 (mod n)` and `(ν₂(n), ν₂(h)) ≠ (1, 1)`.
pub fn satisfies_star(n: usize, h: usize) -> bool {
    n > 0 && h > 0 && (h as u128 * h as u128) % n as u128 == 0 && !(nu2(n) == 1 && nu2(h) == 1)
}

/// The least `h` satisfying [`satisfies_star`]. `h = 2n` always does.
pub fn min_h(n: usize) -> usize {
    assert!(n > 0, "group order must be positive");
    (1..=2 * n).find(|&h| satisfies_star(n, h)).expect("2n satisfies the condition")
}

/// `k = n/h` if `ν₂(n) ≠ 1`, else `2n/h`; `None` unless this is a positive
/// divisor of `n`.
pub fn block_count(n: usize, h: usize) -> Option<usize> {
    let num = if nu2(n) == 1 { 2 * n } else { n };
    (h > 0 && num % h == 0 && n % (num / h) == 0).then(|| num / h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlockCase {
    /// `ν₂(n)` even: exponents `j²k + mij`, `j < h`.
    EvenVal,
    /// `ν₂(n)` odd and at least 3: exponents `j²k/2 + mij`, `j < h`.
    OddValGe3,
    /// `ν₂(n) = 1`: exponents `j²k + 2mij`, `j < h/2`.
    Val1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockParams {
    pub n: usize,
    pub h: usize,
    pub k: usize,
    pub case: BlockCase,
    /// Odd cofactor: `h/k`, `h/(2k)` or `h/(4k)` by case.
    pub l: usize,
    pub m: usize,
}

impl BlockParams {
    /// Parameters for `h = min_h(n)`.
    pub fn new(n: usize, m: usize) -> Result<Self, ConstructionError> {
        if n == 0 {
            return Err(ConstructionError::InvalidParams("group order must be positive".into()));
        }
        if m == 0 || m.gcd(&n) != 1 {
            return Err(ConstructionError::InvalidParams(format!("multiplier m={m} must be coprime to n={n}")));
        }
        let h = min_h(n);
        let k = block_count(n, h).ok_or(ConstructionError::BadH { n, h })?;
        let v = nu2(n);
        let (case, l) = if v == 1 {
            (BlockCase::Val1, h / (4 * k))
        } else if v % 2 == 0 {
            (BlockCase::EvenVal, h / k)
        } else {
            (BlockCase::OddValGe3, h / (2 * k))
        };
        let params = BlockParams { n, h, k, case, l, m };
        let consistent = match case {
            BlockCase::EvenVal => l * k == h,
            BlockCase::OddValGe3 => k % 2 == 0 && 2 * l * k == h,
            BlockCase::Val1 => 4 * l * k == h,
        };
        if !consistent || l % 2 == 0 {
            return Err(ConstructionError::InvalidParams(format!("inconsistent block parameters {params:?}")));
        }
        Ok(params)
    }

    /// Order `n/k` of the cyclic group carrying the blocks.
    pub fn cyclic_order(&self) -> usize {
        self.n / self.k
    }
}

/// `exps[i][j]`: exponent over `ζ_h` of the coefficient of `g^j` in `D_i`.
pub fn block_exponents(p: &BlockParams) -> Vec<Vec<usize>> {
    let (h, k, m) = (p.h as u128, p.k as u128, p.m as u128);
    (0..p.k as u128)
        .map(|i| {
            (0..p.cyclic_order() as u128)
                .map(|j| {
                    let e = match p.case {
                        BlockCase::EvenVal => j * j * k + m * i * j,
                        BlockCase::OddValGe3 => j * j * (k / 2) + m * i * j,
                        BlockCase::Val1 => j * j * k + 2 * m * i * j,
                    };
                    (e % h) as usize
                })
                .collect()
        })
        .collect()
}

/// `D_0, …, D_{k-1}` over the cyclic group `group = ⟨generator⟩` of order
/// `n/k`. Checks `D_iD_j^{(-1)} = 0` for `i ≠ j` and `Σ D_iD_i^{(-1)} = n`.
pub fn build_blocks(
    params: &BlockParams,
    group: Arc<FiniteGroup>,
    generator: usize,
) -> Result<Vec<GroupRingElt>, ConstructionError> {
    let c = params.cyclic_order();
    if group.order() != c || generator >= c || group.cyclic_subgroup(generator).len() != c {
        return Err(ConstructionError::InvalidParams(format!(
            "blocks need a cyclic group of order {c} and a generator of it"
        )));
    }
    let powers = group.cyclic_subgroup(generator);
    let blocks: Vec<GroupRingElt> = block_exponents(params)
        .iter()
        .map(|row| {
            let mut coeffs = vec![CycInt::zero(params.h); c];
            for (j, &e) in row.iter().enumerate() {
                coeffs[powers[j]] = CycInt::from_root(RootExp::new(params.h, e as i64));
            }
            GroupRingElt::from_coeffs(Arc::clone(&group), coeffs)
        })
        .collect::<Result<_, _>>()?;
    let duals: Vec<GroupRingElt> = blocks.iter().map(GroupRingElt::conj_inv).collect();
    let mut diag = GroupRingElt::zero(Arc::clone(&group), params.h);
    for (i, bi) in blocks.iter().enumerate() {
        for (j, dj) in duals.iter().enumerate() {
            let prod = bi.mul(dj)?;
            if i == j {
                diag = diag.add(&prod)?;
            } else if !prod.equals_scalar(0) {
                return Err(ConstructionError::VerificationFailed);
            }
        }
    }
    if !diag.equals_scalar(params.n as i64) {
        return Err(ConstructionError::VerificationFailed);
    }
    Ok(blocks)
}

/// The first normal cyclic subgroup of the given order, by generator.
pub fn find_normal_cyclic(group: &FiniteGroup, order: usize) -> Result<usize, ConstructionError> {
    let subs = normal_cyclic_subgroups(group);
    if let Some(s) = subs.iter().find(|s| s.order() == order) {
        return Ok(s.generator);
    }
    // report the largest available order not exceeding the request
    let found = subs.iter().map(|s| s.order()).filter(|&o| o <= order).max().unwrap_or(1);
    Err(ConstructionError::WrongSubgroupOrder { expected: order, found })
}

/// [`construct_group_bh`] with the subgroup chosen by [`find_normal_cyclic`].
pub fn construct_group_bh_auto(
    group: Arc<FiniteGroup>,
    h: usize,
    m: usize,
) -> Result<GroupRingElt, ConstructionError> {
    let n = group.order();
    let k = check_h(n, h)?;
    let generator = find_normal_cyclic(&group, n / k)?;
    construct_group_bh(group, generator, h, m)
}

fn check_h(n: usize, h: usize) -> Result<usize, ConstructionError> {
    if !satisfies_star(n, h) || h % min_h(n) != 0 {
        return Err(ConstructionError::BadH { n, h });
    }
    block_count(n, h).ok_or(ConstructionError::BadH { n, h })
}

/// `D = Σ_i D_i x_i` over right cosets `N x_i` of `N = ⟨generator⟩`, where
/// `N` must be normal of order `n/k`. Blocks are built at `h₀ = min_h(n)` on
/// the subgroup of `N` of order `n/k₀` and their exponents scaled by `h/h₀`.
pub fn construct_group_bh(
    group: Arc<FiniteGroup>,
    generator: usize,
    h: usize,
    m: usize,
) -> Result<GroupRingElt, ConstructionError> {
    let n = group.order();
    if generator >= n {
        return Err(ConstructionError::InvalidParams(format!("element {generator} is not in the group")));
    }
    let k = check_h(n, h)?;
    let sub = group.cyclic_subgroup(generator);
    if sub.len() != n / k {
        return Err(ConstructionError::WrongSubgroupOrder { expected: n / k, found: sub.len() });
    }
    if !is_normal(&group, &sub) {
        return Err(ConstructionError::NotNormal);
    }
    let params = BlockParams::new(n, m)?;
    let scale = h / params.h;
    let small = group.pow(generator, sub.len() / params.cyclic_order());
    let small_sub = group.cyclic_subgroup(small);
    let reps = coset_reps(&group, &small_sub)?;
    debug_assert_eq!(reps.len(), params.k);
    let exps = block_exponents(&params);
    let order = assign_blocks(&group, params.h, &small_sub, &exps, &reps).ok_or(ConstructionError::VerificationFailed)?;
    let mut coeffs = vec![CycInt::zero(h); n];
    for (&i, &x) in order.iter().zip(&reps) {
        for (j, &e) in exps[i].iter().enumerate() {
            coeffs[group.mul(small_sub[j], x)] = CycInt::from_root(RootExp::new(h, (e * scale) as i64));
        }
    }
    let d = GroupRingElt::from_coeffs(group, coeffs)?;
    if !verify_group_ring(&d) {
        return Err(ConstructionError::VerificationFailed);
    }
    Ok(d)
}

/// `(D_i x)(D_j y)^{(-1)} = 0`, by exponent histograms per product element.
fn cross_vanishes(group: &FiniteGroup, h: usize, sub: &[usize], a: (&[usize], usize), b: (&[usize], usize)) -> bool {
    let mut hist: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for (u, &ea) in sub.iter().zip(a.0) {
        let gu = group.mul(*u, a.1);
        for (v, &eb) in sub.iter().zip(b.0) {
            let gv = group.inv(group.mul(*v, b.1));
            hist.entry(group.mul(gu, gv)).or_insert_with(|| vec![0; h])[(ea + h - eb) % h] += 1;
        }
    }
    hist.values().all(|c| coeffs_vanish_i64(c))
}

/// Block index for each coset representative. Moving `x_i x_j^{-1}` past
/// `D_i` conjugates the block, which keeps the cross terms zero only when
/// conjugation fixes each block's character support. The identity order is
/// tried first; otherwise a backtracking search looks for an order with all
/// cross terms `(D_i x_c)(D_j x_{c'})^{(-1)}` zero.
fn assign_blocks(
    group: &FiniteGroup,
    h: usize,
    sub: &[usize],
    exps: &[Vec<usize>],
    reps: &[usize],
) -> Option<Vec<usize>> {
    fn extend(
        ctx: &(&FiniteGroup, usize, &[usize], &[Vec<usize>], &[usize]),
        order: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let (group, h, sub, exps, reps) = *ctx;
        let c = order.len();
        if c == reps.len() {
            return true;
        }
        for i in 0..exps.len() {
            if used[i] {
                continue;
            }
            let fits = order
                .iter()
                .enumerate()
                .all(|(c2, &j)| cross_vanishes(group, h, sub, (&exps[i], reps[c]), (&exps[j], reps[c2])));
            if fits {
                used[i] = true;
                order.push(i);
                if extend(ctx, order, used) {
                    return true;
                }
                order.pop();
                used[i] = false;
            }
        }
        false
    }
    let mut order = Vec::with_capacity(reps.len());
    let mut used = vec![false; exps.len()];
    extend(&(group, h, sub, exps, reps), &mut order, &mut used).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{characters, make_cyclic, make_from_table, make_semidirect};
    use crate::group_ring::apply_char;
    use crate::verify::{materialize, verify_bh, verify_group_ring_generic, VerifyOptions};

    #[test]
    fn min_h_examples() {
        assert_eq!(min_h(4), 2);
        assert_eq!(min_h(2), 4);
        assert_eq!(min_h(8), 4);
        assert_eq!(min_h(1), 1);
        assert_eq!(min_h(12), 6);
        assert_eq!(min_h(6), 12);
    }

    #[test]
    fn min_h_against_definition() {
        for n in 1..=200usize {
            let h = min_h(n);
            assert!(h * h % n == 0 && !(nu2(n) == 1 && nu2(h) == 1));
            for smaller in 1..h {
                assert!(smaller * smaller % n != 0 || (nu2(n) == 1 && nu2(smaller) == 1));
            }
        }
    }

    #[test]
    fn block_params_cases() {
        let p = BlockParams::new(2, 1).unwrap();
        assert_eq!((p.h, p.k, p.case, p.l), (4, 1, BlockCase::Val1, 1));
        let p = BlockParams::new(4, 1).unwrap();
        assert_eq!((p.h, p.k, p.case, p.l), (2, 2, BlockCase::EvenVal, 1));
        let p = BlockParams::new(8, 1).unwrap();
        assert_eq!((p.h, p.k, p.case, p.l), (4, 2, BlockCase::OddValGe3, 1));
        assert!(matches!(BlockParams::new(8, 2), Err(ConstructionError::InvalidParams(_))));
    }

    fn blocks_for(n: usize, m: usize) -> (BlockParams, Vec<GroupRingElt>) {
        let p = BlockParams::new(n, m).unwrap();
        let g = Arc::new(make_cyclic(p.cyclic_order()).unwrap());
        let b = build_blocks(&p, g, 1 % p.cyclic_order()).unwrap();
        (p, b)
    }

    #[test]
    fn build_blocks_examples() {
        let (_, b) = blocks_for(2, 1);
        assert_eq!(b[0].unimodular_exponents().unwrap(), vec![0, 1]);
        let (_, b) = blocks_for(4, 1);
        assert_eq!(b[0].unimodular_exponents().unwrap(), vec![0, 0]);
        assert_eq!(b[1].unimodular_exponents().unwrap(), vec![0, 1]);
        let (_, b) = blocks_for(8, 1);
        assert_eq!(b[0].unimodular_exponents().unwrap(), vec![0, 1, 0, 1]);
        assert!(b[0].mul(&b[0].conj_inv()).unwrap().add(&b[1].mul(&b[1].conj_inv()).unwrap()).unwrap().equals_scalar(8));
    }

    #[test]
    fn blocks_character_oracle() {
        for n in 1..=64usize {
            for m in [1usize, 5, 7] {
                if m.gcd(&n) != 1 {
                    continue;
                }
                let (p, blocks) = blocks_for(n, m);
                let table = characters(blocks[0].group()).unwrap();
                for t in 0..table.len() {
                    let values: Vec<_> = blocks.iter().map(|b| apply_char(&table, t, b).unwrap()).collect();
                    let nonzero: Vec<_> = values.iter().filter(|v| !v.is_zero()).collect();
                    assert_eq!(nonzero.len(), 1, "n={n} m={m} t={t}");
                    assert!(nonzero[0].norm_sq().equals_integer(n as i64), "n={n} t={t}");
                }
                assert_eq!(blocks.len(), p.k);
            }
        }
    }

    #[test]
    fn construct_z4() {
        let g = Arc::new(make_cyclic(4).unwrap());
        let d = construct_group_bh(Arc::clone(&g), 2, 2, 1).unwrap();
        let signs: Vec<usize> = d.unimodular_exponents().unwrap();
        assert_eq!(signs, vec![0, 0, 0, 1]);
        assert!(verify_bh(&materialize(&d).unwrap(), VerifyOptions::default()).is_bh);
    }

    #[test]
    fn construct_dihedral_and_larger_h() {
        let d4 = Arc::new(make_semidirect(4, 2, 3).unwrap());
        let d = construct_group_bh_auto(Arc::clone(&d4), 4, 1).unwrap();
        assert!(verify_group_ring_generic(&d));
        // h = 8 needs a normal Z_8
        assert!(matches!(
            construct_group_bh_auto(Arc::clone(&d4), 8, 1),
            Err(ConstructionError::WrongSubgroupOrder { expected: 8, .. })
        ));
        let z8 = Arc::new(make_cyclic(8).unwrap());
        let d = construct_group_bh_auto(z8, 8, 3).unwrap();
        assert!(verify_group_ring_generic(&d));
        let z12 = Arc::new(make_cyclic(12).unwrap());
        assert!(verify_group_ring_generic(&construct_group_bh_auto(z12, 12, 5).unwrap()));
    }

    #[test]
    fn construct_s3_rejected() {
        let s3 = Arc::new(make_semidirect(3, 2, 2).unwrap());
        assert_eq!(
            construct_group_bh_auto(Arc::clone(&s3), 12, 1),
            Err(ConstructionError::WrongSubgroupOrder { expected: 6, found: 3 })
        );
        assert!(matches!(construct_group_bh_auto(s3, 6, 1), Err(ConstructionError::BadH { .. })));
    }

    #[test]
    fn construct_checks_subgroup() {
        let d4 = Arc::new(make_semidirect(4, 2, 3).unwrap());
        // element 4 = (0,1) is a reflection of order 2
        assert!(matches!(
            construct_group_bh(Arc::clone(&d4), 4, 4, 1),
            Err(ConstructionError::WrongSubgroupOrder { expected: 4, found: 2 })
        ));
        let s3 = make_semidirect(3, 2, 2).unwrap();
        let table: Vec<Vec<usize>> = s3.table();
        let s3t = Arc::new(make_from_table(&table, None).unwrap());
        // h=4 for n=6 fails the root-order condition before subgroups are examined
        assert!(matches!(construct_group_bh(s3t, 3, 4, 1), Err(ConstructionError::BadH { .. })));
    }

    #[test]
    fn nonnormal_subgroup_rejected() {
        // Z_4 ⋊ Z_4 with t=3 has order 16, h=4, k=4 needs |N|=4; a
        // non-normal cyclic subgroup of order 4 exists: ⟨(0,1)⟩.
        let g = Arc::new(make_semidirect(4, 4, 3).unwrap());
        let gen = 4; // index j·m + i with (i,j) = (0,1)
        assert_eq!(g.element_order(gen), 4);
        assert_eq!(construct_group_bh(Arc::clone(&g), gen, 4, 1), Err(ConstructionError::NotNormal));
        assert!(verify_group_ring_generic(&construct_group_bh(g, 1, 4, 1).unwrap()));
    }

    #[test]
    fn all_small_semidirects_construct() {
        for (m, k, t) in [(4, 2, 3), (8, 2, 3), (8, 2, 5), (8, 2, 7), (3, 4, 2), (9, 2, 8), (4, 4, 3)] {
            let g = Arc::new(make_semidirect(m, k, t).unwrap());
            let h = min_h(g.order());
            match construct_group_bh_auto(Arc::clone(&g), h, 1) {
                Ok(d) => assert!(verify_group_ring_generic(&d)),
                Err(ConstructionError::WrongSubgroupOrder { .. }) => {}
                Err(e) => panic!("{m},{k},{t}: {e}"),
            }
        }
    }

    #[test]
    fn semidihedral_needs_reordered_blocks() {
        // b acts on N = ⟨a²⟩ by cubing, so the identity block order leaves a
        // nonzero cross term between blocks 1 and 3
        let g = make_semidirect(8, 2, 3).unwrap();
        let params = BlockParams::new(16, 1).unwrap();
        let sub = g.cyclic_subgroup(2);
        let reps = coset_reps(&g, &sub).unwrap();
        let exps = block_exponents(&params);
        let identity_ok = (0..4).all(|c| {
            (0..4).all(|c2| c == c2 || cross_vanishes(&g, params.h, &sub, (&exps[c], reps[c]), (&exps[c2], reps[c2])))
        });
        assert!(!identity_ok);
        let order = assign_blocks(&g, params.h, &sub, &exps, &reps).unwrap();
        assert_ne!(order, vec![0, 1, 2, 3]);
        let d = construct_group_bh(Arc::new(g), 2, 4, 1).unwrap();
        assert!(verify_group_ring_generic(&d));
    }

    #[test]
    fn identity_order_kept_when_blocks_commute() {
        let d4 = make_semidirect(4, 2, 3).unwrap();
        let params = BlockParams::new(8, 1).unwrap();
        let sub = d4.cyclic_subgroup(1);
        let reps = coset_reps(&d4, &sub).unwrap();
        assert_eq!(assign_blocks(&d4, params.h, &sub, &block_exponents(&params), &reps), Some(vec![0, 1]));
    }
}

//! `D = Σ_{r∈R} η_r I_r + Σ_{s∈I} μ_s J_s` over the lines
//! `I_r = {(x, xr)}` and `J_s = {(xs, x)}` of `R × R`.
//!
//! Coset sums are indexed by level: `δ^{(i)}_u` is the sum of `η` over
//! `u + I^i` (`u ∈ R_i`, `1 ≤ i ≤ n-1`) and `γ^{(j)}_v` the sum of `μ` over
//! `v + I^{j+1}` (`v ∈ πR_j`, `0 ≤ j ≤ n-1`, with `γ^{(n-1)}_v = μ_v`). A
//! single family `δ_u` shared across levels would force the sums over the
//! non-representative cosets at each split to vanish, which is infeasible
//! already for `Z_4` and forces nothing the construction needs.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::ConstructionError;
use crate::cyclotomic::{CycInt, RootExp};
use crate::group_ring::GroupRingElt;
use crate::ring::{ChainRing, RingElt};
use crate::vanishing::unit_sum;
use crate::verify::verify_group_ring;

/// The lines as lists of pair indices ([`ChainRing::pair_index`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineFamily {
    /// `i_lines[index(r)] = I_r`.
    pub i_lines: Vec<Vec<usize>>,
    /// `(index(s), J_s)` for `s ∈ I`, by index.
    pub j_lines: Vec<(usize, Vec<usize>)>,
}

pub fn line_family(ring: &ChainRing) -> LineFamily {
    let els = ring.elements();
    let i_lines = els.iter().map(|r| els.iter().map(|x| ring.pair_index(x, &ring.mul(x, r))).collect()).collect();
    let j_lines = ring
        .ideal_elements(1)
        .iter()
        .map(|s| (ring.index(s), els.iter().map(|x| ring.pair_index(&ring.mul(x, s), x)).collect()))
        .collect();
    LineFamily { i_lines, j_lines }
}

/// Roots of unity for the line construction; keys are ring indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientScheme {
    pub h: usize,
    pub eta: RootExp,
    /// `η_r` for every `r ∈ R`, by index.
    pub eta_r: Vec<RootExp>,
    /// `μ_s` for `s ∈ I`.
    pub mu_s: BTreeMap<usize, RootExp>,
    /// `delta[i][u] = δ^{(i)}_u`; `delta[0]` is empty.
    pub delta: Vec<BTreeMap<usize, RootExp>>,
    /// `gamma[j][v] = γ^{(j)}_v`; `gamma[n-1]` repeats `μ`.
    pub gamma: Vec<BTreeMap<usize, RootExp>>,
}

fn split(ring: &ChainRing, parent: RootExp, base: &RingElt, step: &[RingElt], h: usize) -> Result<Vec<(usize, RootExp)>, ConstructionError> {
    let w = unit_sum(step.len(), h, parent).map_err(ConstructionError::NoScheme)?;
    Ok(step.iter().zip(w.roots()).map(|(s, root)| (ring.index(&ring.add(base, s)), root)).collect())
}

/// Top-down refinement with [`unit_sum`]: `η = 1` splits into
/// `δ^{(1)}_u` (`u ∈ R_1`) and `γ^{(0)}_0 = Σ_{s∈I} μ_s`; then every node
/// splits into the `p^d` cosets one level down, children of `u` at level `i`
/// being `u + π^i R_1`.
pub fn solve_coefficient_scheme(ring: &ChainRing, h: usize) -> Result<CoefficientScheme, ConstructionError> {
    let n = ring.n();
    if n < 2 {
        return Err(ConstructionError::UnsupportedRing(format!("{} has no proper ideal chain (n = 1)", ring.family())));
    }
    if h == 0 {
        return Err(ConstructionError::InvalidParams("root order must be positive".into()));
    }
    let chain = ring.coset_chain();
    let r1 = chain.level(1);
    let eta = RootExp::one(h);
    let top = unit_sum(r1.len() + 1, h, eta).map_err(ConstructionError::NoScheme)?;
    let roots: Vec<RootExp> = top.roots().collect();

    let mut delta = vec![BTreeMap::new(); n];
    for (u, &root) in r1.iter().zip(&roots) {
        delta[1].insert(ring.index(u), root);
    }
    let mut eta_r = vec![None; ring.size()];
    for i in 1..n {
        let step: Vec<RingElt> = r1.iter().map(|c| ring.mul(&ring.pi_pow(i), c)).collect();
        let nodes: Vec<(usize, RootExp)> = delta[i].iter().map(|(&k, &v)| (k, v)).collect();
        for (u, root) in nodes {
            for (child, value) in split(ring, root, &ring.element(u), &step, h)? {
                if i + 1 < n {
                    delta[i + 1].insert(child, value);
                } else {
                    eta_r[child] = Some(value);
                }
            }
        }
    }

    let mut gamma = vec![BTreeMap::new(); n];
    gamma[0].insert(ring.index(&ring.zero()), roots[r1.len()]);
    for j in 0..n - 1 {
        let step: Vec<RingElt> = r1.iter().map(|c| ring.mul(&ring.pi_pow(j + 1), c)).collect();
        let nodes: Vec<(usize, RootExp)> = gamma[j].iter().map(|(&k, &v)| (k, v)).collect();
        for (v, root) in nodes {
            for (child, value) in split(ring, root, &ring.element(v), &step, h)? {
                gamma[j + 1].insert(child, value);
            }
        }
    }
    let mu_s = gamma[n - 1].clone();
    let eta_r = eta_r.into_iter().map(|e| e.expect("every element is a leaf")).collect();
    let scheme = CoefficientScheme { h, eta, eta_r, mu_s, delta, gamma };
    verify_scheme(ring, &scheme)?;
    Ok(scheme)
}

fn violation(msg: String) -> ConstructionError {
    ConstructionError::SchemeViolation(msg)
}

/// Exact re-check of the three coset-sum families:
/// `Σ_{r∈u+I^i} η_r = δ^{(i)}_u`, `Σ_{s∈v+I^{j+1}} μ_s = γ^{(j)}_v` and
/// `Σ_{u∈R_1} δ^{(1)}_u + Σ_{v∈πR_1} γ^{(1)}_v = η`.
pub fn verify_scheme(ring: &ChainRing, s: &CoefficientScheme) -> Result<(), ConstructionError> {
    let n = ring.n();
    let h = s.h;
    let roots = s.eta_r.iter().chain(s.mu_s.values()).chain(s.delta.iter().chain(&s.gamma).flat_map(|m| m.values()));
    if s.eta.order() != h || roots.clone().any(|r| r.order() != h) {
        return Err(violation(format!("all roots must have order {h}")));
    }
    if s.eta_r.len() != ring.size() || s.delta.len() != n || s.gamma.len() != n {
        return Err(violation("scheme shape does not match the ring".into()));
    }
    let ideal: Vec<RingElt> = ring.ideal_elements(1);
    let ideal_keys: Vec<usize> = ideal.iter().map(|x| ring.index(x)).collect();
    if s.mu_s.keys().copied().collect::<Vec<_>>() != ideal_keys {
        return Err(violation("mu must be indexed by the maximal ideal".into()));
    }
    let chain = ring.coset_chain();
    let els = ring.elements();
    let coset_sum = |members: &mut dyn Iterator<Item = RootExp>| {
        let mut acc = CycInt::zero(h);
        members.for_each(|r| acc.add_root_assign(r));
        acc
    };
    for i in 1..n {
        let reps = chain.level(i);
        if s.delta[i].len() != reps.len() {
            return Err(violation(format!("delta level {i} has the wrong size")));
        }
        for u in reps {
            let want = *s.delta[i]
                .get(&ring.index(u))
                .ok_or_else(|| violation(format!("delta level {i} misses a representative")))?;
            let mut members = els.iter().filter(|r| ring.val_pi(&ring.sub(r, u)) >= i).map(|r| s.eta_r[ring.index(r)]);
            if !coset_sum(&mut members).equals_root(want) {
                return Err(violation(format!("eta sum over a coset of I^{i} is not delta")));
            }
        }
    }
    for j in 0..n {
        let reps: Vec<RingElt> = chain.level(j).iter().map(|u| ring.mul(&ring.pi(), u)).collect();
        if s.gamma[j].len() != reps.len() {
            return Err(violation(format!("gamma level {j} has the wrong size")));
        }
        for v in &reps {
            let want = *s.gamma[j]
                .get(&ring.index(v))
                .ok_or_else(|| violation(format!("gamma level {j} misses a representative")))?;
            let mut members =
                ideal.iter().filter(|x| ring.val_pi(&ring.sub(x, v)) > j).map(|x| s.mu_s[&ring.index(x)]);
            if !coset_sum(&mut members).equals_root(want) {
                return Err(violation(format!("mu sum over a coset of I^{} is not gamma", j + 1)));
            }
        }
    }
    let mut top = CycInt::zero(h);
    s.delta[1].values().for_each(|&r| top.add_root_assign(r));
    for u in chain.level(1) {
        let v = ring.index(&ring.mul(&ring.pi(), u));
        top.add_root_assign(s.gamma[1][&v]);
    }
    if !top.equals_root(s.eta) {
        return Err(violation("delta and gamma over R_1 do not sum to eta".into()));
    }
    Ok(())
}

/// `D = Σ η_r I_r + Σ μ_s J_s`; every coefficient must collapse to a single
/// root, the one at `(0,0)` to `η`.
pub fn construct_line_bh(ring: &ChainRing, scheme: &CoefficientScheme) -> Result<GroupRingElt, ConstructionError> {
    if ring.n() < 2 {
        return Err(ConstructionError::UnsupportedRing(format!("{} has no proper ideal chain (n = 1)", ring.family())));
    }
    if scheme.eta_r.len() != ring.size() || scheme.mu_s.len() != ring.ideal_size(1) {
        return Err(violation("scheme shape does not match the ring".into()));
    }
    let h = scheme.h;
    let lines = line_family(ring);
    let group = Arc::new(ring.pair_group()?);
    let mut coeffs = vec![CycInt::zero(h); group.order()];
    for (line, &eta) in lines.i_lines.iter().zip(&scheme.eta_r) {
        line.iter().for_each(|&g| coeffs[g].add_root_assign(eta));
    }
    for (s, line) in &lines.j_lines {
        let mu = *scheme.mu_s.get(s).ok_or_else(|| violation("mu misses an ideal element".into()))?;
        line.iter().for_each(|&g| coeffs[g].add_root_assign(mu));
    }
    let mut exps = Vec::with_capacity(coeffs.len());
    for (g, c) in coeffs.iter().enumerate() {
        let r = c.as_root().ok_or_else(|| violation(format!("coefficient at pair {g} is not a root of unity")))?;
        exps.push(r.exp());
    }
    if exps[0] != scheme.eta.exp() {
        return Err(violation("coefficient at (0,0) differs from eta".into()));
    }
    let d = GroupRingElt::from_exponents(group, h, &exps)?;
    if !verify_group_ring(&d) {
        return Err(ConstructionError::VerificationFailed);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::coeffs_vanish_i64;
    use crate::verify::{materialize, verify_bh, verify_characters, verify_group_ring_generic, VerifyOptions};
    use std::collections::BTreeSet;

    fn rings() -> Vec<ChainRing> {
        vec![
            ChainRing::galois(2, 2, 1).unwrap(),
            ChainRing::galois(2, 3, 1).unwrap(),
            ChainRing::galois(3, 2, 1).unwrap(),
            ChainRing::galois(2, 2, 2).unwrap(),
            ChainRing::truncated(2, 1, 2).unwrap(),
            ChainRing::truncated(2, 1, 3).unwrap(),
            ChainRing::truncated(3, 1, 2).unwrap(),
            ChainRing::truncated(2, 2, 2).unwrap(),
        ]
    }

    #[test]
    fn lines_are_subgroups_of_size_r() {
        for r in rings() {
            let g = r.pair_group().unwrap();
            let fam = line_family(&r);
            for line in fam.i_lines.iter().chain(fam.j_lines.iter().map(|(_, l)| l)) {
                let set: BTreeSet<usize> = line.iter().copied().collect();
                assert_eq!(set.len(), r.size());
                assert!(set.contains(&0));
                assert!(set.iter().all(|&a| set.iter().all(|&b| set.contains(&g.mul(a, b)))));
            }
        }
    }

    #[test]
    fn line_family_properties() {
        for r in rings() {
            let n = r.n();
            let els = r.elements();
            let fam = line_family(&r);
            let in_i: Vec<BTreeSet<usize>> = fam.i_lines.iter().map(|l| l.iter().copied().collect()).collect();
            let in_j: Vec<(usize, BTreeSet<usize>)> =
                fam.j_lines.iter().map(|(s, l)| (*s, l.iter().copied().collect())).collect();
            for x in &els {
                for y in &els {
                    let g = r.pair_index(x, y);
                    if g == 0 {
                        continue;
                    }
                    let any_i = in_i.iter().any(|s| s.contains(&g));
                    let any_j = in_j.iter().any(|(_, s)| s.contains(&g));
                    assert_eq!(any_i, r.val_pi(x) <= r.val_pi(y));
                    assert_eq!(any_j, r.val_pi(x) > r.val_pi(y));
                }
            }
            for a in &in_i {
                for (_, b) in &in_j {
                    assert_eq!(a.intersection(b).copied().collect::<Vec<_>>(), vec![0]);
                }
            }
            // coincidences: (x, xr) ∈ I_{r'} iff r' ∈ r + I^{n-t}
            for x in &els {
                let t = r.val_pi(x);
                for rr in &els {
                    let g = r.pair_index(x, &r.mul(x, rr));
                    for r2 in &els {
                        let hit = in_i[r.index(r2)].contains(&g);
                        assert_eq!(hit, r.val_pi(&r.sub(r2, rr)) >= n - t.min(n));
                    }
                }
                for (si, _) in &in_j {
                    let s = r.element(*si);
                    let g = r.pair_index(&r.mul(x, &s), x);
                    for (s2, set) in &in_j {
                        let hit = set.contains(&g);
                        assert_eq!(hit, r.val_pi(&r.sub(&r.element(*s2), &s)) >= n - t.min(n));
                    }
                }
            }
        }
    }

    #[test]
    fn line_family_examples() {
        let z4 = ChainRing::galois(2, 2, 1).unwrap();
        let fam = line_family(&z4);
        let two = z4.from_int(2);
        let g = z4.pair_index(&two, &two);
        for rr in z4.elements() {
            let odd = z4.index(&rr) % 2 == 1;
            assert_eq!(fam.i_lines[z4.index(&rr)].contains(&g), odd);
        }
        let i0: BTreeSet<usize> = fam.i_lines[0].iter().copied().collect();
        let j0: BTreeSet<usize> = fam.j_lines[0].1.iter().copied().collect();
        assert_eq!(i0.intersection(&j0).count(), 1);
    }

    /// All leaf assignments for `Z_4`: four `η_r` and two `μ_s`. Feasible iff
    /// every coefficient of `D` is a single root.
    fn brute_force_z4(h: usize) -> bool {
        let z4 = ChainRing::galois(2, 2, 1).unwrap();
        let fam = line_family(&z4);
        let mut leaves = [0usize; 6];
        let mut hist = vec![0i64; h];
        let total = h.pow(6);
        for code in 0..total {
            let mut c = code;
            for l in leaves.iter_mut() {
                *l = c % h;
                c /= h;
            }
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); 16];
            for (r, line) in fam.i_lines.iter().enumerate() {
                line.iter().for_each(|&g| groups[g].push(leaves[r]));
            }
            for (k, (_, line)) in fam.j_lines.iter().enumerate() {
                line.iter().for_each(|&g| groups[g].push(leaves[4 + k]));
            }
            let ok = groups.iter().all(|es| {
                (0..h).any(|t| {
                    hist.iter_mut().for_each(|x| *x = 0);
                    es.iter().for_each(|&e| hist[e] += 1);
                    hist[t] -= 1;
                    coeffs_vanish_i64(&hist)
                })
            });
            if ok {
                return true;
            }
        }
        false
    }

    #[test]
    fn solver_matches_brute_force_on_z4() {
        let z4 = ChainRing::galois(2, 2, 1).unwrap();
        for h in 2..=6 {
            let solved = solve_coefficient_scheme(&z4, h);
            assert_eq!(solved.is_ok(), brute_force_z4(h), "h={h}");
            if let Err(e) = solved {
                assert!(matches!(e, ConstructionError::NoScheme(_)));
            }
        }
    }

    #[test]
    fn h_multiple_of_six_always_works() {
        for r in rings() {
            for h in [6, 12] {
                let s = solve_coefficient_scheme(&r, h).unwrap();
                let d = construct_line_bh(&r, &s).unwrap();
                assert_eq!(d.coeff(0).as_root(), Some(s.eta));
                assert!(verify_group_ring_generic(&d));
            }
        }
    }

    #[test]
    fn z4_and_z9_instances() {
        let z4 = ChainRing::galois(2, 2, 1).unwrap();
        let s = solve_coefficient_scheme(&z4, 6).unwrap();
        assert_eq!((s.eta_r.len(), s.delta[1].len(), s.mu_s.len(), s.gamma[1].len()), (4, 2, 2, 2));
        let d = construct_line_bh(&z4, &s).unwrap();
        assert!(verify_bh(&materialize(&d).unwrap(), VerifyOptions::default()).is_bh);
        assert_eq!(verify_characters(&d), Some(true));
        let z9 = ChainRing::galois(3, 2, 1).unwrap();
        let s = solve_coefficient_scheme(&z9, 6).unwrap();
        let d = construct_line_bh(&z9, &s).unwrap();
        assert_eq!(d.group().order(), 81);
        assert_eq!(verify_characters(&d), Some(true));
    }

    #[test]
    fn tampered_scheme_is_rejected() {
        let z4 = ChainRing::galois(2, 2, 1).unwrap();
        let mut s = solve_coefficient_scheme(&z4, 6).unwrap();
        s.eta_r[1] = s.eta_r[1].mul(&RootExp::new(6, 1)).unwrap();
        assert!(matches!(verify_scheme(&z4, &s), Err(ConstructionError::SchemeViolation(_))));
        assert!(matches!(construct_line_bh(&z4, &s), Err(ConstructionError::SchemeViolation(_))));
    }

    #[test]
    fn fields_unsupported() {
        let f4 = ChainRing::galois(2, 1, 2).unwrap();
        assert!(matches!(solve_coefficient_scheme(&f4, 6), Err(ConstructionError::UnsupportedRing(_))));
    }
}

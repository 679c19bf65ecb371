//! `D = Σ η_i D_i` with `D_i = {(x, y) : φ(x)y ∈ R_i}` for a partition of
//! `R` that meets every coset of `I^{n-1}` evenly.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConstructionError;
use crate::cyclotomic::{CycInt, RootExp};
use crate::group_ring::GroupRingElt;
use crate::ring::{ChainRing, RingElt};
use crate::vanishing::zero_sum;
use crate::verify::verify_group_ring;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    pub t: usize,
    /// `parts[i]` lists `R_i` in index order.
    pub parts: Vec<Vec<RingElt>>,
    /// `part_of[index(x)] = i` iff `x ∈ R_i`.
    pub part_of: Vec<usize>,
}

/// Cosets of `I^{n-1}` in order of their least element, each dealt
/// round-robin into `p^t` parts. With a seed, each coset is shuffled first.
pub fn partition_r(ring: &ChainRing, t: usize, seed: Option<u64>) -> Result<PartitionSpec, ConstructionError> {
    let d = ring.d();
    if t == 0 || t > d {
        return Err(ConstructionError::BadT { t, d });
    }
    let count = ring.p().pow(t as u32);
    let n = ring.n();
    let mut cosets: std::collections::BTreeMap<usize, Vec<RingElt>> = Default::default();
    for x in ring.elements() {
        let key = ring.index(&ring.reduce_mod_ideal(&x, n - 1));
        cosets.entry(key).or_default().push(x);
    }
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut parts = vec![Vec::new(); count];
    let mut part_of = vec![0; ring.size()];
    for (_, mut coset) in cosets {
        if let Some(rng) = rng.as_mut() {
            coset.shuffle(rng);
        }
        for (e, x) in coset.into_iter().enumerate() {
            part_of[ring.index(&x)] = e % count;
            parts[e % count].push(x);
        }
    }
    for part in parts.iter_mut() {
        part.sort_by_key(|x| ring.index(x));
    }
    let spec = PartitionSpec { t, parts, part_of };
    check_partition(ring, &spec)?;
    Ok(spec)
}

/// `|R_i ∩ (a + I^{n-1})| = p^{d-t}` for every part and coset.
fn check_partition(ring: &ChainRing, spec: &PartitionSpec) -> Result<(), ConstructionError> {
    let want = ring.p().pow((ring.d() - spec.t) as u32);
    let n = ring.n();
    for part in &spec.parts {
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for x in part {
            *counts.entry(ring.index(&ring.reduce_mod_ideal(x, n - 1))).or_default() += 1;
        }
        let cosets = ring.size() / ring.ideal_size(n - 1);
        if counts.len() != cosets || counts.values().any(|&c| c != want) {
            return Err(ConstructionError::InvalidParams("partition is not balanced on cosets".into()));
        }
    }
    Ok(())
}

/// A vanishing sum of length `p^t` over `ζ_h`.
pub fn default_partition_etas(ring: &ChainRing, t: usize, h: usize) -> Result<Vec<RootExp>, ConstructionError> {
    let w = zero_sum(ring.p().pow(t as u32), h)?;
    Ok(w.roots().collect())
}

/// `D = Σ η_i D_i` over `R × R` (encoded by [`ChainRing::pair_index`]).
pub fn construct_partition_bh(
    ring: &ChainRing,
    t: usize,
    etas: &[RootExp],
    h: usize,
    seed: Option<u64>,
) -> Result<GroupRingElt, ConstructionError> {
    let spec = partition_r(ring, t, seed)?;
    let count = spec.parts.len();
    if etas.len() != count {
        return Err(ConstructionError::BadEtaSum { expected: count });
    }
    let etas: Vec<RootExp> = etas.iter().map(|e| e.embed(h)).collect::<Result<_, _>>()?;
    let mut total = CycInt::zero(h);
    etas.iter().for_each(|&e| total.add_root_assign(e));
    if !total.is_zero() {
        return Err(ConstructionError::BadEtaSum { expected: count });
    }
    let group = Arc::new(ring.pair_group()?);
    let els = ring.elements();
    let phis: Vec<RingElt> = els.iter().map(|x| ring.phi(x)).collect();
    let mut coeffs = vec![CycInt::zero(h); group.order()];
    for (x, phx) in els.iter().zip(&phis) {
        for y in &els {
            let part = spec.part_of[ring.index(&ring.mul(phx, y))];
            coeffs[ring.pair_index(x, y)] = CycInt::from_root(etas[part]);
        }
    }
    let d = GroupRingElt::from_coeffs(group, coeffs)?;
    if !verify_group_ring(&d) {
        return Err(ConstructionError::VerificationFailed);
    }
    Ok(d)
}

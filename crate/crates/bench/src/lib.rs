//! Fixtures shared by the benchmarks.

use butson_core::constructions::{construct_partition_bh, default_partition_etas};
use butson_core::{ChainRing, GroupRingElt};

/// BH(Z9 x Z9, 3) from the partition construction.
pub fn z9_partition() -> GroupRingElt {
    let ring = ChainRing::galois(3, 2, 1).expect("Z9");
    let etas = default_partition_etas(&ring, 1, 3).expect("etas");
    construct_partition_bh(&ring, 1, &etas, 3, None).expect("construction")
}

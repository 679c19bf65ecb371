//! Exact construction and verification of group-invariant Butson Hadamard
//! matrices.

pub mod arrays;
pub mod constructions;
pub mod cyclotomic;
pub mod format;
pub mod group;
pub mod group_ring;
pub mod ring;
pub mod vanishing;
pub mod verify;

pub use arrays::{to_array, verify_perfect, ArrayError, PerfectArray};
pub use cyclotomic::{CycInt, RootExp};
pub use format::{FormatError, GroupSpec};
pub use group::{FiniteGroup, GroupError, GroupLaw};
pub use group_ring::GroupRingElt;
pub use ring::{ChainRing, RingElt, RingError, RingFamily};
pub use vanishing::{SumError, SumWitness};
pub use verify::{verify_bh, verify_group_ring, BhMatrix, VerifyOptions, VerifyReport};

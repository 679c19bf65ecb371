//! The three constructions. Every constructor verifies `DD^{(-1)} = |G|`
//! exactly before it returns.

mod blocks;
mod lines;
mod partition;

pub use blocks::{
    block_count, block_exponents, build_blocks, construct_group_bh, construct_group_bh_auto, find_normal_cyclic,
    min_h, nu2, satisfies_star, BlockCase, BlockParams,
};
pub use lines::{
    construct_line_bh, line_family, solve_coefficient_scheme, verify_scheme, CoefficientScheme, LineFamily,
};
pub use partition::{construct_partition_bh, default_partition_etas, partition_r, PartitionSpec};

use thiserror::Error;

use crate::cyclotomic::CyclotomicError;
use crate::group::GroupError;
use crate::group_ring::GroupRingError;
use crate::ring::RingError;
use crate::vanishing::SumError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("h={h} does not satisfy h^2 = 0 mod {n} with (v2(h), v2(n)) != (1,1), or is not a multiple of min_h({n})")]
    BadH { n: usize, h: usize },
    #[error("need a normal cyclic subgroup of order {expected}, got order {found}")]
    WrongSubgroupOrder { expected: usize, found: usize },
    #[error("the cyclic subgroup is not normal")]
    NotNormal,
    #[error("t={t} must satisfy 1 <= t <= d={d}")]
    BadT { t: usize, d: usize },
    #[error("partition coefficients must be {expected} roots with vanishing sum")]
    BadEtaSum { expected: usize },
    #[error("no coefficient scheme: {0}")]
    NoScheme(SumError),
    #[error("scheme violation: {0}")]
    SchemeViolation(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("constructed element failed exact verification")]
    VerificationFailed,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
    #[error(transparent)]
    Sum(#[from] SumError),
}

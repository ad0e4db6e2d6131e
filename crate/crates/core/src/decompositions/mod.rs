//! Vandermonde decompositions, moment-based strong Hankel tensors, Riemann
//! rank-one approximations, and an SOS family that is not completely
//! decomposable.

mod moments;
mod noncd;
mod riemann;
mod vandermonde;

pub use moments::{
    gauss_legendre, moments_from_function, GeneratingFunction, MomentSpec, DEFAULT_QUADRATURE_NODES,
    MIN_QUADRATURE_NODES,
};
pub use noncd::{analyze_noncd, cd_obstruction, noncd_family, CdObstruction, NonCdAnalysis, NonCdFamily, NONCD_MAX_K};
pub use riemann::{riemann_rank_one, RankOneApprox};
pub use vandermonde::{
    default_nodes, vandermonde_decompose, VandermondeDecomposition, VandermondeTerm, MAX_RELATIVE_RESIDUAL,
};

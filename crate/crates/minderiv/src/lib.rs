//! Exact computation with polynomial derivation families: degree-bounded
//! kernels and first integrals, minimal linear combinations, and formal
//! straightening of truncated power-series derivations.
//!
//! Everything is exact over the rationals. Results involving a degree bound
//! `D` or a truncation order `N` are certificates relative to that bound,
//! never absolute claims about the full ring.

pub mod deriv;
pub mod error;
pub mod kernel;
mod linalg;
pub mod locus;
pub mod minimal;
pub mod parse;
pub mod poly;
pub mod series;
pub mod straighten;

pub use deriv::{linear_combination, Derivation, DerivationFamily};
pub use error::{Error, Result};
pub use kernel::{first_integrals, kernel_basis, kernels_equal_up_to_degree, FirstIntegralBasis, KernelReport};
pub use locus::{
    classify_combination, enumerate_bad_lines, sample_minimal_locus, LocusPoint, LocusSample,
    SlopeClassification,
};
pub use minimal::{
    delta_m, delta_m_kernel_is_inert, delta_m_rigidity, find_minimal_m, fold_family,
    power_combination, MinimalityCertificate, RigidityOutcome,
};
pub use parse::{parse_polynomial, parse_rational};
pub use poly::{int, rat, Monomial, Polynomial, Rational, Ring, WeightVector};
pub use series::{invert_param_system, substitute, ParamSystem, SeriesDerivation, TruncSeries};
pub use straighten::{canonical_pair, partial_k_operators, straighten, StraighteningResult};

//! Spectral toolkit for periodic Jacobi operators.
//!
//! A periodic Jacobi operator is described by one period of off-diagonal
//! entries `a(1..q) > 0` and diagonal entries `b(1..q)`.  This crate
//! computes, exactly where a closed form exists and by certified bisection
//! elsewhere:
//!
//! * transfer matrices, the discriminant `Delta(E)` (trace of the
//!   one-period transfer product) and its expanded polynomial form, and
//!   the determinant identity tying it to the periodized corner matrix
//!   ([`transfer`]);
//! * the band decomposition `{ |Delta| <= 2 }` of the spectrum, with
//!   closed-gap detection and per-band length caps that telescope to the
//!   global `4 A_q` bound ([`bands`]);
//! * the integrated density of states, both in closed form through the
//!   discriminant and by eigenvalue counting on long truncations, plus
//!   the pointwise density product that integrates to the band caps
//!   ([`ids`], [`tridiag`]);
//! * upper bounds on the absolutely continuous measure in an energy
//!   window from finitely many coefficients, and the capacity-type lower
//!   bound attained by interval Chebyshev polynomials ([`bounds`]);
//! * monic extremal polynomials, discriminant nesting under period
//!   repetition, and node-motion derivatives of monic interpolants
//!   through alternation systems ([`extremal`]);
//! * seeded verification suites binding all of the above together
//!   ([`suites`]).
//!
//! Everything is deterministic: randomized checks derive from explicit
//! `u64` seeds through a splittable counter generator ([`rng`]).

// Guards written as `!(x > 0.0)` are deliberate: unlike `x <= 0.0`, the
// negated comparison is also true for NaN, which every such check must
// reject (or, in the suites, count as a failure).
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bands;
pub mod bounds;
pub mod error;
pub mod extremal;
pub mod ids;
pub mod mat2;
pub mod model;
pub mod poly;
pub mod rng;
pub mod suites;
pub mod transfer;
pub mod tridiag;

pub use bands::{
    ac_measure, band_length_bounds, band_structure, verify_band_lengths, Band, BandLengthReport,
    BandStructure,
};
pub use bounds::{
    ac_bound, geometric_mean, global_bound, polya_lower_bound, two_value_closed_form,
    verify_polya_ac, BoundReport, PolyaAcReport,
};
pub use error::{Error, Result};
pub use extremal::{
    chebyshev_t, interp_t, monic_extremal_on_interval, node_motion_rhs, verify_nesting,
    NestingReport, NodeSystem,
};
pub use ids::{
    deift_simon_lhs, ids_exact, ids_profile, ids_truncation, verify_deift_simon, DeiftSimonReport,
    IdsEvaluator, IdsMethod, IdsProfile,
};
pub use model::{
    make_constant, make_free, make_two_value, unroll, FinitePrefix, OperatorSpec, TwoValueSpec,
    Window,
};
pub use rng::SplitMix64;
pub use transfer::{
    corner_det, discriminant_eval, discriminant_poly, lyapunov_estimate, one_step, transfer_matrix,
    CornerMatrix,
};
pub use tridiag::{eigenvalues, k_n, sturm_count, Tridiag};

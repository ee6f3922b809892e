//! Controllability analysis for dipole-coupled N-level quantum systems.
//!
//! A system is described by its energy levels `E_1 <= ... <= E_N` and the
//! transition dipole moments `d_n` coupling adjacent levels. The library
//! answers whether the pair of generators `iH0`, `iH1` spans all of `u(N)`
//! under commutation, by two independent routes:
//!
//! * [`closure`] computes the dynamical Lie algebra numerically by
//!   breadth-first commutator closure with incremental rank tracking.
//! * [`criteria`] applies fast sufficient and negative rules (spacing and
//!   dipole patterns) and reports which rule fired.
//!
//! [`classifier4`] gives the exhaustive four-level classification, and
//! [`models`] builds the standard example systems (Morse, particle in a box,
//! hydrogen-like atom, truncated harmonic oscillator, coupled oscillators).

pub mod classifier4;
pub mod closure;
pub mod criteria;
pub mod io;
pub mod models;
pub mod system;

pub use classifier4::{classify4, reference_cases, sp2_basis, CaseTag, FourLevelCase, ReferenceCase};
pub use closure::{closure, commutator, span_contains, AlgebraId, LieClosureResult};
pub use criteria::{full_verdict, Conclusion, Rule, Verdict};
pub use system::{
    basis_element, build_h0, build_h1, BasisKind, DerivedParams, SkewHermMatrix, SpecError,
    SystemSpec,
};

/// Default relative tolerance for scalar equality tests on spacings,
/// dipoles and the derived `v_n` parameters.
pub const DEFAULT_EPS_PARAM: f64 = 1e-9;

/// Default residual threshold for rank decisions during commutator closure.
pub const DEFAULT_EPS_RANK: f64 = 1e-8;

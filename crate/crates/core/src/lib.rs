//! Numerical machinery for certified density bounds on distance-avoiding sets.
//!
//! A subset of a compact rank-one symmetric space is *distance avoiding* if
//! there is a sequence of distances `d_1 > d_2 > … > d_N` none of which occurs
//! between two of its points.  On spaces of real dimension at least two, a
//! carefully spaced sequence forces the density of any such measurable set
//! below `2^-N`; in dimension one no bound below certain constants is
//! possible.  This crate implements both halves constructively:
//!
//! * [`jacobi`] — normalized Jacobi polynomials `P_k^{(α,β)}` with
//!   `P_k(1) = 1`: point evaluation, derivatives, largest zeros, infima over
//!   degrees, and sup-norms on intervals.
//! * [`bessel`] — Bessel functions `J_ν`, their first positive zeros, the
//!   limiting profile `Ω_α(t) = Γ(α+1)(2/t)^α J_α(t)`, and the global bound
//!   `min Ω_α ≥ -0.45` used by the spacing lemma.
//! * [`spaces`] — the catalog of compact rank-one symmetric spaces and their
//!   Jacobi parameters, plus exact metrics for the one-dimensional cases.
//! * [`lp`] — truncated linear programs whose dual feasible points certify
//!   density bounds, a dense simplex solver, and dual-feasibility
//!   verification to high degree.
//! * [`steinhaus`] — the constructive pipeline: spacing-lemma constants,
//!   the spacing map `r(d)`, distance-sequence generation, and explicit
//!   dual certificates with the closed-form bound `λ^N(1-λ) + λ^{N+1}`.
//! * [`counterexample`] — the dimension-one arc construction showing that the
//!   `2^-N` bound fails on the circle and the real projective line.
//!
//! All numerics are deterministic `f64`; fallible operations return
//! [`Result`] with an [`Error`] describing the failure class.

pub mod bessel;
pub mod counterexample;
mod error;
pub mod jacobi;
pub mod lp;
pub mod spaces;
pub mod steinhaus;

pub use counterexample::{ArcFamily, AvoidanceReport, MeasureReport};
pub use error::{Error, Result};
pub use jacobi::{InfimumResult, JacobiParams, PolyValue};
pub use lp::{FeasibilityReport, LpSolution, SolveStatus, TruncatedLp, Verdict};
pub use spaces::{SpaceFamily, SpaceKind, SpaceParams};
pub use steinhaus::{BoundCertificate, DecayReport, DistancePlan, LemmaConstants, SpacingStep};

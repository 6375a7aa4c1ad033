//! Active target defense differential game with a fast Defender.
//!
//! A Target aircraft and a Defender missile cooperate against an Attacker
//! missile. The Defender is faster than the Attacker, so interception happens
//! on the Apollonius circle of the Defender–Attacker pair. This crate provides
//!
//! * [`geometry`]: the Attacker–Defender frame, both Apollonius circles and the
//!   critical Target speed ratio,
//! * [`sextic`]: the degree-6 complex polynomial whose roots are the
//!   stationary interception angles, and an Aberth–Ehrlich root finder,
//! * [`solver`]: the analytic solution (interception point, cost, headings),
//! * [`tpbvp`]: the Pontryagin formulation solved by backward shooting,
//! * [`simulator`]: closed-loop engagements under several guidance laws.
//!
//! Lengths are unit free; times are normalized by the Attacker speed.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod par;
pub mod search;
pub mod sextic;
pub mod simulator;
pub mod solver;
pub mod tpbvp;

pub use error::{Result, TadError};
pub use geometry::{AdFrame, ApolloniusCircle, CircleKind, Region, Scenario, Vec2};
pub use sextic::{CandidateAngles, GameGeometry, SexticCoefficients};
pub use simulator::{GuidancePolicy, Outcome, Policies, SimConfig, Trajectory};
pub use solver::{Headings, InterceptionSolution, Regime};
pub use tpbvp::{Costate, HeadingTriple, ReducedState, TpbvpSolution};

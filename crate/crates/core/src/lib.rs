//! Exact classical Casimir interaction of perfectly conducting three-spheres
//! (and sphere/plate) in four euclidean dimensions.
//!
//! The exact energy of any exterior two-sphere or sphere-plate configuration
//! depends on a single parameter: the radii ratio `rho` (equivalently
//! `mu = -ln rho`) of the conformally equivalent pair of concentric spheres.
//! This crate provides
//!
//! * [`geometry`] — the special conformal map and the reduction of a given
//!   configuration to its concentric pair,
//! * [`spectrum`] — the exact mode sums, plus a truncated scattering
//!   log-determinant evaluator that serves as an independent oracle,
//! * [`asymptotics`] — closed-form small-distance expansions, in both the
//!   as-printed and the sign-resolved ("fitted") variants,
//! * [`proximity`] — plane-plane energy density and the proximity-force
//!   approximation, in closed form and by quadrature over a height profile,
//! * [`gradient`] — derivative-expansion kernels, the beta coefficient from
//!   kernel matching, and the second/fourth order DE energies,
//! * [`analysis`] — percent errors, sweeps, figure data and least-squares
//!   extraction of expansion coefficients from the exact series,
//! * [`validation`] — the end-to-end validation suite.
//!
//! All energies are in units of `k_B T`; all lengths are dimensionless (the
//! user's length unit cancels in the ratios that enter the formulas).

pub mod analysis;
pub mod asymptotics;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod gradient;
pub mod numeric;
pub mod proximity;
pub mod spectrum;
pub mod validation;

pub use error::{Error, Result};
pub use geometry::ConcentricPair;
pub use spectrum::{EnergyValue, TheoryKind};

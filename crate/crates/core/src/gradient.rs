//! Derivative-expansion machinery.
//!
//! The second-order derivative expansion writes the energy functional of a
//! gently curved surface as the plane-plane density corrected by beta
//! (grad H)^2, with beta fixed by matching against the perturbative kernel
//! G(k; d) of the flat-flat problem. The TE kernel carries a k^3 term, so the
//! Taylor expansion of G about k = 0 stops at k^2: the fourth-order expansion
//! exists only for theories whose kernels are free of the cubic (Dirichlet),
//! and breaks down for the conductor and the Neumann scalar.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::proximity::{pfa_leading, plane_plane_density};
use crate::spectrum::{EnergyValue, TheoryKind};

/// Kernel polarization label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Polarization {
    #[serde(rename = "tm")]
    Tm,
    #[serde(rename = "te")]
    Te,
}

/// Truncated momentum expansion of one polarization of the perturbative
/// kernel: G_pol(x) = c0 + c2 x^2 + c3 x^3 + c4 x^4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelModel {
    pub polarization: Polarization,
    pub c0: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl KernelModel {
    /// Transverse-magnetic kernel preset.
    pub fn tm() -> Self {
        let pi2 = PI * PI;
        Self {
            polarization: Polarization::Tm,
            c0: pi2 / 480.0,
            c2: pi2 * pi2 / 1080.0,
            c3: 0.0,
            c4: -(45.0 + pi2 * pi2) * pi2 / 6750.0,
        }
    }

    /// Transverse-electric kernel preset. The x^3 term is the analyticity
    /// obstruction.
    pub fn te() -> Self {
        let pi2 = PI * PI;
        Self {
            polarization: Polarization::Te,
            c0: pi2 / 480.0,
            c2: pi2 * (pi2 - 30.0) / 1080.0,
            c3: PI * pi2 / 32.0,
            c4: -(1095.0 + 50.0 * pi2 + pi2 * pi2) * pi2 / 6750.0,
        }
    }

    /// Polynomial value at the (small) momentum argument x.
    pub fn value(&self, x: f64) -> f64 {
        self.c0 + x * x * (self.c2 + x * (self.c3 + x * self.c4))
    }
}

/// Polynomial kernel value; see [`KernelModel::value`].
pub fn kernel_value(model: &KernelModel, x: f64) -> f64 {
    model.value(x)
}

fn polarizations(theory: TheoryKind) -> Vec<KernelModel> {
    match theory {
        // The conductor sums both polarizations.
        TheoryKind::ElectromagneticConductor => vec![KernelModel::tm(), KernelModel::te()],
        // The Dirichlet kernel coincides with TM, the Neumann one with TE.
        TheoryKind::DirichletScalar => vec![KernelModel::tm()],
        TheoryKind::NeumannScalar => vec![KernelModel::te()],
    }
}

/// Full second-order kernel G(k; d) = -(2/d^5) sum_pol G_pol(d k / 2 pi).
pub fn assemble_full_kernel(theory: TheoryKind, k: f64, d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::invalid(format!("separation must be finite and > 0, got {d}")));
    }
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::invalid(format!("momentum must be finite and >= 0, got {k}")));
    }
    let arg = d * k / (2.0 * PI);
    let sum: f64 = polarizations(theory).iter().map(|p| p.value(arg)).sum();
    Ok(-2.0 / d.powi(5) * sum)
}

/// Outcome of matching the derivative expansion against the perturbative
/// kernel at second order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondOrderMatch {
    /// k^0 coefficient of G(k; d).
    pub gamma: f64,
    /// k^2 coefficient of G(k; d), including the (d / 2 pi)^2 rescaling of
    /// the kernel argument.
    pub delta: f64,
    /// beta = delta / F_pp(d); dimensionless and d-independent.
    pub beta: f64,
    /// Whether any contributing polarization carries a cubic term — the
    /// criterion for the breakdown of the fourth-order expansion.
    pub cubic_present: bool,
}

/// Match the derivative expansion against the kernel at separation d.
pub fn second_order_match(theory: TheoryKind, d: f64) -> Result<SecondOrderMatch> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::invalid(format!("separation must be finite and > 0, got {d}")));
    }
    let pols = polarizations(theory);
    let c0: f64 = pols.iter().map(|p| p.c0).sum();
    let c2: f64 = pols.iter().map(|p| p.c2).sum();
    let cubic_present = pols.iter().any(|p| p.c3 != 0.0);

    let d3 = d * d * d;
    let gamma = -2.0 * c0 / (d3 * d * d);
    let delta = -2.0 * c2 / (4.0 * PI * PI * d3);
    let beta = delta / plane_plane_density(d, theory)?;
    Ok(SecondOrderMatch {
        gamma,
        delta,
        beta,
        cubic_present,
    })
}

/// Self-consistency of the matching relations: the second derivative of the
/// plane-plane density must equal twice the kernel's k^0 coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanePlateConsistency {
    /// F_pp''(d), from the closed-form density.
    pub density_second_derivative: f64,
    /// 2 gamma(d), from the kernel.
    pub twice_gamma: f64,
    /// |difference| of the two routes.
    pub residual: f64,
}

impl PlanePlateConsistency {
    pub fn holds_to(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// Evaluate F_pp''(d) analytically and compare with 2 gamma(d).
pub fn pp_consistency_check(theory: TheoryKind, d: f64) -> Result<PlanePlateConsistency> {
    // F_pp = u / d^3 with u the theory constant, so F_pp'' = 12 u / d^5.
    let density_second_derivative = 12.0 * plane_plane_density(d, theory)? / (d * d);
    let twice_gamma = 2.0 * second_order_match(theory, d)?.gamma;
    Ok(PlanePlateConsistency {
        density_second_derivative,
        twice_gamma,
        residual: (density_second_derivative - twice_gamma).abs(),
    })
}

/// First-order matching coefficient of the perturbative expansion.
///
/// Unlike gamma and delta, this one has no independent kernel route: it is
/// defined as F_pp'(d) and nothing cross-checks it.
pub fn first_order_coefficient(theory: TheoryKind, d: f64) -> Result<f64> {
    // F_pp = u / d^3, so F_pp' = -3 u / d^4.
    Ok(-3.0 * plane_plane_density(d, theory)? / d)
}

/// Second-order derivative-expansion energy for the sphere-plate geometry:
/// PFA times [1 + (6 beta - 15/4) x].
pub fn de2_energy(x: f64, theory: TheoryKind) -> Result<EnergyValue> {
    let beta = second_order_match(theory, 1.0)?.beta;
    let leading = pfa_leading(x, theory)?.value;
    Ok(EnergyValue::closed_form(
        leading * (1.0 + (6.0 * beta - 3.75) * x),
    ))
}

/// Coefficients of the fourth-order derivative expansion. The TE cubic term
/// rules out the beta^(i) for the conductor and the Neumann scalar, so no
/// presets beyond zero are shipped; the operation is parametric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct De4Params {
    pub beta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
}

impl De4Params {
    /// Second-order beta of the theory with all fourth-order coefficients
    /// zeroed.
    pub fn for_theory(theory: TheoryKind) -> Result<Self> {
        Ok(Self {
            beta: second_order_match(theory, 1.0)?.beta,
            beta1: 0.0,
            beta2: 0.0,
            beta3: 0.0,
            beta4: 0.0,
        })
    }

    fn validate(&self) -> Result<()> {
        let all = [self.beta, self.beta1, self.beta2, self.beta3, self.beta4];
        if all.iter().all(|b| b.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("DE4 coefficients must be finite".to_string()))
        }
    }

    /// The x^2 bracket coefficient
    /// -15 (7/32 + beta/2 + 144/5 beta1 + 48/5 beta2 + 48/5 beta3 + 4 beta4).
    pub fn second_order_bracket_coefficient(&self) -> f64 {
        -15.0
            * (7.0 / 32.0
                + 0.5 * self.beta
                + 144.0 / 5.0 * self.beta1
                + 48.0 / 5.0 * self.beta2
                + 48.0 / 5.0 * self.beta3
                + 4.0 * self.beta4)
    }
}

/// Fourth-order derivative-expansion energy: PFA times
/// [1 + (6 beta - 15/4) x + (x^2 bracket coefficient) x^2].
///
/// By construction the output is analytic in x — pure powers — whereas the
/// exact conductor energy carries an x^{3/2} log x correction relative to
/// PFA; the contrast is exercised in the analysis tests.
pub fn de4_energy(x: f64, params: &De4Params, theory: TheoryKind) -> Result<EnergyValue> {
    params.validate()?;
    let leading = pfa_leading(x, theory)?.value;
    let bracket = 1.0
        + (6.0 * params.beta - 3.75) * x
        + params.second_order_bracket_coefficient() * x * x;
    Ok(EnergyValue::closed_form(leading * bracket))
}

/// One row of the beta table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaEntry {
    pub theory: TheoryKind,
    pub beta: f64,
    pub cubic_present: bool,
}

/// beta and the DE-breakdown flag for the three theories, in a fixed order.
pub fn beta_table() -> Vec<BetaEntry> {
    [
        TheoryKind::ElectromagneticConductor,
        TheoryKind::DirichletScalar,
        TheoryKind::NeumannScalar,
    ]
    .iter()
    .map(|&theory| {
        let m = second_order_match(theory, 1.0).expect("d = 1 is valid");
        BetaEntry {
            theory,
            beta: m.beta,
            cubic_present: m.cubic_present,
        }
    })
    .collect()
}

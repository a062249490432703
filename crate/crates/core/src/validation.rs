//! End-to-end validation suite.
//!
//! Each criterion measures a quantity against a pinned threshold and reports
//! the measured values in a stable, machine-readable form. The thresholds are
//! fixed here, not calibrated at run time. [`run_all`] executes every
//! criterion, re-runs the suite to confirm byte-identical output, and checks
//! the wall-time budget.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;

use crate::analysis::{
    default_figure_grid, fit_expansion, fit_log_nntlo, sweep, sweep_row,
};
use crate::asymptotics::{em_asymptotic_mu, em_bracket_c1, ExpansionCoefficients, Variant, ZETA_3};
use crate::fitting::{log_spaced_grid, BasisFn};
use crate::geometry::ConcentricPair;
use crate::gradient::{pp_consistency_check, second_order_match};
use crate::proximity::{pfa_leading, pfa_quadrature, HeightProfile};
use crate::spectrum::{
    em_energy_exact, em_energy_k_sum, scattering_logdet_energy, TheoryKind,
};

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Measured values and thresholds, formatted for the report line.
    pub measured: String,
}

impl CriterionResult {
    fn new(id: u32, name: &'static str, passed: bool, measured: String) -> Self {
        Self {
            id,
            name,
            passed,
            measured,
        }
    }

    /// One stable report line: `PASS  3 pfa-error-at-0.002  <measured>`.
    pub fn report_line(&self) -> String {
        format!(
            "{} {:2} {:<28} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured
        )
    }
}

const EM: TheoryKind = TheoryKind::ElectromagneticConductor;
const DIRICHLET: TheoryKind = TheoryKind::DirichletScalar;
const NEUMANN: TheoryKind = TheoryKind::NeumannScalar;

fn fail(id: u32, name: &'static str, err: impl std::fmt::Display) -> CriterionResult {
    CriterionResult::new(id, name, false, format!("error: {err}"))
}

/// Criterion 1: the mode-enumerated log-determinant agrees with the exact
/// series at rho in {0.1, 0.5, 0.9} within 1e-12 plus the certified tail,
/// in under a second.
pub fn c01_oracle_equivalence() -> CriterionResult {
    const NAME: &str = "oracle-equivalence";
    let start = Instant::now();
    let mut worst_delta = 0.0f64;
    let mut tightest_allowance = f64::INFINITY;
    for (rho, n_max) in [(0.1, 40), (0.5, 80), (0.9, 300)] {
        let pair = match ConcentricPair::from_rho(rho) {
            Ok(p) => p,
            Err(e) => return fail(1, NAME, e),
        };
        let exact = match em_energy_exact(&pair, 1e-15) {
            Ok(e) => e,
            Err(e) => return fail(1, NAME, e),
        };
        let oracle = match scattering_logdet_energy(&pair, n_max) {
            Ok(e) => e,
            Err(e) => return fail(1, NAME, e),
        };
        let delta = (exact.value - oracle.value).abs();
        let allowed = 1e-12 + oracle.tail_bound + exact.tail_bound;
        worst_delta = worst_delta.max(delta);
        tightest_allowance = tightest_allowance.min(allowed);
        if delta > allowed {
            return CriterionResult::new(
                1,
                NAME,
                false,
                format!("rho {rho}: |delta| = {delta:.3e} > {allowed:.3e}"),
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    // Timing stays out of the measured string so reports are byte-identical
    // run to run; the budget still gates the criterion.
    CriterionResult::new(
        1,
        NAME,
        elapsed < 1.0,
        format!(
            "max |delta| {worst_delta:.3e} (allowance >= {tightest_allowance:.3e}), \
             runtime under 1 s: {}",
            elapsed < 1.0
        ),
    )
}

/// Criterion 2: em_energy_exact(0.5) = -0.414637 +/- 1e-5, with the n-sum and
/// the k-resummation agreeing to 1e-10 relative.
pub fn c02_exact_value_regression() -> CriterionResult {
    const NAME: &str = "exact-value-regression";
    let pair = ConcentricPair::from_rho(0.5).unwrap();
    let n_sum = match em_energy_exact(&pair, 1e-13) {
        Ok(e) => e.value,
        Err(e) => return fail(2, NAME, e),
    };
    let k_sum = match em_energy_k_sum(0.5, 1e-13) {
        Ok(v) => v,
        Err(e) => return fail(2, NAME, e),
    };
    let routes_agree = ((n_sum - k_sum) / n_sum).abs() < 1e-10;
    let regression = (n_sum - (-0.414637)).abs() <= 1e-5;
    CriterionResult::new(
        2,
        NAME,
        routes_agree && regression,
        format!(
            "n-sum {n_sum:.10}, k-sum {k_sum:.10}, target -0.414637 +/- 1e-5"
        ),
    )
}

/// Criterion 3: percent error of the leading PFA at x = 0.002 is 0.97 +/- 0.02.
pub fn c03_pfa_error() -> CriterionResult {
    const NAME: &str = "pfa-error-at-0.002";
    match sweep_row(EM, 0.002, 1e-13) {
        Ok(row) => CriterionResult::new(
            3,
            NAME,
            (row.err_pfa_pct - 0.97).abs() <= 0.02,
            format!("err_pfa = {:.4} % (target 0.97 +/- 0.02)", row.err_pfa_pct),
        ),
        Err(e) => fail(3, NAME, e),
    }
}

/// Criterion 4: percent error of the second-order DE at x = 0.002 is
/// -0.20 +/- 0.05.
pub fn c04_de_error() -> CriterionResult {
    const NAME: &str = "de-error-at-0.002";
    match sweep_row(EM, 0.002, 1e-13) {
        Ok(row) => CriterionResult::new(
            4,
            NAME,
            (row.err_de_pct - (-0.20)).abs() <= 0.05,
            format!("err_de = {:.4} % (target -0.20 +/- 0.05)", row.err_de_pct),
        ),
        Err(e) => fail(4, NAME, e),
    }
}

/// Criterion 5: beta from kernel matching equals the closed forms to 1e-12,
/// and 6 beta_D - 15/4 = 1/4.
pub fn c05_kernel_matching() -> CriterionResult {
    const NAME: &str = "kernel-matching-beta";
    let pi2 = PI * PI;
    let checks: [(TheoryKind, f64); 3] = [
        (EM, 2.0 / 3.0 * (1.0 - 15.0 / pi2)),
        (DIRICHLET, 2.0 / 3.0),
        (NEUMANN, 2.0 / 3.0 - 20.0 / pi2),
    ];
    let mut betas = Vec::new();
    for (theory, expected) in checks {
        let m = match second_order_match(theory, 1.0) {
            Ok(m) => m,
            Err(e) => return fail(5, NAME, e),
        };
        betas.push(m.beta);
        if (m.beta - expected).abs() > 1e-12 {
            return CriterionResult::new(
                5,
                NAME,
                false,
                format!("beta({}) = {} differs from {expected}", theory.key(), m.beta),
            );
        }
    }
    let dirichlet_ntlo = 6.0 * betas[1] - 3.75;
    let passed = (dirichlet_ntlo - 0.25).abs() <= 1e-12;
    CriterionResult::new(
        5,
        NAME,
        passed,
        format!(
            "beta_em = {:.7}, beta_d = {:.7}, beta_n = {:.7}; 6 beta_d - 15/4 = {dirichlet_ntlo:.15}",
            betas[0], betas[1], betas[2]
        ),
    )
}

/// Criterion 6: F_pp''(d) = 2 gamma(d) for the conductor and the Dirichlet
/// scalar at d in {1, 2}, residual <= 1e-14.
pub fn c06_plane_plane_consistency() -> CriterionResult {
    const NAME: &str = "plane-plane-consistency";
    let mut worst = 0.0f64;
    for theory in [EM, DIRICHLET] {
        for d in [1.0, 2.0] {
            match pp_consistency_check(theory, d) {
                Ok(c) => worst = worst.max(c.residual),
                Err(e) => return fail(6, NAME, e),
            }
        }
    }
    CriterionResult::new(
        6,
        NAME,
        worst <= 1e-14,
        format!("max residual {worst:.3e} (<= 1e-14)"),
    )
}

/// Criterion 7: the NTLO bracket coefficient extracted from the exact series
/// on x in [1e-5, 1e-3] matches 1/4 - 60/pi^2 within 1e-3 relative.
pub fn c07_ntlo_extraction() -> CriterionResult {
    const NAME: &str = "ntlo-extraction";
    let grid = match log_spaced_grid(1e-5, 1e-3, 48) {
        Ok(g) => g,
        Err(e) => return fail(7, NAME, e),
    };
    let basis = [
        BasisFn::Pow(-1.5),
        BasisFn::Pow(-0.5),
        BasisFn::LogX,
        BasisFn::Const,
    ];
    let report = match fit_expansion(EM, &basis, &grid) {
        Ok(r) => r,
        Err(e) => return fail(7, NAME, e),
    };
    let c1 = report.coefficients[1] / report.coefficients[0];
    let expected = em_bracket_c1();
    let rel = ((c1 - expected) / expected).abs();
    CriterionResult::new(
        7,
        NAME,
        rel <= 1e-3,
        format!("c1 = {c1:.7} vs {expected:.7} (rel {rel:.2e} <= 1e-3)"),
    )
}

/// Criterion 8: the log-NNTLO fit returns |slope| = 0.25 +/- 0.0025; the
/// variant of the mu-series selected by the fitted sign then tracks the
/// exact series to |delta| <= 0.05 mu^3 over mu in [0.02, 0.3].
pub fn c08_log_nntlo() -> CriterionResult {
    const NAME: &str = "log-nntlo";
    let fit = match fit_log_nntlo(1e-6, 1e-3, 40) {
        Ok(f) => f,
        Err(e) => return fail(8, NAME, e),
    };
    let magnitude_ok = (fit.slope.abs() - 0.25).abs() <= 0.0025;

    // The printed placement corresponds to slope +1/4 in -F, the resolved
    // one to -1/4; the fitted sign selects the variant to validate.
    let variant = if fit.slope < 0.0 {
        Variant::Fitted
    } else {
        Variant::Printed
    };
    let coeffs = ExpansionCoefficients::em_mu(variant).with_residual(fit.max_residual);
    // Both the log and the constant flip together, so the printed-placement
    // intercept is exactly minus the resolved one.
    let resolved_constant = -0.25 * (2.0 / (PI * PI)).ln() - ZETA_3 / (4.0 * PI * PI);
    let printed_constant = -resolved_constant;

    let mut worst_ratio = 0.0f64;
    for i in 0..=28 {
        let mu = 0.02 + 0.01 * i as f64;
        let pair = match ConcentricPair::from_mu(mu) {
            Ok(p) => p,
            Err(e) => return fail(8, NAME, e),
        };
        let exact = match em_energy_exact(&pair, 1e-13) {
            Ok(e) => e.value,
            Err(e) => return fail(8, NAME, e),
        };
        let asym = match em_asymptotic_mu(mu, &coeffs) {
            Ok(e) => e.value,
            Err(e) => return fail(8, NAME, e),
        };
        worst_ratio = worst_ratio.max((asym - exact).abs() / mu.powi(3));
    }
    let tracks = worst_ratio <= 0.05;
    CriterionResult::new(
        8,
        NAME,
        magnitude_ok && tracks,
        format!(
            "slope {:.5} (|.| = 0.25 +/- 0.0025, sign selects {variant:?}); intercept {:.5} \
             (printed-variant constant {printed_constant:.5}, resolved {resolved_constant:.5}); \
             max |delta|/mu^3 = {worst_ratio:.3e} (<= 0.05)",
            fit.slope, fit.intercept
        ),
    )
}

/// Criterion 9: the Dirichlet x^2 bracket coefficient comes out within 1 %
/// of 12/pi^4 - 7/480 and the fitted log-x coefficient stays below 1e-3.
pub fn c09_dirichlet_nntlo() -> CriterionResult {
    const NAME: &str = "dirichlet-nntlo";
    let grid = match log_spaced_grid(1e-4, 1e-2, 48) {
        Ok(g) => g,
        Err(e) => return fail(9, NAME, e),
    };
    let basis = [
        BasisFn::Pow(-1.5),
        BasisFn::Pow(-0.5),
        BasisFn::Pow(0.5),
        BasisFn::Pow(1.5),
        BasisFn::LogX,
        BasisFn::Const,
    ];
    let report = match fit_expansion(DIRICHLET, &basis, &grid) {
        Ok(r) => r,
        Err(e) => return fail(9, NAME, e),
    };
    let c2 = report.coefficients[2] / report.coefficients[0];
    let expected = 12.0 / PI.powi(4) - 7.0 / 480.0;
    let rel = ((c2 - expected) / expected).abs();
    let log_coeff = report.coefficients[4].abs();
    CriterionResult::new(
        9,
        NAME,
        rel <= 0.01 && log_coeff < 1e-3,
        format!(
            "c2 = {c2:.6} vs {expected:.6} (rel {rel:.2e} <= 1e-2); |log coeff| = {log_coeff:.2e} (< 1e-3)"
        ),
    )
}

/// Criterion 10: the parabolic-profile quadrature equals the closed form to
/// 1e-8 relative at x in {0.001, 0.01, 0.1, 1}.
pub fn c10_pfa_quadrature() -> CriterionResult {
    const NAME: &str = "pfa-quadrature";
    let mut worst = 0.0f64;
    for x in [0.001, 0.01, 0.1, 1.0] {
        let profile = HeightProfile::Parabolic { radius: 1.0 };
        let quad = match pfa_quadrature(&profile, x, EM) {
            Ok(e) => e.value,
            Err(e) => return fail(10, NAME, e),
        };
        let closed = match pfa_leading(x, EM) {
            Ok(e) => e.value,
            Err(e) => return fail(10, NAME, e),
        };
        worst = worst.max(((quad - closed) / closed).abs());
    }
    CriterionResult::new(
        10,
        NAME,
        worst <= 1e-8,
        format!("max relative deviation {worst:.3e} (<= 1e-8)"),
    )
}

/// Criterion 11: over the figure grid the exact-to-PFA ratio rises
/// monotonically to 1 as x falls, and the DE error stays below the PFA error
/// for all x <= 0.01.
pub fn c11_figure_reproduction() -> CriterionResult {
    const NAME: &str = "figure-reproduction";
    let rows = match sweep(EM, &default_figure_grid(), 1e-12) {
        Ok(r) => r,
        Err(e) => return fail(11, NAME, e),
    };
    let mut prev = 0.0;
    for row in rows.iter().rev() {
        let ratio = row.f_exact / row.f_pfa;
        if ratio <= prev {
            return CriterionResult::new(
                11,
                NAME,
                false,
                format!("ratio not monotone toward 1 at x = {}", row.x),
            );
        }
        prev = ratio;
    }
    let ratio_limit = (prev - 1.0).abs();
    let de_superior = rows
        .iter()
        .filter(|r| r.x <= 0.01)
        .all(|r| r.err_de_pct.abs() < r.err_pfa_pct.abs());
    CriterionResult::new(
        11,
        NAME,
        ratio_limit < 1e-3 && de_superior,
        format!(
            "ratio(1e-4) = {:.6} (-> 1), |err_de| < |err_pfa| for x <= 0.01: {de_superior}",
            prev
        ),
    )
}

fn run_once() -> Vec<CriterionResult> {
    vec![
        c01_oracle_equivalence(),
        c02_exact_value_regression(),
        c03_pfa_error(),
        c04_de_error(),
        c05_kernel_matching(),
        c06_plane_plane_consistency(),
        c07_ntlo_extraction(),
        c08_log_nntlo(),
        c09_dirichlet_nntlo(),
        c10_pfa_quadrature(),
        c11_figure_reproduction(),
    ]
}

/// Run the complete suite: criteria 1-11 plus the closing budget-and-
/// determinism criterion.
pub fn run_all() -> Vec<CriterionResult> {
    let start = Instant::now();
    let mut results = run_once();
    let first = serde_json::to_string(&results).expect("results serialize");
    let second = serde_json::to_string(&run_once()).expect("results serialize");
    let elapsed = start.elapsed().as_secs_f64();
    let deterministic = first == second;
    results.push(CriterionResult::new(
        12,
        "suite-budget-determinism",
        elapsed < 60.0 && deterministic,
        format!(
            "two full passes under 60 s: {}, byte-identical: {deterministic}",
            elapsed < 60.0
        ),
    ));
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_lines_are_stable() {
        let r = CriterionResult::new(3, "pfa-error-at-0.002", true, "err = 0.99".to_string());
        assert_eq!(r.report_line(), "PASS  3 pfa-error-at-0.002           err = 0.99");
    }
}

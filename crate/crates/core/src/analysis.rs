//! Quantitative comparison layer: percent errors, parameter sweeps, figure
//! data, and least-squares extraction of expansion coefficients from the
//! exact series. The exact series is always the ground truth; the printed
//! expansions are never used as reference in an error metric.

use serde::Serialize;

use crate::asymptotics::{
    dirichlet_sphere_plate_expansion, em_bracket_c1, em_sphere_plate_expansion,
    ExpansionCoefficients, HalfInt, Variant,
};
use crate::error::{Error, Result};
use crate::fitting::{fit_linear, log_spaced_grid, BasisFn, FitReport};
use crate::geometry::{mu_of_sphere_plate, ConcentricPair};
use crate::gradient::de2_energy;
use crate::proximity::pfa_leading;
use crate::spectrum::{exact_energy, EnergyValue, TheoryKind};

/// Percent error of an approximation against the exact value:
/// 100 (exact - approx) / |approx|.
///
/// The sign convention reproduces the published comparison pair at
/// x = 0.002: +0.97 for the PFA and about -0.2 for the second-order DE.
pub fn percent_error(exact: &EnergyValue, approx: &EnergyValue) -> Result<f64> {
    if approx.value == 0.0 {
        return Err(Error::invalid("approximation value is zero".to_string()));
    }
    Ok(100.0 * (exact.value - approx.value) / approx.value.abs())
}

/// One comparison row of a sweep over x = d/R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    #[serde(rename = "F_exact")]
    pub f_exact: f64,
    #[serde(rename = "F_pfa")]
    pub f_pfa: f64,
    #[serde(rename = "F_de2")]
    pub f_de2: f64,
    #[serde(rename = "F_asym_fitted")]
    pub f_asym_fitted: f64,
    pub err_pfa_pct: f64,
    pub err_de_pct: f64,
}

/// The full sphere-plate bracket order available for the asymptotic column.
fn full_bracket_order(theory: TheoryKind) -> HalfInt {
    match theory {
        TheoryKind::ElectromagneticConductor => HalfInt::halves(7),
        _ => HalfInt::int(3),
    }
}

fn asym_fitted(theory: TheoryKind, x: f64) -> Result<EnergyValue> {
    match theory {
        TheoryKind::ElectromagneticConductor => {
            let coeffs = ExpansionCoefficients::em_sphere_plate(Variant::Fitted);
            em_sphere_plate_expansion(x, full_bracket_order(theory), &coeffs)
        }
        TheoryKind::DirichletScalar => {
            let coeffs = ExpansionCoefficients::dirichlet_sphere_plate(Variant::Fitted);
            dirichlet_sphere_plate_expansion(x, &coeffs)
        }
        TheoryKind::NeumannScalar => Err(Error::NoExactSolution(theory)),
    }
}

/// Exact energy at gap ratio x, through the concentric reduction.
pub fn exact_energy_at_ratio(theory: TheoryKind, x: f64, tol: f64) -> Result<EnergyValue> {
    let mu = mu_of_sphere_plate(x)?;
    let pair = ConcentricPair::from_mu(mu)?;
    exact_energy(theory, &pair, tol)
}

/// Evaluate one sweep row.
pub fn sweep_row(theory: TheoryKind, x: f64, tol: f64) -> Result<SweepRow> {
    let exact = exact_energy_at_ratio(theory, x, tol)?;
    let pfa = pfa_leading(x, theory)?;
    let de2 = de2_energy(x, theory)?;
    let asym = asym_fitted(theory, x)?;
    Ok(SweepRow {
        x,
        f_exact: exact.value,
        f_pfa: pfa.value,
        f_de2: de2.value,
        f_asym_fitted: asym.value,
        err_pfa_pct: percent_error(&exact, &pfa)?,
        err_de_pct: percent_error(&exact, &de2)?,
    })
}

/// Sweep the comparison quantities over sorted positive x values.
///
/// Points are evaluated sequentially in input order (every underlying call
/// is pure, so callers may shard the grid if they want concurrency);
/// per-point failures are reported with the offending x attached.
pub fn sweep(theory: TheoryKind, x_values: &[f64], tol: f64) -> Result<Vec<SweepRow>> {
    if x_values.is_empty() {
        return Err(Error::invalid("sweep needs at least one x value".to_string()));
    }
    if !x_values.iter().all(|x| x.is_finite() && *x > 0.0) {
        return Err(Error::invalid("sweep x values must be finite and > 0".to_string()));
    }
    if !x_values.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::invalid("sweep x values must be sorted ascending".to_string()));
    }
    x_values
        .iter()
        .map(|&x| {
            sweep_row(theory, x, tol).map_err(|e| match e {
                Error::Convergence(msg) => Error::Convergence(format!("at x = {x}: {msg}")),
                other => other,
            })
        })
        .collect()
}

/// The comparison-figure grid: 40 log-spaced points per decade over
/// x in [1e-4, 1e-1].
pub fn default_figure_grid() -> Vec<f64> {
    log_spaced_grid(1e-4, 1e-1, 121).expect("static bounds are valid")
}

/// Grid preconditions for the coefficient fits: strictly inside (0, 0.05]
/// and at least three points per basis function.
fn validate_fit_grid(grid: &[f64], basis_len: usize) -> Result<()> {
    if grid.iter().any(|x| !(x.is_finite() && *x > 0.0 && *x <= 0.05)) {
        return Err(Error::invalid(
            "fit grid must lie strictly inside (0, 0.05]".to_string(),
        ));
    }
    if grid.len() < 3 * basis_len {
        return Err(Error::invalid(format!(
            "fit grid has {} points; need at least 3 per basis function ({})",
            grid.len(),
            3 * basis_len
        )));
    }
    Ok(())
}

/// Least-squares fit of the exact energy against the basis on the grid.
///
/// Rows are scaled by x^{3/2} to tame the dynamic range of the leading
/// x^{-3/2} behavior, so the reported residual lives in the scaled (k_B T)
/// space.
pub fn fit_expansion(theory: TheoryKind, basis: &[BasisFn], x_grid: &[f64]) -> Result<FitReport> {
    validate_fit_grid(x_grid, basis.len())?;
    let ys: Vec<f64> = x_grid
        .iter()
        .map(|&x| exact_energy_at_ratio(theory, x, 1e-13).map(|e| e.value))
        .collect::<Result<_>>()?;
    let weights: Vec<f64> = x_grid.iter().map(|x| x.powf(1.5)).collect();
    fit_linear(x_grid, &ys, basis, Some(&weights))
}

/// Logarithmic NNTLO fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogNntloFit {
    /// Coefficient of ln x.
    pub slope: f64,
    /// Constant term.
    pub intercept: f64,
    /// Largest absolute residual of the two-parameter fit.
    pub max_residual: f64,
}

/// Fit the log term left after removing the leading and NTLO powers:
/// D(x) = -F_exact - A x^{-3/2} (1 + c1 x) = slope ln x + intercept.
///
/// The grid must lie within [1e-6, 1e-3], where the remaining power
/// corrections are negligible against the log.
pub fn fit_log_nntlo(x_min: f64, x_max: f64, points: usize) -> Result<LogNntloFit> {
    if !(x_min >= 1e-6 && x_max <= 1e-3 && x_min < x_max) {
        return Err(Error::invalid(format!(
            "log-NNTLO grid must lie within [1e-6, 1e-3], got [{x_min}, {x_max}]"
        )));
    }
    if points < 6 {
        return Err(Error::invalid("log-NNTLO fit needs at least 6 points".to_string()));
    }
    let grid = log_spaced_grid(x_min, x_max, points)?;
    let prefactor = pfa_leading(1.0, TheoryKind::ElectromagneticConductor)?
        .value
        .abs();
    let c1 = em_bracket_c1();
    let ys: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let exact =
                exact_energy_at_ratio(TheoryKind::ElectromagneticConductor, x, 1e-13)?.value;
            Ok(-exact - prefactor * x.powf(-1.5) * (1.0 + c1 * x))
        })
        .collect::<Result<_>>()?;
    let basis = [BasisFn::LogX, BasisFn::Const];
    let report = fit_linear(&grid, &ys, &basis, None)?;
    Ok(LogNntloFit {
        slope: report.coefficients[0],
        intercept: report.coefficients[1],
        max_residual: report.max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::ZETA_3;
    use std::f64::consts::PI;

    const EM: TheoryKind = TheoryKind::ElectromagneticConductor;
    const DIRICHLET: TheoryKind = TheoryKind::DirichletScalar;

    #[test]
    fn percent_error_trivials() {
        let e = EnergyValue::closed_form(-2.0);
        assert_eq!(percent_error(&e, &e).unwrap(), 0.0);
        // exact below approx in magnitude: positive error for negative values.
        let approx = EnergyValue::closed_form(-4.0);
        assert!((percent_error(&e, &approx).unwrap() - 50.0).abs() < 1e-12);
        assert!(percent_error(&e, &EnergyValue::closed_form(0.0)).is_err());
    }

    #[test]
    fn percent_errors_reproduce_the_published_pair() {
        let row = sweep_row(EM, 0.002, 1e-13).unwrap();
        assert!(
            (row.err_pfa_pct - 0.97).abs() <= 0.02,
            "PFA error {}",
            row.err_pfa_pct
        );
        assert!(
            (row.err_de_pct - (-0.20)).abs() <= 0.05,
            "DE error {}",
            row.err_de_pct
        );
    }

    #[test]
    fn single_point_sweep_composes_individual_calls() {
        let rows = sweep(EM, &[0.01], 1e-12).unwrap();
        assert_eq!(rows.len(), 1);
        let row = rows[0];
        let exact = exact_energy_at_ratio(EM, 0.01, 1e-12).unwrap();
        let pfa = pfa_leading(0.01, EM).unwrap();
        assert_eq!(row.f_exact, exact.value);
        assert_eq!(row.f_pfa, pfa.value);
        assert_eq!(
            row.err_pfa_pct,
            percent_error(&exact, &pfa).unwrap()
        );
    }

    #[test]
    fn sweep_validates_inputs() {
        assert!(sweep(EM, &[], 1e-12).is_err());
        assert!(sweep(EM, &[0.2, 0.1], 1e-12).is_err());
        assert!(sweep(EM, &[-0.1, 0.2], 1e-12).is_err());
    }

    #[test]
    fn ratio_to_pfa_rises_toward_one_as_x_falls() {
        let grid = log_spaced_grid(1e-4, 1e-1, 31).unwrap();
        let rows = sweep(EM, &grid, 1e-12).unwrap();
        let mut prev = 0.0;
        for row in rows.iter().rev() {
            let ratio = row.f_exact / row.f_pfa;
            assert!(ratio > prev, "ratio not increasing at x = {}", row.x);
            prev = ratio;
        }
        assert!((prev - 1.0).abs() < 1e-3, "ratio at x = 1e-4 is {prev}");
    }

    #[test]
    fn de_beats_pfa_below_a_hundredth() {
        let grid = log_spaced_grid(1e-4, 1e-2, 25).unwrap();
        for row in sweep(EM, &grid, 1e-12).unwrap() {
            assert!(
                row.err_de_pct.abs() < row.err_pfa_pct.abs(),
                "x = {}: DE {} vs PFA {}",
                row.x,
                row.err_de_pct,
                row.err_pfa_pct
            );
        }
    }

    #[test]
    fn dirichlet_sweep_is_consistent_too() {
        let rows = sweep(DIRICHLET, &[1e-4, 1e-3, 1e-2], 1e-12).unwrap();
        for row in rows {
            assert!(row.f_exact < 0.0 && row.f_pfa < 0.0);
            assert!(row.err_de_pct.abs() < row.err_pfa_pct.abs());
            // The fitted Dirichlet expansion tracks the exact series closely.
            assert!(
                ((row.f_asym_fitted - row.f_exact) / row.f_exact).abs() < 1e-3,
                "x = {}: asym {} vs exact {}",
                row.x,
                row.f_asym_fitted,
                row.f_exact
            );
        }
    }

    #[test]
    fn leading_coefficient_fit() {
        // With the NTLO power modeled, the leading coefficient comes out to
        // a few parts in 1e6.
        let grid = log_spaced_grid(1e-5, 1e-4, 24).unwrap();
        let basis = [BasisFn::Pow(-1.5), BasisFn::Pow(-0.5)];
        let report = fit_expansion(EM, &basis, &grid).unwrap();
        let leading = report.coefficients[0];
        let expected = -std::f64::consts::SQRT_2 * PI.powi(4) / 1440.0;
        assert!(
            ((leading - expected) / expected).abs() < 1e-5,
            "leading {leading} vs {expected}"
        );
    }

    #[test]
    fn ntlo_coefficient_fit() {
        // The log term must be modeled or it biases the linear coefficient
        // at the percent level.
        let grid = log_spaced_grid(1e-5, 1e-3, 48).unwrap();
        let basis = [
            BasisFn::Pow(-1.5),
            BasisFn::Pow(-0.5),
            BasisFn::LogX,
            BasisFn::Const,
        ];
        let report = fit_expansion(EM, &basis, &grid).unwrap();
        let c1 = report.coefficients[1] / report.coefficients[0];
        assert!(
            ((c1 - em_bracket_c1()) / em_bracket_c1()).abs() < 1e-3,
            "c1 = {c1}, expected {}",
            em_bracket_c1()
        );
        assert!((c1 - (-5.82927)).abs() < 6e-3);
    }

    #[test]
    fn ntlo_fit_is_stable_under_grid_refinement() {
        // For the physics fit the scaled residual is dominated by the
        // unmodeled higher-order bracket terms, so stability shows up as a
        // tiny drift of the extracted coefficients, not as the synthetic
        // 10x-residual bound (see the fitting self-tests for that one).
        let basis = [
            BasisFn::Pow(-1.5),
            BasisFn::Pow(-0.5),
            BasisFn::LogX,
            BasisFn::Const,
        ];
        let fit = |count: usize| {
            let grid = log_spaced_grid(1e-5, 1e-3, count).unwrap();
            let r = fit_expansion(EM, &basis, &grid).unwrap();
            (r.coefficients[0], r.coefficients[1] / r.coefficients[0])
        };
        let (lead_a, c1_a) = fit(48);
        let (lead_b, c1_b) = fit(96);
        assert!(((lead_a - lead_b) / lead_b).abs() < 1e-9);
        assert!(((c1_a - c1_b) / c1_b).abs() < 1e-4);
    }

    #[test]
    fn dirichlet_nntlo_fit() {
        // x^2 bracket coefficient from the exact Dirichlet series, with a
        // log column included to confirm its absence.
        let grid = log_spaced_grid(1e-4, 1e-2, 48).unwrap();
        let basis = [
            BasisFn::Pow(-1.5),
            BasisFn::Pow(-0.5),
            BasisFn::Pow(0.5),
            BasisFn::Pow(1.5),
            BasisFn::LogX,
            BasisFn::Const,
        ];
        let report = fit_expansion(DIRICHLET, &basis, &grid).unwrap();
        let c2 = report.coefficients[2] / report.coefficients[0];
        let expected = 12.0 / PI.powi(4) - 7.0 / 480.0;
        assert!(
            ((c2 - expected) / expected).abs() < 0.01,
            "c2 = {c2}, expected {expected}"
        );
        let log_coeff = report.coefficients[4];
        assert!(log_coeff.abs() < 1e-3, "log coefficient {log_coeff}");
    }

    #[test]
    fn fit_grid_preconditions() {
        let basis = [BasisFn::Pow(-1.5)];
        assert!(fit_expansion(EM, &basis, &[0.06, 0.07, 0.08]).is_err());
        assert!(fit_expansion(EM, &basis, &[0.01, 0.02]).is_err());
        assert!(fit_expansion(EM, &basis, &[-0.01, 0.01, 0.02]).is_err());
    }

    #[test]
    fn log_nntlo_extracts_the_quarter() {
        let fit = fit_log_nntlo(1e-6, 1e-3, 40).unwrap();
        assert!(
            (fit.slope.abs() - 0.25).abs() < 0.0025,
            "slope {}",
            fit.slope
        );
        // The fit resolves the sign: the log enters -F with coefficient -1/4,
        // opposite to the printed placement.
        assert!(fit.slope < 0.0);

        // Intercept: -(1/4) ln(2/pi^2) - zeta(3)/(4 pi^2).
        let expected = -0.25 * (2.0 / (PI * PI)).ln() - ZETA_3 / (4.0 * PI * PI);
        assert!(
            ((fit.intercept - expected) / expected).abs() < 0.05,
            "intercept {} vs {expected}",
            fit.intercept
        );

        // Recovering the small constant needs the lowest decade: the
        // intercept extrapolates far outside the data window, so the
        // unmodeled sqrt(x) bracket term must be negligible.
        let fit = fit_log_nntlo(1e-6, 1e-5, 40).unwrap();
        let constant = fit.intercept + 0.25 * (2.0 / (PI * PI)).ln();
        assert!(
            ((constant - (-ZETA_3 / (4.0 * PI * PI))) / (ZETA_3 / (4.0 * PI * PI))).abs() < 0.05,
            "constant {constant}"
        );
    }

    #[test]
    fn log_nntlo_validates_the_range() {
        assert!(fit_log_nntlo(1e-7, 1e-3, 40).is_err());
        assert!(fit_log_nntlo(1e-6, 1e-2, 40).is_err());
        assert!(fit_log_nntlo(1e-4, 1e-4, 40).is_err());
        assert!(fit_log_nntlo(1e-6, 1e-3, 3).is_err());
    }
}

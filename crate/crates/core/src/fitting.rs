//! Linear least squares on a small set of named basis functions.
//!
//! The expansion-coefficient extractions all reduce to fitting a handful of
//! powers of x (plus ln x and a constant) to values of the exact series on a
//! log-spaced grid. The solver column-normalizes the design matrix,
//! orthogonalizes it by modified Gram-Schmidt and reports a conditioning
//! estimate; rank-deficient systems are rejected rather than solved.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// One fit function: x^p, ln x, or the constant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisFn {
    Pow(f64),
    LogX,
    Const,
}

impl BasisFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            BasisFn::Pow(p) => x.powf(p),
            BasisFn::LogX => x.ln(),
            BasisFn::Const => 1.0,
        }
    }

    /// Parse a tag like `pow(-1.5)`, `logx` or `const`.
    pub fn parse(tag: &str) -> Result<Self> {
        let tag = tag.trim();
        if tag.eq_ignore_ascii_case("logx") {
            return Ok(BasisFn::LogX);
        }
        if tag.eq_ignore_ascii_case("const") {
            return Ok(BasisFn::Const);
        }
        if let Some(rest) = tag.strip_prefix("pow(") {
            if let Some(inner) = rest.strip_suffix(')') {
                let p: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad exponent in basis tag {tag:?}")))?;
                if p.is_finite() {
                    return Ok(BasisFn::Pow(p));
                }
            }
        }
        Err(Error::invalid(format!(
            "unknown basis tag {tag:?}; expected pow(p), logx or const"
        )))
    }
}

impl fmt::Display for BasisFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisFn::Pow(p) => write!(f, "pow({p})"),
            BasisFn::LogX => f.write_str("logx"),
            BasisFn::Const => f.write_str("const"),
        }
    }
}

impl Serialize for BasisFn {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Result of a linear fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Ordered fit functions.
    pub basis: Vec<BasisFn>,
    /// Fitted coefficients, matching `basis`.
    pub coefficients: Vec<f64>,
    /// Largest weighted residual |w (y - y_fit)|, in the units of the fitted
    /// quantity.
    pub max_residual: f64,
    /// Grid the fit ran on.
    pub grid: Vec<f64>,
    /// 1 / (smallest orthogonalized column norm) of the column-normalized
    /// design matrix; near 1 for a well-separated basis.
    pub condition_estimate: f64,
}

impl FitReport {
    /// Coefficient of the given basis function, if present.
    pub fn coefficient(&self, basis: &BasisFn) -> Option<f64> {
        self.basis
            .iter()
            .position(|b| b == basis)
            .map(|i| self.coefficients[i])
    }
}

const RANK_TOL: f64 = 1e-12;

/// Weighted linear least squares of `ys` against `basis` on `xs`.
///
/// Row i is scaled by `weights[i]` (equal weights when `None`). Fails with
/// [`Error::IllConditioned`] when the orthogonalized design loses more than
/// twelve digits.
pub fn fit_linear(
    xs: &[f64],
    ys: &[f64],
    basis: &[BasisFn],
    weights: Option<&[f64]>,
) -> Result<FitReport> {
    let m = xs.len();
    let k = basis.len();
    if k == 0 {
        return Err(Error::invalid("empty basis".to_string()));
    }
    if ys.len() != m {
        return Err(Error::invalid(format!(
            "grid and values disagree in length: {m} vs {}",
            ys.len()
        )));
    }
    if let Some(w) = weights {
        if w.len() != m {
            return Err(Error::invalid("weights length mismatch".to_string()));
        }
    }
    if m < k {
        return Err(Error::invalid(format!(
            "need at least as many points ({m}) as basis functions ({k})"
        )));
    }

    // Weighted design matrix, stored by column.
    let mut cols: Vec<Vec<f64>> = vec![vec![0.0; m]; k];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let w = weights.map_or(1.0, |w| w[i]);
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::invalid(format!("weights must be finite and > 0, got {w}")));
        }
        for (j, b) in basis.iter().enumerate() {
            cols[j][i] = w * b.eval(xs[i]);
        }
        rhs[i] = w * ys[i];
    }

    // Column normalization, then modified Gram-Schmidt: cols becomes Q, and
    // r holds the upper-triangular factor of the normalized design.
    let mut norms = vec![0.0; k];
    for j in 0..k {
        let n = l2(&cols[j]);
        if n == 0.0 {
            return Err(Error::IllConditioned { estimate: f64::INFINITY });
        }
        norms[j] = n;
        scale_in_place(&mut cols[j], 1.0 / n);
    }

    let mut r = vec![vec![0.0; k]; k];
    for j in 0..k {
        for i in 0..j {
            let (settled, active) = cols.split_at_mut(j);
            let proj = dot(&settled[i], &active[0]);
            r[i][j] = proj;
            for (c, qi) in active[0].iter_mut().zip(&settled[i]) {
                *c -= proj * qi;
            }
        }
        let n = l2(&cols[j]);
        r[j][j] = n;
        if n < RANK_TOL {
            return Err(Error::IllConditioned {
                estimate: if n > 0.0 { 1.0 / n } else { f64::INFINITY },
            });
        }
        scale_in_place(&mut cols[j], 1.0 / n);
    }
    let min_diag = (0..k).map(|j| r[j][j]).fold(f64::INFINITY, f64::min);
    let condition_estimate = 1.0 / min_diag;

    // Back substitution of R c = Q^T b for the normalized coefficients.
    let solve = |target: &[f64]| -> Vec<f64> {
        let qtb: Vec<f64> = (0..k).map(|j| dot(&cols[j], target)).collect();
        let mut c = vec![0.0; k];
        for j in (0..k).rev() {
            let mut v = qtb[j];
            for i in (j + 1)..k {
                v -= r[j][i] * c[i];
            }
            c[j] = v / r[j][j];
        }
        c
    };

    let weighted_residual = |coefficients: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|i| {
                let w = weights.map_or(1.0, |w| w[i]);
                let fit: f64 = basis
                    .iter()
                    .zip(coefficients)
                    .map(|(b, c)| c * b.eval(xs[i]))
                    .sum();
                w * (ys[i] - fit)
            })
            .collect()
    };

    let mut coefficients: Vec<f64> = solve(&rhs)
        .iter()
        .zip(&norms)
        .map(|(c, n)| c / n)
        .collect();

    // One step of iterative refinement recovers the digits modified
    // Gram-Schmidt loses on nearly collinear columns.
    let correction = solve(&weighted_residual(&coefficients));
    for (c, (d, n)) in coefficients.iter_mut().zip(correction.iter().zip(&norms)) {
        *c += d / n;
    }

    let max_residual = weighted_residual(&coefficients)
        .iter()
        .fold(0.0f64, |acc, r| acc.max(r.abs()));

    Ok(FitReport {
        basis: basis.to_vec(),
        coefficients,
        max_residual,
        grid: xs.to_vec(),
        condition_estimate,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn scale_in_place(a: &mut [f64], s: f64) {
    for v in a {
        *v *= s;
    }
}

/// `count` log-spaced points over [lo, hi] inclusive.
pub fn log_spaced_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
        return Err(Error::invalid(format!(
            "grid bounds must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if count == 0 {
        return Err(Error::invalid("grid needs at least one point".to_string()));
    }
    if count == 1 || lo == hi {
        return Ok(vec![lo]);
    }
    let (la, lb) = (lo.log10(), hi.log10());
    let step = (lb - la) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                10f64.powf(la + step * i as f64)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_a_known_coefficient_set_exactly() {
        // Synthetic data from known coefficients; recovery to 1e-10 checks
        // the machinery independently of any physics.
        let basis = [
            BasisFn::Pow(-1.5),
            BasisFn::Pow(-0.5),
            BasisFn::LogX,
            BasisFn::Const,
        ];
        let truth = [2.5, -1.25, 0.75, -0.3];
        let xs = log_spaced_grid(1e-5, 1e-2, 40).unwrap();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| {
                basis
                    .iter()
                    .zip(&truth)
                    .map(|(b, c)| c * b.eval(x))
                    .sum()
            })
            .collect();
        let weights: Vec<f64> = xs.iter().map(|x| x.powf(1.5)).collect();
        let report = fit_linear(&xs, &ys, &basis, Some(&weights)).unwrap();
        for (got, want) in report.coefficients.iter().zip(&truth) {
            assert!(
                ((got - want) / want).abs() < 1e-10,
                "recovered {got}, wanted {want}"
            );
        }
        assert!(report.max_residual < 1e-10);
        assert!(report.condition_estimate.is_finite());
    }

    #[test]
    fn coefficients_are_stable_under_grid_refinement() {
        let basis = [BasisFn::Pow(-1.5), BasisFn::Pow(-0.5), BasisFn::Const];
        let truth = [1.0, -6.0, 0.4];
        let fit_on = |count: usize| {
            let xs = log_spaced_grid(1e-4, 1e-2, count).unwrap();
            let ys: Vec<f64> = xs
                .iter()
                .map(|&x| {
                    basis
                        .iter()
                        .zip(&truth)
                        .map(|(b, c)| c * b.eval(x))
                        .sum::<f64>()
                        // A touch of deterministic pseudo-noise off the model.
                        + 1e-9 * (1e4 * x).sin()
                })
                .collect();
            fit_linear(&xs, &ys, &basis, None).unwrap()
        };
        let coarse = fit_on(30);
        let fine = fit_on(60);
        for (a, b) in coarse.coefficients.iter().zip(&fine.coefficients) {
            let allowed = 10.0 * (coarse.max_residual + fine.max_residual);
            assert!((a - b).abs() <= allowed, "|{a} - {b}| > {allowed}");
        }
    }

    #[test]
    fn rejects_rank_deficient_bases() {
        let xs = log_spaced_grid(1e-4, 1e-2, 20).unwrap();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x).collect();
        // Duplicate column: exactly collinear.
        let basis = [BasisFn::Pow(1.0), BasisFn::Pow(1.0)];
        assert!(matches!(
            fit_linear(&xs, &ys, &basis, None),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn validates_shapes_and_weights() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [1.0, 2.0];
        assert!(fit_linear(&xs, &ys, &[BasisFn::Const], None).is_err());
        let ys = [1.0, 2.0, 3.0];
        assert!(fit_linear(&xs, &ys, &[], None).is_err());
        assert!(fit_linear(&xs[..1], &ys[..1], &[BasisFn::Const, BasisFn::LogX], None).is_err());
        let w = [1.0, -1.0, 1.0];
        assert!(fit_linear(&xs, &ys, &[BasisFn::Const], Some(&w)).is_err());
    }

    #[test]
    fn basis_tags_round_trip() {
        for (tag, b) in [
            ("pow(-1.5)", BasisFn::Pow(-1.5)),
            ("pow(2)", BasisFn::Pow(2.0)),
            ("logx", BasisFn::LogX),
            ("const", BasisFn::Const),
        ] {
            assert_eq!(BasisFn::parse(tag).unwrap(), b);
            assert_eq!(BasisFn::parse(&b.to_string()).unwrap(), b);
        }
        assert!(BasisFn::parse("pow(abc)").is_err());
        assert!(BasisFn::parse("sin").is_err());
    }

    #[test]
    fn log_grid_is_inclusive_and_sorted() {
        let g = log_spaced_grid(1e-4, 1e-1, 121).unwrap();
        assert_eq!(g.len(), 121);
        assert!((g[0] - 1e-4).abs() < 1e-19);
        assert_eq!(*g.last().unwrap(), 1e-1);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(log_spaced_grid(0.0, 1.0, 5).is_err());
        assert!(log_spaced_grid(1e-3, 1e-4, 5).is_err());
        assert!(log_spaced_grid(1e-4, 1e-3, 0).is_err());
    }
}

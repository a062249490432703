//! Exact classical Casimir energies from the mode sums, plus a truncated
//! scattering log-determinant evaluator used as an independent oracle.
//!
//! For a concentric pair with radii ratio `rho`, the electromagnetic energy is
//!
//! ```text
//! F / k_B T = sum_{n >= 2} (n^2 - 1) ln(1 - rho^{2n})
//! ```
//!
//! and the Dirichlet-scalar one is `(1/2) sum_{n >= 1} n^2 ln(1 - rho^{2n})`.
//! Both are evaluated with compensated summation and a certified bound on the
//! dropped tail. The oracle route assembles the diagonal round-trip operator
//! mode by mode (index set (n, l, m, p), multiplicity 2(n^2 - 1) per shell)
//! and feeds it to a generic log-determinant routine instead of weighting the
//! closed-form summand.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ConcentricPair;
use crate::numeric::{ln_one_minus_exp_neg, one_minus_exp_neg, KahanSum};

/// Field theory selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoryKind {
    /// Maxwell field with perfect-conductor boundary conditions.
    #[serde(rename = "em")]
    ElectromagneticConductor,
    /// Free scalar with Dirichlet boundary conditions.
    #[serde(rename = "dirichlet")]
    DirichletScalar,
    /// Free scalar with Neumann boundary conditions. No exact mode sum is
    /// known; only the perturbative kernel route applies.
    #[serde(rename = "neumann")]
    NeumannScalar,
}

impl TheoryKind {
    /// Stable short key used in file output.
    pub fn key(&self) -> &'static str {
        match self {
            TheoryKind::ElectromagneticConductor => "em",
            TheoryKind::DirichletScalar => "dirichlet",
            TheoryKind::NeumannScalar => "neumann",
        }
    }
}

impl std::fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            TheoryKind::ElectromagneticConductor => "the electromagnetic conductor",
            TheoryKind::DirichletScalar => "the Dirichlet scalar",
            TheoryKind::NeumannScalar => "the Neumann scalar",
        };
        f.write_str(name)
    }
}

/// An energy in units of k_B T, with truncation metadata.
///
/// `n_max` is the highest retained multipole index and `tail_bound` a
/// certified upper bound on the magnitude of the dropped remainder.
/// Closed-form results carry `n_max = 0` and a zero bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyValue {
    pub value: f64,
    pub n_max: u32,
    pub tail_bound: f64,
}

impl EnergyValue {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            n_max: 0,
            tail_bound: 0.0,
        }
    }
}

/// Default relative tolerance of the exact series.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default cap on the number of retained shells before the series evaluation
/// gives up. Certification needs roughly 20/mu shells, so this covers mu down
/// to about 1e-6.
pub const DEFAULT_TERM_CAP: u32 = 20_000_000;

fn validate_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("tolerance must be finite and > 0, got {tol}")))
    }
}

/// ln(1 - rho^{2n}), evaluated through mu so the argument keeps full relative
/// precision even for rho close to 1.
#[inline]
fn shell_log_factor(mu: f64, n: u32) -> f64 {
    ln_one_minus_exp_neg(2.0 * n as f64 * mu)
}

/// Certified bound on |sum_{n > n_max} (n^2 - 1) ln(1 - rho^{2n})|.
///
/// Uses |ln(1 - y)| <= y / (1 - y), (n^2 - 1) < n^2 and the closed form of
/// the geometric-derivative tail sum_{n > N} n^2 q^n with q = rho^2.
pub fn truncation_bound(rho: f64, n_max: u32) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid(format!("rho must lie in (0, 1), got {rho}")));
    }
    Ok(n2_geometric_tail(-rho.ln(), n_max) / (1.0 - shell_entry(-rho.ln(), n_max + 1)))
}

/// sum_{n > N} n^2 q^n with q = e^{-2 mu}, in closed form:
/// (N+1)^2 Q / (1-q) + (2N+3) Q q / (1-q)^2 + 2 Q q^2 / (1-q)^3, Q = q^{N+1}.
fn n2_geometric_tail(mu: f64, n_max: u32) -> f64 {
    let q = (-2.0 * mu).exp();
    let omq = one_minus_exp_neg(2.0 * mu);
    let np1 = (n_max + 1) as f64;
    let big_q = shell_entry(mu, n_max + 1);
    big_q * (np1 * np1 / omq + (2.0 * np1 + 1.0) * q / (omq * omq) + 2.0 * q * q / (omq * omq * omq))
}

/// Round-trip diagonal entry rho^{2n} = e^{-2 n mu} of shell n.
#[inline]
fn shell_entry(mu: f64, n: u32) -> f64 {
    (-2.0 * n as f64 * mu).exp()
}

/// Shared driver for the exact mode sums: ascending n with Kahan
/// accumulation, stopping once the certified tail is below `tol` relative.
fn certified_sum<W, B>(
    pair: &ConcentricPair,
    tol: f64,
    term_cap: u32,
    start_n: u32,
    weight: W,
    tail: B,
) -> Result<EnergyValue>
where
    W: Fn(f64) -> f64,
    B: Fn(u32) -> f64,
{
    validate_tol(tol)?;
    let mu = pair.mu();
    let mut sum = KahanSum::new();
    let mut n = start_n;
    loop {
        sum.add(weight(n as f64) * shell_log_factor(mu, n));
        let bound = tail(n);
        if bound <= tol * sum.value().abs() {
            debug_assert!(sum.value() <= 0.0);
            return Ok(EnergyValue {
                value: sum.value(),
                n_max: n,
                tail_bound: bound,
            });
        }
        if n >= term_cap {
            return Err(Error::Convergence(format!(
                "exact series not certified to {tol:.2e} within {term_cap} shells \
                 (rho = {}, bound = {bound:.3e})",
                pair.rho()
            )));
        }
        n += 1;
    }
}

/// Exact electromagnetic energy sum_{n>=2} (n^2-1) ln(1 - rho^{2n}).
pub fn em_energy_exact(pair: &ConcentricPair, tol: f64) -> Result<EnergyValue> {
    em_energy_exact_capped(pair, tol, DEFAULT_TERM_CAP)
}

/// As [`em_energy_exact`], with an explicit cap on the number of shells.
pub fn em_energy_exact_capped(pair: &ConcentricPair, tol: f64, term_cap: u32) -> Result<EnergyValue> {
    let mu = pair.mu();
    certified_sum(pair, tol, term_cap, 2, |n| n * n - 1.0, |n| {
        n2_geometric_tail(mu, n) / (1.0 - shell_entry(mu, n + 1))
    })
}

/// Exact Dirichlet-scalar energy (1/2) sum_{n>=1} n^2 ln(1 - rho^{2n}).
pub fn dirichlet_energy_exact(pair: &ConcentricPair, tol: f64) -> Result<EnergyValue> {
    dirichlet_energy_exact_capped(pair, tol, DEFAULT_TERM_CAP)
}

/// As [`dirichlet_energy_exact`], with an explicit cap on the shells.
pub fn dirichlet_energy_exact_capped(
    pair: &ConcentricPair,
    tol: f64,
    term_cap: u32,
) -> Result<EnergyValue> {
    let mu = pair.mu();
    certified_sum(pair, tol, term_cap, 1, |n| 0.5 * n * n, |n| {
        0.5 * n2_geometric_tail(mu, n) / (1.0 - shell_entry(mu, n + 1))
    })
}

/// Exact energy for the requested theory. Neumann has no exact solution and
/// is rejected with a dedicated error.
pub fn exact_energy(theory: TheoryKind, pair: &ConcentricPair, tol: f64) -> Result<EnergyValue> {
    exact_energy_capped(theory, pair, tol, DEFAULT_TERM_CAP)
}

/// As [`exact_energy`], with an explicit cap on the shells.
pub fn exact_energy_capped(
    theory: TheoryKind,
    pair: &ConcentricPair,
    tol: f64,
    term_cap: u32,
) -> Result<EnergyValue> {
    match theory {
        TheoryKind::ElectromagneticConductor => em_energy_exact_capped(pair, tol, term_cap),
        TheoryKind::DirichletScalar => dirichlet_energy_exact_capped(pair, tol, term_cap),
        TheoryKind::NeumannScalar => Err(Error::NoExactSolution(theory)),
    }
}

/// One element of the multipole index set attached to a shell: angular
/// indices (l, m) and the parity label p. Only the count matters for the
/// diagonal operator; the harmonics themselves are never constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Mode {
    n: u32,
    l: u32,
    m: i64,
    parity: u8,
}

/// Enumerate the (n, l, m, p) index set for shells 2..=n_max: for each n,
/// l runs over 1..=n-1, m over -l..=l and p over the two parities, giving
/// the 2(n^2 - 1) modes of the shell.
fn modes(n_max: u32) -> impl Iterator<Item = Mode> {
    (2..=n_max).flat_map(|n| {
        (1..n).flat_map(move |l| {
            (-(l as i64)..=l as i64)
                .flat_map(move |m| (0..2u8).map(move |parity| Mode { n, l, m, parity }))
        })
    })
}

/// Number of modes of shell n, 2(n^2 - 1).
pub fn shell_multiplicity(n: u32) -> u64 {
    2 * (n as u64 * n as u64 - 1)
}

/// ln det(1 - Lambda) for a diagonal operator with the given entries.
fn logdet_one_minus_diagonal(entries: impl Iterator<Item = f64>) -> Result<f64> {
    let mut acc = KahanSum::new();
    for lambda in entries {
        if lambda.is_nan() || lambda >= 1.0 {
            return Err(Error::invalid(format!(
                "diagonal entry {lambda} leaves 1 - lambda non-positive"
            )));
        }
        acc.add((-lambda).ln_1p());
    }
    Ok(acc.value())
}

/// Casimir energy from the truncated scattering determinant.
///
/// Assembles the diagonal of U^21 T_1 U^12 T_2 — entry rho^{2n} repeated once
/// per mode (n, l, m, p) — for n in [2, n_max] and returns (1/2) ln det(1 -
/// round trip). This is the oracle route: it never touches the closed-form
/// (n^2 - 1)-weighted summand.
pub fn scattering_logdet_energy(pair: &ConcentricPair, n_max: u32) -> Result<EnergyValue> {
    if n_max < 2 {
        return Err(Error::invalid(format!("n_max must be >= 2, got {n_max}")));
    }
    // The enumeration walks ~(2/3) n_max^3 modes; keep accidental huge
    // requests bounded. The certified series covers high-shell needs.
    const MAX_ORACLE_SHELLS: u32 = 2000;
    if n_max > MAX_ORACLE_SHELLS {
        return Err(Error::invalid(format!(
            "n_max = {n_max} exceeds the enumerated-oracle limit {MAX_ORACLE_SHELLS}"
        )));
    }
    let mu = pair.mu();
    let logdet = logdet_one_minus_diagonal(modes(n_max).map(|mode| shell_entry(mu, mode.n)))?;
    Ok(EnergyValue {
        value: 0.5 * logdet,
        n_max,
        tail_bound: truncation_bound(pair.rho(), n_max)?,
    })
}

/// Electromagnetic energy by the independent k-resummation
///
/// ```text
/// F / k_B T = - sum_{k >= 1} (1/k) [ y (1+y)/(1-y)^3 - 1/(1-y) + 1 ],   y = rho^{2k},
/// ```
///
/// where the bracket is evaluated in the cancellation-free equivalent form
/// y^2 (3 - y) / (1 - y)^3. Used as a crosscheck on the n-sum; the two routes
/// share no summation order.
pub fn em_energy_k_sum(rho: f64, tol: f64) -> Result<f64> {
    // Tail: brackets beyond k are <= 3 y^2/(1-y)^3, and sum_{j>k} y_j^2 is
    // the geometric tail y_next^2 / (1 - rho^4).
    k_sum(
        rho,
        tol,
        |y, omy| y * y * (3.0 - y) / (omy * omy * omy),
        |y_next, omy_next, rho2| {
            3.0 * y_next * y_next / (omy_next * omy_next * omy_next * (1.0 - rho2 * rho2))
        },
    )
}

/// Dirichlet energy by the k-resummation
/// F_D / k_B T = -(1/2) sum_k (1/k) y (1+y) / (1-y)^3, y = rho^{2k}.
pub fn dirichlet_energy_k_sum(rho: f64, tol: f64) -> Result<f64> {
    // Tail: (1/2) y (1+y)/(1-y)^3 <= y/(1-y)^3, geometric in rho^2.
    k_sum(
        rho,
        tol,
        |y, omy| 0.5 * y * (1.0 + y) / (omy * omy * omy),
        |y_next, omy_next, rho2| y_next / (omy_next * omy_next * omy_next * (1.0 - rho2)),
    )
}

fn k_sum(
    rho: f64,
    tol: f64,
    bracket: impl Fn(f64, f64) -> f64,
    tail: impl Fn(f64, f64, f64) -> f64,
) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid(format!("rho must lie in (0, 1), got {rho}")));
    }
    validate_tol(tol)?;
    const K_CAP: u32 = 5_000_000;

    let mu = -rho.ln();
    let rho2 = (-2.0 * mu).exp();
    let mut sum = KahanSum::new();
    for k in 1..=K_CAP {
        let t = 2.0 * k as f64 * mu;
        let y = (-t).exp();
        let omy = one_minus_exp_neg(t);
        sum.add(bracket(y, omy) / k as f64);

        let y_next = y * rho2;
        let omy_next = omy + y - y_next;
        let bound = tail(y_next, omy_next, rho2) / (k + 1) as f64;
        if bound <= tol * sum.value().abs() {
            return Ok(-sum.value());
        }
    }
    Err(Error::Convergence(format!(
        "k-resummation not certified to {tol:.2e} within {K_CAP} terms (rho = {rho})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(rho: f64) -> ConcentricPair {
        ConcentricPair::from_rho(rho).unwrap()
    }

    // Desk reference obtained by direct partial summation; the dual-route
    // tests below pin the values far more tightly.
    const EM_HALF_DESK: f64 = -0.414637;
    const DIRICHLET_HALF_DESK: f64 = -0.39391;

    #[test]
    fn em_energy_matches_desk_summation() {
        let e = em_energy_exact(&pair(0.5), 1e-12).unwrap();
        assert!((e.value - EM_HALF_DESK).abs() < 1e-5, "got {}", e.value);

        let e = em_energy_exact(&pair(0.25), 1e-12).unwrap();
        // Dominated by the n = 2 term 3 ln(1 - 0.25^4).
        assert!((e.value - (-0.013949)).abs() < 1e-6, "got {}", e.value);
        let n2_term = 3.0 * (1.0f64 - 0.25f64.powi(4)).ln();
        assert!(n2_term / e.value > 0.8);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn frozen_regression_values() {
        // Frozen after the two summation orders agreed to 3e-15; guards
        // future refactors of the series drivers.
        let cases = [
            (em_energy_exact(&pair(0.5), 1e-13).unwrap().value, -0.41463715855682903),
            (em_energy_exact(&pair(0.25), 1e-13).unwrap().value, -0.013949114103950258),
            (dirichlet_energy_exact(&pair(0.5), 1e-13).unwrap().value, -0.3939113003553445),
            (dirichlet_energy_exact(&pair(0.25), 1e-13).unwrap().value, -0.041330990576685593),
        ];
        for (got, want) in cases {
            assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn energies_vanish_for_tiny_rho() {
        let e = em_energy_exact(&pair(1e-8), 1e-12).unwrap();
        assert!(e.value <= 0.0);
        assert!(e.value.abs() < 1e-30, "got {}", e.value);

        let e = dirichlet_energy_exact(&pair(1e-8), 1e-12).unwrap();
        assert!(e.value <= 0.0);
        assert!(e.value.abs() < 1e-15, "got {}", e.value);
    }

    #[test]
    fn em_energy_certifies_the_tail() {
        for &(rho, tol) in &[(0.3, 1e-12), (0.9, 1e-10), (0.99, 1e-8)] {
            let e = em_energy_exact(&pair(rho), tol).unwrap();
            assert!(e.tail_bound >= 0.0);
            assert!(e.tail_bound <= tol * e.value.abs());
            assert!(e.n_max >= 2);
        }
    }

    #[test]
    fn em_energy_rejects_bad_inputs() {
        assert!(ConcentricPair::from_rho(1.0).is_err());
        assert!(em_energy_exact(&pair(0.5), 0.0).is_err());
        assert!(em_energy_exact(&pair(0.5), -1e-3).is_err());
        // Cap too small to certify.
        assert!(matches!(
            em_energy_exact_capped(&pair(0.9), 1e-12, 10),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn dirichlet_energy_matches_desk_summation() {
        let e = dirichlet_energy_exact(&pair(0.5), 1e-12).unwrap();
        assert!((e.value - DIRICHLET_HALF_DESK).abs() < 1e-5, "got {}", e.value);

        let e = dirichlet_energy_exact(&pair(0.25), 1e-12).unwrap();
        assert!((e.value - (-0.041331)).abs() < 1e-6, "got {}", e.value);
        // Leading term 0.5 ln(1 - 0.25^2) = 0.5 ln(0.9375).
        assert!((e.value - 0.5 * 0.9375f64.ln()).abs() < 1e-2);
    }

    #[test]
    fn neumann_has_no_exact_series() {
        let err = exact_energy(TheoryKind::NeumannScalar, &pair(0.5), 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoExactSolution(TheoryKind::NeumannScalar)));
        assert!(err.to_string().contains("no exact solution"));
    }

    #[test]
    fn mode_enumeration_counts_the_degeneracy() {
        for n in 2..=12u32 {
            let count = modes(n).filter(|m| m.n == n).count() as u64;
            assert_eq!(count, shell_multiplicity(n), "shell {n}");
        }
        assert_eq!(shell_multiplicity(2), 6);
        assert_eq!(shell_multiplicity(3), 16);
    }

    #[test]
    fn logdet_single_shell_value() {
        // n_max = 2: multiplicity 6, energy 3 ln(1 - rho^4).
        let e = scattering_logdet_energy(&pair(0.5), 2).unwrap();
        let expected = 3.0 * (1.0f64 - 0.5f64.powi(4)).ln();
        assert!((e.value - expected).abs() < 1e-15, "got {}", e.value);
        assert!((e.value - (-0.1936156)).abs() < 1e-7);
    }

    #[test]
    fn logdet_vanishes_for_tiny_rho() {
        let e = scattering_logdet_energy(&pair(1e-9), 12).unwrap();
        assert!(e.value.abs() < 1e-30);
    }

    #[test]
    fn logdet_rejects_out_of_range_n_max() {
        assert!(scattering_logdet_energy(&pair(0.5), 1).is_err());
        assert!(scattering_logdet_energy(&pair(0.5), 0).is_err());
        assert!(scattering_logdet_energy(&pair(0.5), 100_000).is_err());
    }

    #[test]
    fn oracle_equivalence_against_the_exact_series() {
        // Adequate n_max per rho so the retained shells dominate; the
        // allowance covers the certified tails of both routes.
        for &(rho, n_max) in &[(0.1, 30), (0.3, 40), (0.5, 50), (0.7, 120), (0.9, 300)] {
            let exact = em_energy_exact(&pair(rho), 1e-15).unwrap();
            let oracle = scattering_logdet_energy(&pair(rho), n_max).unwrap();
            let allowed = 1e-12 + oracle.tail_bound + exact.tail_bound;
            assert!(
                (exact.value - oracle.value).abs() <= allowed,
                "rho = {rho}: |{} - {}| > {allowed:.3e}",
                exact.value,
                oracle.value
            );
        }
    }

    #[test]
    fn k_sum_crosscheck_matches_the_n_sum() {
        for &rho in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let n_sum = em_energy_exact(&pair(rho), 1e-14).unwrap().value;
            let k_sum = em_energy_k_sum(rho, 1e-14).unwrap();
            assert!(
                ((n_sum - k_sum) / n_sum).abs() < 1e-10,
                "rho = {rho}: {n_sum} vs {k_sum}"
            );

            let n_sum = dirichlet_energy_exact(&pair(rho), 1e-14).unwrap().value;
            let k_sum = dirichlet_energy_k_sum(rho, 1e-14).unwrap();
            assert!(
                ((n_sum - k_sum) / n_sum).abs() < 1e-10,
                "Dirichlet rho = {rho}: {n_sum} vs {k_sum}"
            );
        }
    }

    #[test]
    fn energies_are_negative_and_decreasing_in_rho() {
        let mut prev_em = 0.0;
        let mut prev_d = 0.0;
        for i in 1..=18 {
            let rho = i as f64 * 0.05;
            let em = em_energy_exact(&pair(rho), 1e-12).unwrap().value;
            let d = dirichlet_energy_exact(&pair(rho), 1e-12).unwrap().value;
            assert!(em < 0.0 && d < 0.0);
            assert!(em < prev_em, "EM energy not decreasing at rho = {rho}");
            assert!(d < prev_d, "Dirichlet energy not decreasing at rho = {rho}");
            prev_em = em;
            prev_d = d;
        }
    }

    #[test]
    fn em_magnitude_exceeds_dirichlet_for_close_spheres() {
        // For rho below ~0.47 the scalar n = 1 mode dominates and the
        // ordering reverses, so the regression is pinned to the close
        // (large-rho) regime the comparison figures probe.
        for &rho in &[0.5, 0.6, 0.7, 0.8, 0.9, 0.95] {
            let em = em_energy_exact(&pair(rho), 1e-12).unwrap().value;
            let d = dirichlet_energy_exact(&pair(rho), 1e-12).unwrap().value;
            assert!(em.abs() > d.abs(), "rho = {rho}: |{em}| <= |{d}|");
        }
    }

    #[test]
    fn truncation_bound_brackets_the_true_tail() {
        // Explicit tail of the EM series beyond n_max = 10 at rho = 0.5.
        let rho: f64 = 0.5;
        let n_max = 10u32;
        let mut true_tail = 0.0;
        for n in (n_max + 1)..200 {
            let y = rho.powi(2 * n as i32);
            true_tail += (n as f64 * n as f64 - 1.0) * (1.0 - y).ln();
        }
        let true_tail = true_tail.abs();
        let bound = truncation_bound(rho, n_max).unwrap();
        assert!(bound >= true_tail, "bound {bound} < tail {true_tail}");
        assert!(bound <= 10.0 * true_tail, "bound {bound} not within 10x of {true_tail}");
        assert!((true_tail - 4.0e-5).abs() < 1e-5);
    }

    #[test]
    fn truncation_bound_decreases_in_n_max() {
        for &rho in &[0.2, 0.5, 0.9] {
            let mut prev = f64::INFINITY;
            for n_max in 2..60 {
                let b = truncation_bound(rho, n_max).unwrap();
                assert!(b < prev, "bound not decreasing at rho = {rho}, n = {n_max}");
                assert!(b >= 0.0);
                prev = b;
            }
        }
    }

    #[test]
    fn truncation_bound_vanishes_for_tiny_rho() {
        let b = truncation_bound(1e-8, 4).unwrap();
        assert!(b < 1e-70, "got {b}");
    }
}

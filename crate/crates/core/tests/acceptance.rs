//! Acceptance suite: one test per validation criterion, each printing its
//! pass/fail report line. Run with `cargo test --test acceptance --
//! --nocapture` to see every line.

use casimir_core::validation::{self, CriterionResult};

fn check(result: CriterionResult) {
    println!("{}", result.report_line());
    assert!(result.passed, "{}", result.report_line());
}

#[test]
fn criterion_01_oracle_equivalence() {
    check(validation::c01_oracle_equivalence());
}

#[test]
fn criterion_02_exact_value_regression() {
    check(validation::c02_exact_value_regression());
}

#[test]
fn criterion_03_pfa_error_at_two_thousandths() {
    check(validation::c03_pfa_error());
}

#[test]
fn criterion_04_de_error_at_two_thousandths() {
    check(validation::c04_de_error());
}

#[test]
fn criterion_05_kernel_matching_betas() {
    check(validation::c05_kernel_matching());
}

#[test]
fn criterion_06_plane_plane_consistency() {
    check(validation::c06_plane_plane_consistency());
}

#[test]
fn criterion_07_ntlo_extraction() {
    check(validation::c07_ntlo_extraction());
}

#[test]
fn criterion_08_log_nntlo_and_sign_resolution() {
    check(validation::c08_log_nntlo());
}

#[test]
fn criterion_09_dirichlet_nntlo() {
    check(validation::c09_dirichlet_nntlo());
}

#[test]
fn criterion_10_pfa_quadrature() {
    check(validation::c10_pfa_quadrature());
}

#[test]
fn criterion_11_figure_reproduction() {
    check(validation::c11_figure_reproduction());
}

#[test]
fn criterion_12_suite_budget_and_determinism() {
    let results = validation::run_all();
    assert_eq!(results.len(), 12);
    let budget = results.last().unwrap();
    println!("{}", budget.report_line());
    assert!(budget.passed, "{}", budget.report_line());
    // The closing criterion only gates budget and determinism; the others
    // have their own tests above, but a regression here should fail loudly
    // too.
    for r in &results {
        assert!(r.passed, "{}", r.report_line());
    }
}

//! End-to-end acceptance suite.
//!
//! Each test runs one named verification from `geomphase::checks`, prints
//! its one-line report (visible under `--nocapture`, and embedded in the
//! panic message on failure), asserts it passed, and where the contract
//! includes a runtime budget, asserts the budget too. Budgets are asserted
//! on the wall-clock time of the underlying computation in the default
//! (unoptimized) test profile, so they hold with a wide margin in release
//! builds.

use std::time::{Duration, Instant};

use geomphase::checks::{
    check_circuit_agreement, check_csv_determinism, check_limiting_cases,
    check_pseudo_pure_linearity, check_scheme_offset, check_spectrometer_readout,
    check_transport_residuals, check_uhlmann_field_conditions, CheckOutcome,
};
use geomphase::phase::SchemeKind;
use geomphase::sweep::{emit_csv, fig2_table, fig4_table};

fn report(outcome: &CheckOutcome, elapsed: Duration, budget: Option<Duration>) {
    println!("{} [{:.3}s]", outcome.line(), elapsed.as_secs_f64());
    assert!(outcome.passed, "{}", outcome.line());
    if let Some(budget) = budget {
        assert!(
            elapsed <= budget,
            "{} took {:.3}s, budget {:.3}s",
            outcome.name,
            elapsed.as_secs_f64(),
            budget.as_secs_f64()
        );
    }
}

#[test]
fn sjoqvist_phase_matches_closed_form_up_to_a_constant_offset() {
    let start = Instant::now();
    let outcome = check_scheme_offset(SchemeKind::Sjoqvist);
    report(&outcome, start.elapsed(), Some(Duration::from_secs(1)));
}

#[test]
fn uhlmann_phase_matches_closed_form_up_to_a_constant_offset() {
    let start = Instant::now();
    let outcome = check_scheme_offset(SchemeKind::Uhlmann);
    report(&outcome, start.elapsed(), Some(Duration::from_secs(1)));
}

#[test]
fn uhlmann_ancilla_field_satisfies_both_conditions() {
    let start = Instant::now();
    let outcome = check_uhlmann_field_conditions();
    report(&outcome, start.elapsed(), None);
}

#[test]
fn transport_residuals_vanish_at_interior_times() {
    let start = Instant::now();
    let outcome = check_transport_residuals();
    report(&outcome, start.elapsed(), Some(Duration::from_secs(1)));
}

#[test]
fn interferometer_circuit_reproduces_the_tensor_amplitude() {
    let start = Instant::now();
    let outcome = check_circuit_agreement();
    report(&outcome, start.elapsed(), Some(Duration::from_secs(1)));
}

#[test]
fn pseudo_pure_admixture_scales_visibility_without_moving_the_phase() {
    let start = Instant::now();
    let outcome = check_pseudo_pure_linearity();
    report(&outcome, start.elapsed(), None);
}

#[test]
fn spectrometer_phase_tracks_the_density_matrix_phase() {
    let start = Instant::now();
    let outcome = check_spectrometer_readout();
    report(&outcome, start.elapsed(), Some(Duration::from_secs(30)));
}

#[test]
fn limiting_cases_recover_the_known_phases() {
    let start = Instant::now();
    let outcome = check_limiting_cases();
    report(&outcome, start.elapsed(), None);
}

#[test]
fn standard_tables_generate_quickly_and_deterministically() {
    // Generation budget covers both standard tables produced once.
    let start = Instant::now();
    let fig2 = fig2_table().expect("fig2 table");
    let fig4 = fig4_table().expect("fig4 table");
    let elapsed = start.elapsed();
    assert!(
        elapsed <= Duration::from_secs(10),
        "table generation took {:.3}s, budget 10s",
        elapsed.as_secs_f64()
    );
    assert!(!emit_csv(&fig2).is_empty());
    assert!(!emit_csv(&fig4).is_empty());

    let start = Instant::now();
    let outcome = check_csv_determinism();
    report(&outcome, start.elapsed(), None);
}

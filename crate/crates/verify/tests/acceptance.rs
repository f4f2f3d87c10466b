//! One test per acceptance criterion. Each prints a single verdict line to
//! the unbuffered stderr, so the summary survives output capture.

use std::io::Write;

use jetvar_verify::*;

fn report(v: Verdict) {
    let mut text = format!("\n{}", v.line());
    text.push('\n');
    for d in &v.details {
        text.push_str(&format!("      {d}\n"));
    }
    let _ = std::io::stderr().write_all(text.as_bytes());
    assert!(v.pass, "{}", v.line());
}

#[test]
fn ac01_momenta() {
    report(momenta_golden());
}

#[test]
fn ac02_lepage_excess() {
    report(lepage_golden());
}

#[test]
fn ac03_field_equations() {
    report(euler_lagrange_golden());
}

#[test]
fn ac04_reference_pdes() {
    report(pde_derivations());
}

#[test]
fn ac05_bicomplex_identities() {
    report(property_suite());
}

#[test]
fn ac06_null_lagrangians() {
    report(null_lagrangian_closure());
}

#[test]
fn ac07_numeric_oracle() {
    report(numeric_oracle());
}

#[test]
fn ac08_first_variation() {
    report(first_variation_identity());
}

#[test]
fn ac09_divergence_potentials() {
    report(divergence_recombination());
}

#[test]
fn ac10_command_line() {
    report(cli_end_to_end());
}

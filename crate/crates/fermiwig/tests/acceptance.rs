//! One PASS/FAIL line per acceptance criterion.
//!
//! Tolerances: exact-ring checks pass only on a zero residual; the ODE
//! closed forms must stay below 1e-10 and RK4 endpoints within 1e-8.
//!
//! The trace identity of criterion 11 does not hold (the Berezin integral of
//! the Wigner functional gives the supertrace), so that line reports FAIL.
//! The test itself asserts that every other criterion passes and that
//! criterion 11 fails only on trace and normalization checks.

use fermiwig::modes::ModeSet;
use fermiwig::overlaps::{verify_h_odes, verify_named_overlaps, verify_overlap_forms};
use fermiwig::random::{random_param, random_real_param, rng};
use fermiwig::scenario::run_suite;
use fermiwig::{Check, Coeff, Qi, Qs2, Registry, RingName};

const ODE_TOL: f64 = 1e-10;
const RK4_TOL: f64 = 1e-8;
const SEEDS: u64 = 20;

fn suite(name: &str, ring: RingName, k: usize, seed: u64, samples: usize) -> Vec<Check> {
    run_suite(name, ring, &ModeSet::new(k), seed, samples).unwrap_or_else(|e| panic!("{name} at K={k}: {e}"))
}

struct Outcome {
    n: usize,
    passed: bool,
    failed_ids: Vec<String>,
}

fn criterion(n: usize, title: &str, checks: Vec<Check>) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    let passed = !checks.is_empty() && failed.is_empty();
    println!(
        "{} {n:>2}. {title} ({} checks, {} failed)",
        if passed { "PASS" } else { "FAIL" },
        checks.len(),
        failed.len()
    );
    for c in &failed {
        println!("        [{}] {} : {}{}", c.suite, c.id, c.anchor, c.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default());
    }
    Outcome { n, passed, failed_ids: failed.iter().map(|c| c.id.clone()).collect() }
}

fn c1_car_bogoliubov() -> Vec<Check> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.extend(suite("car", RingName::Rational, k, 0, 1));
        out.extend(suite("bogoliubov", RingName::RationalSqrt2, k, 0, 1));
    }
    out
}

fn c2_adjoint() -> Vec<Check> {
    (1..=3).flat_map(|k| suite("adjoint", RingName::RationalSqrt2, k, 0, 1)).collect()
}

fn c3_commutators() -> Vec<Check> {
    let mut out = Vec::new();
    for k in 1..=2 {
        for seed in 0..SEEDS {
            out.extend(suite("commutators", RingName::Rational, k, seed, 1));
        }
    }
    out
}

fn c4_conjugations() -> Vec<Check> {
    suite("exp-conjugation", RingName::Rational, 1, 0, 1)
}

fn c5_eigenstates() -> Vec<Check> {
    (1..=2).flat_map(|k| suite("eigenstates", RingName::RationalSqrt2, k, 0, 3)).collect()
}

fn c6_disentanglement() -> Vec<Check> {
    suite("disentanglement", RingName::Rational, 1, 0, 3)
}

fn c7_odes() -> Vec<Check> {
    verify_h_odes(90, ODE_TOL, RK4_TOL).unwrap()
}

fn c8_overlaps() -> Vec<Check> {
    let modes = ModeSet::new(1);
    let ts = [Qi::from_ratio(1, 3), Qi::from_ratio(1, 2), Qi::from_int(2), Qi::from_ratio(-3, 2)];
    let mut out = Vec::new();
    for seed in 0..SEEDS {
        let mut r = rng(seed);
        let reg = Registry::new();
        let a = random_param::<Qi>(&reg, "A*", &modes, &mut r).unwrap();
        let b = random_param::<Qi>(&reg, "B", &modes, &mut r).unwrap();
        out.extend(verify_overlap_forms(&modes, &a, &b, &ts, &seed.to_string()).unwrap());
    }
    for seed in 0..3 {
        let mut r = rng(100 + seed);
        let reg = Registry::new();
        let fs = random_real_param::<Qs2>(&reg, "f*", &modes, &mut r).unwrap();
        let f = random_real_param::<Qs2>(&reg, "f", &modes, &mut r).unwrap();
        out.extend(verify_named_overlaps(&modes, &fs, &f, &seed.to_string()).unwrap());
    }
    out
}

fn c9_delta() -> Vec<Check> {
    (1..=2).flat_map(|k| suite("delta", RingName::LaurentEps, k, 0, 3)).collect()
}

/// Returns the criterion checks and the separate completeness-vs-Λ_fin
/// comparison, which the criterion does not claim.
fn c10_completeness_fourier() -> (Vec<Check>, Vec<Check>) {
    let mut out = Vec::new();
    let mut lambda = Vec::new();
    for k in 1..=3 {
        for c in suite("completeness", RingName::RationalSqrt2, k, 0, 1) {
            if c.id == "completeness = Λ_fin" {
                lambda.push(c.with_detail(format!("M = {}", 2 * k)));
            } else {
                out.push(c);
            }
        }
        out.extend(suite("fourier", RingName::RationalSqrt2, k, 0, 3));
    }
    (out, lambda)
}

fn c11_wigner() -> Vec<Check> {
    let mut out = suite("wigner", RingName::RationalSqrt2, 1, 0, 3);
    out.extend(suite("star", RingName::RationalSqrt2, 1, 0, 2));
    out
}

fn c12_majorana() -> Vec<Check> {
    suite("majorana", RingName::RationalSqrt2, 1, 0, 1)
}

fn main() {
    let (c10, lambda_note) = c10_completeness_fourier();
    let outcomes = vec![
        criterion(1, "CAR and Bogoliubov tables at M = 2, 4, 6", c1_car_bogoliubov()),
        criterion(2, "fermionic adjoint ĝ‡ = ĝ, ĥ‡ = ĥ", c2_adjoint()),
        criterion(3, "fifteen commutators at M = 2, 4 over 20 seeds", c3_commutators()),
        criterion(4, "exponential conjugations for c ∈ {1, 1/2, −2}", c4_conjugations()),
        criterion(5, "eigen-equations and sign conditions at M = 2, 4", c5_eigenstates()),
        criterion(6, "disentanglement identity and vacuum overlap", c6_disentanglement()),
        criterion(7, "h-function ODEs (< 1e-10) and RK4 (< 1e-8)", c7_odes()),
        criterion(8, "analytic = direct overlaps over 20 seeds; named overlaps", c8_overlaps()),
        criterion(9, "delta overlaps share Λ_fin; sifting on Ω = 4", c9_delta()),
        criterion(10, "q/p completeness, inner-product closure, double Fourier", c10),
        criterion(11, "Wigner symbols, Weyl roundtrip, trace, star products", c11_wigner()),
        criterion(12, "Majorana eigenpairs, unbiasedness, obstruction", c12_majorana()),
    ];
    for c in &lambda_note {
        println!(
            "NOTE completeness constant vs Λ_fin at {}: {}",
            c.detail.as_deref().unwrap_or(""),
            if c.passed() { "equal" } else { "differ by the sifting sign" }
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} criteria pass", outcomes.len());

    for o in &outcomes {
        if o.n == 11 {
            assert!(
                o.failed_ids.iter().all(|id| id.starts_with("trace ") || id.starts_with("normalization ")),
                "criterion 11 regressed beyond the trace identity: {:?}",
                o.failed_ids
            );
            assert!(!o.failed_ids.is_empty(), "trace identity unexpectedly holds; update the README");
        } else {
            assert!(o.passed, "criterion {} failed: {:?}", o.n, o.failed_ids);
        }
    }
}

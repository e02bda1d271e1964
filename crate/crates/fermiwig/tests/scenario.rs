use fermiwig::expr::{parse_functional, parse_operator};
use fermiwig::scenario::{run_suite, suite_info, SUITES};
use fermiwig::wigner::PhaseSpace;
use fermiwig::{run_scenario, Coeff, Error, FockOperator, Grass, ModeSet, Qi, Qs2, Registry, RingName, Scenario};

fn scenario(json: &str) -> Scenario {
    Scenario::from_json(json).unwrap()
}

#[test]
fn config_defaults() {
    let sc = scenario(r#"{"modes": {"k_points": 2}, "ring": "laurent-eps"}"#);
    assert_eq!(sc.modes.spins, 2);
    assert_eq!(sc.samples, 20);
    assert_eq!(sc.seed, 0);
    assert_eq!(sc.ring, RingName::LaurentEps);
    assert_eq!(sc.mode_set().unwrap().m(), 4);
    let names: Vec<_> = sc.resolved_suites().unwrap().iter().map(|s| s.name).collect();
    assert_eq!(names, ["h-odes", "delta"]);
}

#[test]
fn config_rejections() {
    assert!(matches!(Scenario::from_json(r#"{"modes": {"k_points": 1}, "ring": "rational", "extra": 1}"#), Err(Error::Config(_))));
    assert!(matches!(Scenario::from_json(r#"{"modes": {"k_points": 1}, "ring": "quaternion"}"#), Err(Error::Config(_))));
    assert_eq!(scenario(r#"{"modes": {"k_points": 7}, "ring": "rational"}"#).mode_set(), Err(Error::MemoryGuard(14)));
    assert!(matches!(
        scenario(r#"{"modes": {"k_points": 1, "spins": 3}, "ring": "rational"}"#).mode_set(),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        scenario(r#"{"modes": {"k_points": 1, "epsilon": [["(0,0)", "(1,0)"], ["(-1,0)", "(0,0)"]]}, "ring": "rational"}"#).mode_set(),
        Err(Error::InvalidEpsilon(_))
    ));
    assert!(matches!(
        scenario(r#"{"modes": {"k_points": 2, "weights": ["1"]}, "ring": "rational"}"#).mode_set(),
        Err(Error::Config(_))
    ));
}

#[test]
fn suite_ring_compatibility() {
    let sc = scenario(r#"{"modes": {"k_points": 1}, "ring": "rational", "suites": ["delta"]}"#);
    assert_eq!(sc.resolved_suites().err(), Some(Error::SuiteRing { suite: "delta".into(), ring: "rational".into() }));
    let sc = scenario(r#"{"modes": {"k_points": 2}, "ring": "rational-sqrt2", "suites": ["star"]}"#);
    assert!(matches!(sc.resolved_suites(), Err(Error::Config(_))));
    assert!(SUITES.iter().all(|s| !s.rings.is_empty()));
    assert!(suite_info("nonesuch").is_none());
}

#[test]
fn float_ring_ode_residuals() {
    let sc = scenario(r#"{"modes": {"k_points": 1}, "ring": "float", "suites": ["h-odes"]}"#);
    let report = run_scenario(&sc).unwrap();
    assert!(report.all_passed());
    let worst = report.checks.iter().filter(|c| c.id.starts_with("closed")).map(|c| c.residual).fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn reports_are_reproducible() {
    let sc = scenario(r#"{"modes": {"k_points": 1}, "ring": "rational", "suites": ["commutators", "disentanglement"], "seed": 9, "samples": 3}"#);
    let a = run_scenario(&sc).unwrap().without_timings();
    let b = run_scenario(&sc).unwrap().without_timings();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.all_passed());
    assert!(a.checks.iter().all(|c| !c.anchor.is_empty()));
}

#[test]
fn suite_seeds_are_independent_of_selection() {
    let modes = ModeSet::new(1);
    let alone = run_scenario(&scenario(r#"{"modes": {"k_points": 1}, "ring": "rational", "suites": ["commutators"], "samples": 2}"#)).unwrap();
    let together = run_scenario(&scenario(r#"{"modes": {"k_points": 1}, "ring": "rational", "suites": ["car", "commutators"], "samples": 2}"#)).unwrap();
    let tail: Vec<_> = together.checks.iter().filter(|c| c.suite == "commutators").cloned().collect();
    assert_eq!(alone.checks, tail);
    assert!(run_suite("car", RingName::Rational, &modes, 0, 1).unwrap().iter().all(|c| c.suite == "car"));
}

#[test]
fn expression_parser() {
    let modes = ModeSet::new(1);
    let p = |s: &str| parse_operator::<Qs2>(s, &modes).unwrap();
    assert!(p("a0 a+0 + a+0 a0").action_eq(&FockOperator::identity(2)));
    assert!(p("2*(a+1 - a+1) + 1/2 - 1/2").is_zero_action());
    assert!(p("i a0 * i").action_eq(&FockOperator::a(2, 0).neg()));
    assert!(matches!(parse_operator::<Qi>("q0", &modes), Err(Error::NoSqrt2(_))));
    assert!(matches!(parse_operator::<Qs2>("op 3 | [(1,0)] a0", &modes), Err(Error::ModeMismatch(3, 2))));
    assert!(matches!(parse_operator::<Qs2>("a0 )", &modes), Err(Error::Parse { pos: 3, .. })));
    assert!(matches!(parse_operator::<Qs2>("1/0", &modes), Err(Error::Parse { .. })));

    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg).unwrap();
    let w = parse_functional("q0 p1 - 1/2", &ps).unwrap();
    assert_eq!(w.value, Grass::gen(ps.q[0]).mul(&Grass::gen(ps.p[1])).sub(&Grass::scalar(Qs2::from_ratio(1, 2))));
    assert!(matches!(parse_functional("a0", &ps), Err(Error::Parse { pos: 0, .. })));
}

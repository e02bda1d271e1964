use fermiwig::eigenstates::{render_right, Kind, Prefactor};
use fermiwig::random::{random_operator, random_param, rng};
use fermiwig::report::summarize;
use fermiwig::serialize::TextForm;
use fermiwig::wigner::{wigner_transform, PhaseSpace, PhaseSpaceFunctional};
use fermiwig::{Check, Coeff, Error, Float, FockBra, FockOperator, FockState, Grass, ModeSet, Qi, Qs2, Registry, RunReport};
use proptest::prelude::*;

fn qi() -> impl Strategy<Value = Qi> {
    (-9i64..=9, 1i64..=7, -9i64..=9, 1i64..=7)
        .prop_map(|(a, b, c, d)| Qi::from_ratio(a, b).add(&Qi::i().mul(&Qi::from_ratio(c, d))))
}

fn qs2() -> impl Strategy<Value = Qs2> {
    (qi(), qi()).prop_map(|(a, b)| Qs2::new(a, b))
}

fn element<C: Coeff + 'static>(c: impl Strategy<Value = C>) -> impl Strategy<Value = Grass<C>> {
    prop::collection::vec((0u64..(1 << 10), c), 0..8)
        .prop_map(|ts| ts.into_iter().fold(Grass::zero(), |acc, (m, c)| acc.add(&Grass::term(m, c))))
}

proptest! {
    #[test]
    fn grassmann_roundtrip_rational(g in element(qi())) {
        prop_assert_eq!(Grass::<Qi>::from_canonical(&g.to_canonical()).unwrap(), g);
    }

    #[test]
    fn grassmann_roundtrip_sqrt2(g in element(qs2())) {
        prop_assert_eq!(Grass::<Qs2>::from_canonical(&g.to_canonical()).unwrap(), g);
    }

    #[test]
    fn operator_roundtrip(seed in 0u64..500) {
        let op = random_operator::<Qs2>(2, 5, &mut rng(seed));
        prop_assert_eq!(FockOperator::<Qs2>::from_canonical(&op.to_canonical()).unwrap(), op);
    }

    #[test]
    fn ket_and_bra_roundtrip(amps in prop::collection::vec(element(qi()), 8)) {
        let ket = FockState { m: 3, amps: amps.clone() };
        prop_assert_eq!(FockState::<Qi>::from_canonical(&ket.to_canonical()).unwrap(), ket);
        let bra = FockBra { m: 3, amps };
        prop_assert_eq!(FockBra::<Qi>::from_canonical(&bra.to_canonical()).unwrap(), bra);
    }

    #[test]
    fn float_roundtrip_within_tolerance(re in -1e3f64..1e3, im in -1e3f64..1e3, m in 0u64..64) {
        let c = Float(num_complex::Complex64::new(re, im));
        let g = Grass::term(m, c);
        let back = Grass::<Float>::from_canonical(&g.to_canonical()).unwrap();
        prop_assert!(back.coeff(m).approx_eq(&c, 1e-12));
    }
}

#[test]
fn simple_element_roundtrip() {
    // θ₁θ₂ − ½θ₃
    let g = Grass::<Qi>::monomial(&[1, 2]).sub(&Grass::gen(3).scale(&Qi::from_ratio(1, 2)));
    let text = g.to_canonical();
    assert_eq!(Grass::<Qi>::from_canonical(&text).unwrap(), g);
}

#[test]
fn rendered_state_roundtrip() {
    let modes = ModeSet::new(1);
    let reg = Registry::new();
    let p = random_param::<Qs2>(&reg, "p", &modes, &mut rng(3)).unwrap();
    let psi = render_right(Kind::G, &p, &modes, Prefactor::On).unwrap();
    assert_eq!(FockState::<Qs2>::from_canonical(&psi.to_canonical()).unwrap(), psi);
}

#[test]
fn functional_roundtrip() {
    let modes = ModeSet::new(1);
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg).unwrap();
    let op = random_operator::<Qs2>(2, 6, &mut rng(9));
    let w = wigner_transform(&op, &ps).unwrap();
    assert_eq!(PhaseSpaceFunctional::<Qs2>::from_canonical(&w.to_canonical()).unwrap(), w);
}

#[test]
fn parse_errors_carry_positions() {
    let pos = |r: Result<Grass<Qi>, Error>| match r {
        Err(Error::Parse { pos, .. }) => pos,
        other => panic!("expected a parse error, got {other:?}"),
    };
    assert_eq!(pos(Grass::from_canonical("(1,0) * #0 + (2,0) * 7")), 21);
    assert_eq!(pos(Grass::from_canonical("(1,0) * #0 + (x,0)")), 13);
    assert_eq!(pos(Grass::from_canonical("(1,0) * #99")), 8);
    match FockOperator::<Qi>::from_canonical("op 2 | [(1,0)] a+5") {
        Err(Error::Parse { pos, msg }) => {
            assert_eq!(pos, 15);
            assert!(msg.contains("out of range"));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(FockState::<Qi>::from_canonical("ket 2 | 101 => (1,0)"), Err(Error::Parse { pos: 8, .. })));
}

#[test]
fn report_json_roundtrip() {
    let checks = vec![
        Check::exact("car", "x", "{â, â†} = 1", 0.0),
        Check::within("h-odes", "y", "∂h = RHS(h)", 1e-3, 1e-10).with_detail("too big"),
    ];
    let report = RunReport {
        engine: "fermiwig".into(),
        version: "0".into(),
        ring: "rational".into(),
        modes: (1, 2),
        seed: 4,
        summary: summarize(&checks),
        checks,
        timings: Vec::new(),
    };
    let text = serde_json::to_string(&report).unwrap();
    assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), report);
    assert_eq!(report.summary.failed, 1);
}

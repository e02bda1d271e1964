use fermiwig::bogoliubov::{
    build_bogoliubov, r_lower, r_raise, s_op, verify_adjoint, verify_bogoliubov_table, verify_car,
};
use fermiwig::eigenstates::{verify_eigen_equations, verify_generic_solution, verify_majorana};
use fermiwig::overlaps::{
    h_closed_form, lambda_fin, overlap_analytic, overlap_analytic_cleared, overlap_direct, verify_vacuum_overlap,
};
use fermiwig::random::{random_operator, random_param, rng};
use fermiwig::wigner::{
    measure_lambda, star2, supertrace, trace, weyl_transform, wigner_trace, wigner_transform, PhaseSpace,
};
use fermiwig::{Check, Coeff, Error, FockOperator, FockState, GenClass, Grass, ModeSet, ParamFn, Qi, Qs2, Registry};

fn all_pass(checks: &[Check]) {
    let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).map(|c| &c.id).collect();
    assert!(!checks.is_empty() && bad.is_empty(), "failing: {bad:?}");
}

#[test]
fn operator_tables_at_two_and_four_modes() {
    for k in 1..=2 {
        let modes = ModeSet::new(k);
        all_pass(&verify_car::<Qi>(&modes));
        all_pass(&verify_bogoliubov_table::<Qs2>(&modes).unwrap());
        all_pass(&verify_adjoint::<Qs2>(&modes).unwrap());
    }
}

#[test]
fn bogoliubov_needs_sqrt2_and_unit_weights() {
    let modes = ModeSet::new(1);
    assert_eq!(build_bogoliubov::<Qi>(&modes).err(), Some(Error::NoSqrt2("rational")));
    let mut weighted = ModeSet::new(2);
    weighted.weights[0] = num_rational::BigRational::new(2.into(), 1.into());
    assert_eq!(build_bogoliubov::<Qs2>(&weighted).err(), Some(Error::Weights));
}

#[test]
fn pair_operators_close_on_s() {
    for k in 1..=2 {
        let modes = ModeSet::new(k);
        let comm = r_lower::<Qi>(&modes).commutator(&r_raise(&modes));
        assert!(comm.action_eq(&s_op::<Qi>(&modes).neg()));
    }
}

#[test]
fn s_on_vacuum() {
    let modes = ModeSet::new(2);
    let vac = FockState::<Qi>::vac(4);
    assert_eq!(s_op::<Qi>(&modes).apply(&vac), vac.scale(&Qi::from_int(-2)));
}

#[test]
fn vacuum_overlap_is_two_to_half_omega() {
    for k in 1..=2 {
        all_pass(&verify_vacuum_overlap::<Qi>(&ModeSet::new(k)).unwrap());
    }
}

#[test]
fn eigenstates_at_two_modes() {
    let modes = ModeSet::new(1);
    let reg = Registry::new();
    let p = random_param::<Qs2>(&reg, "p", &modes, &mut rng(11)).unwrap();
    all_pass(&verify_eigen_equations(&modes, &p, "t").unwrap());
    all_pass(&verify_generic_solution(&modes, &p, "t").unwrap());
}

#[test]
fn majorana_results() {
    all_pass(&verify_majorana::<Qs2>(2).unwrap());
}

#[test]
fn h_functions_at_one_half() {
    let h = h_closed_form::<Qi>(1, -1, &Qi::from_ratio(1, 2)).unwrap();
    assert_eq!(h.d, Qi::from_ratio(3, 4));
    assert_eq!(h.h1, Qi::from_ratio(2, 3));
    assert_eq!(h.h2, Qi::from_ratio(-1, 3));
    assert_eq!(h.h0[0], Qi::from_ratio(1, 3));
    assert!(matches!(h_closed_form::<Qi>(1, -1, &Qi::one()), Err(Error::Singular(_))));
    assert!(matches!(h_closed_form::<Qi>(3, 1, &Qi::one()), Err(Error::Config(_))));
}

#[test]
fn overlap_forms_agree_and_survive_the_singular_point() {
    let modes = ModeSet::new(1);
    let reg = Registry::new();
    let a = ParamFn::<Qi>::fresh(&reg, "A*", &modes, GenClass::FockParameter).unwrap();
    let b = ParamFn::<Qi>::fresh(&reg, "B", &modes, GenClass::FockParameter).unwrap();
    for (c1, c2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let t = Qi::from_ratio(2, 5);
        assert_eq!(overlap_direct(c1, c2, &a, &b, &t, &modes).unwrap(), overlap_analytic(c1, c2, &a, &b, &t, &modes).unwrap());
    }
    let t = Qi::from_ratio(-3, 2);
    let d = Qi::from_ratio(13, 4);
    assert_eq!(
        overlap_analytic_cleared(1, 1, &a, &b, &t, &modes, 1).unwrap(),
        overlap_analytic(1, 1, &a, &b, &t, &modes).unwrap().scale(&d)
    );
    // 1 − t² = 0: the closed form has no value there, the overlap itself does
    let t = Qi::one();
    assert!(overlap_direct(1, -1, &a, &b, &t, &modes).is_ok());
    assert!(matches!(overlap_analytic(1, -1, &a, &b, &t, &modes), Err(Error::Singular(_))));
    assert!(overlap_analytic_cleared(1, -1, &a, &b, &t, &modes, 1).is_ok());
}

#[test]
fn lambda_and_completeness_constants() {
    assert_eq!(lambda_fin::<Qs2>(2), Qs2::i().neg());
    assert_eq!(lambda_fin::<Qs2>(4), Qs2::one().neg());
    for (k, want) in [(1, Qs2::i()), (2, Qs2::one().neg()), (3, Qs2::i().neg())] {
        let c = measure_lambda::<Qs2>(&ModeSet::new(k), &Registry::new()).unwrap();
        assert_eq!(c, want, "K = {k}");
        let omega = 2 * k;
        let sifting = if (omega * (omega - 1) / 2) % 2 == 1 { Qs2::one().neg() } else { Qs2::one() };
        assert_eq!(c, sifting.mul(&lambda_fin::<Qs2>(omega)));
    }
}

#[test]
fn wigner_of_number_operator() {
    let modes = ModeSet::new(1);
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg).unwrap();
    let n0 = FockOperator::adag(2, 0).mul(&FockOperator::a(2, 0));
    let w = wigner_transform(&n0, &ps).unwrap();
    assert_eq!(w.value.scalar_part(), Qs2::from_ratio(1, 2));
    assert!(w.value.is_even());
    assert!(weyl_transform(&w, &ps).unwrap().action_eq(&n0));
}

#[test]
fn phase_space_integral_is_the_supertrace() {
    let modes = ModeSet::new(1);
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg).unwrap();
    let one = wigner_transform(&FockOperator::identity(2), &ps).unwrap();
    assert_eq!(one.value, Grass::one());
    assert!(wigner_trace(&one, &ps).is_zero());
    let mut r = rng(5);
    for _ in 0..4 {
        let op = random_operator::<Qs2>(2, 10, &mut r);
        let w = wigner_transform(&op, &ps).unwrap();
        assert_eq!(wigner_trace(&w, &ps), supertrace(&op));
    }
    assert_ne!(supertrace(&FockOperator::<Qs2>::identity(2)), trace(&FockOperator::identity(2)));
}

#[test]
fn star_product_of_ladders() {
    let modes = ModeSet::new(1);
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg).unwrap();
    let (a, ad) = (FockOperator::a(2, 1), FockOperator::adag(2, 1));
    let wa = wigner_transform(&a, &ps).unwrap();
    let wad = wigner_transform(&ad, &ps).unwrap();
    let s = star2(&wa, &wad, &ps).unwrap();
    assert_eq!(s.value, wigner_transform(&a.mul(&ad), &ps).unwrap().value);
    assert_ne!(s.value, wa.value.mul(&wad.value));
}

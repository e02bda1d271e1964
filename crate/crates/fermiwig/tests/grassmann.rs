use std::collections::BTreeMap;

use fermiwig::grassmann::{grade, merge_sign};
use fermiwig::{diamond, fdiamond, Coeff, Error, GenClass, Grass, ModeSet, ParamFn, Qi, Registry};
use proptest::prelude::*;

type G = Grass<Qi>;

const GENS: usize = 6;

fn coeff() -> impl Strategy<Value = Qi> {
    (-3i64..=3, 1i64..=3, -2i64..=2).prop_map(|(n, d, im)| Qi::from_ratio(n, d).add(&Qi::i().mul(&Qi::from_int(im))))
}

fn element() -> impl Strategy<Value = G> {
    prop::collection::vec((0u64..(1 << GENS), coeff()), 0..6)
        .prop_map(|ts| ts.into_iter().fold(G::zero(), |acc, (m, c)| acc.add(&G::term(m, c))))
}

fn without_scalar(g: G) -> G {
    g.sub(&G::scalar(g.scalar_part()))
}

fn sign(odd: bool) -> Qi {
    if odd {
        Qi::one().neg()
    } else {
        Qi::one()
    }
}

proptest! {
    #[test]
    fn product_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn product_distributes(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(b.add(&c).mul(&a), b.mul(&a).add(&c.mul(&a)));
    }

    #[test]
    fn graded_commutativity(a in element(), b in element()) {
        let (ae, ao) = a.split_parity();
        let (be, bo) = b.split_parity();
        prop_assert_eq!(ae.mul(&b), b.mul(&ae));
        prop_assert_eq!(ao.mul(&bo), bo.mul(&ao).neg());
        prop_assert_eq!(ao.mul(&be), be.mul(&ao));
    }

    #[test]
    fn odd_elements_square_to_zero(a in element()) {
        let (_, odd) = a.split_parity();
        if odd.len() <= 1 {
            prop_assert!(odd.mul(&odd).is_zero());
        }
        prop_assert!(G::gen(3).mul(&G::gen(3)).is_zero());
    }

    #[test]
    fn koszul_sign_matches_generator_reordering(x in 0u64..(1 << GENS), y in 0u64..(1 << GENS)) {
        let p = G::term(x, Qi::one()).mul(&G::term(y, Qi::one()));
        if x & y != 0 {
            prop_assert!(p.is_zero());
        } else {
            prop_assert_eq!(p, G::term(x | y, sign(merge_sign(x, y))));
            let swapped = merge_sign(x, y) ^ merge_sign(y, x);
            prop_assert_eq!(swapped, grade(x) % 2 == 1 && grade(y) % 2 == 1);
        }
    }

    #[test]
    fn conjugation_is_an_involutive_anti_automorphism(a in element(), b in element()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.mul(&b).conjugate(), b.conjugate().mul(&a.conjugate()));
        prop_assert_eq!(a.add(&b).conjugate(), a.conjugate().add(&b.conjugate()));
    }

    #[test]
    fn grading_automorphism(a in element(), b in element()) {
        prop_assert_eq!(a.mul(&b).sigma(), a.sigma().mul(&b.sigma()));
        prop_assert_eq!(a.sigma().sigma(), a);
    }

    #[test]
    fn berezin_is_linear_and_kills_constants(a in element(), b in element(), c in coeff(), v in 0..GENS) {
        prop_assert_eq!(a.add(&b.scale(&c)).integrate_one(v), a.integrate_one(v).add(&b.integrate_one(v).scale(&c)));
        let free = a.drop_containing(1 << v);
        prop_assert!(free.integrate_one(v).is_zero());
        prop_assert_eq!(G::gen(v).mul(&free).integrate_one(v), free);
    }

    #[test]
    fn berezin_orientation(a in element(), u in 0..GENS, v in 0..GENS) {
        prop_assume!(u != v);
        prop_assert_eq!(a.berezin(&[u, v]), a.berezin(&[v, u]).neg());
        prop_assert_eq!(a.berezin(&[u, v]), a.integrate_one(v).integrate_one(u));
    }

    #[test]
    fn berezin_is_translation_invariant(a in element(), b in element()) {
        // θ₀ ↦ θ₀ + η with η odd and free of θ₀
        let (_, eta) = b.drop_containing(1).split_parity();
        let map = BTreeMap::from([(0usize, G::gen(0).add(&eta))]);
        prop_assert_eq!(a.substitute(&map).unwrap().integrate_one(0), a.integrate_one(0));
    }

    #[test]
    fn substitution_is_a_morphism(a in element(), b in element(), img in element()) {
        let (_, odd) = img.split_parity();
        let map = BTreeMap::from([(1usize, odd)]);
        prop_assert_eq!(
            a.mul(&b).substitute(&map).unwrap(),
            a.substitute(&map).unwrap().mul(&b.substitute(&map).unwrap())
        );
    }

    #[test]
    fn exponential_inverse(a in element()) {
        let (even, _) = without_scalar(a).split_parity();
        prop_assert_eq!(even.exp().unwrap().mul(&even.neg().exp().unwrap()), G::one());
    }

    #[test]
    fn exponential_of_commuting_sum(a in element(), b in element()) {
        let (x, _) = without_scalar(a).split_parity();
        let (y, _) = without_scalar(b).split_parity();
        prop_assert_eq!(x.add(&y).exp().unwrap(), x.exp().unwrap().mul(&y.exp().unwrap()));
    }

    #[test]
    fn diamond_antisymmetry_for_odd_arguments(xs in prop::collection::vec(coeff(), 4), ys in prop::collection::vec(coeff(), 4)) {
        let modes = ModeSet::new(2);
        let reg = Registry::new();
        let g = ParamFn::<Qi>::fresh(&reg, "g", &modes, GenClass::Auxiliary).unwrap();
        let h = ParamFn::<Qi>::fresh(&reg, "h", &modes, GenClass::Auxiliary).unwrap();
        let p = ParamFn::new(g.components.iter().zip(&xs).map(|(c, x)| c.scale(x)).collect()).unwrap();
        let x = ParamFn::new(h.components.iter().zip(&ys).map(|(c, y)| c.scale(y)).collect()).unwrap();
        prop_assert_eq!(diamond(&p, &x, &modes), diamond(&x, &p, &modes).neg());
        prop_assert_eq!(fdiamond(&p, &x, &modes), fdiamond(&x, &p, &modes));
        prop_assert!(diamond(&p, &p, &modes).is_zero());
    }
}

#[test]
fn exp_rejects_scalar_part() {
    assert_eq!(G::one().add(&G::monomial(&[0, 1])).exp(), Err(Error::ScalarPart));
}

#[test]
fn exp_of_pair_truncates() {
    let x = G::monomial(&[0, 1]);
    assert_eq!(x.exp().unwrap(), G::one().add(&x));
}

#[test]
fn conjugation_reverses_generator_order() {
    // (θ₀θ₁)* = θ₁*θ₀*; with real generators that is −θ₀θ₁
    assert_eq!(G::monomial(&[0, 1]).conjugate(), G::monomial(&[0, 1]).neg());
    assert_eq!(G::scalar(Qi::i()).conjugate(), G::scalar(Qi::i().neg()));
}

#[test]
fn registry_limit() {
    let reg = Registry::new();
    for i in 0..64 {
        reg.fresh(format!("θ{i}"), GenClass::Auxiliary).unwrap();
    }
    assert_eq!(reg.fresh("overflow", GenClass::Auxiliary), Err(Error::RegistryFull(64)));
    assert_eq!(reg.find("θ3"), Some(3));
}

#[test]
fn parameter_functions_must_be_odd() {
    assert!(matches!(ParamFn::<Qi>::new(vec![G::one()]), Err(Error::Parity(_))));
    assert!(ParamFn::<Qi>::new(vec![G::gen(0), G::zero()]).is_ok());
}

#[test]
fn weighted_contraction() {
    let mut modes = ModeSet::new(2);
    modes.weights[1] = num_rational::BigRational::new(1.into(), 2.into());
    let p = ParamFn::<Qi>::from_generators(&[0, 1, 2, 3]);
    let x = ParamFn::<Qi>::from_generators(&[4, 5, 6, 7]);
    let d = diamond(&p, &x, &modes);
    assert_eq!(d.coeff(0b0001_0001), Qi::one());
    assert_eq!(d.coeff(0b0100_0100), Qi::from_ratio(1, 2));
}

use fermiwig::fock::{basis_kets, Ladder};
use fermiwig::random::{random_operator, rng};
use fermiwig::wigner::{matrix_of, operator_from_matrix};
use fermiwig::{Coeff, FockOperator, FockState, Grass, Qi, Word};
use proptest::prelude::*;

type Op = FockOperator<Qi>;

fn ops(m: usize, seed: u64) -> (Op, Op) {
    let mut r = rng(seed);
    (random_operator(m, 6, &mut r), random_operator(m, 6, &mut r))
}

#[test]
fn canonical_anticommutators() {
    let m = 3;
    for i in 0..m {
        for j in 0..m {
            let (a, ad) = (Op::a(m, i), Op::adag(m, j));
            let want = if i == j { Op::identity(m) } else { Op::zero(m) };
            assert!(a.anticommutator(&ad).action_eq(&want), "{{a{i}, a+{j}}}");
            assert!(Op::a(m, i).anticommutator(&Op::a(m, j)).is_zero_action());
            assert!(Op::adag(m, i).anticommutator(&Op::adag(m, j)).is_zero_action());
        }
    }
}

#[test]
fn creation_order_fixes_sign() {
    // â†₁â†₀|vac⟩ = −â†₀â†₁|vac⟩
    let vac = FockState::<Qi>::vac(2);
    let x = Op::adag(2, 1).mul(&Op::adag(2, 0)).apply(&vac);
    let y = Op::adag(2, 0).mul(&Op::adag(2, 1)).apply(&vac);
    assert_eq!(x, y.neg());
    assert_eq!(Op::a(2, 0).apply(&vac), FockState::zero(2));
}

#[test]
fn grassmann_coefficients_pass_ladders_with_sign() {
    // θ â† and â† θ differ by a sign on odd θ
    let m = 1;
    let theta = Grass::<Qi>::gen(0);
    let left = Op::term(m, theta.clone(), Word::adag(0));
    let right = Op::adag(m, 0).mul(&Op::scalar(m, theta));
    assert!(left.action_eq(&right.neg()));
}

#[test]
fn number_operator_counts() {
    let m = 3;
    let n = (0..m).fold(Op::zero(m), |acc, i| acc.add(&Op::adag(m, i).mul(&Op::a(m, i))));
    for (k, b) in basis_kets::<Qi>(m).enumerate() {
        assert_eq!(n.apply(&b), b.scale(&Qi::from_int(k.count_ones() as i64)));
    }
}

#[test]
fn exponential_of_pair_creation() {
    let m = 2;
    let pair = Op::term(m, Grass::one(), Word(vec![Ladder { mode: 0, create: true }, Ladder { mode: 1, create: true }]));
    let psi = pair.exp_apply(&FockState::vac(m)).unwrap();
    assert_eq!(psi, FockState::vac(m).add(&pair.apply(&FockState::vac(m))));
}

#[test]
fn vacuum_pairing() {
    let m = 2;
    let b = FockState::<Qi>::basis(m, 0b11, Grass::scalar(Qi::from_int(3)));
    assert_eq!(b.dagger().pair(&b), Grass::scalar(Qi::from_int(9)));
    assert!(FockState::<Qi>::vac(m).dagger().pair(&b).is_zero());
}

#[test]
fn matrix_roundtrip() {
    for seed in 0..5 {
        let (a, _) = ops(2, seed);
        let back = operator_from_matrix(2, &matrix_of(&a));
        assert!(back.action_eq(&a));
    }
}

proptest! {
    #[test]
    fn product_acts_as_composition(seed in 0u64..1000) {
        let (a, b) = ops(2, seed);
        for k in basis_kets::<Qi>(2) {
            prop_assert_eq!(a.mul(&b).apply(&k), a.apply(&b.apply(&k)));
        }
    }

    #[test]
    fn adjoint_is_an_involution_and_reverses_products(seed in 0u64..1000) {
        let (a, b) = ops(2, seed);
        prop_assert!(a.dagger().dagger().action_eq(&a));
        prop_assert!(a.mul(&b).dagger().action_eq(&b.dagger().mul(&a.dagger())));
    }

    #[test]
    fn adjoint_matrix_is_conjugate_transpose(seed in 0u64..1000) {
        let (a, _) = ops(2, seed);
        let (m, md) = (matrix_of(&a), matrix_of(&a.dagger()));
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(&md[i][j], &m[j][i].conjugate());
            }
        }
    }

    #[test]
    fn bra_action_matches_ket_action(seed in 0u64..1000) {
        let (a, _) = ops(2, seed);
        for x in basis_kets::<Qi>(2) {
            for y in basis_kets::<Qi>(2) {
                prop_assert_eq!(a.apply_bra(&x.dagger()).pair(&y), x.dagger().pair(&a.apply(&y)));
            }
        }
    }
}

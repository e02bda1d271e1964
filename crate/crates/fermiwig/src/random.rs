//! Seeded parameter generation: one fresh generator per component, scaled by
//! a random nonzero Gaussian rational.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grassmann::{GenClass, Grass, ParamFn, Registry};
use crate::modes::ModeSet;
use crate::ring::{Coeff, Qi};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero Gaussian rational with small numerators and denominators.
pub fn gauss_rational(rng: &mut impl Rng) -> Qi {
    loop {
        let re = BigRational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into());
        let im = BigRational::new(rng.gen_range(-2i64..=2).into(), rng.gen_range(1i64..=2).into());
        let q = Qi::new(re, im);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Nonzero real rational.
pub fn real_rational(rng: &mut impl Rng) -> Qi {
    loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            return Qi::real(BigRational::new(n.into(), rng.gen_range(1i64..=3).into()));
        }
    }
}

pub fn random_param<C: Coeff>(
    reg: &Registry,
    name: &str,
    modes: &ModeSet,
    rng: &mut impl Rng,
) -> Result<ParamFn<C>> {
    let base = ParamFn::<C>::fresh(reg, name, modes, GenClass::FockParameter)?;
    let comps = base
        .components
        .into_iter()
        .map(|g| g.scale(&crate::modes::from_qi(&gauss_rational(rng))))
        .collect();
    Ok(ParamFn { components: comps, conjugated: false })
}

/// Random element with `terms` monomials drawn from the given generators.
pub fn random_element<C: Coeff>(gens: &[usize], terms: usize, rng: &mut impl Rng) -> Grass<C> {
    let mut acc = Grass::zero();
    for _ in 0..terms {
        let mut m = 0u64;
        for &g in gens {
            if rng.gen_bool(0.5) {
                m |= 1 << g;
            }
        }
        acc.add_assign(&Grass::term(m, crate::modes::from_qi(&gauss_rational(rng))));
    }
    acc
}

/// Scalar-coefficient operator with about `fill` random matrix entries.
pub fn random_operator<C: Coeff>(m: usize, fill: usize, rng: &mut impl Rng) -> crate::fock::FockOperator<C> {
    let d = 1usize << m;
    let mut rho = vec![vec![Grass::<C>::zero(); d]; d];
    for _ in 0..fill {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        rho[i][j] = Grass::scalar(crate::modes::from_qi(&gauss_rational(rng)));
    }
    crate::wigner::operator_from_matrix(m, &rho)
}

/// Like [`random_param`] with real rational scales.
pub fn random_real_param<C: Coeff>(
    reg: &Registry,
    name: &str,
    modes: &ModeSet,
    rng: &mut impl Rng,
) -> Result<ParamFn<C>> {
    let base = ParamFn::<C>::fresh(reg, name, modes, GenClass::FockParameter)?;
    let comps = base
        .components
        .into_iter()
        .map(|g| g.scale(&crate::modes::from_qi(&real_rational(rng))))
        .collect();
    Ok(ParamFn { components: comps, conjugated: false })
}

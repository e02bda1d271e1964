//! Quadrature bases, identity resolutions, Grassmann Fourier transforms,
//! Wigner and Weyl transforms, trace, characteristic functional and star
//! products. Integration variables come from a per-phase-space scratch pool
//! and are always integrated out; `𝒟_Λ` carries an explicit `Λ⁻¹` per
//! variable.

use std::cell::RefCell;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bogoliubov::build_bogoliubov;
use crate::eigenstates::{render_left, render_right, Kind, Prefactor};
use crate::error::{Error, Result};
use crate::fock::{FockBra, FockOperator, FockState, Ladder, Word};
use crate::grassmann::{diamond, GenClass, Grass, ParamFn, Registry};
use crate::fock::action_residual;
use crate::modes::ModeSet;
use crate::overlaps::{grassmann_delta, lambda_fin, ratio_to};
use crate::random::{random_element, random_operator};
use crate::report::Check;
use crate::ring::Coeff;
use rand::Rng;

/// `|q⟩ = |g_R[q]⟩`
pub fn q_ket<C: Coeff>(q: &ParamFn<C>, modes: &ModeSet) -> Result<FockState<C>> {
    render_right(Kind::G, q, modes, Prefactor::On)
}

/// `⟨q| = ⟨g_L[q]|`
pub fn q_bra<C: Coeff>(q: &ParamFn<C>, modes: &ModeSet) -> Result<FockBra<C>> {
    render_left(Kind::G, q, modes, Prefactor::On)
}

/// `|p⟩ = |ḡ_R[p]⟩`
pub fn p_ket<C: Coeff>(p: &ParamFn<C>, modes: &ModeSet) -> Result<FockState<C>> {
    render_right(Kind::GBar, p, modes, Prefactor::On)
}

/// `⟨p| = ⟨ḡ_L[p]|`
pub fn p_bra<C: Coeff>(p: &ParamFn<C>, modes: &ModeSet) -> Result<FockBra<C>> {
    render_left(Kind::GBar, p, modes, Prefactor::On)
}

/// `(q̂, p̂) = (ĝ, ĝ†)`, indexed by mode.
pub fn quadrature_ops<C: Coeff>(modes: &ModeSet) -> Result<(Vec<FockOperator<C>>, Vec<FockOperator<C>>)> {
    let b = build_bogoliubov::<C>(modes)?;
    Ok((b.g, b.gd))
}

/// A functional on phase space together with the generators standing for
/// `q` and `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PhaseSpaceFunctional<C: Coeff> {
    #[serde(with = "crate::serialize::grass_text")]
    pub value: Grass<C>,
    pub q_vars: Vec<usize>,
    pub p_vars: Vec<usize>,
}

impl<C: Coeff> PhaseSpaceFunctional<C> {
    pub fn q(&self) -> ParamFn<C> {
        ParamFn::from_generators(&self.q_vars)
    }

    pub fn p(&self) -> ParamFn<C> {
        ParamFn::from_generators(&self.p_vars)
    }

    pub fn with_value(&self, value: Grass<C>) -> Self {
        PhaseSpaceFunctional { value, q_vars: self.q_vars.clone(), p_vars: self.p_vars.clone() }
    }

    /// `W[q′, p′]` for odd images `q′, p′`.
    pub fn at(&self, q: &ParamFn<C>, p: &ParamFn<C>) -> Result<Grass<C>> {
        let mut map = BTreeMap::new();
        for (i, &g) in self.q_vars.iter().enumerate() {
            map.insert(g, q.components[i].clone());
        }
        for (i, &g) in self.p_vars.iter().enumerate() {
            map.insert(g, p.components[i].clone());
        }
        self.value.substitute(&map)
    }
}

/// Phase-space variables plus the constant `Λ_fin` used in `𝒟_Λ`.
pub struct PhaseSpace<'r, C: Coeff> {
    pub modes: ModeSet,
    pub reg: &'r Registry,
    pub q: Vec<usize>,
    pub p: Vec<usize>,
    pub lambda: C,
    scratch: RefCell<BTreeMap<&'static str, Vec<usize>>>,
}

impl<'r, C: Coeff> PhaseSpace<'r, C> {
    /// Fresh `q`, `p` generators; `Λ_fin` measured from the `q`-completeness
    /// integral.
    pub fn new(modes: &ModeSet, reg: &'r Registry) -> Result<Self> {
        let lambda = measure_lambda::<C>(modes, reg)?;
        Self::with_lambda(modes, reg, lambda)
    }

    pub fn with_lambda(modes: &ModeSet, reg: &'r Registry, lambda: C) -> Result<Self> {
        let q = reg.fresh_vec("q", modes.m(), GenClass::PhaseQ)?;
        let p = reg.fresh_vec("p", modes.m(), GenClass::PhaseP)?;
        Ok(PhaseSpace { modes: modes.clone(), reg, q, p, lambda, scratch: RefCell::default() })
    }

    pub fn functional(&self, value: Grass<C>) -> PhaseSpaceFunctional<C> {
        PhaseSpaceFunctional { value, q_vars: self.q.clone(), p_vars: self.p.clone() }
    }

    /// Scratch block `name`, allocated on first use and reused afterwards.
    fn fresh(&self, name: &'static str, class: GenClass) -> Result<Vec<usize>> {
        if let Some(ids) = self.scratch.borrow().get(name) {
            return Ok(ids.clone());
        }
        let ids = self.reg.fresh_vec(name, self.modes.m(), class)?;
        self.scratch.borrow_mut().insert(name, ids.clone());
        Ok(ids)
    }

    /// `Λ^{−n}`
    pub fn lambda_pow(&self, n: i32) -> C {
        self.lambda.pow(-n).expect("Λ_fin is invertible")
    }

    fn m(&self) -> usize {
        self.modes.m()
    }
}

fn combine<C: Coeff>(a: &ParamFn<C>, ca: i64, b: &ParamFn<C>, cb: (i64, i64)) -> ParamFn<C> {
    let s = C::from_ratio(cb.0, cb.1);
    a.scale(&C::from_int(ca)).add(&b.scale(&s)).expect("equal lengths")
}

/// `Σ_i ⟨m|ψ⟩` entries for all basis states.
fn ket_components<C: Coeff>(ket: &FockState<C>) -> Vec<Grass<C>> {
    (0..ket.dim()).map(|n| FockBra::basis(ket.m, n as u32, Grass::one()).pair(ket)).collect()
}

/// `∫ ⟨m|f⟩⟨f|n⟩ 𝒟[f]` for the `q` (`use_p = false`) or `p` basis, plain
/// measure.
pub fn completeness_matrix<C: Coeff>(modes: &ModeSet, reg: &Registry, use_p: bool) -> Result<Vec<Vec<Grass<C>>>> {
    let ids = reg.fresh_vec(if use_p { "pc" } else { "qc" }, modes.m(), GenClass::Auxiliary)?;
    let f = ParamFn::<C>::from_generators(&ids);
    let (ket, bra) = if use_p {
        (p_ket(&f, modes)?, p_bra(&f, modes)?)
    } else {
        (q_ket(&f, modes)?, q_bra(&f, modes)?)
    };
    let col = ket_components(&ket);
    Ok(col
        .iter()
        .map(|left| bra.amps.iter().map(|right| left.mul(right).berezin(&ids)).collect())
        .collect())
}

/// The scalar `c` with `matrix = c·𝟙`, if any.
pub fn identity_multiple<C: Coeff>(matrix: &[Vec<Grass<C>>]) -> Option<C> {
    let c = matrix.first()?.first()?.clone();
    if c.support() != 0 || c.is_zero() {
        return None;
    }
    let c = c.scalar_part();
    for (i, row) in matrix.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let want = if i == j { Grass::scalar(c.clone()) } else { Grass::zero() };
            if *e != want {
                return None;
            }
        }
    }
    Some(c)
}

/// `Λ_fin` from `∫|q⟩⟨q|𝒟[q] = Λ_fin·𝟙`.
pub fn measure_lambda<C: Coeff>(modes: &ModeSet, reg: &Registry) -> Result<C> {
    identity_multiple(&completeness_matrix::<C>(modes, reg, false)?)
        .ok_or_else(|| Error::Singular("q-completeness integral is not a multiple of the identity".into()))
}

/// `⟨m|op|n⟩`
pub fn matrix_of<C: Coeff>(op: &FockOperator<C>) -> Vec<Vec<Grass<C>>> {
    let d = 1usize << op.m;
    (0..d)
        .map(|m| {
            let bra = FockBra::basis(op.m, m as u32, Grass::one());
            (0..d).map(|n| bra.pair(&op.apply(&FockState::basis(op.m, n as u32, Grass::one())))).collect()
        })
        .collect()
}

/// `Σ |m⟩ρ_mn⟨n|` as ladder words, with `|vac⟩⟨vac| = Π(1 − â†_i â_i)`.
pub fn operator_from_matrix<C: Coeff>(m: usize, rho: &[Vec<Grass<C>>]) -> FockOperator<C> {
    let mut vac_proj: Vec<(C, Word)> = vec![(C::one(), Word::empty())];
    for i in 0..m {
        let num = Word(vec![Ladder { mode: i, create: true }, Ladder { mode: i, create: false }]);
        let mut next = Vec::with_capacity(vac_proj.len() * 2);
        for (c, w) in &vac_proj {
            next.push((c.clone(), w.clone()));
            next.push((c.neg(), w.concat(&num)));
        }
        vac_proj = next;
    }
    let mut terms = Vec::new();
    for (mi, row) in rho.iter().enumerate() {
        let create = Word::creating(mi as u32, m);
        for (ni, e) in row.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            // ⟨n| = ⟨vac| (creation word of n)†
            let annihilate = Word(
                Word::creating(ni as u32, m).0.iter().rev().map(|l| Ladder { mode: l.mode, create: false }).collect(),
            );
            let coeff = e.sigma_pow((mi as u32).count_ones());
            for (c, w) in &vac_proj {
                terms.push((coeff.scale(c), create.concat(w).concat(&annihilate)));
            }
        }
    }
    FockOperator { m, terms }.simplify()
}

/// `W[q,p] = ∫⟨q+x/2|op|q−x/2⟩ exp(p◇x) 𝒟_Λ[x]`.
pub fn wigner_transform<C: Coeff>(op: &FockOperator<C>, ps: &PhaseSpace<C>) -> Result<PhaseSpaceFunctional<C>> {
    let x_ids = ps.fresh("x", GenClass::Auxiliary)?;
    let (q, p, x) = (ParamFn::from_generators(&ps.q), ParamFn::from_generators(&ps.p), ParamFn::from_generators(&x_ids));
    let bra = q_bra(&combine(&q, 1, &x, (1, 2)), &ps.modes)?;
    let ket = q_ket(&combine(&q, 1, &x, (-1, 2)), &ps.modes)?;
    let elem = bra.pair(&op.apply(&ket));
    let v = elem.mul(&diamond(&p, &x, &ps.modes).exp()?).berezin(&x_ids).scale(&ps.lambda_pow(1));
    Ok(ps.functional(v))
}

/// `ρ̂ = ∫|q+x/2⟩ W[q,p] exp(x◇p) ⟨q−x/2| 𝒟_Λ[p,q,x]`, as a matrix.
///
/// The kernel is `x◇p = −p◇x`, the same one that turns `W` back into
/// `ρ[q₁,q₂]` (see [`density_from_wigner`]); with `p◇x` the result is the
/// transposed, ε-rotated operator.
pub fn weyl_matrix<C: Coeff>(w: &PhaseSpaceFunctional<C>, ps: &PhaseSpace<C>) -> Result<Vec<Vec<Grass<C>>>> {
    let x_ids = ps.fresh("x", GenClass::Auxiliary)?;
    let (q, p, x) = (w.q(), w.p(), ParamFn::from_generators(&x_ids));
    let ket = q_ket(&combine(&q, 1, &x, (1, 2)), &ps.modes)?;
    let bra = q_bra(&combine(&q, 1, &x, (-1, 2)), &ps.modes)?;
    let mid = w.value.mul(&diamond(&x, &p, &ps.modes).exp()?);
    let mut vars = w.p_vars.clone();
    vars.extend(&w.q_vars);
    vars.extend(&x_ids);
    let k = ps.lambda_pow(3);
    let col = ket_components(&ket);
    Ok(col
        .iter()
        .map(|left| {
            let lm = left.mul(&mid);
            bra.amps.iter().map(|right| lm.mul(right).berezin(&vars).scale(&k)).collect()
        })
        .collect())
}

pub fn weyl_transform<C: Coeff>(w: &PhaseSpaceFunctional<C>, ps: &PhaseSpace<C>) -> Result<FockOperator<C>> {
    Ok(operator_from_matrix(ps.m(), &weyl_matrix(w, ps)?))
}

/// `ρ[q₁,q₂] = ∫ W[(q₁+q₂)/2, p] exp((q₁−q₂)◇p) 𝒟_Λ[p]`.
pub fn density_from_wigner<C: Coeff>(w: &PhaseSpaceFunctional<C>, q1: &ParamFn<C>, q2: &ParamFn<C>, ps: &PhaseSpace<C>) -> Result<Grass<C>> {
    let half = C::from_ratio(1, 2);
    let mid = q1.add(q2)?.scale(&half);
    let x = q1.sub(q2)?;
    let p = w.p();
    Ok(w.at(&mid, &p)?.mul(&diamond(&x, &p, &ps.modes).exp()?).berezin(&w.p_vars).scale(&ps.lambda_pow(1)))
}

/// `ρ[q₁,q₂] = ⟨q₁|ρ̂|q₂⟩` for the given parameter functions.
pub fn density_functional<C: Coeff>(op: &FockOperator<C>, q1: &ParamFn<C>, q2: &ParamFn<C>, modes: &ModeSet) -> Result<Grass<C>> {
    Ok(q_bra(q1, modes)?.pair(&op.apply(&q_ket(q2, modes)?)))
}

/// `ψ[q] = ⟨q|ψ⟩`
pub fn wave_functional<C: Coeff>(psi: &FockState<C>, q: &ParamFn<C>, modes: &ModeSet) -> Result<Grass<C>> {
    Ok(q_bra(q, modes)?.pair(psi))
}

/// `Σ_n ⟨n|op|n⟩`
pub fn trace<C: Coeff>(op: &FockOperator<C>) -> Grass<C> {
    matrix_of(op).iter().enumerate().fold(Grass::zero(), |acc, (i, row)| acc.add(&row[i]))
}

/// `Σ_n (−1)^{|n|} ⟨n|op|n⟩`
pub fn supertrace<C: Coeff>(op: &FockOperator<C>) -> Grass<C> {
    matrix_of(op).iter().enumerate().fold(Grass::zero(), |acc, (i, row)| {
        if i.count_ones() % 2 == 1 {
            acc.sub(&row[i])
        } else {
            acc.add(&row[i])
        }
    })
}

/// `∫ W 𝒟_Λ[q,p]`
pub fn wigner_trace<C: Coeff>(w: &PhaseSpaceFunctional<C>, ps: &PhaseSpace<C>) -> Grass<C> {
    let mut vars = w.q_vars.clone();
    vars.extend(&w.p_vars);
    w.value.berezin(&vars).scale(&ps.lambda_pow(2))
}

/// `∫ W exp(u◇v) 𝒟_Λ[v]` over the generators `v` of `W`, producing a
/// functional of the fresh generators `u`. With `v = q, u = p` this is the
/// forward transform; with `v = p, u = q` the inverse.
pub fn grassmann_fourier<C: Coeff>(w: &Grass<C>, v: &[usize], u: &[usize], ps: &PhaseSpace<C>) -> Result<Grass<C>> {
    let (uf, vf) = (ParamFn::<C>::from_generators(u), ParamFn::<C>::from_generators(v));
    Ok(w.mul(&diamond(&uf, &vf, &ps.modes).exp()?).berezin(v).scale(&ps.lambda_pow(1)))
}

/// `χ[ξ,ζ] = ∫ W exp(ξ◇q − p◇ζ) 𝒟_Λ[q,p]`, returned with `(ξ, ζ)` ids.
pub fn characteristic<C: Coeff>(w: &PhaseSpaceFunctional<C>, ps: &PhaseSpace<C>) -> Result<(Grass<C>, Vec<usize>, Vec<usize>)> {
    let xi = ps.fresh("ξ", GenClass::Auxiliary)?;
    let zeta = ps.fresh("ζ", GenClass::Auxiliary)?;
    let (xf, zf) = (ParamFn::<C>::from_generators(&xi), ParamFn::<C>::from_generators(&zeta));
    let k = diamond(&xf, &w.q(), &ps.modes).sub(&diamond(&w.p(), &zf, &ps.modes)).exp()?;
    let mut vars = w.q_vars.clone();
    vars.extend(&w.p_vars);
    Ok((w.value.mul(&k).berezin(&vars).scale(&ps.lambda_pow(2)), xi, zeta))
}

/// `W[q,p] = ∫ χ exp(p◇ζ − ξ◇q) 𝒟_Λ[ζ,ξ]` onto the phase space's `q, p`.
pub fn inverse_characteristic<C: Coeff>(chi: &Grass<C>, xi: &[usize], zeta: &[usize], ps: &PhaseSpace<C>) -> Result<PhaseSpaceFunctional<C>> {
    let (xf, zf) = (ParamFn::<C>::from_generators(xi), ParamFn::<C>::from_generators(zeta));
    let (q, p) = (ParamFn::from_generators(&ps.q), ParamFn::from_generators(&ps.p));
    let k = diamond(&p, &zf, &ps.modes).sub(&diamond(&xf, &q, &ps.modes)).exp()?;
    let mut vars = zeta.to_vec();
    vars.extend(xi);
    Ok(ps.functional(chi.mul(&k).berezin(&vars).scale(&ps.lambda_pow(2))))
}

/// Overall constant of the two-fold star product: `2^{−2Ω}Λ^{−4}`.
pub fn star2_constant<C: Coeff>(ps: &PhaseSpace<C>) -> C {
    let two = C::from_int(2);
    let inv = two.pow(-2 * ps.modes.omega() as i32).expect("2 is invertible");
    inv.mul(&ps.lambda_pow(4))
}

/// `2^{−2Ω}∫ W_A[q₁,p₁] W_B[q₂,p₂] exp[2(q−q₂)◇p₁ + 2(q₁−q)◇p₂ + 2(q₂−q₁)◇p] 𝒟_Λ[q₁,p₁,q₂,p₂]`.
pub fn star2<C: Coeff>(a: &PhaseSpaceFunctional<C>, b: &PhaseSpaceFunctional<C>, ps: &PhaseSpace<C>) -> Result<PhaseSpaceFunctional<C>> {
    let modes = &ps.modes;
    let ids: Vec<Vec<usize>> = ["q₁", "p₁", "q₂", "p₂"]
        .iter()
        .zip([GenClass::PhaseQ, GenClass::PhaseP, GenClass::PhaseQ, GenClass::PhaseP])
        .map(|(n, c)| ps.fresh(n, c))
        .collect::<Result<_>>()?;
    let [q1, p1, q2, p2]: [ParamFn<C>; 4] = std::array::from_fn(|i| ParamFn::from_generators(&ids[i]));
    let (q, p) = (ParamFn::from_generators(&ps.q), ParamFn::from_generators(&ps.p));
    let two = C::from_int(2);
    let d = |x: &ParamFn<C>, y: &ParamFn<C>| x.sub(y).expect("equal lengths");
    let kernel = diamond(&d(&q, &q2), &p1, modes)
        .add(&diamond(&d(&q1, &q), &p2, modes))
        .add(&diamond(&d(&q2, &q1), &p, modes))
        .scale(&two)
        .exp()?;
    let wa = a.at(&q1, &p1)?;
    let wb = b.at(&q2, &p2)?;
    let vars: Vec<usize> = ids.concat();
    let v = wa.mul(&wb).mul(&kernel).berezin(&vars).scale(&star2_constant(ps));
    Ok(ps.functional(v))
}

/// `∫ exp[(q−q_a)◇p_b − q_b◇(p−p_a)] W_A[(q+q_a+q_b)/2, (p+p_a+p_b)/2] W_B[q_a,p_a]
/// W_C[(q+q_a−q_b)/2, (p+p_a−p_b)/2] 𝒟_Λ[q_a,p_a,q_b,p_b]`.
pub fn star3<C: Coeff>(
    a: &PhaseSpaceFunctional<C>,
    b: &PhaseSpaceFunctional<C>,
    c: &PhaseSpaceFunctional<C>,
    ps: &PhaseSpace<C>,
) -> Result<PhaseSpaceFunctional<C>> {
    let modes = &ps.modes;
    let ids: Vec<Vec<usize>> = ["q₁", "p₁", "q₂", "p₂"]
        .iter()
        .zip([GenClass::PhaseQ, GenClass::PhaseP, GenClass::PhaseQ, GenClass::PhaseP])
        .map(|(n, c)| ps.fresh(n, c))
        .collect::<Result<_>>()?;
    let [qa, pa, qb, pb]: [ParamFn<C>; 4] = std::array::from_fn(|i| ParamFn::from_generators(&ids[i]));
    let (q, p) = (ParamFn::from_generators(&ps.q), ParamFn::<C>::from_generators(&ps.p));
    let half = C::from_ratio(1, 2);
    let lin = |x: &ParamFn<C>, y: &ParamFn<C>, z: &ParamFn<C>, s: i64| {
        x.add(y).expect("len").add(&z.scale(&C::from_int(s))).expect("len").scale(&half)
    };
    let d = |x: &ParamFn<C>, y: &ParamFn<C>| x.sub(y).expect("equal lengths");
    let kernel = diamond(&d(&q, &qa), &pb, modes).sub(&diamond(&qb, &d(&p, &pa), modes)).exp()?;
    let wa = a.at(&lin(&q, &qa, &qb, 1), &lin(&p, &pa, &pb, 1))?;
    let wb = b.at(&qa, &pa)?;
    let wc = c.at(&lin(&q, &qa, &qb, -1), &lin(&p, &pa, &pb, -1))?;
    let vars: Vec<usize> = ids.concat();
    let v = kernel.mul(&wa).mul(&wb).mul(&wc).berezin(&vars).scale(&ps.lambda_pow(4));
    Ok(ps.functional(v))
}

const WIG: &str = "wigner";

fn matrix_residual<C: Coeff>(a: &[Vec<Grass<C>>], b: &[Vec<Grass<C>>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y).max_magnitude()))
        .fold(0.0, f64::max)
}

fn grass_check<C: Coeff>(suite: &str, id: String, anchor: &str, got: &Grass<C>, want: &Grass<C>) -> Check {
    Check::new(suite, id, anchor, got == want).with_residual(got.sub(want).max_magnitude())
}

/// Identity resolutions in both quadrature bases, the four sandwiched inner
/// products, and how the completeness constant relates to the overlap `Λ_fin`.
pub fn verify_completeness<C: Coeff>(modes: &ModeSet, reg: &Registry) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let omega = modes.omega();
    let cq = identity_multiple(&completeness_matrix::<C>(modes, reg, false)?);
    let cp = identity_multiple(&completeness_matrix::<C>(modes, reg, true)?);
    let show = |c: &Option<C>| c.as_ref().map(|c| c.to_text()).unwrap_or_else(|| "not ∝ 𝟙".into());
    out.push(
        Check::new("completeness", "completeness q,p", "∫|q⟩⟨q|𝒟[q] = ∫|p⟩⟨p|𝒟[p] = c·𝟙", cq.is_some() && cq == cp)
            .with_detail(format!("q: {}, p: {}", show(&cq), show(&cp))),
    );
    let lam = lambda_fin::<C>(omega);
    let sift_sign = if (omega * (omega.saturating_sub(1)) / 2) % 2 == 1 { C::one().neg() } else { C::one() };
    out.push(
        Check::new("completeness", "completeness = Λ_fin", "completeness constant equals the delta-overlap Λ_fin", cq.as_ref() == Some(&lam))
            .with_detail(format!("c = {}, Λ_fin = {}", show(&cq), lam.to_text())),
    );
    out.push(Check::new(
        "completeness",
        "completeness = sifting sign · Λ_fin",
        "c = (−1)^{Ω(Ω−1)/2} Λ_fin",
        cq.as_ref() == Some(&sift_sign.mul(&lam)),
    ));
    let Some(c) = cq else { return Ok(out) };
    let ps = PhaseSpace::with_lambda(modes, reg, c)?;
    let [a, b, s] = ["σ₁", "σ₂", "σ"].map(|n| ps.fresh(n, GenClass::Auxiliary));
    let (a, b, s) = (a?, b?, s?);
    let (f1, f2, fs) = (ParamFn::<C>::from_generators(&a), ParamFn::<C>::from_generators(&b), ParamFn::<C>::from_generators(&s));
    let (qk, qb) = (q_ket(&fs, modes)?, q_bra(&fs, modes)?);
    let cases = [
        ("sandwich q,q", q_bra(&f2, modes)?, q_ket(&f1, modes)?, grassmann_delta(&f1.sub(&f2)?).scale(&lam), "⟨q₂|𝟙|q₁⟩ = Λ_fin δ[q₁−q₂]"),
        ("sandwich q,p", q_bra(&f2, modes)?, p_ket(&f1, modes)?, diamond(&f2, &f1, modes).exp()?, "⟨q₂|𝟙|p₁⟩ = exp(q₂◇p₁)"),
        ("sandwich p,q", p_bra(&f2, modes)?, q_ket(&f1, modes)?, diamond(&f2, &f1, modes).exp()?, "⟨p₂|𝟙|q₁⟩ = exp(p₂◇q₁)"),
        ("sandwich p,p", p_bra(&f2, modes)?, p_ket(&f1, modes)?, grassmann_delta(&f1.sub(&f2)?).scale(&lam), "⟨p₂|𝟙|p₁⟩ = Λ_fin δ[p₁−p₂]"),
    ];
    for (id, bra, ket, closed, anchor) in cases {
        let direct = bra.pair(&ket);
        let sandwich = bra.pair(&qk).mul(&qb.pair(&ket)).berezin(&s).scale(&ps.lambda_pow(1));
        out.push(grass_check("completeness", format!("{id} insertion"), "∫⟨X|q⟩⟨q|Y⟩𝒟_Λ[q] = ⟨X|Y⟩", &sandwich, &direct));
        out.push(grass_check("completeness", format!("{id} closed form"), anchor, &sandwich, &closed));
    }
    let qp = q_bra(&f2, modes)?.pair(&p_ket(&f1, modes)?);
    let modulus = qp.mul(&qp.conjugate());
    out.push(
        grass_check("completeness", "⟨q|p⟩ unimodular".into(), "⟨q|p⟩·⟨q|p⟩* = 1", &modulus, &Grass::one())
            .with_detail(format!("⟨q|p⟩·⟨q|p⟩* = {}", modulus.to_text(None))),
    );
    Ok(out)
}

/// Quadrature operators, Wigner symbols, Weyl roundtrip, density
/// functionals and the trace formula.
pub fn verify_wigner<C: Coeff>(modes: &ModeSet, reg: &Registry, rng: &mut impl Rng, samples: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let m = modes.m();
    let ps = PhaseSpace::<C>::new(modes, reg)?;
    let inv = C::sqrt2().and_then(|r| r.inv()).ok_or(Error::NoSqrt2(C::NAME))?;
    let (qo, po) = quadrature_ops::<C>(modes)?;
    let (q, p) = (ParamFn::<C>::from_generators(&ps.q), ParamFn::<C>::from_generators(&ps.p));
    for i in 0..m {
        let (k, s) = (modes.k_of(i), modes.s_of(i));
        let mut eq = FockOperator::zero(m);
        let mut eps_p = Grass::zero();
        let mut eps_q = Grass::zero();
        let mut ep = FockOperator::zero(m);
        for r in 0..modes.spins {
            let j = modes.index(k, r);
            let e: C = modes.eps(s, r);
            eq = eq.add(&qo[j].scale(&e));
            ep = ep.add(&po[j].scale(&e));
            eps_p.add_assign(&p.components[j].scale(&e));
            eps_q.add_assign(&q.components[j].scale(&e));
        }
        let a_rec = qo[i].sub(&ep).scale(&inv);
        let ad_rec = eq.add(&po[i]).scale(&inv);
        let (a, ad) = (FockOperator::a(m, i), FockOperator::adag(m, i));
        out.push(
            Check::new(WIG, format!("â[{i}] from q̂,p̂"), "â_s = (q̂_s − ε_sr p̂_r)/√2", a_rec.action_eq(&a))
                .with_residual(action_residual(m, |x| a_rec.apply(x), |x| a.apply(x))),
        );
        out.push(
            Check::new(WIG, format!("â†[{i}] from q̂,p̂"), "â†_s = (ε_sr q̂_r + p̂_s)/√2", ad_rec.action_eq(&ad))
                .with_residual(action_residual(m, |x| ad_rec.apply(x), |x| ad.apply(x))),
        );
        let symbols = [
            ("q̂", &qo[i], q.components[i].clone(), "W_q̂ = q"),
            ("p̂", &po[i], p.components[i].clone(), "W_p̂ = p"),
            ("â", &a, q.components[i].sub(&eps_p).scale(&inv), "W_â = (q_s − ε_sr p_r)/√2"),
            ("â†", &ad, eps_q.add(&p.components[i]).scale(&inv), "W_â† = (ε_sr q_r + p_s)/√2"),
        ];
        for (name, op, want, anchor) in symbols {
            let got = wigner_transform(op, &ps)?.value;
            out.push(grass_check(WIG, format!("W {name}[{i}]"), anchor, &got, &want));
        }
    }
    let w1 = wigner_transform(&FockOperator::identity(m), &ps)?;
    out.push(grass_check(WIG, "W 𝟙".into(), "W_𝟙 = 1", &w1.value, &Grass::one()));
    let id_back = matrix_of(&weyl_transform(&w1, &ps)?);
    out.push(Check::new(WIG, "Weyl 1", "Weyl(1) = 𝟙", id_back == matrix_of(&FockOperator::identity(m))).with_residual(matrix_residual(&id_back, &matrix_of(&FockOperator::identity(m)))));

    let mut ops: Vec<(String, FockOperator<C>)> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            ops.push((format!("â†{i}â{j}"), FockOperator::adag(m, i).mul(&FockOperator::a(m, j))));
        }
    }
    for n in 0..samples {
        ops.push((format!("random {n}"), random_operator(m, 1 << m, rng)));
    }
    let [s1, s2] = ["σ₁", "σ₂"].map(|n| ps.fresh(n, GenClass::Auxiliary));
    let (q1, q2) = (ParamFn::<C>::from_generators(&s1?), ParamFn::<C>::from_generators(&s2?));
    for (name, op) in &ops {
        let w = wigner_transform(op, &ps)?;
        let back = weyl_matrix(&w, &ps)?;
        let want = matrix_of(op);
        out.push(Check::new(WIG, format!("roundtrip {name}"), "Weyl(W_Â) = Â", back == want).with_residual(matrix_residual(&back, &want)));
        let rho = density_from_wigner(&w, &q1, &q2, &ps)?;
        let direct = density_functional(op, &q1, &q2, modes)?;
        out.push(grass_check(WIG, format!("density {name}"), "∫W[(q₁+q₂)/2,p]exp((q₁−q₂)◇p)𝒟_Λ[p] = ⟨q₁|Â|q₂⟩", &rho, &direct));
        let wt = wigner_trace(&w, &ps);
        out.push(
            grass_check(WIG, format!("trace {name}"), "∫W_Â 𝒟_Λ[q,p] = tr Â", &wt, &trace(op))
                .with_detail(format!("∫W = {}, tr = {}", wt.to_text(None), trace(op).to_text(None))),
        );
        out.push(grass_check(WIG, format!("supertrace {name}"), "∫W_Â 𝒟_Λ[q,p] = Σ(−1)^{|n|}⟨n|Â|n⟩", &wt, &supertrace(op)));
    }
    if let [(_, a), (_, b), ..] = &ops[m * m..] {
        let (x, y) = (C::from_int(2), C::from_ratio(-1, 3));
        let lhs = wigner_transform(&a.scale(&x).add(&b.scale(&y)), &ps)?.value;
        let rhs = wigner_transform(a, &ps)?.value.scale(&x).add(&wigner_transform(b, &ps)?.value.scale(&y));
        out.push(grass_check(WIG, "linearity".into(), "W_{xA+yB} = xW_A + yW_B", &lhs, &rhs));
    }
    let even = random_operator::<C>(m, 1 << m, rng);
    let even = FockOperator {
        m,
        terms: even.terms.into_iter().filter(|(_, w)| w.parity() == 0).collect(),
    };
    out.push(Check::new(WIG, "parity", "even Â ⇒ W_Â Grassmann-even", wigner_transform(&even, &ps)?.value.is_even()));

    let d = 1usize << m;
    for n in [0usize, 1, d - 1] {
        let mut proj = vec![vec![Grass::<C>::zero(); d]; d];
        proj[n][n] = Grass::one();
        let rho = operator_from_matrix(m, &proj);
        let wt = wigner_trace(&wigner_transform(&rho, &ps)?, &ps);
        out.push(
            grass_check(WIG, format!("normalization |{n}⟩⟨{n}|"), "∫W_ρ̂ 𝒟_Λ[q,p] = 1", &wt, &Grass::one())
                .with_detail(format!("∫W = {}", wt.to_text(None))),
        );
    }
    let psi = FockState {
        m,
        amps: (0..d).map(|_| Grass::scalar(crate::modes::from_qi(&crate::random::gauss_rational(rng)))).collect(),
    };
    for (name, state) in [("vac", FockState::vac(m)), ("random", psi)] {
        let rho = operator_from_matrix(
            m,
            &(0..d)
                .map(|i| (0..d).map(|j| state.amps[i].mul(&state.amps[j].conjugate())).collect())
                .collect::<Vec<_>>(),
        );
        let lhs = density_functional(&rho, &q1, &q2, modes)?;
        let rhs = wave_functional(&state, &q1, modes)?.mul(&state.dagger().pair(&q_ket(&q2, modes)?));
        out.push(grass_check(WIG, format!("pure state {name}"), "ρ[q₁,q₂] = ψ[q₁]ψ*[q₂] with ψ*[q] = ⟨ψ|q⟩", &lhs, &rhs));
    }
    Ok(out)
}

/// Double Grassmann Fourier transform, the δ produced by `W = 1`, and the
/// characteristic-functional roundtrip.
pub fn verify_fourier<C: Coeff>(modes: &ModeSet, reg: &Registry, rng: &mut impl Rng, samples: usize, with_characteristic: bool) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let ps = PhaseSpace::<C>::new(modes, reg)?;
    let tag = format!("Ω={}", modes.omega());
    for n in 0..samples {
        let w = random_element::<C>(&ps.q, 6, rng);
        let f = grassmann_fourier(&w, &ps.q, &ps.p, &ps)?;
        let back = grassmann_fourier(&f, &ps.p, &ps.q, &ps)?;
        out.push(grass_check("fourier", format!("double Fourier {n} {tag}"), "∫[∫W exp(p◇q)𝒟_Λ[q]] exp(q◇p)𝒟_Λ[p] = W", &back, &w));
    }
    let delta_p = grassmann_delta(&ParamFn::<C>::from_generators(&ps.p));
    let f1 = grassmann_fourier(&Grass::one(), &ps.q, &ps.p, &ps)?;
    let ratio = ratio_to(&f1, &delta_p);
    out.push(
        Check::new("fourier", format!("Fourier of 1 {tag}"), "∫exp(p◇q)𝒟_Λ[q] ∝ δ[p]", ratio.is_some())
            .with_detail(format!("factor {}", ratio.map(|c| c.to_text()).unwrap_or_else(|| "none".into()))),
    );
    if with_characteristic {
        let (q, p) = (ps.q.clone(), ps.p.clone());
        let mut gens = q.clone();
        gens.extend(&p);
        for n in 0..samples {
            let w = ps.functional(random_element::<C>(&gens, 8, rng));
            let (chi, xi, zeta) = characteristic(&w, &ps)?;
            let back = inverse_characteristic(&chi, &xi, &zeta, &ps)?;
            out.push(grass_check("fourier", format!("characteristic roundtrip {n} {tag}"), "χ ↦ W recovers W", &back.value, &w.value));
        }
        let (chi, xi, zeta) = characteristic(&ps.functional(Grass::one()), &ps)?;
        let dd = grassmann_delta(&ParamFn::<C>::from_generators(&xi)).mul(&grassmann_delta(&ParamFn::from_generators(&zeta)));
        let ratio = ratio_to(&chi, &dd);
        out.push(
            Check::new("fourier", format!("χ of 1 {tag}"), "χ_{W=1} ∝ δ[ξ]δ[ζ]", ratio.is_some())
                .with_detail(format!("factor {}", ratio.map(|c| c.to_text()).unwrap_or_else(|| "none".into()))),
        );
    }
    Ok(out)
}

/// Two- and three-fold star products against Fock-space products.
pub fn verify_star<C: Coeff>(modes: &ModeSet, reg: &Registry, rng: &mut impl Rng, samples: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let m = modes.m();
    let ps = PhaseSpace::<C>::new(modes, reg)?;
    let w = |op: &FockOperator<C>| wigner_transform(op, &ps);
    let one = ps.functional(Grass::one());
    out.push(grass_check("star", "1 ⋆ 1".into(), "W_𝟙 ⋆ W_𝟙 = 1", &star2(&one, &one, &ps)?.value, &Grass::one()));
    let (qo, _) = quadrature_ops::<C>(modes)?;
    out.push(grass_check("star", "q ⋆ 1".into(), "W_q̂ ⋆ W_𝟙 = q", &star2(&w(&qo[0])?, &one, &ps)?.value, &Grass::gen(ps.q[0])));
    for i in 0..m {
        let (a, ad) = (FockOperator::a(m, i), FockOperator::adag(m, i));
        let got = star2(&w(&a)?, &w(&ad)?, &ps)?;
        out.push(grass_check("star", format!("â ⋆ â† [{i}]"), "W_â ⋆ W_â† = W_{ââ†}", &got.value, &w(&a.mul(&ad))?.value));
    }
    for n in 0..samples {
        let ops: Vec<FockOperator<C>> = (0..3).map(|_| random_operator(m, 1 << m, rng)).collect();
        let ws: Vec<_> = ops.iter().map(&w).collect::<Result<_>>()?;
        let ab = star2(&ws[0], &ws[1], &ps)?;
        out.push(grass_check("star", format!("star2 random {n}"), "W_A ⋆ W_B = W_{AB}", &ab.value, &w(&ops[0].mul(&ops[1]))?.value));
        let abc = star3(&ws[0], &ws[1], &ws[2], &ps)?;
        let prod = w(&ops[0].mul(&ops[1]).mul(&ops[2]))?;
        out.push(grass_check("star", format!("star3 random {n}"), "⋆(W_A, W_B, W_C) = W_{ABC}", &abc.value, &prod.value));
        let nested = star2(&ab, &ws[2], &ps)?;
        out.push(grass_check("star", format!("associativity {n}"), "(W_A ⋆ W_B) ⋆ W_C = ⋆(W_A, W_B, W_C)", &nested.value, &abc.value));
    }
    Ok(out)
}

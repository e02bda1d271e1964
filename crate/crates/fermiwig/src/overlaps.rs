//! Inner products between left and right eigenstates: normal-ordering
//! disentanglement, the h-function ODE system, analytic overlaps, the
//! Grassmann delta and the regularized delta in the Laurent ring.

use crate::bogoliubov::{
    r_lower, r_raise, s_eigenvalue, spectral_eps_lower, spectral_eps_raise, spectral_lower,
    spectral_raise,
};
use crate::eigenstates::{left_spectral, render_left, render_right, right_spectral, Kind, Prefactor};
use crate::error::{Error, Result};
use crate::fock::{action_residual, actions_equal, FockBra, FockOperator, FockState};
use crate::grassmann::{diamond, fdiamond, Grass, ParamFn};
use crate::modes::ModeSet;
use crate::report::Check;
use crate::ring::{Coeff, Laurent};

const OVL: &str = "overlaps";

/// Closed-form h-functions at one `t`. `h₄ = −ln d` enters only through
/// `exp(h₄ŝ)`, which acts on `|n⟩` as `d^{−(N−Ω/2)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HClosed<C: Coeff> {
    /// Coefficients of `A*◇B`, `B f◇ B`, `A* f◇ A*`.
    pub h0: [C; 3],
    pub h1: C,
    pub h2: C,
    pub h3: C,
    pub h5: C,
    pub h6: C,
    pub h7: C,
    /// `1 + c₁c₂t²`
    pub d: C,
}

fn sign(c: i64) -> Result<i64> {
    if c == 1 || c == -1 {
        Ok(c)
    } else {
        Err(Error::Config(format!("sign must be ±1, got {c}")))
    }
}

pub fn h_closed_form<C: Coeff>(c1: i64, c2: i64, t: &C) -> Result<HClosed<C>> {
    let (c1, c2) = (C::from_int(sign(c1)?), C::from_int(sign(c2)?));
    let t2 = t.mul(t);
    let d = C::one().add(&c1.mul(&c2).mul(&t2));
    let di = d.inv().ok_or_else(|| Error::Singular(format!("1 + c1c2t² = 0 at t = {}", t.to_text())))?;
    let half = C::from_ratio(1, 2);
    let t3 = t2.mul(t);
    Ok(HClosed {
        h0: [t2.mul(&di), half.mul(&c1).mul(&t3).mul(&di), half.mul(&c2).mul(&t3).mul(&di)],
        h1: t.mul(&di),
        h2: c2.mul(&t2).mul(&di),
        h3: c2.mul(t).mul(&di),
        h5: c1.mul(&t2).mul(&di),
        h6: t.mul(&di),
        h7: c1.mul(t).mul(&di),
        d,
    })
}

/// `[h0a, h0b, h0c, h1, …, h7]` as floats, with `h₄ = −ln(1 + c₁c₂t²)`.
pub fn h_values_f64(c1: i64, c2: i64, t: f64) -> Result<[f64; 10]> {
    let k = (sign(c1)? * sign(c2)?) as f64;
    let (c1, c2) = (c1 as f64, c2 as f64);
    let d = 1.0 + k * t * t;
    if d == 0.0 {
        return Err(Error::Singular(format!("1 + c1c2t² = 0 at t = {t}")));
    }
    Ok([
        t * t / d,
        0.5 * c1 * t.powi(3) / d,
        0.5 * c2 * t.powi(3) / d,
        t / d,
        c2 * t * t / d,
        c2 * t / d,
        -d.ln(),
        c1 * t * t / d,
        t / d,
        c1 * t / d,
    ])
}

/// Exact `t`-derivatives of the closed forms.
pub fn h_derivatives_f64(c1: i64, c2: i64, t: f64) -> [f64; 10] {
    let k = (c1 * c2) as f64;
    let (c1, c2) = (c1 as f64, c2 as f64);
    let d = 1.0 + k * t * t;
    let d2 = d * d;
    let q = (1.0 - k * t * t) / d2;
    let cubic = t * t * (3.0 + k * t * t) / (2.0 * d2);
    [
        2.0 * t / d2,
        c1 * cubic,
        c2 * cubic,
        q,
        2.0 * c2 * t / d2,
        c2 * q,
        -2.0 * k * t / d,
        2.0 * c1 * t / d2,
        q,
        c1 * q,
    ]
}

/// Right-hand sides of the eight-equation system (the `h₀` equation split
/// over its three contractions).
pub fn h_ode_rhs(c1: i64, c2: i64, t: f64, h: &[f64; 10]) -> [f64; 10] {
    let (c1, c2) = (c1 as f64, c2 as f64);
    let tt = 1.0 - c1 * c2 * t * t;
    let [_, _, _, h1, h2, h3, h4, _, _, _] = *h;
    [
        (t + tt * h1) * (1.0 - c1 * h2),
        t * c1 * h1 + 0.5 * c1 * tt * h1 * h1,
        0.5 * t * t * c2 + tt * h2 - 0.5 * c1 * tt * h2 * h2,
        1.0 - t * c1 * c2 * h1 - t * c1 * h3 - c1 * tt * h1 * h3,
        t * c2 - t * c1 * c2 * h2 + tt * h3 - c1 * tt * h2 * h3,
        c2 - 2.0 * t * c1 * c2 * h3 - c1 * tt * h3 * h3,
        -t * c1 * c2 - c1 * tt * h3,
        t * c1 * h4.exp() + c1 * tt * h1 * h4.exp(),
        tt * (1.0 - c1 * h2) * h4.exp(),
        c1 * tt * (2.0 * h4).exp(),
    ]
}

/// Max `|∂h − RHS(h)|` over `samples` points in `[0, 0.9]`; `perturb` adds
/// `δ` to component `i` of the substituted values.
pub fn h_ode_residual(c1: i64, c2: i64, samples: usize, perturb: Option<(usize, f64)>) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in 0..=samples {
        let t = 0.9 * j as f64 / samples as f64;
        let mut h = h_values_f64(c1, c2, t)?;
        if let Some((i, delta)) = perturb {
            h[i] += delta;
        }
        let lhs = h_derivatives_f64(c1, c2, t);
        let rhs = h_ode_rhs(c1, c2, t, &h);
        for (a, b) in lhs.iter().zip(&rhs) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Classical RK4 from `h(0) = 0` to `t_end`.
pub fn rk4_integrate(c1: i64, c2: i64, t_end: f64, steps: usize) -> [f64; 10] {
    let dt = t_end / steps as f64;
    let mut h = [0.0; 10];
    let axpy = |h: &[f64; 10], k: &[f64; 10], s: f64| {
        let mut o = *h;
        for i in 0..10 {
            o[i] += s * k[i];
        }
        o
    };
    for n in 0..steps {
        let t = n as f64 * dt;
        let k1 = h_ode_rhs(c1, c2, t, &h);
        let k2 = h_ode_rhs(c1, c2, t + dt / 2.0, &axpy(&h, &k1, dt / 2.0));
        let k3 = h_ode_rhs(c1, c2, t + dt / 2.0, &axpy(&h, &k2, dt / 2.0));
        let k4 = h_ode_rhs(c1, c2, t + dt, &axpy(&h, &k3, dt));
        for i in 0..10 {
            h[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    h
}

/// Largest deviation between RK4 and the closed forms at `t_end`.
pub fn rk4_deviation(c1: i64, c2: i64, t_end: f64, steps: usize) -> Result<f64> {
    let num = rk4_integrate(c1, c2, t_end, steps);
    let exact = h_values_f64(c1, c2, t_end)?;
    Ok(num.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// `X = t²A*◇B + ½c₁t³ B f◇ B + ½c₂t³ A* f◇ A*`.
fn exponent_numerator<C: Coeff>(c1: i64, c2: i64, astar: &ParamFn<C>, b: &ParamFn<C>, t: &C, modes: &ModeSet) -> Grass<C> {
    let t2 = t.mul(t);
    let t3 = t2.mul(t);
    let half = C::from_ratio(1, 2);
    diamond(astar, b, modes)
        .scale(&t2)
        .add(&fdiamond(b, b, modes).scale(&half.mul(&t3).mul(&C::from_int(c1))))
        .add(&fdiamond(astar, astar, modes).scale(&half.mul(&t3).mul(&C::from_int(c2))))
}

/// `⟨vac|exp(tÂ + tc₁R̂) exp(tB̂† + tc₂R̂†)|vac⟩` in the Fock representation.
pub fn overlap_direct<C: Coeff>(c1: i64, c2: i64, astar: &ParamFn<C>, b: &ParamFn<C>, t: &C, modes: &ModeSet) -> Result<Grass<C>> {
    let (c1, c2) = (sign(c1)?, sign(c2)?);
    let n = modes.m();
    let left = spectral_lower(astar, modes).add(&r_lower::<C>(modes).scale(&C::from_int(c1))).scale(t);
    let right = spectral_raise(b, modes).add(&r_raise::<C>(modes).scale(&C::from_int(c2))).scale(t);
    let ket = right.exp_apply(&FockState::vac(n))?;
    let bra = left.exp_apply_bra(&FockBra::vac(n))?;
    Ok(bra.pair(&ket))
}

/// `d^{Ω/2} exp(X/d)` with `d = 1 + c₁c₂t²`.
pub fn overlap_analytic<C: Coeff>(c1: i64, c2: i64, astar: &ParamFn<C>, b: &ParamFn<C>, t: &C, modes: &ModeSet) -> Result<Grass<C>> {
    let h = h_closed_form::<C>(c1, c2, t)?;
    let di = h.d.inv().expect("checked by h_closed_form");
    let x = exponent_numerator(c1, c2, astar, b, t, modes).scale(&di);
    let pw = h.d.pow((modes.omega() / 2) as i32).expect("nonnegative power");
    Ok(x.exp()?.scale(&pw))
}

/// `d^p · d^{Ω/2} exp(X/d) = Σ_k X^k d^{p+Ω/2−k}/k!`, polynomial in `t` when
/// `p + Ω/2` reaches the top power of `X`; usable at the singular point and in
/// rings without general inverses.
pub fn overlap_analytic_cleared<C: Coeff>(
    c1: i64,
    c2: i64,
    astar: &ParamFn<C>,
    b: &ParamFn<C>,
    t: &C,
    modes: &ModeSet,
    p: usize,
) -> Result<Grass<C>> {
    let (c1s, c2s) = (sign(c1)?, sign(c2)?);
    let d = C::one().add(&C::from_int(c1s * c2s).mul(&t.mul(t)));
    let x = exponent_numerator(c1, c2, astar, b, t, modes);
    let top = p + modes.omega() / 2;
    let mut acc = Grass::zero();
    let mut xk = Grass::one();
    let mut fact = C::one();
    let mut k = 0usize;
    while !xk.is_zero() {
        if k > top {
            return Err(Error::Singular(format!("X^{k} needs d^{}", top as i64 - k as i64)));
        }
        let dp = d.pow((top - k) as i32).expect("nonnegative power");
        acc.add_assign(&xk.scale(&dp.mul(&fact.inv().expect("k! invertible"))));
        k += 1;
        xk = xk.mul(&x);
        fact = fact.mul(&C::from_int(k as i64));
    }
    Ok(acc)
}

/// Both sides of the disentanglement identity as actions on every basis ket.
pub fn disentanglement_residual<C: Coeff>(
    c1: i64,
    c2: i64,
    astar: &ParamFn<C>,
    b: &ParamFn<C>,
    t: &C,
    modes: &ModeSet,
) -> Result<(bool, f64)> {
    let h = h_closed_form::<C>(c1, c2, t)?;
    let n = modes.m();
    let ah = spectral_lower(astar, modes);
    let bd = spectral_raise(b, modes);
    let aed = spectral_eps_raise(astar, modes);
    let be = spectral_eps_lower(b, modes);
    let (r, rd) = (r_lower::<C>(modes), r_raise::<C>(modes));
    let ex = |x: &FockOperator<C>, c: &C, psi: &FockState<C>| {
        x.scale(c).exp_apply(psi).expect("finite series")
    };
    let (c1c, c2c) = (C::from_int(c1), C::from_int(c2));
    let lhs = |psi: &FockState<C>| {
        let s = ex(&rd, &t.mul(&c2c), psi);
        let s = ex(&bd, t, &s);
        let s = ex(&r, &t.mul(&c1c), &s);
        ex(&ah, t, &s)
    };
    let h0 = diamond(astar, b, modes)
        .scale(&h.h0[0])
        .add(&fdiamond(b, b, modes).scale(&h.h0[1]))
        .add(&fdiamond(astar, astar, modes).scale(&h.h0[2]))
        .exp()?;
    let dpow = |occ: u32| h.d.pow(-s_eigenvalue(occ, modes)).expect("d is invertible");
    let rhs = |psi: &FockState<C>| {
        let s = ex(&r, &h.h7, psi);
        let s = ex(&ah, &h.h6, &s);
        let s = ex(&be, &h.h5, &s);
        let s = s.diag(dpow);
        let s = ex(&rd, &h.h3, &s);
        let s = ex(&aed, &h.h2, &s);
        let s = ex(&bd, &h.h1, &s);
        s.mul_left(&h0)
    };
    Ok((actions_equal(n, lhs, rhs), action_residual(n, lhs, rhs)))
}

/// `δ[f] = f₁f₂…f_M`.
pub fn grassmann_delta<C: Coeff>(f: &ParamFn<C>) -> Grass<C> {
    f.top_product()
}

/// `∫ W[f]·δ[f − f′] 𝒟[f]` over the generators of `f`, which must be bare
/// generators.
pub fn sift<C: Coeff>(w: &Grass<C>, f_ids: &[usize], fprime: &ParamFn<C>) -> Result<Grass<C>> {
    let f = ParamFn::<C>::from_generators(f_ids);
    let delta = grassmann_delta(&f.sub(fprime)?);
    Ok(w.mul(&delta).berezin(f_ids))
}

/// `∫ ⟨vac|…|vac⟩`-free Fourier form: `∫ exp(q◇p) 𝒟[q]`.
pub fn fourier_delta<C: Coeff>(q_ids: &[usize], p: &ParamFn<C>, modes: &ModeSet) -> Result<Grass<C>> {
    let q = ParamFn::<C>::from_generators(q_ids);
    Ok(diamond(&q, p, modes).exp()?.berezin(q_ids))
}

/// `ε^{−Ω/2} exp(f f◇ f / 2ε)` with the Laurent variable as `ε`.
pub fn regularized_delta<C: Coeff>(f: &ParamFn<C>, modes: &ModeSet) -> Result<Grass<Laurent<C>>> {
    let fl = lift(f);
    let half_inv_eps = Laurent::<C>::var_pow(-1).mul(&Laurent::constant(C::from_ratio(1, 2)));
    let e = fdiamond(&fl, &fl, modes).scale(&half_inv_eps).exp()?;
    Ok(e.scale(&Laurent::var_pow(-(modes.omega() as i32) / 2)))
}

/// `Λ(Ω, ε) = ε^{−Ω}`, the leading Laurent order of the regularized delta
/// once the phase `(−i)^{Ω/2}` is set aside.
pub fn lambda_constant<C: Coeff>(omega: usize) -> Laurent<C> {
    Laurent::var_pow(-(omega as i32))
}

/// `(−i)^{Ω/2}`, the phase carried by the leading order of the regularized
/// delta with a Pauli-y spin matrix.
pub fn delta_phase<C: Coeff>(omega: usize) -> C {
    let mi = C::i().neg();
    (0..omega / 2).fold(C::one(), |acc, _| acc.mul(&mi))
}

pub fn lift<C: Coeff>(f: &ParamFn<C>) -> ParamFn<Laurent<C>> {
    ParamFn {
        components: f.components.iter().map(|g| g.map_coeffs(|c| Laurent::constant(c.clone()))).collect(),
        conjugated: f.conjugated,
    }
}

/// The `c₁, c₂` signs of `⟨left|right⟩`.
pub fn signs(left: Kind, right: Kind) -> (i64, i64) {
    (left.left_sign(), right.right_sign())
}

/// `⟨left[pstar]|right[p]⟩` via the general formula's `A*`, `B` at `t`.
pub fn named_overlap_direct<C: Coeff>(
    left: Kind,
    pstar: &ParamFn<C>,
    right: Kind,
    p: &ParamFn<C>,
    t: &C,
    modes: &ModeSet,
    pf: Prefactor,
) -> Result<Grass<C>> {
    let (c1, c2) = signs(left, right);
    let astar = left_spectral(left, pstar, modes)?;
    let b = right_spectral(right, p, modes)?;
    let core = overlap_direct(c1, c2, &astar, &b, t, modes)?;
    let fl = crate::eigenstates::prefactor(pstar, modes, pf)?;
    let fr = crate::eigenstates::prefactor(p, modes, pf)?;
    Ok(fl.mul(&fr).mul(&core))
}

/// `⟨left[pstar]|right[p]⟩` from the rendered states, at `t = 1`.
pub fn state_overlap<C: Coeff>(left: Kind, pstar: &ParamFn<C>, right: Kind, p: &ParamFn<C>, modes: &ModeSet, pf: Prefactor) -> Result<Grass<C>> {
    let bra = render_left(left, pstar, modes, pf)?;
    let ket = render_right(right, p, modes, pf)?;
    Ok(bra.pair(&ket))
}

/// Expected exponent of a common-sign overlap.
pub type ExponentFn<C> = fn(&ParamFn<C>, &ParamFn<C>, &ModeSet) -> Grass<C>;

fn e_plain<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, m: &ModeSet) -> Grass<C> {
    diamond(a, b, m)
}
fn e_eps_i<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, m: &ModeSet) -> Grass<C> {
    fdiamond(a, b, m).scale(&C::i())
}
fn e_eps_mi<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, m: &ModeSet) -> Grass<C> {
    fdiamond(a, b, m).scale(&C::i().neg())
}

/// The eight common-sign overlaps: `(left, right, anchor, exponent)`.
pub fn common_sign_table<C: Coeff>() -> Vec<(Kind, Kind, &'static str, ExponentFn<C>)> {
    use Kind::*;
    vec![
        (G, GBar, "⟨g_L|ḡ_R⟩ = exp(γ*◇ḡ)", e_plain::<C>),
        (HBar, GBar, "⟨h̄_L|ḡ_R⟩ = exp(−iθ̄* f◇ ḡ)", e_eps_mi::<C>),
        (G, H, "⟨g_L|h_R⟩ = exp(iγ* f◇ h)", e_eps_i::<C>),
        (HBar, H, "⟨h̄_L|h_R⟩ = exp(θ̄*◇h)", e_plain::<C>),
        (GBar, G, "⟨ḡ_L|g_R⟩ = exp(γ̄*◇g)", e_plain::<C>),
        (H, G, "⟨h_L|g_R⟩ = exp(−iθ* f◇ g)", e_eps_mi::<C>),
        (GBar, HBar, "⟨ḡ_L|h̄_R⟩ = exp(iγ̄* f◇ h̄)", e_eps_i::<C>),
        (H, HBar, "⟨h_L|h̄_R⟩ = exp(θ*◇h̄)", e_plain::<C>),
    ]
}

/// Delta argument as a function of `(pstar, p)`.
pub type DeltaArgFn<C> = fn(&ParamFn<C>, &ParamFn<C>, &ModeSet) -> ParamFn<C>;

fn d_diff<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, _: &ModeSet) -> ParamFn<C> {
    a.sub(b).expect("equal lengths")
}
fn d_plus_ieps<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, m: &ModeSet) -> ParamFn<C> {
    a.add(&b.eps_left(m, &C::i())).expect("equal lengths")
}
fn d_minus_ieps<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, m: &ModeSet) -> ParamFn<C> {
    a.sub(&b.eps_left(m, &C::i())).expect("equal lengths")
}

/// The eight delta-type overlaps: `(left, right, anchor, argument)`.
pub fn delta_table<C: Coeff>() -> Vec<(Kind, Kind, &'static str, DeltaArgFn<C>)> {
    use Kind::*;
    vec![
        (G, G, "⟨g_L|g_R⟩ = Λδ[γ* − g]", d_diff::<C>),
        (GBar, GBar, "⟨ḡ_L|ḡ_R⟩ = Λδ[γ̄* − ḡ]", d_diff::<C>),
        (H, H, "⟨h_L|h_R⟩ = Λδ[θ* − h]", d_diff::<C>),
        (HBar, HBar, "⟨h̄_L|h̄_R⟩ = Λδ[θ̄* − h̄]", d_diff::<C>),
        (HBar, G, "⟨h̄_L|g_R⟩ = Λδ[θ̄* + iε·g]", d_plus_ieps::<C>),
        (GBar, H, "⟨ḡ_L|h_R⟩ = Λδ[γ̄* − iε·h]", d_minus_ieps::<C>),
        (G, HBar, "⟨g_L|h̄_R⟩ = Λδ[γ* − iε·h̄]", d_minus_ieps::<C>),
        (H, GBar, "⟨h_L|ḡ_R⟩ = Λδ[θ* + iε·ḡ]", d_plus_ieps::<C>),
    ]
}

/// `Λ_fin` from `value = Λ_fin·δ`, if `value` is a scalar multiple of `δ`.
pub fn ratio_to<C: Coeff>(value: &Grass<C>, delta: &Grass<C>) -> Option<C> {
    let (m, c) = delta.terms().next()?;
    let lam = value.coeff(*m).mul(&c.inv()?);
    (delta.scale(&lam) == *value).then_some(lam)
}

/// The finite constant in `⟨f_L|f_R⟩ = Λ_fin δ[f]` at `t = 1` with the
/// `2^{−Ω/4}` prefactors: `(−2i)^{Ω/2}·2^{−Ω/2} = (−i)^{Ω/2}`.
pub fn lambda_fin<C: Coeff>(omega: usize) -> C {
    delta_phase::<C>(omega)
}

/// Common-sign and delta-type overlaps at `t = 1` from rendered states.
pub fn verify_named_overlaps<C: Coeff>(modes: &ModeSet, pstar: &ParamFn<C>, p: &ParamFn<C>, tag: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (l, r, anchor, e) in common_sign_table::<C>() {
        let got = state_overlap(l, pstar, r, p, modes, Prefactor::On)?;
        let exponent = e(pstar, p, modes);
        let want = exponent.exp()?;
        out.push(Check::new(OVL, format!("{anchor} #{tag}"), anchor, got == want).with_residual(got.sub(&want).max_magnitude()));
        // modulus one for real-generator parameters
        let unit = got.mul(&got.conjugate());
        out.push(Check::new(OVL, format!("|{anchor}|² #{tag}"), "O·O* = 1 for real parameters", unit == Grass::one()));
    }
    let lam = lambda_fin::<C>(modes.omega());
    for (l, r, anchor, arg) in delta_table::<C>() {
        let got = state_overlap(l, pstar, r, p, modes, Prefactor::On)?;
        let delta = grassmann_delta(&arg(pstar, p, modes));
        let want = delta.scale(&lam);
        out.push(
            Check::new(OVL, format!("{anchor} #{tag}"), anchor, got == want)
                .with_residual(got.sub(&want).max_magnitude())
                .with_detail(format!("Λ_fin = {}", ratio_to(&got, &delta).map(|c| c.to_text()).unwrap_or_else(|| "none".into()))),
        );
    }
    Ok(out)
}

/// Delta-type overlaps near the singular point, in the Laurent ring with
/// `t = 1 − ε′`: `d^{Ω/2}·direct` equals the cleared analytic form order by
/// order, the `ε′⁰` coefficient of the direct overlap is `Λ_fin δ[f]`, and
/// the regularized delta's leading order is `(−i)^{Ω/2} ε^{−Ω} δ[f]`.
pub fn verify_delta_laurent<C: Coeff>(modes: &ModeSet, pstar: &ParamFn<C>, p: &ParamFn<C>, tag: &str) -> Result<Vec<Check>> {
    type L<C> = Laurent<C>;
    let omega = modes.omega();
    let t = L::<C>::one().sub(&L::var());
    let (ps, pp) = (lift(pstar), lift(p));
    let lam = lambda_fin::<C>(omega);
    let mut out = Vec::new();
    for (l, r, anchor, arg) in delta_table::<C>() {
        let (c1, c2) = signs(l, r);
        let astar = left_spectral(l, &ps, modes)?;
        let b = right_spectral(r, &pp, modes)?;
        let pref = crate::eigenstates::prefactor(&ps, modes, Prefactor::On)?
            .mul(&crate::eigenstates::prefactor(&pp, modes, Prefactor::On)?);
        let direct = pref.mul(&overlap_direct(c1, c2, &astar, &b, &t, modes)?);
        let d = L::<C>::one().add(&L::from_int(c1 * c2).mul(&t.mul(&t)));
        let dpow = d.pow((omega / 2) as i32).expect("nonnegative power");
        let lhs = direct.scale(&dpow);
        let rhs = pref.mul(&overlap_analytic_cleared(c1, c2, &astar, &b, &t, modes, omega / 2)?);
        let orders = order_range(&lhs).merge(order_range(&rhs));
        let mut rows = Vec::new();
        let mut all = true;
        for k in orders.0..=orders.1 {
            let (a, bq) = (lhs.map_coeffs(|c| c.coeff(k)), rhs.map_coeffs(|c| c.coeff(k)));
            let ok = a == bq;
            all &= ok;
            rows.push((k, if ok { "match".to_string() } else { a.sub(&bq).to_text(None) }));
        }
        let mut chk = Check::new(OVL, format!("laurent {anchor} #{tag}"), "d^{Ω/2}·⟨f_L|f_R⟩ = Σ_k X^k d^{Ω−k}/k! at t = 1 − ε′", all);
        chk.laurent = rows;
        out.push(chk);
        let delta = grassmann_delta(&arg(pstar, p, modes));
        let at_one = direct.map_coeffs(|c| c.coeff(0));
        out.push(Check::new(OVL, format!("ε′⁰ {anchor} #{tag}"), "⟨f_L|f_R⟩|_{t=1} = Λ_fin δ[f]", at_one == delta.scale(&lam)));
        let reg = regularized_delta(&arg(pstar, p, modes), modes)?;
        let lead = reg.map_coeffs(|c| c.coeff(-(omega as i32)));
        let lowest = order_range(&reg).0;
        out.push(Check::new(
            OVL,
            format!("p[f] leading {anchor} #{tag}"),
            "ε^{−Ω/2}exp(f f◇ f/2ε) = (−i)^{Ω/2} ε^{−Ω} δ[f] + O(ε^{1−Ω})",
            lowest == -(omega as i32) && lead == delta.scale(&delta_phase::<C>(omega)),
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy)]
struct Orders(i32, i32);

impl Orders {
    fn merge(self, o: Orders) -> (i32, i32) {
        (self.0.min(o.0), self.1.max(o.1))
    }
}

fn order_range<C: Coeff>(g: &Grass<Laurent<C>>) -> Orders {
    let mut lo = 0;
    let mut hi = 0;
    for (_, c) in g.terms() {
        if let (Some(a), Some(b)) = (c.min_order(), c.max_order()) {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    Orders(lo, hi)
}

const SIGN_PAIRS: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Closed forms against the ODE system, an independent RK4 run, and a
/// perturbed closed form that must be rejected.
pub fn verify_h_odes(samples: usize, tol: f64, rk4_tol: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (c1, c2) in SIGN_PAIRS {
        let r = h_ode_residual(c1, c2, samples, None)?;
        out.push(
            Check::within("h-odes", format!("closed forms c1={c1} c2={c2}"), "∂h = RHS(h) on t ∈ [0, 0.9]", r, tol)
                .with_detail(format!("max residual {r:.3e}")),
        );
        let d = rk4_deviation(c1, c2, 0.9, 2000)?;
        out.push(
            Check::within("h-odes", format!("rk4 c1={c1} c2={c2}"), "RK4 from h(0) = 0 reaches the closed forms at t = 0.9", d, rk4_tol)
                .with_detail(format!("max deviation {d:.3e}")),
        );
        let p = h_ode_residual(c1, c2, samples, Some((3, 1e-6)))?;
        out.push(
            Check::new("h-odes", format!("sensitivity c1={c1} c2={c2}"), "perturbed h₁ violates the system", p > tol)
                .with_residual(p),
        );
    }
    Ok(out)
}

/// Normal-ordering disentanglement as an operator identity, all sign pairs.
pub fn verify_disentanglement<C: Coeff>(modes: &ModeSet, astar: &ParamFn<C>, b: &ParamFn<C>, ts: &[C], tag: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (c1, c2) in SIGN_PAIRS {
        for t in ts {
            let (ok, r) = disentanglement_residual(c1, c2, astar, b, t, modes)?;
            out.push(
                Check::new(
                    "disentanglement",
                    format!("c1={c1} c2={c2} t={} #{tag}", t.to_text()),
                    "e^{tÂ+tc₁R̂}e^{tB̂†+tc₂R̂†} = e^{h₀}e^{h₁B̂†}e^{h₂Â_ε†}e^{h₃R̂†}e^{h₄ŝ}e^{h₅B̂_ε}e^{h₆Â}e^{h₇R̂}",
                    ok,
                )
                .with_residual(r),
            );
        }
    }
    Ok(out)
}

/// `⟨vac|e^{R̂}e^{R̂†}|vac⟩`, which fixes the sign of `ŝ` on the vacuum.
pub fn verify_vacuum_overlap<C: Coeff>(modes: &ModeSet) -> Result<Vec<Check>> {
    let zero = ParamFn::zero(modes.m());
    let got = overlap_direct(1, 1, &zero, &zero, &C::one(), modes)?;
    let want = C::from_int(2).pow((modes.omega() / 2) as i32).expect("2 ≠ 0");
    Ok(vec![Check::new(
        "disentanglement",
        "vacuum overlap",
        "⟨vac|e^{R̂}e^{R̂†}|vac⟩ = 2^{Ω/2}, i.e. ŝ|vac⟩ = −½Ω|vac⟩",
        got == Grass::scalar(want),
    )
    .with_detail(format!("got {}", got.to_text(None)))])
}

/// `d^{Ω/2}exp(X/d)` against the Fock-space overlap, all sign pairs.
pub fn verify_overlap_forms<C: Coeff>(modes: &ModeSet, astar: &ParamFn<C>, b: &ParamFn<C>, ts: &[C], tag: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (c1, c2) in SIGN_PAIRS {
        for t in ts {
            let direct = overlap_direct(c1, c2, astar, b, t, modes)?;
            let analytic = overlap_analytic(c1, c2, astar, b, t, modes)?;
            out.push(
                Check::new(
                    OVL,
                    format!("analytic c1={c1} c2={c2} t={} #{tag}", t.to_text()),
                    "⟨vac|e^{tÂ+tc₁R̂}e^{tB̂†+tc₂R̂†}|vac⟩ = d^{Ω/2}exp(X/d)",
                    direct == analytic,
                )
                .with_residual(direct.sub(&analytic).max_magnitude()),
            );
        }
    }
    Ok(out)
}

/// `∫W[f]δ[f−f′]𝒟[f] = (−1)^{Ω(Ω−1)/2} W[f′]` and `∫exp(q◇p)𝒟[q] = ±δ[p]`.
pub fn verify_sifting<C: Coeff>(
    modes: &ModeSet,
    reg: &crate::grassmann::Registry,
    rng: &mut impl rand::Rng,
    samples: usize,
) -> Result<Vec<Check>> {
    use crate::grassmann::GenClass;
    let omega = modes.omega();
    let sign = if (omega * omega.saturating_sub(1) / 2) % 2 == 1 { C::one().neg() } else { C::one() };
    let f_ids = reg.fresh_vec("f", modes.m(), GenClass::Auxiliary)?;
    let mut out = Vec::new();
    for n in 0..samples {
        let w = crate::random::random_element::<C>(&f_ids, 8, rng);
        let fp = crate::random::random_param::<C>(reg, "f′", modes, rng)?;
        let got = sift(&w, &f_ids, &fp)?;
        let map = f_ids.iter().copied().zip(fp.components.iter().cloned()).collect();
        let want = w.substitute(&map)?.scale(&sign);
        out.push(
            Check::new("delta", format!("sifting {n} Ω={omega}"), "∫W[f]δ[f−f′]𝒟[f] = (−1)^{Ω(Ω−1)/2} W[f′]", got == want)
                .with_residual(got.sub(&want).max_magnitude()),
        );
    }
    let q = reg.fresh_vec("q", modes.m(), GenClass::PhaseQ)?;
    let p = ParamFn::<C>::from_generators(&reg.fresh_vec("p", modes.m(), GenClass::PhaseP)?);
    let fd = fourier_delta(&q, &p, modes)?;
    let ratio = ratio_to(&fd, &grassmann_delta(&p));
    let unit = ratio.as_ref().is_some_and(|c| *c == C::one() || *c == C::one().neg());
    out.push(
        Check::new("delta", format!("fourier delta Ω={omega}"), "∫exp(q◇p)𝒟[q] = ±δ[p]", unit)
            .with_detail(format!("factor {}", ratio.map(|c| c.to_text()).unwrap_or_else(|| "none".into()))),
    );
    Ok(out)
}

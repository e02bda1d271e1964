//! Bogoliubov operators `ĝ`, `ĥ`, the fermionic adjoint `‡`, and the
//! bosonized family `Â, Â†, Â_ε, Â_ε†, R̂, R̂†, ŝ`.

use crate::error::{Error, Result};
use crate::fock::{actions_equal, action_residual, FockOperator, FockState, Ladder, Word};
use crate::grassmann::{diamond, fdiamond, Grass, ParamFn};
use crate::modes::ModeSet;
use crate::report::Check;
use crate::ring::Coeff;

pub struct BogoliubovSet<C: Coeff> {
    pub g: Vec<FockOperator<C>>,
    pub h: Vec<FockOperator<C>>,
    pub gd: Vec<FockOperator<C>>,
    pub hd: Vec<FockOperator<C>>,
}

fn sqrt2_inv<C: Coeff>() -> Result<C> {
    C::sqrt2().and_then(|s| s.inv()).ok_or(Error::NoSqrt2(C::NAME))
}

/// `Σ_r ε_sr â_r` (or `â†_r`) within the k-point of mode `i`.
fn eps_ladder<C: Coeff>(modes: &ModeSet, i: usize, create: bool) -> FockOperator<C> {
    let (k, s) = (modes.k_of(i), modes.s_of(i));
    let mut op = FockOperator::zero(modes.m());
    for r in 0..modes.spins {
        let e: C = modes.eps(s, r);
        if e.is_zero() {
            continue;
        }
        let w = Word(vec![Ladder { mode: modes.index(k, r), create }]);
        op = op.add(&FockOperator::term(modes.m(), Grass::scalar(e), w));
    }
    op
}

pub fn build_bogoliubov<C: Coeff>(modes: &ModeSet) -> Result<BogoliubovSet<C>> {
    modes.validate()?;
    modes.require_unit_weights()?;
    let n = modes.m();
    let r2 = sqrt2_inv::<C>()?;
    let mut set = BogoliubovSet { g: vec![], h: vec![], gd: vec![], hd: vec![] };
    for i in 0..n {
        let a = FockOperator::a(n, i);
        let ead = eps_ladder::<C>(modes, i, true);
        let g = a.add(&ead).scale(&r2);
        let h = a.sub(&ead).scale(&r2.mul(&C::i()));
        set.gd.push(g.dagger());
        set.hd.push(h.dagger());
        set.g.push(g);
        set.h.push(h);
    }
    Ok(set)
}

/// Majorana operator `(â_i + â†_i)/√2`.
pub fn majorana<C: Coeff>(m: usize, i: usize) -> Result<FockOperator<C>> {
    Ok(FockOperator::a(m, i).add(&FockOperator::adag(m, i)).scale(&sqrt2_inv::<C>()?))
}

/// Antilinear, order reversing, with `â_s ↦ ε_sr â†_r` and `â†_s ↦ −ε_sr â_r`.
pub fn fermionic_adjoint<C: Coeff>(op: &FockOperator<C>, modes: &ModeSet) -> FockOperator<C> {
    let n = modes.m();
    let mut out = FockOperator::zero(n);
    for (c, w) in &op.terms {
        let mut acc = FockOperator::scalar(n, c.conjugate().sigma_pow(w.parity()));
        for l in w.0.iter().rev() {
            let img = if l.create {
                eps_ladder::<C>(modes, l.mode, false).neg()
            } else {
                eps_ladder::<C>(modes, l.mode, true)
            };
            acc = acc.mul(&img);
        }
        out = out.add(&acc);
    }
    out
}

/// `Â = A*◇â`, with the starred function supplied directly.
pub fn spectral_lower<C: Coeff>(astar: &ParamFn<C>, modes: &ModeSet) -> FockOperator<C> {
    let n = modes.m();
    FockOperator {
        m: n,
        terms: (0..n).map(|i| (astar.components[i].clone(), Word::a(i))).collect(),
    }
    .simplify()
}

/// `Â† = â†◇A`; the odd `A_i` is moved left past `â†_i`.
pub fn spectral_raise<C: Coeff>(a: &ParamFn<C>, modes: &ModeSet) -> FockOperator<C> {
    let n = modes.m();
    FockOperator {
        m: n,
        terms: (0..n).map(|i| (a.components[i].neg(), Word::adag(i))).collect(),
    }
    .simplify()
}

/// `Â_ε = A f◇ â`.
pub fn spectral_eps_lower<C: Coeff>(a: &ParamFn<C>, modes: &ModeSet) -> FockOperator<C> {
    let ae = a.eps_right(modes, &C::one());
    spectral_lower(&ae, modes)
}

/// `Â_ε† = â† f◇ A*`, with the starred function supplied directly.
pub fn spectral_eps_raise<C: Coeff>(astar: &ParamFn<C>, modes: &ModeSet) -> FockOperator<C> {
    let ea = astar.eps_left(modes, &C::one());
    spectral_raise(&ea, modes)
}

/// `R̂ = ½ â f◇ â`.
pub fn r_lower<C: Coeff>(modes: &ModeSet) -> FockOperator<C> {
    pair_op(modes, false)
}

/// `R̂† = ½ â† f◇ â†`.
pub fn r_raise<C: Coeff>(modes: &ModeSet) -> FockOperator<C> {
    pair_op(modes, true)
}

fn pair_op<C: Coeff>(modes: &ModeSet, create: bool) -> FockOperator<C> {
    let n = modes.m();
    let half = C::from_ratio(1, 2);
    let mut terms = Vec::new();
    for k in 0..modes.k_points {
        for s in 0..modes.spins {
            for r in 0..modes.spins {
                let e: C = modes.eps(s, r);
                if e.is_zero() {
                    continue;
                }
                let w = Word(vec![
                    Ladder { mode: modes.index(k, s), create },
                    Ladder { mode: modes.index(k, r), create },
                ]);
                terms.push((Grass::scalar(e.mul(&half)), w));
            }
        }
    }
    FockOperator { m: n, terms }.simplify()
}

/// `ŝ = â†◇â − Ω/2`.
pub fn s_op<C: Coeff>(modes: &ModeSet) -> FockOperator<C> {
    let n = modes.m();
    let mut terms: Vec<_> = (0..n)
        .map(|i| (Grass::one(), Word(vec![Ladder { mode: i, create: true }, Ladder { mode: i, create: false }])))
        .collect();
    terms.push((Grass::scalar(C::from_ratio(-(modes.omega() as i64), 2)), Word::empty()));
    FockOperator { m: n, terms }.simplify()
}

/// Eigenvalue of `ŝ` on `|n⟩`: occupation minus `Ω/2`.
pub fn s_eigenvalue(n: u32, modes: &ModeSet) -> i32 {
    n.count_ones() as i32 - (modes.omega() / 2) as i32
}

/// The bosonized operators for one spectral function `A`.
pub struct Bosonized<C: Coeff> {
    pub a: FockOperator<C>,
    pub ad: FockOperator<C>,
    pub ae: FockOperator<C>,
    pub aed: FockOperator<C>,
}

impl<C: Coeff> Bosonized<C> {
    pub fn new(a: &ParamFn<C>, modes: &ModeSet) -> Self {
        let astar = a.conj();
        Bosonized {
            a: spectral_lower(&astar, modes),
            ad: spectral_raise(a, modes),
            ae: spectral_eps_lower(a, modes),
            aed: spectral_eps_raise(&astar, modes),
        }
    }
}

const CAR: &str = "car";
const BOGO: &str = "bogoliubov";

pub(crate) fn identity_check<C: Coeff>(
    suite: &str,
    id: impl Into<String>,
    anchor: impl Into<String>,
    lhs: &FockOperator<C>,
    rhs: &FockOperator<C>,
) -> Check {
    let r = action_residual(lhs.m, |s| lhs.apply(s), |s| rhs.apply(s));
    let ok = actions_equal(lhs.m, |s| lhs.apply(s), |s| rhs.apply(s));
    Check::new(suite, id, anchor, ok).with_residual(r)
}

/// `{â_i, â†_j} = δ_ij`, `{â_i, â_j} = {â†_i, â†_j} = 0`.
pub fn verify_car<C: Coeff>(modes: &ModeSet) -> Vec<Check> {
    let n = modes.m();
    let mut out = Vec::new();
    let zero = FockOperator::<C>::zero(n);
    let one = FockOperator::<C>::identity(n);
    for i in 0..n {
        for j in 0..n {
            let (a_i, a_j) = (FockOperator::<C>::a(n, i), FockOperator::<C>::a(n, j));
            let (ad_i, ad_j) = (FockOperator::<C>::adag(n, i), FockOperator::<C>::adag(n, j));
            let d = if i == j { &one } else { &zero };
            out.push(identity_check(CAR, format!("{{a{i},a+{j}}}"), "{a_i, a†_j} = δ_ij", &a_i.anticommutator(&ad_j), d));
            out.push(identity_check(CAR, format!("{{a{i},a{j}}}"), "{a_i, a_j} = 0", &a_i.anticommutator(&a_j), &zero));
            out.push(identity_check(CAR, format!("{{a+{i},a+{j}}}"), "{a†_i, a†_j} = 0", &ad_i.anticommutator(&ad_j), &zero));
        }
    }
    out
}

/// The Bogoliubov anticommutator table, including the daggered mixed pair.
pub fn verify_bogoliubov_table<C: Coeff>(modes: &ModeSet) -> Result<Vec<Check>> {
    let n = modes.m();
    let b = build_bogoliubov::<C>(modes)?;
    let zero = FockOperator::<C>::zero(n);
    let one = FockOperator::<C>::identity(n);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let same_k = modes.k_of(i) == modes.k_of(j);
            let delta = if i == j { &one } else { &zero };
            let ieps = if same_k {
                FockOperator::scalar(n, Grass::scalar(C::i().mul(&modes.eps(modes.s_of(i), modes.s_of(j)))))
            } else {
                zero.clone()
            };
            let rows: [(&str, &FockOperator<C>, &FockOperator<C>, &FockOperator<C>, &str); 9] = [
                ("g,g", &b.g[i], &b.g[j], &zero, "{g_r, g_s} = 0"),
                ("h,h", &b.h[i], &b.h[j], &zero, "{h_r, h_s} = 0"),
                ("g,h", &b.g[i], &b.h[j], &ieps, "{g_r, h_s} = i ε_rs"),
                ("g,g+", &b.g[i], &b.gd[j], delta, "{g_r, g†_s} = δ_rs"),
                ("h,h+", &b.h[i], &b.hd[j], delta, "{h_r, h†_s} = δ_rs"),
                ("g,h+", &b.g[i], &b.hd[j], &zero, "{g_r, h†_s} = 0"),
                ("h,g+", &b.h[i], &b.gd[j], &zero, "{h_r, g†_s} = 0"),
                ("g+,g+", &b.gd[i], &b.gd[j], &zero, "{g†_r, g†_s} = 0"),
                ("g+,h+", &b.gd[i], &b.hd[j], &ieps, "{g†_r, h†_s} = i ε_rs"),
            ];
            for (tag, x, y, rhs, anchor) in rows {
                out.push(identity_check(BOGO, format!("{{{tag}}}[{i},{j}]"), anchor, &x.anticommutator(y), rhs));
            }
        }
        // ĝ† = iεĥ, ĥ† = −iεĝ within the k-point
        let (k, s) = (modes.k_of(i), modes.s_of(i));
        let mut ieh = zero.clone();
        let mut mieg = zero.clone();
        for r in 0..modes.spins {
            let e: C = modes.eps(s, r);
            let j = modes.index(k, r);
            ieh = ieh.add(&b.h[j].scale(&C::i().mul(&e)));
            mieg = mieg.add(&b.g[j].scale(&C::i().mul(&e).neg()));
        }
        out.push(identity_check(BOGO, format!("g+=ieh[{i}]"), "g†_s = i ε_sr h_r", &b.gd[i], &ieh));
        out.push(identity_check(BOGO, format!("h+=-ieg[{i}]"), "h†_s = −i ε_sr g_r", &b.hd[i], &mieg));
    }
    Ok(out)
}

/// `ĝ‡ = ĝ`, `ĥ‡ = ĥ`, and `‡‡` on the ladder operators.
pub fn verify_adjoint<C: Coeff>(modes: &ModeSet) -> Result<Vec<Check>> {
    let n = modes.m();
    let b = build_bogoliubov::<C>(modes)?;
    let mut out = Vec::new();
    for i in 0..n {
        out.push(identity_check("adjoint", format!("g‡[{i}]"), "g‡ = g", &fermionic_adjoint(&b.g[i], modes), &b.g[i]));
        out.push(identity_check("adjoint", format!("h‡[{i}]"), "h‡ = h", &fermionic_adjoint(&b.h[i], modes), &b.h[i]));
        let a = FockOperator::<C>::a(n, i);
        let aa = fermionic_adjoint(&fermionic_adjoint(&a, modes), modes);
        out.push(identity_check("adjoint", format!("a‡‡[{i}]"), "a‡‡ = a", &aa, &a));
    }
    Ok(out)
}

/// `{m̂, m̂} = 1` for the Majorana operator, in contrast to `{ĝ, ĝ} = 0`.
pub fn verify_majorana_contrast<C: Coeff>(modes: &ModeSet) -> Result<Vec<Check>> {
    let n = modes.m();
    let m = majorana::<C>(n, 0)?;
    Ok(vec![identity_check(
        BOGO,
        "{m,m}",
        "{m, m} = 1",
        &m.anticommutator(&m),
        &FockOperator::identity(n),
    )])
}

const COMM: &str = "commutators";

/// The fifteen commutators of the bosonized algebra, for spectral functions
/// `A`, `B` in generic position.
pub fn verify_commutator_table<C: Coeff>(
    modes: &ModeSet,
    a: &ParamFn<C>,
    b: &ParamFn<C>,
    tag: &str,
) -> Result<Vec<Check>> {
    modes.require_unit_weights()?;
    let n = modes.m();
    let (ba, bb) = (Bosonized::new(a, modes), Bosonized::new(b, modes));
    let (r, rd, s) = (r_lower::<C>(modes), r_raise::<C>(modes), s_op::<C>(modes));
    let (astar, bstar) = (a.conj(), b.conj());
    let sc = |g: Grass<C>| FockOperator::scalar(n, g);
    let two = C::from_int(2);
    let rows: Vec<(&str, FockOperator<C>, FockOperator<C>)> = vec![
        ("[A,B+] = A*◇B", ba.a.commutator(&bb.ad), sc(diamond(&astar, b, modes))),
        ("[Aε,B+] = A f◇ B", ba.ae.commutator(&bb.ad), sc(fdiamond(a, b, modes))),
        ("[A,Bε+] = A* f◇ B*", ba.a.commutator(&bb.aed), sc(fdiamond(&astar, &bstar, modes))),
        ("[Aε,Bε+] = −B*◇A", ba.ae.commutator(&bb.aed), sc(diamond(&bstar, a, modes).neg())),
        ("[A,R+] = Aε+", ba.a.commutator(&rd), ba.aed.clone()),
        ("[R,Aε+] = −A", r.commutator(&ba.aed), ba.a.neg()),
        ("[R,A+] = Aε", r.commutator(&ba.ad), ba.ae.clone()),
        ("[Aε,R+] = −A+", ba.ae.commutator(&rd), ba.ad.neg()),
        ("[R,R+] = −s", r.commutator(&rd), s.neg()),
        ("[A,s] = A", ba.a.commutator(&s), ba.a.clone()),
        ("[Aε,s] = Aε", ba.ae.commutator(&s), ba.ae.clone()),
        ("[R,s] = 2R", r.commutator(&s), r.scale(&two)),
        ("[s,A+] = A+", s.commutator(&ba.ad), ba.ad.clone()),
        ("[s,Aε+] = Aε+", s.commutator(&ba.aed), ba.aed.clone()),
        ("[s,R+] = 2R+", s.commutator(&rd), rd.scale(&two)),
        ("[A,B] = 0", ba.a.commutator(&bb.a), FockOperator::zero(n)),
        ("[A+,B+] = 0", ba.ad.commutator(&bb.ad), FockOperator::zero(n)),
    ];
    Ok(rows
        .into_iter()
        .map(|(anchor, lhs, rhs)| identity_check(COMM, format!("{anchor} #{tag}"), anchor.to_string(), &lhs, &rhs))
        .collect())
}

/// `exp(X)|ψ⟩` as an action.
pub fn exp_action<C: Coeff>(x: &FockOperator<C>, psi: &FockState<C>) -> FockState<C> {
    x.exp_apply(psi).expect("bosonized exponentials terminate at finite M")
}

const EXPC: &str = "exp-conjugation";

/// `exp(cX) Y exp(−cX) = Z` for the spectral and `R̂` identities, on all
/// basis kets.
pub fn verify_exp_conjugations<C: Coeff>(
    modes: &ModeSet,
    a: &ParamFn<C>,
    b: &ParamFn<C>,
    c: &C,
    tag: &str,
) -> Result<Vec<Check>> {
    modes.require_unit_weights()?;
    let n = modes.m();
    let (ba, bb) = (Bosonized::new(a, modes), Bosonized::new(b, modes));
    let (r, rd, s) = (r_lower::<C>(modes), r_raise::<C>(modes), s_op::<C>(modes));
    let (astar, bstar) = (a.conj(), b.conj());
    let sc = |g: Grass<C>| FockOperator::scalar(n, g);
    let c2h = c.mul(c).mul(&C::from_ratio(1, 2));
    let rows: Vec<(&str, &FockOperator<C>, &FockOperator<C>, FockOperator<C>)> = vec![
        ("e^{cA} B+ e^{-cA} = B+ + c A*◇B", &ba.a, &bb.ad, bb.ad.add(&sc(diamond(&astar, b, modes).scale(c)))),
        ("e^{cAε} B+ e^{-cAε} = B+ + c A f◇ B", &ba.ae, &bb.ad, bb.ad.add(&sc(fdiamond(a, b, modes).scale(c)))),
        ("e^{cA} Bε+ e^{-cA} = Bε+ + c A* f◇ B*", &ba.a, &bb.aed, bb.aed.add(&sc(fdiamond(&astar, &bstar, modes).scale(c)))),
        ("e^{cAε} Bε+ e^{-cAε} = Bε+ − c B*◇A", &ba.ae, &bb.aed, bb.aed.sub(&sc(diamond(&bstar, a, modes).scale(c)))),
        ("e^{cR} A+ e^{-cR} = A+ + c Aε", &r, &ba.ad, ba.ad.add(&ba.ae.scale(c))),
        ("e^{cR} Aε+ e^{-cR} = Aε+ − c A", &r, &ba.aed, ba.aed.sub(&ba.a.scale(c))),
        (
            "e^{cA} R+ e^{-cA} = R+ + c Aε+ + ½c² A* f◇ A*",
            &ba.a,
            &rd,
            rd.add(&ba.aed.scale(c)).add(&sc(fdiamond(&astar, &astar, modes).scale(&c2h))),
        ),
        (
            "e^{cAε} R+ e^{-cAε} = R+ − c A+ − ½c² A f◇ A",
            &ba.ae,
            &rd,
            rd.sub(&ba.ad.scale(c)).sub(&sc(fdiamond(a, a, modes).scale(&c2h))),
        ),
        ("e^{cR} R+ e^{-cR} = R+ − c s − c² R", &r, &rd, rd.sub(&s.scale(c)).sub(&r.scale(&c.mul(c)))),
        ("e^{cA} s e^{-cA} = s + c A", &ba.a, &s, s.add(&ba.a.scale(c))),
        ("e^{cAε} s e^{-cAε} = s + c Aε", &ba.ae, &s, s.add(&ba.ae.scale(c))),
        ("e^{cR} s e^{-cR} = s + 2c R", &r, &s, s.add(&r.scale(&c.mul(&C::from_int(2))))),
    ];
    let mut out = Vec::new();
    for (anchor, x, y, rhs) in rows {
        let cx = x.scale(c);
        let mcx = x.scale(&c.neg());
        let lhs = |psi: &FockState<C>| exp_action(&cx, &y.apply(&exp_action(&mcx, psi)));
        let rhs_f = |psi: &FockState<C>| rhs.apply(psi);
        let res = action_residual(n, lhs, rhs_f);
        let ok = actions_equal(n, lhs, rhs_f);
        out.push(Check::new(EXPC, format!("{anchor} #{tag}"), anchor, ok && res == 0.0).with_residual(res));
    }
    Ok(out)
}

/// The three `exp(cŝ)` conjugations with `e^c` as a formal unit `u`: the
/// ring's formal variable stands for `u`, and `exp(cŝ)` acts on `|n⟩` as
/// `u^{N−Ω/2}`.
pub fn verify_s_exponentials<C: Coeff>(
    modes: &ModeSet,
    a: &ParamFn<crate::ring::Laurent<C>>,
    tag: &str,
) -> Result<Vec<Check>> {
    use crate::ring::Laurent;
    type L<C> = Laurent<C>;
    modes.require_unit_weights()?;
    let n = modes.m();
    let ba = Bosonized::new(a, modes);
    let rd = r_raise::<L<C>>(modes);
    let u = L::<C>::var();
    let expcs = |psi: &FockState<L<C>>, sign: i32| {
        psi.diag(|occ| L::<C>::var_pow(sign * s_eigenvalue(occ, modes)))
    };
    let rows: Vec<(&str, &FockOperator<L<C>>, FockOperator<L<C>>)> = vec![
        ("e^{cs} A+ e^{-cs} = e^c A+", &ba.ad, ba.ad.scale(&u)),
        ("e^{cs} Aε+ e^{-cs} = e^c Aε+", &ba.aed, ba.aed.scale(&u)),
        ("e^{cs} R+ e^{-cs} = e^{2c} R+", &rd, rd.scale(&u.mul(&u))),
    ];
    let mut out = Vec::new();
    for (anchor, y, rhs) in rows {
        let lhs = |psi: &FockState<L<C>>| expcs(&y.apply(&expcs(psi, -1)), 1);
        let rhs_f = |psi: &FockState<L<C>>| rhs.apply(psi);
        let res = action_residual(n, lhs, rhs_f);
        let ok = actions_equal(n, lhs, rhs_f);
        out.push(Check::new(EXPC, format!("{anchor} #{tag}"), anchor, ok && res == 0.0).with_residual(res));
    }
    Ok(out)
}

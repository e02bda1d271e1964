//! Coefficient rings.
//!
//! Every algebraic object in the crate is generic over [`Coeff`]. Exact rings
//! ([`Qi`], [`Qs2`], [`Laurent`]) have decidable equality; [`Float`] prunes
//! magnitudes below [`FLOAT_PRUNE`] after each operation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Magnitudes below this are dropped in the floating ring.
pub const FLOAT_PRUNE: f64 = 1e-12;

pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const NAME: &'static str;
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Complex conjugation.
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &BigRational) -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    /// `None` when the ring has no square root of two.
    fn sqrt2() -> Option<Self>;
    /// Largest absolute component, for residual summaries.
    fn magnitude(&self) -> f64;
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self, String>;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()))
    }
    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn pow(&self, e: i32) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
    /// `2^(k/4)`, which needs `sqrt2` when `k` is not a multiple of 4. Only
    /// even `k` is supported.
    fn pow2_quarter(k: i64) -> Option<Self> {
        if k % 2 != 0 {
            return None;
        }
        let half = k / 2;
        let whole = Self::from_int(2).pow((half.div_euclid(2)) as i32)?;
        if half.rem_euclid(2) == 1 {
            Some(whole.mul(&Self::sqrt2()?))
        } else {
            Some(whole)
        }
    }
}

fn rat_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = |_| format!("bad rational `{s}`");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(bad)?;
            let d: BigInt = d.trim().parse().map_err(bad)?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(bad)?)),
    }
}

fn strip_parens(s: &str) -> Result<&str, String> {
    let s = s.trim();
    s.strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("expected `(re,im)`, got `{s}`"))
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Qi {
    pub re: BigRational,
    pub im: BigRational,
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }
    pub fn real(re: BigRational) -> Self {
        Qi { re, im: BigRational::zero() }
    }
}

impl Coeff for Qi {
    const NAME: &'static str = "rational";
    const EXACT: bool = true;

    fn zero() -> Self {
        Qi::real(BigRational::zero())
    }
    fn one() -> Self {
        Qi::real(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Qi::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        Qi::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Qi::real(&self.re * &o.re);
        }
        Qi::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn neg(&self) -> Self {
        Qi::new(-&self.re, -&self.im)
    }
    fn conj(&self) -> Self {
        Qi::new(self.re.clone(), -&self.im)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Qi::new(&self.re / &n, -&self.im / &n))
    }
    fn from_rational(r: &BigRational) -> Self {
        Qi::real(r.clone())
    }
    fn i() -> Self {
        Qi::new(BigRational::zero(), BigRational::one())
    }
    fn sqrt2() -> Option<Self> {
        None
    }
    fn magnitude(&self) -> f64 {
        let a = self.re.abs().to_f64().unwrap_or(f64::INFINITY);
        let b = self.im.abs().to_f64().unwrap_or(f64::INFINITY);
        a.max(b)
    }
    fn to_text(&self) -> String {
        format!("({},{})", rat_text(&self.re), rat_text(&self.im))
    }
    fn parse_text(s: &str) -> Result<Self, String> {
        let inner = strip_parens(s)?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| format!("expected `(re,im)`, got `{s}`"))?;
        Ok(Qi::new(parse_rat(a)?, parse_rat(b)?))
    }
}

/// `a + b·√2` with Gaussian-rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Qs2 {
    pub a: Qi,
    pub b: Qi,
}

impl Qs2 {
    pub fn new(a: Qi, b: Qi) -> Self {
        Qs2 { a, b }
    }
}

impl Coeff for Qs2 {
    const NAME: &'static str = "rational-sqrt2";
    const EXACT: bool = true;

    fn zero() -> Self {
        Qs2::new(Qi::zero(), Qi::zero())
    }
    fn one() -> Self {
        Qs2::new(Qi::one(), Qi::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Qs2::new(self.a.add(&o.a), self.b.add(&o.b))
    }
    fn sub(&self, o: &Self) -> Self {
        Qs2::new(self.a.sub(&o.a), self.b.sub(&o.b))
    }
    fn mul(&self, o: &Self) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return Qs2::new(self.a.mul(&o.a), Qi::zero());
        }
        let two = Qi::from_int(2);
        Qs2::new(
            self.a.mul(&o.a).add(&two.mul(&self.b.mul(&o.b))),
            self.a.mul(&o.b).add(&self.b.mul(&o.a)),
        )
    }
    fn neg(&self) -> Self {
        Qs2::new(self.a.neg(), self.b.neg())
    }
    fn conj(&self) -> Self {
        Qs2::new(self.a.conj(), self.b.conj())
    }
    fn inv(&self) -> Option<Self> {
        // (a + b√2)(a − b√2) = a² − 2b²
        let n = self.a.mul(&self.a).sub(&Qi::from_int(2).mul(&self.b.mul(&self.b)));
        let ni = n.inv()?;
        Some(Qs2::new(self.a.mul(&ni), self.b.neg().mul(&ni)))
    }
    fn from_rational(r: &BigRational) -> Self {
        Qs2::new(Qi::real(r.clone()), Qi::zero())
    }
    fn i() -> Self {
        Qs2::new(Qi::i(), Qi::zero())
    }
    fn sqrt2() -> Option<Self> {
        Some(Qs2::new(Qi::zero(), Qi::one()))
    }
    fn magnitude(&self) -> f64 {
        self.a.magnitude() + std::f64::consts::SQRT_2 * self.b.magnitude()
    }
    fn to_text(&self) -> String {
        if self.b.is_zero() {
            self.a.to_text()
        } else {
            format!("{}+{}r2", self.a.to_text(), self.b.to_text())
        }
    }
    fn parse_text(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.split_once(")+(") {
            Some((a, rest)) => {
                let b = rest
                    .strip_suffix(")r2")
                    .ok_or_else(|| format!("expected `(..)+(..)r2`, got `{s}`"))?;
                Ok(Qs2::new(
                    Qi::parse_text(&format!("{a})"))?,
                    Qi::parse_text(&format!("({b})"))?,
                ))
            }
            None => Ok(Qs2::new(Qi::parse_text(s)?, Qi::zero())),
        }
    }
}

/// Laurent polynomial `Σ c_k x^k` in one formal variable over an exact ring.
///
/// Used both for the regulator `ε` and for the formal exponential unit
/// `u = e^c`, where `u(c₁)·u(c₂) = u(c₁+c₂)` is just `x^a·x^b = x^(a+b)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Laurent<C: Coeff> {
    pub terms: BTreeMap<i32, C>,
}

impl<C: Coeff> Laurent<C> {
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        Laurent { terms }
    }
    /// The formal variable raised to `k`.
    pub fn var_pow(k: i32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, C::one());
        Laurent { terms }
    }
    pub fn var() -> Self {
        Self::var_pow(1)
    }
    pub fn coeff(&self, k: i32) -> C {
        self.terms.get(&k).cloned().unwrap_or_else(C::zero)
    }
    pub fn min_order(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }
    pub fn max_order(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }
    pub fn scale(&self, c: &C) -> Self {
        let mut out = BTreeMap::new();
        for (k, v) in &self.terms {
            let p = v.mul(c);
            if !p.is_zero() {
                out.insert(*k, p);
            }
        }
        Laurent { terms: out }
    }
    fn insert_add(map: &mut BTreeMap<i32, C>, k: i32, c: C) {
        match map.get_mut(&k) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    map.remove(&k);
                }
            }
            None => {
                if !c.is_zero() {
                    map.insert(k, c);
                }
            }
        }
    }
}

impl<C: Coeff> Coeff for Laurent<C> {
    const NAME: &'static str = "laurent-eps";
    const EXACT: bool = C::EXACT;

    fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.terms.clone();
        for (k, v) in &o.terms {
            Self::insert_add(&mut out, *k, v.clone());
        }
        Laurent { terms: out }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                Self::insert_add(&mut out, i + j, a.mul(b));
            }
        }
        Laurent { terms: out }
    }
    fn neg(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect() }
    }
    fn conj(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect() }
    }
    /// Only monomials are invertible.
    fn inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, v) = self.terms.iter().next()?;
        let mut terms = BTreeMap::new();
        terms.insert(-k, v.inv()?);
        Some(Laurent { terms })
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::constant(C::from_rational(r))
    }
    fn i() -> Self {
        Self::constant(C::i())
    }
    fn sqrt2() -> Option<Self> {
        C::sqrt2().map(Self::constant)
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(|v| v.magnitude()).fold(0.0, f64::max)
    }
    fn to_text(&self) -> String {
        let parts: Vec<String> =
            self.terms.iter().map(|(k, v)| format!("{k}:{}", v.to_text())).collect();
        format!("{{{}}}", parts.join(";"))
    }
    fn parse_text(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| format!("expected `{{k:c;...}}`, got `{s}`"))?;
        let mut out = Self::zero();
        for part in inner.split(';').filter(|p| !p.trim().is_empty()) {
            let (k, c) = part
                .split_once(':')
                .ok_or_else(|| format!("expected `k:c`, got `{part}`"))?;
            let k: i32 = k.trim().parse().map_err(|_| format!("bad order `{k}`"))?;
            out = out.add(&Self::var_pow(k).scale(&C::parse_text(c)?));
        }
        Ok(out)
    }
}

/// Complex floating coefficients, pruned below [`FLOAT_PRUNE`].
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Float(pub Complex64);

impl Float {
    fn pruned(z: Complex64) -> Self {
        if z.norm() < FLOAT_PRUNE {
            Float(Complex64::new(0.0, 0.0))
        } else {
            Float(z)
        }
    }
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        (self.0 - o.0).norm() <= tol
    }
}

impl Coeff for Float {
    const NAME: &'static str = "float";
    const EXACT: bool = false;

    fn zero() -> Self {
        Float(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Float(Complex64::new(1.0, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.norm() < FLOAT_PRUNE
    }
    fn add(&self, o: &Self) -> Self {
        Float::pruned(self.0 + o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::pruned(self.0 - o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::pruned(self.0 * o.0)
    }
    fn neg(&self) -> Self {
        Float(-self.0)
    }
    fn conj(&self) -> Self {
        Float(self.0.conj())
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Float(self.0.inv()))
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        Float::pruned(Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0))
    }
    fn i() -> Self {
        Float(Complex64::new(0.0, 1.0))
    }
    fn sqrt2() -> Option<Self> {
        Some(Float(Complex64::new(std::f64::consts::SQRT_2, 0.0)))
    }
    fn magnitude(&self) -> f64 {
        self.0.norm()
    }
    fn to_text(&self) -> String {
        format!("({:e},{:e})", self.0.re, self.0.im)
    }
    fn parse_text(s: &str) -> Result<Self, String> {
        let inner = strip_parens(s)?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| format!("expected `(re,im)`, got `{s}`"))?;
        let re: f64 = a.trim().parse().map_err(|_| format!("bad float `{a}`"))?;
        let im: f64 = b.trim().parse().map_err(|_| format!("bad float `{b}`"))?;
        Ok(Float::pruned(Complex64::new(re, im)))
    }
}

/// Parse `p/q`, `p` or a decimal like `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().map_err(|_| format!("bad decimal `{s}`"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    parse_rat(s)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = Qs2::sqrt2().unwrap();
        assert_eq!(s.mul(&s), Qs2::from_int(2));
        assert_eq!(s.inv().unwrap().mul(&s), Qs2::one());
    }

    #[test]
    fn quarter_powers() {
        assert_eq!(Qs2::pow2_quarter(2), Qs2::sqrt2());
        assert_eq!(Qs2::pow2_quarter(4), Some(Qs2::from_int(2)));
        assert_eq!(
            Qs2::pow2_quarter(-2).unwrap(),
            Qs2::sqrt2().unwrap().inv().unwrap()
        );
        assert_eq!(Qi::pow2_quarter(2), None);
    }

    #[test]
    fn laurent_monomial_inverse() {
        let e = Laurent::<Qi>::var();
        let x = e.scale(&Qi::from_int(3));
        assert_eq!(x.mul(&x.inv().unwrap()), Laurent::one());
        assert!(e.add(&Laurent::one()).inv().is_none());
    }

    #[test]
    fn text_roundtrip() {
        let q = Qs2::new(Qi::new(rat(-1, 2), rat(3, 1)), Qi::new(rat(0, 1), rat(5, 7)));
        assert_eq!(Qs2::parse_text(&q.to_text()).unwrap(), q);
        let l = Laurent::<Qs2>::var_pow(-2).scale(&q).add(&Laurent::one());
        assert_eq!(Laurent::<Qs2>::parse_text(&l.to_text()).unwrap(), l);
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
    }
}

//! Finite Grassmann algebra over a pluggable coefficient ring.
//!
//! Monomials are `u64` bitsets over generator ids; a canonical monomial lists
//! its generators in increasing id order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::modes::ModeSet;
use crate::ring::Coeff;

pub const MAX_GENERATORS: usize = 64;
const EXP_CAP: usize = MAX_GENERATORS + 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenClass {
    FockParameter,
    PhaseQ,
    PhaseP,
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: usize,
    pub label: String,
    pub class: GenClass,
}

/// Append-only generator registry. Each computation owns one; registration
/// is guarded so independent workers can allocate from a shared registry.
#[derive(Debug, Default)]
pub struct Registry {
    gens: Mutex<Vec<Generator>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&self, label: impl Into<String>, class: GenClass) -> Result<usize> {
        let mut g = self.gens.lock().expect("registry poisoned");
        let id = g.len();
        if id >= MAX_GENERATORS {
            return Err(Error::RegistryFull(MAX_GENERATORS));
        }
        g.push(Generator { id, label: label.into(), class });
        Ok(id)
    }

    /// `n` fresh generators labelled `name[0]`, `name[1]`, ...
    pub fn fresh_vec(&self, name: &str, n: usize, class: GenClass) -> Result<Vec<usize>> {
        (0..n).map(|i| self.fresh(format!("{name}[{i}]"), class)).collect()
    }

    pub fn len(&self) -> usize {
        self.gens.lock().expect("registry poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: usize) -> Option<Generator> {
        self.gens.lock().expect("registry poisoned").get(id).cloned()
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        let g = self.gens.lock().expect("registry poisoned");
        g.iter().find(|x| x.label == label).map(|x| x.id)
    }

    pub fn labels(&self) -> Vec<String> {
        let g = self.gens.lock().expect("registry poisoned");
        g.iter().map(|x| x.label.clone()).collect()
    }
}

#[inline]
fn bit(id: usize) -> u64 {
    1u64 << id
}

/// Sign of `m_a · m_b` for disjoint monomials: parity of the number of pairs
/// `(i ∈ a, j ∈ b)` with `i > j`.
#[inline]
pub fn merge_sign(a: u64, b: u64) -> bool {
    let mut rest = b;
    let mut n = 0u32;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        n += (a >> j >> 1).count_ones();
    }
    n & 1 == 1
}

#[inline]
pub fn grade(m: u64) -> u32 {
    m.count_ones()
}

/// A sparse multivector; no stored zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Grass<C: Coeff> {
    terms: BTreeMap<u64, C>,
}

impl<C: Coeff> fmt::Debug for Grass<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(None))
    }
}

impl<C: Coeff> Default for Grass<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Grass<C> {
    pub fn zero() -> Self {
        Grass { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(c: C) -> Self {
        Self::term(0, c)
    }

    pub fn term(m: u64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Grass { terms }
    }

    pub fn gen(id: usize) -> Self {
        Self::term(bit(id), C::one())
    }

    /// Product of the listed generators in the given order.
    pub fn monomial(ids: &[usize]) -> Self {
        ids.iter().fold(Self::one(), |acc, &i| acc.mul(&Self::gen(i)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: u64) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn scalar_part(&self) -> C {
        self.coeff(0)
    }

    /// Union of all generators that occur.
    pub fn support(&self) -> u64 {
        self.terms.keys().fold(0, |a, m| a | m)
    }

    fn add_term(map: &mut BTreeMap<u64, C>, m: u64, c: C) {
        if c.is_zero() {
            return;
        }
        match map.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    map.remove(&m);
                }
            }
            None => {
                map.insert(m, c);
            }
        }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (u64, C)>) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in it {
            Self::add_term(&mut terms, m, c);
        }
        Grass { terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            Self::add_term(&mut terms, *m, c.clone());
        }
        Grass { terms }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            Self::add_term(&mut self.terms, *m, c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Grass { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, v)| (*m, v.mul(c))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut acc: HashMap<u64, C> = HashMap::with_capacity(self.len() * o.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                let mut c = ca.mul(cb);
                if merge_sign(*ma, *mb) {
                    c = c.neg();
                }
                match acc.get_mut(&(ma | mb)) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(ma | mb, c);
                    }
                }
            }
        }
        Grass { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Even and odd parts.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = BTreeMap::new();
        let mut odd = BTreeMap::new();
        for (m, c) in &self.terms {
            if grade(*m).is_multiple_of(2) {
                even.insert(*m, c.clone());
            } else {
                odd.insert(*m, c.clone());
            }
        }
        (Grass { terms: even }, Grass { terms: odd })
    }

    /// `Some(parity)` when homogeneous; zero is even.
    pub fn parity(&self) -> Option<u32> {
        let mut p = None;
        for m in self.terms.keys() {
            let g = grade(*m) % 2;
            match p {
                None => p = Some(g),
                Some(q) if q != g => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Some(0)
    }

    pub fn is_odd(&self) -> bool {
        !self.is_zero() && self.parity() == Some(1)
    }

    /// Grading automorphism: negates odd terms.
    pub fn sigma(&self) -> Self {
        Grass {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if grade(*m) % 2 == 1 { c.neg() } else { c.clone() }))
                .collect(),
        }
    }

    /// `sigma` applied `n` times.
    pub fn sigma_pow(&self, n: u32) -> Self {
        if n.is_multiple_of(2) {
            self.clone()
        } else {
            self.sigma()
        }
    }

    /// Terminating power series. The argument must have no scalar part.
    pub fn exp(&self) -> Result<Self> {
        if !self.scalar_part().is_zero() {
            return Err(Error::ScalarPart);
        }
        let mut sum = Self::one();
        let mut term = Self::one();
        for n in 1..=EXP_CAP {
            term = term.mul(self).scale(&C::from_ratio(1, n as i64));
            if term.is_zero() {
                return Ok(sum);
            }
            sum.add_assign(&term);
        }
        Err(Error::NonTerminating(EXP_CAP))
    }

    /// Coefficients conjugated, generator order reversed.
    pub fn conjugate(&self) -> Self {
        Grass {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let g = grade(*m);
                    let c = c.conj();
                    (*m, if (g * g.saturating_sub(1) / 2) % 2 == 1 { c.neg() } else { c })
                })
                .collect(),
        }
    }

    /// `∫ a dθ` for a single generator: move `θ` to the front, then strip it.
    pub fn integrate_one(&self, v: usize) -> Self {
        let b = bit(v);
        let below = b - 1;
        Grass {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| *m & b != 0)
                .map(|(m, c)| {
                    let c = if (m & below).count_ones() % 2 == 1 { c.neg() } else { c.clone() };
                    (m & !b, c)
                })
                .collect(),
        }
    }

    /// `∫ a dv_n … dv_1` for `vars = [v_1, …, v_n]`: the last listed variable
    /// is integrated first.
    pub fn berezin(&self, vars: &[usize]) -> Self {
        vars.iter().rev().fold(self.clone(), |acc, &v| acc.integrate_one(v))
    }

    /// Algebra morphism sending each listed generator to an odd image.
    pub fn substitute(&self, map: &BTreeMap<usize, Grass<C>>) -> Result<Self> {
        for (g, img) in map {
            if !(img.is_zero() || img.is_odd()) {
                return Err(Error::Parity(format!("image of generator {g} is not odd")));
            }
        }
        let mut out = Self::zero();
        let mut cache: HashMap<u64, Self> = HashMap::new();
        for (m, c) in &self.terms {
            let img = cache
                .entry(*m)
                .or_insert_with(|| {
                    let mut acc = Self::one();
                    let mut rest = *m;
                    while rest != 0 && !acc.is_zero() {
                        let j = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        let f = map.get(&j).cloned().unwrap_or_else(|| Self::gen(j));
                        acc = acc.mul(&f);
                    }
                    acc
                })
                .clone();
            out.add_assign(&img.scale(c));
        }
        Ok(out)
    }

    /// Keeps only terms whose monomial avoids `mask`.
    pub fn drop_containing(&self, mask: u64) -> Self {
        Grass {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| *m & mask == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Grass<D> {
        Grass::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Canonical text: `coeff * g_i g_j + ...`; `0` for the zero element.
    /// Generators are named by registry labels when a registry is supplied,
    /// otherwise `#id`.
    pub fn to_text(&self, reg: Option<&Registry>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let labels = reg.map(|r| r.labels());
        let name = |i: usize| match &labels {
            Some(l) if i < l.len() => l[i].clone(),
            _ => format!("#{i}"),
        };
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = c.to_text();
            let mut rest = *m;
            if rest != 0 {
                s.push_str(" *");
            }
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                s.push(' ');
                s.push_str(&name(j));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Per-mode Grassmann-odd components, e.g. `g_s(k)` or `A*_s(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamFn<C: Coeff> {
    pub components: Vec<Grass<C>>,
    pub conjugated: bool,
}

/// Contraction kind for [`contract`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contraction {
    /// `A◇B = Σ w A_i B_i`
    Plain,
    /// `A f◇ B = Σ w A_s ε_sr B_r`
    Epsilon,
}

impl<C: Coeff> ParamFn<C> {
    /// Every component must be odd (zero components are allowed).
    pub fn new(components: Vec<Grass<C>>) -> Result<Self> {
        for (i, c) in components.iter().enumerate() {
            if !(c.is_zero() || c.is_odd()) {
                return Err(Error::Parity(format!("component {i} is not odd")));
            }
        }
        Ok(ParamFn { components, conjugated: false })
    }

    pub fn zero(m: usize) -> Self {
        ParamFn { components: vec![Grass::zero(); m], conjugated: false }
    }

    /// One fresh generator per mode.
    pub fn fresh(reg: &Registry, name: &str, modes: &ModeSet, class: GenClass) -> Result<Self> {
        let ids = (0..modes.m())
            .map(|i| reg.fresh(format!("{name}[{}]", modes.label(i)), class))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_generators(&ids))
    }

    pub fn from_generators(ids: &[usize]) -> Self {
        ParamFn { components: ids.iter().map(|&i| Grass::gen(i)).collect(), conjugated: false }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Componentwise conjugate; toggles the star flag.
    pub fn conj(&self) -> Self {
        ParamFn {
            components: self.components.iter().map(|c| c.conjugate()).collect(),
            conjugated: !self.conjugated,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        ParamFn {
            components: self.components.iter().map(|x| x.scale(c)).collect(),
            conjugated: self.conjugated,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().neg())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.len() != o.len() {
            return Err(Error::ModeMismatch(self.len(), o.len()));
        }
        Ok(ParamFn {
            components: self.components.iter().zip(&o.components).map(|(a, b)| a.add(b)).collect(),
            conjugated: self.conjugated,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// `(c·ε·f)_{k,s} = c Σ_r ε_sr f_{k,r}`.
    pub fn eps_left(&self, modes: &ModeSet, c: &C) -> Self {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let (k, s) = (modes.k_of(i), modes.s_of(i));
            let mut acc = Grass::zero();
            for r in 0..modes.spins {
                let e: C = modes.eps(s, r);
                acc.add_assign(&self.components[modes.index(k, r)].scale(&e.mul(c)));
            }
            out.push(acc);
        }
        ParamFn { components: out, conjugated: self.conjugated }
    }

    /// `(c·f·ε)_{k,r} = c Σ_s f_{k,s} ε_sr`.
    pub fn eps_right(&self, modes: &ModeSet, c: &C) -> Self {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let (k, r) = (modes.k_of(i), modes.s_of(i));
            let mut acc = Grass::zero();
            for s in 0..modes.spins {
                let e: C = modes.eps(s, r);
                acc.add_assign(&self.components[modes.index(k, s)].scale(&e.mul(c)));
            }
            out.push(acc);
        }
        ParamFn { components: out, conjugated: self.conjugated }
    }

    /// Substitution applied componentwise.
    pub fn substitute(&self, map: &BTreeMap<usize, Grass<C>>) -> Result<Self> {
        Ok(ParamFn {
            components: self
                .components
                .iter()
                .map(|c| c.substitute(map))
                .collect::<Result<Vec<_>>>()?,
            conjugated: self.conjugated,
        })
    }

    /// Ordered product `f_1 f_2 … f_M` (the Grassmann delta of `f`).
    pub fn top_product(&self) -> Grass<C> {
        self.components.iter().fold(Grass::one(), |acc, c| acc.mul(c))
    }
}

/// `A◇B` or `A f◇ B` with the mode set's weights and spin matrix. Starred
/// operands are passed already conjugated.
pub fn contract<C: Coeff>(
    a: &ParamFn<C>,
    b: &ParamFn<C>,
    kind: Contraction,
    modes: &ModeSet,
) -> Result<Grass<C>> {
    if a.len() != b.len() {
        return Err(Error::ModeMismatch(a.len(), b.len()));
    }
    if a.len() != modes.m() {
        return Err(Error::ModeMismatch(a.len(), modes.m()));
    }
    let mut acc = Grass::zero();
    for i in 0..a.len() {
        let w: C = modes.weight(i);
        match kind {
            Contraction::Plain => {
                acc.add_assign(&a.components[i].mul(&b.components[i]).scale(&w));
            }
            Contraction::Epsilon => {
                let (k, s) = (modes.k_of(i), modes.s_of(i));
                for r in 0..modes.spins {
                    let e: C = modes.eps(s, r);
                    if e.is_zero() {
                        continue;
                    }
                    let j = modes.index(k, r);
                    acc.add_assign(&a.components[i].mul(&b.components[j]).scale(&e.mul(&w)));
                }
            }
        }
    }
    Ok(acc)
}

pub fn diamond<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, modes: &ModeSet) -> Grass<C> {
    contract(a, b, Contraction::Plain, modes).expect("mode counts agree")
}

pub fn fdiamond<C: Coeff>(a: &ParamFn<C>, b: &ParamFn<C>, modes: &ModeSet) -> Grass<C> {
    contract(a, b, Contraction::Epsilon, modes).expect("mode counts agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Qi;

    type G = Grass<Qi>;

    #[test]
    fn anticommute_and_nilpotent() {
        let (a, b) = (G::gen(0), G::gen(1));
        assert_eq!(b.mul(&a), a.mul(&b).neg());
        assert!(a.mul(&a).is_zero());
    }

    #[test]
    fn merge_sign_counts_inversions() {
        // θ0θ2 · θ1 = −θ0θ1θ2
        assert!(merge_sign(0b101, 0b010));
        assert!(merge_sign(0b10, 0b01));
        assert!(!merge_sign(0b01, 0b10));
    }

    #[test]
    fn berezin_basic() {
        let e = G::scalar(Qi::from_int(3)).add(&G::gen(0).scale(&Qi::from_int(5)));
        assert_eq!(e.berezin(&[0]), G::scalar(Qi::from_int(5)));
        assert!(G::one().berezin(&[0]).is_zero());
        // ∫ θ0θ1 dθ1 dθ0 = −1 under the highest-index-first orientation
        assert_eq!(G::monomial(&[0, 1]).berezin(&[0, 1]), G::scalar(Qi::from_int(-1)));
    }
}

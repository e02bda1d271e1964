//! A small expression language for operators and phase-space functionals.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | ' ') factor)*
//! factor := rational | 'i' | 'sqrt2' | 'a'k | 'a+'k | 'q'k | 'p'k | 'n'k | '1' | '(' expr ')'
//! ```
//!
//! As an operator, `q`k / `p`k are the quadrature operators and `n`k is
//! `â†_k â_k`; as a functional, `q`k / `p`k are the phase-space generators and
//! ladder symbols are rejected. Input starting with `op ` is read in the
//! canonical operator form instead.

use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::grassmann::Grass;
use crate::modes::ModeSet;
use crate::ring::Coeff;
use crate::serialize::TextForm;
use crate::wigner::{quadrature_ops, PhaseSpace, PhaseSpaceFunctional};

/// Values the parser can build: both are rings over `C`.
trait Algebra<C: Coeff>: Clone {
    fn one(ctx: &Ctx<C>) -> Self;
    fn scalar(ctx: &Ctx<C>, c: C) -> Self;
    fn symbol(ctx: &Ctx<C>, name: &str, k: usize, pos: usize) -> Result<Self>;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

struct Ctx<C: Coeff> {
    m: usize,
    ops: Option<(Vec<FockOperator<C>>, Vec<FockOperator<C>>)>,
    q: Vec<usize>,
    p: Vec<usize>,
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

impl<C: Coeff> Algebra<C> for FockOperator<C> {
    fn one(ctx: &Ctx<C>) -> Self {
        FockOperator::identity(ctx.m)
    }
    fn scalar(ctx: &Ctx<C>, c: C) -> Self {
        FockOperator::scalar(ctx.m, Grass::scalar(c))
    }
    fn symbol(ctx: &Ctx<C>, name: &str, k: usize, _pos: usize) -> Result<Self> {
        let m = ctx.m;
        let (q, p) = ctx.ops.as_ref().expect("operator context");
        Ok(match name {
            "a" => FockOperator::a(m, k),
            "a+" => FockOperator::adag(m, k),
            "n" => FockOperator::adag(m, k).mul(&FockOperator::a(m, k)),
            "q" => q[k].clone(),
            "p" => p[k].clone(),
            _ => unreachable!("lexer only yields known symbols"),
        })
    }
    fn add(&self, o: &Self) -> Self {
        FockOperator::add(self, o)
    }
    fn neg(&self) -> Self {
        FockOperator::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        FockOperator::mul(self, o)
    }
}

impl<C: Coeff> Algebra<C> for Grass<C> {
    fn one(_: &Ctx<C>) -> Self {
        Grass::one()
    }
    fn scalar(_: &Ctx<C>, c: C) -> Self {
        Grass::scalar(c)
    }
    fn symbol(ctx: &Ctx<C>, name: &str, k: usize, pos: usize) -> Result<Self> {
        match name {
            "q" => Ok(Grass::gen(ctx.q[k])),
            "p" => Ok(Grass::gen(ctx.p[k])),
            _ => Err(perr(pos, format!("`{name}{k}` is an operator symbol; functionals use q and p only"))),
        }
    }
    fn add(&self, o: &Self) -> Self {
        Grass::add(self, o)
    }
    fn neg(&self) -> Self {
        Grass::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Grass::mul(self, o)
    }
}

struct Parser<'a, C: Coeff> {
    src: &'a str,
    pos: usize,
    ctx: &'a Ctx<C>,
}

impl<'a, C: Coeff> Parser<'a, C> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn expr<V: Algebra<C>>(&mut self) -> Result<V> {
        self.skip_ws();
        let mut neg = false;
        if let Some(c @ ('+' | '-')) = self.peek() {
            neg = c == '-';
            self.pos += 1;
        }
        let mut acc = self.term::<V>()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term::<V>()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term::<V>()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<V: Algebra<C>>(&mut self) -> Result<V> {
        self.skip_ws();
        let mut acc = self.factor::<V>()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    self.skip_ws();
                    acc = acc.mul(&self.factor::<V>()?);
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => acc = acc.mul(&self.factor::<V>()?),
                _ => return Ok(acc),
            }
        }
    }

    fn index(&mut self, start: usize) -> Result<usize> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(perr(self.pos, "expected a mode index"));
        }
        self.pos += digits.len();
        let k: usize = digits.parse().map_err(|_| perr(start, "bad mode index"))?;
        if k >= self.ctx.m {
            return Err(perr(start, format!("mode {k} out of range (M = {})", self.ctx.m)));
        }
        Ok(k)
    }

    fn factor<V: Algebra<C>>(&mut self) -> Result<V> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        if rest.starts_with('(') {
            self.pos += 1;
            let v = self.expr::<V>()?;
            self.skip_ws();
            if self.peek() != Some(')') {
                return Err(perr(self.pos, "expected `)`"));
            }
            self.pos += 1;
            return Ok(v);
        }
        if let Some(r) = rest.strip_prefix("sqrt2") {
            self.pos = self.src.len() - r.len();
            let s = C::sqrt2().ok_or(Error::NoSqrt2(C::NAME))?;
            return Ok(V::scalar(self.ctx, s));
        }
        if rest.starts_with(|c: char| c.is_ascii_digit()) {
            let num: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            self.pos += num.len();
            let n: i64 = num.parse().map_err(|_| perr(start, "number too large"))?;
            let mut d = 1i64;
            if self.rest().starts_with('/') {
                self.pos += 1;
                let den: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
                if den.is_empty() {
                    return Err(perr(self.pos, "expected a denominator"));
                }
                self.pos += den.len();
                d = den.parse().map_err(|_| perr(start, "number too large"))?;
                if d == 0 {
                    return Err(perr(start, "zero denominator"));
                }
            }
            return Ok(if n == 1 && d == 1 { V::one(self.ctx) } else { V::scalar(self.ctx, C::from_ratio(n, d)) });
        }
        for (sym, name) in [("a+", "a+"), ("a", "a"), ("q", "q"), ("p", "p"), ("n", "n")] {
            if rest.starts_with(sym) && rest[sym.len()..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += sym.len();
                let k = self.index(start)?;
                if self.ctx.ops.is_none() && !matches!(name, "q" | "p") {
                    return Err(perr(start, format!("`{name}{k}` is an operator symbol; functionals use q and p only")));
                }
                return V::symbol(self.ctx, name, k, start);
            }
        }
        if rest.starts_with('i') && !rest[1..].starts_with(|c: char| c.is_ascii_alphanumeric()) {
            self.pos += 1;
            return Ok(V::scalar(self.ctx, C::i()));
        }
        match self.peek() {
            None => Err(perr(start, "unexpected end of input")),
            Some(c) => Err(perr(start, format!("unexpected `{c}`"))),
        }
    }

    fn finish<V: Algebra<C>>(mut self) -> Result<V> {
        let v = self.expr::<V>()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(perr(self.pos, format!("unexpected `{}`", self.rest())));
        }
        Ok(v)
    }
}

/// Parses an operator over the modes of `modes`.
pub fn parse_operator<C: Coeff>(src: &str, modes: &ModeSet) -> Result<FockOperator<C>> {
    let t = src.trim();
    if t.starts_with("op ") {
        let op = FockOperator::<C>::from_canonical(t)?;
        if op.m != modes.m() {
            return Err(Error::ModeMismatch(op.m, modes.m()));
        }
        return Ok(op);
    }
    let ops = if C::sqrt2().is_some() { quadrature_ops::<C>(modes)? } else { (Vec::new(), Vec::new()) };
    let needs_quadrature = t.contains('q') || t.contains('p');
    if needs_quadrature && ops.0.is_empty() {
        return Err(Error::NoSqrt2(C::NAME));
    }
    let ctx = Ctx { m: modes.m(), ops: Some(ops), q: Vec::new(), p: Vec::new() };
    Parser { src: t, pos: 0, ctx: &ctx }.finish()
}

/// Parses a functional of the phase space's `q`, `p`.
pub fn parse_functional<C: Coeff>(src: &str, ps: &PhaseSpace<C>) -> Result<PhaseSpaceFunctional<C>> {
    let t = src.trim();
    let ctx = Ctx { m: ps.modes.m(), ops: None, q: ps.q.clone(), p: ps.p.clone() };
    let v: Grass<C> = Parser { src: t, pos: 0, ctx: &ctx }.finish()?;
    Ok(ps.functional(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Qs2;

    #[test]
    fn number_operator() {
        let modes = ModeSet::new(1);
        let n = parse_operator::<Qs2>("a+0 a0", &modes).unwrap();
        assert_eq!(n, parse_operator::<Qs2>("n0", &modes).unwrap());
    }

    #[test]
    fn error_position() {
        let modes = ModeSet::new(1);
        match parse_operator::<Qs2>("a0 + b1", &modes) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
    }
}

//! Canonical text forms with lossless roundtrip in the exact rings.
//!
//! * Grassmann element: `c * #i #j + c′ + …`, or `0`.
//! * Operator: `op M | [g] a+0 a1 | [g] …` (empty word for scalars).
//! * Ket / bra: `ket M | 0110 => g | …` with one digit per mode.
//! * Phase-space functional: `W q=#0,#1 p=#2,#3 | g`.
//!
//! Generators are always written by id; labels live in the registry.

use crate::error::{Error, Result};
use crate::fock::{FockBra, FockOperator, FockState, Ladder, Word};
use crate::grassmann::{Grass, MAX_GENERATORS};
use crate::ring::Coeff;
use crate::wigner::PhaseSpaceFunctional;

pub trait TextForm: Sized {
    fn to_canonical(&self) -> String;
    fn from_canonical(s: &str) -> Result<Self>;
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Byte offset of `sub` inside `base` (both from the same allocation).
fn offset(base: &str, sub: &str) -> usize {
    (sub.as_ptr() as usize).saturating_sub(base.as_ptr() as usize)
}

/// Splits on `sep`, yielding `(offset, piece)`.
fn split_at_sep<'a>(s: &'a str, sep: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    s.split(sep).map(move |p| (offset(s, p), p))
}

fn parse_grass_at<C: Coeff>(s: &str, base: usize) -> Result<Grass<C>> {
    let t = s.trim();
    let lead = base + offset(s, t);
    if t == "0" {
        return Ok(Grass::zero());
    }
    if t.is_empty() {
        return Err(perr(lead, "empty Grassmann element"));
    }
    let mut acc = Grass::zero();
    for (off, term) in split_at_sep(t, " + ") {
        let pos = lead + off;
        let (coeff, gens) = match term.split_once(" *") {
            Some((c, g)) => (c, g),
            None => (term, ""),
        };
        let c = C::parse_text(coeff.trim()).map_err(|m| perr(pos, m))?;
        let mut mono = Grass::one();
        for g in gens.split_whitespace() {
            let gpos = pos + offset(term, g);
            let id: usize = g
                .strip_prefix('#')
                .ok_or_else(|| perr(gpos, format!("generator must look like `#id`, got `{g}`")))?
                .parse()
                .map_err(|_| perr(gpos, format!("bad generator id `{g}`")))?;
            if id >= MAX_GENERATORS {
                return Err(perr(gpos, format!("generator id {id} out of range")));
            }
            mono = mono.mul(&Grass::gen(id));
        }
        acc.add_assign(&mono.scale(&c));
    }
    Ok(acc)
}

impl<C: Coeff> TextForm for Grass<C> {
    fn to_canonical(&self) -> String {
        self.to_text(None)
    }

    fn from_canonical(s: &str) -> Result<Self> {
        parse_grass_at(s, 0)
    }
}

fn header<'a>(s: &'a str, tag: &str) -> Result<(usize, &'a str)> {
    let mut parts = s.splitn(2, " | ");
    let head = parts.next().unwrap_or("");
    let rest = parts.next().unwrap_or("");
    let m = head
        .trim()
        .strip_prefix(tag)
        .ok_or_else(|| perr(0, format!("expected `{tag} M`")))?
        .trim()
        .parse::<usize>()
        .map_err(|_| perr(tag.len(), "bad mode count"))?;
    if m > 16 {
        return Err(perr(tag.len(), format!("mode count {m} too large")));
    }
    Ok((m, rest))
}

impl<C: Coeff> TextForm for FockOperator<C> {
    fn to_canonical(&self) -> String {
        let mut s = format!("op {}", self.m);
        for (c, w) in &self.terms {
            s.push_str(&format!(" | [{}] {}", c.to_canonical(), w.to_text()));
        }
        s.trim_end().to_string()
    }

    fn from_canonical(s: &str) -> Result<Self> {
        let (m, rest) = header(s, "op")?;
        let mut terms = Vec::new();
        if !rest.trim().is_empty() {
            for (off, piece) in split_at_sep(rest, " | ") {
                let pos = offset(s, rest) + off;
                let piece = piece.trim();
                let inner = piece.strip_prefix('[').ok_or_else(|| perr(pos, "expected `[coeff] word`"))?;
                let close = inner.rfind(']').ok_or_else(|| perr(pos, "missing `]`"))?;
                let g = parse_grass_at::<C>(&inner[..close], pos + 1)?;
                let mut w = Vec::new();
                for l in inner[close + 1..].split_whitespace() {
                    let lpos = pos + 1 + close + 1 + offset(&inner[close + 1..], l);
                    let (create, num) = match l.strip_prefix("a+") {
                        Some(n) => (true, n),
                        None => (false, l.strip_prefix('a').ok_or_else(|| perr(lpos, format!("bad ladder `{l}`")))?),
                    };
                    let mode: usize = num.parse().map_err(|_| perr(lpos, format!("bad mode in `{l}`")))?;
                    if mode >= m {
                        return Err(perr(lpos, format!("mode {mode} out of range")));
                    }
                    w.push(Ladder { mode, create });
                }
                terms.push((g, Word(w)));
            }
        }
        Ok(FockOperator { m, terms })
    }
}

fn occ_text(n: usize, m: usize) -> String {
    (0..m).map(|i| if n & (1 << i) != 0 { '1' } else { '0' }).collect()
}

fn vector_text<C: Coeff>(tag: &str, m: usize, amps: &[Grass<C>]) -> String {
    let mut s = format!("{tag} {m}");
    for (n, a) in amps.iter().enumerate() {
        if !a.is_zero() {
            s.push_str(&format!(" | {} => {}", occ_text(n, m), a.to_canonical()));
        }
    }
    s
}

fn vector_parse<C: Coeff>(tag: &str, s: &str) -> Result<(usize, Vec<Grass<C>>)> {
    let (m, rest) = header(s, tag)?;
    let mut amps = vec![Grass::zero(); 1 << m];
    if !rest.trim().is_empty() {
        for (off, piece) in split_at_sep(rest, " | ") {
            let pos = offset(s, rest) + off;
            let (occ, g) = piece.split_once(" => ").ok_or_else(|| perr(pos, "expected `occupation => amplitude`"))?;
            let occ = occ.trim();
            if occ.len() != m || !occ.chars().all(|c| c == '0' || c == '1') {
                return Err(perr(pos, format!("occupation `{occ}` must have {m} binary digits")));
            }
            let n = occ.chars().enumerate().fold(0usize, |acc, (i, c)| acc | (((c == '1') as usize) << i));
            amps[n] = parse_grass_at(g, pos + offset(piece, g))?;
        }
    }
    Ok((m, amps))
}

impl<C: Coeff> TextForm for FockState<C> {
    fn to_canonical(&self) -> String {
        vector_text("ket", self.m, &self.amps)
    }

    fn from_canonical(s: &str) -> Result<Self> {
        let (m, amps) = vector_parse("ket", s)?;
        Ok(FockState { m, amps })
    }
}

impl<C: Coeff> TextForm for FockBra<C> {
    fn to_canonical(&self) -> String {
        vector_text("bra", self.m, &self.amps)
    }

    fn from_canonical(s: &str) -> Result<Self> {
        let (m, amps) = vector_parse("bra", s)?;
        Ok(FockBra { m, amps })
    }
}

fn ids_text(ids: &[usize]) -> String {
    ids.iter().map(|i| format!("#{i}")).collect::<Vec<_>>().join(",")
}

fn ids_parse(s: &str, pos: usize) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|g| {
            g.strip_prefix('#')
                .and_then(|x| x.parse().ok())
                .filter(|&x: &usize| x < MAX_GENERATORS)
                .ok_or_else(|| perr(pos, format!("bad generator `{g}`")))
        })
        .collect()
}

impl<C: Coeff> TextForm for PhaseSpaceFunctional<C> {
    fn to_canonical(&self) -> String {
        format!("W q={} p={} | {}", ids_text(&self.q_vars), ids_text(&self.p_vars), self.value.to_canonical())
    }

    fn from_canonical(s: &str) -> Result<Self> {
        let (head, body) = s.split_once(" | ").ok_or_else(|| perr(0, "expected `W q=… p=… | value`"))?;
        let mut words = head.split_whitespace();
        if words.next() != Some("W") {
            return Err(perr(0, "expected leading `W`"));
        }
        let q = words.next().and_then(|w| w.strip_prefix("q=")).ok_or_else(|| perr(2, "expected `q=`"))?;
        let p = words.next().and_then(|w| w.strip_prefix("p=")).ok_or_else(|| perr(2, "expected `p=`"))?;
        Ok(PhaseSpaceFunctional {
            value: parse_grass_at(body, head.len() + 3)?,
            q_vars: ids_parse(q, offset(s, q))?,
            p_vars: ids_parse(p, offset(s, p))?,
        })
    }
}

/// Serde adapter storing a Grassmann element as its canonical text.
pub mod grass_text {
    use super::TextForm;
    use crate::grassmann::Grass;
    use crate::ring::Coeff;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer, C: Coeff>(g: &Grass<C>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&g.to_canonical())
    }

    pub fn deserialize<'de, D: Deserializer<'de>, C: Coeff>(d: D) -> Result<Grass<C>, D::Error> {
        let s = String::deserialize(d)?;
        Grass::from_canonical(&s).map_err(serde::de::Error::custom)
    }
}

//! Finite-mode fermionic Fock space with Grassmann-valued amplitudes.
//!
//! Basis kets are `|n⟩ = (a†_0)^{n_0}···(a†_{M−1})^{n_{M−1}}|vac⟩` with
//! Grassmann amplitudes written to the left. A term `(c, w)` acting on `d|n⟩`
//! gives `(−1)^{p(w)p(d)} c·d·w|n⟩`. Bras `Σ b_n⟨n|` keep their amplitudes on
//! the left and pair with kets as `Σ b_n σ^{|n|}(d_n)`, `σ` the grading
//! automorphism.

use crate::error::{Error, Result};
use crate::grassmann::Grass;
use crate::ring::Coeff;

pub const SERIES_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub mode: usize,
    pub create: bool,
}

/// Ladder factors as written, left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Ladder>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn a(i: usize) -> Self {
        Word(vec![Ladder { mode: i, create: false }])
    }

    pub fn adag(i: usize) -> Self {
        Word(vec![Ladder { mode: i, create: true }])
    }

    pub fn parity(&self) -> u32 {
        (self.0.len() % 2) as u32
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    /// `w|n⟩ = ±|n'⟩`, or `None` when it vanishes. `true` means a minus sign.
    pub fn act(&self, n: u32) -> Option<(bool, u32)> {
        let mut state = n;
        let mut neg = false;
        for l in self.0.iter().rev() {
            let b = 1u32 << l.mode;
            if (state & b != 0) == l.create {
                return None;
            }
            if (state & (b - 1)).count_ones() % 2 == 1 {
                neg = !neg;
            }
            state ^= b;
        }
        Some((neg, state))
    }

    /// Creation word producing `|n⟩` from the vacuum.
    pub fn creating(n: u32, m: usize) -> Word {
        Word((0..m).filter(|i| n & (1 << i) != 0).map(|i| Ladder { mode: i, create: true }).collect())
    }

    pub fn to_text(&self) -> String {
        self.0
            .iter()
            .map(|l| if l.create { format!("a+{}", l.mode) } else { format!("a{}", l.mode) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Ket with one Grassmann amplitude per occupation bitset.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState<C: Coeff> {
    pub m: usize,
    pub amps: Vec<Grass<C>>,
}

/// Bra `Σ b_n⟨n|`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBra<C: Coeff> {
    pub m: usize,
    pub amps: Vec<Grass<C>>,
}

macro_rules! vector_ops {
    ($t:ident) => {
        impl<C: Coeff> $t<C> {
            pub fn zero(m: usize) -> Self {
                $t { m, amps: vec![Grass::zero(); 1 << m] }
            }

            pub fn vac(m: usize) -> Self {
                Self::basis(m, 0, Grass::one())
            }

            pub fn basis(m: usize, n: u32, amp: Grass<C>) -> Self {
                let mut s = Self::zero(m);
                s.amps[n as usize] = amp;
                s
            }

            pub fn dim(&self) -> usize {
                self.amps.len()
            }

            pub fn is_zero(&self) -> bool {
                self.amps.iter().all(|a| a.is_zero())
            }

            pub fn add(&self, o: &Self) -> Self {
                $t { m: self.m, amps: self.amps.iter().zip(&o.amps).map(|(a, b)| a.add(b)).collect() }
            }

            pub fn sub(&self, o: &Self) -> Self {
                $t { m: self.m, amps: self.amps.iter().zip(&o.amps).map(|(a, b)| a.sub(b)).collect() }
            }

            pub fn neg(&self) -> Self {
                $t { m: self.m, amps: self.amps.iter().map(|a| a.neg()).collect() }
            }

            pub fn scale(&self, c: &C) -> Self {
                $t { m: self.m, amps: self.amps.iter().map(|a| a.scale(c)).collect() }
            }

            /// Largest coefficient magnitude over all amplitudes.
            pub fn max_magnitude(&self) -> f64 {
                self.amps.iter().map(|a| a.max_magnitude()).fold(0.0, f64::max)
            }
        }
    };
}

vector_ops!(FockState);
vector_ops!(FockBra);

impl<C: Coeff> FockState<C> {
    /// `g·|ψ⟩` for an even `g`; amplitudes `d ↦ g·d`.
    pub fn mul_left(&self, g: &Grass<C>) -> Self {
        FockState { m: self.m, amps: self.amps.iter().map(|a| g.mul(a)).collect() }
    }

    /// `|ψ⟩λ`: amplitude `d ↦ d·λ`.
    pub fn mul_right(&self, l: &Grass<C>) -> Self {
        FockState { m: self.m, amps: self.amps.iter().map(|a| a.mul(l)).collect() }
    }

    /// `|ψ⟩λ` with `λ` moved past the creation word of each basis ket:
    /// amplitude `d_n ↦ d_n σ^{|n|}(λ)`.
    pub fn mul_right_graded(&self, l: &Grass<C>) -> Self {
        FockState {
            m: self.m,
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(n, a)| a.mul(&l.sigma_pow((n as u32).count_ones())))
                .collect(),
        }
    }

    /// Diagonal action `|n⟩ ↦ f(n)|n⟩` for scalar `f`.
    pub fn diag(&self, f: impl Fn(u32) -> C) -> Self {
        FockState {
            m: self.m,
            amps: self.amps.iter().enumerate().map(|(n, a)| a.scale(&f(n as u32))).collect(),
        }
    }

    /// Hermitian adjoint `(Σ d_n|n⟩)† = Σ σ^{|n|}(d_n*)⟨n|`.
    pub fn dagger(&self) -> FockBra<C> {
        FockBra {
            m: self.m,
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(n, a)| a.conjugate().sigma_pow((n as u32).count_ones()))
                .collect(),
        }
    }

    /// The operator `Σ d_n W_n` with `W_n` the creation word of `|n⟩`.
    pub fn as_creation_operator(&self) -> FockOperator<C> {
        FockOperator {
            m: self.m,
            terms: self
                .amps
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(n, a)| (a.clone(), Word::creating(n as u32, self.m)))
                .collect(),
        }
    }
}

impl<C: Coeff> FockBra<C> {
    /// `λ⟨ψ|`: amplitude `b ↦ λ·b`.
    pub fn mul_left(&self, l: &Grass<C>) -> Self {
        FockBra { m: self.m, amps: self.amps.iter().map(|a| l.mul(a)).collect() }
    }

    pub fn diag(&self, f: impl Fn(u32) -> C) -> Self {
        FockBra {
            m: self.m,
            amps: self.amps.iter().enumerate().map(|(n, a)| a.scale(&f(n as u32))).collect(),
        }
    }

    /// `⟨ψ|φ⟩`.
    pub fn pair(&self, ket: &FockState<C>) -> Grass<C> {
        let mut acc = Grass::zero();
        for (n, (b, d)) in self.amps.iter().zip(&ket.amps).enumerate() {
            if b.is_zero() || d.is_zero() {
                continue;
            }
            acc.add_assign(&b.mul(&d.sigma_pow((n as u32).count_ones())));
        }
        acc
    }
}

/// Sum of `(Grassmann coefficient, ladder word)` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator<C: Coeff> {
    pub m: usize,
    pub terms: Vec<(Grass<C>, Word)>,
}

impl<C: Coeff> FockOperator<C> {
    pub fn zero(m: usize) -> Self {
        FockOperator { m, terms: Vec::new() }
    }

    pub fn identity(m: usize) -> Self {
        Self::scalar(m, Grass::one())
    }

    /// `g·𝟙`.
    pub fn scalar(m: usize, g: Grass<C>) -> Self {
        FockOperator { m, terms: vec![(g, Word::empty())] }
    }

    pub fn a(m: usize, i: usize) -> Self {
        FockOperator { m, terms: vec![(Grass::one(), Word::a(i))] }
    }

    pub fn adag(m: usize, i: usize) -> Self {
        FockOperator { m, terms: vec![(Grass::one(), Word::adag(i))] }
    }

    pub fn term(m: usize, c: Grass<C>, w: Word) -> Self {
        FockOperator { m, terms: vec![(c, w)] }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        FockOperator { m: self.m, terms }.simplify()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        FockOperator {
            m: self.m,
            terms: self.terms.iter().map(|(g, w)| (g.scale(c), w.clone())).collect(),
        }
        .simplify()
    }

    /// `g·O`: coefficients multiplied on the left.
    pub fn mul_left(&self, g: &Grass<C>) -> Self {
        FockOperator {
            m: self.m,
            terms: self.terms.iter().map(|(c, w)| (g.mul(c), w.clone())).collect(),
        }
        .simplify()
    }

    /// Merges terms with identical words and drops zeros.
    pub fn simplify(self) -> Self {
        let mut out: Vec<(Grass<C>, Word)> = Vec::new();
        for (c, w) in self.terms {
            match out.iter_mut().find(|(_, x)| *x == w) {
                Some((acc, _)) => acc.add_assign(&c),
                None => out.push((c, w)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        FockOperator { m: self.m, terms: out }
    }

    /// `A·B`: words concatenated, `c_A c_B` with `c_B` moved past `w_A`.
    pub fn mul(&self, o: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ca, wa) in &self.terms {
            for (cb, wb) in &o.terms {
                terms.push((ca.mul(&cb.sigma_pow(wa.parity())), wa.concat(wb)));
            }
        }
        FockOperator { m: self.m, terms }.simplify()
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn apply(&self, psi: &FockState<C>) -> FockState<C> {
        let mut out = FockState::zero(self.m);
        for (n, d) in psi.amps.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let ds = d.sigma();
            for (c, w) in &self.terms {
                if let Some((neg, n2)) = w.act(n as u32) {
                    let dd = if w.parity() == 1 { &ds } else { d };
                    let mut t = c.mul(dd);
                    if neg {
                        t = t.neg();
                    }
                    out.amps[n2 as usize].add_assign(&t);
                }
            }
        }
        out
    }

    /// `⟨ψ|O`, defined by `(⟨ψ|O)|φ⟩ = ⟨ψ|(O|φ⟩)`.
    pub fn apply_bra(&self, bra: &FockBra<C>) -> FockBra<C> {
        let mut out = FockBra::zero(self.m);
        for n in 0..bra.dim() as u32 {
            for (c, w) in &self.terms {
                if let Some((neg, n2)) = w.act(n) {
                    let b = &bra.amps[n2 as usize];
                    if b.is_zero() {
                        continue;
                    }
                    let mut t = b.mul(&c.sigma_pow(n2.count_ones()));
                    if neg {
                        t = t.neg();
                    }
                    out.amps[n as usize].add_assign(&t);
                }
            }
        }
        out
    }

    /// `Σ Aⁿ|ψ⟩/n!`.
    pub fn exp_apply(&self, psi: &FockState<C>) -> Result<FockState<C>> {
        let mut sum = psi.clone();
        let mut term = psi.clone();
        for n in 1..=SERIES_CAP {
            term = self.apply(&term).scale(&C::from_ratio(1, n as i64));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = sum.add(&term);
        }
        Err(Error::NonTerminating(SERIES_CAP))
    }

    /// `Σ ⟨ψ|Aⁿ/n!`.
    pub fn exp_apply_bra(&self, bra: &FockBra<C>) -> Result<FockBra<C>> {
        let mut sum = bra.clone();
        let mut term = bra.clone();
        for n in 1..=SERIES_CAP {
            term = self.apply_bra(&term).scale(&C::from_ratio(1, n as i64));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = sum.add(&term);
        }
        Err(Error::NonTerminating(SERIES_CAP))
    }

    /// `⟨vac|A|vac⟩`.
    pub fn vac_expect(&self) -> Grass<C> {
        self.apply(&FockState::vac(self.m)).amps[0].clone()
    }

    /// Hermitian adjoint: antilinear, order-reversing, `a ↔ a†`.
    pub fn dagger(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| {
                let rev = Word(
                    w.0.iter().rev().map(|l| Ladder { mode: l.mode, create: !l.create }).collect(),
                );
                (c.conjugate().sigma_pow(w.parity()), rev)
            })
            .collect();
        FockOperator { m: self.m, terms }.simplify()
    }

    /// Sector-wise equality on all coefficient-1 basis kets.
    pub fn action_eq(&self, o: &Self) -> bool {
        actions_equal(self.m, |s| self.apply(s), |s| o.apply(s))
    }

    pub fn is_zero_action(&self) -> bool {
        basis_kets::<C>(self.m).all(|b| self.apply(&b).is_zero())
    }

    pub fn to_text(&self, reg: Option<&crate::grassmann::Registry>) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(c, w)| format!("[{}] {}", c.to_text(reg), w.to_text()).trim_end().to_string())
            .collect::<Vec<_>>()
            .join(" ++ ")
    }
}

/// All coefficient-1 basis kets.
pub fn basis_kets<C: Coeff>(m: usize) -> impl Iterator<Item = FockState<C>> {
    (0..(1u32 << m)).map(move |n| FockState::basis(m, n, Grass::one()))
}

/// Two actions agree on every coefficient-1 basis ket. Even and odd word
/// sectors land in different fermion-parity sectors, so this decides
/// sector-wise equality.
pub fn actions_equal<C: Coeff>(
    m: usize,
    f: impl Fn(&FockState<C>) -> FockState<C>,
    g: impl Fn(&FockState<C>) -> FockState<C>,
) -> bool {
    basis_kets::<C>(m).all(|b| f(&b) == g(&b))
}

/// Largest residual magnitude of `f − g` over the basis.
pub fn action_residual<C: Coeff>(
    m: usize,
    f: impl Fn(&FockState<C>) -> FockState<C>,
    g: impl Fn(&FockState<C>) -> FockState<C>,
) -> f64 {
    basis_kets::<C>(m).map(|b| f(&b).sub(&g(&b)).max_magnitude()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Qi;

    #[test]
    fn creation_order_sign() {
        let m = 2;
        let op = FockOperator::<Qi>::adag(m, 1).mul(&FockOperator::adag(m, 0));
        let out = op.apply(&FockState::vac(m));
        assert_eq!(out.amps[3], Grass::scalar(Qi::from_int(-1)));
    }

    #[test]
    fn koszul_on_odd_amplitude() {
        let m = 2;
        let theta = Grass::<Qi>::gen(0);
        let psi = FockState::basis(m, 0b01, theta.clone());
        let out = FockOperator::a(m, 0).apply(&psi);
        assert_eq!(out.amps[0], theta.neg());
    }
}

//! Mode sets: `K` k-points × `S` spins, k-major indexing `k·S + s`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Coeff, Qi};

#[derive(Clone, Debug, PartialEq)]
pub struct ModeSet {
    pub k_points: usize,
    pub spins: usize,
    /// Per-k measure cell `w_k`.
    pub weights: Vec<BigRational>,
    /// `S×S` spin matrix, row-major.
    pub epsilon: Vec<Vec<Qi>>,
}

/// The Pauli-y matrix `[[0, −i], [i, 0]]`.
pub fn pauli_y() -> Vec<Vec<Qi>> {
    let i = Qi::i();
    vec![vec![Qi::zero(), i.neg()], vec![i, Qi::zero()]]
}

impl ModeSet {
    /// `K` k-points with two spins, Pauli-y `ε` and unit weights.
    pub fn new(k_points: usize) -> Self {
        ModeSet {
            k_points,
            spins: 2,
            weights: vec![BigRational::one(); k_points],
            epsilon: pauli_y(),
        }
    }

    pub fn with_epsilon(k_points: usize, epsilon: Vec<Vec<Qi>>) -> Result<Self> {
        let m = ModeSet {
            k_points,
            spins: epsilon.len(),
            weights: vec![BigRational::one(); k_points],
            epsilon,
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks antisymmetry, `ε* = −ε` and `ε² = 1`.
    pub fn validate(&self) -> Result<()> {
        let s = self.spins;
        if self.epsilon.len() != s || self.epsilon.iter().any(|r| r.len() != s) {
            return Err(Error::InvalidEpsilon(format!("expected a {s}×{s} matrix")));
        }
        if self.weights.len() != self.k_points {
            return Err(Error::Config("one weight per k-point".into()));
        }
        if self.weights.iter().any(|w| *w <= BigRational::zero()) {
            return Err(Error::Config("weights must be positive".into()));
        }
        for a in 0..s {
            for b in 0..s {
                let e = &self.epsilon[a][b];
                if *e != self.epsilon[b][a].neg() {
                    return Err(Error::InvalidEpsilon("not antisymmetric".into()));
                }
                if e.conj() != e.neg() {
                    return Err(Error::InvalidEpsilon("ε* ≠ −ε".into()));
                }
                let mut sq = Qi::zero();
                for c in 0..s {
                    sq = sq.add(&e_mul(&self.epsilon[a][c], &self.epsilon[c][b]));
                }
                let want = if a == b { Qi::one() } else { Qi::zero() };
                if sq != want {
                    return Err(Error::InvalidEpsilon("ε² ≠ 1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.k_points * self.spins
    }

    /// `Ω`, the Grassmann cardinality at this truncation.
    pub fn omega(&self) -> usize {
        self.m()
    }

    pub fn index(&self, k: usize, s: usize) -> usize {
        k * self.spins + s
    }

    pub fn k_of(&self, i: usize) -> usize {
        i / self.spins
    }

    pub fn s_of(&self, i: usize) -> usize {
        i % self.spins
    }

    pub fn unit_weights(&self) -> bool {
        self.weights.iter().all(|w| w.is_one())
    }

    pub fn require_unit_weights(&self) -> Result<()> {
        if self.unit_weights() {
            Ok(())
        } else {
            Err(Error::Weights)
        }
    }

    pub fn eps<C: Coeff>(&self, s: usize, r: usize) -> C {
        from_qi(&self.epsilon[s][r])
    }

    pub fn weight<C: Coeff>(&self, i: usize) -> C {
        C::from_rational(&self.weights[self.k_of(i)])
    }

    /// Human-readable mode label, e.g. `1,↑`.
    pub fn label(&self, i: usize) -> String {
        let s = self.s_of(i);
        let spin = if self.spins == 2 {
            ["↑", "↓"][s].to_string()
        } else {
            s.to_string()
        };
        format!("{},{}", self.k_of(i), spin)
    }
}

fn e_mul(a: &Qi, b: &Qi) -> Qi {
    a.mul(b)
}

pub fn from_qi<C: Coeff>(q: &Qi) -> C {
    C::from_rational(&q.re).add(&C::i().mul(&C::from_rational(&q.im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_y_is_valid() {
        let m = ModeSet::new(2);
        m.validate().unwrap();
        assert_eq!(m.m(), 4);
        assert_eq!(m.eps::<Qi>(0, 1), Qi::i().neg());
    }

    #[test]
    fn three_spins_need_a_matrix() {
        let bad = vec![vec![Qi::zero(); 3]; 3];
        assert!(matches!(
            ModeSet::with_epsilon(1, bad),
            Err(Error::InvalidEpsilon(_))
        ));
    }
}

//! Scenario configs, the suite registry and the parallel runner.

use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bogoliubov::{
    verify_adjoint, verify_bogoliubov_table, verify_car, verify_commutator_table, verify_exp_conjugations,
    verify_majorana_contrast, verify_s_exponentials,
};
use crate::eigenstates::{
    verify_adjoint_relations, verify_eigen_equations, verify_generic_solution, verify_majorana, verify_spin_transforms,
};
use crate::error::{Error, Result};
use crate::grassmann::Registry;
use crate::modes::{pauli_y, ModeSet};
use crate::overlaps::{
    lift, verify_delta_laurent, verify_disentanglement, verify_h_odes, verify_named_overlaps, verify_overlap_forms,
    verify_sifting, verify_vacuum_overlap,
};
use crate::random::{random_param, random_real_param, rng};
use crate::report::{summarize, Check, RunReport, SuiteTiming};
use crate::ring::{Coeff, Float, Qi, Qs2};
use crate::wigner::{verify_completeness, verify_fourier, verify_star, verify_wigner};

/// Environment variable capping the worker count.
pub const WORKERS_ENV: &str = "FERMIWIG_WORKERS";

/// Largest `K·S` accepted.
pub const MAX_MODES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingName {
    Rational,
    RationalSqrt2,
    LaurentEps,
    Float,
}

impl RingName {
    pub fn as_str(self) -> &'static str {
        match self {
            RingName::Rational => "rational",
            RingName::RationalSqrt2 => "rational-sqrt2",
            RingName::LaurentEps => "laurent-eps",
            RingName::Float => "float",
        }
    }
}

impl FromStr for RingName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(RingName::Rational),
            "rational-sqrt2" => Ok(RingName::RationalSqrt2),
            "laurent-eps" => Ok(RingName::LaurentEps),
            "float" => Ok(RingName::Float),
            _ => Err(Error::Config(format!("unknown ring `{s}`"))),
        }
    }
}

/// A registered suite: name, rings it runs in, largest `M` it supports.
pub struct SuiteInfo {
    pub name: &'static str,
    pub rings: &'static [RingName],
    pub max_m: usize,
    pub about: &'static str,
}

use RingName::{Float as F, LaurentEps as L, Rational as R, RationalSqrt2 as S2};

pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo { name: "car", rings: &[R, S2, F], max_m: MAX_MODES, about: "canonical anticommutators" },
    SuiteInfo { name: "bogoliubov", rings: &[S2], max_m: MAX_MODES, about: "ĝ, ĥ anticommutator table and Majorana contrast" },
    SuiteInfo { name: "adjoint", rings: &[S2], max_m: MAX_MODES, about: "fermionic adjoint ĝ‡ = ĝ, ĥ‡ = ĥ" },
    SuiteInfo { name: "commutators", rings: &[R, S2], max_m: 8, about: "fifteen bosonized commutators, random parameters" },
    SuiteInfo { name: "exp-conjugation", rings: &[R, S2], max_m: 6, about: "exponential conjugations for c ∈ {1, 1/2, −2}" },
    SuiteInfo { name: "eigenstates", rings: &[S2], max_m: 6, about: "eigen-equations, generic solutions, adjoints, spin maps" },
    SuiteInfo { name: "majorana", rings: &[S2], max_m: MAX_MODES, about: "Majorana eigenpairs and the multimode obstruction" },
    SuiteInfo { name: "disentanglement", rings: &[R, S2], max_m: 4, about: "normal-ordering identity and vacuum overlap" },
    SuiteInfo { name: "h-odes", rings: &[R, S2, L, F], max_m: MAX_MODES, about: "h-function closed forms vs ODEs and RK4" },
    SuiteInfo { name: "overlaps", rings: &[S2], max_m: 4, about: "analytic vs direct overlaps and the sixteen named overlaps" },
    SuiteInfo { name: "delta", rings: &[L], max_m: 4, about: "Laurent checks at t = 1 − ε′, regularized delta, sifting" },
    SuiteInfo { name: "completeness", rings: &[S2], max_m: 6, about: "identity resolutions and sandwiched inner products" },
    SuiteInfo { name: "wigner", rings: &[S2], max_m: 4, about: "Wigner symbols, Weyl roundtrip, density functionals, trace" },
    SuiteInfo { name: "fourier", rings: &[S2], max_m: 6, about: "double Fourier transform and characteristic functional" },
    SuiteInfo { name: "star", rings: &[S2], max_m: 2, about: "two- and three-fold star products" },
];

pub fn suite_info(name: &str) -> Option<&'static SuiteInfo> {
    SUITES.iter().find(|s| s.name == name)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    pub k_points: usize,
    #[serde(default = "two")]
    pub spins: usize,
    /// Per-k weights as rationals (`"1"`, `"1/2"`); unit weights by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    /// Row-major spin matrix with entries like `(0,-1)`; Pauli-y by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<Vec<String>>>,
}

fn two() -> usize {
    2
}

fn default_samples() -> usize {
    20
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub modes: ModesConfig,
    pub ring: RingName,
    /// Empty means every suite compatible with the ring.
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    /// Random parameter draws for the randomized suites.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            modes: ModesConfig { k_points: 1, spins: 2, weights: None, epsilon: None },
            ring: RingName::RationalSqrt2,
            suites: Vec::new(),
            seed: 0,
            samples: default_samples(),
            output: None,
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn mode_set(&self) -> Result<ModeSet> {
        let mc = &self.modes;
        if mc.k_points == 0 || mc.spins == 0 {
            return Err(Error::Config("k_points and spins must be positive".into()));
        }
        if mc.k_points * mc.spins > MAX_MODES {
            return Err(Error::MemoryGuard(mc.k_points * mc.spins));
        }
        let epsilon = match &mc.epsilon {
            Some(rows) => rows
                .iter()
                .map(|r| r.iter().map(|e| Qi::parse_text(e).map_err(Error::Config)).collect())
                .collect::<Result<Vec<Vec<Qi>>>>()?,
            None if mc.spins == 2 => pauli_y(),
            None => return Err(Error::Config(format!("spins = {} needs an explicit epsilon", mc.spins))),
        };
        let weights = match &mc.weights {
            Some(ws) => ws
                .iter()
                .map(|w| BigRational::from_str(w.trim()).map_err(|e| Error::Config(format!("weight `{w}`: {e}"))))
                .collect::<Result<_>>()?,
            None => vec![BigRational::from_integer(1.into()); mc.k_points],
        };
        let m = ModeSet { k_points: mc.k_points, spins: mc.spins, weights, epsilon };
        if m.epsilon.len() != mc.spins {
            return Err(Error::InvalidEpsilon(format!("expected a {0}×{0} matrix", mc.spins)));
        }
        m.validate()?;
        Ok(m)
    }

    /// The suites to run, validated against the ring and mode count.
    pub fn resolved_suites(&self) -> Result<Vec<&'static SuiteInfo>> {
        let m = self.modes.k_points * self.modes.spins;
        if self.suites.is_empty() {
            return Ok(SUITES.iter().filter(|s| s.rings.contains(&self.ring) && m <= s.max_m).collect());
        }
        self.suites
            .iter()
            .map(|n| {
                let info = suite_info(n).ok_or_else(|| Error::Config(format!("unknown suite `{n}`")))?;
                if !info.rings.contains(&self.ring) {
                    return Err(Error::SuiteRing { suite: n.clone(), ring: self.ring.as_str().into() });
                }
                if m > info.max_m {
                    return Err(Error::Config(format!("suite `{n}` supports at most {} modes", info.max_m)));
                }
                Ok(info)
            })
            .collect()
    }
}

/// Worker count: the environment cap if set, otherwise rayon's default.
pub fn worker_count() -> usize {
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(default)
}

pub fn run_scenario(sc: &Scenario) -> Result<RunReport> {
    let modes = sc.mode_set()?;
    let suites = sc.resolved_suites()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<Result<(Vec<Check>, u64)>> = pool.install(|| {
        suites
            .par_iter()
            .map(|info| {
                let start = Instant::now();
                let checks = run_suite(info.name, sc.ring, &modes, suite_seed(sc.seed, info.name), sc.samples)?;
                Ok((checks, start.elapsed().as_millis() as u64))
            })
            .collect()
    });
    let mut checks = Vec::new();
    let mut timings = Vec::new();
    for (info, r) in suites.iter().zip(results) {
        let (c, ms) = r?;
        checks.extend(c);
        timings.push(SuiteTiming { suite: info.name.into(), wall_ms: ms });
    }
    Ok(RunReport {
        engine: "fermiwig".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        ring: sc.ring.as_str().into(),
        modes: (modes.k_points, modes.spins),
        seed: sc.seed,
        summary: summarize(&checks),
        checks,
        timings,
    })
}

/// Per-suite seed, independent of which other suites run.
fn suite_seed(seed: u64, name: &str) -> u64 {
    name.bytes().fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

pub fn run_suite(name: &str, ring: RingName, modes: &ModeSet, seed: u64, samples: usize) -> Result<Vec<Check>> {
    match ring {
        RingName::Rational => suite_in::<Qi>(name, modes, seed, samples),
        RingName::RationalSqrt2 | RingName::LaurentEps => suite_in::<Qs2>(name, modes, seed, samples),
        RingName::Float => suite_in::<Float>(name, modes, seed, samples),
    }
}

fn suite_in<C: Coeff>(name: &str, modes: &ModeSet, seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let few = samples.clamp(1, 3);
    match name {
        "car" => out = verify_car::<C>(modes),
        "bogoliubov" => {
            out.extend(verify_bogoliubov_table::<C>(modes)?);
            out.extend(verify_majorana_contrast::<C>(modes)?);
        }
        "adjoint" => out = verify_adjoint::<C>(modes)?,
        "commutators" => {
            for n in 0..samples {
                let reg = Registry::new();
                let a = random_param::<C>(&reg, "A", modes, &mut r)?;
                let b = random_param::<C>(&reg, "B", modes, &mut r)?;
                out.extend(verify_commutator_table(modes, &a, &b, &n.to_string())?);
            }
        }
        "exp-conjugation" => {
            for (c, ct) in [(C::one(), "1"), (C::from_ratio(1, 2), "1/2"), (C::from_int(-2), "-2")] {
                let reg = Registry::new();
                let a = random_param::<C>(&reg, "A", modes, &mut r)?;
                let b = random_param::<C>(&reg, "B", modes, &mut r)?;
                out.extend(verify_exp_conjugations(modes, &a, &b, &c, &format!("c={ct}"))?);
            }
            let reg = Registry::new();
            let a = random_param::<C>(&reg, "A", modes, &mut r)?;
            out.extend(verify_s_exponentials::<C>(modes, &lift(&a), "u")?);
        }
        "eigenstates" => {
            for n in 0..few {
                let reg = Registry::new();
                let p = random_param::<C>(&reg, "p", modes, &mut r)?;
                let tag = n.to_string();
                out.extend(verify_eigen_equations(modes, &p, &tag)?);
                out.extend(verify_generic_solution(modes, &p, &tag)?);
                out.extend(verify_adjoint_relations(modes, &p, &tag)?);
                out.extend(verify_spin_transforms(modes, &p, &tag)?);
            }
        }
        "majorana" => out = verify_majorana::<C>(modes.k_points.max(2))?,
        "disentanglement" => {
            out.extend(verify_vacuum_overlap::<C>(modes)?);
            let ts = [C::from_ratio(1, 3), C::from_ratio(1, 2)];
            for n in 0..few {
                let reg = Registry::new();
                let a = random_param::<C>(&reg, "A*", modes, &mut r)?;
                let b = random_param::<C>(&reg, "B", modes, &mut r)?;
                out.extend(verify_disentanglement(modes, &a, &b, &ts, &n.to_string())?);
            }
        }
        "h-odes" => out = verify_h_odes(90, 1e-10, 1e-8)?,
        "overlaps" => {
            let ts = [C::from_ratio(1, 3), C::from_ratio(1, 2), C::from_int(2)];
            for n in 0..samples {
                let reg = Registry::new();
                let a = random_param::<C>(&reg, "A*", modes, &mut r)?;
                let b = random_param::<C>(&reg, "B", modes, &mut r)?;
                out.extend(verify_overlap_forms(modes, &a, &b, &ts, &n.to_string())?);
            }
            for n in 0..few {
                let reg = Registry::new();
                let ps = random_real_param::<C>(&reg, "f*", modes, &mut r)?;
                let p = random_real_param::<C>(&reg, "f", modes, &mut r)?;
                out.extend(verify_named_overlaps(modes, &ps, &p, &n.to_string())?);
            }
        }
        "delta" => {
            for n in 0..few {
                let reg = Registry::new();
                let ps = random_param::<C>(&reg, "f*", modes, &mut r)?;
                let p = random_param::<C>(&reg, "f", modes, &mut r)?;
                out.extend(verify_delta_laurent(modes, &ps, &p, &n.to_string())?);
            }
            out.extend(verify_sifting::<C>(modes, &Registry::new(), &mut r, few)?);
        }
        "completeness" => out = verify_completeness::<C>(modes, &Registry::new())?,
        "wigner" => out = verify_wigner::<C>(modes, &Registry::new(), &mut r, few)?,
        "fourier" => out = verify_fourier::<C>(modes, &Registry::new(), &mut r, few, modes.m() <= 2)?,
        "star" => out = verify_star::<C>(modes, &Registry::new(), &mut r, few.min(2))?,
        other => return Err(Error::Config(format!("unknown suite `{other}`"))),
    }
    for c in &mut out {
        c.suite = name.into();
    }
    Ok(out)
}

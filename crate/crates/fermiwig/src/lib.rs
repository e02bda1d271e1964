//! Exact symbolic engine for fermionic Wigner functionals at finite mode
//! truncation: Grassmann/Berezin algebra, a Fock-space oracle, Bogoliubov
//! operators, their eigenstates, inner products and the Wigner/Weyl layer.

pub mod bogoliubov;
pub mod eigenstates;
pub mod error;
pub mod expr;
pub mod fock;
pub mod grassmann;
pub mod modes;
pub mod overlaps;
pub mod random;
pub mod report;
pub mod ring;
pub mod scenario;
pub mod serialize;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{FockBra, FockOperator, FockState, Word};
pub use grassmann::{contract, diamond, fdiamond, Contraction, GenClass, Grass, ParamFn, Registry};
pub use modes::ModeSet;
pub use report::{Check, RunReport, Status};
pub use ring::{Coeff, Float, Laurent, Qi, Qs2};
pub use scenario::{run_scenario, RingName, Scenario};

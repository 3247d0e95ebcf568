//! Probabilistic model checking of Markov chains whose labels may be
//! true, false or unknown.
//!
//! A [`QDtmc`] is checked against a [`StateFormula`] with
//! [`check_all_states`], which reduces the three-valued problem to two
//! classical checks on the lower and upper projections of the model.
//! [`oracle::check_direct`] evaluates the same semantics by enumerating
//! paths and is meant for cross-checking on small models.
//!
//! ```
//! use qmc::{check_all_states, io::fixture, parse_formula, EngineConfig, Tri};
//!
//! let m1 = fixture("m1").unwrap();
//! let f = parse_formula("P>=0.4 [ X q ]").unwrap();
//! let v = check_all_states(&m1, &f, &EngineConfig::default()).unwrap();
//! assert_eq!(v.at_init(), Tri::U);
//! ```

pub mod binmc;
pub mod engine;
pub mod formula;
pub mod io;
pub mod model;
pub mod oracle;
pub mod truth;

pub use engine::{
    check_all_states, check_swapped_phases, evaluate_nested, sweep_theta, BoundaryMode,
    EngineConfig, EngineError, ProbEvidence, SweepRow, TriVerdict,
};
pub use formula::{parse_formula, parse_path, PathFormula, ProbBound, StateFormula};
pub use model::{project_lower, project_upper, BinDtmc, QDtmc};
pub use truth::Tri;

//! Three-valued PCTL formulas: syntax tree, parser and normalization.

mod normalize;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use crate::truth::Tri;

pub use normalize::{negated_atoms, normalize, NormalizedFormula};
pub use parser::{parse_formula, parse_path, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundOp {
    /// `P>=theta`
    Ge,
    /// `P<theta`
    Lt,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbBound {
    pub op: BoundOp,
    pub theta: f64,
}

impl ProbBound {
    pub fn ge(theta: f64) -> Self {
        ProbBound {
            op: BoundOp::Ge,
            theta,
        }
    }

    pub fn lt(theta: f64) -> Self {
        ProbBound {
            op: BoundOp::Lt,
            theta,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateFormula {
    Const(Tri),
    Atom(String),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    Or(Box<StateFormula>, Box<StateFormula>),
    Prob(ProbBound, Box<PathFormula>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathFormula {
    Next(Box<StateFormula>),
    Until(Box<StateFormula>, Box<StateFormula>),
    BoundedUntil(Box<StateFormula>, Box<StateFormula>, u32),
}

impl StateFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        StateFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: StateFormula) -> Self {
        StateFormula::Not(Box::new(f))
    }

    pub fn and(a: StateFormula, b: StateFormula) -> Self {
        StateFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: StateFormula, b: StateFormula) -> Self {
        StateFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn prob(bound: ProbBound, path: PathFormula) -> Self {
        StateFormula::Prob(bound, Box::new(path))
    }

    /// Every atom name referenced anywhere in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            StateFormula::Const(_) => {}
            StateFormula::Atom(a) => {
                out.insert(a.clone());
            }
            StateFormula::Not(g) => g.collect_atoms(out),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            StateFormula::Prob(_, path) => {
                for op in path.operands() {
                    op.collect_atoms(out);
                }
            }
        }
    }

    pub fn contains_prob(&self) -> bool {
        match self {
            StateFormula::Const(_) | StateFormula::Atom(_) => false,
            StateFormula::Not(g) => g.contains_prob(),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                a.contains_prob() || b.contains_prob()
            }
            StateFormula::Prob(..) => true,
        }
    }

    /// Nesting depth of probabilistic operators.
    pub fn prob_depth(&self) -> usize {
        match self {
            StateFormula::Const(_) | StateFormula::Atom(_) => 0,
            StateFormula::Not(g) => g.prob_depth(),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => a.prob_depth().max(b.prob_depth()),
            StateFormula::Prob(_, path) => {
                1 + path
                    .operands()
                    .iter()
                    .map(|o| o.prob_depth())
                    .max()
                    .unwrap_or(0)
            }
        }
    }
}

impl PathFormula {
    pub fn next(f: StateFormula) -> Self {
        PathFormula::Next(Box::new(f))
    }

    pub fn until(a: StateFormula, b: StateFormula) -> Self {
        PathFormula::Until(Box::new(a), Box::new(b))
    }

    pub fn bounded_until(a: StateFormula, b: StateFormula, k: u32) -> Self {
        PathFormula::BoundedUntil(Box::new(a), Box::new(b), k)
    }

    pub fn operands(&self) -> Vec<&StateFormula> {
        match self {
            PathFormula::Next(f) => vec![f],
            PathFormula::Until(a, b) | PathFormula::BoundedUntil(a, b, _) => vec![a, b],
        }
    }

    /// Rebuilds the path formula with each state operand passed through `f`.
    pub fn try_map_operands<E>(
        &self,
        mut f: impl FnMut(&StateFormula) -> Result<StateFormula, E>,
    ) -> Result<PathFormula, E> {
        Ok(match self {
            PathFormula::Next(g) => PathFormula::Next(Box::new(f(g)?)),
            PathFormula::Until(a, b) => PathFormula::Until(Box::new(f(a)?), Box::new(f(b)?)),
            PathFormula::BoundedUntil(a, b, k) => {
                PathFormula::BoundedUntil(Box::new(f(a)?), Box::new(f(b)?), *k)
            }
        })
    }

    pub fn map_operands(&self, mut f: impl FnMut(&StateFormula) -> StateFormula) -> PathFormula {
        self.try_map_operands::<std::convert::Infallible>(|g| Ok(f(g)))
            .unwrap_or_else(|e| match e {})
    }
}

impl fmt::Display for ProbBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            BoundOp::Ge => write!(f, "P>={}", self.theta),
            BoundOp::Lt => write!(f, "P<{}", self.theta),
        }
    }
}

// Rendering parenthesizes every binary connective so that the output
// reparses to the same tree regardless of precedence.
impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFormula::Const(Tri::T) => write!(f, "true"),
            StateFormula::Const(Tri::F) => write!(f, "false"),
            StateFormula::Const(Tri::U) => write!(f, "unknown"),
            StateFormula::Atom(a) => write!(f, "{a}"),
            StateFormula::Not(g) => write!(f, "!{g}"),
            StateFormula::And(a, b) => write!(f, "({a} & {b})"),
            StateFormula::Or(a, b) => write!(f, "({a} | {b})"),
            StateFormula::Prob(bound, path) => write!(f, "{bound} [ {path} ]"),
        }
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathFormula::Next(g) => write!(f, "X {g}"),
            PathFormula::Until(a, b) => write!(f, "{a} U {b}"),
            PathFormula::BoundedUntil(a, b, k) => write!(f, "{a} U<={k} {b}"),
        }
    }
}

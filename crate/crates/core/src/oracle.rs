//! Brute-force evaluation of the three-valued semantics.
//!
//! Path measures are obtained by walking path prefixes depth-first and
//! adding the cylinder probability of every prefix whose verdict is already
//! fixed. Nothing here touches the projections or the linear solvers, so
//! the results serve as an independent reference for [`crate::engine`].

use crate::engine::{BoundaryMode, SweepRow};
use crate::formula::{BoundOp, PathFormula, ProbBound, StateFormula};
use crate::model::QDtmc;
use crate::truth::Tri;

const TOLERANCE: f64 = 1e-9;

/// Largest undecided path mass accepted for an unbounded until.
pub const UNDECIDED_TOLERANCE: f64 = 1e-6;

/// Values of the two path operands at one position of a path. For `X phi`
/// only `right` is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub left: Tri,
    pub right: Tri,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathShape {
    Next,
    Until,
    BoundedUntil(u32),
}

/// Verdict of a path formula on a path prefix, or `None` if longer paths
/// extending `steps` could still disagree.
///
/// With `complete` set, the last position repeats forever (the path sits in
/// an absorbing state), so every extension is known.
pub fn eval_path_tri(shape: PathShape, steps: &[Step], complete: bool) -> Option<Tri> {
    if steps.is_empty() {
        return None;
    }
    match shape {
        PathShape::Next => match steps.get(1) {
            Some(s) => Some(s.right),
            None if complete => Some(steps[0].right),
            None => None,
        },
        PathShape::BoundedUntil(k) => {
            let needed = k as usize + 1;
            if steps.len() >= needed {
                return Some(until_on_whole(&steps[..needed]));
            }
            if complete {
                let mut padded = steps.to_vec();
                padded.resize(needed, *steps.last().unwrap());
                return Some(until_on_whole(&padded));
            }
            until_on_prefix(steps)
        }
        PathShape::Until => {
            if complete {
                Some(until_on_whole(steps))
            } else {
                until_on_prefix(steps)
            }
        }
    }
}

/// `phi1 U phi2` where `steps` is every position that matters.
fn until_on_whole(steps: &[Step]) -> Tri {
    if has_witness(steps) {
        return Tri::T;
    }
    match steps.iter().position(|s| s.right != Tri::F) {
        None => Tri::F,
        Some(first) if steps[..first].iter().any(|s| s.left == Tri::F) => Tri::F,
        Some(_) => Tri::U,
    }
}

/// `phi1 U phi2` on a prefix of an unbounded sequence.
fn until_on_prefix(steps: &[Step]) -> Option<Tri> {
    if has_witness(steps) {
        return Some(Tri::T);
    }
    let left_all_true = steps.iter().all(|s| s.left == Tri::T);
    match steps.iter().position(|s| s.right != Tri::F) {
        Some(first) => {
            if steps[..first].iter().any(|s| s.left == Tri::F) {
                Some(Tri::F)
            } else if !left_all_true {
                // the first non-false phi2 is fixed and no witness can follow
                Some(Tri::U)
            } else {
                None
            }
        }
        None => {
            if steps.iter().any(|s| s.left == Tri::F) {
                Some(Tri::F)
            } else {
                None
            }
        }
    }
}

fn has_witness(steps: &[Step]) -> bool {
    for s in steps {
        if s.right == Tri::T {
            return true;
        }
        if s.left != Tri::T {
            return false;
        }
    }
    false
}

/// Measures of the paths from one state on which a path formula is true,
/// false or unknown.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TriMeasure {
    pub t: f64,
    pub f: f64,
    /// Includes `undecided`.
    pub u: f64,
    /// Mass of prefixes still open when the horizon was reached.
    pub undecided: f64,
}

impl TriMeasure {
    fn add(&mut self, verdict: Tri, mass: f64) {
        match verdict {
            Tri::T => self.t += mass,
            Tri::F => self.f += mass,
            Tri::U => self.u += mass,
        }
    }

    pub fn total(&self) -> f64 {
        self.t + self.f + self.u
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Maximum number of transitions explored for an unbounded until.
    pub horizon: usize,
    pub boundary: BoundaryMode,
    /// Maximum number of prefixes expanded per probabilistic subformula.
    pub budget: usize,
    /// Stop at the first prefix with a fixed verdict. Turning this off
    /// expands every prefix to full length, which is only useful for
    /// testing the pruning itself.
    pub prune: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            horizon: 64,
            boundary: BoundaryMode::Spec,
            budget: 20_000_000,
            prune: true,
        }
    }
}

impl OracleConfig {
    pub fn with_boundary(boundary: BoundaryMode) -> Self {
        OracleConfig {
            boundary,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error(
        "horizon {horizon} leaves path mass {undecided:e} undecided from state {state}; \
         raise the horizon"
    )]
    HorizonInsufficient {
        state: usize,
        horizon: usize,
        undecided: f64,
    },
    #[error("path enumeration exceeded {0} prefixes")]
    BudgetExceeded(usize),
    #[error("formula refers to unknown atomic proposition {0:?}")]
    UnknownAtom(String),
    #[error("probability bound {0} is outside [0, 1]")]
    ThetaOutOfRange(f64),
}

/// Per-state measures of a path formula whose operands take the values
/// `left` and `right` at each state (`left` is ignored for `Next`).
pub fn measure_tri(
    m: &QDtmc,
    shape: PathShape,
    left: &[Tri],
    right: &[Tri],
    cfg: &OracleConfig,
) -> Result<Vec<TriMeasure>, OracleError> {
    let mut walker = Walker {
        m,
        shape,
        left,
        right,
        cfg,
        expanded: 0,
    };
    (0..m.num_states())
        .map(|s| {
            let mut acc = TriMeasure::default();
            let mut steps = vec![walker.step(s)];
            walker.explore(&mut steps, s, 1.0, &mut acc)?;
            if acc.undecided > UNDECIDED_TOLERANCE {
                return Err(OracleError::HorizonInsufficient {
                    state: s,
                    horizon: cfg.horizon,
                    undecided: acc.undecided,
                });
            }
            Ok(acc)
        })
        .collect()
}

struct Walker<'a> {
    m: &'a QDtmc,
    shape: PathShape,
    left: &'a [Tri],
    right: &'a [Tri],
    cfg: &'a OracleConfig,
    expanded: usize,
}

impl Walker<'_> {
    fn step(&self, s: usize) -> Step {
        Step {
            left: self.left[s],
            right: self.right[s],
        }
    }

    fn absorbing(&self, s: usize) -> bool {
        self.m.successors(s).iter().all(|&(t, _)| t == s)
    }

    fn max_len(&self) -> usize {
        match self.shape {
            PathShape::Next => 2,
            PathShape::BoundedUntil(k) => k as usize + 1,
            PathShape::Until => self.cfg.horizon + 1,
        }
    }

    fn explore(
        &mut self,
        steps: &mut Vec<Step>,
        last: usize,
        mass: f64,
        acc: &mut TriMeasure,
    ) -> Result<(), OracleError> {
        self.expanded += 1;
        if self.expanded > self.cfg.budget {
            return Err(OracleError::BudgetExceeded(self.cfg.budget));
        }
        let at_end = steps.len() >= self.max_len();
        let complete = match self.shape {
            PathShape::Until => self.absorbing(last),
            _ => at_end || self.absorbing(last),
        };
        if self.cfg.prune || complete {
            if let Some(v) = eval_path_tri(self.shape, steps, complete) {
                acc.add(v, mass);
                return Ok(());
            }
        }
        if at_end {
            acc.u += mass;
            acc.undecided += mass;
            return Ok(());
        }
        for &(t, p) in self.m.successors(last) {
            if p <= 0.0 {
                continue;
            }
            steps.push(self.step(t));
            self.explore(steps, t, mass * p, acc)?;
            steps.pop();
        }
        Ok(())
    }
}

/// Measures behind one probabilistic subformula.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleEvidence {
    pub formula: String,
    pub theta: f64,
    pub measures: Vec<TriMeasure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectVerdict {
    pub per_state: Vec<Tri>,
    pub init: usize,
    /// One entry per probabilistic subformula, innermost first.
    pub evidence: Vec<OracleEvidence>,
}

impl DirectVerdict {
    pub fn at_init(&self) -> Tri {
        self.per_state[self.init]
    }

    pub fn top_evidence(&self) -> Option<&OracleEvidence> {
        self.evidence.last()
    }
}

/// Three-valued verdict of `f` at every state, evaluated directly from
/// the semantics.
pub fn check_direct(
    m: &QDtmc,
    f: &StateFormula,
    cfg: &OracleConfig,
) -> Result<DirectVerdict, OracleError> {
    let mut evidence = Vec::new();
    let per_state = eval_state(m, f, cfg, &mut evidence)?;
    Ok(DirectVerdict {
        per_state,
        init: m.init(),
        evidence,
    })
}

fn eval_state(
    m: &QDtmc,
    f: &StateFormula,
    cfg: &OracleConfig,
    evidence: &mut Vec<OracleEvidence>,
) -> Result<Vec<Tri>, OracleError> {
    let n = m.num_states();
    Ok(match f {
        StateFormula::Const(c) => vec![*c; n],
        StateFormula::Atom(a) => {
            let idx = m
                .ap_index(a)
                .ok_or_else(|| OracleError::UnknownAtom(a.clone()))?;
            (0..n).map(|s| *m.label(s, idx)).collect()
        }
        StateFormula::Not(g) => eval_state(m, g, cfg, evidence)?
            .into_iter()
            .map(|v| !v)
            .collect(),
        StateFormula::And(a, b) => {
            let a = eval_state(m, a, cfg, evidence)?;
            let b = eval_state(m, b, cfg, evidence)?;
            a.into_iter().zip(b).map(|(x, y)| x & y).collect()
        }
        StateFormula::Or(a, b) => {
            let a = eval_state(m, a, cfg, evidence)?;
            let b = eval_state(m, b, cfg, evidence)?;
            a.into_iter().zip(b).map(|(x, y)| x | y).collect()
        }
        StateFormula::Prob(bound, path) => {
            if !(0.0..=1.0).contains(&bound.theta) {
                return Err(OracleError::ThetaOutOfRange(bound.theta));
            }
            let (shape, left, right) = match path.as_ref() {
                PathFormula::Next(g) => {
                    let right = eval_state(m, g, cfg, evidence)?;
                    (PathShape::Next, vec![Tri::F; n], right)
                }
                PathFormula::Until(a, b) => (
                    PathShape::Until,
                    eval_state(m, a, cfg, evidence)?,
                    eval_state(m, b, cfg, evidence)?,
                ),
                PathFormula::BoundedUntil(a, b, k) => (
                    PathShape::BoundedUntil(*k),
                    eval_state(m, a, cfg, evidence)?,
                    eval_state(m, b, cfg, evidence)?,
                ),
            };
            let measures = measure_tri(m, shape, &left, &right, cfg)?;
            let theta = bound.theta;
            let verdict: Vec<Tri> = measures
                .iter()
                .map(|mu| {
                    let v = decide(mu, theta, cfg.boundary);
                    match bound.op {
                        BoundOp::Ge => v,
                        BoundOp::Lt => !v,
                    }
                })
                .collect();
            evidence.push(OracleEvidence {
                formula: f.to_string(),
                theta,
                measures,
            });
            verdict
        }
    })
}

fn decide(mu: &TriMeasure, theta: f64, boundary: BoundaryMode) -> Tri {
    if mu.t >= theta - TOLERANCE {
        Tri::T
    } else if boundary.refutes(mu.t, mu.f, theta) {
        Tri::F
    } else {
        Tri::U
    }
}

/// Checks `P>=theta [path]` at the initial state for every theta, enumerating
/// the paths once.
pub fn sweep_theta(
    m: &QDtmc,
    path: &PathFormula,
    thetas: &[f64],
    cfg: &OracleConfig,
) -> Result<Vec<SweepRow>, OracleError> {
    if let Some(&bad) = thetas.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(OracleError::ThetaOutOfRange(bad));
    }
    let probe = StateFormula::prob(ProbBound::ge(0.0), path.clone());
    let v = check_direct(m, &probe, cfg)?;
    let mu = v.top_evidence().expect("probe is probabilistic").measures[m.init()];
    Ok(thetas
        .iter()
        .map(|&theta| SweepRow {
            theta,
            verdict: decide(&mu, theta, cfg.boundary),
            t_measure: mu.t,
            f_measure: mu.f,
        })
        .collect())
}

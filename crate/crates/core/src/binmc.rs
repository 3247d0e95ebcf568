//! Classical two-valued PCTL checking over a [`BinDtmc`].
//!
//! Every operation works on all states at once: state formulas produce a
//! satisfaction vector and path formulas a probability vector.

use nalgebra::{DMatrix, DVector};

use crate::formula::{BoundOp, PathFormula, ProbBound, StateFormula};
use crate::model::BinDtmc;
use crate::truth::Tri;

/// Slack on `value >= theta` comparisons, so that decimal inputs hitting a
/// bound exactly (0.2 >= 0.2) are not lost to rounding.
pub const PROB_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    /// Direct elimination when the system is small, iteration otherwise.
    Auto,
    /// In-place Gauss-Seidel sweeps.
    Iterative,
    /// Dense LU factorisation.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Max-norm residual at which iteration stops.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub method: SolveMethod,
    /// Largest number of unknowns handled by direct elimination under `Auto`.
    pub direct_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-10,
            max_iterations: 1_000_000,
            method: SolveMethod::Auto,
            direct_limit: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error("unknown atomic proposition {0:?}")]
    UnknownAtom(String),
    #[error("internal error: constant \"unknown\" reached the two-valued checker")]
    UnknownConstant,
    #[error(
        "until probabilities did not converge after {iterations} sweeps (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("linear system for until probabilities is singular")]
    Singular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinVerdict {
    pub sat: Vec<bool>,
    /// Per-state probability of the path formula, when the checked formula
    /// is a probabilistic operator.
    pub probs: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UntilSolution {
    pub values: Vec<f64>,
    /// Max-norm residual of the linear system at the returned values.
    pub residual: f64,
    pub iterations: usize,
    pub method: SolveMethod,
}

pub fn sat_states(
    m: &BinDtmc,
    f: &StateFormula,
    cfg: &SolverConfig,
) -> Result<BinVerdict, CheckError> {
    if let StateFormula::Prob(bound, path) = f {
        let probs = path_probabilities(m, path, cfg)?;
        return Ok(BinVerdict {
            sat: check_prob(bound, &probs),
            probs: Some(probs),
        });
    }
    Ok(BinVerdict {
        sat: sat(m, f, cfg)?,
        probs: None,
    })
}

fn sat(m: &BinDtmc, f: &StateFormula, cfg: &SolverConfig) -> Result<Vec<bool>, CheckError> {
    let n = m.num_states();
    Ok(match f {
        StateFormula::Const(Tri::T) => vec![true; n],
        StateFormula::Const(Tri::F) => vec![false; n],
        StateFormula::Const(Tri::U) => return Err(CheckError::UnknownConstant),
        StateFormula::Atom(a) => m
            .column(a)
            .ok_or_else(|| CheckError::UnknownAtom(a.clone()))?,
        StateFormula::Not(g) => sat(m, g, cfg)?.into_iter().map(|b| !b).collect(),
        StateFormula::And(a, b) => {
            let (a, b) = (sat(m, a, cfg)?, sat(m, b, cfg)?);
            a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
        }
        StateFormula::Or(a, b) => {
            let (a, b) = (sat(m, a, cfg)?, sat(m, b, cfg)?);
            a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
        }
        StateFormula::Prob(bound, path) => check_prob(bound, &path_probabilities(m, path, cfg)?),
    })
}

/// Probability of `path` from every state.
pub fn path_probabilities(
    m: &BinDtmc,
    path: &PathFormula,
    cfg: &SolverConfig,
) -> Result<Vec<f64>, CheckError> {
    Ok(match path {
        PathFormula::Next(g) => prob_next(m, &sat(m, g, cfg)?),
        PathFormula::BoundedUntil(a, b, k) => {
            prob_bounded_until(m, &sat(m, a, cfg)?, &sat(m, b, cfg)?, *k)
        }
        PathFormula::Until(a, b) => prob_until(m, &sat(m, a, cfg)?, &sat(m, b, cfg)?, cfg)?.values,
    })
}

/// One-step probability of landing in `target`.
pub fn prob_next(m: &BinDtmc, target: &[bool]) -> Vec<f64> {
    (0..m.num_states())
        .map(|s| {
            let p: f64 = m
                .successors(s)
                .iter()
                .filter(|&&(t, _)| target[t])
                .map(|&(_, p)| p)
                .sum();
            p.clamp(0.0, 1.0)
        })
        .collect()
}

pub fn prob_bounded_until(m: &BinDtmc, sat1: &[bool], sat2: &[bool], k: u32) -> Vec<f64> {
    let n = m.num_states();
    let mut x: Vec<f64> = sat2.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    for _ in 0..k {
        let next: Vec<f64> = (0..n)
            .map(|s| {
                if sat2[s] {
                    1.0
                } else if sat1[s] {
                    m.successors(s)
                        .iter()
                        .map(|&(t, p)| p * x[t])
                        .sum::<f64>()
                        .clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect();
        x = next;
    }
    x
}

fn predecessors(m: &BinDtmc) -> Vec<Vec<usize>> {
    let mut pre = vec![Vec::new(); m.num_states()];
    for (from, to, p) in m.transitions() {
        if p > 0.0 {
            pre[to].push(from);
        }
    }
    pre
}

/// States from which `sat2` cannot be reached through `sat1` states, i.e.
/// those with until-probability exactly zero.
pub fn prob0(m: &BinDtmc, sat1: &[bool], sat2: &[bool]) -> Vec<bool> {
    let pre = predecessors(m);
    let mut reach = sat2.to_vec();
    let mut stack: Vec<usize> = (0..m.num_states()).filter(|&s| sat2[s]).collect();
    while let Some(t) = stack.pop() {
        for &s in &pre[t] {
            if !reach[s] && sat1[s] {
                reach[s] = true;
                stack.push(s);
            }
        }
    }
    reach.into_iter().map(|r| !r).collect()
}

/// States with until-probability exactly one: those that cannot reach a
/// zero-probability state while staying in `sat1 \ sat2`.
pub fn prob1(m: &BinDtmc, sat1: &[bool], sat2: &[bool], no: &[bool]) -> Vec<bool> {
    let pre = predecessors(m);
    let mut bad = no.to_vec();
    let mut stack: Vec<usize> = (0..m.num_states()).filter(|&s| no[s]).collect();
    while let Some(t) = stack.pop() {
        for &s in &pre[t] {
            if !bad[s] && sat1[s] && !sat2[s] {
                bad[s] = true;
                stack.push(s);
            }
        }
    }
    bad.into_iter().map(|b| !b).collect()
}

pub fn prob_until(
    m: &BinDtmc,
    sat1: &[bool],
    sat2: &[bool],
    cfg: &SolverConfig,
) -> Result<UntilSolution, CheckError> {
    let no = prob0(m, sat1, sat2);
    let yes = prob1(m, sat1, sat2, &no);
    let maybe: Vec<usize> = (0..m.num_states()).filter(|&s| !yes[s] && !no[s]).collect();
    let mut x: Vec<f64> = yes.iter().map(|&y| if y { 1.0 } else { 0.0 }).collect();

    let method = match cfg.method {
        SolveMethod::Auto if maybe.len() <= cfg.direct_limit => SolveMethod::Direct,
        SolveMethod::Auto => SolveMethod::Iterative,
        other => other,
    };
    let mut iterations = 0;
    if !maybe.is_empty() {
        match method {
            SolveMethod::Direct => solve_direct(m, &maybe, &mut x)?,
            _ => iterations = solve_iterative(m, &maybe, &mut x, cfg)?,
        }
    }
    let residual = residual(m, &maybe, &x);
    for v in &mut x {
        *v = v.clamp(0.0, 1.0);
    }
    Ok(UntilSolution {
        values: x,
        residual,
        iterations,
        method,
    })
}

fn residual(m: &BinDtmc, maybe: &[usize], x: &[f64]) -> f64 {
    maybe
        .iter()
        .map(|&s| {
            let rhs: f64 = m.successors(s).iter().map(|&(t, p)| p * x[t]).sum();
            (x[s] - rhs).abs()
        })
        .fold(0.0, f64::max)
}

fn solve_iterative(
    m: &BinDtmc,
    maybe: &[usize],
    x: &mut [f64],
    cfg: &SolverConfig,
) -> Result<usize, CheckError> {
    let mut res = f64::INFINITY;
    for sweep in 1..=cfg.max_iterations {
        for &s in maybe {
            x[s] = m.successors(s).iter().map(|&(t, p)| p * x[t]).sum();
        }
        res = residual(m, maybe, x);
        if res < cfg.tolerance {
            return Ok(sweep);
        }
    }
    Err(CheckError::NoConvergence {
        iterations: cfg.max_iterations,
        residual: res,
    })
}

fn solve_direct(m: &BinDtmc, maybe: &[usize], x: &mut [f64]) -> Result<(), CheckError> {
    let k = maybe.len();
    let mut slot = vec![usize::MAX; m.num_states()];
    for (i, &s) in maybe.iter().enumerate() {
        slot[s] = i;
    }
    // (I - A) y = b over the undetermined states
    let mut a = DMatrix::<f64>::identity(k, k);
    let mut b = DVector::<f64>::zeros(k);
    for (i, &s) in maybe.iter().enumerate() {
        for &(t, p) in m.successors(s) {
            if slot[t] != usize::MAX {
                a[(i, slot[t])] -= p;
            } else {
                b[i] += p * x[t];
            }
        }
    }
    let y = a.lu().solve(&b).ok_or(CheckError::Singular)?;
    for (i, &s) in maybe.iter().enumerate() {
        x[s] = y[i];
    }
    Ok(())
}

/// States whose value meets the bound, with [`PROB_EPSILON`] slack.
pub fn check_prob(bound: &ProbBound, values: &[f64]) -> Vec<bool> {
    values
        .iter()
        .map(|&v| {
            let ge = v >= bound.theta - PROB_EPSILON;
            match bound.op {
                BoundOp::Ge => ge,
                BoundOp::Lt => !ge,
            }
        })
        .collect()
}

//! Seeded generators for random models and formulas.

#![allow(dead_code)]

use qmc::formula::{PathFormula, ProbBound, StateFormula};
use qmc::{QDtmc, Tri};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_STATES: usize = 6;
pub const MAX_APS: usize = 3;
pub const MAX_BOUND: u32 = 4;
pub const MAX_DEPTH: usize = 3;

const AP_NAMES: [&str; MAX_APS] = ["a", "b", "c"];

/// What the formula generator may produce.
#[derive(Clone, Copy, Debug, Default)]
pub struct Grammar {
    /// No `unknown` constant.
    pub binary: bool,
    /// Unbounded until besides `X` and `U<=k`.
    pub unbounded: bool,
}

pub struct Case {
    pub seed: u64,
    pub model: QDtmc,
    pub formula: StateFormula,
}

/// Label distribution T/F/? = 0.4/0.4/0.2, or T/F = 0.5/0.5 when `binary`.
fn random_label(rng: &mut ChaCha8Rng, binary: bool) -> Tri {
    let x: f64 = rng.gen();
    if binary {
        Tri::from_bool(x < 0.5)
    } else if x < 0.4 {
        Tri::T
    } else if x < 0.8 {
        Tri::F
    } else {
        Tri::U
    }
}

pub fn random_model(rng: &mut ChaCha8Rng, binary: bool) -> QDtmc {
    let n = rng.gen_range(1..=MAX_STATES);
    let k = rng.gen_range(1..=MAX_APS);
    let aps: Vec<String> = AP_NAMES[..k].iter().map(|s| s.to_string()).collect();
    let labels = (0..n)
        .map(|_| (0..k).map(|_| random_label(rng, binary)).collect())
        .collect();
    let mut transitions = Vec::new();
    for s in 0..n {
        let out = rng.gen_range(1..=n.min(3));
        let targets = sample(rng, n, out).into_vec();
        let weights: Vec<f64> = targets.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (t, w) in targets.into_iter().zip(weights) {
            transitions.push((s, t, w / total));
        }
    }
    let init = rng.gen_range(0..n);
    QDtmc::new(init, aps, labels, transitions).expect("generated model is valid")
}

fn random_theta(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(1..=9) as f64 / 10.0
}

fn random_leaf(rng: &mut ChaCha8Rng, aps: &[String], g: Grammar) -> StateFormula {
    let x: f64 = rng.gen();
    if x < 0.9 {
        StateFormula::atom(aps[rng.gen_range(0..aps.len())].clone())
    } else if g.binary || x < 0.95 {
        StateFormula::Const(Tri::from_bool(rng.gen()))
    } else {
        StateFormula::Const(Tri::U)
    }
}

/// A probabilistic formula whose path operands have depth below `depth`.
pub fn random_prob(rng: &mut ChaCha8Rng, aps: &[String], depth: usize, g: Grammar) -> StateFormula {
    let theta = random_theta(rng);
    let bound = if rng.gen_bool(0.8) {
        ProbBound::ge(theta)
    } else {
        ProbBound::lt(theta)
    };
    let sub = depth.saturating_sub(1);
    let path = if rng.gen_bool(0.35) {
        PathFormula::next(random_state(rng, aps, sub, g))
    } else if g.unbounded && rng.gen_bool(0.5) {
        PathFormula::until(
            random_state(rng, aps, sub, g),
            random_state(rng, aps, sub, g),
        )
    } else {
        PathFormula::bounded_until(
            random_state(rng, aps, sub, g),
            random_state(rng, aps, sub, g),
            rng.gen_range(0..=MAX_BOUND),
        )
    };
    StateFormula::prob(bound, path)
}

pub fn random_state(
    rng: &mut ChaCha8Rng,
    aps: &[String],
    depth: usize,
    g: Grammar,
) -> StateFormula {
    if depth == 0 {
        return random_leaf(rng, aps, g);
    }
    let sub = depth - 1;
    match rng.gen_range(0..20) {
        0..=2 => random_leaf(rng, aps, g),
        3..=5 => StateFormula::not(random_state(rng, aps, sub, g)),
        6..=8 => StateFormula::and(
            random_state(rng, aps, sub, g),
            random_state(rng, aps, sub, g),
        ),
        9..=11 => StateFormula::or(
            random_state(rng, aps, sub, g),
            random_state(rng, aps, sub, g),
        ),
        _ => random_prob(rng, aps, depth, g),
    }
}

/// A model with a formula over its propositions, mostly rooted at a
/// probabilistic operator.
pub fn random_case(seed: u64, binary: bool) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = random_model(&mut rng, binary);
    let g = Grammar {
        binary,
        unbounded: false,
    };
    let formula = random_formula(&mut rng, &model, g);
    Case {
        seed,
        model,
        formula,
    }
}

pub fn random_formula(rng: &mut ChaCha8Rng, model: &QDtmc, g: Grammar) -> StateFormula {
    let aps = model.aps().to_vec();
    if rng.gen_bool(0.75) {
        random_prob(rng, &aps, MAX_DEPTH, g)
    } else {
        random_state(rng, &aps, MAX_DEPTH, g)
    }
}

/// A model whose transitions only lead to higher-numbered states, apart
/// from the last state, which is absorbing. Every path is absorbed within
/// `n` steps, so unbounded until is decided on finite prefixes.
pub fn random_dag_model(rng: &mut ChaCha8Rng) -> QDtmc {
    let n = rng.gen_range(1..=MAX_STATES);
    let k = rng.gen_range(1..=MAX_APS);
    let aps: Vec<String> = AP_NAMES[..k].iter().map(|s| s.to_string()).collect();
    let labels = (0..n)
        .map(|_| (0..k).map(|_| random_label(rng, false)).collect())
        .collect();
    let mut transitions = vec![(n - 1, n - 1, 1.0)];
    for s in 0..n - 1 {
        let later = n - 1 - s;
        let out = rng.gen_range(1..=later.min(3));
        let targets = sample(rng, later, out).into_vec();
        let weights: Vec<f64> = targets.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (t, w) in targets.into_iter().zip(weights) {
            transitions.push((s, s + 1 + t, w / total));
        }
    }
    QDtmc::new(0, aps, labels, transitions).expect("generated model is valid")
}

/// Depth of the syntax tree, counting state and path operators.
pub fn depth(f: &StateFormula) -> usize {
    match f {
        StateFormula::Const(_) | StateFormula::Atom(_) => 0,
        StateFormula::Not(g) => 1 + depth(g),
        StateFormula::And(a, b) | StateFormula::Or(a, b) => 1 + depth(a).max(depth(b)),
        StateFormula::Prob(_, path) => {
            1 + path.operands().into_iter().map(depth).max().unwrap_or(0)
        }
    }
}

/// Reference path formulas for each fixture.
pub fn fixture_paths(model: &str) -> &'static [&'static str] {
    match model {
        "m1" | "m2" => &["!p U q", "X q"],
        "m3" | "m4" => &["X q", "p U r", "p U P>=0.8 [ X r ]", "P>=0.2 [ p U r ] U q"],
        "m5" => &["!q U p"],
        _ => &[],
    }
}

pub fn thetas() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

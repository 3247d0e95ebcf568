//! The three-valued checker built on two runs of the classical checker.
//!
//! For a probabilistic formula `P>=t [path]` the model is first extended so
//! the path operands are free of negated atoms. Unknown labels are then
//! mapped to false (lower projection) and to true (upper projection). The
//! verdict at a state is T when the lower projection satisfies the formula,
//! F when the upper projection refutes it, and ? otherwise. Nested
//! probabilistic operators are evaluated first and their three-valued
//! results attached to the model as fresh propositions.

use serde::{Deserialize, Serialize};

use crate::binmc::{self, CheckError, SolverConfig, PROB_EPSILON};
use crate::formula::{normalize, BoundOp, PathFormula, ProbBound, StateFormula};
use crate::model::{augment_negations, project_lower, project_upper, ModelError, QDtmc, Violation};
use crate::truth::Tri;

/// How a falsity measure exactly equal to `1 - theta` is treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryMode {
    /// F as soon as the falsity measure is at least `1 - theta`. Truth
    /// takes precedence: when the truth measure also reaches `theta`
    /// (possible only if both sit exactly on the bound) the verdict is T.
    #[default]
    #[serde(rename = "spec")]
    Spec,
    /// F only when the falsity measure is strictly above `1 - theta`,
    /// which is what the two-valued refutation in the upper projection
    /// yields on its own.
    #[serde(rename = "strict-f")]
    StrictF,
}

impl BoundaryMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryMode::Spec => "spec",
            BoundaryMode::StrictF => "strict-f",
        }
    }

    /// Whether the measures of true and false paths refute a bound of
    /// `theta`. Never holds together with `t_measure >= theta`.
    pub fn refutes(self, t_measure: f64, f_measure: f64, theta: f64) -> bool {
        match self {
            BoundaryMode::Spec => {
                f_measure >= 1.0 - theta - PROB_EPSILON && t_measure < theta - PROB_EPSILON
            }
            BoundaryMode::StrictF => f_measure > 1.0 - theta + PROB_EPSILON,
        }
    }
}

impl std::str::FromStr for BoundaryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spec" => Ok(BoundaryMode::Spec),
            "strict-f" => Ok(BoundaryMode::StrictF),
            other => Err(format!(
                "unknown boundary mode {other:?} (expected spec or strict-f)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EngineConfig {
    pub boundary: BoundaryMode,
    pub solver: SolverConfig,
}

impl EngineConfig {
    pub fn with_boundary(boundary: BoundaryMode) -> Self {
        EngineConfig {
            boundary,
            ..Default::default()
        }
    }
}

/// Probabilities behind one probabilistic subformula.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbEvidence {
    /// The subformula as evaluated (normalized, before nested results were
    /// substituted).
    pub formula: String,
    pub theta: f64,
    /// Probability of the path formula in the lower projection: the measure
    /// of paths on which it is definitely true.
    pub lower: Vec<f64>,
    /// Probability in the upper projection; `1 - upper` is the measure of
    /// paths on which it is definitely false.
    pub upper: Vec<f64>,
}

impl ProbEvidence {
    pub fn t_measure(&self, state: usize) -> f64 {
        self.lower[state]
    }

    pub fn f_measure(&self, state: usize) -> f64 {
        (1.0 - self.upper[state]).clamp(0.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriVerdict {
    pub per_state: Vec<Tri>,
    pub init: usize,
    /// One entry per probabilistic subformula, innermost first.
    pub evidence: Vec<ProbEvidence>,
}

impl TriVerdict {
    pub fn at_init(&self) -> Tri {
        self.per_state[self.init]
    }

    /// Evidence for the outermost probabilistic operator, if any.
    pub fn top_evidence(&self) -> Option<&ProbEvidence> {
        self.evidence.last()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Violation>),
    #[error("formula refers to unknown atomic proposition {0:?}")]
    UnknownAtom(String),
    #[error("probability bound {0} is outside [0, 1]")]
    ThetaOutOfRange(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Which projection is consulted first when deciding a probabilistic
/// operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PhaseOrder {
    LowerFirst,
    UpperFirst,
}

/// Three-valued verdict of `f` at every state of `m`.
pub fn check_all_states(
    m: &QDtmc,
    f: &StateFormula,
    cfg: &EngineConfig,
) -> Result<TriVerdict, EngineError> {
    run(m, f, cfg, PhaseOrder::LowerFirst)
}

/// Same as [`check_all_states`] with the projections consulted in the
/// opposite order: F when the upper projection refutes, else T when the
/// lower projection satisfies, else ?.
pub fn check_swapped_phases(
    m: &QDtmc,
    f: &StateFormula,
    cfg: &EngineConfig,
) -> Result<TriVerdict, EngineError> {
    run(m, f, cfg, PhaseOrder::UpperFirst)
}

fn preflight(m: &QDtmc, f: &StateFormula) -> Result<(), EngineError> {
    let report = m.validate();
    if !report.is_empty() {
        return Err(EngineError::InvalidModel(report));
    }
    if let Some(missing) = f.atoms().into_iter().find(|a| m.ap_index(a).is_none()) {
        return Err(EngineError::UnknownAtom(missing));
    }
    check_thetas(f)
}

fn check_thetas(f: &StateFormula) -> Result<(), EngineError> {
    match f {
        StateFormula::Const(_) | StateFormula::Atom(_) => Ok(()),
        StateFormula::Not(g) => check_thetas(g),
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            check_thetas(a)?;
            check_thetas(b)
        }
        StateFormula::Prob(bound, path) => {
            if !(0.0..=1.0).contains(&bound.theta) {
                return Err(EngineError::ThetaOutOfRange(bound.theta));
            }
            path.operands().into_iter().try_for_each(check_thetas)
        }
    }
}

fn run(
    m: &QDtmc,
    f: &StateFormula,
    cfg: &EngineConfig,
    order: PhaseOrder,
) -> Result<TriVerdict, EngineError> {
    preflight(m, f)?;
    let normalized = normalize(f);
    let mut ev = Evaluator {
        model: m.clone(),
        cfg: *cfg,
        order,
        evidence: Vec::new(),
    };
    let per_state = ev.eval(&normalized.formula)?;
    Ok(TriVerdict {
        per_state,
        init: m.init(),
        evidence: ev.evidence,
    })
}

struct Evaluator {
    model: QDtmc,
    cfg: EngineConfig,
    order: PhaseOrder,
    evidence: Vec<ProbEvidence>,
}

impl Evaluator {
    fn eval(&mut self, f: &StateFormula) -> Result<Vec<Tri>, EngineError> {
        let n = self.model.num_states();
        Ok(match f {
            StateFormula::Const(c) => vec![*c; n],
            StateFormula::Atom(a) => self
                .model
                .column(a)
                .ok_or_else(|| EngineError::UnknownAtom(a.clone()))?,
            StateFormula::Not(g) => self.eval(g)?.into_iter().map(Tri::not3).collect(),
            StateFormula::And(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                a.into_iter().zip(b).map(|(x, y)| x.and3(y)).collect()
            }
            StateFormula::Or(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                a.into_iter().zip(b).map(|(x, y)| x.or3(y)).collect()
            }
            StateFormula::Prob(bound, path) => {
                let verdict = self.eval_prob(f, bound, path)?;
                match bound.op {
                    BoundOp::Ge => verdict,
                    // only reachable for unnormalized input
                    BoundOp::Lt => verdict.into_iter().map(Tri::not3).collect(),
                }
            }
        })
    }

    /// Replaces every probabilistic subformula inside `f` by a fresh
    /// proposition carrying its three-valued result.
    fn flatten(&mut self, f: &StateFormula) -> Result<StateFormula, EngineError> {
        Ok(match f {
            StateFormula::Const(_) | StateFormula::Atom(_) => f.clone(),
            StateFormula::Not(g) => StateFormula::not(self.flatten(g)?),
            StateFormula::And(a, b) => StateFormula::and(self.flatten(a)?, self.flatten(b)?),
            StateFormula::Or(a, b) => StateFormula::or(self.flatten(a)?, self.flatten(b)?),
            StateFormula::Prob(..) => {
                let labels = self.eval(f)?;
                let name = self.model.fresh_ap_name("sub");
                self.model = self.model.with_ap(&name, labels)?;
                StateFormula::Atom(name)
            }
        })
    }

    fn eval_prob(
        &mut self,
        original: &StateFormula,
        bound: &ProbBound,
        path: &PathFormula,
    ) -> Result<Vec<Tri>, EngineError> {
        let flat_path = path.try_map_operands(|op| self.flatten(op))?;
        let probes = ProjectedProbabilities::compute(&self.model, &flat_path, &self.cfg.solver)?;
        let verdict = probes.decide(bound.theta, self.cfg.boundary, self.order);
        self.evidence.push(ProbEvidence {
            formula: original.to_string(),
            theta: bound.theta,
            lower: probes.lower,
            upper: probes.upper,
        });
        Ok(verdict)
    }
}

/// Path-formula probabilities in both projections. They do not depend on
/// the bound, so one computation serves a whole sweep over theta.
struct ProjectedProbabilities {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ProjectedProbabilities {
    /// `path` must be free of probabilistic operators.
    fn compute(m: &QDtmc, path: &PathFormula, solver: &SolverConfig) -> Result<Self, EngineError> {
        let probe = StateFormula::prob(ProbBound::ge(0.0), path.clone());
        let (augmented, probe) = augment_negations(m, &probe)?;
        let (augmented, probe) = lift_unknown_constants(augmented, probe)?;
        let lower = binmc::sat_states(&project_lower(&augmented), &probe, solver)?;
        let upper = binmc::sat_states(&project_upper(&augmented), &probe, solver)?;
        Ok(ProjectedProbabilities {
            lower: lower.probs.unwrap_or_default(),
            upper: upper.probs.unwrap_or_default(),
        })
    }

    fn decide(&self, theta: f64, boundary: BoundaryMode, order: PhaseOrder) -> Vec<Tri> {
        let bound = ProbBound::ge(theta);
        let lower_sat = binmc::check_prob(&bound, &self.lower);
        let upper_sat = binmc::check_prob(&bound, &self.upper);
        (0..self.lower.len())
            .map(|s| {
                let proves = lower_sat[s];
                let refutes = match boundary {
                    BoundaryMode::StrictF => !upper_sat[s],
                    BoundaryMode::Spec => {
                        boundary.refutes(self.lower[s], 1.0 - self.upper[s], theta)
                    }
                };
                match (order, proves, refutes) {
                    (PhaseOrder::LowerFirst, true, _) => Tri::T,
                    (PhaseOrder::LowerFirst, false, true) => Tri::F,
                    (PhaseOrder::UpperFirst, _, true) => Tri::F,
                    (PhaseOrder::UpperFirst, true, false) => Tri::T,
                    _ => Tri::U,
                }
            })
            .collect()
    }
}

/// The constant `unknown` has no two-valued counterpart; it becomes a
/// proposition labeled ? everywhere, which the projections then map to
/// false and true like any other unknown label.
fn lift_unknown_constants(m: QDtmc, f: StateFormula) -> Result<(QDtmc, StateFormula), EngineError> {
    fn contains_unknown(f: &StateFormula) -> bool {
        match f {
            StateFormula::Const(c) => c.is_unknown(),
            StateFormula::Atom(_) => false,
            StateFormula::Not(g) => contains_unknown(g),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                contains_unknown(a) || contains_unknown(b)
            }
            StateFormula::Prob(_, path) => path.operands().into_iter().any(contains_unknown),
        }
    }
    fn replace(f: &StateFormula, name: &str) -> StateFormula {
        match f {
            StateFormula::Const(Tri::U) => StateFormula::atom(name),
            StateFormula::Const(_) | StateFormula::Atom(_) => f.clone(),
            StateFormula::Not(g) => StateFormula::not(replace(g, name)),
            StateFormula::And(a, b) => StateFormula::and(replace(a, name), replace(b, name)),
            StateFormula::Or(a, b) => StateFormula::or(replace(a, name), replace(b, name)),
            StateFormula::Prob(bound, path) => {
                StateFormula::prob(*bound, path.map_operands(|op| replace(op, name)))
            }
        }
    }
    if !contains_unknown(&f) {
        return Ok((m, f));
    }
    let name = m.fresh_ap_name("unknown_const");
    let m = m.with_ap(&name, vec![Tri::U; m.num_states()])?;
    let f = replace(&f, &name);
    Ok((m, f))
}

/// Evaluates `inner` (a probabilistic formula with no unresolved nesting
/// left inside) and attaches its per-state result to the model as a new
/// proposition. Returns the extended model and the proposition's name.
pub fn evaluate_nested(
    m: &QDtmc,
    inner: &StateFormula,
    cfg: &EngineConfig,
) -> Result<(QDtmc, String), EngineError> {
    let verdict = check_all_states(m, inner, cfg)?;
    let name = m.fresh_ap_name("sub");
    let extended = m.with_ap(&name, verdict.per_state)?;
    Ok((extended, name))
}

/// One row of a theta sweep, evaluated at the initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub verdict: Tri,
    pub t_measure: f64,
    pub f_measure: f64,
}

/// Checks `P>=theta [path]` at the initial state for every theta, computing
/// the projection probabilities once.
pub fn sweep_theta(
    m: &QDtmc,
    path: &PathFormula,
    thetas: &[f64],
    cfg: &EngineConfig,
) -> Result<Vec<SweepRow>, EngineError> {
    let template = StateFormula::prob(ProbBound::ge(0.0), path.clone());
    preflight(m, &template)?;
    if let Some(&bad) = thetas.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(EngineError::ThetaOutOfRange(bad));
    }
    let StateFormula::Prob(_, path) = normalize(&template).formula else {
        unreachable!("normalizing a P>= formula keeps it at the root");
    };
    let mut ev = Evaluator {
        model: m.clone(),
        cfg: *cfg,
        order: PhaseOrder::LowerFirst,
        evidence: Vec::new(),
    };
    let flat_path = path.try_map_operands(|op| ev.flatten(op))?;
    let probes = ProjectedProbabilities::compute(&ev.model, &flat_path, &cfg.solver)?;
    let init = m.init();
    Ok(thetas
        .iter()
        .map(|&theta| SweepRow {
            theta,
            verdict: probes.decide(theta, cfg.boundary, PhaseOrder::LowerFirst)[init],
            t_measure: probes.lower[init],
            f_measure: (1.0 - probes.upper[init]).clamp(0.0, 1.0),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_path};
    use crate::io::fixture;
    use Tri::*;

    fn at_init(model: &str, formula: &str, mode: BoundaryMode) -> Tri {
        let m = fixture(model).unwrap();
        check_all_states(
            &m,
            &parse_formula(formula).unwrap(),
            &EngineConfig::with_boundary(mode),
        )
        .unwrap()
        .at_init()
    }

    #[test]
    fn next_on_m1() {
        assert_eq!(at_init("m1", "P>=0.1 [ X q ]", BoundaryMode::Spec), T);
        assert_eq!(at_init("m1", "P>=0.8 [ X q ]", BoundaryMode::Spec), F);
        assert_eq!(at_init("m1", "P>=0.4 [ X q ]", BoundaryMode::Spec), U);
    }

    #[test]
    fn boundary_modes_differ_only_at_the_boundary() {
        assert_eq!(at_init("m1", "P>=0.7 [ X q ]", BoundaryMode::Spec), F);
        assert_eq!(at_init("m1", "P>=0.7 [ X q ]", BoundaryMode::StrictF), U);
        assert_eq!(at_init("m1", "P>=0.8 [ X q ]", BoundaryMode::StrictF), F);
    }

    #[test]
    fn m5_until_with_evidence() {
        let m5 = fixture("m5").unwrap();
        let v = check_all_states(
            &m5,
            &parse_formula("P>=0.1 [ !q U p ]").unwrap(),
            &EngineConfig::default(),
        )
        .unwrap();
        assert_eq!(v.at_init(), T);
        let ev = v.top_evidence().unwrap();
        assert!((ev.t_measure(0) - 0.1).abs() < 1e-9);
        assert!((ev.f_measure(0) - 0.4464).abs() < 1e-9);
    }

    #[test]
    fn negated_prob_is_negated_afterwards() {
        assert_eq!(at_init("m1", "P<0.1 [ X q ]", BoundaryMode::Spec), F);
        assert_eq!(at_init("m1", "P<0.8 [ X q ]", BoundaryMode::Spec), T);
        assert_eq!(at_init("m1", "!P>=0.4 [ X q ]", BoundaryMode::Spec), U);
    }

    #[test]
    fn top_level_connectives_are_kleene() {
        // q is ? at s_init, the probabilistic part is T
        assert_eq!(at_init("m1", "q & P>=0.1 [ X q ]", BoundaryMode::Spec), U);
        assert_eq!(at_init("m1", "q | P>=0.1 [ X q ]", BoundaryMode::Spec), T);
        assert_eq!(at_init("m1", "p | q", BoundaryMode::Spec), U);
        assert_eq!(at_init("m1", "unknown", BoundaryMode::Spec), U);
    }

    #[test]
    fn unknown_constant_inside_path() {
        // X unknown: every successor is ?, so neither measure reaches anything
        assert_eq!(at_init("m1", "P>=0.5 [ X unknown ]", BoundaryMode::Spec), U);
        assert_eq!(
            at_init("m1", "P>=0.5 [ X !unknown ]", BoundaryMode::Spec),
            U
        );
        assert_eq!(at_init("m1", "P>=0.0 [ X unknown ]", BoundaryMode::Spec), T);
        assert_eq!(
            at_init("m1", "P>=0.5 [ X (unknown & false) ]", BoundaryMode::Spec),
            F
        );
    }

    #[test]
    fn nested_evaluation_labels() {
        let m3 = fixture("m3").unwrap();
        let inner = parse_formula("P>=0.8 [ X r ]").unwrap();
        let (ext, name) = evaluate_nested(&m3, &inner, &EngineConfig::default()).unwrap();
        assert_eq!(name, "sub");
        let col = ext.column(&name).unwrap();
        // s1 moves to r=? states with probability 0.83, s9 loops on r=?
        assert_eq!(col[1], U);
        assert_eq!(col[9], U);
        assert_eq!(col[3], T);
        assert_eq!(col[0], F);

        let trivially = parse_formula("P>=0 [ X r ]").unwrap();
        let (ext, name) = evaluate_nested(&m3, &trivially, &EngineConfig::default()).unwrap();
        assert!(ext.column(&name).unwrap().iter().all(|&t| t == T));
    }

    #[test]
    fn nested_phi5_on_m3() {
        let m3 = fixture("m3").unwrap();
        let path = parse_path("P>=0.2 [ p U r ] U q").unwrap();
        let thetas: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let rows = sweep_theta(&m3, &path, &thetas, &EngineConfig::default()).unwrap();
        let got: Vec<Tri> = rows.iter().map(|r| r.verdict).collect();
        assert_eq!(got, vec![T, T, T, T, T, T, T, U, U]);
    }

    #[test]
    fn sweep_matches_single_checks() {
        let thetas: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        for (model, path) in [
            ("m1", "!p U q"),
            ("m2", "X q"),
            ("m5", "!q U p"),
            ("m4", "p U P>=0.8 [ X r ]"),
        ] {
            let m = fixture(model).unwrap();
            for mode in [BoundaryMode::Spec, BoundaryMode::StrictF] {
                let cfg = EngineConfig::with_boundary(mode);
                let rows = sweep_theta(&m, &parse_path(path).unwrap(), &thetas, &cfg).unwrap();
                for row in rows {
                    let f = StateFormula::prob(ProbBound::ge(row.theta), parse_path(path).unwrap());
                    assert_eq!(
                        check_all_states(&m, &f, &cfg).unwrap().at_init(),
                        row.verdict
                    );
                }
            }
        }
    }

    #[test]
    fn phase_order_agrees_on_fixtures() {
        for model in ["m1", "m2", "m3", "m4", "m5"] {
            let m = fixture(model).unwrap();
            for f in ["P>=0.3 [ X q ]", "P>=0.6 [ !q U p ]", "P<0.5 [ p U<=3 r ]"] {
                let f = parse_formula(f).unwrap();
                for mode in [BoundaryMode::Spec, BoundaryMode::StrictF] {
                    let cfg = EngineConfig::with_boundary(mode);
                    if f.atoms().iter().all(|a| m.ap_index(a).is_some()) {
                        assert_eq!(
                            check_all_states(&m, &f, &cfg).unwrap().per_state,
                            check_swapped_phases(&m, &f, &cfg).unwrap().per_state
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exact_tie_is_true_in_either_phase_order() {
        // fully known model where the path probability equals theta exactly:
        // the truth and falsity conditions both hold and truth wins
        let m = QDtmc::new(
            0,
            vec!["a".into()],
            vec![vec![F], vec![T], vec![F]],
            [(0, 1, 0.5), (0, 2, 0.5), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap();
        let f = parse_formula("P>=0.5 [ X a ]").unwrap();
        for mode in [BoundaryMode::Spec, BoundaryMode::StrictF] {
            let cfg = EngineConfig::with_boundary(mode);
            assert_eq!(check_all_states(&m, &f, &cfg).unwrap().at_init(), T);
            assert_eq!(check_swapped_phases(&m, &f, &cfg).unwrap().at_init(), T);
        }
        let below = parse_formula("P>=0.6 [ X a ]").unwrap();
        let spec = EngineConfig::with_boundary(BoundaryMode::Spec);
        assert_eq!(
            check_swapped_phases(&m, &below, &spec).unwrap().at_init(),
            F
        );
    }

    #[test]
    fn errors() {
        let m1 = fixture("m1").unwrap();
        let cfg = EngineConfig::default();
        assert_eq!(
            check_all_states(&m1, &parse_formula("P>=0.5 [ X zz ]").unwrap(), &cfg),
            Err(EngineError::UnknownAtom("zz".into()))
        );
        let bad = StateFormula::prob(ProbBound::ge(1.5), parse_path("X q").unwrap());
        assert_eq!(
            check_all_states(&m1, &bad, &cfg),
            Err(EngineError::ThetaOutOfRange(1.5))
        );
        assert!(matches!(
            sweep_theta(&m1, &parse_path("X q").unwrap(), &[0.5, -0.1], &cfg),
            Err(EngineError::ThetaOutOfRange(_))
        ));
        let broken = QDtmc::from_parts(0, vec!["q".into()], vec![vec![T]], [(0, 0, 0.5)]).unwrap();
        assert!(matches!(
            check_all_states(&broken, &parse_formula("q").unwrap(), &cfg),
            Err(EngineError::InvalidModel(_))
        ));
    }

    #[test]
    fn lower_never_exceeds_upper() {
        for model in ["m1", "m2", "m3", "m4", "m5"] {
            let m = fixture(model).unwrap();
            let f = if m.ap_index("r").is_some() {
                "P>=0.5 [ (p | !q) U r ]"
            } else {
                "P>=0.5 [ (p | !q) U<=4 q ]"
            };
            let v =
                check_all_states(&m, &parse_formula(f).unwrap(), &EngineConfig::default()).unwrap();
            let ev = v.top_evidence().unwrap();
            for s in 0..m.num_states() {
                assert!(ev.lower[s] <= ev.upper[s] + 1e-9, "{model} s{s}");
            }
        }
    }
}

//! Markov chains with three-valued (or boolean) state labels.
//!
//! [`QDtmc`] is the input model: every (state, proposition) pair carries a
//! [`Tri`]. The two projections used by the checker, [`project_lower`] and
//! [`project_upper`], turn it into a [`BinDtmc`] by mapping unknown labels to
//! false or true respectively. Transitions are shared verbatim.

use std::fmt;

use crate::formula::{negated_atoms, StateFormula};
use crate::truth::Tri;

/// Tolerance on row sums.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;
/// How far outside `[0, 1]` a single entry may drift before it is rejected.
pub const ENTRY_TOLERANCE: f64 = 1e-12;

/// A finite discrete-time Markov chain with one label of type `L` per
/// (state, atomic proposition) pair. Transitions are stored sparse by rows,
/// each row sorted by target state.
#[derive(Clone, Debug, PartialEq)]
pub struct Dtmc<L> {
    init: usize,
    aps: Vec<String>,
    labels: Vec<Vec<L>>,
    rows: Vec<Vec<(usize, f64)>>,
}

pub type QDtmc = Dtmc<Tri>;
pub type BinDtmc = Dtmc<bool>;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NoStates,
    InitOutOfRange {
        init: usize,
        states: usize,
    },
    InvalidApName(String),
    DuplicateAp(String),
    LabelArity {
        state: usize,
        expected: usize,
        found: usize,
    },
    LabelRowCount {
        expected: usize,
        found: usize,
    },
    SourceOutOfRange {
        from: usize,
        to: usize,
    },
    TargetOutOfRange {
        from: usize,
        to: usize,
    },
    DuplicateTransition {
        from: usize,
        to: usize,
    },
    ProbabilityOutOfRange {
        from: usize,
        to: usize,
        prob: f64,
    },
    RowSum {
        row: usize,
        sum: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "model has no states"),
            Violation::InitOutOfRange { init, states } => {
                write!(
                    f,
                    "initial state {init} out of range (model has {states} states)"
                )
            }
            Violation::InvalidApName(name) => write!(f, "invalid proposition name {name:?}"),
            Violation::DuplicateAp(name) => write!(f, "duplicate proposition {name:?}"),
            Violation::LabelArity {
                state,
                expected,
                found,
            } => write!(f, "state {state} has {found} labels, expected {expected}"),
            Violation::LabelRowCount { expected, found } => {
                write!(f, "labeling covers {found} states, expected {expected}")
            }
            Violation::SourceOutOfRange { from, to } => {
                write!(f, "transition {from}->{to}: source state out of range")
            }
            Violation::TargetOutOfRange { from, to } => {
                write!(f, "transition {from}->{to}: target state out of range")
            }
            Violation::DuplicateTransition { from, to } => {
                write!(f, "duplicate transition {from}->{to}")
            }
            Violation::ProbabilityOutOfRange { from, to, prob } => {
                write!(
                    f,
                    "transition {from}->{to}: probability {prob} outside [0, 1]"
                )
            }
            Violation::RowSum { row, sum } => write!(f, "row {row} sums to {sum}, expected 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid model: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown atomic proposition {0:?}")]
    UnknownAtom(String),
    #[error("proposition {0:?} already exists")]
    DuplicateAp(String),
    #[error("label column for {name:?} has {found} entries, expected {expected}")]
    LabelColumn {
        name: String,
        expected: usize,
        found: usize,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl<L: Clone> Dtmc<L> {
    /// Assembles a model. Only shape problems that cannot be represented
    /// (out-of-range indices, duplicate transitions, ragged labels) are
    /// rejected here; everything else is left to [`Dtmc::validate`], so that
    /// broken models can still be inspected and reported on.
    pub fn from_parts(
        init: usize,
        aps: Vec<String>,
        labels: Vec<Vec<L>>,
        transitions: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, ModelError> {
        let states = labels.len();
        let mut problems = Vec::new();
        for (state, row) in labels.iter().enumerate() {
            if row.len() != aps.len() {
                problems.push(Violation::LabelArity {
                    state,
                    expected: aps.len(),
                    found: row.len(),
                });
            }
        }
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); states];
        for (from, to, prob) in transitions {
            if from >= states {
                problems.push(Violation::SourceOutOfRange { from, to });
            } else if to >= states {
                problems.push(Violation::TargetOutOfRange { from, to });
            } else if rows[from].iter().any(|&(t, _)| t == to) {
                problems.push(Violation::DuplicateTransition { from, to });
            } else {
                rows[from].push((to, prob));
            }
        }
        if !problems.is_empty() {
            return Err(ModelError::Invalid(problems));
        }
        for row in &mut rows {
            row.sort_by_key(|&(t, _)| t);
        }
        Ok(Dtmc {
            init,
            aps,
            labels,
            rows,
        })
    }

    /// Like [`Dtmc::from_parts`] but also requires an empty validation report.
    pub fn new(
        init: usize,
        aps: Vec<String>,
        labels: Vec<Vec<L>>,
        transitions: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, ModelError> {
        let m = Self::from_parts(init, aps, labels, transitions)?;
        let report = m.validate();
        if report.is_empty() {
            Ok(m)
        } else {
            Err(ModelError::Invalid(report))
        }
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn ap_index(&self, name: &str) -> Option<usize> {
        self.aps.iter().position(|a| a == name)
    }

    pub fn label(&self, state: usize, ap: usize) -> &L {
        &self.labels[state][ap]
    }

    pub fn labels_of(&self, state: usize) -> &[L] {
        &self.labels[state]
    }

    /// The label of `name` at every state.
    pub fn column(&self, name: &str) -> Option<Vec<L>> {
        let idx = self.ap_index(name)?;
        Some(self.labels.iter().map(|row| row[idx].clone()).collect())
    }

    /// Outgoing transitions of `state`, sorted by target.
    pub fn successors(&self, state: usize) -> &[(usize, f64)] {
        &self.rows[state]
    }

    pub fn probability(&self, from: usize, to: usize) -> f64 {
        self.rows[from]
            .iter()
            .find(|&&(t, _)| t == to)
            .map_or(0.0, |&(_, p)| p)
    }

    /// All transitions as `(from, to, prob)` in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(from, row)| row.iter().map(move |&(to, p)| (from, to, p)))
    }

    pub fn num_transitions(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// A state whose only successor is itself.
    pub fn is_absorbing(&self, state: usize) -> bool {
        self.rows[state].iter().all(|&(t, p)| {
            if t == state {
                (p - 1.0).abs() <= ROW_SUM_TOLERANCE
            } else {
                p == 0.0
            }
        }) && self.probability(state, state) > 0.0
    }

    /// Every broken invariant; empty when the model is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let n = self.num_states();
        if n == 0 {
            report.push(Violation::NoStates);
        }
        if self.init >= n {
            report.push(Violation::InitOutOfRange {
                init: self.init,
                states: n,
            });
        }
        for (i, name) in self.aps.iter().enumerate() {
            if !is_identifier(name) {
                report.push(Violation::InvalidApName(name.clone()));
            }
            if self.aps[..i].contains(name) {
                report.push(Violation::DuplicateAp(name.clone()));
            }
        }
        if self.rows.len() != n {
            report.push(Violation::LabelRowCount {
                expected: self.rows.len(),
                found: n,
            });
        }
        for (state, row) in self.labels.iter().enumerate() {
            if row.len() != self.aps.len() {
                report.push(Violation::LabelArity {
                    state,
                    expected: self.aps.len(),
                    found: row.len(),
                });
            }
        }
        for (from, row) in self.rows.iter().enumerate() {
            let mut sum = 0.0;
            for &(to, prob) in row {
                if !(-ENTRY_TOLERANCE..=1.0 + ENTRY_TOLERANCE).contains(&prob) {
                    report.push(Violation::ProbabilityOutOfRange { from, to, prob });
                }
                sum += prob;
            }
            if sum.is_nan() || (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                report.push(Violation::RowSum { row: from, sum });
            }
        }
        report
    }

    /// Returns a name based on `base` that is not yet a proposition, by
    /// appending underscores.
    pub fn fresh_ap_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.ap_index(&name).is_some() {
            name.push('_');
        }
        name
    }

    /// Appends a proposition with the given per-state labels.
    pub fn with_ap(&self, name: &str, column: Vec<L>) -> Result<Self, ModelError> {
        if self.ap_index(name).is_some() {
            return Err(ModelError::DuplicateAp(name.to_string()));
        }
        if column.len() != self.num_states() {
            return Err(ModelError::LabelColumn {
                name: name.to_string(),
                expected: self.num_states(),
                found: column.len(),
            });
        }
        let mut out = self.clone();
        out.aps.push(name.to_string());
        for (row, label) in out.labels.iter_mut().zip(column) {
            row.push(label);
        }
        Ok(out)
    }

    /// Same chain, labels passed through `f`.
    pub fn map_labels<M>(&self, mut f: impl FnMut(&L) -> M) -> Dtmc<M> {
        Dtmc {
            init: self.init,
            aps: self.aps.clone(),
            labels: self
                .labels
                .iter()
                .map(|row| row.iter().map(&mut f).collect())
                .collect(),
            rows: self.rows.clone(),
        }
    }

    pub fn with_initial_state(&self, init: usize) -> Self {
        Dtmc {
            init,
            ..self.clone()
        }
    }
}

impl QDtmc {
    pub fn has_unknown_labels(&self) -> bool {
        self.labels.iter().flatten().any(|l| l.is_unknown())
    }
}

/// Unknown labels become false.
pub fn project_lower(m: &QDtmc) -> BinDtmc {
    m.map_labels(|&l| l == Tri::T)
}

/// Unknown labels become true.
pub fn project_upper(m: &QDtmc) -> BinDtmc {
    m.map_labels(|&l| l != Tri::F)
}

/// Replaces every negated atom `!a` in `f` by a fresh positive atom (named
/// `a_neg`, with underscores appended on collision) whose label is the
/// three-valued negation of `a`. Negations above other connectives are left
/// alone, so `f` should already be normalized.
pub fn augment_negations(m: &QDtmc, f: &StateFormula) -> Result<(QDtmc, StateFormula), ModelError> {
    let mut model = m.clone();
    let mut renames = Vec::new();
    for atom in negated_atoms(f) {
        let column = m
            .column(&atom)
            .ok_or_else(|| ModelError::UnknownAtom(atom.clone()))?;
        let name = model.fresh_ap_name(&format!("{atom}_neg"));
        model = model.with_ap(&name, column.into_iter().map(Tri::not3).collect())?;
        renames.push((atom, name));
    }
    Ok((model, replace_negated(f, &renames)))
}

fn replace_negated(f: &StateFormula, renames: &[(String, String)]) -> StateFormula {
    match f {
        StateFormula::Not(g) => match g.as_ref() {
            StateFormula::Atom(a) => match renames.iter().find(|(from, _)| from == a) {
                Some((_, to)) => StateFormula::Atom(to.clone()),
                None => f.clone(),
            },
            other => StateFormula::not(replace_negated(other, renames)),
        },
        StateFormula::And(a, b) => {
            StateFormula::and(replace_negated(a, renames), replace_negated(b, renames))
        }
        StateFormula::Or(a, b) => {
            StateFormula::or(replace_negated(a, renames), replace_negated(b, renames))
        }
        StateFormula::Prob(bound, path) => {
            StateFormula::prob(*bound, path.map_operands(|op| replace_negated(op, renames)))
        }
        StateFormula::Const(_) | StateFormula::Atom(_) => f.clone(),
    }
}

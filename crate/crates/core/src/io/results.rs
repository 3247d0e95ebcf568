use serde::{Deserialize, Serialize};

use super::IoError;
use crate::engine::{BoundaryMode, SweepRow, TriVerdict};
use crate::oracle::DirectVerdict;
use crate::truth::Tri;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Qmc,
    Oracle,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Qmc => "qmc",
            EngineKind::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qmc" => Ok(EngineKind::Qmc),
            "oracle" => Ok(EngineKind::Oracle),
            other => Err(format!("unknown engine {other:?} (expected qmc or oracle)")),
        }
    }
}

/// Measures behind the verdict of one probabilistic subformula at one
/// state. For the qmc engine the true measure comes from the lower
/// projection and the false measure from the upper one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub formula: String,
    pub theta: f64,
    pub state: usize,
    pub t_measure: f64,
    pub f_measure: f64,
    pub u_measure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub theta: f64,
    pub verdict: Tri,
    pub t_measure: f64,
    pub f_measure: f64,
}

impl From<&SweepRow> for SweepRecord {
    fn from(row: &SweepRow) -> Self {
        SweepRecord {
            theta: row.theta,
            verdict: row.verdict,
            t_measure: row.t_measure,
            f_measure: row.f_measure,
        }
    }
}

/// Machine-readable outcome of a `check` or `sweep` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub formula: String,
    pub engine: EngineKind,
    pub mode: BoundaryMode,
    pub init: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Tri>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<Tri>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<EvidenceRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRecord>,
}

impl ResultDocument {
    /// Evidence is reported at the initial state, or at every state when
    /// `all_states` is set.
    pub fn from_qmc(formula: &str, mode: BoundaryMode, v: &TriVerdict, all_states: bool) -> Self {
        let states = selected_states(v.init, v.per_state.len(), all_states);
        let evidence = v
            .evidence
            .iter()
            .flat_map(|ev| {
                states.iter().map(move |&s| {
                    let (t, f) = (ev.t_measure(s), ev.f_measure(s));
                    EvidenceRecord {
                        formula: ev.formula.clone(),
                        theta: ev.theta,
                        state: s,
                        t_measure: t,
                        f_measure: f,
                        u_measure: (1.0 - t - f).clamp(0.0, 1.0),
                    }
                })
            })
            .collect();
        ResultDocument {
            formula: formula.to_string(),
            engine: EngineKind::Qmc,
            mode,
            init: v.init,
            verdict: Some(v.at_init()),
            states: if all_states {
                v.per_state.clone()
            } else {
                Vec::new()
            },
            evidence,
            sweep: Vec::new(),
        }
    }

    pub fn from_oracle(
        formula: &str,
        mode: BoundaryMode,
        v: &DirectVerdict,
        all_states: bool,
    ) -> Self {
        let states = selected_states(v.init, v.per_state.len(), all_states);
        let evidence = v
            .evidence
            .iter()
            .flat_map(|ev| {
                states.iter().map(move |&s| {
                    let mu = ev.measures[s];
                    EvidenceRecord {
                        formula: ev.formula.clone(),
                        theta: ev.theta,
                        state: s,
                        t_measure: mu.t,
                        f_measure: mu.f,
                        u_measure: mu.u,
                    }
                })
            })
            .collect();
        ResultDocument {
            formula: formula.to_string(),
            engine: EngineKind::Oracle,
            mode,
            init: v.init,
            verdict: Some(v.at_init()),
            states: if all_states {
                v.per_state.clone()
            } else {
                Vec::new()
            },
            evidence,
            sweep: Vec::new(),
        }
    }

    pub fn from_sweep(
        path: &str,
        engine: EngineKind,
        mode: BoundaryMode,
        init: usize,
        rows: &[SweepRow],
    ) -> Self {
        ResultDocument {
            formula: path.to_string(),
            engine,
            mode,
            init,
            verdict: None,
            states: Vec::new(),
            evidence: Vec::new(),
            sweep: rows.iter().map(SweepRecord::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn selected_states(init: usize, n: usize, all: bool) -> Vec<usize> {
    if all {
        (0..n).collect()
    } else {
        vec![init]
    }
}

/// Sweep rows as CSV with a `theta,verdict` header.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta,verdict\n");
    for row in rows {
        out.push_str(&format!("{},{}\n", row.theta, row.verdict));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{check_all_states, sweep_theta, EngineConfig};
    use crate::formula::{parse_formula, parse_path};
    use crate::io::fixture;
    use crate::oracle::{check_direct, OracleConfig};

    #[test]
    fn json_round_trip() {
        let m1 = fixture("m1").unwrap();
        let f = parse_formula("P>=0.7 [ X q ]").unwrap();
        let v = check_all_states(&m1, &f, &EngineConfig::default()).unwrap();
        for all in [false, true] {
            let doc = ResultDocument::from_qmc(&f.to_string(), BoundaryMode::Spec, &v, all);
            let back = ResultDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
        }
        let doc = ResultDocument::from_qmc(&f.to_string(), BoundaryMode::Spec, &v, false);
        assert_eq!(doc.verdict, Some(Tri::F));
        assert_eq!(doc.evidence.len(), 1);
        assert!((doc.evidence[0].f_measure - 0.3).abs() < 1e-9);
        assert!((doc.evidence[0].u_measure - 0.5).abs() < 1e-9);

        let json: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(json["verdict"], "F");
        assert_eq!(json["engine"], "qmc");
        assert_eq!(json["mode"], "spec");
    }

    #[test]
    fn oracle_document_matches_qmc_measures() {
        let m5 = fixture("m5").unwrap();
        let f = parse_formula("P>=0.5 [ !q U p ]").unwrap();
        let q = check_all_states(&m5, &f, &EngineConfig::default()).unwrap();
        let o = check_direct(&m5, &f, &OracleConfig::default()).unwrap();
        let a = ResultDocument::from_qmc("f", BoundaryMode::Spec, &q, true);
        let b = ResultDocument::from_oracle("f", BoundaryMode::Spec, &o, true);
        assert_eq!(a.states, b.states);
        for (x, y) in a.evidence.iter().zip(&b.evidence) {
            assert!((x.t_measure - y.t_measure).abs() < 1e-9);
            assert!((x.f_measure - y.f_measure).abs() < 1e-9);
        }
        assert_eq!(ResultDocument::from_json(&b.to_json()).unwrap(), b);
    }

    #[test]
    fn sweep_outputs() {
        let m5 = fixture("m5").unwrap();
        let rows = sweep_theta(
            &m5,
            &parse_path("!q U p").unwrap(),
            &[0.1, 0.5, 0.6],
            &EngineConfig::with_boundary(BoundaryMode::StrictF),
        )
        .unwrap();
        assert_eq!(sweep_csv(&rows), "theta,verdict\n0.1,T\n0.5,?\n0.6,F\n");
        let doc =
            ResultDocument::from_sweep("!q U p", EngineKind::Qmc, BoundaryMode::StrictF, 0, &rows);
        assert_eq!(ResultDocument::from_json(&doc.to_json()).unwrap(), doc);
        assert!(doc.to_json().contains("\"strict-f\""));
        assert!(ResultDocument::from_json("{\"formula\": 3}").is_err());
    }
}

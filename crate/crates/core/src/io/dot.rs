use std::fmt::Write;

use crate::model::QDtmc;

/// Graphviz rendering of the state graph. Each node lists its labels; the
/// initial state is drawn with a double circle.
pub fn render_dot(m: &QDtmc) -> String {
    let mut out = String::from("digraph qdtmc {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in 0..m.num_states() {
        let labels: Vec<String> = m
            .aps()
            .iter()
            .zip(m.labels_of(s))
            .map(|(ap, l)| format!("{ap}={l}"))
            .collect();
        let shape = if s == m.init() {
            ", shape=doublecircle"
        } else {
            ""
        };
        writeln!(
            out,
            "  s{s} [label=\"s{s}\\n{}\"{shape}];",
            labels.join(" ")
        )
        .unwrap();
    }
    for (from, to, p) in m.transitions() {
        writeln!(out, "  s{from} -> s{to} [label=\"{p}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

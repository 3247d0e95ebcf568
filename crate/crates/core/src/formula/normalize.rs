use std::collections::BTreeSet;

use super::{BoundOp, ProbBound, StateFormula};

/// A formula in the shape the checker expects, plus the order in which its
/// probabilistic subformulas have to be evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedFormula {
    pub formula: StateFormula,
    /// Probabilistic subformulas, innermost first. Each entry is already
    /// normalized and appears exactly as in `formula`.
    pub prob_order: Vec<StateFormula>,
}

/// Rewrites `P<t [..]` to `!P>=t [..]` and pushes negations down through
/// `&`/`|` until they sit directly on an atom or a probabilistic operator.
/// Negated constants are folded.
pub fn normalize(f: &StateFormula) -> NormalizedFormula {
    let formula = push_negations(f, false);
    let mut prob_order = Vec::new();
    collect_probs(&formula, &mut prob_order);
    NormalizedFormula {
        formula,
        prob_order,
    }
}

fn push_negations(f: &StateFormula, negate: bool) -> StateFormula {
    match f {
        StateFormula::Const(c) => StateFormula::Const(if negate { c.not3() } else { *c }),
        StateFormula::Atom(_) => {
            if negate {
                StateFormula::not(f.clone())
            } else {
                f.clone()
            }
        }
        StateFormula::Not(g) => push_negations(g, !negate),
        StateFormula::And(a, b) => {
            let (a, b) = (push_negations(a, negate), push_negations(b, negate));
            if negate {
                StateFormula::or(a, b)
            } else {
                StateFormula::and(a, b)
            }
        }
        StateFormula::Or(a, b) => {
            let (a, b) = (push_negations(a, negate), push_negations(b, negate));
            if negate {
                StateFormula::and(a, b)
            } else {
                StateFormula::or(a, b)
            }
        }
        StateFormula::Prob(bound, path) => {
            let path = path.map_operands(|op| push_negations(op, false));
            let flip = bound.op == BoundOp::Lt;
            let node = StateFormula::prob(ProbBound::ge(bound.theta), path);
            if negate != flip {
                StateFormula::not(node)
            } else {
                node
            }
        }
    }
}

fn collect_probs(f: &StateFormula, out: &mut Vec<StateFormula>) {
    match f {
        StateFormula::Const(_) | StateFormula::Atom(_) => {}
        StateFormula::Not(g) => collect_probs(g, out),
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            collect_probs(a, out);
            collect_probs(b, out);
        }
        StateFormula::Prob(_, path) => {
            for op in path.operands() {
                collect_probs(op, out);
            }
            out.push(f.clone());
        }
    }
}

/// Atoms that occur directly under a negation, anywhere in the formula.
pub fn negated_atoms(f: &StateFormula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_negated(f, &mut out);
    out
}

fn collect_negated(f: &StateFormula, out: &mut BTreeSet<String>) {
    match f {
        StateFormula::Const(_) | StateFormula::Atom(_) => {}
        StateFormula::Not(g) => match g.as_ref() {
            StateFormula::Atom(a) => {
                out.insert(a.clone());
            }
            other => collect_negated(other, out),
        },
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            collect_negated(a, out);
            collect_negated(b, out);
        }
        StateFormula::Prob(_, path) => {
            for op in path.operands() {
                collect_negated(op, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, PathFormula as Pf, StateFormula as Sf};
    use crate::truth::Tri;

    fn norm(text: &str) -> StateFormula {
        normalize(&parse_formula(text).unwrap()).formula
    }

    #[test]
    fn lt_becomes_negated_ge() {
        assert_eq!(
            norm("P<0.3[X q]"),
            Sf::not(Sf::prob(ProbBound::ge(0.3), Pf::next(Sf::atom("q"))))
        );
        // double negation cancels
        assert_eq!(
            norm("!P<0.3[X q]"),
            Sf::prob(ProbBound::ge(0.3), Pf::next(Sf::atom("q")))
        );
    }

    #[test]
    fn de_morgan() {
        assert_eq!(
            norm("!(p & q)"),
            Sf::or(Sf::not(Sf::atom("p")), Sf::not(Sf::atom("q")))
        );
        assert_eq!(
            norm("!(p | !q)"),
            Sf::and(Sf::not(Sf::atom("p")), Sf::atom("q"))
        );
        assert_eq!(norm("!!p"), Sf::atom("p"));
        assert_eq!(norm("!unknown"), Sf::Const(Tri::U));
        assert_eq!(norm("!true"), Sf::Const(Tri::F));
    }

    #[test]
    fn negations_inside_paths_are_pushed() {
        assert_eq!(
            norm("P>=0.5[!(a | b) U c]"),
            Sf::prob(
                ProbBound::ge(0.5),
                Pf::until(
                    Sf::and(Sf::not(Sf::atom("a")), Sf::not(Sf::atom("b"))),
                    Sf::atom("c")
                )
            )
        );
    }

    #[test]
    fn nesting_order_is_innermost_first() {
        let n = normalize(&parse_formula("P>=0.6 [ P>=0.2 [ p U r ] U q ]").unwrap());
        assert_eq!(n.prob_order.len(), 2);
        assert_eq!(n.prob_order[0], parse_formula("P>=0.2 [ p U r ]").unwrap());
        assert_eq!(n.prob_order[1], n.formula);
    }

    #[test]
    fn negated_atom_collection() {
        let set = |text: &str| -> Vec<String> { negated_atoms(&norm(text)).into_iter().collect() };
        assert_eq!(set("P>=0.5[!p U q]"), vec!["p"]);
        assert!(set("P>=0.5[X q]").is_empty());
        assert_eq!(set("!p | (q & !q)"), vec!["p", "q"]);
        assert_eq!(set("P>=0.5[X P<0.2[!r U s]]"), vec!["r"]);
    }

    #[test]
    fn no_negation_above_connectives() {
        fn check(f: &StateFormula) {
            match f {
                StateFormula::Not(g) => assert!(
                    matches!(g.as_ref(), StateFormula::Atom(_) | StateFormula::Prob(..)),
                    "negation over {g}"
                ),
                StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                    check(a);
                    check(b);
                }
                StateFormula::Prob(b, path) => {
                    assert_eq!(b.op, BoundOp::Ge);
                    path.operands().into_iter().for_each(check);
                }
                _ => {}
            }
        }
        check(&norm(
            "!(P<0.2[X !(a & !b)] | !(c | P>=0.1[a U<=2 !unknown]))",
        ));
    }
}

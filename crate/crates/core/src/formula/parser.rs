//! Recursive-descent parser for the formula language.
//!
//! ```text
//! state  := "true" | "false" | "unknown" | IDENT | "!" state
//!         | state "&" state | state "|" state
//!         | "P" bound "[" path "]" | "(" state ")"
//! bound  := ">=" PROB | "<" PROB
//! path   := "X" state | state "U" state | state "U<=" INT state
//! ```
//!
//! `!` binds tightest, then `&`, then `|`. Both binary connectives are
//! left-associative.

use super::{BoundOp, PathFormula, ProbBound, StateFormula};
use crate::truth::Tri;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unexpected character {ch:?} at byte {offset}")]
    UnexpectedChar { offset: usize, ch: char },
    #[error("invalid number {text:?} at byte {offset}")]
    InvalidNumber { offset: usize, text: String },
    #[error("probability bound {value} at byte {offset} is outside [0, 1]")]
    ThetaOutOfRange { offset: usize, value: f64 },
    #[error(
        "unsupported bound \"P{op}\" at byte {offset}: only P>= and P< are supported \
         (see the \"Probability bounds\" section of the README)"
    )]
    UnsupportedBound { offset: usize, op: &'static str },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnexpectedChar { offset, .. }
            | ParseError::InvalidNumber { offset, .. }
            | ParseError::ThetaOutOfRange { offset, .. }
            | ParseError::UnsupportedBound { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    True,
    False,
    Unknown,
    Ident(String),
    Number(String),
    Bang,
    Amp,
    Pipe,
    Prob,
    Next,
    Until,
    Ge,
    Gt,
    Le,
    Lt,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::True => "\"true\"".into(),
            Tok::False => "\"false\"".into(),
            Tok::Unknown => "\"unknown\"".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Number(s) => format!("number {s}"),
            Tok::Bang => "\"!\"".into(),
            Tok::Amp => "\"&\"".into(),
            Tok::Pipe => "\"|\"".into(),
            Tok::Prob => "\"P\"".into(),
            Tok::Next => "\"X\"".into(),
            Tok::Until => "\"U\"".into(),
            Tok::Ge => "\">=\"".into(),
            Tok::Gt => "\">\"".into(),
            Tok::Le => "\"<=\"".into(),
            Tok::Lt => "\"<\"".into(),
            Tok::LBrack => "\"[\"".into(),
            Tok::RBrack => "\"]\"".into(),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'!' => {
                i += 1;
                Tok::Bang
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'|' => {
                i += 1;
                Tok::Pipe
            }
            b'[' => {
                i += 1;
                Tok::LBrack
            }
            b']' => {
                i += 1;
                Tok::RBrack
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'>' | b'<' => {
                let eq = bytes.get(i + 1) == Some(&b'=');
                i += if eq { 2 } else { 1 };
                match (c, eq) {
                    (b'>', true) => Tok::Ge,
                    (b'>', false) => Tok::Gt,
                    (_, true) => Tok::Le,
                    _ => Tok::Lt,
                }
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                Tok::Number(text[start..i].to_string())
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "unknown" => Tok::Unknown,
                    "P" => Tok::Prob,
                    "X" => Tok::Next,
                    "U" => Tok::Until,
                    word => Tok::Ident(word.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('\0');
                return Err(ParseError::UnexpectedChar { offset: start, ch });
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

const STATE_START: &[&str] = &[
    "\"true\"",
    "\"false\"",
    "\"unknown\"",
    "identifier",
    "\"!\"",
    "\"P\"",
    "\"(\"",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn state(&mut self) -> PResult<StateFormula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = StateFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<StateFormula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = StateFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<StateFormula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(StateFormula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<StateFormula> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(StateFormula::Const(Tri::T))
            }
            Tok::False => {
                self.bump();
                Ok(StateFormula::Const(Tri::F))
            }
            Tok::Unknown => {
                self.bump();
                Ok(StateFormula::Const(Tri::U))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(StateFormula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.state()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Prob => {
                self.bump();
                let bound = self.bound()?;
                self.expect(Tok::LBrack)?;
                let path = self.path()?;
                self.expect(Tok::RBrack)?;
                Ok(StateFormula::prob(bound, path))
            }
            _ => Err(self.error(STATE_START)),
        }
    }

    fn bound(&mut self) -> PResult<ProbBound> {
        let offset = self.offset();
        let op = match self.peek() {
            Tok::Ge => BoundOp::Ge,
            Tok::Lt => BoundOp::Lt,
            Tok::Gt => return Err(ParseError::UnsupportedBound { offset, op: ">" }),
            Tok::Le => return Err(ParseError::UnsupportedBound { offset, op: "<=" }),
            _ => return Err(self.error(&["\">=\"", "\"<\""])),
        };
        self.bump();
        let theta = self.probability()?;
        Ok(ProbBound { op, theta })
    }

    fn probability(&mut self) -> PResult<f64> {
        let offset = self.offset();
        let Tok::Number(text) = self.peek().clone() else {
            return Err(self.error(&["probability"]));
        };
        self.bump();
        let value: f64 = text.parse().map_err(|_| ParseError::InvalidNumber {
            offset,
            text: text.clone(),
        })?;
        if !(0.0..=1.0).contains(&value) {
            return Err(ParseError::ThetaOutOfRange { offset, value });
        }
        Ok(value)
    }

    fn step_bound(&mut self) -> PResult<u32> {
        let offset = self.offset();
        let Tok::Number(text) = self.peek().clone() else {
            return Err(self.error(&["step bound"]));
        };
        self.bump();
        text.parse()
            .map_err(|_| ParseError::InvalidNumber { offset, text })
    }

    fn path(&mut self) -> PResult<PathFormula> {
        if *self.peek() == Tok::Next {
            self.bump();
            return Ok(PathFormula::next(self.state()?));
        }
        let lhs = self.state()?;
        if *self.peek() != Tok::Until {
            return Err(self.error(&["\"U\"", "\"U<=\""]));
        }
        self.bump();
        if *self.peek() == Tok::Le {
            self.bump();
            let k = self.step_bound()?;
            let rhs = self.state()?;
            return Ok(PathFormula::bounded_until(lhs, rhs, k));
        }
        let rhs = self.state()?;
        Ok(PathFormula::until(lhs, rhs))
    }
}

fn parser(text: &str) -> PResult<Parser> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
    })
}

/// Parses a state formula such as `P>=0.4 [ !p U q ]`.
pub fn parse_formula(text: &str) -> Result<StateFormula, ParseError> {
    let mut p = parser(text)?;
    let f = p.state()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

/// Parses a bare path formula such as `!q U p` or `X r`.
pub fn parse_path(text: &str) -> Result<PathFormula, ParseError> {
    let mut p = parser(text)?;
    let f = p.path()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{BoundOp, PathFormula as Pf, StateFormula as Sf};

    fn atom(s: &str) -> Sf {
        Sf::atom(s)
    }

    #[test]
    fn until_with_negation() {
        let f = parse_formula("P>=0.4 [ !p U q ]").unwrap();
        assert_eq!(
            f,
            Sf::prob(ProbBound::ge(0.4), Pf::until(Sf::not(atom("p")), atom("q")))
        );
    }

    #[test]
    fn nested_prob_in_until() {
        let f = parse_formula("P>=0.3 [ p U P>=0.8 [ X r ] ]").unwrap();
        let inner = Sf::prob(ProbBound::ge(0.8), Pf::next(atom("r")));
        assert_eq!(f, Sf::prob(ProbBound::ge(0.3), Pf::until(atom("p"), inner)));
    }

    #[test]
    fn bounded_until_and_lt() {
        let f = parse_formula("P<0.25[a U<=3 b]").unwrap();
        match f {
            Sf::Prob(b, path) => {
                assert_eq!(b.op, BoundOp::Lt);
                assert_eq!(b.theta, 0.25);
                assert_eq!(*path, Pf::bounded_until(atom("a"), atom("b"), 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let f = parse_formula("!a & b | c & d").unwrap();
        let expected = Sf::or(
            Sf::and(Sf::not(atom("a")), atom("b")),
            Sf::and(atom("c"), atom("d")),
        );
        assert_eq!(f, expected);
        let g = parse_formula("a & b & c").unwrap();
        assert_eq!(g, Sf::and(Sf::and(atom("a"), atom("b")), atom("c")));
    }

    #[test]
    fn constants() {
        assert_eq!(parse_formula("unknown").unwrap(), Sf::Const(Tri::U));
        assert_eq!(parse_formula(" true ").unwrap(), Sf::Const(Tri::T));
        assert_eq!(parse_formula("(false)").unwrap(), Sf::Const(Tri::F));
    }

    #[test]
    fn theta_out_of_range() {
        let err = parse_formula("P>=1.5 [ X p ]").unwrap_err();
        assert!(
            matches!(err, ParseError::ThetaOutOfRange { offset: 3, .. }),
            "{err}"
        );
    }

    #[test]
    fn unsupported_bounds() {
        let err = parse_formula("P>0.5 [ X p ]").unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedBound { op: ">", .. }));
        let err = parse_formula("P<=0.5 [ X p ]").unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedBound { op: "<=", .. }));
        assert!(err.to_string().contains("unsupported bound"));
    }

    #[test]
    fn truncated_input_reports_offset() {
        let text = "P>=0.5 [ q U";
        let err = parse_formula(text).unwrap_err();
        match &err {
            ParseError::Syntax {
                offset,
                found,
                expected,
            } => {
                assert_eq!(*offset, text.len());
                assert_eq!(found, "end of input");
                assert!(expected.iter().any(|e| e == "identifier"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trailing_garbage() {
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("p $").is_err());
        assert!(parse_formula("P>=0.5 [ p ]").is_err());
    }

    #[test]
    fn bare_path() {
        assert_eq!(
            parse_path("!q U p").unwrap(),
            Pf::until(Sf::not(atom("q")), atom("p"))
        );
        assert_eq!(parse_path("X q").unwrap(), Pf::next(atom("q")));
    }
}

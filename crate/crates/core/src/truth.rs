//! Three-valued (Kleene) truth values.
//!
//! `Tri::U` stands for an unknown truth value and is written `?` in every
//! text format. `U` is accepted on input as an alias.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A three-valued truth value. There is no `Ord`: the information order
/// and the truth order differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    T,
    F,
    U,
}

impl Tri {
    /// All values in display order (T, ?, F).
    pub const ALL: [Tri; 3] = [Tri::T, Tri::U, Tri::F];

    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::T
        } else {
            Tri::F
        }
    }

    pub fn and3(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::F, _) | (_, Tri::F) => Tri::F,
            (Tri::T, Tri::T) => Tri::T,
            _ => Tri::U,
        }
    }

    pub fn or3(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::T, _) | (_, Tri::T) => Tri::T,
            (Tri::F, Tri::F) => Tri::F,
            _ => Tri::U,
        }
    }

    pub fn not3(self) -> Tri {
        match self {
            Tri::T => Tri::F,
            Tri::F => Tri::T,
            Tri::U => Tri::U,
        }
    }

    /// `Some(bool)` for a definite value, `None` for unknown.
    pub fn to_bool(self) -> Option<bool> {
        match self {
            Tri::T => Some(true),
            Tri::F => Some(false),
            Tri::U => None,
        }
    }

    pub fn is_unknown(self) -> bool {
        self == Tri::U
    }

    pub fn symbol(self) -> char {
        match self {
            Tri::T => 'T',
            Tri::F => 'F',
            Tri::U => '?',
        }
    }
}

impl std::ops::Not for Tri {
    type Output = Tri;

    fn not(self) -> Tri {
        self.not3()
    }
}

impl std::ops::BitAnd for Tri {
    type Output = Tri;

    fn bitand(self, rhs: Tri) -> Tri {
        self.and3(rhs)
    }
}

impl std::ops::BitOr for Tri {
    type Output = Tri;

    fn bitor(self, rhs: Tri) -> Tri {
        self.or3(rhs)
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Tri {
        Tri::from_bool(b)
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid truth value {0:?} (expected T, F, ? or U)")]
pub struct ParseTriError(pub String);

impl FromStr for Tri {
    type Err = ParseTriError;

    fn from_str(s: &str) -> Result<Tri, ParseTriError> {
        match s {
            "T" => Ok(Tri::T),
            "F" => Ok(Tri::F),
            "?" | "U" => Ok(Tri::U),
            other => Err(ParseTriError(other.to_string())),
        }
    }
}

impl Serialize for Tri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut buf = [0u8; 4];
        serializer.serialize_str(self.symbol().encode_utf8(&mut buf))
    }
}

impl<'de> Deserialize<'de> for Tri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Tri, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Tri::*;

    #[test]
    fn and_table() {
        // rows/columns in T, ?, F order
        let expected = [[T, U, F], [U, U, F], [F, F, F]];
        for (i, a) in Tri::ALL.iter().enumerate() {
            for (j, b) in Tri::ALL.iter().enumerate() {
                assert_eq!(a.and3(*b), expected[i][j], "{a} & {b}");
            }
        }
        assert_eq!(T.and3(U), U);
        assert_eq!(F.and3(U), F);
        assert_eq!(T.and3(T), T);
    }

    #[test]
    fn or_table() {
        let expected = [[T, T, T], [T, U, U], [T, U, F]];
        for (i, a) in Tri::ALL.iter().enumerate() {
            for (j, b) in Tri::ALL.iter().enumerate() {
                assert_eq!(a.or3(*b), expected[i][j], "{a} | {b}");
            }
        }
        assert_eq!(T.or3(U), T);
        assert_eq!(F.or3(U), U);
        assert_eq!(F.or3(F), F);
    }

    #[test]
    fn not_table() {
        assert_eq!(T.not3(), F);
        assert_eq!(F.not3(), T);
        assert_eq!(U.not3(), U);
        for a in Tri::ALL {
            assert_eq!(!!a, a);
        }
    }

    #[test]
    fn text_forms() {
        assert_eq!(U.to_string(), "?");
        assert_eq!("U".parse::<Tri>().unwrap(), U);
        assert_eq!("?".parse::<Tri>().unwrap(), U);
        assert!("x".parse::<Tri>().is_err());
        assert_eq!(serde_json::to_string(&U).unwrap(), "\"?\"");
        assert_eq!(serde_json::from_str::<Tri>("\"T\"").unwrap(), T);
    }
}

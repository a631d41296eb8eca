//! Lorenz words, their PSL(2,Z) matrices and Lorenz braids, knot diagrams,
//! and the Alexander polynomial computed two independent ways.

pub mod braid;
pub mod diagram;
pub mod ghys;
pub mod poly;
pub mod projection;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::Matrix2;

pub use braid::{alexander_from_braid, genus_positive_braid, lorenz_braid, Braid};
pub use diagram::{alexander_from_diagram, seifert_genus, Crossing, KnotDiagram};
pub use ghys::{ghys_word_check, GhysReport, KnotCertificate};
pub use poly::Poly;
pub use projection::{polyline_to_diagram, ProjectionConfig};

/// Longest word accepted; keeps the entries of M_w inside i128.
pub const MAX_WORD_LEN: usize = 160;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KnotError {
    #[error("empty word")]
    EmptyWord,
    #[error("invalid letter {0:?} (expected L or R)")]
    BadLetter(char),
    #[error("word longer than {MAX_WORD_LEN} letters")]
    TooLong,
    #[error("word {0} is a proper power")]
    NotPrimitive(String),
    #[error("closure has {0} components, not a knot")]
    NotAKnot(usize),
    #[error("generator sigma_{gen} out of range for {strands} strands")]
    BadGenerator { gen: usize, strands: usize },
    #[error("genus parity violation: c - n + 1 = {0} is odd")]
    Parity(i64),
    #[error("inconsistent PD code: {0}")]
    BadDiagram(String),
    #[error("degenerate curve: no generic projection in {0} tries")]
    Degenerate(usize),
    #[error("word {0} does not contain both letters")]
    NotMixed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::L => 'L',
            Letter::R => 'R',
        }
    }
}

/// Cyclic word over {L, R}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LorenzWord {
    letters: Vec<Letter>,
}

impl LorenzWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self, KnotError> {
        if letters.is_empty() {
            return Err(KnotError::EmptyWord);
        }
        if letters.len() > MAX_WORD_LEN {
            return Err(KnotError::TooLong);
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rotate(&self, k: usize) -> LorenzWord {
        let mut v = self.letters.clone();
        let n = v.len();
        v.rotate_left(k % n);
        LorenzWord { letters: v }
    }

    /// Lexicographically least rotation (L < R).
    pub fn normal_form(&self) -> LorenzWord {
        (0..self.len()).map(|k| self.rotate(k)).min_by(|a, b| a.letters.cmp(&b.letters)).unwrap()
    }

    pub fn cyclically_equal(&self, other: &LorenzWord) -> bool {
        self.len() == other.len() && self.normal_form() == other.normal_form()
    }

    /// Not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.len();
        (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| self.rotate(d) != *self)
    }

    pub fn is_mixed(&self) -> bool {
        self.letters.contains(&Letter::L) && self.letters.contains(&Letter::R)
    }

    /// L ↔ R.
    pub fn flipped(&self) -> LorenzWord {
        LorenzWord { letters: self.letters.iter().map(|l| l.flip()).collect() }
    }

    pub fn count(&self, l: Letter) -> usize {
        self.letters.iter().filter(|&&x| x == l).count()
    }
}

impl FromStr for LorenzWord {
    type Err = KnotError;
    fn from_str(s: &str) -> Result<Self, KnotError> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Letter::L),
                'R' | 'r' => Ok(Letter::R),
                other => Err(KnotError::BadLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        LorenzWord::new(letters)
    }
}

impl fmt::Display for LorenzWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Normal forms of all primitive words of the given length.
pub fn primitive_words(len: usize) -> Vec<LorenzWord> {
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << len) {
        let letters = (0..len)
            .map(|i| if bits >> (len - 1 - i) & 1 == 1 { Letter::R } else { Letter::L })
            .collect();
        let w = LorenzWord { letters };
        if w.is_primitive() && w.normal_form() == w {
            out.push(w);
        }
    }
    out
}

/// Integer matrix of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 { a: 1, b: 0, c: 0, d: 1 };
    pub const L: IntMatrix2 = IntMatrix2 { a: 1, b: 0, c: 1, d: 1 };
    pub const R: IntMatrix2 = IntMatrix2 { a: 1, b: 1, c: 0, d: 1 };

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn trace(&self) -> i128 {
        self.a + self.d
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn to_matrix2(&self) -> Matrix2 {
        Matrix2::new_unchecked(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}

/// Product over the letters of L = [[1,0],[1,1]] and R = [[1,1],[0,1]].
pub fn word_to_matrix(w: &LorenzWord) -> IntMatrix2 {
    w.letters().iter().fold(IntMatrix2::IDENTITY, |m, l| {
        m.mul(match l {
            Letter::L => &IntMatrix2::L,
            Letter::R => &IntMatrix2::R,
        })
    })
}

/// Alexander polynomial, normalized to lowest degree 0 and positive leading
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlexanderPoly {
    pub poly: Poly,
}

impl AlexanderPoly {
    pub fn new(p: &Poly) -> Self {
        Self { poly: p.normalized() }
    }

    pub fn unknot() -> Self {
        Self { poly: Poly::one() }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(&Poly::from_i64(c))
    }

    pub fn trefoil() -> Self {
        Self::from_i64(&[1, -1, 1])
    }

    pub fn is_palindromic(&self) -> bool {
        self.poly.is_palindromic()
    }

    /// Δ(1) = ±1.
    pub fn unit_at_one(&self) -> bool {
        let v = self.poly.eval_i64(1);
        v == 1.into() || v == (-1).into()
    }

    pub fn coefficients(&self) -> Vec<i64> {
        self.poly.to_i64_vec().expect("Alexander coefficients fit in i64")
    }

    /// Exponent of the lowest term in the symmetric (Conway) normalization.
    pub fn symmetric_offset(&self) -> i64 {
        -(self.poly.degree().unwrap_or(0) as i64 / 2)
    }
}

impl fmt::Display for AlexanderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

impl Serialize for AlexanderPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AlexanderPoly", 2)?;
        st.serialize_field("coefficients", &self.coefficients())?;
        st.serialize_field("degree_offset", &self.symmetric_offset())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> LorenzWord {
        s.parse().unwrap()
    }

    #[test]
    fn matrices() {
        let m = word_to_matrix(&w("LR"));
        assert_eq!(m, IntMatrix2 { a: 1, b: 1, c: 1, d: 2 });
        assert_eq!(m.trace(), 3);
        assert_eq!(word_to_matrix(&w("R")), IntMatrix2::R);
        assert_eq!(word_to_matrix(&w("R")).trace(), 2);
    }

    #[test]
    fn primitive_counts() {
        // necklace counts of primitive binary words: 2, 1, 2, 3, 6, 9
        let counts: Vec<usize> = (1..=6).map(|n| primitive_words(n).len()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
        let mixed: usize = (1..=6)
            .map(|n| primitive_words(n).iter().filter(|w| w.is_mixed()).count())
            .sum();
        assert_eq!(mixed, 21);
    }

    #[test]
    fn word_basics() {
        assert!(!w("LRLR").is_primitive());
        assert!(w("LRR").is_primitive());
        assert!(w("RLR").cyclically_equal(&w("LRR")));
        assert_eq!(w("RRL").normal_form().to_string(), "LRR");
        assert!("LXR".parse::<LorenzWord>().is_err());
        assert!("".parse::<LorenzWord>().is_err());
    }
}

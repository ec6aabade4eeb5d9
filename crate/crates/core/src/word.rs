//! Generator letters and words of the free algebra.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

/// A generator letter. The declaration order is the letter order used
/// everywhere: `L < L* < W < W* < X < Y < Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[repr(u8)]
pub enum Letter {
    /// `Lambda`
    L = 0,
    /// `Lambda*`
    Ls = 1,
    W = 2,
    Ws = 3,
    X = 4,
    Y = 5,
    Z = 6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    /// `{Lambda, Lambda*, W, W*}`
    Torus,
    /// `{X, Y, Z}`
    Surface,
}

impl Letter {
    pub const TORUS: [Letter; 4] = [Letter::L, Letter::Ls, Letter::W, Letter::Ws];
    pub const SURFACE: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn adjoint(self) -> Letter {
        match self {
            Letter::L => Letter::Ls,
            Letter::Ls => Letter::L,
            Letter::W => Letter::Ws,
            Letter::Ws => Letter::W,
            other => other,
        }
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            Letter::X | Letter::Y | Letter::Z => Alphabet::Surface,
            _ => Alphabet::Torus,
        }
    }

    /// Spelling in the expression grammar.
    pub fn symbol(self) -> &'static str {
        match self {
            Letter::L => "L",
            Letter::Ls => "L*",
            Letter::W => "W",
            Letter::Ws => "W*",
            Letter::X => "X",
            Letter::Y => "Y",
            Letter::Z => "Z",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A word in the generators; the empty word is the unit.
///
/// Words are totally ordered by length, then lexicographically in the letter
/// order. This is the storage order of polynomials, not the rewriting order
/// (see [`crate::rewrite::order_compare`]).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reverse the word and star each letter.
    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    /// The alphabet of the letters, `None` for the unit word, `Err` when mixed.
    pub fn alphabet(&self) -> Result<Option<Alphabet>, (Alphabet, Alphabet)> {
        let mut found: Option<Alphabet> = None;
        for l in &self.0 {
            let a = l.alphabet();
            match found {
                None => found = Some(a),
                Some(b) if b != a => return Err((b, a)),
                _ => {}
            }
        }
        Ok(found)
    }

    /// Number of occurrences of each letter, indexed by `Letter as usize`.
    pub fn letter_counts(&self) -> [usize; 7] {
        let mut c = [0; 7];
        for l in &self.0 {
            c[*l as usize] += 1;
        }
        c
    }

    /// Leftmost occurrence of `pattern` as a contiguous subword.
    pub fn find(&self, pattern: &[Letter]) -> Option<usize> {
        if pattern.is_empty() || pattern.len() > self.0.len() {
            return None;
        }
        self.0.windows(pattern.len()).position(|w| w == pattern)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// `Lambda^k` for `k >= 0`, `(Lambda*)^{-k}` for `k < 0`.
    pub fn lambda_power(k: i64) -> Word {
        let l = if k >= 0 { Letter::L } else { Letter::Ls };
        Word(vec![l; k.unsigned_abs() as usize])
    }

    pub fn power(l: Letter, n: usize) -> Word {
        Word(vec![l; n])
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl<const K: usize> From<[Letter; K]> for Word {
    fn from(v: [Letter; K]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Canonical spelling: runs of equal letters collapse to powers, runs are
/// separated by spaces, the unit word is `I`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let run = j - i;
            if run == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

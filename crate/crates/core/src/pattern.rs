//! Orientation patterns for cycles.
//!
//! A pattern of length `k` prescribes, position by position, whether the arc
//! between consecutive cycle vertices points forward or backward. Two
//! patterns are equivalent when they are related by a cyclic rotation and/or
//! a reflection (reverse the order *and* flip every arrow).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Longest pattern accepted by the parser and constructors.
pub const MAX_PATTERN_LEN: usize = 64;

/// Direction of an arc relative to the traversal order of a cycle.
///
/// `Forward` sorts before `Backward`; canonical forms rely on this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Dir::Forward => '>',
            Dir::Backward => '<',
        }
    }

    pub fn from_glyph(c: char) -> Option<Dir> {
        match c {
            '>' => Some(Dir::Forward),
            '<' => Some(Dir::Backward),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("unexpected glyph at position {0} (expected '>' or '<')")]
    BadGlyph(usize),
    #[error("pattern length {0} exceeds the maximum of {MAX_PATTERN_LEN}")]
    TooLong(usize),
}

/// Classification of a pattern up to equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternClass {
    Trivial,
    Alternating,
    NonAlternating,
    NonPrimitive,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PatternClass::Trivial => "trivial",
            PatternClass::Alternating => "alternating",
            PatternClass::NonAlternating => "non-alternating",
            PatternClass::NonPrimitive => "non-primitive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pattern {
    dirs: Vec<Dir>,
}

impl Pattern {
    pub fn new(dirs: Vec<Dir>) -> Result<Pattern, PatternError> {
        if dirs.is_empty() {
            return Err(PatternError::EmptyPattern);
        }
        if dirs.len() > MAX_PATTERN_LEN {
            return Err(PatternError::TooLong(dirs.len()));
        }
        Ok(Pattern { dirs })
    }

    /// The alternating pattern `(→,←)`.
    pub fn alternating() -> Pattern {
        Pattern {
            dirs: vec![Dir::Forward, Dir::Backward],
        }
    }

    /// The trivial pattern `(→)`.
    pub fn trivial() -> Pattern {
        Pattern {
            dirs: vec![Dir::Forward],
        }
    }

    /// Pattern with `copies` consecutive copies of `self`.
    pub fn repeat(&self, copies: usize) -> Result<Pattern, PatternError> {
        Pattern::new(self.dirs.repeat(copies.max(1)))
    }

    /// Builds the pattern whose bit `i` of `bits` gives entry `i` (1 = Backward).
    pub fn from_bits(bits: u64, len: usize) -> Result<Pattern, PatternError> {
        let dirs = (0..len)
            .map(|i| if bits >> i & 1 == 1 { Dir::Backward } else { Dir::Forward })
            .collect();
        Pattern::new(dirs)
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    /// Entry at `pos` with the index taken modulo the length.
    pub fn at(&self, pos: usize) -> Dir {
        self.dirs[pos % self.dirs.len()]
    }

    pub fn rotated(&self, by: usize) -> Pattern {
        let k = self.dirs.len();
        Pattern {
            dirs: (0..k).map(|i| self.dirs[(i + by) % k]).collect(),
        }
    }

    /// Reverse the order of the entries and flip every arrow.
    pub fn reflected(&self) -> Pattern {
        Pattern {
            dirs: self.dirs.iter().rev().map(|d| d.flip()).collect(),
        }
    }

    pub fn canonical_form(&self) -> Pattern {
        let k = self.dirs.len();
        let reflected = self.reflected();
        let mut best = self.clone();
        for base in [self, &reflected] {
            for r in 0..k {
                let cand = base.rotated(r);
                if cand < best {
                    best = cand;
                }
            }
        }
        best
    }

    pub fn is_primitive(&self) -> bool {
        let k = self.dirs.len();
        (1..k)
            .filter(|d| k % d == 0)
            .all(|d| (d..k).any(|i| self.dirs[i] != self.dirs[i % d]))
    }

    pub fn is_equivalent(&self, other: &Pattern) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    pub fn classify(&self) -> PatternClass {
        if !self.is_primitive() {
            return PatternClass::NonPrimitive;
        }
        match self.len() {
            1 => PatternClass::Trivial,
            2 => PatternClass::Alternating,
            _ => PatternClass::NonAlternating,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.dirs {
            write!(f, "{}", d.glyph())?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(text: &str) -> Result<Pattern, PatternError> {
        parse_pattern(text)
    }
}

impl TryFrom<String> for Pattern {
    type Error = PatternError;

    fn try_from(s: String) -> Result<Pattern, PatternError> {
        parse_pattern(&s)
    }
}

impl From<Pattern> for String {
    fn from(p: Pattern) -> String {
        p.to_string()
    }
}

/// Parses `'>'`/`'<'` glyphs into a pattern.
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    if text.is_empty() {
        return Err(PatternError::EmptyPattern);
    }
    let dirs = text
        .chars()
        .enumerate()
        .map(|(i, c)| Dir::from_glyph(c).ok_or(PatternError::BadGlyph(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Pattern::new(dirs)
}

/// Renders an orientation sequence with the pattern glyphs.
pub fn orientation_string(dirs: &[Dir]) -> String {
    dirs.iter().map(|d| d.glyph()).collect()
}

/// True iff `k | n` and `orientations[i] == p[i mod k]` for every position.
pub fn follows(orientations: &[Dir], p: &Pattern) -> bool {
    follows_from(orientations, p, 0)
}

/// Like [`follows`], with position `i` compared against `p[(i + offset) mod k]`.
pub fn follows_from(orientations: &[Dir], p: &Pattern, offset: usize) -> bool {
    let n = orientations.len();
    n >= 1
        && n % p.len() == 0
        && orientations
            .iter()
            .enumerate()
            .all(|(i, &d)| d == p.at(i + offset))
}

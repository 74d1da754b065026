//! Planar pure braids as crossing-slot sequences, and the conversion
//! between pure braids on `n` strands and spherical diagrams over the
//! planar presentation at base word `x1...xn`.
//!
//! A braid word records, top to bottom, which adjacent pair of positions
//! crosses: slot `s` crosses the strands currently at positions `s` and
//! `s + 1` (1-based). Crossing-by-crossing replacement with a commutation
//! cell translates braids to diagrams and back.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::presentation::{Cell, Direction, Presentation, Word};

/// A planar braid word: strand count plus crossing slots in `[1, n-1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BraidWord {
    n: usize,
    slots: Vec<usize>,
}

impl BraidWord {
    pub fn new(n: usize, slots: Vec<usize>) -> Result<Self> {
        assert!(n >= 1, "braids need at least one strand");
        for &s in &slots {
            if s == 0 || s >= n {
                return Err(Error::SlotOutOfRange { slot: s, n });
            }
        }
        Ok(BraidWord { n, slots })
    }

    pub fn identity(n: usize) -> Self {
        BraidWord::new(n, Vec::new()).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// The endpoint permutation induced by composing the crossings.
    pub fn permutation(&self) -> StrandPermutation {
        // positions[p] = strand currently at position p (0-based)
        let mut positions: Vec<usize> = (0..self.n).collect();
        for &s in &self.slots {
            positions.swap(s - 1, s);
        }
        // strand at final position q started at positions[q]
        let mut image = vec![0; self.n];
        for (end, &start) in positions.iter().enumerate() {
            image[start] = end;
        }
        StrandPermutation { image }
    }

    /// True iff every strand ends where it started.
    pub fn is_pure(&self) -> bool {
        self.permutation().is_identity()
    }

    fn require_pure(&self) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            Err(Error::NotPure)
        }
    }

    fn require_same_n(&self, other: &BraidWord) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::StrandCountMismatch { left: self.n, right: other.n })
        }
    }

    /// Concatenates crossing sequences (stacking `self` on top of `other`).
    pub fn mul(&self, other: &BraidWord) -> Result<BraidWord> {
        self.require_same_n(other)?;
        self.require_pure()?;
        other.require_pure()?;
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        Ok(BraidWord { n: self.n, slots })
    }

    /// Reverses the crossing sequence; for a pure braid this is the inverse.
    /// Purity is preserved: the reversal of a pure word is pure.
    pub fn inverse(&self) -> BraidWord {
        let slots = self.slots.iter().rev().copied().collect();
        BraidWord { n: self.n, slots }
    }

    /// Replaces each crossing with a commutation cell: with letters `x_a`,
    /// `x_b` at positions `s`, `s + 1` of the running word, the cell sits at
    /// offset `s - 1`, uses the relation for the pair `{a, b}`, and points
    /// Forward exactly when `a < b`. Defined on pure braids; the result is
    /// a spherical diagram on `x1...xn`.
    pub fn to_diagram(&self) -> Result<Diagram> {
        self.require_pure()?;
        let presentation = Presentation::planar(self.n);
        let rel_index: HashMap<(usize, usize), usize> = presentation
            .relations()
            .iter()
            .map(|r| {
                let l = r.lhs().letters();
                ((l[0].index(), l[1].index()), r.index())
            })
            .collect();
        let mut word: Vec<usize> = (0..self.n).collect();
        let mut cells = Vec::with_capacity(self.slots.len());
        for &s in &self.slots {
            let (a, b) = (word[s - 1], word[s]);
            let key = (a.min(b), a.max(b));
            let direction = if a < b { Direction::Forward } else { Direction::Backward };
            cells.push(Cell::new(s - 1, rel_index[&key], direction));
            word.swap(s - 1, s);
        }
        let top = Word::from_indices(&(0..self.n).collect::<Vec<_>>())?;
        let d = Diagram::new(presentation, top, cells)?;
        debug_assert_eq!(d.bottom(), d.top());
        Ok(d)
    }

    /// Equality in the planar pure braid group, decided through diagrams.
    pub fn equal(&self, other: &BraidWord) -> Result<bool> {
        self.require_same_n(other)?;
        self.to_diagram()?.equal(&other.to_diagram()?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("braid serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Inverse of [`BraidWord::to_diagram`]: reads slot `offset + 1` off each
/// cell. The diagram must be spherical on `x1...xn` over the planar
/// presentation.
pub fn diagram_to_braid(d: &Diagram) -> Result<BraidWord> {
    let n = d.presentation().alphabet_size();
    if *d.presentation() != Presentation::planar(n) {
        return Err(Error::PresentationMismatch);
    }
    let base = Word::from_indices(&(0..n).collect::<Vec<_>>())?;
    if d.top() != &base || d.bottom() != &base {
        return Err(Error::WrongBaseWord);
    }
    let slots = d.cells().iter().map(|c| c.offset + 1).collect();
    Ok(BraidWord { n, slots })
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        for s in &self.slots {
            write!(f, " s{s}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Parses the text form `n=<N> s<k> s<k> ...`, e.g. `n=3 s1 s1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let head = tokens.next().ok_or_else(|| Error::Parse("empty braid text".into()))?;
        let n: usize = head
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected n=<N>, got '{head}'")))?;
        if n == 0 {
            return Err(Error::Parse("strand count must be at least 1".into()));
        }
        let mut slots = Vec::new();
        for tok in tokens {
            let slot: usize = tok
                .strip_prefix('s')
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse(format!("expected s<k>, got '{tok}'")))?;
            slots.push(slot);
        }
        BraidWord::new(n, slots)
    }
}

#[derive(Serialize, Deserialize)]
struct BraidRepr {
    n: usize,
    slots: Vec<usize>,
}

impl Serialize for BraidWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BraidRepr { n: self.n, slots: self.slots.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BraidRepr::deserialize(deserializer)?;
        if repr.n == 0 {
            return Err(D::Error::custom("strand count must be at least 1"));
        }
        BraidWord::new(repr.n, repr.slots).map_err(D::Error::custom)
    }
}

/// The endpoint permutation of a braid: `image[p]` is the 0-based end
/// position of the strand starting at position `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StrandPermutation {
    image: Vec<usize>,
}

impl StrandPermutation {
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }
}

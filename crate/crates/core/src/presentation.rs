//! Semigroup presentations, positive words and single-step rewriting.
//!
//! A presentation is a finite alphabet together with equalities between
//! non-empty positive words. Applying one relation at one offset is the
//! elementary move everything else in this crate is built from.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A letter of the alphabet, stored as a 0-based index. Displayed 1-based
/// as `x1`, `x2`, ... to match the usual generator notation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(usize);

impl Letter {
    pub fn new(index: usize) -> Self {
        Letter(index)
    }

    pub fn index(self) -> usize {
        self.0
    }

    /// 1-based number used in display and JSON.
    pub fn number(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.number())
    }
}

/// A non-empty positive word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(letters))
    }

    /// Builds a word from 0-based letter indices.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        Word::new(indices.iter().copied().map(Letter::new).collect())
    }

    /// Builds a word from 1-based letter numbers (the JSON convention).
    pub fn from_numbers(numbers: &[usize]) -> Result<Self> {
        let mut letters = Vec::with_capacity(numbers.len());
        for &n in numbers {
            if n == 0 {
                return Err(Error::Parse("letter numbers are 1-based".into()));
            }
            letters.push(Letter::new(n - 1));
        }
        Word::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: words are non-empty
    }

    pub(crate) fn matches_at(&self, offset: usize, pattern: &Word) -> bool {
        offset + pattern.len() <= self.len() && self.0[offset..offset + pattern.len()] == pattern.0
    }

    pub(crate) fn splice(&self, offset: usize, removed: usize, insert: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() - removed + insert.len());
        letters.extend_from_slice(&self.0[..offset]);
        letters.extend_from_slice(&insert.0);
        letters.extend_from_slice(&self.0[offset + removed..]);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts letters written `x<k>` separated by nothing or dots:
    /// `x1.x2.x3` and `x1x2x3` both parse.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut chars = s.trim().chars().peekable();
        while let Some(c) = chars.next() {
            if c == '.' {
                continue;
            }
            if c != 'x' {
                return Err(Error::Parse(format!("expected 'x', found '{c}' in word")));
            }
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let n: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("missing letter number after 'x' in '{s}'")))?;
            if n == 0 {
                return Err(Error::Parse("letter numbers are 1-based".into()));
            }
            letters.push(Letter::new(n - 1));
        }
        Word::new(letters)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|l| l.number()))
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let numbers = Vec::<usize>::deserialize(deserializer)?;
        Word::from_numbers(&numbers).map_err(D::Error::custom)
    }
}

/// Orientation of a relation application: `Forward` rewrites lhs -> rhs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Forward => write!(f, "F"),
            Direction::Backward => write!(f, "B"),
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(match self {
            Direction::Forward => "F",
            Direction::Backward => "B",
        })
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(deserializer)?.as_str() {
            "F" => Ok(Direction::Forward),
            "B" => Ok(Direction::Backward),
            other => Err(D::Error::custom(format!("direction must be F or B, got {other:?}"))),
        }
    }
}

/// One application site: relation `relation` applied at `offset` in the
/// given direction. Ordered by (offset, relation, direction).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Cell {
    pub offset: usize,
    #[serde(rename = "rel")]
    pub relation: usize,
    #[serde(rename = "dir")]
    pub direction: Direction,
}

impl Cell {
    pub fn new(offset: usize, relation: usize, direction: Direction) -> Self {
        Cell { offset, relation, direction }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, r{}, {})", self.offset, self.relation, self.direction)
    }
}

/// An equality between two non-empty positive words, stored once with a
/// fixed orientation. `index` is its position in the owning presentation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    lhs: Word,
    rhs: Word,
    index: usize,
}

impl Relation {
    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &Word {
        &self.rhs
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Side consumed when applying in `direction`.
    pub fn source(&self, direction: Direction) -> &Word {
        match direction {
            Direction::Forward => &self.lhs,
            Direction::Backward => &self.rhs,
        }
    }

    /// Side produced when applying in `direction`.
    pub fn target(&self, direction: Direction) -> &Word {
        match direction {
            Direction::Forward => &self.rhs,
            Direction::Backward => &self.lhs,
        }
    }

    pub fn is_length_preserving(&self) -> bool {
        self.lhs.len() == self.rhs.len()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

/// A finite semigroup presentation: alphabet size plus oriented relations.
///
/// Equality ignores the optional display names; two presentations are the
/// same exactly when alphabet and relation lists agree.
#[derive(Clone, Debug)]
pub struct Presentation {
    alphabet_size: usize,
    relations: Vec<Relation>,
    letter_names: Option<Vec<String>>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet_size == other.alphabet_size && self.relations == other.relations
    }
}

impl Eq for Presentation {}

impl Presentation {
    /// Validates and builds a presentation. Relations keep their input
    /// order and orientation; `(l, r)` and `(r, l)` count as duplicates.
    pub fn new(alphabet_size: usize, relations: Vec<(Word, Word)>) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut stored: Vec<Relation> = Vec::with_capacity(relations.len());
        for (index, (lhs, rhs)) in relations.into_iter().enumerate() {
            for l in lhs.letters().iter().chain(rhs.letters()) {
                if l.index() >= alphabet_size {
                    return Err(Error::LetterOutOfRange {
                        letter: l.number(),
                        alphabet_size,
                    });
                }
            }
            if lhs == rhs {
                return Err(Error::TrivialRelation { index });
            }
            if stored
                .iter()
                .any(|r| (r.lhs == lhs && r.rhs == rhs) || (r.lhs == rhs && r.rhs == lhs))
            {
                return Err(Error::DuplicateRelation { index });
            }
            stored.push(Relation { lhs, rhs, index });
        }
        Ok(Presentation {
            alphabet_size,
            relations: stored,
            letter_names: None,
        })
    }

    /// The presentation with `n` generators in which any two distinct
    /// generators commute. Relations are `(x_i x_j, x_j x_i)` for
    /// `i < j`, ordered lexicographically by `(i, j)`.
    pub fn planar(n: usize) -> Self {
        assert!(n >= 1, "planar presentation needs at least one generator");
        let mut relations = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = Word::from_indices(&[i, j]).unwrap();
                let rhs = Word::from_indices(&[j, i]).unwrap();
                relations.push((lhs, rhs));
            }
        }
        Presentation::new(n, relations).unwrap()
    }

    pub fn with_letter_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.alphabet_size);
        self.letter_names = Some(names);
        self
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, index: usize) -> Result<&Relation> {
        self.relations.get(index).ok_or(Error::RelationOutOfRange {
            relation: index,
            count: self.relations.len(),
        })
    }

    /// True when every relation preserves word length.
    pub fn is_length_preserving(&self) -> bool {
        self.relations.iter().all(Relation::is_length_preserving)
    }

    /// Checks that all letters of `word` lie in the alphabet.
    pub fn validate_word(&self, word: &Word) -> Result<()> {
        for l in word.letters() {
            if l.index() >= self.alphabet_size {
                return Err(Error::LetterOutOfRange {
                    letter: l.number(),
                    alphabet_size: self.alphabet_size,
                });
            }
        }
        Ok(())
    }

    /// Applies one relation at one offset, replacing the source side by
    /// the target side and leaving everything else unchanged.
    pub fn apply_relation(
        &self,
        word: &Word,
        relation: usize,
        direction: Direction,
        offset: usize,
    ) -> Result<Word> {
        let rel = self.relation(relation)?;
        let source = rel.source(direction);
        if offset + source.len() > word.len() {
            return Err(Error::OffsetOutOfRange {
                offset,
                needed: source.len(),
                len: word.len(),
            });
        }
        if !word.matches_at(offset, source) {
            return Err(Error::SubwordMismatch { relation, offset });
        }
        Ok(word.splice(offset, source.len(), rel.target(direction)))
    }

    pub fn apply_cell(&self, word: &Word, cell: Cell) -> Result<Word> {
        self.apply_relation(word, cell.relation, cell.direction, cell.offset)
    }

    /// All cells applicable to `word`, sorted by
    /// (offset, relation, direction) with Forward before Backward.
    pub fn applicable_cells(&self, word: &Word) -> Vec<Cell> {
        let mut cells = Vec::new();
        for offset in 0..word.len() {
            for rel in &self.relations {
                for direction in [Direction::Forward, Direction::Backward] {
                    if word.matches_at(offset, rel.source(direction)) {
                        cells.push(Cell::new(offset, rel.index, direction));
                    }
                }
            }
        }
        cells
    }

    /// Formats a word using this presentation's display names when set.
    pub fn format_word(&self, word: &Word) -> String {
        match &self.letter_names {
            Some(names) => word
                .letters()
                .iter()
                .map(|l| names[l.index()].clone())
                .collect::<Vec<_>>()
                .join("."),
            None => word.to_string(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<x1..x{} | ", self.alphabet_size)?;
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationRepr {
    alphabet_size: usize,
    relations: Vec<(Word, Word)>,
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationRepr {
            alphabet_size: self.alphabet_size,
            relations: self
                .relations
                .iter()
                .map(|r| (r.lhs.clone(), r.rhs.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PresentationRepr::deserialize(deserializer)?;
        Presentation::new(repr.alphabet_size, repr.relations).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn make_presentation_minimal() {
        let p = Presentation::new(2, vec![(w("x1x2"), w("x2x1"))]).unwrap();
        assert_eq!(p.relations().len(), 1);
    }

    #[test]
    fn make_presentation_rejects_empty_word() {
        assert_eq!("".parse::<Word>(), Err(Error::EmptyWord));
        assert_eq!(Word::new(vec![]), Err(Error::EmptyWord));
    }

    #[test]
    fn make_presentation_length_changing_ok() {
        let p = Presentation::new(1, vec![(w("x1x1"), w("x1"))]).unwrap();
        assert!(!p.is_length_preserving());
    }

    #[test]
    fn make_presentation_rejects_bad_input() {
        let out_of_range = Presentation::new(2, vec![(w("x1x3"), w("x3x1"))]);
        assert_eq!(
            out_of_range,
            Err(Error::LetterOutOfRange { letter: 3, alphabet_size: 2 })
        );
        let trivial = Presentation::new(2, vec![(w("x1x2"), w("x1x2"))]);
        assert_eq!(trivial, Err(Error::TrivialRelation { index: 0 }));
        let dup = Presentation::new(2, vec![(w("x1x2"), w("x2x1")), (w("x2x1"), w("x1x2"))]);
        assert_eq!(dup, Err(Error::DuplicateRelation { index: 1 }));
        assert_eq!(Presentation::new(0, vec![]), Err(Error::EmptyAlphabet));
    }

    #[test]
    fn planar_relations() {
        let p3 = Presentation::planar(3);
        let rels: Vec<String> = p3.relations().iter().map(|r| r.to_string()).collect();
        assert_eq!(rels, ["x1.x2=x2.x1", "x1.x3=x3.x1", "x2.x3=x3.x2"]);
        assert_eq!(Presentation::planar(1).relations().len(), 0);
        // C(4,2) relations for four generators, counted by enumeration.
        let pairs = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).count();
        assert_eq!(Presentation::planar(4).relations().len(), pairs);
        assert_eq!(pairs, 6);
    }

    #[test]
    fn apply_relation_basic() {
        let p = Presentation::planar(3);
        let word = w("x1x2x3");
        let fwd = p.apply_relation(&word, 0, Direction::Forward, 0).unwrap();
        assert_eq!(fwd, w("x2x1x3"));
        let back = p.apply_relation(&fwd, 0, Direction::Backward, 0).unwrap();
        assert_eq!(back, word);
        assert_eq!(
            p.apply_relation(&word, 0, Direction::Forward, 1),
            Err(Error::SubwordMismatch { relation: 0, offset: 1 })
        );
        assert_eq!(
            p.apply_relation(&word, 0, Direction::Forward, 2),
            Err(Error::OffsetOutOfRange { offset: 2, needed: 2, len: 3 })
        );
    }

    #[test]
    fn applicable_cells_examples() {
        let p3 = Presentation::planar(3);
        let cells = p3.applicable_cells(&w("x1x2x3"));
        assert_eq!(
            cells,
            vec![
                Cell::new(0, 0, Direction::Forward),
                Cell::new(1, 2, Direction::Forward),
            ]
        );
        let cells = p3.applicable_cells(&w("x2x1x3"));
        assert_eq!(
            cells,
            vec![
                Cell::new(0, 0, Direction::Backward),
                Cell::new(1, 1, Direction::Forward),
            ]
        );
        assert_eq!(Presentation::planar(1).applicable_cells(&w("x1")), vec![]);
    }

    #[test]
    fn applicable_cells_sorted_unique() {
        let p = Presentation::new(1, vec![(w("x1x1"), w("x1"))]).unwrap();
        let cells = p.applicable_cells(&w("x1x1x1"));
        let mut sorted = cells.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(cells, sorted);
        // Both directions can apply at the same spot of a length-changing relation.
        assert!(cells.contains(&Cell::new(0, 0, Direction::Forward)));
        assert!(cells.contains(&Cell::new(0, 0, Direction::Backward)));
    }

    #[test]
    fn word_text_roundtrip() {
        assert_eq!(w("x1.x2.x3"), w("x1x2x3"));
        assert_eq!(w("x1x2x3").to_string(), "x1.x2.x3");
        assert_eq!(w("x12").letters()[0].index(), 11);
        assert!("y1".parse::<Word>().is_err());
        assert!("x0".parse::<Word>().is_err());
    }

    #[test]
    fn presentation_json_roundtrip() {
        let p = Presentation::planar(3);
        let json = p.to_json_string();
        assert_eq!(
            json,
            r#"{"alphabet_size":3,"relations":[[[1,2],[2,1]],[[1,3],[3,1]],[[2,3],[3,2]]]}"#
        );
        assert_eq!(Presentation::from_json_str(&json).unwrap(), p);
    }

    #[test]
    fn format_word_with_names() {
        let p = Presentation::planar(2).with_letter_names(vec!["a".into(), "b".into()]);
        assert_eq!(p.format_word(&w("x1x2")), "a.b");
        assert_eq!(Presentation::planar(2).format_word(&w("x1x2")), "x1.x2");
    }
}

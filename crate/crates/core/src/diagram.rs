//! Semigroup diagrams encoded as cell sequences.
//!
//! A diagram is a top word plus an ordered sequence of cells, each cell one
//! relation application read top to bottom. Wires and the frame are implicit:
//! a valid cell chain determines the picture up to isotopy once independent
//! adjacent cells are allowed to commute. Dipole deletion plus the leftmost
//! commutation normal form give a canonical representative per equivalence
//! class, which decides equality in the diagram group.

use std::fmt;
use std::ops::Deref;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::presentation::{Cell, Direction, Presentation, Word};

/// A `(top, bottom)`-diagram over a presentation.
#[derive(Clone, Debug)]
pub struct Diagram {
    presentation: Presentation,
    top: Word,
    bottom: Word,
    cells: Vec<Cell>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation && self.top == other.top && self.cells == other.cells
    }
}

impl Eq for Diagram {}

impl Diagram {
    /// Validates the cell chain: starting from `top`, every cell must apply
    /// to the running word. Fails with `ChainBreak` at the first cell that
    /// does not, carrying the running word at that point.
    pub fn new(presentation: Presentation, top: Word, cells: Vec<Cell>) -> Result<Self> {
        presentation.validate_word(&top)?;
        let mut word = top.clone();
        for (index, cell) in cells.iter().enumerate() {
            word = presentation
                .apply_cell(&word, *cell)
                .map_err(|_| Error::ChainBreak { index, word: word.clone() })?;
        }
        Ok(Diagram { presentation, top, bottom: word, cells })
    }

    /// The diagram with no cells on `top`.
    pub fn identity(presentation: Presentation, top: Word) -> Result<Self> {
        Diagram::new(presentation, top, Vec::new())
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn top(&self) -> &Word {
        &self.top
    }

    pub fn bottom(&self) -> &Word {
        &self.bottom
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_identity(&self) -> bool {
        self.cells.is_empty()
    }

    /// All running words from top to bottom, `cells.len() + 1` of them.
    pub fn words(&self) -> Vec<Word> {
        let mut words = Vec::with_capacity(self.cells.len() + 1);
        let mut word = self.top.clone();
        words.push(word.clone());
        for cell in &self.cells {
            word = self.presentation.apply_cell(&word, *cell).expect("chain is valid");
            words.push(word.clone());
        }
        words
    }

    /// Stacks `self` on top of `other`.
    pub fn compose(&self, other: &Diagram) -> Result<Diagram> {
        if self.presentation != other.presentation {
            return Err(Error::PresentationMismatch);
        }
        if self.bottom != other.top {
            return Err(Error::BoundaryMismatch);
        }
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        Ok(Diagram {
            presentation: self.presentation.clone(),
            top: self.top.clone(),
            bottom: other.bottom.clone(),
            cells,
        })
    }

    /// The vertical mirror: cells in reverse order with directions flipped.
    /// Each reversed cell keeps the offset its original had in the forward
    /// pass, so it undoes exactly that application.
    pub fn invert(&self) -> Diagram {
        let cells = self
            .cells
            .iter()
            .rev()
            .map(|c| Cell::new(c.offset, c.relation, c.direction.flip()))
            .collect();
        Diagram {
            presentation: self.presentation.clone(),
            top: self.bottom.clone(),
            bottom: self.top.clone(),
            cells,
        }
    }

    fn source_target_len(&self, cell: Cell) -> (usize, usize) {
        let rel = self.presentation.relation(cell.relation).expect("valid relation index");
        (rel.source(cell.direction).len(), rel.target(cell.direction).len())
    }

    /// Swaps adjacent independent cells `(a, b)` into `(b', a')`, adjusting
    /// offsets so both orders produce the same bottom word. `a` writes
    /// `[a.offset, a.offset + |target_a|)` into the intermediate word and
    /// `b` consumes `[b.offset, b.offset + |source_b|)` there; the pair is
    /// independent exactly when those intervals are disjoint.
    fn swap_pair(&self, a: Cell, b: Cell) -> Option<(Cell, Cell)> {
        let (a_src, a_tgt) = self.source_target_len(a);
        let (b_src, b_tgt) = self.source_target_len(b);
        if b.offset + b_src <= a.offset {
            // b lies strictly left: a's offset shifts by |target_b| - |source_b|
            let shifted = (a.offset as isize + b_tgt as isize - b_src as isize) as usize;
            Some((b, Cell::new(shifted, a.relation, a.direction)))
        } else if a.offset + a_tgt <= b.offset {
            // b lies strictly right: b's offset shifts by |source_a| - |target_a|
            let shifted = (b.offset as isize + a_src as isize - a_tgt as isize) as usize;
            Some((Cell::new(shifted, b.relation, b.direction), a))
        } else {
            None
        }
    }

    /// Commutes cells `i` and `i + 1` when they are independent, returning
    /// the equivalent diagram. `None` when they are dependent.
    pub fn commute_adjacent(&self, i: usize) -> Option<Diagram> {
        if i + 1 >= self.cells.len() {
            return None;
        }
        let (first, second) = self.swap_pair(self.cells[i], self.cells[i + 1])?;
        let mut cells = self.cells.clone();
        cells[i] = first;
        cells[i + 1] = second;
        let out = Diagram {
            presentation: self.presentation.clone(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
            cells,
        };
        debug_assert!(out.chain_ok());
        Some(out)
    }

    fn chain_ok(&self) -> bool {
        let mut word = self.top.clone();
        for cell in &self.cells {
            match self.presentation.apply_cell(&word, *cell) {
                Ok(w) => word = w,
                Err(_) => return false,
            }
        }
        word == self.bottom
    }

    /// Leftmost-first commutation normal form: bubble adjacent independent
    /// pairs until the cell-key sequence (offset, relation, direction) is at
    /// a fixed point, i.e. lexicographically least within the commutation
    /// class. The multiset of cells and the diagram class are unchanged.
    pub fn normalize(&self) -> Diagram {
        let mut cells = self.cells.clone();
        loop {
            let mut changed = false;
            for i in 0..cells.len().saturating_sub(1) {
                if let Some((first, second)) = self.swap_pair(cells[i], cells[i + 1]) {
                    if first < cells[i] {
                        cells[i] = first;
                        cells[i + 1] = second;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let out = Diagram {
            presentation: self.presentation.clone(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
            cells,
        };
        debug_assert!(out.chain_ok());
        out
    }

    /// Finds the first dipole pair, scanning top cell first. For cell `i`
    /// the interval it writes is tracked through the later cells; a later
    /// cell with the same relation, opposite direction, consuming exactly
    /// that interval cancels it. Any other cell touching the interval
    /// blocks every later candidate for `i`.
    fn find_dipole(&self) -> Option<(usize, usize)> {
        self.scan_dipoles(true).into_iter().next()
    }

    fn scan_dipoles(&self, first_only: bool) -> Vec<(usize, usize)> {
        let mut found = Vec::new();
        for i in 0..self.cells.len() {
            let ci = self.cells[i];
            let (_, written) = self.source_target_len(ci);
            let mut pos = ci.offset;
            for j in (i + 1)..self.cells.len() {
                let cj = self.cells[j];
                if cj.relation == ci.relation
                    && cj.direction == ci.direction.flip()
                    && cj.offset == pos
                {
                    found.push((i, j));
                    if first_only {
                        return found;
                    }
                    break;
                }
                let (src, tgt) = self.source_target_len(cj);
                if cj.offset + src <= pos {
                    pos = (pos as isize + tgt as isize - src as isize) as usize;
                } else if cj.offset >= pos + written {
                    // strictly right of the tracked interval: no interaction
                } else {
                    break;
                }
            }
        }
        found
    }

    /// All currently deletable dipole pairs `(i, j)`, topmost first.
    pub fn dipole_pairs(&self) -> Vec<(usize, usize)> {
        self.scan_dipoles(false)
    }

    /// True iff the diagram contains no dipole.
    pub fn is_reduced(&self) -> bool {
        self.find_dipole().is_none()
    }

    /// Deletes the dipole `(i, j)`; `(i, j)` must come from
    /// [`Diagram::dipole_pairs`]. Cells between them that lie strictly right
    /// of the cancelled interval shift by the relation's length difference.
    pub fn remove_dipole(&self, i: usize, j: usize) -> Diagram {
        let ci = self.cells[i];
        let (ci_src, written) = self.source_target_len(ci);
        let delta = ci_src as isize - written as isize;
        let mut cells: Vec<Cell> = self.cells[..i].to_vec();
        let mut pos = ci.offset;
        for k in (i + 1)..j {
            let mut ck = self.cells[k];
            let (src, tgt) = self.source_target_len(ck);
            if ck.offset + src <= pos {
                pos = (pos as isize + tgt as isize - src as isize) as usize;
            } else {
                assert!(ck.offset >= pos + written, "({i}, {j}) is not a dipole");
                ck.offset = (ck.offset as isize + delta) as usize;
            }
            cells.push(ck);
        }
        assert!(
            self.cells[j].relation == ci.relation
                && self.cells[j].direction == ci.direction.flip()
                && self.cells[j].offset == pos,
            "({i}, {j}) is not a dipole"
        );
        cells.extend_from_slice(&self.cells[j + 1..]);
        let out = Diagram {
            presentation: self.presentation.clone(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
            cells,
        };
        debug_assert!(out.chain_ok());
        out
    }

    /// Deletes dipoles (topmost candidate first) until none remain, then
    /// takes the commutation normal form. The result is the canonical
    /// representative of this diagram's class modulo dipoles.
    pub fn reduce(&self) -> NormalDiagram {
        let mut d = self.clone();
        loop {
            while let Some((i, j)) = d.find_dipole() {
                d = d.remove_dipole(i, j);
            }
            d = d.normalize();
            if d.is_reduced() {
                return NormalDiagram(d);
            }
        }
    }

    /// Inserts the cancelling pair `(offset, relation, direction)`,
    /// `(offset, relation, flipped)` at cell-sequence `position`. The
    /// enlarged diagram reduces to the same normal form.
    pub fn insert_dipole(
        &self,
        position: usize,
        relation: usize,
        direction: Direction,
        offset: usize,
    ) -> Result<Diagram> {
        if position > self.cells.len() {
            return Err(Error::OffsetOutOfRange {
                offset: position,
                needed: 0,
                len: self.cells.len(),
            });
        }
        let mut cells = self.cells.clone();
        cells.insert(position, Cell::new(offset, relation, direction.flip()));
        cells.insert(position, Cell::new(offset, relation, direction));
        Diagram::new(self.presentation.clone(), self.top.clone(), cells)
    }

    /// Equality in the diagram group: same top word and identical reduced
    /// forms. Errors when the presentations differ.
    pub fn equal(&self, other: &Diagram) -> Result<bool> {
        if self.presentation != other.presentation {
            return Err(Error::PresentationMismatch);
        }
        if self.top != other.top {
            return Ok(false);
        }
        Ok(self.reduce() == other.reduce())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})-diagram [", self.top, self.bottom)?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    presentation: Presentation,
    top: Word,
    cells: Vec<Cell>,
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramRepr {
            presentation: self.presentation.clone(),
            top: self.top.clone(),
            cells: self.cells.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DiagramRepr::deserialize(deserializer)?;
        Diagram::new(repr.presentation, repr.top, repr.cells).map_err(D::Error::custom)
    }
}

/// A diagram with no dipoles, in commutation normal form. Produced only by
/// [`Diagram::reduce`]; two equivalent diagrams reduce to identical values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalDiagram(Diagram);

impl NormalDiagram {
    pub fn as_diagram(&self) -> &Diagram {
        &self.0
    }

    pub fn into_diagram(self) -> Diagram {
        self.0
    }
}

impl Deref for NormalDiagram {
    type Target = Diagram;

    fn deref(&self) -> &Diagram {
        &self.0
    }
}

impl From<NormalDiagram> for Diagram {
    fn from(n: NormalDiagram) -> Diagram {
        n.0
    }
}

impl fmt::Display for NormalDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn p3() -> Presentation {
        Presentation::planar(3)
    }

    // Relation indices in planar(3): 0 = x1x2=x2x1, 1 = x1x3=x3x1, 2 = x2x3=x3x2.
    fn figure_one() -> Diagram {
        Diagram::new(
            p3(),
            w("x1x2x3"),
            vec![
                Cell::new(1, 2, Direction::Forward),
                Cell::new(0, 1, Direction::Forward),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bottom_words() {
        assert_eq!(figure_one().bottom(), &w("x3x1x2"));
        let id = Diagram::identity(p3(), w("x1x2x3")).unwrap();
        assert_eq!(id.bottom(), &w("x1x2x3"));
        let single = Diagram::new(p3(), w("x1x2x3"), vec![Cell::new(0, 0, Direction::Forward)]).unwrap();
        assert_eq!(single.bottom(), &w("x2x1x3"));
    }

    #[test]
    fn chain_break_reports_failure_point() {
        let err = Diagram::new(p3(), w("x1x2x3"), vec![Cell::new(1, 0, Direction::Forward)]);
        assert_eq!(err, Err(Error::ChainBreak { index: 0, word: w("x1x2x3") }));
    }

    #[test]
    fn compose_identities() {
        let d = figure_one();
        let id_top = Diagram::identity(p3(), d.top().clone()).unwrap();
        let id_bot = Diagram::identity(p3(), d.bottom().clone()).unwrap();
        assert_eq!(id_top.compose(&d).unwrap(), d);
        assert_eq!(d.compose(&id_bot).unwrap(), d);
        assert_eq!(d.compose(&d), Err(Error::BoundaryMismatch));
        let other = Diagram::identity(Presentation::planar(4), w("x1x2x3x4")).unwrap();
        assert_eq!(d.compose(&other), Err(Error::PresentationMismatch));
    }

    #[test]
    fn compose_then_reduce_cancels() {
        let f = Diagram::new(p3(), w("x1x2x3"), vec![Cell::new(0, 0, Direction::Forward)]).unwrap();
        let b = Diagram::new(p3(), w("x2x1x3"), vec![Cell::new(0, 0, Direction::Backward)]).unwrap();
        let prod = f.compose(&b).unwrap();
        assert_eq!(prod.cells().len(), 2);
        let reduced = prod.reduce();
        assert!(reduced.is_identity());
    }

    #[test]
    fn invert_examples() {
        let id = Diagram::identity(p3(), w("x1x2x3")).unwrap();
        assert_eq!(id.invert(), id);
        let inv = figure_one().invert();
        assert_eq!(inv.top(), &w("x3x1x2"));
        assert_eq!(inv.bottom(), &w("x1x2x3"));
        assert_eq!(
            inv.cells(),
            &[
                Cell::new(0, 1, Direction::Backward),
                Cell::new(1, 2, Direction::Backward),
            ]
        );
    }

    #[test]
    fn normalize_examples() {
        // Disjoint cells commute, leftmost first.
        let d = Diagram::new(
            Presentation::planar(4),
            w("x1x2x3x4"),
            vec![Cell::new(2, 5, Direction::Forward), Cell::new(0, 0, Direction::Forward)],
        )
        .unwrap();
        let n = d.normalize();
        assert_eq!(
            n.cells(),
            &[Cell::new(0, 0, Direction::Forward), Cell::new(2, 5, Direction::Forward)]
        );
        assert_eq!(n.bottom(), d.bottom());
        // Dependent cells never reorder.
        let dep = figure_one();
        assert_eq!(dep.normalize(), dep);
        // Idempotent.
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn is_reduced_examples() {
        assert!(Diagram::identity(p3(), w("x1x2x3")).unwrap().is_reduced());
        let dip = Diagram::new(
            p3(),
            w("x1x2x3"),
            vec![Cell::new(0, 0, Direction::Forward), Cell::new(0, 0, Direction::Backward)],
        )
        .unwrap();
        assert!(!dip.is_reduced());
        // A disjoint cell in between does not block the dipole.
        let blocked = Diagram::new(
            Presentation::planar(4),
            w("x1x2x3x4"),
            vec![
                Cell::new(0, 0, Direction::Forward),
                Cell::new(2, 5, Direction::Forward),
                Cell::new(0, 0, Direction::Backward),
            ],
        )
        .unwrap();
        assert!(!blocked.is_reduced());
        assert_eq!(blocked.dipole_pairs(), vec![(0, 2)]);
        // A touching cell in between does block it.
        let hex = Diagram::new(
            p3(),
            w("x1x2x3"),
            vec![
                Cell::new(0, 0, Direction::Forward),
                Cell::new(1, 1, Direction::Forward),
                Cell::new(0, 2, Direction::Forward),
                Cell::new(1, 0, Direction::Backward),
                Cell::new(0, 1, Direction::Backward),
                Cell::new(1, 2, Direction::Backward),
            ],
        )
        .unwrap();
        assert!(hex.is_reduced());
    }

    #[test]
    fn reduce_examples() {
        let dip = Diagram::new(
            p3(),
            w("x1x2x3"),
            vec![Cell::new(0, 0, Direction::Forward), Cell::new(0, 0, Direction::Backward)],
        )
        .unwrap();
        assert!(dip.reduce().is_identity());
        let fig = figure_one();
        assert_eq!(fig.reduce().as_diagram(), &fig);
        // Cell count parity is preserved.
        assert_eq!(dip.cells().len() % 2, dip.reduce().cells().len() % 2);
    }

    #[test]
    fn reduce_shifts_offsets_for_length_changing_relations() {
        // x1x1 = x1 : deleting the dipole must shift the right-hand cell back.
        let p = Presentation::new(1, vec![(w("x1x1"), w("x1"))]).unwrap();
        let d = Diagram::new(
            p,
            w("x1x1x1x1"),
            vec![
                Cell::new(0, 0, Direction::Forward),  // x1x1x1x1 -> x1x1x1
                Cell::new(1, 0, Direction::Forward),  // -> x1x1 (right of tracked interval)
                Cell::new(0, 0, Direction::Backward), // -> x1x1x1: cancels cell 0
            ],
        )
        .unwrap();
        let r = d.reduce();
        assert_eq!(r.cells(), &[Cell::new(2, 0, Direction::Forward)]);
        assert_eq!(r.bottom(), &w("x1x1x1"));
    }

    #[test]
    fn insert_dipole_roundtrip() {
        let id = Diagram::identity(p3(), w("x1x2x3")).unwrap();
        let d = id.insert_dipole(0, 0, Direction::Forward, 0).unwrap();
        assert_eq!(d.cells().len(), 2);
        assert!(d.reduce().is_identity());
        let fig = figure_one();
        for pos in 0..=fig.cells().len() {
            let running = &fig.words()[pos];
            for cell in fig.presentation().applicable_cells(running) {
                let bigger = fig.insert_dipole(pos, cell.relation, cell.direction, cell.offset).unwrap();
                assert_eq!(bigger.reduce(), fig.reduce());
            }
        }
        assert!(fig.insert_dipole(0, 0, Direction::Forward, 1).is_err());
    }

    #[test]
    fn equal_examples() {
        let fig = figure_one();
        assert!(fig.equal(&fig).unwrap());
        let a = Diagram::new(p3(), w("x1x2x3"), vec![Cell::new(0, 0, Direction::Forward)]).unwrap();
        let b = Diagram::new(p3(), w("x1x2x3"), vec![Cell::new(1, 2, Direction::Forward)]).unwrap();
        assert!(!a.equal(&b).unwrap());
        let spherical = a.compose(&a.invert()).unwrap();
        let id = Diagram::identity(p3(), w("x1x2x3")).unwrap();
        assert!(spherical.equal(&id).unwrap());
    }

    #[test]
    fn json_roundtrip_bit_exact() {
        let fig = figure_one();
        let json = fig.to_json_string();
        assert_eq!(Diagram::from_json_str(&json).unwrap(), fig);
        assert_eq!(
            json,
            r#"{"presentation":{"alphabet_size":3,"relations":[[[1,2],[2,1]],[[1,3],[3,1]],[[2,3],[3,2]]]},"top":[1,2,3],"cells":[{"offset":1,"rel":2,"dir":"F"},{"offset":0,"rel":1,"dir":"F"}]}"#
        );
        // Invalid chains are rejected on parse.
        let bad = json.replace(r#""offset":1"#, r#""offset":0"#);
        assert!(Diagram::from_json_str(&bad).is_err());
    }
}

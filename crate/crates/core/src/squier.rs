//! The Squier cube complex of a presentation at a base word, together with
//! spanning trees and fundamental-group presentations read off from it.
//!
//! Vertices are the words reachable from the base word by relation
//! applications, edges are single applications recorded at the endpoint
//! where the relation applies forward, and a k-cube is a base word with k
//! pairwise-disjoint forward-applicable cells. Cubes of every dimension are
//! built; truncating at squares would corrupt homology above degree one.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::IntegerMatrix;
use crate::presentation::{Direction, Presentation, Word};

/// Default BFS vertex budget used by the CLI and convenience constructors.
pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// One geometric edge: applying `relation` forward at `offset` in the word
/// of vertex `from` yields the word of vertex `to`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct SquierEdge {
    pub from: usize,
    pub to: usize,
    pub offset: usize,
    #[serde(rename = "rel")]
    pub relation: usize,
}

/// A cube of dimension `cells.len() >= 2`: pairwise-disjoint cells, all
/// forward-applicable at the base vertex, sorted by offset.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SquierCube {
    pub base: usize,
    pub cells: Vec<(usize, usize)>,
}

impl SquierCube {
    pub fn dimension(&self) -> usize {
        self.cells.len()
    }
}

/// The finite Squier complex of `(presentation, base_word)`.
#[derive(Clone, Debug)]
pub struct SquierComplex {
    presentation: Presentation,
    base_word: Word,
    vertices: Vec<Word>,
    edges: Vec<SquierEdge>,
    edge_ids: HashMap<(usize, usize, usize), usize>,
    higher: Vec<Vec<SquierCube>>,
    higher_ids: Vec<HashMap<(usize, Vec<(usize, usize)>), usize>>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl SquierComplex {
    /// Builds the complex by BFS from `base_word`, failing with
    /// `VertexBudgetExceeded` when more than `max_vertices` words are
    /// reachable. Orderings are deterministic: BFS discovery order for
    /// vertices, then per-vertex sorted cell enumeration for edges and
    /// cubes.
    pub fn build(presentation: Presentation, base_word: Word, max_vertices: usize) -> Result<Self> {
        presentation.validate_word(&base_word)?;
        let budget = max_vertices.max(1);

        let mut vertices = vec![base_word.clone()];
        let mut ids: HashMap<Word, usize> = HashMap::new();
        ids.insert(base_word.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let word = vertices[u].clone();
            for cell in presentation.applicable_cells(&word) {
                let next = presentation.apply_cell(&word, cell).expect("cell applies");
                if !ids.contains_key(&next) {
                    if vertices.len() >= budget {
                        return Err(Error::VertexBudgetExceeded { budget });
                    }
                    ids.insert(next.clone(), vertices.len());
                    vertices.push(next);
                    queue.push_back(vertices.len() - 1);
                }
            }
        }

        let mut edges = Vec::new();
        let mut edge_ids = HashMap::new();
        let mut forward_cells: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(vertices.len());
        for (u, word) in vertices.iter().enumerate() {
            let mut fcells = Vec::new();
            for cell in presentation.applicable_cells(word) {
                if cell.direction != Direction::Forward {
                    continue;
                }
                let to = ids[&presentation.apply_cell(word, cell).expect("cell applies")];
                edge_ids.insert((u, cell.offset, cell.relation), edges.len());
                edges.push(SquierEdge { from: u, to, offset: cell.offset, relation: cell.relation });
                let lhs_len = presentation.relation(cell.relation).unwrap().lhs().len();
                fcells.push((cell.offset, cell.relation, lhs_len));
            }
            forward_cells.push(fcells);
        }

        let mut higher: Vec<Vec<SquierCube>> = Vec::new();
        let mut higher_ids: Vec<HashMap<(usize, Vec<(usize, usize)>), usize>> = Vec::new();
        for (u, fcells) in forward_cells.iter().enumerate() {
            let mut chosen: Vec<(usize, usize, usize)> = Vec::new();
            collect_disjoint(fcells, 0, &mut chosen, &mut |cells| {
                let dim = cells.len();
                while higher.len() < dim - 1 {
                    higher.push(Vec::new());
                    higher_ids.push(HashMap::new());
                }
                let key: Vec<(usize, usize)> = cells.iter().map(|&(o, r, _)| (o, r)).collect();
                higher_ids[dim - 2].insert((u, key.clone()), higher[dim - 2].len());
                higher[dim - 2].push(SquierCube { base: u, cells: key });
            });
        }

        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.from].push((id, e.to));
            adjacency[e.to].push((id, e.from));
        }

        Ok(SquierComplex {
            presentation,
            base_word,
            vertices,
            edges,
            edge_ids,
            higher,
            higher_ids,
            adjacency,
        })
    }

    /// The complex of the planar presentation on `n` generators at
    /// `x1...xn`; its vertices are the n! permutation words.
    pub fn planar(n: usize) -> Self {
        let base = Word::from_indices(&(0..n).collect::<Vec<_>>()).unwrap();
        SquierComplex::build(Presentation::planar(n), base, DEFAULT_MAX_VERTICES)
            .expect("planar complex is finite")
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn base_word(&self) -> &Word {
        &self.base_word
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn vertex_word(&self, id: usize) -> &Word {
        &self.vertices[id]
    }

    pub fn edges(&self) -> &[SquierEdge] {
        &self.edges
    }

    /// Cubes of dimension `dim >= 2`; empty above the top dimension.
    pub fn cubes(&self, dim: usize) -> &[SquierCube] {
        assert!(dim >= 2, "vertices and edges have their own accessors");
        self.higher.get(dim - 2).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Index of the cube `(base, cells)` in dimension `dim`, if present.
    /// Dimension 0 looks up vertices, dimension 1 edges.
    pub fn find_cube(&self, dim: usize, base: usize, cells: &[(usize, usize)]) -> Option<usize> {
        debug_assert_eq!(dim, cells.len());
        match dim {
            0 => (base < self.vertices.len()).then_some(base),
            1 => self.edge_ids.get(&(base, cells[0].0, cells[0].1)).copied(),
            d => self.higher_ids.get(d - 2)?.get(&(base, cells.to_vec())).copied(),
        }
    }

    /// Largest dimension in which the complex has cells.
    pub fn max_dimension(&self) -> usize {
        if self.higher.is_empty() {
            if self.edges.is_empty() {
                0
            } else {
                1
            }
        } else {
            self.higher.len() + 1
        }
    }

    /// Number of cubes of dimension `dim` (0 above the top dimension).
    pub fn cube_count(&self, dim: usize) -> usize {
        match dim {
            0 => self.vertices.len(),
            1 => self.edges.len(),
            d => self.higher.get(d - 2).map(Vec::len).unwrap_or(0),
        }
    }

    /// Counts per dimension, `0..=max_dimension`.
    pub fn cube_counts(&self) -> Vec<usize> {
        (0..=self.max_dimension()).map(|d| self.cube_count(d)).collect()
    }

    /// Alternating sum of the cube counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.cube_counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// BFS spanning tree rooted at the base word, as a sorted list of edge
    /// ids. Contains exactly `vertices - 1` edges.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut tree = Vec::with_capacity(self.vertices.len().saturating_sub(1));
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &(edge, other) in &self.adjacency[u] {
                if !seen[other] {
                    seen[other] = true;
                    tree.push(edge);
                    queue.push_back(other);
                }
            }
        }
        tree.sort_unstable();
        tree
    }

    /// Offset of `cell` after `applied` (at a strictly smaller offset) has
    /// been applied forward.
    fn shift_after(&self, cell: (usize, usize), applied: (usize, usize)) -> (usize, usize) {
        let rel = self.presentation.relation(applied.1).unwrap();
        let delta = rel.rhs().len() as isize - rel.lhs().len() as isize;
        ((cell.0 as isize + delta) as usize, cell.1)
    }

    /// The four boundary edges of a square, as
    /// `(bottom-left, left-then-right, top-right, right-only)`: applying
    /// `c1` then the shifted `c2` must meet applying `c2` then `c1` at the
    /// opposite corner.
    fn square_edges(&self, sq: &SquierCube) -> [usize; 4] {
        let (c1, c2) = (sq.cells[0], sq.cells[1]);
        let e_a = self.find_cube(1, sq.base, &[c1]).expect("face closure");
        let v1 = self.edges[e_a].to;
        let e_c = self.find_cube(1, v1, &[self.shift_after(c2, c1)]).expect("face closure");
        let e_b = self.find_cube(1, sq.base, &[c2]).expect("face closure");
        let v2 = self.edges[e_b].to;
        let e_d = self.find_cube(1, v2, &[c1]).expect("face closure");
        debug_assert_eq!(self.edges[e_c].to, self.edges[e_d].to);
        [e_a, e_c, e_d, e_b]
    }

    /// Presentation of the fundamental group: one generator per non-tree
    /// edge, one relator per square, read around its boundary loop from the
    /// base corner with tree edges mapped to the empty word.
    pub fn fundamental_presentation(&self) -> GroupPresentation {
        let tree = self.spanning_tree();
        let mut in_tree = vec![false; self.edges.len()];
        for e in tree {
            in_tree[e] = true;
        }
        let mut generator_of = vec![None; self.edges.len()];
        let mut count = 0usize;
        for e in 0..self.edges.len() {
            if !in_tree[e] {
                generator_of[e] = Some(count);
                count += 1;
            }
        }
        let mut relators = Vec::with_capacity(self.cube_count(2));
        for sq in self.cubes(2) {
            let [e_a, e_c, e_d, e_b] = self.square_edges(sq);
            let mut relator = Vec::new();
            for (edge, sign) in [(e_a, 1i64), (e_c, 1), (e_d, -1), (e_b, -1)] {
                if let Some(g) = generator_of[edge] {
                    relator.push(sign * (g as i64 + 1));
                }
            }
            relators.push(free_reduce(relator));
        }
        GroupPresentation { generator_count: count, relators }
    }

    /// DOT rendering of the 1-skeleton; vertex labels are words, edge
    /// labels `(offset, r<relation>)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph squier {\n");
        for (id, word) in self.vertices.iter().enumerate() {
            out.push_str(&format!(
                "  v{id} [label=\"{}\"];\n",
                self.presentation.format_word(word)
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  v{} -- v{} [label=\"({},r{})\"];\n",
                e.from, e.to, e.offset, e.relation
            ));
        }
        out.push_str("}\n");
        out
    }

    /// JSON export of the full graded cube list.
    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct Repr<'a> {
            presentation: &'a Presentation,
            base_word: &'a Word,
            vertices: &'a [Word],
            edges: &'a [SquierEdge],
            cubes: &'a [Vec<SquierCube>],
        }
        serde_json::to_string(&Repr {
            presentation: &self.presentation,
            base_word: &self.base_word,
            vertices: &self.vertices,
            edges: &self.edges,
            cubes: &self.higher,
        })
        .expect("complex serializes")
    }
}

/// Enumerates all sets of two or more pairwise-disjoint forward cells, in
/// lexicographic order; `fcells` are (offset, relation, lhs length) sorted
/// by (offset, relation).
fn collect_disjoint(
    fcells: &[(usize, usize, usize)],
    start: usize,
    chosen: &mut Vec<(usize, usize, usize)>,
    emit: &mut impl FnMut(&[(usize, usize, usize)]),
) {
    for i in start..fcells.len() {
        let cell = fcells[i];
        if let Some(&(o, _, len)) = chosen.last() {
            if cell.0 < o + len {
                continue;
            }
        }
        chosen.push(cell);
        if chosen.len() >= 2 {
            emit(chosen);
        }
        collect_disjoint(fcells, i + 1, chosen, emit);
        chosen.pop();
    }
}

fn free_reduce(word: Vec<i64>) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(word.len());
    for g in word {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// A group presentation: `generator_count` generators and relators written
/// as words of signed 1-based generator numbers (`-k` is the inverse of
/// generator `k`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupPresentation {
    generator_count: usize,
    relators: Vec<Vec<i64>>,
}

impl GroupPresentation {
    pub fn new(generator_count: usize, relators: Vec<Vec<i64>>) -> Self {
        for r in &relators {
            for &g in r {
                assert!(g != 0 && g.unsigned_abs() as usize <= generator_count);
            }
        }
        GroupPresentation { generator_count, relators }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Vec<i64>] {
        &self.relators
    }

    /// Tietze cleanup: freely reduce, drop empty relators, and repeatedly
    /// eliminate the least generator that occurs exactly once in exactly
    /// one relator together with that relator. The presented group is
    /// unchanged.
    pub fn simplify(&self) -> GroupPresentation {
        let mut count = self.generator_count;
        let mut relators: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| free_reduce(r.clone()))
            .filter(|r| !r.is_empty())
            .collect();
        loop {
            let mut occurrences = vec![0usize; count];
            for r in &relators {
                for &g in r {
                    occurrences[g.unsigned_abs() as usize - 1] += 1;
                }
            }
            let Some(gen) = occurrences.iter().position(|&c| c == 1) else {
                break;
            };
            let g = gen as i64 + 1;
            let holder = relators
                .iter()
                .position(|r| r.iter().any(|&e| e.abs() == g))
                .expect("generator occurs in some relator");
            relators.remove(holder);
            for r in &mut relators {
                for e in r.iter_mut() {
                    if e.abs() > g {
                        *e -= e.signum();
                    }
                }
            }
            count -= 1;
            relators = relators
                .into_iter()
                .map(free_reduce)
                .filter(|r| !r.is_empty())
                .collect();
        }
        GroupPresentation { generator_count: count, relators }
    }

    /// Exponent-sum matrix of the relators, one row per relator and one
    /// column per generator; its Smith normal form gives the abelianized
    /// group.
    pub fn abelianization_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.relators.len(), self.generator_count);
        for (i, r) in self.relators.iter().enumerate() {
            for &g in r {
                let j = g.unsigned_abs() as usize - 1;
                m.add_assign(i, j, g.signum());
            }
        }
        m
    }
}

impl fmt::Display for GroupPresentation {
    /// Text block `<g1, ..., gk | r1, ..., rm>` with relators written in
    /// `g<i>` and `G<i>` (inverse); an empty relator prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for g in 1..=self.generator_count {
            if g > 1 {
                write!(f, ", ")?;
            }
            write!(f, "g{g}")?;
        }
        write!(f, " | ")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if r.is_empty() {
                write!(f, "1")?;
            }
            for &g in r {
                if g > 0 {
                    write!(f, "g{g}")?;
                } else {
                    write!(f, "G{}", -g)?;
                }
            }
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_three_is_a_hexagon() {
        let k = SquierComplex::planar(3);
        assert_eq!(k.cube_counts(), vec![6, 6]);
        assert_eq!(k.euler_characteristic(), 0);
        assert_eq!(k.spanning_tree().len(), 5);
        let gp = k.fundamental_presentation();
        assert_eq!(gp.generator_count(), 1);
        assert_eq!(gp.relators().len(), 0);
    }

    #[test]
    fn planar_four_counts() {
        let k = SquierComplex::planar(4);
        assert_eq!(k.cube_counts(), vec![24, 36, 6]);
        assert_eq!(k.euler_characteristic(), -6);
        assert_eq!(k.spanning_tree().len(), 23);
        let gp = k.fundamental_presentation();
        assert_eq!(gp.generator_count(), 13);
        assert_eq!(gp.relators().len(), 6);
    }

    #[test]
    fn planar_five_counts() {
        let k = SquierComplex::planar(5);
        assert_eq!(k.cube_counts(), vec![120, 240, 90]);
        assert_eq!(k.euler_characteristic(), -30);
    }

    #[test]
    fn single_vertex_complex() {
        let k = SquierComplex::planar(1);
        assert_eq!(k.cube_counts(), vec![1]);
        assert_eq!(k.max_dimension(), 0);
        assert_eq!(k.spanning_tree(), Vec::<usize>::new());
        let gp = k.fundamental_presentation();
        assert_eq!((gp.generator_count(), gp.relators().len()), (0, 0));
    }

    #[test]
    fn vertex_budget() {
        let p = Presentation::planar(4);
        let w: Word = "x1x2x3x4".parse().unwrap();
        assert_eq!(
            SquierComplex::build(p, w, 10),
            // 24 permutation words exceed a budget of 10
            Err(Error::VertexBudgetExceeded { budget: 10 })
        );
    }

    #[test]
    fn face_closure_small() {
        for n in 2..=5 {
            let k = SquierComplex::planar(n);
            for dim in 2..=k.max_dimension() {
                for cube in k.cubes(dim) {
                    for i in 0..dim {
                        let mut back: Vec<_> = cube.cells.clone();
                        let ci = back.remove(i);
                        assert!(k.find_cube(dim - 1, cube.base, &back).is_some());
                        let front_base = k.edges[k.find_cube(1, cube.base, &[ci]).unwrap()].to;
                        let front: Vec<_> = back
                            .iter()
                            .map(|&c| if c.0 > ci.0 { k.shift_after(c, ci) } else { c })
                            .collect();
                        assert!(k.find_cube(dim - 1, front_base, &front).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_builds() {
        let a = SquierComplex::planar(4);
        let b = SquierComplex::planar(4);
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert_eq!(a.spanning_tree(), b.spanning_tree());
    }

    #[test]
    fn simplify_examples() {
        let gp = GroupPresentation::new(1, vec![vec![1, -1]]);
        let s = gp.simplify();
        assert_eq!((s.generator_count(), s.relators().len()), (1, 0));

        let gp = GroupPresentation::new(2, vec![vec![1, -2]]);
        let s = gp.simplify();
        assert_eq!((s.generator_count(), s.relators().len()), (1, 0));
    }

    #[test]
    fn presentation_display() {
        let gp = GroupPresentation::new(2, vec![vec![1, 2, -1, -2]]);
        assert_eq!(gp.to_string(), "<g1, g2 | g1g2G1G2>");
        let free = GroupPresentation::new(1, vec![]);
        assert_eq!(free.to_string(), "<g1 | >");
    }

    #[test]
    fn dot_export_shape() {
        let dot = SquierComplex::planar(2).to_dot();
        assert_eq!(
            dot,
            "graph squier {\n  v0 [label=\"x1.x2\"];\n  v1 [label=\"x2.x1\"];\n  v0 -- v1 [label=\"(0,r0)\"];\n}\n"
        );
    }
}

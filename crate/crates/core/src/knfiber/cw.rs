//! Cell model of the fiber surface of a reduced semistable model.
//!
//! Each component of multiplicity one contributes a polygon: `2g`
//! handle loops, a tail and a vanishing-cycle circle for every
//! adjacent node, a tail and a boundary circle for every mark.  Two
//! polygons meeting at a node share that node's circle, glued from
//! opposite sides.  The result is a compact oriented surface whose
//! boundary circles are the marks, and the monodromy of the family
//! acts on it as one right-handed Dehn twist per node circle.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::degen::DualGraph;
use crate::intlin::{ChainComplex, ChainSelfMap, IntMat};

use super::FiberError;

/// One directed letter of a polygon word: 1-cell index and direction.
pub type Letter = (usize, i8);

/// CW structure on the fiber surface, cells indexed deterministically
/// from the graph (vertices and edges in id order).
pub struct SurfaceComplex {
    complex: ChainComplex,
    zero_cells: usize,
    one_cell_ends: Vec<(usize, usize)>,
    handle_cells: BTreeMap<String, Vec<(usize, usize)>>,
    tail_cells: BTreeMap<String, (usize, usize)>,
    node_circle_cells: BTreeMap<String, usize>,
    boundary_circle_cells: Vec<usize>,
    words: Vec<Vec<Letter>>,
}

impl SurfaceComplex {
    pub fn new(g: &DualGraph) -> Result<Self, FiberError> {
        if let Some(issue) = g.validate().into_iter().next() {
            return Err(FiberError::InvalidGraph(issue));
        }
        if !g.is_semistable() {
            return Err(FiberError::NotSemistable);
        }
        let mut vertices: Vec<_> = g.vertices.iter().collect();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let mut edges: Vec<_> = g.edges.iter().collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));

        // 0-cells: base point per component, point per node, point per
        // mark.
        let mut base_points = BTreeMap::new();
        let mut n0 = 0;
        for v in &vertices {
            base_points.insert(v.id.clone(), n0);
            n0 += 1;
        }
        let mut node_points = BTreeMap::new();
        for e in &edges {
            node_points.insert(e.id.clone(), n0);
            n0 += 1;
        }
        let mut mark_points: BTreeMap<(String, u32), usize> = BTreeMap::new();
        for v in &vertices {
            for m in 0..v.marks {
                mark_points.insert((v.id.clone(), m), n0);
                n0 += 1;
            }
        }

        // 1-cells, with endpoints (tail, head) tracked for the
        // triangulation: handle loops, node tails, node circles, mark
        // tails, boundary circles.
        let mut one_cell_ends: Vec<(usize, usize)> = Vec::new();
        let push_cell = |ends: (usize, usize), v: &mut Vec<(usize, usize)>| -> usize {
            v.push(ends);
            v.len() - 1
        };
        let mut handle_cells: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
        for v in &vertices {
            let base = base_points[&v.id];
            let mut pairs = Vec::new();
            for _ in 0..v.genus {
                let a = push_cell((base, base), &mut one_cell_ends);
                let b = push_cell((base, base), &mut one_cell_ends);
                pairs.push((a, b));
            }
            handle_cells.insert(v.id.clone(), pairs);
        }
        let mut tail_cells: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for e in &edges {
            let p = node_points[&e.id];
            let t0 = push_cell((base_points[&e.ends.0], p), &mut one_cell_ends);
            let t1 = push_cell((base_points[&e.ends.1], p), &mut one_cell_ends);
            tail_cells.insert(e.id.clone(), (t0, t1));
        }
        let mut node_circle_cells: BTreeMap<String, usize> = BTreeMap::new();
        for e in &edges {
            let p = node_points[&e.id];
            node_circle_cells.insert(e.id.clone(), push_cell((p, p), &mut one_cell_ends));
        }
        let mut mark_tail_cells: BTreeMap<(String, u32), usize> = BTreeMap::new();
        let mut boundary_circle_cells = Vec::new();
        for v in &vertices {
            let base = base_points[&v.id];
            for m in 0..v.marks {
                let q = mark_points[&(v.id.clone(), m)];
                mark_tail_cells.insert((v.id.clone(), m), push_cell((base, q), &mut one_cell_ends));
                boundary_circle_cells.push(push_cell((q, q), &mut one_cell_ends));
            }
        }
        let n1 = one_cell_ends.len();

        // Polygon words.  Both sides of a node circle appear with
        // opposite directions, so node circles cancel from the total
        // 2-boundary and only boundary circles survive.
        let mut words: Vec<Vec<Letter>> = Vec::new();
        for v in &vertices {
            let mut word: Vec<Letter> = Vec::new();
            for &(a, b) in &handle_cells[&v.id] {
                word.extend([(a, 1), (b, 1), (a, -1), (b, -1)]);
            }
            for e in &edges {
                let (t0, t1) = tail_cells[&e.id];
                let c = node_circle_cells[&e.id];
                if e.ends.0 == v.id {
                    word.extend([(t0, 1), (c, 1), (t0, -1)]);
                }
                if e.ends.1 == v.id {
                    word.extend([(t1, 1), (c, -1), (t1, -1)]);
                }
            }
            for m in 0..v.marks {
                let u = mark_tail_cells[&(v.id.clone(), m)];
                let d = boundary_circle_cells
                    [boundary_index(&vertices, &v.id, m)];
                word.extend([(u, 1), (d, 1), (u, -1)]);
            }
            words.push(word);
        }

        let mut d1 = IntMat::zero(n0, n1);
        for (j, &(tail, head)) in one_cell_ends.iter().enumerate() {
            let mut entry = d1.at(head, j).clone();
            entry += BigInt::one();
            d1.set(head, j, entry);
            let mut entry = d1.at(tail, j).clone();
            entry -= BigInt::one();
            d1.set(tail, j, entry);
        }
        let mut d2 = IntMat::zero(n1, vertices.len());
        for (col, word) in words.iter().enumerate() {
            for &(cell, dir) in word {
                let mut entry = d2.at(cell, col).clone();
                entry += BigInt::from(dir);
                d2.set(cell, col, entry);
            }
        }
        let complex = ChainComplex::new(vec![n0, n1, vertices.len()], vec![d1, d2])
            .expect("polygon boundaries are closed");

        Ok(SurfaceComplex {
            complex,
            zero_cells: n0,
            one_cell_ends,
            handle_cells,
            tail_cells,
            node_circle_cells,
            boundary_circle_cells,
            words,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn zero_cells(&self) -> usize {
        self.zero_cells
    }

    pub fn one_cells(&self) -> usize {
        self.one_cell_ends.len()
    }

    /// (tail, head) 0-cells of a 1-cell.
    pub fn one_cell_ends(&self, cell: usize) -> (usize, usize) {
        self.one_cell_ends[cell]
    }

    /// Polygon words, one per vertex in id order.
    pub fn words(&self) -> &[Vec<Letter>] {
        &self.words
    }

    /// 1-cell indices of the handle loop pair `(a_i, b_i)`.
    pub fn handle_pair(&self, vertex: &str, i: usize) -> Option<(usize, usize)> {
        self.handle_cells.get(vertex)?.get(i).copied()
    }

    /// 1-cell indices of the two tails of an edge, sides in `ends`
    /// order.
    pub fn tails(&self, edge: &str) -> Option<(usize, usize)> {
        self.tail_cells.get(edge).copied()
    }

    /// 1-cell index of a node circle.
    pub fn node_circle(&self, edge: &str) -> Option<usize> {
        self.node_circle_cells.get(edge).copied()
    }

    /// 1-cell indices of the boundary circles, marks flattened in
    /// (vertex id, mark) order.
    pub fn boundary_circles(&self) -> &[usize] {
        &self.boundary_circle_cells
    }

    /// Unit 1-chain supported on one cell.
    pub fn unit_chain(&self, cell: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::from(0); self.one_cells()];
        v[cell] = BigInt::one();
        v
    }

    /// Right-handed Dehn twist about one node circle, as a cellular
    /// self-map: the tail on the `ends.0` side is dragged once around
    /// the circle.  Node circles appear in no 2-boundary alongside
    /// tails, so this commutes with the differentials.
    pub fn twist(&self, edge: &str) -> Option<ChainSelfMap> {
        let (t0, _) = self.tails(edge)?;
        let c = self.node_circle(edge)?;
        let mut block1 = IntMat::identity(self.one_cells());
        block1.set(c, t0, BigInt::one());
        Some(
            ChainSelfMap::new(
                &self.complex,
                vec![
                    IntMat::identity(self.zero_cells),
                    block1,
                    IntMat::identity(self.complex.dim(2)),
                ],
            )
            .expect("twist commutes with boundaries"),
        )
    }

    /// Composite of the twists about all node circles.  The circles
    /// are disjoint, so the twists commute and the order is
    /// irrelevant.
    pub fn monodromy_map(&self) -> ChainSelfMap {
        let mut block1 = IntMat::identity(self.one_cells());
        for (edge, &c) in &self.node_circle_cells {
            let (t0, _) = self.tail_cells[edge];
            block1.set(c, t0, BigInt::one());
        }
        ChainSelfMap::new(
            &self.complex,
            vec![
                IntMat::identity(self.zero_cells),
                block1,
                IntMat::identity(self.complex.dim(2)),
            ],
        )
        .expect("twists commute with boundaries")
    }
}

fn boundary_index(vertices: &[&crate::degen::Vertex], id: &str, mark: u32) -> usize {
    let mut k = 0;
    for v in vertices {
        if v.id == id {
            return k + mark as usize;
        }
        k += v.marks as usize;
    }
    unreachable!("vertex present by construction");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degen::{good_reduction, tate_ngon, Edge, Vertex};
    use crate::intlin::homology;

    #[test]
    fn good_reduction_complexes_are_closed_surfaces() {
        for g in 0..4u32 {
            let cw = SurfaceComplex::new(&good_reduction(g)).unwrap();
            let h = homology(cw.complex());
            assert_eq!(h.betti(0), 1);
            assert_eq!(h.betti(1), 2 * g as usize);
            assert_eq!(h.betti(2), 1);
            assert!(h.groups.iter().all(|grp| grp.torsion.is_empty()));
        }
    }

    #[test]
    fn tate_ngons_are_tori() {
        for n in 1..=6u32 {
            let cw = SurfaceComplex::new(&tate_ngon(n)).unwrap();
            let h = homology(cw.complex());
            assert_eq!(h.betti(0), 1);
            assert_eq!(h.betti(1), 2);
            assert_eq!(h.betti(2), 1);
        }
    }

    #[test]
    fn marks_open_the_surface() {
        let g = DualGraph {
            name: "marked".into(),
            vertices: vec![Vertex { id: "v0".into(), genus: 1, multiplicity: 1, marks: 2 }],
            edges: vec![],
        };
        let cw = SurfaceComplex::new(&g).unwrap();
        let h = homology(cw.complex());
        // Genus 1 with two boundary circles: chi = -2, H_2 = 0.
        assert_eq!(h.betti(0), 1);
        assert_eq!(h.betti(1), 3);
        assert_eq!(h.betti(2), 0);
        assert_eq!(h.euler_characteristic(), -2);
    }

    #[test]
    fn rejects_non_reduced_and_invalid() {
        let mut g = tate_ngon(2);
        g.vertices[0].multiplicity = 2;
        assert!(matches!(SurfaceComplex::new(&g), Err(FiberError::NotSemistable)));
        let broken = DualGraph {
            name: "broken".into(),
            vertices: vec![Vertex { id: "v0".into(), genus: 0, multiplicity: 1, marks: 0 }],
            edges: vec![Edge { id: "e0".into(), ends: ("v0".into(), "vX".into()) }],
        };
        assert!(matches!(SurfaceComplex::new(&broken), Err(FiberError::InvalidGraph(_))));
    }

    #[test]
    fn twist_moves_only_one_tail() {
        let cw = SurfaceComplex::new(&tate_ngon(2)).unwrap();
        let tw = cw.twist("e0").unwrap();
        let (t0, t1) = cw.tails("e0").unwrap();
        let c = cw.node_circle("e0").unwrap();
        let image = tw.block(1).apply(&cw.unit_chain(t0));
        assert_eq!(image[t0], BigInt::from(1));
        assert_eq!(image[c], BigInt::from(1));
        let image = tw.block(1).apply(&cw.unit_chain(t1));
        assert_eq!(image, cw.unit_chain(t1));
        assert!(cw.twist("nope").is_none());
    }
}

//! Triangulated refinement of the fiber surface and the intersection
//! form computed through cup products.
//!
//! Every polygon is coned off from a fresh center vertex: one radial
//! edge per corner, one triangle per letter.  The triangles carry
//! vertex orderings compatible with the directed 1-cells, so cochain
//! cup products can be evaluated with the front-face/back-face rule.
//! Pairing dual 1-cocycles against the fundamental class recovers the
//! intersection form on first homology, independently of how fiber
//! cycle bases are chosen; inverting that pairing is the oracle the
//! closed-form basis is checked against.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::intlin::{integer_solve, ChainComplex, HomologyBasis, IntMat};

use super::cw::SurfaceComplex;

/// Ordered triangle `(v0, v1, v2)`, stored through its directed edge
/// cells: `e01` and `e02` radial, `e12` an original surface cell.
struct Triangle {
    e01: usize,
    e12: usize,
    e02: usize,
}

pub struct TriangulatedSurface {
    complex: ChainComplex,
    triangles: Vec<Triangle>,
    /// Orientation coefficients of the triangles summing to the
    /// relative fundamental class (counterclockwise polygons).
    fundamental: Vec<i8>,
    surface_one_cells: usize,
    closed: bool,
}

pub fn triangulate(cw: &SurfaceComplex) -> TriangulatedSurface {
    let polygons = cw.words().len();
    let n0 = cw.zero_cells() + polygons;
    let mut one_cell_ends: Vec<(usize, usize)> = Vec::new();
    for cell in 0..cw.one_cells() {
        one_cell_ends.push(cw.one_cell_ends(cell));
    }
    // Radial edges point away from the centers.
    let mut radial_start: Vec<usize> = Vec::new();
    for (poly, word) in cw.words().iter().enumerate() {
        let center = cw.zero_cells() + poly;
        radial_start.push(one_cell_ends.len());
        for &(cell, dir) in word {
            let (tail, head) = cw.one_cell_ends(cell);
            let start = if dir > 0 { tail } else { head };
            one_cell_ends.push((center, start));
        }
    }
    let n1 = one_cell_ends.len();

    let mut triangles = Vec::new();
    let mut fundamental = Vec::new();
    for (poly, word) in cw.words().iter().enumerate() {
        let first = radial_start[poly];
        let len = word.len();
        for (k, &(cell, dir)) in word.iter().enumerate() {
            let r_here = first + k;
            let r_next = first + (k + 1) % len;
            // dir > 0: simplex (o, start, end), boundary cell - r_next
            // + r_here.  dir < 0: simplex (o, end, start) traverses
            // the cell forwards as its middle face.
            let (e01, e02) = if dir > 0 { (r_here, r_next) } else { (r_next, r_here) };
            triangles.push(Triangle { e01, e12: cell, e02 });
            fundamental.push(dir);
        }
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
    let mut d2 = IntMat::zero(n1, triangles.len());
    for (col, t) in triangles.iter().enumerate() {
        for (cell, sign) in [(t.e12, 1), (t.e02, -1), (t.e01, 1)] {
            let mut entry = d2.at(cell, col).clone();
            entry += BigInt::from(sign);
            d2.set(cell, col, entry);
        }
    }
    let complex = ChainComplex::new(vec![n0, n1, triangles.len()], vec![d1, d2])
        .expect("triangle boundaries are closed");

    let closed = cw.boundary_circles().is_empty();
    TriangulatedSurface {
        complex,
        triangles,
        fundamental,
        surface_one_cells: cw.one_cells(),
        closed,
    }
}

impl TriangulatedSurface {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Fundamental 2-cycle (closed surfaces only).
    pub fn fundamental_cycle(&self) -> Option<Vec<BigInt>> {
        if !self.closed {
            return None;
        }
        Some(self.fundamental.iter().map(|&s| BigInt::from(s)).collect())
    }

    /// Include a 1-chain of the polygon complex by zero-padding the
    /// radial coordinates.
    pub fn include_chain(&self, chain: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(chain.len(), self.surface_one_cells);
        let mut out = chain.to_vec();
        out.resize(self.complex.dim(1), BigInt::zero());
        out
    }

    /// Intersection matrix of the given cycle classes, computed as
    /// the inverse transpose of the cup-product pairing of their dual
    /// cocycles against the fundamental class.  The cycles are given
    /// as 1-chains of the polygon complex and must form a basis of
    /// first homology; returns `None` on surfaces with boundary,
    /// where the pairing degenerates.
    pub fn intersection_form(&self, cycles: &[Vec<BigInt>]) -> Option<IntMat> {
        if !self.closed {
            return None;
        }
        let included: Vec<Vec<BigInt>> =
            cycles.iter().map(|z| self.include_chain(z)).collect();
        let basis = HomologyBasis::new(&self.complex, 1);
        assert_eq!(basis.rank(), cycles.len(), "cycles must span first homology");
        assert!(basis.torsion().is_empty(), "surface homology is torsion-free");

        let duals: Vec<Vec<BigInt>> =
            (0..included.len()).map(|i| self.dual_cocycle(&included, i)).collect();

        let m = cycles.len();
        let mut q = IntMat::zero(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut total = BigInt::zero();
                for (t, tri) in self.triangles.iter().enumerate() {
                    let term = &duals[i][tri.e01] * &duals[j][tri.e12];
                    total += BigInt::from(self.fundamental[t]) * term;
                }
                q.set(i, j, total);
            }
        }
        // Cup pairing of cocycles on a cycle is strictly
        // antisymmetric, and Poincare duality makes it unimodular.
        assert_eq!(q, -&q.transpose(), "cup pairing must be antisymmetric");
        assert!(
            q.determinant().abs().is_one(),
            "cup pairing must be unimodular"
        );
        Some(unimodular_inverse(&q).transpose())
    }

    /// Integer cocycle dual to the `i`-th basis cycle: kills all
    /// triangle boundaries, hits `cycles[j]` with value `delta_ij`.
    fn dual_cocycle(&self, cycles: &[Vec<BigInt>], i: usize) -> Vec<BigInt> {
        let n1 = self.complex.dim(1);
        let d2 = self.complex.boundary(2).expect("surface has 2-cells");
        let rows = d2.cols() + cycles.len();
        let mut system = IntMat::zero(rows, n1);
        for t in 0..d2.cols() {
            for cell in 0..n1 {
                system.set(t, cell, d2.at(cell, t).clone());
            }
        }
        for (j, z) in cycles.iter().enumerate() {
            for cell in 0..n1 {
                system.set(d2.cols() + j, cell, z[cell].clone());
            }
        }
        let mut rhs = vec![BigInt::zero(); rows];
        rhs[d2.cols() + i] = BigInt::one();
        integer_solve(&system, &rhs).expect("dual cocycle exists for a homology basis")
    }
}

fn unimodular_inverse(q: &IntMat) -> IntMat {
    let dec = crate::intlin::smith_normal_form(q);
    let n = q.rows();
    let mut inv = IntMat::zero(n, n);
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::one();
        let col = dec.solve(&e).expect("unimodular matrices invert over the integers");
        for i in 0..n {
            inv.set(i, j, col[i].clone());
        }
    }
    inv
}

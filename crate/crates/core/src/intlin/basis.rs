use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::complex::ChainComplex;
use super::mat::IntMat;
use super::snf::{integer_kernel, smith_normal_form, SmithDecomposition};

/// Explicit basis of the free part of one homology group, with
/// coordinates for arbitrary cycles and induced matrices for chain
/// self-maps.
///
/// Cycles are kept as chain vectors, so a basis class can be compared
/// against geometrically constructed cycles in the same complex.
pub struct HomologyBasis {
    kernel: IntMat,
    kernel_dec: SmithDecomposition,
    rel: SmithDecomposition,
    torsion_slots: usize,
}

impl HomologyBasis {
    pub fn new(c: &ChainComplex, n: usize) -> Self {
        let kernel = match c.boundary(n) {
            Some(d) => integer_kernel(d),
            None => IntMat::identity(c.dim(n)),
        };
        let kernel_dec = smith_normal_form(&kernel);
        let boundaries = match c.boundary(n + 1) {
            Some(d) => d.clone(),
            None => IntMat::zero(c.dim(n), 0),
        };
        // Boundary images in kernel coordinates; solvable because the
        // kernel basis is saturated.
        let mut in_kernel = IntMat::zero(kernel.cols(), boundaries.cols());
        for j in 0..boundaries.cols() {
            let col = boundaries.column(j);
            let x = kernel_dec.solve(&col).expect("boundaries are cycles");
            for i in 0..kernel.cols() {
                in_kernel.set(i, j, x[i].clone());
            }
        }
        let rel = smith_normal_form(&in_kernel);
        let torsion_slots = rel.rank();
        HomologyBasis { kernel, kernel_dec, rel, torsion_slots }
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.kernel.cols() - self.torsion_slots
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.rel.nontrivial_factors()
    }

    /// Chain vector of the `j`-th free basis class.
    pub fn basis_cycle(&self, j: usize) -> Vec<BigInt> {
        assert!(j < self.rank(), "basis index out of range");
        let col = self.rel.u_inv.column(self.torsion_slots + j);
        self.kernel.apply(&col)
    }

    /// Free-part coordinates of a chain, or `None` if it is not a
    /// cycle.  Torsion components are discarded; callers working with
    /// torsion-free homology lose nothing.
    pub fn coords(&self, chain: &[BigInt]) -> Option<Vec<BigInt>> {
        let x = self.kernel_dec.solve(chain)?;
        let y = self.rel.u.apply(&x);
        Some(y[self.torsion_slots..].to_vec())
    }

    /// Matrix of the induced action of a degree-`n` chain self-map
    /// block on the free part, columns indexed by basis classes.
    pub fn induced(&self, block: &IntMat) -> IntMat {
        let m = self.rank();
        let mut out = IntMat::zero(m, m);
        for j in 0..m {
            let image = block.apply(&self.basis_cycle(j));
            let coords = self.coords(&image).expect("chain maps preserve cycles");
            for i in 0..m {
                out.set(i, j, coords[i].clone());
            }
        }
        out
    }

    /// Whether two chains are homologous (both cycles, equal classes
    /// including torsion).
    pub fn homologous(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let (Some(xa), Some(xb)) = (self.kernel_dec.solve(a), self.kernel_dec.solve(b)) else {
            return false;
        };
        let ya = self.rel.u.apply(&xa);
        let yb = self.rel.u.apply(&xb);
        for i in 0..ya.len() {
            let diff = &ya[i] - &yb[i];
            if i < self.torsion_slots {
                let d = self.rel.s.at(i, i);
                if !(&diff % d).is_zero() {
                    return false;
                }
            } else if !diff.is_zero() {
                return false;
            }
        }
        true
    }
}

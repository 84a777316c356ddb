use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::mat::IntMat;
use super::snf::{integer_kernel, rank, smith_normal_form};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    /// Boundary matrix shapes disagree with the stated ranks, or a
    /// composite of consecutive boundaries is nonzero.
    MalformedComplex(String),
    /// A degreewise map fails to commute with the boundaries or has
    /// the wrong shape.
    NotChainMap(String),
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::MalformedComplex(msg) => write!(f, "malformed complex: {msg}"),
            ComplexError::NotChainMap(msg) => write!(f, "not a chain map: {msg}"),
        }
    }
}

/// Bounded chain complex of finitely generated free abelian groups.
///
/// `dims[n]` is the rank of the degree-`n` group for `n = 0..=top`;
/// `diffs[k]` is the boundary from degree `k + 1` to degree `k`.
/// Construction verifies shapes and that consecutive boundaries
/// compose to zero, so every value of this type is a genuine complex.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    diffs: Vec<IntMat>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, diffs: Vec<IntMat>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::MalformedComplex("no degrees".into()));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(ComplexError::MalformedComplex(format!(
                "{} degrees need {} boundaries, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(ComplexError::MalformedComplex(format!(
                    "boundary into degree {k} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !(&diffs[k] * &diffs[k + 1]).is_zero() {
                return Err(ComplexError::MalformedComplex(format!(
                    "d{} after d{} is nonzero",
                    k + 1,
                    k + 2
                )));
            }
        }
        Ok(ChainComplex { dims, diffs })
    }

    /// Complex concentrated in degree 0.
    pub fn point(rank: usize) -> Self {
        ChainComplex { dims: vec![rank], diffs: vec![] }
    }

    /// Top nonempty degree.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// Rank of the degree-`n` chain group; zero outside `0..=top`.
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// Boundary from degree `n` to degree `n - 1`, for `1 <= n <= top`.
    pub fn boundary(&self, n: usize) -> Option<&IntMat> {
        if n == 0 {
            None
        } else {
            self.diffs.get(n - 1)
        }
    }
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex(dims = {:?})", self.dims)
    }
}

/// Degreewise self-map of a chain complex, commuting with boundaries.
#[derive(Clone)]
pub struct ChainSelfMap {
    blocks: Vec<IntMat>,
}

impl ChainSelfMap {
    pub fn new(c: &ChainComplex, blocks: Vec<IntMat>) -> Result<Self, ComplexError> {
        if blocks.len() != c.dims.len() {
            return Err(ComplexError::NotChainMap(format!(
                "{} degree blocks for {} degrees",
                blocks.len(),
                c.dims.len()
            )));
        }
        for (n, b) in blocks.iter().enumerate() {
            if b.rows() != c.dim(n) || b.cols() != c.dim(n) {
                return Err(ComplexError::NotChainMap(format!(
                    "degree {n} block is {}x{}, expected square of size {}",
                    b.rows(),
                    b.cols(),
                    c.dim(n)
                )));
            }
        }
        for n in 1..=c.top() {
            let d = c.boundary(n).unwrap();
            if &(&blocks[n - 1] * d) != &(d * &blocks[n]) {
                return Err(ComplexError::NotChainMap(format!(
                    "degree {n} block does not commute with the boundary"
                )));
            }
        }
        Ok(ChainSelfMap { blocks })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainSelfMap { blocks: c.dims.iter().map(|&d| IntMat::identity(d)).collect() }
    }

    pub fn block(&self, n: usize) -> &IntMat {
        &self.blocks[n]
    }

    /// Composite `self` after `other`.
    pub fn compose(&self, other: &ChainSelfMap) -> ChainSelfMap {
        assert_eq!(self.blocks.len(), other.blocks.len());
        ChainSelfMap {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

/// Structure of one homology group: free rank plus torsion
/// coefficients in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology in every degree `0..=top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologySummary {
    pub groups: Vec<HomologyGroup>,
}

impl HomologySummary {
    pub fn group(&self, n: usize) -> HomologyGroup {
        self.groups.get(n).cloned().unwrap_or(HomologyGroup::free(0))
    }

    pub fn betti(&self, n: usize) -> usize {
        self.group(n).rank
    }

    /// Alternating sum of ranks of the underlying complex equals the
    /// alternating sum of betti numbers, so this is the Euler
    /// characteristic of whatever the complex models.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(n, g)| if n % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, g) in self.groups.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// Integral homology of a bounded complex, degree by degree.
///
/// The rank in degree `n` is `dim - rank d_n - rank d_{n+1}`; the
/// torsion is read off the Smith form of the incoming boundary.
pub fn homology(c: &ChainComplex) -> HomologySummary {
    let top = c.top();
    let mut in_ranks = vec![0usize; top + 2];
    let mut torsions: Vec<Vec<BigInt>> = vec![vec![]; top + 2];
    for n in 1..=top {
        let dec = smith_normal_form(c.boundary(n).unwrap());
        in_ranks[n] = dec.rank();
        torsions[n] = dec.nontrivial_factors();
    }
    let groups = (0..=top)
        .map(|n| HomologyGroup {
            rank: c.dim(n) - in_ranks[n] - in_ranks[n + 1],
            torsion: torsions[n + 1].clone(),
        })
        .collect();
    HomologySummary { groups }
}

/// Chain model of the mapping torus of `t`: the algebraic mapping cone
/// of `1 - t`, one degree taller than the input.  Degree `n` of the
/// cone is `C_{n-1} + C_n` with boundary
/// `(a, b) -> (-d a, d b - (1 - t) a)`.
pub fn mapping_torus_complex(c: &ChainComplex, t: &ChainSelfMap) -> ChainComplex {
    let top = c.top();
    let dims: Vec<usize> =
        (0..=top + 1).map(|n| c.dim(n.wrapping_sub(1)) + c.dim(n)).collect();
    let f: Vec<IntMat> = (0..=top)
        .map(|n| &IntMat::identity(c.dim(n)) - t.block(n))
        .collect();
    let mut diffs = Vec::with_capacity(top + 1);
    for n in 1..=top + 1 {
        let shift_in = c.dim(n - 1);
        let body_in = c.dim(n);
        let shift_out = c.dim(n.wrapping_sub(2));
        let body_out = c.dim(n - 1);
        let mut d = IntMat::zero(shift_out + body_out, shift_in + body_in);
        if n >= 2 {
            d.paste(0, 0, &-c.boundary(n - 1).unwrap());
        }
        d.paste(shift_out, 0, &-&f[n - 1]);
        if n <= top {
            d.paste(shift_out, shift_in, c.boundary(n).unwrap());
        }
        diffs.push(d);
    }
    ChainComplex::new(dims, diffs).expect("cone of a chain self-map is a complex")
}

/// Integral homology of the mapping torus of `t` acting on `c`.
pub fn mapping_torus_homology(c: &ChainComplex, t: &ChainSelfMap) -> HomologySummary {
    homology(&mapping_torus_complex(c, t))
}

/// Tensor product of complexes, modeling a product of spaces.  Degree
/// `n` is the direct sum of `A_p x B_q` over `p + q = n`, blocks in
/// ascending `p`, each block row-major in `(a, b)`; the boundary obeys
/// the sign rule `d(x . y) = dx . y + (-1)^p x . dy`.
pub fn tensor_product(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let (ta, tb) = (a.top(), b.top());
    let top = ta + tb;
    let block_base = |n: usize, p: usize| -> usize {
        (0..p).map(|i| a.dim(i) * b.dim(n.wrapping_sub(i))).sum()
    };
    let dims: Vec<usize> = (0..=top).map(|n| block_base(n, n + 1)).collect();
    let mut diffs = Vec::new();
    for n in 1..=top {
        let mut d = IntMat::zero(dims[n - 1], dims[n]);
        for p in 0..=n {
            let q = n - p;
            let (da, db) = (a.dim(p), b.dim(q));
            if da == 0 || db == 0 {
                continue;
            }
            let col0 = block_base(n, p);
            if p >= 1 {
                let row0 = block_base(n - 1, p - 1);
                let bd = a.boundary(p).unwrap();
                for i in 0..da {
                    for r in 0..a.dim(p - 1) {
                        let coeff = bd.at(r, i);
                        if coeff.is_zero() {
                            continue;
                        }
                        for j in 0..db {
                            d.set(row0 + r * db + j, col0 + i * db + j, coeff.clone());
                        }
                    }
                }
            }
            if q >= 1 {
                let row0 = block_base(n - 1, p);
                let bd = b.boundary(q).unwrap();
                let rb = b.dim(q - 1);
                let sign = if p % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                for j in 0..db {
                    for r in 0..rb {
                        let coeff = bd.at(r, j);
                        if coeff.is_zero() {
                            continue;
                        }
                        for i in 0..da {
                            d.set(row0 + i * rb + r, col0 + i * db + j, &sign * coeff);
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex::new(dims, diffs).expect("tensor differentials anticommute")
}

/// Rank bookkeeping for the long exact sequence of a fibration over
/// the circle: in each degree the mapping-torus betti number must be
/// the corank of `t - 1` on homology in that degree plus the corank
/// one degree down.  Checks ranks only; torsion does not satisfy such
/// additivity.
pub fn wang_rank_consistent(
    c: &ChainComplex,
    t: &ChainSelfMap,
    torus: &HomologySummary,
) -> bool {
    let fiber = homology(c);
    let top = c.top();
    let mut corank = vec![0usize; top + 3];
    for n in 0..=top {
        corank[n + 1] = fiber.betti(n) - induced_rank_of_difference(c, t, n);
    }
    (0..=top + 1).all(|n| {
        let expect = corank[n + 1] + corank[n];
        torus.betti(n) == expect
    })
}

/// Rank of the action of `t - 1` on rational homology in degree `n`.
fn induced_rank_of_difference(c: &ChainComplex, t: &ChainSelfMap, n: usize) -> usize {
    let cycles = match c.boundary(n) {
        Some(d) => integer_kernel(d),
        None => IntMat::identity(c.dim(n)),
    };
    let boundaries = match c.boundary(n + 1) {
        Some(d) => d.clone(),
        None => IntMat::zero(c.dim(n), 0),
    };
    let f = &(t.block(n) * &cycles) - &cycles;
    let stacked = f.hstack(&boundaries);
    rank(&stacked) - rank(&boundaries)
}

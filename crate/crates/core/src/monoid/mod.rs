//! Finitely generated submonoids of a lattice and the maps between
//! them that control local models of a degeneration.
//!
//! A monoid here is a list of integer generators inside `Z^n` with
//! `n <= 4`.  Saturation and exactness are decided by explicit lattice
//! point enumeration against the rational cone of the generators; the
//! cone itself is held as integer facet inequalities
//! ([`cone::RationalCone`]), so every decision in this module is an
//! exact integer computation.

pub mod cone;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::intlin::{lattice_column_basis, smith_normal_form, IntMat, SmithDecomposition};
use cone::RationalCone;

pub const MAX_AMBIENT_RANK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidError {
    /// Ambient lattice rank exceeds the supported bound.
    RankTooLarge(usize),
    /// A generator or matrix row has the wrong length.
    WrongDimension { expected: usize, got: usize },
    /// The matrix does not send every source generator into the
    /// target monoid.
    NotAHomomorphism(String),
    /// A chart needs at least one multiplicity and all of them
    /// positive.
    EmptyMultiplicity,
}

impl fmt::Display for MonoidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidError::RankTooLarge(r) => {
                write!(f, "ambient rank {r} exceeds the supported bound {MAX_AMBIENT_RANK}")
            }
            MonoidError::WrongDimension { expected, got } => {
                write!(f, "expected vectors of length {expected}, got {got}")
            }
            MonoidError::NotAHomomorphism(msg) => write!(f, "not a monoid map: {msg}"),
            MonoidError::EmptyMultiplicity => {
                write!(f, "chart multiplicities must be nonempty and positive")
            }
        }
    }
}

/// Free rank and torsion of an abelian group presented by the module.
/// Groupifications of submonoids of a lattice are always torsion-free;
/// the field is kept so callers can check that fact rather than assume
/// it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupification {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Finitely generated submonoid of `Z^n`, `n <= 4`.
///
/// Zero generators are dropped and duplicates removed at construction;
/// the rational cone and groupification data are precomputed since
/// every interesting operation consults them.
#[derive(Debug, Clone)]
pub struct FsMonoid {
    rank: usize,
    gens: Vec<Vec<BigInt>>,
    cone: RationalCone,
    gp: SmithDecomposition,
    pointed: bool,
}

impl FsMonoid {
    pub fn new(rank: usize, gens: &[Vec<i64>]) -> Result<Self, MonoidError> {
        if rank > MAX_AMBIENT_RANK {
            return Err(MonoidError::RankTooLarge(rank));
        }
        let mut clean: Vec<Vec<BigInt>> = Vec::new();
        for g in gens {
            if g.len() != rank {
                return Err(MonoidError::WrongDimension { expected: rank, got: g.len() });
            }
            let b: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
            if b.iter().all(|e| e.is_zero()) || clean.contains(&b) {
                continue;
            }
            clean.push(b);
        }
        let cone = RationalCone::from_generators(rank, &clean);
        let gen_mat = IntMat::from_fn(rank, clean.len(), |i, j| clean[j][i].clone());
        let gp = smith_normal_form(&gen_mat);
        let pointed = clean.iter().all(|g| {
            let neg: Vec<BigInt> = g.iter().map(|e| -e).collect();
            !cone.contains(&neg)
        });
        Ok(FsMonoid { rank, gens: clean, cone, gp, pointed })
    }

    /// The free monoid `N^r` on the coordinate generators.
    pub fn standard(rank: usize) -> Result<Self, MonoidError> {
        let gens: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| (i == j) as i64).collect()).collect();
        FsMonoid::new(rank, &gens)
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.gens
    }

    pub fn cone(&self) -> &RationalCone {
        &self.cone
    }

    /// No nonzero element has its inverse in the monoid's cone.
    /// Membership queries are exact precisely in this case.
    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    /// Structure of the group generated by the monoid inside `Z^n`.
    /// The Smith diagonal of the generator matrix scales basis vectors
    /// of the image lattice; it never creates finite order, so the
    /// torsion list comes out empty for every input.
    pub fn groupification(&self) -> Groupification {
        Groupification { rank: self.gp.rank(), torsion: vec![] }
    }

    /// Basis matrix (columns) of the groupification lattice.
    pub fn group_basis(&self) -> IntMat {
        let gen_mat = IntMat::from_fn(self.rank, self.gens.len(), |i, j| self.gens[j][i].clone());
        lattice_column_basis(&gen_mat)
    }

    /// Whether `x` lies in the groupification lattice.
    pub fn group_contains(&self, x: &[BigInt]) -> bool {
        self.gp.solve(x).is_some()
    }

    /// Whether `x` is a sum of generators.
    ///
    /// Descent search pruned by cone membership.  For a pointed cone
    /// the searched region is finite and the answer exact; otherwise
    /// the search is clipped to a coordinate box and may miss
    /// decompositions that leave it (the corpus only uses pointed
    /// monoids).
    pub fn contains(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.rank, "point dimension mismatch");
        let clip = if self.pointed { None } else { Some(self.clip_box(x)) };
        let mut seen = BTreeSet::new();
        self.descend(x.to_vec(), &mut seen, clip.as_deref())
    }

    pub fn contains_i64(&self, x: &[i64]) -> bool {
        let b: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.contains(&b)
    }

    fn clip_box(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.rank)
            .map(|j| {
                let spread: BigInt = self.gens.iter().map(|g| g[j].abs()).sum();
                x[j].abs() + BigInt::from(2) * spread
            })
            .collect()
    }

    fn descend(
        &self,
        x: Vec<BigInt>,
        seen: &mut BTreeSet<Vec<BigInt>>,
        clip: Option<&[BigInt]>,
    ) -> bool {
        if x.iter().all(|e| e.is_zero()) {
            return true;
        }
        if !self.cone.contains(&x) {
            return false;
        }
        if let Some(bound) = clip {
            if x.iter().zip(bound).any(|(e, b)| &e.abs() > b) {
                return false;
            }
        }
        if !seen.insert(x.clone()) {
            return false;
        }
        self.gens.iter().any(|g| {
            let next: Vec<BigInt> = x.iter().zip(g).map(|(a, b)| a - b).collect();
            self.descend(next, seen, clip)
        })
    }

    /// Whether every lattice point of the cone that lies in the
    /// groupification already lies in the monoid.
    ///
    /// It suffices to test lattice points in the bounding box of the
    /// fundamental parallelepiped of the generators: any cone point of
    /// the groupification splits as an integral generator combination
    /// plus a fractional remainder inside the parallelepiped.
    pub fn is_saturated(&self) -> bool {
        let (lo, hi) = self.parallelepiped_box();
        !self.find_box_point(&lo, &hi, &mut |y| {
            self.cone.contains(y) && self.group_contains(y) && !self.contains(y)
        })
    }

    fn parallelepiped_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let lo = (0..self.rank)
            .map(|j| self.gens.iter().map(|g| g[j].clone().min(BigInt::zero())).sum())
            .collect();
        let hi = (0..self.rank)
            .map(|j| self.gens.iter().map(|g| g[j].clone().max(BigInt::zero())).sum())
            .collect();
        (lo, hi)
    }

    /// Depth-first walk over the integer points of `[lo, hi]`; true
    /// once `pred` accepts a point.
    fn find_box_point(
        &self,
        lo: &[BigInt],
        hi: &[BigInt],
        pred: &mut dyn FnMut(&[BigInt]) -> bool,
    ) -> bool {
        fn walk(
            lo: &[BigInt],
            hi: &[BigInt],
            cur: &mut Vec<BigInt>,
            pred: &mut dyn FnMut(&[BigInt]) -> bool,
        ) -> bool {
            if cur.len() == lo.len() {
                return pred(cur);
            }
            let i = cur.len();
            let mut v = lo[i].clone();
            while v <= hi[i] {
                cur.push(v.clone());
                if walk(lo, hi, cur, pred) {
                    return true;
                }
                cur.pop();
                v += 1;
            }
            false
        }
        let mut cur = Vec::with_capacity(lo.len());
        walk(lo, hi, &mut cur, pred)
    }

    /// Local Kato-Nakayama data of the chart this monoid presents.
    pub fn kn_local_model(&self) -> KnLocalModel {
        let gp = self.groupification();
        let components: BigInt = gp.torsion.iter().product();
        KnLocalModel {
            cone_dim: gp.rank,
            torus_rank: gp.rank,
            torsion: gp.torsion,
            components,
            saturated: self.is_saturated(),
        }
    }
}

/// Topological shape of the local model over the puncture: a real
/// cone direction for each independent monoid direction and a compact
/// torus of the same rank, with one connected component per torsion
/// class.  `saturated == false` flags inputs whose model is computed
/// from the saturation instead; callers are expected to warn and
/// proceed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnLocalModel {
    pub cone_dim: usize,
    pub torus_rank: usize,
    pub torsion: Vec<BigInt>,
    pub components: BigInt,
    pub saturated: bool,
}

/// Monoid map `source -> target` induced by an integer matrix on the
/// ambient lattices.  Construction checks that every source generator
/// lands in the target monoid.
#[derive(Debug, Clone)]
pub struct MonoidHom {
    source: FsMonoid,
    target: FsMonoid,
    map: IntMat,
}

impl MonoidHom {
    pub fn new(source: FsMonoid, target: FsMonoid, map: IntMat) -> Result<Self, MonoidError> {
        if map.rows() != target.ambient_rank() || map.cols() != source.ambient_rank() {
            return Err(MonoidError::WrongDimension {
                expected: target.ambient_rank() * source.ambient_rank(),
                got: map.rows() * map.cols(),
            });
        }
        for g in source.generators() {
            let image = map.apply(g);
            if !target.contains(&image) {
                return Err(MonoidError::NotAHomomorphism(alloc::format!(
                    "generator {g:?} maps outside the target"
                )));
            }
        }
        Ok(MonoidHom { source, target, map })
    }

    pub fn source(&self) -> &FsMonoid {
        &self.source
    }

    pub fn target(&self) -> &FsMonoid {
        &self.target
    }

    pub fn matrix(&self) -> &IntMat {
        &self.map
    }

    /// Exactness: no point of the source groupification outside the
    /// source monoid may map into the target monoid.
    ///
    /// Witnesses are searched in the coordinate box of twice the
    /// largest generator or matrix entry; see the module notes on
    /// enumeration bounds.
    pub fn is_exact(&self) -> bool {
        let bound = self.witness_bound();
        let n = self.source.ambient_rank();
        let lo: Vec<BigInt> = vec![-bound.clone(); n];
        let hi: Vec<BigInt> = vec![bound; n];
        !self.source.find_box_point(&lo, &hi, &mut |x| {
            self.source.group_contains(x)
                && !self.source.contains(x)
                && self.target.contains(&self.map.apply(x))
        })
    }

    fn witness_bound(&self) -> BigInt {
        let mut m = BigInt::from(1);
        for g in self.source.generators().iter().chain(self.target.generators()) {
            for e in g {
                m = m.max(e.abs());
            }
        }
        for i in 0..self.map.rows() {
            for j in 0..self.map.cols() {
                m = m.max(self.map.at(i, j).abs());
            }
        }
        BigInt::from(2) * (m + 1)
    }

    /// Kummer: the induced map of groupifications is injective with
    /// finite cokernel.
    pub fn is_kummer(&self) -> bool {
        let bs = self.source.group_basis();
        let bt = self.target.group_basis();
        let rs = bs.cols();
        let rt = bt.cols();
        if rs != rt {
            return false;
        }
        let target_dec = smith_normal_form(&bt);
        let mut induced = IntMat::zero(rt, rs);
        for j in 0..rs {
            let image = self.map.apply(&bs.column(j));
            let coords = target_dec
                .solve(&image)
                .expect("images of group basis vectors lie in the target lattice");
            for i in 0..rt {
                induced.set(i, j, coords[i].clone());
            }
        }
        crate::intlin::rank(&induced) == rs
    }
}

/// Chart of a one-parameter model with normal crossings special fiber:
/// `N -> N^r`, `1 -> (a_1, ..., a_r)` with all multiplicities
/// positive.
pub fn good_model_chart(multiplicities: &[u64]) -> Result<MonoidHom, MonoidError> {
    if multiplicities.is_empty() || multiplicities.contains(&0) {
        return Err(MonoidError::EmptyMultiplicity);
    }
    let r = multiplicities.len();
    let source = FsMonoid::new(1, &[vec![1]])?;
    let target = FsMonoid::standard(r)?;
    let map = IntMat::from_fn(r, 1, |i, _| BigInt::from(multiplicities[i]));
    MonoidHom::new(source, target, map)
}

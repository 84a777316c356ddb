//! Finite-coefficient comparisons between the topological models and
//! their algebraic counterparts.
//!
//! Two families of checks live here.  For the standard log point of
//! rank `r`, the topological fiber is a real `r`-torus while the
//! algebraic side is the cohomology of a rank-`r` profinite group
//! acting trivially on `Z/n`; the first is computed from an honest
//! product-of-circles complex, the second from a Koszul resolution
//! whose multipliers are read off the action, and the two tables must
//! coincide.  For a semistable family over the circle, reducing the
//! total complex mod `n` directly must agree with reducing its
//! integral homology through universal coefficients, and the number
//! of `Z/n`-coverings predicted by the degree-one cohomology must
//! match the count read off the integral invariants.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::degen::DualGraph;
use crate::intlin::{
    homology, mapping_torus_complex, mod_n_cohomology, mod_n_homology, tensor_product,
    uct_mod_n_homology, ChainComplex, IntMat, ModNModule,
};
use crate::knfiber::{FiberError, SurfaceComplex};

/// Mod-n cohomology listed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    pub modulus: u64,
    pub degrees: Vec<ModNModule>,
}

impl CohomologyTable {
    /// Ranks per degree when every degree is a free `Z/n`-module,
    /// which is the case in all log-point comparisons.
    pub fn ranks(&self) -> Option<Vec<usize>> {
        self.degrees.iter().map(|m| m.free_rank()).collect()
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]")
    }
}

/// Koszul complex of `r` commuting square matrices acting on the same
/// lattice: degree `k` is one lattice copy per `k`-subset of the
/// operators (subsets in binary order), and the differential removes
/// one index at a time with alternating signs,
/// `d(e_S . x) = sum_i (-1)^{pos(i, S)} e_{S - i} . A_i x`.
///
/// With multipliers `A_i = action(t_i) - 1` this resolves the group
/// cohomology of a free abelian group of rank `r`.
pub fn koszul_complex(multipliers: &[IntMat]) -> ChainComplex {
    let r = multipliers.len();
    let k = multipliers.first().map_or(1, |m| m.rows());
    for m in multipliers {
        assert!(m.rows() == k && m.cols() == k, "multipliers act on one lattice");
    }
    for a in multipliers {
        for b in multipliers {
            assert_eq!(a * b, b * a, "multipliers must commute");
        }
    }
    let subsets: Vec<Vec<usize>> = subsets_by_size(r);
    let size_offsets: Vec<usize> = {
        let mut off = vec![0usize; r + 2];
        for (idx, s) in subsets.iter().enumerate() {
            off[s.len() + 1] = idx + 1;
        }
        for i in 1..off.len() {
            off[i] = off[i].max(off[i - 1]);
        }
        off
    };
    let count = |deg: usize| size_offsets[deg + 1] - size_offsets[deg];
    let dims: Vec<usize> = (0..=r).map(|deg| k * count(deg)).collect();
    let mut diffs = Vec::new();
    for deg in 1..=r {
        let mut d = IntMat::zero(dims[deg - 1], dims[deg]);
        for (col_block, s) in subsets[size_offsets[deg]..size_offsets[deg + 1]]
            .iter()
            .enumerate()
        {
            for (pos, &i) in s.iter().enumerate() {
                let mut smaller = s.clone();
                smaller.remove(pos);
                let row_block = subsets[size_offsets[deg - 1]..size_offsets[deg]]
                    .iter()
                    .position(|t| *t == smaller)
                    .expect("face subset present");
                let sign =
                    if pos % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let a = &multipliers[i];
                for rr in 0..k {
                    for cc in 0..k {
                        let val = a.at(rr, cc);
                        if val.is_zero() {
                            continue;
                        }
                        let mut entry =
                            d.at(row_block * k + rr, col_block * k + cc).clone();
                        entry += &sign * val;
                        d.set(row_block * k + rr, col_block * k + cc, entry);
                    }
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex::new(dims, diffs).expect("koszul differentials square to zero")
}

fn subsets_by_size(r: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0..1usize << r)
        .map(|mask| (0..r).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    all.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    all
}

/// Scalar multipliers, the common case.
pub fn koszul_scalars(multipliers: &[i64]) -> ChainComplex {
    let mats: Vec<IntMat> =
        multipliers.iter().map(|&a| IntMat::from_i64_rows(&[&[a]])).collect();
    koszul_complex(&mats)
}

/// Chain model of the real `r`-torus as an iterated product of
/// circles.
pub fn torus_complex(r: usize) -> ChainComplex {
    let circle = ChainComplex::new(vec![1, 1], vec![IntMat::zero(1, 1)])
        .expect("circle complex");
    let mut out = ChainComplex::point(1);
    for _ in 0..r {
        out = tensor_product(&out, &circle);
    }
    out
}

/// Mod-n cohomology of the topological fiber of the rank-`r` log
/// point.
pub fn torus_cohomology_mod_n(r: usize, n: u64) -> CohomologyTable {
    CohomologyTable { modulus: n, degrees: mod_n_cohomology(&torus_complex(r), n) }
}

/// Mod-n cohomology of a free abelian group of rank `r` acting on the
/// coefficients through the given matrices (the finite-level
/// algebraic side; trivialized coefficients mean identity actions).
/// The multipliers `action - 1` are computed, not assumed.
pub fn group_cohomology_mod_n(actions: &[IntMat], n: u64) -> CohomologyTable {
    let k = actions.first().map_or(1, |m| m.rows());
    let multipliers: Vec<IntMat> =
        actions.iter().map(|a| a - &IntMat::identity(k)).collect();
    let koszul = koszul_complex(&multipliers);
    // The Koszul complex is the cochain model already; its mod-n
    // homology in degree k is H^k.
    CohomologyTable { modulus: n, degrees: mod_n_homology(&koszul, n) }
}

/// Mod-n cohomology of `Z^r` with trivialized coefficients, the
/// finite quotient of the classifying topos of its profinite
/// completion (continuous cohomology of the completion with finite
/// coefficients factors through this).
pub fn group_cohomology_zr_mod_n(r: usize, n: u64) -> CohomologyTable {
    let actions: Vec<IntMat> = (0..r).map(|_| IntMat::identity(1)).collect();
    group_cohomology_mod_n(&actions, n)
}

/// Comparison of the two cohomology tables for the standard log point
/// of rank `r` with `Z/n` coefficients.
#[derive(Debug, Clone)]
pub struct LogPointComparison {
    pub rank: usize,
    pub modulus: u64,
    pub topological: CohomologyTable,
    pub algebraic: CohomologyTable,
}

impl LogPointComparison {
    pub fn agrees(&self) -> bool {
        self.topological == self.algebraic
    }
}

impl fmt::Display for LogPointComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {} mod {}: kato-nakayama {} vs group {}",
            self.rank, self.modulus, self.topological, self.algebraic
        )
    }
}

/// Compare the Kato-Nakayama fiber of the rank-`r` log point with the
/// algebraic side at level `n`: trivialized coefficients, identity
/// actions.
pub fn compare_log_point(r: usize, n: u64) -> LogPointComparison {
    let topological = torus_cohomology_mod_n(r, n);
    let algebraic = group_cohomology_zr_mod_n(r, n);
    LogPointComparison { rank: r, modulus: n, topological, algebraic }
}

/// Mod-n consistency data for one semistable family over the circle.
#[derive(Debug, Clone)]
pub struct ModNReport {
    pub modulus: u64,
    /// Per degree: homology mod n computed directly on the total
    /// complex, and through universal coefficients from integral
    /// homology.
    pub degrees: Vec<(ModNModule, ModNModule)>,
    /// Number of degree-one classes with `Z/n` coefficients, read off
    /// the integral invariants: `n^rank * prod gcd(d, n)`.
    pub predicted_coverings: BigInt,
    /// Order of degree-one mod-n cohomology of the total complex.
    pub degree_one_order: BigInt,
}

impl ModNReport {
    pub fn homology_consistent(&self) -> bool {
        self.degrees.iter().all(|(a, b)| a == b)
    }

    pub fn covering_count_consistent(&self) -> bool {
        self.predicted_coverings == self.degree_one_order
    }

    pub fn passed(&self) -> bool {
        self.homology_consistent() && self.covering_count_consistent()
    }
}

impl fmt::Display for ModNReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {}:", self.modulus)?;
        for (n, (a, b)) in self.degrees.iter().enumerate() {
            let mark = if a == b { "=" } else { "!=" };
            write!(f, " H{n} {a} {mark} {b};")?;
        }
        write!(
            f,
            " coverings {} vs {}",
            self.predicted_coverings, self.degree_one_order
        )
    }
}

/// Reduce the total complex of a semistable family mod `n` along both
/// routes and count its `Z/n`-coverings both ways.
pub fn mapping_torus_mod_n_consistency(
    g: &DualGraph,
    n: u64,
) -> Result<ModNReport, FiberError> {
    let cells = SurfaceComplex::new(g)?;
    let total = mapping_torus_complex(cells.complex(), &cells.monodromy_map());
    let direct = mod_n_homology(&total, n);
    let integral = homology(&total);
    let via_uct = uct_mod_n_homology(&integral, n);
    let degrees: Vec<(ModNModule, ModNModule)> =
        direct.into_iter().zip(via_uct).collect();

    let h1 = integral.group(1);
    let big_n = BigInt::from(n);
    let mut predicted = BigInt::one();
    for _ in 0..h1.rank {
        predicted *= &big_n;
    }
    for d in &h1.torsion {
        predicted *= d.gcd(&big_n);
    }
    let degree_one_order = mod_n_cohomology(&total, n)
        .get(1)
        .map_or_else(BigInt::one, |m| m.order());

    Ok(ModNReport {
        modulus: n,
        degrees,
        predicted_coverings: predicted,
        degree_one_order,
    })
}

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::complex::{ChainComplex, HomologySummary};
use super::mat::IntMat;
use super::snf::{integer_kernel, lattice_column_basis, smith_normal_form};

/// Finitely generated module over `Z/n` in invariant-factor form:
/// a direct sum of `Z/f` with each factor dividing the next and every
/// factor dividing `n`.  This is the full isomorphism class; no
/// freeness over `Z/n` is assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModNModule {
    pub modulus: BigInt,
    pub factors: Vec<BigInt>,
}

impl ModNModule {
    pub fn trivial(n: &BigInt) -> Self {
        ModNModule { modulus: n.clone(), factors: vec![] }
    }

    /// Number of elements.
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    /// Rank if the module is free over `Z/n`, otherwise `None`.
    pub fn free_rank(&self) -> Option<usize> {
        if self.factors.iter().all(|f| f == &self.modulus) {
            Some(self.factors.len())
        } else {
            None
        }
    }
}

impl fmt::Display for ModNModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<alloc::string::String> =
            self.factors.iter().map(|d| alloc::format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Structure of `{x : a x = 0 mod n} / (im b + n Z^c)` where `a` and
/// `b` act on `Z^c` from the right and left respectively.
///
/// Both homology and cohomology mod n reduce to this shape.  The
/// computation stays integral: the numerator is the projection of an
/// integer kernel, the denominator a sublattice, and the quotient is
/// read off a Smith form in coordinates of the numerator lattice.
pub fn quotient_structure(a: &IntMat, b: &IntMat, n: u64) -> ModNModule {
    assert!(n >= 1, "modulus must be positive");
    let c = a.cols();
    assert_eq!(b.rows(), c, "denominator lives in the wrong lattice");
    let big_n = BigInt::from(n);

    // Numerator lattice L = {x : a x = 0 mod n}, full rank since it
    // contains n Z^c.
    let basis = if a.rows() == 0 {
        IntMat::identity(c)
    } else {
        let stacked = a.hstack(&IntMat::identity(a.rows()).scale(&big_n));
        let ker = integer_kernel(&stacked);
        let gens = IntMat::from_fn(c, ker.cols(), |i, j| ker.at(i, j).clone());
        lattice_column_basis(&gens)
    };
    assert_eq!(basis.cols(), c, "numerator lattice must be full rank");

    // Denominator generators: columns of b together with n e_i.
    let denom = b.hstack(&IntMat::identity(c).scale(&big_n));

    // Coordinates of the denominator in the numerator basis.  The
    // division is exact because the denominator is contained in the
    // numerator.
    let dec = smith_normal_form(&basis);
    let coords = IntMat::from_fn(c, denom.cols(), |i, j| {
        let t: BigInt = (0..c).map(|k| dec.u.at(i, k) * denom.at(k, j)).sum();
        let d = dec.s.at(i, i);
        debug_assert!((&t % d).is_zero(), "denominator escapes the numerator lattice");
        &t / d
    });
    let coords = &dec.v * &coords;

    let diag = smith_normal_form(&coords).diagonal();
    assert!(diag.iter().all(|d| !d.is_zero()), "quotient must be finite");
    let factors: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    debug_assert!(
        factors.iter().all(|f| (&big_n % f).is_zero()),
        "quotient not annihilated by the modulus"
    );
    ModNModule { modulus: big_n, factors }
}

/// Homology with `Z/n` coefficients in every degree, by lattice
/// quotients (no universal-coefficient shortcut).
pub fn mod_n_homology(c: &ChainComplex, n: u64) -> Vec<ModNModule> {
    (0..=c.top())
        .map(|k| {
            let a = match c.boundary(k) {
                Some(d) => d.clone(),
                None => IntMat::zero(0, c.dim(k)),
            };
            let b = match c.boundary(k + 1) {
                Some(d) => d.clone(),
                None => IntMat::zero(c.dim(k), 0),
            };
            quotient_structure(&a, &b, n)
        })
        .collect()
}

/// Cohomology with `Z/n` coefficients: the same quotient shape applied
/// to transposed boundaries.
pub fn mod_n_cohomology(c: &ChainComplex, n: u64) -> Vec<ModNModule> {
    (0..=c.top())
        .map(|k| {
            let a = match c.boundary(k + 1) {
                Some(d) => d.transpose(),
                None => IntMat::zero(0, c.dim(k)),
            };
            let b = match c.boundary(k) {
                Some(d) => d.transpose(),
                None => IntMat::zero(c.dim(k), 0),
            };
            quotient_structure(&a, &b, n)
        })
        .collect()
}

/// Invariant-factor chain of a finite abelian group given as an
/// unordered list of cyclic orders.
pub fn invariant_chain(cyclic: &[BigInt], modulus: &BigInt) -> ModNModule {
    let mut by_prime: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for c in cyclic {
        let mut m = c.clone();
        assert!(!m.is_zero(), "cyclic order must be finite");
        let mut p = BigInt::from(2);
        while &(&p * &p) <= &m {
            let mut e = 0u32;
            while (&m % &p).is_zero() {
                m = &m / &p;
                e += 1;
            }
            if e > 0 {
                by_prime.entry(p.clone()).or_default().push(e);
            }
            p += 1;
        }
        if m > BigInt::one() {
            by_prime.entry(m).or_default().push(1);
        }
    }
    let slots = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = vec![BigInt::one(); slots];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in exps.into_iter().enumerate() {
            // Largest exponents go to the last slots so each factor
            // divides the next.
            let slot = slots - 1 - i;
            factors[slot] *= p.pow(e);
        }
    }
    ModNModule { modulus: modulus.clone(), factors }
}

/// Mod-n homology predicted from integral homology by universal
/// coefficients: `H_k (x) Z/n` plus `Tor(H_{k-1}, Z/n)`.
pub fn uct_mod_n_homology(integral: &HomologySummary, n: u64) -> Vec<ModNModule> {
    let big_n = BigInt::from(n);
    (0..integral.groups.len())
        .map(|k| {
            let mut cyclic: Vec<BigInt> = Vec::new();
            let g = integral.group(k);
            for _ in 0..g.rank {
                cyclic.push(big_n.clone());
            }
            for d in &g.torsion {
                cyclic.push(d.gcd(&big_n));
            }
            if k >= 1 {
                for d in &integral.group(k - 1).torsion {
                    cyclic.push(d.gcd(&big_n));
                }
            }
            cyclic.retain(|c| !c.is_one());
            invariant_chain(&cyclic, &big_n)
        })
        .collect()
}

/// Mod-n cohomology predicted from integral homology:
/// `Hom(H_k, Z/n)` plus `Ext(H_{k-1}, Z/n)`.
pub fn uct_mod_n_cohomology(integral: &HomologySummary, n: u64) -> Vec<ModNModule> {
    // For finitely generated H with Z/n coefficients both routes give
    // the same cyclic orders degreewise.
    uct_mod_n_homology(integral, n)
}

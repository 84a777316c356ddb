use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rational polyhedral cone `{y : r . y >= 0 for every row r}`,
/// described by integer facet inequalities.
///
/// Built from generators by Fourier-Motzkin elimination.  Everything
/// is homogeneous, so eliminating a variable only ever combines rows
/// with positive integer multipliers and the arithmetic stays in `Z`.
#[derive(Debug, Clone)]
pub struct RationalCone {
    dim: usize,
    ineqs: Vec<Vec<BigInt>>,
}

impl RationalCone {
    /// Cone spanned by the columns-as-vectors in `gens`, each of
    /// length `dim`.
    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        assert!(gens.iter().all(|g| g.len() == dim), "generator dimension mismatch");
        let k = gens.len();
        // Variables (c_1..c_k, y_1..y_dim); rows encode c >= 0 and
        // +-(y - sum c_i g_i) >= 0.
        let width = k + dim;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..k {
            let mut r = vec![BigInt::zero(); width];
            r[i] = BigInt::from(1);
            rows.push(r);
        }
        for j in 0..dim {
            let mut r = vec![BigInt::zero(); width];
            for (i, g) in gens.iter().enumerate() {
                r[i] = -g[j].clone();
            }
            r[k + j] = BigInt::from(1);
            rows.push(r.clone());
            for e in r.iter_mut() {
                *e = -e.clone();
            }
            rows.push(r);
        }
        for t in 0..k {
            rows = eliminate(rows, t);
        }
        let ineqs = rows
            .into_iter()
            .map(|r| {
                debug_assert!(r[..k].iter().all(|e| e.is_zero()));
                normalize(r[k..].to_vec())
            })
            .filter(|r| !r.iter().all(|e| e.is_zero()))
            .collect::<Vec<_>>();
        let mut cone = RationalCone { dim, ineqs };
        cone.dedup();
        debug_assert!(gens.iter().all(|g| cone.contains(g)));
        cone
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, y: &[BigInt]) -> bool {
        assert_eq!(y.len(), self.dim, "point dimension mismatch");
        self.ineqs.iter().all(|r| {
            let v: BigInt = r.iter().zip(y).map(|(a, b)| a * b).sum();
            !v.is_negative()
        })
    }

    /// Sum of all facet forms: nonnegative on the cone, and strictly
    /// positive away from the lineality space.  On a pointed cone this
    /// is a height function for descent arguments.
    pub fn height(&self, y: &[BigInt]) -> BigInt {
        self.ineqs
            .iter()
            .map(|r| -> BigInt { r.iter().zip(y).map(|(a, b)| a * b).sum() })
            .sum()
    }

    fn dedup(&mut self) {
        self.ineqs.sort();
        self.ineqs.dedup();
    }
}

/// One Fourier-Motzkin step: all rows with zero coefficient at `t`,
/// plus positive combinations of each (positive, negative) pair.
fn eliminate(rows: Vec<Vec<BigInt>>, t: usize) -> Vec<Vec<BigInt>> {
    let mut zero = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for r in rows {
        match r[t].sign() {
            num_bigint::Sign::NoSign => zero.push(r),
            num_bigint::Sign::Plus => pos.push(r),
            num_bigint::Sign::Minus => neg.push(r),
        }
    }
    let mut out: Vec<Vec<BigInt>> = zero.into_iter().map(normalize).collect();
    for p in &pos {
        for n in &neg {
            let combined: Vec<BigInt> = p
                .iter()
                .zip(n)
                .map(|(a, b)| &p[t] * b - &n[t] * a)
                .collect();
            debug_assert!(combined[t].is_zero());
            let combined = normalize(combined);
            if !combined.iter().all(|e| e.is_zero()) {
                out.push(combined);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn normalize(mut r: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for e in &r {
        g = g.gcd(e);
    }
    if !g.is_zero() {
        for e in r.iter_mut() {
            *e = &*e / &g;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quadrant_membership() {
        let cone = RationalCone::from_generators(2, &[big(&[1, 0]), big(&[0, 1])]);
        assert!(cone.contains(&big(&[3, 5])));
        assert!(cone.contains(&big(&[0, 0])));
        assert!(!cone.contains(&big(&[-1, 2])));
        assert!(!cone.contains(&big(&[1, -1])));
    }

    #[test]
    fn skew_cone_membership() {
        // Cone between (1, 0) and (1, 3).
        let cone = RationalCone::from_generators(2, &[big(&[1, 0]), big(&[1, 3])]);
        assert!(cone.contains(&big(&[1, 2])));
        assert!(cone.contains(&big(&[2, 6])));
        assert!(!cone.contains(&big(&[1, 4])));
        assert!(!cone.contains(&big(&[0, 1])));
    }

    #[test]
    fn ray_in_higher_ambient() {
        let cone = RationalCone::from_generators(3, &[big(&[1, 2, 3])]);
        assert!(cone.contains(&big(&[2, 4, 6])));
        assert!(!cone.contains(&big(&[1, 2, 4])));
        assert!(!cone.contains(&big(&[-1, -2, -3])));
    }

    #[test]
    fn halfplane_contains_line() {
        let cone = RationalCone::from_generators(2, &[big(&[1, 0]), big(&[-1, 0]), big(&[0, 1])]);
        assert!(cone.contains(&big(&[-7, 0])));
        assert!(cone.contains(&big(&[7, 1])));
        assert!(!cone.contains(&big(&[0, -1])));
        // Height vanishes along the lineality line.
        assert!(cone.height(&big(&[5, 0])).is_zero());
        assert!(cone.height(&big(&[0, 1])) > BigInt::zero());
    }

    #[test]
    fn zero_cone() {
        let cone = RationalCone::from_generators(2, &[]);
        assert!(cone.contains(&big(&[0, 0])));
        assert!(!cone.contains(&big(&[1, 0])));
        assert!(!cone.contains(&big(&[0, -1])));
    }

    #[test]
    fn full_dimensional_simplicial_cone_in_rank_4() {
        let gens: Vec<Vec<BigInt>> = (0..4)
            .map(|i| (0..4).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        let cone = RationalCone::from_generators(4, &gens);
        assert!(cone.contains(&big(&[1, 1, 1, 1])));
        assert!(!cone.contains(&big(&[1, 1, 1, -1])));
    }
}

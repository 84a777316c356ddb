use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::mat::IntMat;

/// Smith normal form `u * a * v = s` with `u`, `v` unimodular, `s`
/// diagonal, entries nonnegative and each dividing the next.
///
/// The inverses are tracked through the elimination rather than
/// recomputed, so lattice bases can be read off exactly:
/// the columns of `a * v` are `s[j][j]` times the columns of `u_inv`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMat,
    pub v: IntMat,
    pub u_inv: IntMat,
    pub v_inv: IntMat,
    pub s: IntMat,
}

impl SmithDecomposition {
    /// Diagonal entries of `s`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let t = self.s.rows().min(self.s.cols());
        (0..t).map(|i| self.s.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    /// Invariant factors greater than one: the torsion coefficients of
    /// the cokernel.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
    }
}

/// Elimination state.  Every operation keeps five matrices in sync so
/// that `u * a * v == s`, `u * u_inv == 1`, `v * v_inv == 1` at all
/// times.
struct Worker {
    s: IntMat,
    u: IntMat,
    v: IntMat,
    u_inv: IntMat,
    v_inv: IntMat,
}

impl Worker {
    fn new(a: &IntMat) -> Self {
        Worker {
            s: a.clone(),
            u: IntMat::identity(a.rows()),
            v: IntMat::identity(a.cols()),
            u_inv: IntMat::identity(a.rows()),
            v_inv: IntMat::identity(a.cols()),
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.s, &mut self.u] {
            for c in 0..m.cols() {
                let a = m.at(i, c).clone();
                let b = m.at(j, c).clone();
                m.set(i, c, b);
                m.set(j, c, a);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let a = m.at(r, i).clone();
            let b = m.at(r, j).clone();
            m.set(r, i, b);
            m.set(r, j, a);
        }
    }

    /// row_i += k * row_j on `s` and `u`; the inverse column operation
    /// on `u_inv`.
    fn row_add(&mut self, i: usize, j: usize, k: &BigInt) {
        assert_ne!(i, j);
        for m in [&mut self.s, &mut self.u] {
            for c in 0..m.cols() {
                let val = m.at(i, c) + k * m.at(j, c);
                m.set(i, c, val);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let val = m.at(r, j) - k * m.at(r, i);
            m.set(r, j, val);
        }
    }

    fn row_neg(&mut self, i: usize) {
        for m in [&mut self.s, &mut self.u] {
            for c in 0..m.cols() {
                let val = -m.at(i, c);
                m.set(i, c, val);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let val = -m.at(r, i);
            m.set(r, i, val);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.s, &mut self.v] {
            for r in 0..m.rows() {
                let a = m.at(r, i).clone();
                let b = m.at(r, j).clone();
                m.set(r, i, b);
                m.set(r, j, a);
            }
        }
        let m = &mut self.v_inv;
        for c in 0..m.cols() {
            let a = m.at(i, c).clone();
            let b = m.at(j, c).clone();
            m.set(i, c, b);
            m.set(j, c, a);
        }
    }

    /// col_j += k * col_i on `s` and `v`; the inverse row operation on
    /// `v_inv`.
    fn col_add(&mut self, j: usize, i: usize, k: &BigInt) {
        assert_ne!(i, j);
        for m in [&mut self.s, &mut self.v] {
            for r in 0..m.rows() {
                let val = m.at(r, j) + k * m.at(r, i);
                m.set(r, j, val);
            }
        }
        let m = &mut self.v_inv;
        for c in 0..m.cols() {
            let val = m.at(i, c) - k * m.at(j, c);
            m.set(i, c, val);
        }
    }
}

/// Smallest-magnitude nonzero entry of `s` at or past `(p, p)`.
fn best_pivot(s: &IntMat, p: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in p..s.rows() {
        for j in p..s.cols() {
            let e = s.at(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if s.at(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn diagonalize(w: &mut Worker) {
    let t = w.s.rows().min(w.s.cols());
    for p in 0..t {
        loop {
            let Some((bi, bj)) = best_pivot(&w.s, p) else {
                return;
            };
            w.row_swap(p, bi);
            w.col_swap(p, bj);
            for i in p + 1..w.s.rows() {
                if !w.s.at(i, p).is_zero() {
                    let q = w.s.at(i, p) / w.s.at(p, p);
                    if !q.is_zero() {
                        w.row_add(i, p, &-q);
                    }
                }
            }
            for j in p + 1..w.s.cols() {
                if !w.s.at(p, j).is_zero() {
                    let q = w.s.at(p, j) / w.s.at(p, p);
                    if !q.is_zero() {
                        w.col_add(j, p, &-q);
                    }
                }
            }
            let col_clear = (p + 1..w.s.rows()).all(|i| w.s.at(i, p).is_zero());
            let row_clear = (p + 1..w.s.cols()).all(|j| w.s.at(p, j).is_zero());
            if col_clear && row_clear {
                break;
            }
            // Remainders smaller than the pivot survive; the next pass
            // picks one of them, so the pivot magnitude strictly drops.
        }
    }
}

/// Replaces the diagonal pair `(d_p, d_{p+1})` by `(gcd, lcm)` using
/// unimodular operations confined to rows and columns `p`, `p+1`.
fn fix_pair(w: &mut Worker, p: usize) {
    w.col_add(p, p + 1, &BigInt::one());
    loop {
        let b = w.s.at(p + 1, p).clone();
        if b.is_zero() {
            break;
        }
        let a = w.s.at(p, p).clone();
        if a.is_zero() {
            w.row_swap(p, p + 1);
            continue;
        }
        let q = &b / &a;
        if q.is_zero() {
            w.row_swap(p, p + 1);
        } else {
            w.row_add(p + 1, p, &-q);
        }
    }
    let g = w.s.at(p, p).clone();
    let c = w.s.at(p, p + 1).clone();
    if !c.is_zero() {
        let q = &c / &g;
        w.col_add(p + 1, p, &-q);
    }
    debug_assert!(w.s.at(p, p + 1).is_zero());
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith_normal_form(a: &IntMat) -> SmithDecomposition {
    let mut w = Worker::new(a);
    diagonalize(&mut w);
    let t = w.s.rows().min(w.s.cols());
    // Enforce the divisibility chain.  Fixing the first offending pair
    // strictly shrinks that diagonal entry, so the scan terminates.
    loop {
        let mut violated = None;
        for p in 0..t.saturating_sub(1) {
            let a = w.s.at(p, p).clone();
            let b = w.s.at(p + 1, p + 1).clone();
            let broken = if a.is_zero() { !b.is_zero() } else { !(&b % &a).is_zero() };
            if broken {
                violated = Some(p);
                break;
            }
        }
        match violated {
            Some(p) => fix_pair(&mut w, p),
            None => break,
        }
    }
    for p in 0..t {
        if w.s.at(p, p).is_negative() {
            w.row_neg(p);
        }
    }
    SmithDecomposition { u: w.u, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv, s: w.s }
}

/// Rank of an integer matrix (over the rationals).
pub fn rank(a: &IntMat) -> usize {
    smith_normal_form(a).rank()
}

/// Columns form a basis of the integer kernel lattice `{x : a x = 0}`.
/// The basis is saturated: any integer kernel vector is an integer
/// combination of the columns.
pub fn integer_kernel(a: &IntMat) -> IntMat {
    let dec = smith_normal_form(a);
    let t = a.rows().min(a.cols());
    let idx: Vec<usize> =
        (0..a.cols()).filter(|&j| j >= t || dec.s.at(j, j).is_zero()).collect();
    dec.v.select_columns(&idx)
}

/// One integer solution of `a x = y`, if any exists.
pub fn integer_solve(a: &IntMat, y: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), y.len(), "solve length mismatch");
    smith_normal_form(a).solve(y)
}

impl SmithDecomposition {
    /// One integer solution of `a x = y` for the decomposed matrix,
    /// reusing the stored transforms.
    pub fn solve(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(self.s.rows(), y.len(), "solve length mismatch");
        let z = self.u.apply(y);
        let t = self.s.rows().min(self.s.cols());
        let mut w = vec![BigInt::zero(); self.s.cols()];
        for (j, zj) in z.iter().enumerate() {
            if j < t && !self.s.at(j, j).is_zero() {
                let d = self.s.at(j, j);
                if !(zj % d).is_zero() {
                    return None;
                }
                w[j] = zj / d;
            } else if !zj.is_zero() {
                return None;
            }
        }
        Some(self.v.apply(&w))
    }
}

/// Basis matrix of the column lattice of `gens`; the input columns may
/// be dependent or redundant.  Reading `u_inv` columns against the
/// Smith diagonal gives an honest basis.
pub fn lattice_column_basis(gens: &IntMat) -> IntMat {
    let dec = smith_normal_form(gens);
    let r = dec.rank();
    IntMat::from_fn(gens.rows(), r, |i, j| dec.u_inv.at(i, j) * dec.s.at(j, j))
}

/// Diagonal the Smith form must have, recomputed independently as
/// quotients of gcds of k x k minors.  Exponential in the matrix size;
/// meant for cross-checks on small matrices only.
pub fn gcd_minors_diagonal(a: &IntMat) -> Vec<BigInt> {
    let t = a.rows().min(a.cols());
    let mut diag = Vec::with_capacity(t);
    let mut prev = BigInt::one();
    for k in 1..=t {
        let g = gcd_of_k_minors(a, k);
        if g.is_zero() {
            for _ in k..=t {
                diag.push(BigInt::zero());
            }
            break;
        }
        diag.push(&g / &prev);
        prev = g;
    }
    diag
}

fn gcd_of_k_minors(a: &IntMat, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    let row_sets = k_subsets(a.rows(), k);
    let col_sets = k_subsets(a.cols(), k);
    for rs in &row_sets {
        for cs in &col_sets {
            let minor = IntMat::from_fn(k, k, |i, j| a.at(rs[i], cs[j]).clone());
            g = num_integer::Integer::gcd(&g, &minor.determinant());
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

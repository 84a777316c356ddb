use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::IntMat;
use super::snf::smith_normal_form;

/// Witness that a 2x2 integer matrix is conjugate in `GL_2(Z)` to the
/// standard shear `[[1, n], [0, 1]]`.
///
/// `basis_change` is unimodular and satisfies
/// `t * basis_change == basis_change * elementary_transvection(n)`.
#[derive(Debug, Clone)]
pub struct TransvectionCertificate {
    pub n: BigInt,
    pub basis_change: IntMat,
}

/// The standard shear `[[1, n], [0, 1]]`.
pub fn elementary_transvection(n: &BigInt) -> IntMat {
    let mut m = IntMat::identity(2);
    m.set(0, 1, n.clone());
    m
}

/// Decides whether a 2x2 integer matrix is conjugate over `GL_2(Z)` to
/// `[[1, n], [0, 1]]` for some `n >= 1`, and if so produces the
/// conjugating basis.
///
/// Such matrices are exactly those with `t != 1` and `(t - 1)^2 = 0`;
/// then `n` is the gcd of the entries of `t - 1`.  The basis is
/// `(u, w)` where `u` is a primitive generator of the image of `t - 1`
/// and `w` completes it unimodularly, with signs arranged so the shear
/// comes out with `+n`.
pub fn transvection_conjugacy(t: &IntMat) -> Option<TransvectionCertificate> {
    assert!(t.rows() == 2 && t.cols() == 2, "2x2 input required");
    let n_mat = t - &IntMat::identity(2);
    if n_mat.is_zero() || !(&n_mat * &n_mat).is_zero() {
        return None;
    }
    let n = n_mat.content();
    debug_assert_eq!(
        smith_normal_form(&n_mat).diagonal(),
        alloc::vec![n.clone(), BigInt::zero()]
    );

    // Primitive generator of the image: any nonzero column, divided by
    // its content.
    let col = (0..2)
        .map(|j| n_mat.column(j))
        .find(|c| c.iter().any(|e| !e.is_zero()))
        .expect("nonzero nilpotent has a nonzero column");
    let g = col[0].gcd(&col[1]);
    let u = [&col[0] / &g, &col[1] / &g];

    // Complete u to a determinant-one basis via Bezout.
    let e = u[0].extended_gcd(&u[1]);
    debug_assert!(e.gcd.is_one());
    // e.x * u0 + e.y * u1 = 1, so (u, w) with w = (-y, x) has det 1.
    let w = [-e.y.clone(), e.x.clone()];
    let mut m = IntMat::zero(2, 2);
    m.set(0, 0, u[0].clone());
    m.set(1, 0, u[1].clone());
    m.set(0, 1, w[0].clone());
    m.set(1, 1, w[1].clone());
    debug_assert!(m.determinant().is_one());

    // In this basis the map is [[1, s*n], [0, 1]] with s = +-1; a
    // column flip of sign repairs s = -1 at the cost of det(m) = -1,
    // which is still unimodular.
    let shear = &m.determinant() * shear_coefficient(&n_mat, &m);
    let s = shear.sign();
    if s == num_bigint::Sign::Minus {
        m.set(0, 1, -w[0].clone());
        m.set(1, 1, -w[1].clone());
    }

    let cert = TransvectionCertificate { n: n.clone(), basis_change: m };
    let lhs = t * &cert.basis_change;
    let rhs = &cert.basis_change * &elementary_transvection(&n);
    if lhs == rhs && cert.basis_change.is_unimodular() && n.is_positive() {
        Some(cert)
    } else {
        None
    }
}

/// Entry (0, 1) of `m^{-1} (t - 1) m` scaled by `det m`: the shear
/// numerator before sign normalization.
fn shear_coefficient(n_mat: &IntMat, m: &IntMat) -> BigInt {
    // For 2x2, adj(m) = [[d, -b], [-c, a]].
    let adj = IntMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => m.at(1, 1).clone(),
        (0, 1) => -m.at(0, 1),
        (1, 0) => -m.at(1, 0),
        _ => m.at(0, 0).clone(),
    });
    let conj = &(&adj * n_mat) * m;
    conj.at(0, 1).clone()
}

//! Exact integer linear algebra.
//!
//! All homology in this crate reduces to Smith normal form of integer
//! matrices, so this module carries the shared machinery: dense
//! [`IntMat`] over `BigInt`, [`smith_normal_form`] with unimodular
//! transforms and their inverses, bounded chain complexes with integer
//! [`homology`], the algebraic mapping torus over the circle, mod-n
//! reductions, and the 2x2 unipotent normal-form certificate.

mod basis;
mod complex;
mod mat;
mod modn;
mod snf;
mod transvection;

pub use basis::HomologyBasis;
pub use complex::{
    homology, mapping_torus_complex, mapping_torus_homology, tensor_product,
    wang_rank_consistent, ChainComplex, ChainSelfMap, ComplexError, HomologyGroup,
    HomologySummary,
};
pub use mat::IntMat;
pub use modn::{
    invariant_chain, mod_n_cohomology, mod_n_homology, quotient_structure, uct_mod_n_cohomology,
    uct_mod_n_homology, ModNModule,
};
pub use snf::{
    gcd_minors_diagonal, integer_kernel, integer_solve, lattice_column_basis, rank,
    smith_normal_form, SmithDecomposition,
};
pub use transvection::{
    elementary_transvection, transvection_conjugacy, TransvectionCertificate,
};

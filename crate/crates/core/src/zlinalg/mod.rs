//! Exact integer linear algebra: Smith normal form, kernels, cokernels and
//! homology of bounded complexes of finitely generated free abelian groups.

mod complex;
mod matrix;
mod smith;

pub use complex::{
    cohomology_of_complex, format_groups, homology_of_complex, FreeChainComplex,
    FreeCochainComplex, HomologyGroup, HomologyRecord,
};
pub use matrix::IntMatrix;
pub use smith::{
    abs_determinant, cokernel_projection, invariant_factors, is_unimodular, kernel, kernel_basis,
    rank, smith_normal_form, unimodular_inverse, CokernelProjection, Kernel, SmithDecomposition,
};

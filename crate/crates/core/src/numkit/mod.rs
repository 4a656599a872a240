//! Dense complex linear algebra and quantum-state primitives.

mod linalg;
mod matrix;
mod tensor;

pub use linalg::{
    eigh, eigvals_general, eigvalsh, fast_matmul, joint_eigenbasis, orthonormal_complement,
    polar_decomposition, psd_sqrt, qr, range_basis, spectral_decomposition, svd,
    trace_distance, unitary_sqrt, SpectralDecomposition, Svd,
};
pub use matrix::{hs_inner, ComplexMatrix, Ket, I, ONE, ZERO};
pub use tensor::{
    max_entangled, partial_trace, permute_ket, permute_subsystems, reduced_state, tensor, tensor_all,
};

pub use num_complex::Complex64;

/// Default tolerance for structural predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("matrix dimensions must be positive")]
    EmptyMatrix,
    #[error("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    EntryCount { rows: usize, cols: usize, len: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("subsystem dimensions {dims:?} do not match matrix dimension {n}")]
    Subsystems { dims: Vec<usize>, n: usize },
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("eigenvalue {0:.3e} is below the negative tolerance")]
    NegativeEigenvalue(f64),
    #[error("decomposition did not converge: {0}")]
    NoConvergence(&'static str),
}

/// `1`, `Z`, `X`, `Y` in that order.
pub fn paulis() -> [ComplexMatrix; 4] {
    let o = ZERO;
    let l = ONE;
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[vec![l, o], vec![o, -l]]),
        ComplexMatrix::from_rows(&[vec![o, l], vec![l, o]]),
        ComplexMatrix::from_rows(&[vec![o, -I], vec![I, o]]),
    ]
}

//! Canonicalization of errorless protocols with a qubit message register.
//!
//! Every such protocol is locally equivalent to one where, on the support of
//! the shared state, encoder `i` acts as `sum_r P_r (x) S_r sigma_i S_r^*`
//! with `sigma = (1, Z, X, Y)`. [`canonicalize`] constructs the equivalence
//! in four stages: [`to_nice_form`], [`block_diagonalize`], [`match_blocks`]
//! and [`pauli_frame`].

mod block;
mod frame;
mod matching;
mod nice_form;

use crate::numkit::{
    max_entangled, paulis, permute_subsystems, tensor, trace_distance, ComplexMatrix, NumError,
    SpectralDecomposition,
};
use crate::protocol::{Protocol, ProtocolError};

pub use block::{block_diagonalize, BlockForm, EncoderBlocks};
pub use frame::pauli_frame;
pub use matching::{common_eigenvector, match_blocks, MatchedBlocks};
pub use nice_form::to_nice_form;

/// Default tolerance for every stage.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RigidityError {
    #[error("canonicalization needs a qubit message register, got dimension {0}")]
    NotQubit(usize),
    #[error("nice form item {item} fails: residual {residual:.3e}")]
    NiceForm { item: u8, residual: f64 },
    #[error("encoder {encoder} block {block}: hermitian form residual {residual:.3e}")]
    Hermitian {
        encoder: usize,
        block: usize,
        residual: f64,
    },
    #[error("block operator is not a traceless Hermitian unitary: {0}")]
    BadBlock(String),
    #[error("triple product has norm {0:.12}, expected 1")]
    NoCommonEigenvector(f64),
    #[error("no triangle in the overlap graph with rank {remaining} left")]
    NoTriangle { remaining: usize },
    #[error("deflation left ranks {got:?}, expected {want:?}")]
    Deflation { got: [usize; 3], want: [usize; 3] },
    #[error("frame input: {0}")]
    Frame(String),
    #[error(transparent)]
    Numeric(#[from] NumError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// A protocol in nice form together with the maps that produced it.
///
/// `protocol` has `tau' = (V (x) 1) tau (V (x) 1)^*` and encoders
/// `(C_i (x) 1) U_i V^*`; `w` maps `B` isometrically into `B' (x) B''` with
/// `(1 (x) w) tau' (1 (x) w)^* = rho (x) |EPR><EPR|`.
#[derive(Debug, Clone)]
pub struct NiceFormData {
    pub protocol: Protocol,
    pub v: ComplexMatrix,
    pub w: ComplexMatrix,
    pub c: Vec<ComplexMatrix>,
    pub rho: ComplexMatrix,
    pub dim_b_prime: usize,
    /// Eigenspaces of `rho^{A'}` with positive eigenvalue. The projectors sum
    /// to `support`, not to the identity.
    pub pi_groups: SpectralDecomposition,
    pub support: ComplexMatrix,
}

impl NiceFormData {
    pub fn dim_a_prime(&self) -> usize {
        self.protocol.dim_a_prime
    }

    /// `rho^{A'}`
    pub fn zeta(&self) -> ComplexMatrix {
        crate::numkit::partial_trace(&self.rho, &[self.dim_a_prime(), self.dim_b_prime], &[0])
            .expect("dimensions fixed on construction")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub p: ComplexMatrix,
    pub s: ComplexMatrix,
    pub sign: i8,
}

/// Witness of local equivalence to the block Pauli form.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalDecomposition {
    pub v: ComplexMatrix,
    pub w: ComplexMatrix,
    pub c: Vec<ComplexMatrix>,
    pub rho: ComplexMatrix,
    pub blocks: Vec<Block>,
}

impl CanonicalDecomposition {
    pub fn dim_a_prime(&self) -> usize {
        self.c.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn dim_b_prime(&self) -> usize {
        self.rho.rows() / self.dim_a_prime().max(1)
    }

    /// `sum_r P_r (x) S_r sigma_i S_r^*` for `sigma = (1, Z, X, Y)`.
    pub fn block_operator(&self, i: usize) -> ComplexMatrix {
        let sigma = &paulis()[i];
        let n = self.dim_a_prime();
        self.blocks
            .iter()
            .fold(ComplexMatrix::zeros(2 * n, 2 * n), |acc, b| {
                &acc + &tensor(&b.p, &b.s.conjugate_by(sigma))
            })
    }

    /// `rho (x) |EPR><EPR|` in `A' A'' B' B''` order.
    pub fn target_state(&self) -> ComplexMatrix {
        let (a, bp) = (self.dim_a_prime(), self.dim_b_prime());
        let joint = tensor(&self.rho, &max_entangled(2).density());
        permute_subsystems(&joint, &[a, bp, 2, 2], &[0, 2, 1, 3])
            .expect("dimensions fixed on construction")
    }

    /// The protocol this decomposition describes exactly:
    /// `tau = (V (x) W)^* (rho (x) EPR) (V (x) W)` and
    /// `U_i = (C_i (x) 1) R_i V`. Needs a square `W`.
    pub fn to_protocol(&self) -> Result<Protocol, ProtocolError> {
        let a = self.dim_a_prime();
        if self.c.len() != 4 || !self.w.is_square() || self.v.shape() != (2 * a, 2 * a) {
            return Err(ProtocolError::Parameters(
                "decomposition needs 4 corrections, a square W and V on A' (x) A''".into(),
            ));
        }
        let vw = tensor(&self.v, &self.w);
        let tau = vw.adjoint().conjugate_by(&self.target_state());
        let id2 = ComplexMatrix::identity(2);
        let encoders = (0..4)
            .map(|i| tensor(&self.c[i], &id2).matmul(&self.block_operator(i)).matmul(&self.v))
            .collect();
        Protocol::new(a, 2, self.w.rows(), tau, encoders)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    /// Trace distance between `(V (x) W) tau (V (x) W)^*` and `rho (x) EPR`.
    pub state_residual: f64,
    /// Per encoder, the trace distance between `L_i tau' L_i^*` and
    /// `R_i tau' R_i^*`.
    pub encoder_residuals: Vec<f64>,
    pub pass: bool,
}

impl DecompositionReport {
    pub fn max_residual(&self) -> f64 {
        self.encoder_residuals
            .iter()
            .copied()
            .fold(self.state_residual, f64::max)
    }
}

fn shape_ok(p: &Protocol, dec: &CanonicalDecomposition) -> bool {
    let a = p.dim_a_prime;
    dec.v.shape() == (2 * a, 2 * a)
        && dec.w.cols() == p.dim_b
        && dec.w.rows() % 2 == 0
        && dec.c.len() == 4
        && dec.c.iter().all(|c| c.shape() == (a, a))
        && dec.rho.rows() == a * dec.w.rows() / 2
        && dec
            .blocks
            .iter()
            .all(|b| b.p.shape() == (a, a) && b.s.shape() == (2, 2))
}

/// Checks the decomposition against the protocol it claims to describe.
/// Signs are not used: `(-R) w (-R)^* = R w R^*`.
pub fn verify_decomposition(
    p: &Protocol,
    dec: &CanonicalDecomposition,
    tol: f64,
) -> DecompositionReport {
    if p.dim_a_dbl != 2 || p.message_count() != 4 || !shape_ok(p, dec) {
        return DecompositionReport {
            state_residual: f64::INFINITY,
            encoder_residuals: vec![f64::INFINITY; 4],
            pass: false,
        };
    }
    let vw = tensor(&dec.v, &dec.w);
    let tau_prime = vw.conjugate_by(&p.tau);
    let state_residual = trace_distance(&tau_prime, &dec.target_state()).unwrap_or(f64::INFINITY);
    let id_b = ComplexMatrix::identity(dec.w.rows());
    let id2 = ComplexMatrix::identity(2);
    let v_star = dec.v.adjoint();
    let encoder_residuals = (0..4)
        .map(|i| {
            let l = tensor(&dec.c[i].adjoint(), &id2).matmul(&p.encoders[i]).matmul(&v_star);
            let r = dec.block_operator(i);
            let lt = tensor(&l, &id_b).conjugate_by(&tau_prime);
            let rt = tensor(&r, &id_b).conjugate_by(&tau_prime);
            trace_distance(&lt, &rt).unwrap_or(f64::INFINITY)
        })
        .collect::<Vec<_>>();
    let pass = state_residual <= tol && encoder_residuals.iter().all(|&e| e <= tol);
    DecompositionReport {
        state_residual,
        encoder_residuals,
        pass,
    }
}

/// Runs the full chain and returns rank-one blocks on the support of
/// `rho^{A'}` plus one block with `S = 1` on its complement.
pub fn canonicalize(p: &Protocol, tol: f64) -> Result<CanonicalDecomposition, RigidityError> {
    let nf = to_nice_form(p, tol)?;
    let bf = block_diagonalize(&nf, tol)?;
    let mb = match_blocks(&bf, tol)?;
    let a = nf.dim_a_prime();

    let mut blocks = Vec::with_capacity(mb.k.len() + 1);
    let mut sign_op = mb.complement.clone();
    for (k, triple) in mb.k.iter().zip(&mb.triples) {
        let (s, sign) = pauli_frame(&triple[0], &triple[1], &triple[2], tol)?;
        sign_op = &sign_op + &k.scale_re(f64::from(sign));
        blocks.push(Block {
            p: k.clone(),
            s,
            sign,
        });
    }
    if mb.complement.trace().re > 0.5 {
        blocks.push(Block {
            p: mb.complement.clone(),
            s: ComplexMatrix::identity(2),
            sign: 1,
        });
    }

    // Corrections accumulate as X_i = [sign] G_i S_i C_i; the decomposition
    // stores C_i = X_i^*.
    let mut c = vec![ComplexMatrix::identity(a)];
    for i in 1..4 {
        let mut x = mb.sign_fix[i - 1]
            .matmul(&bf.s[i - 1])
            .matmul(&nf.c[i]);
        if i == 3 {
            x = sign_op.matmul(&x);
        }
        c.push(x.adjoint());
    }
    Ok(CanonicalDecomposition {
        v: nf.v,
        w: nf.w,
        c,
        rho: nf.rho,
        blocks,
    })
}

/// Merges blocks whose frames agree up to a phase and whose signs agree.
pub fn merge_blocks(dec: &CanonicalDecomposition, tol: f64) -> CanonicalDecomposition {
    let mut merged: Vec<Block> = Vec::new();
    for b in &dec.blocks {
        let same = merged.iter_mut().find(|m| {
            let g = m.s.adjoint().matmul(&b.s);
            // g must be a phase times the identity.
            let ph = g.trace() / 2.0;
            m.sign == b.sign && g.distance(&ComplexMatrix::identity(2).scale(ph)) <= tol
        });
        match same {
            Some(m) => m.p = &m.p + &b.p,
            None => merged.push(b.clone()),
        }
    }
    CanonicalDecomposition {
        blocks: merged,
        ..dec.clone()
    }
}

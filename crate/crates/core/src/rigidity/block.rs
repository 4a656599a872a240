use num_complex::Complex64;

use crate::numkit::{
    eigh, joint_eigenbasis, polar_decomposition, tensor, unitary_sqrt,
    ComplexMatrix, Ket,
};
use crate::protocol::Protocol;

use super::{NiceFormData, RigidityError};

/// `U_i =_tau sum_l Q_l (x) R_l` for one encoder, over the support of `rho^{A'}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderBlocks {
    pub q: Vec<ComplexMatrix>,
    pub r: Vec<ComplexMatrix>,
}

impl EncoderBlocks {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn operator(&self) -> ComplexMatrix {
        let n = self.q.first().map_or(0, ComplexMatrix::rows);
        self.q
            .iter()
            .zip(&self.r)
            .fold(ComplexMatrix::zeros(2 * n, 2 * n), |acc, (q, r)| &acc + &tensor(q, r))
    }
}

/// Output of [`block_diagonalize`] for encoders 2, 3 and 4 (indices 1..4).
///
/// The `Q` of each encoder sum to `support`; on `complement` the encoders
/// are unconstrained by the shared state.
#[derive(Debug, Clone)]
pub struct BlockForm {
    pub encoders: Vec<EncoderBlocks>,
    /// `S_i` for encoder indices 1, 2, 3.
    pub s: Vec<ComplexMatrix>,
    /// The nice-form protocol with encoders `(S_i (x) 1) U_i`.
    pub protocol: Protocol,
    pub support: ComplexMatrix,
    pub complement: ComplexMatrix,
}

/// Entry `(x, y)` of the `A''` block `(s, t)` of an operator on `C^m (x) C^2`.
fn quadrant(m: &ComplexMatrix, s: usize, t: usize) -> ComplexMatrix {
    let n = m.rows() / 2;
    ComplexMatrix::from_fn(n, n, |x, y| m[(2 * x + s, 2 * y + t)])
}

struct Restricted {
    /// `E T_F^*` in the coordinates of the eigenspace basis.
    correction: ComplexMatrix,
    /// Pairs `(vectors, R)` in the same coordinates.
    blocks: Vec<(Vec<Ket>, ComplexMatrix)>,
}

/// Hermitianizes one restricted encoder `[F G; H -F]` and splits it into
/// `sum Q (x) R`.
fn restrict(
    u_hat: &ComplexMatrix,
    encoder: usize,
    block: usize,
    tol: f64,
) -> Result<Restricted, RigidityError> {
    let m = u_hat.rows() / 2;
    let f = quadrant(u_hat, 0, 0);
    let g = quadrant(u_hat, 0, 1);
    let h = quadrant(u_hat, 1, 0);
    let (d, t) = polar_decomposition(&f)?;
    let t_star = t.adjoint();
    let k = t_star.matmul(&d).matmul(&t);
    let wg = t_star.matmul(&g);
    let wh_star = t_star.matmul(&h);

    let (vals, vecs) = eigh(&k)?;
    let gamma_dim = vals.iter().take_while(|&&x| x > tol).count();
    let mut e = ComplexMatrix::zeros(m, m);
    if gamma_dim > 0 {
        let gamma = vecs.block(0, 0, m, gamma_dim);
        e = gamma.matmul(&gamma.adjoint());
    }
    if gamma_dim < m {
        // On ker K the off-diagonal blocks are unitary: E_0^2 = W_H W_G^*.
        let ker = vecs.block(0, gamma_dim, m, m - gamma_dim);
        let target = ker.adjoint().matmul(&wh_star.adjoint()).matmul(&wg.adjoint()).matmul(&ker);
        let e0 = unitary_sqrt(&target, tol)?;
        e = &e + &ker.matmul(&e0).matmul(&ker.adjoint());
    }
    let correction = e.matmul(&t_star);
    let hermitian = tensor(&correction, &ComplexMatrix::identity(2)).matmul(u_hat);
    let residual = hermitian.distance(&hermitian.adjoint());
    if residual > tol {
        return Err(RigidityError::Hermitian {
            encoder,
            block,
            residual,
        });
    }

    let kk = quadrant(&hermitian, 0, 0).hermitian_part();
    let l = quadrant(&hermitian, 0, 1);
    let l_re = l.hermitian_part();
    let l_im = (&l - &l.adjoint()).scale(Complex64::new(0.0, -0.5));
    let basis = joint_eigenbasis(&[kk.clone(), l_re, l_im], 10.0 * tol)?;

    let mut blocks: Vec<(Vec<Ket>, ComplexMatrix)> = Vec::new();
    for v in basis.columns() {
        let alpha = v.inner(&kk.apply(&v)).re;
        let c = v.inner(&l.apply(&v));
        let r = ComplexMatrix::from_rows(&[
            vec![Complex64::new(alpha, 0.0), c],
            vec![c.conj(), Complex64::new(-alpha, 0.0)],
        ]);
        let eig_residual = kk.apply(&v).sub(&v.scale(alpha.into())).norm()
            + l.apply(&v).sub(&v.scale(c)).norm();
        let unit_residual = (alpha * alpha + c.norm_sqr() - 1.0).abs();
        if eig_residual > 10.0 * tol || unit_residual > 10.0 * tol {
            return Err(RigidityError::BadBlock(format!(
                "encoder {encoder} block {block}: eigen residual {eig_residual:.2e}, unitarity {unit_residual:.2e}"
            )));
        }
        match blocks.iter_mut().find(|(_, r0)| r0.distance(&r) <= 10.0 * tol) {
            Some((vs, _)) => vs.push(v),
            None => blocks.push((vec![v], r)),
        }
    }
    Ok(Restricted { correction, blocks })
}

/// Corrects each encoder on every eigenspace of `rho^{A'}` so that it
/// becomes `sum Q (x) R` with traceless Hermitian unitary `R`.
pub fn block_diagonalize(nf: &NiceFormData, tol: f64) -> Result<BlockForm, RigidityError> {
    let a = nf.dim_a_prime();
    let id2 = ComplexMatrix::identity(2);
    let complement = &ComplexMatrix::identity(a) - &nf.support;
    let mut encoders = Vec::with_capacity(3);
    let mut s_list = Vec::with_capacity(3);
    let mut corrected = vec![nf.protocol.encoders[0].clone()];
    for i in 1..4 {
        let u = &nf.protocol.encoders[i];
        let mut s = complement.clone();
        let mut eb = EncoderBlocks {
            q: Vec::new(),
            r: Vec::new(),
        };
        for (k, bk) in nf.pi_groups.bases.iter().enumerate() {
            let lifted = tensor(bk, &id2);
            let u_hat = lifted.adjoint().matmul(u).matmul(&lifted);
            let res = restrict(&u_hat, i, k, tol)?;
            s = &s + &bk.matmul(&res.correction).matmul(&bk.adjoint());
            for (vs, r) in res.blocks {
                let cols: Vec<Ket> = vs.iter().map(|v| bk.apply(v)).collect();
                let q = ComplexMatrix::from_columns(&cols);
                eb.q.push(q.matmul(&q.adjoint()));
                eb.r.push(r);
            }
        }
        corrected.push(tensor(&s, &id2).matmul(u));
        encoders.push(eb);
        s_list.push(s);
    }
    let p = &nf.protocol;
    let protocol = Protocol::new(p.dim_a_prime, 2, p.dim_b, p.tau.clone(), corrected)?;
    Ok(BlockForm {
        encoders,
        s: s_list,
        protocol,
        support: nf.support.clone(),
        complement,
    })
}

/// Columns spanning the range of a projector, for callers that need a basis.
pub(super) fn projector_basis(q: &ComplexMatrix) -> Vec<Ket> {
    let (vals, vecs) = eigh(q).expect("projectors are Hermitian");
    (0..vals.len()).filter(|&k| vals[k] > 0.5).map(|k| vecs.column(k)).collect()
}

use crate::numkit::{
    eigh, orthonormal_complement, partial_trace, spectral_decomposition, tensor, trace_distance,
    ComplexMatrix, Ket, SpectralDecomposition,
};
use crate::protocol::Protocol;

use super::{NiceFormData, RigidityError};

fn check(item: u8, residual: f64, tol: f64) -> Result<(), RigidityError> {
    if residual <= tol && residual.is_finite() {
        Ok(())
    } else {
        Err(RigidityError::NiceForm { item, residual })
    }
}

/// Columns of `vecs` whose eigenvalue exceeds `rel * vals[0]`.
fn leading_count(vals: &[f64], rel: f64) -> usize {
    let top = vals.first().copied().unwrap_or(0.0);
    vals.iter().take_while(|&&x| x > rel * top && x > 0.0).count()
}

/// Orthonormal basis of the range of `U (Pi (x) 1) U^*` traced over `A''`
/// and halved, which is a projector of the same rank as `Pi` when the
/// protocol is errorless.
fn image_basis(
    u: &ComplexMatrix,
    basis: &ComplexMatrix,
    a: usize,
    tol: f64,
) -> Result<ComplexMatrix, RigidityError> {
    let m = basis.cols();
    let lifted = tensor(basis, &ComplexMatrix::identity(2));
    let moved = u.matmul(&lifted);
    let proj = moved.matmul(&moved.adjoint());
    let x = partial_trace(&proj, &[a, 2], &[0])?.scale_re(0.5);
    let (vals, vecs) = eigh(&x)?;
    let gap_lo = vals[m - 1];
    let gap_hi = vals.get(m).copied().unwrap_or(0.0);
    let residual = (1.0 - gap_lo).abs().max(gap_hi.abs());
    check(3, residual, tol)?;
    Ok(vecs.block(0, 0, a, m))
}

/// Brings an errorless protocol with `dim A'' = 2` into nice form.
///
/// `V = U_1`; `W` is read off a purification of `tau` by matching Schmidt
/// vectors against an eigenbasis of `rho^{RA'}`; the `C_i` rotate the
/// eigenspaces of `rho^{A'}` moved by each encoder back into place.
pub fn to_nice_form(p: &Protocol, tol: f64) -> Result<NiceFormData, RigidityError> {
    if p.dim_a_dbl != 2 || p.message_count() != 4 {
        return Err(RigidityError::NotQubit(p.dim_a_dbl));
    }
    let a = p.dim_a_prime;
    let b = p.dim_b;
    let na = 2 * a;
    let v = p.encoders[0].clone();
    let v_star = v.adjoint();
    let tau1 = tensor(&v, &ComplexMatrix::identity(b)).conjugate_by(&p.tau);
    let moved: Vec<ComplexMatrix> = p.encoders.iter().map(|u| u.matmul(&v_star)).collect();

    // Purification |xi> = sum_j sqrt(mu_j) |j>_R |e_j>, amplitudes laid out
    // as a matrix with rows (R, A', A'') and columns B.
    let (mu, e) = eigh(&tau1)?;
    let rank = leading_count(&mu, tol);
    let xi = ComplexMatrix::from_fn(rank * na, b, |row, beta| {
        let (j, x) = (row / na, row % na);
        e[(x * b + beta, j)] * mu[j].sqrt()
    });
    let sigma = xi.matmul(&xi.adjoint());
    let rho_ra = partial_trace(&sigma, &[rank * a, 2], &[0])?;
    let half = ComplexMatrix::identity(2).scale_re(0.5);
    check(2, trace_distance(&sigma, &tensor(&rho_ra, &half))?, tol)?;

    // Schmidt vectors on B against the eigenbasis f_k (x) |a> of rho^{RA'} (x) 1/2.
    let (lam, f) = eigh(&rho_ra)?;
    let r = leading_count(&lam, tol);
    let dim_b_prime = r.max(b.div_ceil(2));
    let mut bob: Vec<Ket> = Vec::with_capacity(2 * r);
    for k in 0..r {
        let fk = f.column(k);
        let scale = 1.0 / (lam[k] / 2.0).sqrt();
        for aa in 0..2 {
            let y = fk.tensor(&Ket::basis(2, aa));
            let amps = (0..b)
                .map(|beta| {
                    (0..rank * na)
                        .map(|x| y[x].conj() * xi[(x, beta)])
                        .sum::<crate::numkit::Complex64>()
                        * scale
                })
                .collect();
            bob.push(Ket::new(amps));
        }
    }
    let out_dim = 2 * dim_b_prime;
    let mut w = ComplexMatrix::zeros(out_dim, b);
    for (idx, bv) in bob.iter().enumerate() {
        for beta in 0..b {
            w[(idx, beta)] = bv[beta].conj();
        }
    }
    let in_rest = orthonormal_complement(&bob, b);
    let used: Vec<Ket> = (0..bob.len()).map(|i| Ket::basis(out_dim, i)).collect();
    let out_rest = orthonormal_complement(&used, out_dim);
    for (src, dst) in in_rest.iter().zip(&out_rest) {
        w = &w + &ComplexMatrix::outer(dst, src);
    }

    // rho^{A'B'} from |rho> = sum_k sqrt(lam_k) f_k (x) |k>_{B'}, f_k on (R, A').
    let m2 = ComplexMatrix::from_fn(rank, a * dim_b_prime, |j, col| {
        let (x, k) = (col / dim_b_prime, col % dim_b_prime);
        if k < r {
            f[(j * a + x, k)] * lam[k].sqrt()
        } else {
            crate::numkit::ZERO
        }
    });
    let rho = m2.transpose().matmul(&m2.conj());

    let nf_w = tensor(&ComplexMatrix::identity(na), &w);
    let target = crate::numkit::permute_subsystems(
        &tensor(&rho, &crate::numkit::max_entangled(2).density()),
        &[a, dim_b_prime, 2, 2],
        &[0, 2, 1, 3],
    )?;
    check(2, trace_distance(&nf_w.conjugate_by(&tau1), &target)?, tol)?;

    // Eigenspaces of zeta = rho^{A'}.
    let zeta = partial_trace(&rho, &[a, dim_b_prime], &[0])?;
    let spec = spectral_decomposition(&zeta, tol)?;
    let top = spec.groups[0].0;
    let positive: Vec<usize> = (0..spec.len()).filter(|&k| spec.groups[k].0 > tol * top).collect();
    let pi_groups = SpectralDecomposition {
        groups: positive.iter().map(|&k| spec.groups[k].clone()).collect(),
        bases: positive.iter().map(|&k| spec.bases[k].clone()).collect(),
        tol_used: tol,
    };
    let support_cols: Vec<Ket> = pi_groups.bases.iter().flat_map(|m| m.columns()).collect();
    let support = ComplexMatrix::from_columns(&support_cols);
    let support = support.matmul(&support.adjoint());
    let kernel = orthonormal_complement(&support_cols, a);

    let mut c = vec![ComplexMatrix::identity(a)];
    for u in moved.iter().skip(1) {
        let mut ci = ComplexMatrix::zeros(a, a);
        let mut image_cols: Vec<Ket> = Vec::new();
        for basis in &pi_groups.bases {
            let img = image_basis(u, basis, a, tol)?;
            image_cols.extend(img.columns());
            ci = &ci + &basis.matmul(&img.adjoint());
        }
        let image_rest = orthonormal_complement(&image_cols, a);
        for (dst, src) in kernel.iter().zip(&image_rest) {
            ci = &ci + &ComplexMatrix::outer(dst, src);
        }
        c.push(ci);
    }

    let id2 = ComplexMatrix::identity(2);
    let encoders: Vec<ComplexMatrix> = moved
        .iter()
        .zip(&c)
        .map(|(u, ci)| tensor(ci, &id2).matmul(u))
        .collect();

    check(1, encoders[0].distance(&ComplexMatrix::identity(na)), tol)?;
    let zeta_half = tensor(&zeta, &half);
    for u in &encoders {
        check(3, u.commutator(&zeta_half).frobenius_norm(), tol)?;
    }
    for basis in &pi_groups.bases {
        let pk = tensor(&basis.matmul(&basis.adjoint()), &id2);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let x = pk.matmul(&encoders[i]).matmul(&encoders[j].adjoint()).matmul(&pk);
                    check(4, partial_trace(&x, &[a, 2], &[0])?.frobenius_norm(), tol)?;
                }
            }
        }
    }

    let protocol = Protocol::new(a, 2, b, tau1, encoders)?;
    Ok(NiceFormData {
        protocol,
        v,
        w,
        c,
        rho,
        dim_b_prime,
        pi_groups,
        support,
    })
}

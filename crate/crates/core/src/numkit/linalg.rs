use faer::{Mat, MatRef, Side};
use num_complex::Complex64;

use super::{ComplexMatrix, Ket, NumError, DEFAULT_TOL};

fn to_faer(m: &ComplexMatrix) -> Mat<Complex64> {
    Mat::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

fn from_faer(m: MatRef<'_, Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

fn require_square(m: &ComplexMatrix) -> Result<(), NumError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(NumError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Blocked product; worth it over `matmul` from a few hundred rows up.
pub fn fast_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.cols(), b.rows(), "matmul dimension mismatch");
    let p = to_faer(a) * to_faer(b);
    from_faer(p.as_ref())
}

/// Eigenvalues in descending order and the matching eigenvectors as columns.
/// Only the Hermitian part of `h` is used.
pub fn eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), NumError> {
    require_square(h)?;
    let herm = to_faer(&h.hermitian_part());
    let evd = herm
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| NumError::NoConvergence("hermitian eigensolver"))?;
    let n = h.rows();
    let s = evd.S().column_vector();
    let u = evd.U();
    let vals = (0..n).rev().map(|k| s[k].re).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |r, c| u[(r, n - 1 - c)]);
    Ok((vals, vecs))
}

/// Eigenvalues of the Hermitian part of `h`, descending.
pub fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>, NumError> {
    require_square(h)?;
    let mut vals = to_faer(&h.hermitian_part())
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| NumError::NoConvergence("hermitian eigensolver"))?;
    vals.reverse();
    Ok(vals)
}

/// Eigenvalues of a general square matrix, in solver order.
pub fn eigvals_general(a: &ComplexMatrix) -> Result<Vec<Complex64>, NumError> {
    require_square(a)?;
    to_faer(a)
        .eigenvalues()
        .map_err(|_| NumError::NoConvergence("general eigensolver"))
}

/// Full singular value decomposition `a = u diag(s) v^*`, `s` non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd, NumError> {
    let dec = to_faer(a)
        .svd()
        .map_err(|_| NumError::NoConvergence("svd"))?;
    let s = dec.S().column_vector();
    Ok(Svd {
        u: from_faer(dec.U()),
        s: (0..s.nrows()).map(|k| s[k].re).collect(),
        v: from_faer(dec.V()),
    })
}

/// Householder QR: returns the square `Q` and the upper-triangular `R`.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let dec = to_faer(a).qr();
    (from_faer(dec.compute_Q().as_ref()), from_faer(dec.R()))
}

/// Orthonormal basis of the column space, keeping singular values above
/// `rel_tol` times the largest one.
pub fn range_basis(m: &ComplexMatrix, rel_tol: f64) -> Result<Vec<Ket>, NumError> {
    let dec = svd(m)?;
    let top = dec.s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(Vec::new());
    }
    Ok(dec
        .s
        .iter()
        .enumerate()
        .take_while(|(_, &s)| s > rel_tol * top)
        .map(|(k, _)| dec.u.column(k))
        .collect())
}

/// Completes the orthonormal set `basis` in dimension `n` by Gram-Schmidt
/// over the standard basis vectors, taken in ascending index order.
pub fn orthonormal_complement(basis: &[Ket], n: usize) -> Vec<Ket> {
    let mut all: Vec<Ket> = basis.to_vec();
    let mut out = Vec::new();
    let want = n.saturating_sub(basis.len());
    for i in 0..n {
        if out.len() == want {
            break;
        }
        let mut v = Ket::basis(n, i);
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for b in &all {
                let c = b.inner(&v);
                v = v.sub(&b.scale(c));
            }
        }
        if v.norm() > 1e-6 {
            let v = v.normalized();
            all.push(v.clone());
            out.push(v);
        }
    }
    out
}

/// Eigenvalue groups of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// `(eigenvalue, projector)`, eigenvalues descending.
    pub groups: Vec<(f64, ComplexMatrix)>,
    /// Orthonormal eigenvectors spanning each group, as matrix columns.
    pub bases: Vec<ComplexMatrix>,
    pub tol_used: f64,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.groups[0].1.rows();
        self.groups
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, (l, p)| &acc + &p.scale_re(*l))
    }
}

/// Groups eigenvalues closer than `group_tol` (chained along the sorted
/// spectrum) into a single projector.
pub fn spectral_decomposition(
    h: &ComplexMatrix,
    group_tol: f64,
) -> Result<SpectralDecomposition, NumError> {
    require_square(h)?;
    let dev = h.distance(&h.adjoint());
    if dev > DEFAULT_TOL * h.frobenius_norm().max(1.0) {
        return Err(NumError::NotHermitian(dev));
    }
    let (vals, vecs) = eigh(h)?;
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=vals.len() {
        if k == vals.len() || vals[k - 1] - vals[k] > group_tol {
            spans.push((start, k));
            start = k;
        }
    }
    let n = h.rows();
    let mut groups = Vec::with_capacity(spans.len());
    let mut bases = Vec::with_capacity(spans.len());
    for (a, b) in spans {
        let basis = vecs.block(0, a, n, b - a);
        let mean = vals[a..b].iter().sum::<f64>() / (b - a) as f64;
        groups.push((mean, basis.matmul(&basis.adjoint())));
        bases.push(basis);
    }
    Ok(SpectralDecomposition {
        groups,
        bases,
        tol_used: group_tol,
    })
}

/// `f = d t` with `d` positive semidefinite and `t` unitary.
///
/// On the kernel, `t` pairs the left and right null bases built by
/// [`orthonormal_complement`], so singular inputs give a deterministic result.
pub fn polar_decomposition(f: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), NumError> {
    require_square(f)?;
    let n = f.rows();
    let dec = svd(f)?;
    let cutoff = 1e-13 * dec.s.first().copied().unwrap_or(0.0).max(1.0);
    let rank = dec.s.iter().take_while(|&&s| s > cutoff).count();
    let us: Vec<Ket> = (0..rank).map(|k| dec.u.column(k)).collect();
    let vs: Vec<Ket> = (0..rank).map(|k| dec.v.column(k)).collect();
    let mut d = ComplexMatrix::zeros(n, n);
    let mut t = ComplexMatrix::zeros(n, n);
    for k in 0..rank {
        d = &d + &ComplexMatrix::outer(&us[k], &us[k]).scale_re(dec.s[k]);
        t = &t + &ComplexMatrix::outer(&us[k], &vs[k]);
    }
    let nu = orthonormal_complement(&us, n);
    let nv = orthonormal_complement(&vs, n);
    for (a, b) in nu.iter().zip(&nv) {
        t = &t + &ComplexMatrix::outer(a, b);
    }
    Ok((d, t))
}

/// Square root of a positive semidefinite matrix. Eigenvalues in
/// `[-tol * max(1, |p|), 0)` and those at rounding level are clipped to zero.
pub fn psd_sqrt(p: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix, NumError> {
    let (vals, vecs) = eigh(p)?;
    let floor = -tol * p.frobenius_norm().max(1.0);
    if let Some(&bad) = vals.iter().find(|&&x| x < floor) {
        return Err(NumError::NegativeEigenvalue(bad));
    }
    // Eigenvalues at rounding level are zero; their square roots would not be.
    let noise = 16.0 * f64::EPSILON * vals.len() as f64 * vals.first().copied().unwrap_or(0.0).max(0.0);
    let roots: Vec<f64> = vals
        .iter()
        .map(|&x| if x <= noise { 0.0 } else { x.sqrt() })
        .collect();
    let scaled = ComplexMatrix::from_fn(vecs.rows(), vecs.cols(), |r, c| vecs[(r, c)] * roots[c]);
    Ok(scaled.matmul(&vecs.adjoint()))
}

/// `(1/2) sum |eig(r - s)|`.
pub fn trace_distance(r: &ComplexMatrix, s: &ComplexMatrix) -> Result<f64, NumError> {
    if r.shape() != s.shape() {
        return Err(NumError::ShapeMismatch {
            left: r.shape(),
            right: s.shape(),
        });
    }
    let vals = eigvalsh(&(r - s))?;
    Ok(0.5 * vals.iter().map(|x| x.abs()).sum::<f64>())
}

/// Orthonormal basis (unitary, as columns) that diagonalizes a family of
/// commuting Hermitian matrices. Each matrix refines the eigenspaces of the
/// previous ones; eigenvalues within `tol` count as equal.
pub fn joint_eigenbasis(mats: &[ComplexMatrix], tol: f64) -> Result<ComplexMatrix, NumError> {
    let n = mats.first().map(|m| m.rows()).ok_or(NumError::EmptyMatrix)?;
    let mut blocks = vec![ComplexMatrix::identity(n)];
    for h in mats {
        require_square(h)?;
        let mut next = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.cols() == 1 {
                next.push(b);
                continue;
            }
            let restricted = b.adjoint().matmul(h).matmul(&b);
            let (vals, vecs) = eigh(&restricted)?;
            let rotated = b.matmul(&vecs);
            let mut start = 0;
            for k in 1..=vals.len() {
                if k == vals.len() || vals[k - 1] - vals[k] > tol {
                    next.push(rotated.block(0, start, n, k - start));
                    start = k;
                }
            }
        }
        blocks = next;
    }
    let cols: Vec<Ket> = blocks.iter().flat_map(|b| b.columns()).collect();
    Ok(ComplexMatrix::from_columns(&cols))
}

/// Principal square root of a unitary: eigenphases in `(-pi, pi]` are halved.
pub fn unitary_sqrt(u: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix, NumError> {
    require_square(u)?;
    let re = u.hermitian_part();
    let im = (u - &u.adjoint()).scale(Complex64::new(0.0, -0.5));
    let basis = joint_eigenbasis(&[re, im], tol)?;
    let n = u.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let v = basis.column(k);
        let lam = v.inner(&u.apply(&v));
        let mut theta = lam.arg();
        if theta <= -std::f64::consts::PI + 1e-12 {
            theta = std::f64::consts::PI;
        }
        let root = Complex64::from_polar(1.0, theta / 2.0);
        out = &out + &ComplexMatrix::outer(&v, &v).scale(root);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{paulis, ONE, ZERO};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            ComplexMatrix::from_vec(n, n, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
        })
    }

    fn arb_hermitian() -> impl Strategy<Value = ComplexMatrix> {
        (1usize..6).prop_flat_map(arb_matrix).prop_map(|m| m.hermitian_part())
    }

    #[test]
    fn spectral_z() {
        let z = &paulis()[1];
        let sd = spectral_decomposition(z, 1e-9).unwrap();
        assert_eq!(sd.len(), 2);
        assert!((sd.groups[0].0 - 1.0).abs() < 1e-12);
        assert!(sd.groups[0].1.distance(&ComplexMatrix::real_diag(&[1.0, 0.0])) < 1e-12);
        assert!((sd.groups[1].0 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_degenerate_and_near_degenerate() {
        let h = ComplexMatrix::identity(2).scale_re(0.5);
        let sd = spectral_decomposition(&h, 1e-9).unwrap();
        assert_eq!(sd.len(), 1);
        assert!(sd.groups[0].1.distance(&ComplexMatrix::identity(2)) < 1e-12);

        let h = ComplexMatrix::real_diag(&[1.0, 1.0 + 1e-12]);
        let raw = eigvalsh(&h).unwrap();
        assert!(raw[0] != raw[1]);
        assert_eq!(spectral_decomposition(&h, 1e-9).unwrap().len(), 1);
        assert_eq!(spectral_decomposition(&h, 1e-14).unwrap().len(), 2);
    }

    #[test]
    fn spectral_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            spectral_decomposition(&m, 1e-9),
            Err(NumError::NotHermitian(_))
        ));
    }

    #[test]
    fn polar_examples() {
        let (d, t) = polar_decomposition(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(d.max_abs() == 0.0);
        assert!(t.distance(&ComplexMatrix::identity(3)) < 1e-15);

        let y = &paulis()[3];
        let (d, t) = polar_decomposition(y).unwrap();
        assert!(d.distance(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(t.distance(y) < 1e-12);

        let f = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let (d, t) = polar_decomposition(&f).unwrap();
        assert!(d.distance(&ComplexMatrix::real_diag(&[2.0, 0.0])) < 1e-12);
        assert!(t.distance(&paulis()[2]) < 1e-12);
    }

    #[test]
    fn psd_sqrt_examples() {
        let p = ComplexMatrix::real_diag(&[4.0, 9.0]);
        let r = psd_sqrt(&p, 1e-9).unwrap();
        assert!(r.distance(&ComplexMatrix::real_diag(&[2.0, 3.0])) < 1e-12);

        let plus = Ket::new(vec![ONE, ONE]).normalized();
        let proj = plus.density();
        assert!(psd_sqrt(&proj, 1e-9).unwrap().distance(&proj) < 1e-12);

        // m orthogonal pure projectors scaled by 1/m^2.
        let m = 3;
        let sum = ComplexMatrix::identity(m);
        let r = psd_sqrt(&sum.scale_re(1.0 / 9.0), 1e-9).unwrap();
        assert!(r.distance(&sum.scale_re(1.0 / 3.0)) < 1e-12);

        let neg = ComplexMatrix::real_diag(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&neg, 1e-9), Err(NumError::NegativeEigenvalue(_))));
    }

    #[test]
    fn trace_distance_examples() {
        let rho = ComplexMatrix::real_diag(&[0.3, 0.7]);
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-15);
        let z0 = ComplexMatrix::real_diag(&[1.0, 0.0]);
        let z1 = ComplexMatrix::real_diag(&[0.0, 1.0]);
        assert!((trace_distance(&z0, &z1).unwrap() - 1.0).abs() < 1e-12);
        let mixed = ComplexMatrix::identity(2).scale_re(0.5);
        assert!((trace_distance(&mixed, &z0).unwrap() - 0.5).abs() < 1e-12);
        assert!(trace_distance(&mixed, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn unitary_sqrt_principal_branch() {
        let z = &paulis()[1];
        let r = unitary_sqrt(z, 1e-9).unwrap();
        assert!(r.distance(&ComplexMatrix::diag(&[ONE, c(0.0, 1.0)])) < 1e-12);
        let x = &paulis()[2];
        let r = unitary_sqrt(x, 1e-9).unwrap();
        assert!(r.matmul(&r).distance(x) < 1e-12);
        assert!(r.is_unitary(1e-12));
    }

    #[test]
    fn complement_is_index_ordered() {
        let e1 = Ket::basis(3, 1);
        let comp = orthonormal_complement(&[e1], 3);
        assert_eq!(comp.len(), 2);
        assert!(comp[0].sub(&Ket::basis(3, 0)).norm() < 1e-15);
        assert!(comp[1].sub(&Ket::basis(3, 2)).norm() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn spectral_reconstructs(h in arb_hermitian()) {
            let sd = spectral_decomposition(&h, 1e-9).unwrap();
            prop_assert!(sd.reconstruct().distance(&h) <= 1e-10 * h.frobenius_norm().max(1e-300) + 1e-14);
            let n = h.rows();
            let total = sd.groups.iter().fold(ComplexMatrix::zeros(n, n), |a, (_, p)| &a + p);
            prop_assert!(total.distance(&ComplexMatrix::identity(n)) < 1e-10);
            for (_, p) in &sd.groups {
                prop_assert!(p.is_projector(1e-10));
            }
            for w in sd.groups.windows(2) {
                prop_assert!(w[0].0 - w[1].0 > 1e-9);
            }
        }

        #[test]
        fn polar_reconstructs((n, f) in (1usize..6).prop_flat_map(|n| (Just(n), arb_matrix(n)))) {
            let (d, t) = polar_decomposition(&f).unwrap();
            prop_assert!(d.matmul(&t).distance(&f) <= 1e-10 * (1.0 + f.frobenius_norm()));
            prop_assert!(t.adjoint().matmul(&t).distance(&ComplexMatrix::identity(n)) < 1e-10);
            prop_assert!(d.is_psd(1e-10));
        }

        #[test]
        fn polar_of_rank_deficient(f in arb_matrix(4)) {
            // Zero out two columns so the kernel completion is exercised.
            let g = ComplexMatrix::from_fn(4, 4, |r, c| if c % 2 == 0 { f[(r, c)] } else { ZERO });
            let (d, t) = polar_decomposition(&g).unwrap();
            prop_assert!(d.matmul(&t).distance(&g) <= 1e-10 * (1.0 + g.frobenius_norm()));
            prop_assert!(t.is_unitary(1e-10));
        }

        #[test]
        fn psd_sqrt_squares_back(a in (1usize..6).prop_flat_map(arb_matrix)) {
            let p = a.matmul(&a.adjoint());
            let r = psd_sqrt(&p, 1e-9).unwrap();
            prop_assert!(r.matmul(&r).distance(&p) <= 1e-9 * p.frobenius_norm().max(1.0));
        }

        #[test]
        fn hs_inner_is_sesquilinear(
            a in arb_matrix(3), b in arb_matrix(3), e in arb_matrix(3),
            s in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            use crate::numkit::hs_inner;
            let s = c(s.0, s.1);
            let ab = hs_inner(&a, &b).unwrap();
            prop_assert!((ab - hs_inner(&b, &a).unwrap().conj()).norm() < 1e-12);
            let lhs = hs_inner(&a, &(&b.scale(s) + &e)).unwrap();
            let rhs = ab * s + hs_inner(&a, &e).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-11);
            let lhs = hs_inner(&a.scale(s), &b).unwrap();
            prop_assert!((lhs - s.conj() * ab).norm() < 1e-11);
        }

        #[test]
        fn joint_basis_diagonalizes_commuting(h in arb_hermitian()) {
            let h2 = h.matmul(&h);
            let u = joint_eigenbasis(&[h2.clone(), h.clone()], 1e-9).unwrap();
            prop_assert!(u.is_unitary(1e-10));
            for m in [&h, &h2] {
                let d = u.adjoint().matmul(m).matmul(&u);
                let off: f64 = (0..d.rows())
                    .flat_map(|r| (0..d.cols()).map(move |c| (r, c)))
                    .filter(|(r, c)| r != c)
                    .map(|(r, c)| d[(r, c)].norm())
                    .fold(0.0, f64::max);
                prop_assert!(off < 1e-9 * m.frobenius_norm().max(1.0));
            }
        }
    }
}

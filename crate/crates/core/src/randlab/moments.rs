use rand::Rng;

use crate::numkit::{svd, ComplexMatrix, Ket, ONE};

use super::{haar_unitary, RandError};

/// `E |psi><psi|^{(x) 2}` for `|psi> = (U (x) 1)|Phi_d>`, on `A B C D`.
#[derive(Debug, Clone, PartialEq)]
pub struct MOperator {
    pub d: usize,
    pub beta: f64,
    pub gamma: f64,
    pub matrix: ComplexMatrix,
}

/// `F = sum |i, j><j, i|` on `C^d (x) C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        if c == j * d + i {
            ONE
        } else {
            crate::numkit::ZERO
        }
    })
}

/// Permutation operator on four factors of dimension `d` sending
/// `|x_0 x_1 x_2 x_3>` to `|x_{p0} x_{p1} x_{p2} x_{p3}>`.
fn factor_permutation(d: usize, p: [usize; 4]) -> ComplexMatrix {
    let n = d.pow(4);
    let digits = |k: usize| [k / (d * d * d), (k / (d * d)) % d, (k / d) % d, k % d];
    let index = |x: [usize; 4]| ((x[0] * d + x[1]) * d + x[2]) * d + x[3];
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let x = digits(k);
        m[(index([x[p[0]], x[p[1]], x[p[2]], x[p[3]]]), k)] = ONE;
    }
    m
}

/// `beta [1 + F^{AC} F^{BD}] + gamma [F^{BD} + F^{AC}]` with
/// `beta = 1 / (d^2 (d^2 - 1))` and `gamma = -1 / (d^3 (d^2 - 1))`.
pub fn m_operator_closed_form(d: usize) -> Result<MOperator, RandError> {
    if d < 2 {
        return Err(RandError::Parameters(format!("need d >= 2, got {d}")));
    }
    let df = d as f64;
    let beta = 1.0 / (df * df * (df * df - 1.0));
    let gamma = -1.0 / (df.powi(3) * (df * df - 1.0));
    let id = ComplexMatrix::identity(d.pow(4));
    let both = factor_permutation(d, [2, 3, 0, 1]);
    let bd = factor_permutation(d, [0, 3, 2, 1]);
    let ac = factor_permutation(d, [2, 1, 0, 3]);
    let matrix = &(&id + &both).scale_re(beta) + &(&bd + &ac).scale_re(gamma);
    Ok(MOperator {
        d,
        beta,
        gamma,
        matrix,
    })
}

/// `(U (x) 1)|Phi_d>` with amplitude `U[a, b] / sqrt(d)` at `|a, b>`.
fn rotated_phi<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Ket {
    let s = 1.0 / (d as f64).sqrt();
    Ket::new(haar_unitary(d, rng).as_slice().iter().map(|z| z * s).collect())
}

/// Sample mean of `|psi psi><psi psi|`.
pub fn m_operator_monte_carlo<R: Rng + ?Sized>(d: usize, samples: usize, rng: &mut R) -> ComplexMatrix {
    let n = d.pow(4);
    let mut acc = vec![crate::numkit::ZERO; n * n];
    for _ in 0..samples {
        let psi = rotated_phi(d, rng);
        let v = psi.tensor(&psi);
        let amps = v.amplitudes();
        for (r, x) in amps.iter().enumerate() {
            let row = &mut acc[r * n..(r + 1) * n];
            for (slot, y) in row.iter_mut().zip(amps) {
                *slot += x * y.conj();
            }
        }
    }
    let m = ComplexMatrix::from_vec(n, n, acc).expect("sized above");
    m.scale_re(1.0 / samples.max(1) as f64)
}

/// Diagonal projector on `C^d (x) C^d` onto `|a, b>` with exactly one of
/// `a`, `b` below `d / 2`.
pub fn quadrant_projector(d: usize) -> ComplexMatrix {
    let h = d / 2;
    let diag: Vec<f64> = (0..d * d)
        .map(|k| if (k / d < h) != (k % d < h) { 1.0 } else { 0.0 })
        .collect();
    ComplexMatrix::real_diag(&diag)
}

/// `|Tr a|^2 / (n-1) + n^2 / (n-1) + 2 sqrt(n) / (n-1)` with `n = d^2`.
pub fn pseudo_isotropy_bound(d: usize, a: &ComplexMatrix) -> f64 {
    let n = (d * d) as f64;
    (a.trace().norm_sqr() + n * n + 2.0 * n.sqrt()) / (n - 1.0)
}

/// Sample variance of `<xi|a|xi>` for `xi = d (U (x) 1)|Phi_d>`.
pub fn pseudo_isotropy_variance<R: Rng + ?Sized>(
    d: usize,
    a: &ComplexMatrix,
    samples: usize,
    rng: &mut R,
) -> Result<f64, RandError> {
    let n = d * d;
    if a.shape() != (n, n) {
        return Err(RandError::Parameters(format!(
            "operator has shape {:?}, expected ({n}, {n})",
            a.shape()
        )));
    }
    let norm = svd(a)?.s[0];
    if norm > 1.0 + 1e-12 {
        return Err(RandError::Parameters(format!("spectral norm {norm} exceeds 1")));
    }
    if samples < 2 {
        return Err(RandError::Parameters("need at least two samples".into()));
    }
    let scale = d as f64;
    let xs: Vec<num_complex::Complex64> = (0..samples)
        .map(|_| {
            let xi = rotated_phi(d, rng).scale(scale.into());
            xi.inner(&a.apply(&xi))
        })
        .collect();
    let mean = xs.iter().sum::<num_complex::Complex64>() / samples as f64;
    let var = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / (samples - 1) as f64;
    Ok(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coefficients_at_two() {
        let m = m_operator_closed_form(2).unwrap();
        assert!((m.beta - 1.0 / 12.0).abs() < 1e-15);
        assert!((m.gamma + 1.0 / 24.0).abs() < 1e-15);
        assert!(m_operator_closed_form(1).is_err());
    }

    #[test]
    fn closed_form_is_hermitian_with_unit_trace() {
        for d in 2..5 {
            let m = m_operator_closed_form(d).unwrap().matrix;
            assert!(m.is_hermitian(1e-14));
            assert!((m.trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn swap_squares_to_identity() {
        let f = swap_operator(3);
        assert!(f.matmul(&f).distance(&ComplexMatrix::identity(9)) < 1e-15);
        let a = Ket::basis(3, 1).tensor(&Ket::basis(3, 2));
        assert_eq!(f.apply(&a), Ket::basis(3, 2).tensor(&Ket::basis(3, 1)));
    }

    #[test]
    fn monte_carlo_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mc = m_operator_monte_carlo(2, 20_000, &mut rng);
        let exact = m_operator_closed_form(2).unwrap().matrix;
        assert!((&mc - &exact).max_abs() < 1.5e-2);
    }

    #[test]
    fn identity_has_no_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let v = pseudo_isotropy_variance(3, &ComplexMatrix::identity(9), 200, &mut rng).unwrap();
        assert!(v < 1e-20);
    }

    #[test]
    fn variance_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let big = ComplexMatrix::identity(4).scale_re(2.0);
        assert!(pseudo_isotropy_variance(2, &big, 10, &mut rng).is_err());
        assert!(pseudo_isotropy_variance(2, &ComplexMatrix::identity(3), 10, &mut rng).is_err());
    }

    #[test]
    fn quadrant_projector_is_half() {
        let p = quadrant_projector(4);
        assert!(p.is_projector(1e-15));
        assert!((p.trace().re - 8.0).abs() < 1e-15);
    }

    #[test]
    fn exact_variance_from_closed_form() {
        // Var <xi|A|xi> = n^2 Tr[M (A (x) A^*)] - |Tr A|^2, checked by sampling.
        let d = 2;
        let n = 4.0;
        let a = quadrant_projector(d);
        let m = m_operator_closed_form(d).unwrap().matrix;
        let exact = n * n * m.matmul(&crate::numkit::tensor(&a, &a.adjoint())).trace().re - a.trace().norm_sqr();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let samples = 20_000;
        let v = pseudo_isotropy_variance(d, &a, samples, &mut rng).unwrap();
        // x lies in [0, n], so the fourth central moment is at most (n/2)^4.
        let se = (n / 2.0).powi(2) / (samples as f64).sqrt();
        assert!((v - exact).abs() < 3.0 * se, "{v} vs {exact}");
        assert!(v <= pseudo_isotropy_bound(d, &a));
    }
}

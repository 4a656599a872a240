use rand::Rng;

use crate::numkit::{eigvalsh, fast_matmul, ComplexMatrix, Ket};
use crate::protocol::StateEnsemble;

use super::{haar_unitary, RandError};

/// Spectrum of `Q = sum_i |psi_i><psi_i|` for an ensemble of `n` pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct ESDSample {
    /// Local dimension: `isqrt` of the state dimension.
    pub d: usize,
    /// Number of states.
    pub n: usize,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
}

/// `(U_i (x) 1)|Phi_d>` for `d^2` independent Haar unitaries.
pub fn random_protocol_ensemble<R: Rng + ?Sized>(d: usize, rng: &mut R) -> StateEnsemble {
    let n = d * d;
    let scale = 1.0 / (d as f64).sqrt();
    let kets = (0..n)
        .map(|_| {
            // (U (x) 1)|Phi> has amplitude U[a, b] / sqrt(d) at |a, b>.
            let u = haar_unitary(d, rng);
            Ket::new(u.as_slice().iter().map(|z| z * scale).collect())
        })
        .collect();
    StateEnsemble::uniform_pure(kets).expect("Haar kets are normalized")
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Eigenvalues of `Q`, descending. Mixed states are rejected.
pub fn esd(e: &StateEnsemble) -> Result<ESDSample, RandError> {
    let kets = e.pure_states().ok_or_else(|| {
        RandError::Parameters("the spectral distribution needs pure states".into())
    })?;
    let dim = e.dim();
    let m = ComplexMatrix::from_fn(dim, kets.len(), |r, c| kets[c][r]);
    let q = fast_matmul(&m, &m.adjoint());
    Ok(ESDSample {
        d: isqrt(dim),
        n: kets.len(),
        eigenvalues: eigvalsh(&q)?,
        seed: 0,
    })
}

/// Spectrum of one random protocol ensemble drawn from `rng`.
pub fn random_protocol_esd<R: Rng + ?Sized>(d: usize, rng: &mut R, seed: u64) -> Result<ESDSample, RandError> {
    let mut s = esd(&random_protocol_ensemble(d, rng))?;
    s.seed = seed;
    Ok(s)
}

/// `(1/n) sum sqrt(lambda_i)`; eigenvalues in `[-tol, 0)` count as zero.
pub fn mean_sqrt_esd(s: &ESDSample, tol: f64) -> Result<f64, RandError> {
    if s.eigenvalues.is_empty() {
        return Err(RandError::EmptySample);
    }
    if let Some(&bad) = s.eigenvalues.iter().find(|&&x| x < -tol) {
        return Err(RandError::NegativeEigenvalue(bad));
    }
    let sum: f64 = s.eigenvalues.iter().map(|&x| x.max(0.0).sqrt()).sum();
    Ok(sum / s.n as f64)
}

impl ESDSample {
    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Reduced state on Bob's half of a ket on `C^d (x) C^d`.
#[cfg(test)]
fn bob_marginal(k: &Ket, d: usize) -> ComplexMatrix {
    crate::numkit::reduced_state(k, &[d, d], &[1]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::hc_quantity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ensemble_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = 3;
        let e = random_protocol_ensemble(d, &mut rng);
        assert_eq!(e.len(), 9);
        let id = ComplexMatrix::identity(d).scale_re(1.0 / d as f64);
        for (_, s) in &e.entries {
            let crate::protocol::State::Pure(k) = s else { panic!("pure expected") };
            assert!((k.norm() - 1.0).abs() < 1e-12);
            assert!(bob_marginal(k, d).distance(&id) < 1e-12);
            assert!((k.inner(k).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_states() {
        let e = StateEnsemble::uniform_pure((0..3).map(|i| Ket::basis(5, i)).collect()).unwrap();
        let s = esd(&e).unwrap();
        let ones = s.eigenvalues.iter().filter(|&&x| (x - 1.0).abs() < 1e-12).count();
        assert_eq!(ones, 3);
        assert!(s.eigenvalues.iter().all(|&x| x.abs() < 1e-12 || (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn trace_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in [2, 4, 6] {
            let s = random_protocol_esd(d, &mut rng, 2).unwrap();
            let n = (d * d) as f64;
            assert!((s.trace() - n).abs() < 1e-6 * n);
            assert!(s.eigenvalues.iter().all(|&x| x > -1e-9));
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(s.d, d);
        }
    }

    #[test]
    fn mean_sqrt_is_hc() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2, 3, 5] {
            let e = random_protocol_ensemble(d, &mut rng);
            let s = esd(&e).unwrap();
            let hc = hc_quantity(&e).unwrap();
            assert!((mean_sqrt_esd(&s, 1e-9).unwrap() - hc).abs() < 1e-10);
        }
        let all_ones = ESDSample {
            d: 2,
            n: 4,
            eigenvalues: vec![1.0; 4],
            seed: 0,
        };
        assert_eq!(mean_sqrt_esd(&all_ones, 1e-9).unwrap(), 1.0);
    }

    #[test]
    fn mean_sqrt_rejects_negative() {
        let s = ESDSample {
            d: 1,
            n: 1,
            eigenvalues: vec![-0.1],
            seed: 0,
        };
        assert!(matches!(mean_sqrt_esd(&s, 1e-9), Err(RandError::NegativeEigenvalue(_))));
    }
}

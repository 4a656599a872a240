use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::numkit::{qr, ComplexMatrix, Ket};

/// Standard complex gaussian: real and imaginary parts each `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    let (q, r) = qr(&g);
    let phases: Vec<Complex64> = (0..d)
        .map(|k| {
            let x = r[(k, k)];
            if x.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x / x.norm()
            }
        })
        .collect();
    ComplexMatrix::from_fn(d, d, |i, j| q[(i, j)] * phases[j])
}

/// Uniformly random unit vector.
pub fn haar_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Ket {
    Ket::new((0..d).map(|_| complex_gaussian(rng)).collect()).normalized()
}

/// Random density matrix: the marginal of a random pure state on `d x d`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    let m = g.matmul(&g.adjoint());
    let t = m.trace().re;
    m.scale_re(1.0 / t)
}

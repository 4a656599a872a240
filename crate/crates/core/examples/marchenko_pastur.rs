//! Empirical spectrum of one random protocol next to the square
//! Marchenko-Pastur law, as a coarse text histogram.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superdense::randlab::{kolmogorov_distance, mp_cdf, random_protocol_esd, MPParams};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let s = random_protocol_esd(24, &mut rng, 0).unwrap();
    let law = MPParams::square();
    println!("n = {}, KS distance {:.4}", s.n, kolmogorov_distance(&s, &law).unwrap());
    let bins = 8;
    for k in 0..bins {
        let (lo, hi) = (4.0 * k as f64 / bins as f64, 4.0 * (k + 1) as f64 / bins as f64);
        let seen = s.eigenvalues.iter().filter(|&&x| x >= lo && x < hi).count() as f64 / s.n as f64;
        let want = mp_cdf(&law, hi) - mp_cdf(&law, lo);
        println!("[{lo:.1}, {hi:.1}) {seen:.3} {want:.3} {}", "#".repeat((seen * 100.0) as usize));
    }
}

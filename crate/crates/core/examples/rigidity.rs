//! Scrambles a planted errorless protocol with random local unitaries and
//! recovers a canonical decomposition from the scrambled protocol alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superdense::protocol::{random_scrambled_bw, verify_errorless};
use superdense::rigidity::{canonicalize, verify_decomposition, DEFAULT_TOL};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (p, planted) = random_scrambled_bw(&mut rng, 4, 3, 3).unwrap();
    println!(
        "scrambled protocol: A' {} x A'' {} x B {}, errorless={}",
        p.dim_a_prime,
        p.dim_a_dbl,
        p.dim_b,
        verify_errorless(&p, 1e-10).pass
    );
    println!("planted: {} blocks", planted.blocks.len());

    let dec = canonicalize(&p, DEFAULT_TOL).unwrap();
    let r = verify_decomposition(&p, &dec, 1e-7);
    println!("recovered: {} blocks, residual {:.2e}, pass={}", dec.blocks.len(), r.max_residual(), r.pass);
    for (k, b) in dec.blocks.iter().enumerate() {
        println!("  block {k}: rank {:.0}, sign {:+}", b.p.trace().re, b.sign);
    }
}

//! Pretty-good measurement against the Holevo-Curlander bound on random
//! pure-state ensembles, and against Helstrom for two states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superdense::protocol::{hc_quantity, helstrom_two, pgm_success, StateEnsemble};
use superdense::randlab::haar_ket;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("{:>3} {:>3} {:>9} {:>9} {:>9}", "d", "m", "2hc-1", "pgm", "hc");
    for (d, m) in [(2, 2), (2, 4), (4, 8), (4, 16), (8, 32)] {
        let kets: Vec<_> = (0..m).map(|_| haar_ket(d, &mut rng)).collect();
        let e = StateEnsemble::uniform_pure(kets.clone()).unwrap();
        let (pgm, hc) = (pgm_success(&e).unwrap(), hc_quantity(&e).unwrap());
        println!("{d:>3} {m:>3} {:>9.5} {pgm:>9.5} {hc:>9.5}", 2.0 * hc - 1.0);
        if m == 2 {
            println!("    helstrom {:.5}", helstrom_two(&kets[0], &kets[1]));
        }
    }
}

//! Second moment of a rotated maximally entangled state, closed form against
//! Monte Carlo, and the pseudo-isotropy variance of a fixed projector.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superdense::randlab::{
    m_operator_closed_form, m_operator_monte_carlo, pseudo_isotropy_bound, pseudo_isotropy_variance,
    quadrant_projector,
};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in [2, 3] {
        let m = m_operator_closed_form(d).unwrap();
        let mc = m_operator_monte_carlo(d, 20_000, &mut rng);
        println!(
            "d={d}: beta {:.6}, gamma {:.6}, Monte Carlo max error {:.1e}",
            m.beta,
            m.gamma,
            (&m.matrix - &mc).max_abs()
        );
    }
    for d in [4, 8, 16] {
        let a = quadrant_projector(d);
        let var = pseudo_isotropy_variance(d, &a, 4000, &mut rng).unwrap();
        let n2 = ((d * d) as f64).powi(2);
        println!(
            "d={d:>2}: variance {var:.3} (bound {:.1}), variance / n^2 {:.2e}",
            pseudo_isotropy_bound(d, &a),
            var / n2
        );
    }
}

//! Dense coding with the canonical protocol of a basis: all d^2 encoded
//! states are orthogonal, so Bob decodes perfectly.

use superdense::bases::matching_basis;
use superdense::protocol::{bennett_wiesner, canonical_protocol, encoded_states, hc_quantity, pgm_success, verify_errorless};

fn main() {
    let bw = bennett_wiesner();
    let r = verify_errorless(&bw, 1e-10);
    println!("Bennett-Wiesner: errorless={} max overlap {:.1e}", r.pass, r.max_state_overlap);

    let p = canonical_protocol(&matching_basis(5).unwrap()).unwrap();
    let r = verify_errorless(&p, 1e-10);
    let states = encoded_states(&p);
    println!(
        "matching d=5: {} messages, errorless={}, pgm={:.6}, hc={:.6}",
        p.message_count(),
        r.pass,
        pgm_success(&states).unwrap(),
        hc_quantity(&states).unwrap()
    );
}

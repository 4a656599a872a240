//! Builds each family of orthogonal unitary bases and lists which
//! non-equivalence certificates fire.

use std::f64::consts::PI;

use superdense::bases::{
    certify_not_clock_shift, clock_shift_basis, matching_basis, pauli_tensor_basis,
    verify_orthogonal_unitary_basis, werner3_basis,
};
use superdense::numkit::Complex64;

fn main() {
    let bases = [
        ("clock-shift d=4", clock_shift_basis(4).unwrap()),
        ("pauli-tensor d=4", pauli_tensor_basis(2).unwrap()),
        ("matching d=5", matching_basis(5).unwrap()),
        ("matching d=6", matching_basis(6).unwrap()),
        ("werner3 beta=e^(i pi/3)", werner3_basis(Complex64::from_polar(1.0, PI / 3.0)).unwrap()),
    ];
    for (name, b) in &bases {
        let r = verify_orthogonal_unitary_basis(b, 1e-9);
        println!("{name}: {} elements, max violation {:.1e}", r.count, r.max_violation());
        let certs = certify_not_clock_shift(b, 1e-8).unwrap();
        if certs.is_empty() {
            println!("  no certificate (consistent with clock-shift)");
        }
        for c in certs {
            println!("  {} on {:?}: {}", c.kind, c.witness, c.witness_value);
        }
    }
}

//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superdense::bases::{
    certify_not_clock_shift, clock_shift_basis, matching_basis, pauli_tensor_basis,
    verify_orthogonal_unitary_basis, werner3_basis, CertificateKind, UnitaryBasis,
};
use superdense::numkit::{Complex64, Ket};
use superdense::protocol::{
    bennett_wiesner, canonical_protocol, hc_quantity, helstrom_two, pgm_success,
    random_scrambled_bw, verify_errorless, StateEnsemble,
};
use superdense::randlab::{
    distinguishability_experiment_with, haar_ket, m_operator_closed_form, m_operator_monte_carlo,
    pseudo_isotropy_bound, pseudo_isotropy_variance, quadrant_projector, ExperimentOptions,
    MP1_MEAN_SQRT,
};
use superdense::rigidity::{canonicalize, verify_decomposition, DEFAULT_TOL};

type Outcome = (bool, String);

fn all_bases() -> Vec<(String, UnitaryBasis)> {
    let mut out = Vec::new();
    for d in 2..=12 {
        out.push((format!("clock-shift({d})"), clock_shift_basis(d).unwrap()));
    }
    for k in [2, 3] {
        out.push((format!("pauli-tensor({})", 1 << k), pauli_tensor_basis(k).unwrap()));
    }
    for d in 5..=12 {
        out.push((format!("matching({d})"), matching_basis(d).unwrap()));
    }
    out.push(("werner3(pi/3)".into(), werner3_basis(Complex64::from_polar(1.0, PI / 3.0)).unwrap()));
    out
}

fn basis_validity() -> Outcome {
    let mut worst = (0.0, String::new());
    let mut ok = true;
    for (name, b) in all_bases() {
        let r = verify_orthogonal_unitary_basis(&b, 1e-9);
        let v = r.max_violation();
        ok &= r.pass && r.count == b.d * b.d && v < 1e-9;
        if v >= worst.0 {
            worst = (v, name);
        }
    }
    (ok, format!("worst violation {:.2e} ({})", worst.0, worst.1))
}

fn fires(b: &UnitaryBasis, kind: CertificateKind) -> bool {
    certify_not_clock_shift(b, 1e-8)
        .unwrap()
        .iter()
        .any(|c| c.kind == kind)
}

fn certificates() -> Outcome {
    let mut failures = Vec::new();
    for d in 5..=12 {
        if !fires(&matching_basis(d).unwrap(), CertificateKind::EigenvalueRatio) {
            failures.push(format!("matching({d})"));
        }
    }
    for k in [2, 3] {
        if !fires(&pauli_tensor_basis(k).unwrap(), CertificateKind::DistinctCount) {
            failures.push(format!("pauli-tensor({})", 1 << k));
        }
    }
    let w = werner3_basis(Complex64::from_polar(1.0, PI / 3.0)).unwrap();
    if !fires(&w, CertificateKind::ProjectiveNoncommutativity) {
        failures.push("werner3".into());
    }
    for d in 2..=8 {
        if !certify_not_clock_shift(&clock_shift_basis(d).unwrap(), 1e-8).unwrap().is_empty() {
            failures.push(format!("clock-shift({d}) fired"));
        }
    }
    let detail = if failures.is_empty() {
        "all expected tests fire, clock-shift silent".to_string()
    } else {
        format!("failed: {}", failures.join(", "))
    };
    (failures.is_empty(), detail)
}

fn errorless() -> Outcome {
    let mut protocols = vec![("bennett-wiesner".to_string(), bennett_wiesner())];
    for (name, b) in all_bases() {
        protocols.push((name, canonical_protocol(&b).unwrap()));
    }
    let mut worst = (f64::NEG_INFINITY, String::new());
    let mut ok = true;
    for (name, p) in &protocols {
        let r = verify_errorless(p, 1e-10);
        ok &= r.max_state_overlap < 1e-10;
        if r.max_state_overlap > worst.0 {
            worst = (r.max_state_overlap, name.clone());
        }
    }
    (
        ok,
        format!("{} protocols, max overlap {:.2e} ({})", protocols.len(), worst.0, worst.1),
    )
}

fn rigidity_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for t in 0..50 {
        let a = rng.random_range(1..=6);
        let b = rng.random_range(1..=4);
        let k = rng.random_range(1..=a.min(3));
        let (p, _) = random_scrambled_bw(&mut rng, a, b, k).unwrap();
        match canonicalize(&p, DEFAULT_TOL) {
            Ok(dec) => {
                let r = verify_decomposition(&p, &dec, 1e-7);
                worst = worst.max(r.max_residual());
                if !r.pass {
                    failures.push(format!("#{t} residual {:.2e}", r.max_residual()));
                }
            }
            Err(e) => failures.push(format!("#{t} (a={a}, b={b}, blocks={k}): {e}")),
        }
    }
    let detail = if failures.is_empty() {
        format!("50/50 canonicalized, worst residual {worst:.2e}")
    } else {
        format!("failed: {}", failures.join("; "))
    };
    (failures.is_empty(), detail)
}

fn random_limit() -> Outcome {
    let s = distinguishability_experiment_with(32, 10, 7, &ExperimentOptions::default()).unwrap();
    let m = s.mean_sqrt_eig.mean;
    let gap = (m - MP1_MEAN_SQRT).abs();
    (
        gap <= 0.02,
        format!("mean {m:.5} vs {MP1_MEAN_SQRT:.5}, gap {gap:.2e}, error >= {:.3}", 1.0 - s.hc.mean),
    )
}

fn mp_fit() -> Outcome {
    let s = distinguishability_experiment_with(64, 5, 11, &ExperimentOptions::default()).unwrap();
    let max = s.pooled.max();
    (
        s.ks_distance <= 0.05 && max < 5.0,
        format!("KS {:.4}, max eigenvalue {max:.3}", s.ks_distance),
    )
}

fn m_operator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [2, 3] {
        let exact = m_operator_closed_form(d).unwrap();
        let mc = m_operator_monte_carlo(d, 100_000, &mut rng);
        let err = (&exact.matrix - &mc).max_abs();
        ok &= err < 5e-3;
        parts.push(format!("d={d} max entry error {err:.2e}"));
        if d == 2 {
            let coef = (exact.beta - 1.0 / 12.0).abs().max((exact.gamma + 1.0 / 24.0).abs());
            ok &= coef < 1e-15;
            parts.push(format!("coefficients ({:.6}, {:.6})", exact.beta, exact.gamma));
        }
    }
    (ok, parts.join(", "))
}

fn sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut worst_helstrom = 0.0_f64;
    let mut worst_order = f64::NEG_INFINITY;
    for t in 0..100 {
        let d = rng.random_range(2..=8);
        let m = if t % 4 == 0 { 2 } else { rng.random_range(2..=2 * d) };
        let kets: Vec<Ket> = (0..m).map(|_| haar_ket(d, &mut rng)).collect();
        let e = StateEnsemble::uniform_pure(kets.clone()).unwrap();
        let pgm = pgm_success(&e).unwrap();
        let hc = hc_quantity(&e).unwrap();
        worst_order = worst_order.max(pgm - hc).max(hc - 1.0);
        ok &= pgm <= hc + 1e-12 && hc <= 1.0 + 1e-12 && 2.0 * hc - 1.0 <= hc;
        if m == 2 {
            let h = helstrom_two(&kets[0], &kets[1]);
            worst_helstrom = worst_helstrom.max((pgm - h).abs());
        }
    }
    ok &= worst_helstrom < 1e-10;
    (
        ok,
        format!("max order violation {worst_order:.2e}, max |pgm - helstrom| {worst_helstrom:.2e}"),
    )
}

fn pseudo_isotropy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    let mut scaled = Vec::new();
    let mut parts = Vec::new();
    for d in [4, 8, 16] {
        let a = quadrant_projector(d);
        let var = pseudo_isotropy_variance(d, &a, 10_000, &mut rng).unwrap();
        let bound = pseudo_isotropy_bound(d, &a);
        let n2 = ((d * d) as f64).powi(2);
        ok &= var < bound;
        scaled.push(var / n2);
        parts.push(format!("d={d} var {var:.3} bound {bound:.1} var/n^2 {:.2e}", var / n2));
    }
    ok &= scaled.windows(2).all(|w| w[1] < w[0]);
    (ok, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("basis validity", basis_validity),
        ("non-equivalence certificates", certificates),
        ("errorless verification", errorless),
        ("rigidity round trip", rigidity_round_trip),
        ("random-protocol limit", random_limit),
        ("Marchenko-Pastur fit", mp_fit),
        ("M operator", m_operator),
        ("discrimination sandwich", sandwich),
        ("pseudo-isotropy", pseudo_isotropy),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = f();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} {}. {name}: {detail} [{secs:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
        failed += usize::from(!pass);
    }
    println!("{}/9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

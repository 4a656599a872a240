//! Superdense coding protocols, their encoded ensembles and errorlessness.

mod discrimination;
mod scramble;

use crate::bases::{verify_orthogonal_unitary_basis, UnitaryBasis};
use crate::numkit::{
    max_entangled, partial_trace, paulis, tensor, ComplexMatrix, Ket, NumError, DEFAULT_TOL,
};

pub use discrimination::{hc_quantity, helstrom_two, pgm_success};
pub use scramble::{random_scrambled_bw, random_scrambled_bw_with, RhoKind, ScrambleOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProtocolError {
    #[error("{what}: expected {expected:?}, got {got:?}")]
    Shape {
        what: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("expected {expected} encoders, got {got}")]
    EncoderCount { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("ensemble: {0}")]
    Ensemble(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

/// Shared state `tau` on `A' (x) A'' (x) B` and `d^2` encoders on `A' (x) A''`,
/// where `d = dim A''`.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub dim_a_prime: usize,
    pub dim_a_dbl: usize,
    pub dim_b: usize,
    pub tau: ComplexMatrix,
    pub encoders: Vec<ComplexMatrix>,
}

impl Protocol {
    /// Checks shapes and the encoder count; use [`Protocol::validate`] for
    /// the state and unitarity invariants.
    pub fn new(
        dim_a_prime: usize,
        dim_a_dbl: usize,
        dim_b: usize,
        tau: ComplexMatrix,
        encoders: Vec<ComplexMatrix>,
    ) -> Result<Self, ProtocolError> {
        if dim_a_prime == 0 || dim_a_dbl == 0 || dim_b == 0 {
            return Err(ProtocolError::Parameters("dimensions must be positive".into()));
        }
        let n = dim_a_prime * dim_a_dbl * dim_b;
        if tau.shape() != (n, n) {
            return Err(ProtocolError::Shape {
                what: "tau",
                expected: (n, n),
                got: tau.shape(),
            });
        }
        let na = dim_a_prime * dim_a_dbl;
        if encoders.len() != dim_a_dbl * dim_a_dbl {
            return Err(ProtocolError::EncoderCount {
                expected: dim_a_dbl * dim_a_dbl,
                got: encoders.len(),
            });
        }
        for u in &encoders {
            if u.shape() != (na, na) {
                return Err(ProtocolError::Shape {
                    what: "encoder",
                    expected: (na, na),
                    got: u.shape(),
                });
            }
        }
        Ok(Self {
            dim_a_prime,
            dim_a_dbl,
            dim_b,
            tau,
            encoders,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a_prime * self.dim_a_dbl
    }

    pub fn message_count(&self) -> usize {
        self.encoders.len()
    }

    /// `tau` is a density matrix and every encoder is unitary, within `tol`.
    pub fn validate(&self, tol: f64) -> Result<(), ProtocolError> {
        if !self.tau.is_density(tol) {
            return Err(ProtocolError::Parameters("tau is not a density matrix".into()));
        }
        if let Some(i) = self.encoders.iter().position(|u| !u.is_unitary(tol)) {
            return Err(ProtocolError::Parameters(format!("encoder {i} is not unitary")));
        }
        Ok(())
    }

    /// `(U_i (x) 1_B) tau (U_i (x) 1_B)^*`
    pub fn encoded_global(&self, i: usize) -> ComplexMatrix {
        let u = tensor(&self.encoders[i], &ComplexMatrix::identity(self.dim_b));
        u.conjugate_by(&self.tau)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(Ket),
    Mixed(ComplexMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(k) => k.dim(),
            Self::Mixed(m) => m.rows(),
        }
    }

    pub fn density(&self) -> ComplexMatrix {
        match self {
            Self::Pure(k) => k.density(),
            Self::Mixed(m) => m.clone(),
        }
    }
}

/// Weighted family of states on a common space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateEnsemble {
    pub entries: Vec<(f64, State)>,
}

impl StateEnsemble {
    pub fn new(entries: Vec<(f64, State)>, tol: f64) -> Result<Self, ProtocolError> {
        let Some(dim) = entries.first().map(|(_, s)| s.dim()) else {
            return Err(ProtocolError::Ensemble("no states".into()));
        };
        if entries.iter().any(|(p, _)| *p < -tol) {
            return Err(ProtocolError::Ensemble("negative probability".into()));
        }
        let total: f64 = entries.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > tol {
            return Err(ProtocolError::Ensemble(format!("probabilities sum to {total}")));
        }
        for (i, (_, s)) in entries.iter().enumerate() {
            if s.dim() != dim {
                return Err(ProtocolError::Ensemble(format!("state {i} has dimension {}", s.dim())));
            }
            let ok = match s {
                State::Pure(k) => k.is_unit(tol),
                State::Mixed(m) => m.is_density(tol),
            };
            if !ok {
                return Err(ProtocolError::Ensemble(format!("state {i} is not normalized")));
            }
        }
        Ok(Self { entries })
    }

    /// Uniform ensemble of pure states.
    pub fn uniform_pure(kets: Vec<Ket>) -> Result<Self, ProtocolError> {
        let p = 1.0 / kets.len().max(1) as f64;
        Self::new(
            kets.into_iter().map(|k| (p, State::Pure(k))).collect(),
            DEFAULT_TOL,
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    /// The kets, if every state is pure.
    pub fn pure_states(&self) -> Option<Vec<&Ket>> {
        self.entries
            .iter()
            .map(|(_, s)| match s {
                State::Pure(k) => Some(k),
                State::Mixed(_) => None,
            })
            .collect()
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let p = 1.0 / self.len() as f64;
        self.entries.iter().all(|(q, _)| (q - p).abs() <= tol)
    }
}

/// EPR pair with encoders `1, Z, X, Y`.
pub fn bennett_wiesner() -> Protocol {
    let [one, z, x, y] = paulis();
    Protocol::new(1, 2, 2, max_entangled(2).density(), vec![one, z, x, y])
        .expect("shapes are fixed")
}

/// Maximally entangled state with the basis elements as encoders.
pub fn canonical_protocol(b: &UnitaryBasis) -> Result<Protocol, ProtocolError> {
    let report = verify_orthogonal_unitary_basis(b, 1e-8);
    if !report.pass {
        return Err(ProtocolError::InvalidBasis(format!("{report:?}")));
    }
    Protocol::new(1, b.d, b.d, max_entangled(b.d).density(), b.elements.clone())
}

/// When `A'` is trivial and `tau` pure, returns the shared ket.
fn shared_pure_state(p: &Protocol) -> Option<Ket> {
    if p.dim_a_prime != 1 {
        return None;
    }
    let purity = crate::numkit::hs_inner(&p.tau, &p.tau).ok()?.re;
    if (purity - 1.0).abs() > 1e-12 {
        return None;
    }
    let (_, vecs) = crate::numkit::eigh(&p.tau).ok()?;
    Some(vecs.column(0))
}

/// Uniform ensemble of the reduced states on `A'' (x) B`, one per encoder.
pub fn encoded_states(p: &Protocol) -> StateEnsemble {
    let m = p.message_count();
    let w = 1.0 / m as f64;
    let entries = if let Some(psi) = shared_pure_state(p) {
        let id = ComplexMatrix::identity(p.dim_b);
        p.encoders
            .iter()
            .map(|u| (w, State::Pure(tensor(u, &id).apply(&psi))))
            .collect()
    } else {
        let dims = [p.dim_a_prime, p.dim_a_dbl, p.dim_b];
        (0..m)
            .map(|i| {
                let r = partial_trace(&p.encoded_global(i), &dims, &[1, 2])
                    .expect("dimensions checked on construction");
                (w, State::Mixed(r))
            })
            .collect()
    };
    StateEnsemble { entries }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorlessReport {
    /// Largest `Tr(rho_i rho_j)` over `i != j`, with its pair.
    pub max_state_overlap: f64,
    pub worst_pair: (usize, usize),
    /// Largest `||Tr_{A''}(U_i tau^A U_j^*)||_F` over `i != j`.
    pub max_operator_violation: f64,
    pub pass: bool,
}

pub fn verify_errorless(p: &Protocol, tol: f64) -> ErrorlessReport {
    let ens = encoded_states(p);
    let m = ens.len();
    let mut max_state_overlap = f64::NEG_INFINITY;
    let mut worst_pair = (0, 0);
    let overlap = |i: usize, j: usize| -> f64 {
        match (&ens.entries[i].1, &ens.entries[j].1) {
            (State::Pure(a), State::Pure(b)) => a.inner(b).norm_sqr(),
            (a, b) => crate::numkit::hs_inner(&a.density(), &b.density())
                .map(|z| z.re)
                .unwrap_or(f64::INFINITY),
        }
    };
    for i in 0..m {
        for j in i + 1..m {
            let o = overlap(i, j);
            if o > max_state_overlap {
                max_state_overlap = o;
                worst_pair = (i, j);
            }
        }
    }
    if m < 2 {
        max_state_overlap = 0.0;
    }

    let tau_a = partial_trace(&p.tau, &[p.dim_a(), p.dim_b], &[0]).expect("dimensions checked");
    let mut max_operator_violation: f64 = 0.0;
    for i in 0..m {
        let left = p.encoders[i].matmul(&tau_a);
        for j in 0..m {
            if i == j {
                continue;
            }
            let x = left.matmul(&p.encoders[j].adjoint());
            let r = partial_trace(&x, &[p.dim_a_prime, p.dim_a_dbl], &[0]).expect("dimensions checked");
            max_operator_violation = max_operator_violation.max(r.frobenius_norm());
        }
    }
    ErrorlessReport {
        max_state_overlap,
        worst_pair,
        max_operator_violation,
        pass: max_state_overlap <= tol && max_operator_violation <= tol,
    }
}

/// `tau' = (V (x) W) tau (V (x) W)^*` and `U_i' = (C_i (x) 1) U_i V^*`.
///
/// `w` may be any isometry out of `B`; the new Bob dimension is `w.rows()`.
pub fn apply_local_equivalence(
    p: &Protocol,
    v: &ComplexMatrix,
    c: &[ComplexMatrix],
    w: &ComplexMatrix,
) -> Result<Protocol, ProtocolError> {
    let na = p.dim_a();
    if v.shape() != (na, na) {
        return Err(ProtocolError::Shape {
            what: "V",
            expected: (na, na),
            got: v.shape(),
        });
    }
    if c.len() != p.message_count() {
        return Err(ProtocolError::EncoderCount {
            expected: p.message_count(),
            got: c.len(),
        });
    }
    if let Some(bad) = c.iter().find(|ci| ci.shape() != (p.dim_a_prime, p.dim_a_prime)) {
        return Err(ProtocolError::Shape {
            what: "C_i",
            expected: (p.dim_a_prime, p.dim_a_prime),
            got: bad.shape(),
        });
    }
    if w.cols() != p.dim_b {
        return Err(ProtocolError::Shape {
            what: "W",
            expected: (w.rows(), p.dim_b),
            got: w.shape(),
        });
    }
    let vw = tensor(v, w);
    let tau = vw.conjugate_by(&p.tau);
    let id = ComplexMatrix::identity(p.dim_a_dbl);
    let v_star = v.adjoint();
    let encoders = p
        .encoders
        .iter()
        .zip(c)
        .map(|(u, ci)| tensor(ci, &id).matmul(u).matmul(&v_star))
        .collect();
    Protocol::new(p.dim_a_prime, p.dim_a_dbl, w.rows(), tau, encoders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{clock_shift_basis, matching_basis, pauli_basis};
    use crate::numkit::{trace_distance, Complex64, ONE, ZERO};
    use crate::randlab::haar_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell_states() -> Vec<Ket> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = |v: [f64; 4]| Ket::new(v.iter().map(|&x| Complex64::new(x * s, 0.0)).collect());
        vec![
            r([1.0, 0.0, 0.0, 1.0]),
            r([1.0, 0.0, 0.0, -1.0]),
            r([0.0, 1.0, 1.0, 0.0]),
            // Y (x) 1 |EPR> = i(|10> - |01>)/sqrt 2
            Ket::new(vec![ZERO, Complex64::new(0.0, -s), Complex64::new(0.0, s), ZERO]),
        ]
    }

    #[test]
    fn bw_encodes_bell_states() {
        let p = bennett_wiesner();
        let ens = encoded_states(&p);
        assert_eq!(ens.len(), 4);
        for ((w, s), want) in ens.entries.iter().zip(bell_states()) {
            assert_eq!(*w, 0.25);
            let State::Pure(k) = s else { panic!("pure expected") };
            assert!(k.sub(&want).norm() < 1e-15);
        }
        let r = verify_errorless(&p, 1e-12);
        assert!(r.pass && r.max_state_overlap < 1e-12, "{r:?}");
        let [one, z, x, y] = paulis();
        for (u, want) in p.encoders.iter().zip([one, z, x, y]) {
            assert!(u.distance(&want) < 1e-15);
        }
    }

    #[test]
    fn canonical_protocols_are_errorless() {
        let p = canonical_protocol(&clock_shift_basis(3).unwrap()).unwrap();
        assert_eq!(p.message_count(), 9);
        assert!(verify_errorless(&p, 1e-10).pass);
        let p = canonical_protocol(&matching_basis(5).unwrap()).unwrap();
        assert_eq!(p.message_count(), 25);
        assert!(verify_errorless(&p, 1e-10).pass);
        let p = canonical_protocol(&pauli_basis()).unwrap();
        assert!(verify_errorless(&p, 1e-10).pass);
        // Pauli basis differs from Bennett-Wiesner only by the phase of Y = i XZ.
        let bw = bennett_wiesner();
        let phase = [ONE, ONE, ONE, Complex64::new(0.0, 1.0)];
        for ((a, b), ph) in p.encoders.iter().zip(&bw.encoders).zip(phase) {
            assert!(a.scale(ph).distance(b) < 1e-15);
        }
    }

    #[test]
    fn repeated_encoder_fails() {
        let mut p = bennett_wiesner();
        p.encoders[1] = p.encoders[0].clone();
        let r = verify_errorless(&p, 1e-10);
        assert!(!r.pass);
        assert!((r.max_state_overlap - 1.0).abs() < 1e-12);
        assert_eq!(r.worst_pair, (0, 1));
    }

    #[test]
    fn identical_encoders_give_identical_states() {
        let mut p = canonical_protocol(&clock_shift_basis(3).unwrap()).unwrap();
        let u = p.encoders[4].clone();
        p.encoders.iter_mut().for_each(|e| *e = u.clone());
        let ens = encoded_states(&p);
        let first = ens.entries[0].1.density();
        for (_, s) in &ens.entries {
            assert!(s.density().distance(&first) < 1e-14);
            assert!((s.density().trace() - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn mixed_tau_path() {
        // Extra A' qubit in a fixed state: states become Mixed, still errorless.
        let bw = bennett_wiesner();
        let extra = ComplexMatrix::real_diag(&[0.3, 0.7]);
        let tau = tensor(&extra, &bw.tau);
        let id2 = ComplexMatrix::identity(2);
        let enc = bw.encoders.iter().map(|u| tensor(&id2, u)).collect();
        let p = Protocol::new(2, 2, 2, tau, enc).unwrap();
        p.validate(1e-12).unwrap();
        let ens = encoded_states(&p);
        assert!(matches!(ens.entries[0].1, State::Mixed(_)));
        assert!(verify_errorless(&p, 1e-12).pass);
    }

    #[test]
    fn local_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = bennett_wiesner();
        let id2 = ComplexMatrix::identity(2);
        let id1 = ComplexMatrix::identity(1);
        let same = apply_local_equivalence(&p, &id2, &vec![id1.clone(); 4], &id2).unwrap();
        assert_eq!(same, p);

        let v1 = haar_unitary(2, &mut rng);
        let w1 = haar_unitary(2, &mut rng);
        let c1: Vec<_> = (0..4).map(|_| haar_unitary(1, &mut rng)).collect();
        let v2 = haar_unitary(2, &mut rng);
        let w2 = haar_unitary(2, &mut rng);
        let c2: Vec<_> = (0..4).map(|_| haar_unitary(1, &mut rng)).collect();
        let once = apply_local_equivalence(&p, &v1, &c1, &w1).unwrap();
        assert!(verify_errorless(&once, 1e-10).pass);
        let twice = apply_local_equivalence(&once, &v2, &c2, &w2).unwrap();
        let c12: Vec<_> = c1.iter().zip(&c2).map(|(a, b)| b.matmul(a)).collect();
        let composed =
            apply_local_equivalence(&p, &v2.matmul(&v1), &c12, &w2.matmul(&w1)).unwrap();
        assert!(twice.tau.distance(&composed.tau) < 1e-12);
        for (a, b) in twice.encoders.iter().zip(&composed.encoders) {
            assert!(a.distance(b) < 1e-12);
        }

        // Encoded states move only by W.
        let ens0 = encoded_states(&p);
        let ens1 = encoded_states(&once);
        let bob = tensor(&id2, &w1);
        for ((_, a), (_, b)) in ens0.entries.iter().zip(&ens1.entries) {
            let moved = bob.conjugate_by(&a.density());
            // C_i are phases on a trivial A', so states agree exactly.
            assert!(trace_distance(&moved, &b.density()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn shape_errors() {
        let p = bennett_wiesner();
        let id = ComplexMatrix::identity(3);
        assert!(apply_local_equivalence(&p, &id, &[], &id).is_err());
        assert!(matches!(
            Protocol::new(1, 2, 2, ComplexMatrix::identity(4), vec![]),
            Err(ProtocolError::EncoderCount { .. })
        ));
    }
}

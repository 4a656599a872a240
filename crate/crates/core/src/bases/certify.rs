use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use super::{verify_orthogonal_unitary_basis, BasisError, UnitaryBasis};
use crate::numkit::{eigvals_general, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Some `A^* B` has an eigenvalue ratio that is not a `d`-th root of unity.
    EigenvalueRatio,
    /// No `A^* B` has `d` distinct eigenvalues.
    DistinctCount,
    /// The family `{U_0^* U_i}` is not projectively commutative.
    ProjectiveNoncommutativity,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::EigenvalueRatio => "eigenvalue-ratio",
            Self::DistinctCount => "distinct-count",
            Self::ProjectiveNoncommutativity => "projective-noncommutativity",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessValue {
    Ratio(Complex64),
    Count(usize),
    Defect(f64),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ratio(z) => write!(f, "{:.6}{:+.6}i", z.re, z.im),
            Self::Count(n) => write!(f, "{n}"),
            Self::Defect(x) => write!(f, "{x:.3e}"),
        }
    }
}

/// A one-sided proof that a basis is not equivalent to the clock and shift
/// basis. `witness` lists the element indices the test was run on.
#[derive(Debug, Clone, PartialEq)]
pub struct NonEquivalenceCertificate {
    pub kind: CertificateKind,
    pub witness: Vec<usize>,
    pub witness_value: WitnessValue,
}

fn is_root_of_unity(r: Complex64, d: usize, tol: f64) -> bool {
    (r.powu(d as u32) - 1.0).norm() <= tol * d as f64
}

fn arg_2pi(z: Complex64) -> f64 {
    let a = z.arg();
    if a < -1e-12 {
        a + 2.0 * PI
    } else {
        a.max(0.0)
    }
}

/// Ratios `lambda / lambda_ref` that are not `d`-th roots of unity, where
/// `lambda_ref` is the eigenvalue of smallest argument. Every pairwise ratio
/// is a quotient of two of these, so checking them decides all pairs.
fn offending_ratio(m: &ComplexMatrix, d: usize, tol: f64) -> Result<Option<Complex64>, BasisError> {
    let eig = eigvals_general(m)?;
    let reference = eig
        .iter()
        .copied()
        .min_by(|a, b| arg_2pi(*a).total_cmp(&arg_2pi(*b)))
        .expect("nonempty spectrum");
    let best = eig
        .iter()
        .map(|l| l / reference)
        .filter(|&r| !is_root_of_unity(r, d, tol))
        .min_by(|a, b| {
            (a - 1.0)
                .norm()
                .total_cmp(&(b - 1.0).norm())
                .then(b.im.total_cmp(&a.im))
        });
    Ok(best)
}

fn distinct_count(m: &ComplexMatrix, tol: f64) -> Result<usize, BasisError> {
    let eig = eigvals_general(m)?;
    let cluster = tol.sqrt();
    let mut reps: Vec<Complex64> = Vec::new();
    for l in eig {
        if reps.iter().all(|r| (r - l).norm() > cluster) {
            reps.push(l);
        }
    }
    Ok(reps.len())
}

/// `||C - (Tr C / d) 1||_F` for the group commutator `C = U V U^* V^*`.
fn commutator_defect(u: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    let c = u.matmul(v).matmul(&u.adjoint()).matmul(&v.adjoint());
    let n = c.rows();
    let g = c.trace() / n as f64;
    c.distance(&ComplexMatrix::identity(n).scale(g))
}

fn ratio_test(b: &UnitaryBasis, tol: f64) -> Result<Option<NonEquivalenceCertificate>, BasisError> {
    for (i, a) in b.elements.iter().enumerate() {
        let a_star = a.adjoint();
        for (j, c) in b.elements.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(r) = offending_ratio(&a_star.matmul(c), b.d, tol)? {
                return Ok(Some(NonEquivalenceCertificate {
                    kind: CertificateKind::EigenvalueRatio,
                    witness: vec![i, j],
                    witness_value: WitnessValue::Ratio(r),
                }));
            }
        }
    }
    Ok(None)
}

fn count_test(b: &UnitaryBasis, tol: f64) -> Result<Option<NonEquivalenceCertificate>, BasisError> {
    let mut best = (0, vec![0, 0]);
    for (i, a) in b.elements.iter().enumerate() {
        let a_star = a.adjoint();
        for (j, c) in b.elements.iter().enumerate() {
            if i == j {
                continue;
            }
            let n = distinct_count(&a_star.matmul(c), tol)?;
            if n >= b.d {
                return Ok(None);
            }
            if n > best.0 {
                best = (n, vec![i, j]);
            }
        }
    }
    Ok(Some(NonEquivalenceCertificate {
        kind: CertificateKind::DistinctCount,
        witness: best.1,
        witness_value: WitnessValue::Count(best.0),
    }))
}

fn commutativity_test(b: &UnitaryBasis, tol: f64) -> Option<NonEquivalenceCertificate> {
    let a_star = b.elements[0].adjoint();
    let family: Vec<ComplexMatrix> = b.elements.iter().map(|u| a_star.matmul(u)).collect();
    let threshold = tol * b.d as f64;
    for i in 1..family.len() {
        for j in i + 1..family.len() {
            let defect = commutator_defect(&family[i], &family[j]);
            if defect > threshold {
                return Some(NonEquivalenceCertificate {
                    kind: CertificateKind::ProjectiveNoncommutativity,
                    witness: vec![0, i, j],
                    witness_value: WitnessValue::Defect(defect),
                });
            }
        }
    }
    None
}

/// Runs the three sufficient non-equivalence tests and returns every
/// certificate that fires. An empty list proves nothing.
pub fn certify_not_clock_shift(
    b: &UnitaryBasis,
    tol: f64,
) -> Result<Vec<NonEquivalenceCertificate>, BasisError> {
    let report = verify_orthogonal_unitary_basis(b, 1e-8_f64.max(tol));
    if !report.pass {
        return Err(BasisError::Invalid(format!(
            "count {}, unitarity {:.3e}, orthogonality {:.3e}",
            report.count, report.max_unitarity_violation, report.max_inner_violation
        )));
    }
    let mut out = Vec::new();
    out.extend(ratio_test(b, tol)?);
    out.extend(count_test(b, tol)?);
    out.extend(commutativity_test(b, tol));
    Ok(out)
}

/// Re-runs the test named by `cert` on its witnessed elements only and
/// reports whether it still fires.
pub fn recheck(
    b: &UnitaryBasis,
    cert: &NonEquivalenceCertificate,
    tol: f64,
) -> Result<bool, BasisError> {
    let el = |k: usize| -> Result<&ComplexMatrix, BasisError> {
        b.elements
            .get(k)
            .ok_or_else(|| BasisError::Invalid(format!("witness index {k} out of range")))
    };
    match cert.kind {
        CertificateKind::EigenvalueRatio => {
            let m = el(cert.witness[0])?.adjoint().matmul(el(cert.witness[1])?);
            Ok(offending_ratio(&m, b.d, tol)?.is_some())
        }
        CertificateKind::DistinctCount => {
            let m = el(cert.witness[0])?.adjoint().matmul(el(cert.witness[1])?);
            let n = distinct_count(&m, tol)?;
            Ok(n < b.d && cert.witness_value == WitnessValue::Count(n))
        }
        CertificateKind::ProjectiveNoncommutativity => {
            let a_star = el(cert.witness[0])?.adjoint();
            let u = a_star.matmul(el(cert.witness[1])?);
            let v = a_star.matmul(el(cert.witness[2])?);
            Ok(commutator_defect(&u, &v) > tol * b.d as f64)
        }
    }
}

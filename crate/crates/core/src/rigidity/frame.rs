use num_complex::Complex64;

use crate::numkit::{eigh, hs_inner, paulis, ComplexMatrix};

use super::RigidityError;

fn check_input(r: [&ComplexMatrix; 3], tol: f64) -> Result<(), RigidityError> {
    for (n, m) in r.iter().enumerate() {
        if m.shape() != (2, 2) {
            return Err(RigidityError::Frame(format!("operator {n} has shape {:?}", m.shape())));
        }
        let tr = m.trace().norm();
        let herm = m.distance(&m.adjoint());
        let unit = m.matmul(&m.adjoint()).distance(&ComplexMatrix::identity(2));
        if tr > tol || herm > tol || unit > tol {
            return Err(RigidityError::Frame(format!(
                "operator {n}: trace {tr:.2e}, hermiticity {herm:.2e}, unitarity {unit:.2e}"
            )));
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let ip = hs_inner(r[i], r[j])?.norm();
        if ip > tol {
            return Err(RigidityError::Frame(format!("operators {i} and {j} overlap by {ip:.2e}")));
        }
    }
    Ok(())
}

/// Finds `S` with `r2 = S Z S^*`, `r3 = S X S^*` and `r4 = sign S Y S^*`.
///
/// The sign is the orientation of the triple: `r4 = -i sign r2 r3`.
pub fn pauli_frame(
    r2: &ComplexMatrix,
    r3: &ComplexMatrix,
    r4: &ComplexMatrix,
    tol: f64,
) -> Result<(ComplexMatrix, i8), RigidityError> {
    check_input([r2, r3, r4], tol)?;
    // Columns: the +1 then the -1 eigenvector of r2.
    let (_, s1) = eigh(r2)?;
    let x = s1.adjoint().matmul(r3).matmul(&s1)[(0, 1)];
    let x = x / x.norm();
    let s2 = ComplexMatrix::diag(&[Complex64::new(1.0, 0.0), x.conj()]);
    let s = s1.matmul(&s2);
    let y = s.adjoint().matmul(r4).matmul(&s)[(0, 1)];
    let sign: i8 = if y.im < 0.0 { 1 } else { -1 };

    let [_, z, xm, ym] = paulis();
    let residual = [
        r2.distance(&s.conjugate_by(&z)),
        r3.distance(&s.conjugate_by(&xm)),
        r4.distance(&s.conjugate_by(&ym).scale_re(f64::from(sign))),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if residual > 10.0 * tol {
        return Err(RigidityError::Frame(format!("frame residual {residual:.2e}")));
    }
    Ok((s, sign))
}

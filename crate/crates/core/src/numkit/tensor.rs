use num_complex::Complex64;

use super::{ComplexMatrix, Ket, NumError, ZERO};

/// Kronecker product; the left factor is the slow index.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

pub fn tensor_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold((*first).clone(), |acc, f| tensor(&acc, f))
}

fn check_dims(dims: &[usize], n: usize) -> Result<(), NumError> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != n {
        return Err(NumError::Subsystems {
            dims: dims.to_vec(),
            n,
        });
    }
    Ok(())
}

/// Splits every full index into (kept index, traced index).
fn index_table(dims: &[usize], keep: &[bool]) -> (usize, usize, Vec<usize>) {
    let nk: usize = dims.iter().zip(keep).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let nt: usize = dims.iter().zip(keep).filter(|(_, &k)| !k).map(|(d, _)| d).product();
    let n: usize = dims.iter().product();
    // table[k * nt + t] = full index
    let mut table = vec![0; n];
    for full in 0..n {
        let mut rem = full;
        let mut stride = n;
        let (mut ki, mut ti) = (0, 0);
        for (&d, &kept) in dims.iter().zip(keep) {
            stride /= d;
            let digit = rem / stride;
            rem %= stride;
            if kept {
                ki = ki * d + digit;
            } else {
                ti = ti * d + digit;
            }
        }
        table[ki * nt + ti] = full;
    }
    (nk, nt, table)
}

/// Traces out every factor not listed in `keep`. Kept factors retain their
/// relative order.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix, NumError> {
    if !m.is_square() {
        return Err(NumError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    check_dims(dims, m.rows())?;
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(NumError::Subsystems {
            dims: dims.to_vec(),
            n: m.rows(),
        });
    }
    let mask: Vec<bool> = (0..dims.len()).map(|i| keep.contains(&i)).collect();
    let (nk, nt, table) = index_table(dims, &mask);
    let mut out = vec![ZERO; nk * nk];
    for r in 0..nk {
        for c in 0..nk {
            let mut acc = ZERO;
            for t in 0..nt {
                acc += m[(table[r * nt + t], table[c * nt + t])];
            }
            out[r * nk + c] = acc;
        }
    }
    ComplexMatrix::from_vec(nk, nk, out)
}

/// Maps each full index to its image when factor `perm[j]` of the input
/// becomes factor `j` of the output.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>, NumError> {
    let n: usize = dims.iter().product();
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() || perm.iter().any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true)) {
        return Err(NumError::Subsystems {
            dims: dims.to_vec(),
            n,
        });
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut map = vec![0; n];
    let mut digits = vec![0; dims.len()];
    for (full, slot) in map.iter_mut().enumerate() {
        let mut rem = full;
        for i in (0..dims.len()).rev() {
            digits[i] = rem % dims[i];
            rem /= dims[i];
        }
        let mut out = 0;
        for (j, &p) in perm.iter().enumerate() {
            out = out * new_dims[j] + digits[p];
        }
        *slot = out;
    }
    Ok(map)
}

/// Reorders tensor factors: output factor `j` is input factor `perm[j]`.
pub fn permute_subsystems(
    m: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix, NumError> {
    if !m.is_square() {
        return Err(NumError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    check_dims(dims, m.rows())?;
    let map = permutation_map(dims, perm)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    Ok(out)
}

pub fn permute_ket(v: &Ket, dims: &[usize], perm: &[usize]) -> Result<Ket, NumError> {
    check_dims(dims, v.dim())?;
    let map = permutation_map(dims, perm)?;
    let mut out = Ket::zeros(v.dim());
    for (i, &j) in map.iter().enumerate() {
        out[j] = v[i];
    }
    Ok(out)
}

/// Reduced density matrix of the pure state `v` on the factors in `keep`,
/// computed as `M M^*` from the reshaped amplitudes rather than from `|v><v|`.
pub fn reduced_state(v: &Ket, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix, NumError> {
    check_dims(dims, v.dim())?;
    if keep.is_empty() || keep.iter().any(|&k| k >= dims.len()) {
        return Err(NumError::Subsystems {
            dims: dims.to_vec(),
            n: v.dim(),
        });
    }
    let mut perm: Vec<usize> = keep.to_vec();
    perm.extend((0..dims.len()).filter(|i| !keep.contains(i)));
    let moved = permute_ket(v, dims, &perm)?;
    let nk: usize = keep.iter().map(|&k| dims[k]).product();
    let nr = v.dim() / nk;
    let m = ComplexMatrix::from_vec(nk, nr, moved.amplitudes().to_vec())?;
    Ok(m.matmul(&m.adjoint()))
}

/// `(1/sqrt d) sum_i |ii>`
pub fn max_entangled(d: usize) -> Ket {
    assert!(d >= 1, "dimension must be positive");
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = Ket::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = a;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{paulis, ONE};
    use proptest::prelude::*;

    #[test]
    fn tensor_examples() {
        let [one, z, x, _] = paulis();
        let m = tensor(&one, &z);
        assert!(m.distance(&ComplexMatrix::real_diag(&[1.0, -1.0, 1.0, -1.0])) < 1e-15);
        let xx = tensor(&x, &x);
        for r in 0..4 {
            for c in 0..4 {
                let want = if r + c == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(r, c)].re, want);
            }
        }
        let p0 = ComplexMatrix::real_diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::real_diag(&[0.0, 1.0]);
        let proj = tensor(&p0, &p1);
        assert!(proj.distance(&Ket::basis(4, 1).density()) < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let epr = max_entangled(2).density();
        let rb = partial_trace(&epr, &[2, 2], &[0]).unwrap();
        assert!(rb.distance(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-15);

        let rho = ComplexMatrix::real_diag(&[0.25, 0.75]);
        let sigma = max_entangled(2).density().block(0, 0, 2, 2).scale_re(2.0);
        let prod = tensor(&rho, &sigma);
        let got = partial_trace(&prod, &[2, 2], &[1]).unwrap();
        assert!(got.distance(&sigma) < 1e-15);

        // CNOT = |0><0| x 1 + |1><1| x X; tracing the target sums the
        // diagonal 2x2 blocks of each control sector.
        let [one, _, x, _] = paulis();
        let cnot = &tensor(&ComplexMatrix::real_diag(&[1.0, 0.0]), &one)
            + &tensor(&ComplexMatrix::real_diag(&[0.0, 1.0]), &x);
        let got = partial_trace(&cnot, &[2, 2], &[0]).unwrap();
        assert!(got.distance(&ComplexMatrix::real_diag(&[2.0, 0.0])) < 1e-15);

        assert!(partial_trace(&cnot, &[3, 2], &[0]).is_err());
    }

    #[test]
    fn max_entangled_examples() {
        let v = max_entangled(2);
        let s = 1.0 / 2f64.sqrt();
        assert!((v[0].re - s).abs() < 1e-15 && (v[3].re - s).abs() < 1e-15);
        assert_eq!(v[1], ZERO);
        let v = max_entangled(3);
        for i in 0..3 {
            assert!((v[i * 3 + i].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        for d in 1..7 {
            assert!(max_entangled(d).is_unit(1e-14));
        }
    }

    #[test]
    fn permute_swaps_factors() {
        let [_, z, x, _] = paulis();
        let zx = tensor(&z, &x);
        let xz = permute_subsystems(&zx, &[2, 2], &[1, 0]).unwrap();
        assert!(xz.distance(&tensor(&x, &z)) < 1e-15);
        let a = Ket::new(vec![ONE, ZERO, ZERO]);
        let b = Ket::new(vec![ZERO, ONE]);
        let ab = a.tensor(&b);
        let ba = permute_ket(&ab, &[3, 2], &[1, 0]).unwrap();
        assert!(ba.sub(&b.tensor(&a)).norm() < 1e-15);
    }

    #[test]
    fn reduced_state_matches_partial_trace() {
        let amps: Vec<Complex64> = (0..24).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos())).collect();
        let v = Ket::new(amps).normalized();
        let dims = [2, 3, 4];
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let a = reduced_state(&v, &dims, &keep).unwrap();
            let b = partial_trace(&v.density(), &dims, &keep).unwrap();
            assert!(a.distance(&b) < 1e-14, "{keep:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn partial_trace_of_density_is_density(
            amps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
            keep_first in any::<bool>(),
        ) {
            let v = Ket::new(amps.into_iter().map(|(a, b)| Complex64::new(a, b)).collect());
            prop_assume!(v.norm() > 1e-3);
            let rho = v.normalized().density();
            let keep = if keep_first { vec![0] } else { vec![1] };
            let r = partial_trace(&rho, &[3, 4], &keep).unwrap();
            prop_assert!((r.trace() - ONE).norm() < 1e-10);
            prop_assert!(r.is_psd(1e-10));
        }
    }
}

use crate::numkit::{svd, ComplexMatrix, Ket};

use super::block::{projector_basis, BlockForm};
use super::RigidityError;

/// Rank-one projectors `K_r` on the support of `rho^{A'}` with the operators
/// of encoders 2, 3 and 4 on each.
#[derive(Debug, Clone)]
pub struct MatchedBlocks {
    pub k: Vec<ComplexMatrix>,
    pub triples: Vec<[ComplexMatrix; 3]>,
    pub complement: ComplexMatrix,
    /// Per encoder index 1..4, the sign correction `sum_k s_k Q_k` plus the
    /// identity on the complement.
    pub sign_fix: Vec<ComplexMatrix>,
}

/// A unit vector fixed by three projectors whose product has norm one.
///
/// Among the right singular vectors with singular value `>= 1 - tol`, takes
/// the projection of the standard basis vector with the largest overlap
/// (lowest index on ties) and fixes its phase so that component is positive.
pub fn common_eigenvector(
    c: &ComplexMatrix,
    d: &ComplexMatrix,
    e: &ComplexMatrix,
    tol: f64,
) -> Result<Ket, RigidityError> {
    let prod = c.matmul(d).matmul(e);
    let dec = svd(&prod)?;
    let top = dec.s.first().copied().unwrap_or(0.0);
    if top < 1.0 - tol {
        return Err(RigidityError::NoCommonEigenvector(top));
    }
    let n = prod.cols();
    let fixed: Vec<Ket> = (0..n)
        .filter(|&k| dec.s[k] >= 1.0 - tol)
        .map(|k| dec.v.column(k))
        .collect();
    let project = |j: usize| {
        fixed.iter().fold(Ket::zeros(n), |acc, f| {
            let w = f[j].conj();
            Ket::new(acc.amplitudes().iter().zip(f.amplitudes()).map(|(x, y)| x + y * w).collect())
        })
    };
    let mut best = (0, -1.0);
    for j in 0..n {
        let norm = project(j).norm();
        if norm > best.1 + 1e-12 {
            best = (j, norm);
        }
    }
    let v = project(best.0).normalized();
    let ph = v[best.0] / v[best.0].norm();
    let v = v.scale(ph.conj());
    let residual = [c, d, e]
        .iter()
        .map(|p| p.apply(&v).sub(&v).norm())
        .fold(0.0, f64::max);
    if residual > tol.sqrt().max(10.0 * tol) {
        return Err(RigidityError::NoCommonEigenvector(top));
    }
    Ok(v)
}

fn rank(q: &ComplexMatrix) -> usize {
    q.trace().re.round().max(0.0) as usize
}

/// Removes `v` from `q` and projects the result back onto a projector.
fn deflate(q: &ComplexMatrix, v: &Ket) -> ComplexMatrix {
    let raw = q - &v.density();
    let cols = projector_basis(&raw);
    if cols.is_empty() {
        return ComplexMatrix::zeros(q.rows(), q.cols());
    }
    let m = ComplexMatrix::from_columns(&cols);
    m.matmul(&m.adjoint())
}

fn find_triangle(
    sets: &[Vec<(ComplexMatrix, ComplexMatrix)>],
    tol: f64,
) -> Result<Option<[usize; 3]>, RigidityError> {
    let overlaps = |x: &ComplexMatrix, y: &ComplexMatrix| x.matmul(y).frobenius_norm() > tol;
    for (k, (q2, _)) in sets[0].iter().enumerate() {
        if rank(q2) == 0 {
            continue;
        }
        for (l, (q3, _)) in sets[1].iter().enumerate() {
            if rank(q3) == 0 || !overlaps(q2, q3) {
                continue;
            }
            for (m, (q4, _)) in sets[2].iter().enumerate() {
                if rank(q4) == 0 || !overlaps(q2, q4) || !overlaps(q3, q4) {
                    continue;
                }
                let top = svd(&q2.matmul(q3).matmul(q4))?.s[0];
                if top >= 1.0 - tol {
                    return Ok(Some([k, l, m]));
                }
            }
        }
    }
    Ok(None)
}

/// Merges blocks with `R = +-R'` per encoder, then peels common eigenvectors
/// off triangles of the overlap graph until the support is exhausted.
pub fn match_blocks(b: &BlockForm, tol: f64) -> Result<MatchedBlocks, RigidityError> {
    let mut sets: Vec<Vec<(ComplexMatrix, ComplexMatrix)>> = Vec::with_capacity(3);
    let mut sign_fix = Vec::with_capacity(3);
    for eb in &b.encoders {
        let mut merged: Vec<(ComplexMatrix, ComplexMatrix)> = Vec::new();
        let mut fix = b.complement.clone();
        for (q, r) in eb.q.iter().zip(&eb.r) {
            let found = merged.iter_mut().find_map(|(mq, mr)| {
                let plus = r.distance(mr);
                let minus = (r + &*mr).frobenius_norm();
                if plus.min(minus) <= tol * std::f64::consts::SQRT_2 {
                    Some((mq, if plus <= minus { 1.0 } else { -1.0 }))
                } else {
                    None
                }
            });
            match found {
                Some((mq, sign)) => {
                    *mq = &*mq + q;
                    fix = &fix + &q.scale_re(sign);
                }
                None => {
                    merged.push((q.clone(), r.clone()));
                    fix = &fix + q;
                }
            }
        }
        sets.push(merged);
        sign_fix.push(fix);
    }

    let mut remaining = rank(&b.support);
    let mut k = Vec::with_capacity(remaining);
    let mut triples = Vec::with_capacity(remaining);
    while remaining > 0 {
        let [i2, i3, i4] = find_triangle(&sets, tol)?.ok_or(RigidityError::NoTriangle { remaining })?;
        let v = common_eigenvector(&sets[0][i2].0, &sets[1][i3].0, &sets[2][i4].0, tol)?;
        let idx = [i2, i3, i4];
        let mut got = [0; 3];
        let mut want = [0; 3];
        for e in 0..3 {
            let q = &sets[e][idx[e]].0;
            want[e] = rank(q) - 1;
            let next = deflate(q, &v);
            got[e] = rank(&next);
            sets[e][idx[e]].0 = next;
        }
        if got != want {
            return Err(RigidityError::Deflation { got, want });
        }
        triples.push([
            sets[0][i2].1.clone(),
            sets[1][i3].1.clone(),
            sets[2][i4].1.clone(),
        ]);
        k.push(v.density());
        remaining -= 1;
    }
    Ok(MatchedBlocks {
        k,
        triples,
        complement: b.complement.clone(),
        sign_fix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::paulis;
    use crate::randlab::haar_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_rank_one() {
        let p = Ket::basis(3, 0).density();
        let v = common_eigenvector(&p, &p, &p, 1e-9).unwrap();
        assert!(v.sub(&Ket::basis(3, 0)).norm() < 1e-12);
    }

    #[test]
    fn identity_picks_first_basis_vector() {
        let id = ComplexMatrix::identity(2);
        let v = common_eigenvector(&id, &id, &id, 1e-9).unwrap();
        assert!(v.sub(&Ket::basis(2, 0)).norm() < 1e-12);
    }

    #[test]
    fn planted_common_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 6;
        let u = haar_unitary(n, &mut rng);
        let planted = u.column(0);
        // Each projector holds the planted vector plus two different others.
        let proj = |cols: &[usize]| {
            let m = ComplexMatrix::from_columns(&cols.iter().map(|&c| u.column(c)).collect::<Vec<_>>());
            m.matmul(&m.adjoint())
        };
        let v = common_eigenvector(&proj(&[0, 1, 2]), &proj(&[0, 3]), &proj(&[0, 4, 5]), 1e-9).unwrap();
        assert!((v.inner(&planted).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn no_common_vector() {
        let p0 = Ket::basis(2, 0).density();
        let p1 = Ket::basis(2, 1).density();
        assert!(matches!(
            common_eigenvector(&p0, &p1, &p0, 1e-9),
            Err(RigidityError::NoCommonEigenvector(_))
        ));
    }

    #[test]
    fn deflation_drops_rank() {
        let id = ComplexMatrix::identity(3);
        let v = Ket::basis(3, 1);
        let d = deflate(&id, &v);
        assert_eq!(rank(&d), 2);
        assert!(d.is_projector(1e-12));
        let [_, z, ..] = paulis();
        assert_eq!(rank(&z.scale_re(0.0)), 0);
    }
}

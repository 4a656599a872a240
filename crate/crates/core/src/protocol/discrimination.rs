use crate::numkit::{eigvalsh, psd_sqrt, ComplexMatrix, Ket, DEFAULT_TOL};

use super::{ProtocolError, State, StateEnsemble};

fn sum_sqrt(vals: &[f64]) -> f64 {
    vals.iter().map(|&x| x.max(0.0).sqrt()).sum()
}

/// Weighted Gram matrix `p_i p_j <psi_i|psi_j>`; shares its nonzero spectrum
/// with `sum_i p_i^2 |psi_i><psi_i|`.
fn weighted_gram(weights: &[f64], kets: &[&Ket]) -> ComplexMatrix {
    let m = kets.len();
    let mut g = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let z = kets[i].inner(kets[j]) * (weights[i] * weights[j]);
            g[(i, j)] = z;
            g[(j, i)] = z.conj();
        }
    }
    g
}

/// `Tr sqrt(sum_i p_i^2 rho_i^2)`
pub fn hc_quantity(e: &StateEnsemble) -> Result<f64, ProtocolError> {
    let weights: Vec<f64> = e.entries.iter().map(|(p, _)| *p).collect();
    if let Some(kets) = e.pure_states() {
        // Both forms share their nonzero spectrum; use the smaller one.
        if kets.len() <= kets[0].dim() {
            return Ok(sum_sqrt(&eigvalsh(&weighted_gram(&weights, &kets))?));
        }
    }
    let n = e.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for (p, s) in &e.entries {
        let rho = s.density();
        let sq = match s {
            State::Pure(_) => rho,
            State::Mixed(_) => rho.matmul(&rho),
        };
        acc = &acc + &sq.scale_re(p * p);
    }
    Ok(sum_sqrt(&eigvalsh(&acc)?))
}

/// Success probability of the square-root measurement on a uniform ensemble
/// of pure states: `(1/m) sum_i ((sqrt G)_ii)^2` with `G` the Gram matrix.
pub fn pgm_success(e: &StateEnsemble) -> Result<f64, ProtocolError> {
    let kets = e
        .pure_states()
        .ok_or_else(|| ProtocolError::Ensemble("square-root measurement needs pure states".into()))?;
    if !e.is_uniform(DEFAULT_TOL) {
        return Err(ProtocolError::Ensemble(
            "square-root measurement needs uniform probabilities".into(),
        ));
    }
    let m = kets.len();
    let g = weighted_gram(&vec![1.0; m], &kets);
    let root = psd_sqrt(&g, 1e-8)?;
    Ok((0..m).map(|i| root[(i, i)].re.powi(2)).sum::<f64>() / m as f64)
}

/// Optimal success probability for two equiprobable pure states.
pub fn helstrom_two(a: &Ket, b: &Ket) -> f64 {
    0.5 * (1.0 + (1.0 - a.inner(b).norm_sqr()).max(0.0).sqrt())
}

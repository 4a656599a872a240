use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::numkit::{paulis, tensor, ComplexMatrix, Ket};
use crate::randlab::{haar_unitary, random_density};
use crate::rigidity::{Block, CanonicalDecomposition};

use super::{Protocol, ProtocolError};

/// How the planted `rho^{A'B'}` is drawn inside each sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoKind {
    #[default]
    Random,
    /// Maximally mixed within each sector.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScrambleOptions {
    pub rho: RhoKind,
    /// Replace every unitary draw by the identity.
    pub null: bool,
}

/// See [`random_scrambled_bw_with`].
pub fn random_scrambled_bw<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a_prime: usize,
    dim_b_prime: usize,
    blocks: usize,
) -> Result<(Protocol, CanonicalDecomposition), ProtocolError> {
    random_scrambled_bw_with(rng, dim_a_prime, dim_b_prime, blocks, &ScrambleOptions::default())
}

/// Splits `n` into `k` nonempty contiguous ranges at random cut points.
fn random_split<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<std::ops::Range<usize>> {
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, k - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        out.push(start..c);
        start = c;
    }
    out
}

fn columns(q: &ComplexMatrix, range: &[usize]) -> ComplexMatrix {
    let cols: Vec<Ket> = range.iter().map(|&j| q.column(j)).collect();
    ComplexMatrix::from_columns(&cols)
}

/// Plants the block Pauli form and hides it behind random local unitaries.
///
/// `A'` is split into `blocks` projectors, grouped into sectors that own
/// disjoint slices of `B'`. Blocks in one sector share a frame up to a Pauli
/// and a phase, which keeps the protocol errorless while exercising the sign
/// handling of the canonicalizer. Bob's space is `B' (x) B''` with a Haar
/// rotation `W`.
pub fn random_scrambled_bw_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a_prime: usize,
    dim_b_prime: usize,
    blocks: usize,
    opts: &ScrambleOptions,
) -> Result<(Protocol, CanonicalDecomposition), ProtocolError> {
    let (a, bp) = (dim_a_prime, dim_b_prime);
    if a == 0 || bp == 0 || blocks == 0 || blocks > a {
        return Err(ProtocolError::Parameters(format!(
            "need 1 <= blocks <= dim A' and dim B' >= 1, got dim A'={a}, dim B'={bp}, blocks={blocks}"
        )));
    }
    let haar = |n: usize, rng: &mut R| {
        if opts.null {
            ComplexMatrix::identity(n)
        } else {
            haar_unitary(n, rng)
        }
    };
    let sectors = blocks.min(bp);
    let q_a = haar(a, rng);
    let q_b = haar(bp, rng);

    let a_ranges = random_split(rng, a, blocks);
    let mut order: Vec<usize> = (0..blocks).collect();
    order.shuffle(rng);
    let mut sector_of = vec![0; blocks];
    for (t, &r) in order.iter().enumerate() {
        sector_of[r] = t % sectors;
    }
    let b_ranges = random_split(rng, bp, sectors);

    let projectors: Vec<ComplexMatrix> = a_ranges
        .iter()
        .map(|rg| {
            let m = columns(&q_a, &rg.clone().collect::<Vec<_>>());
            m.matmul(&m.adjoint())
        })
        .collect();

    let mut weights = Vec::with_capacity(sectors);
    let mut pieces = Vec::with_capacity(sectors);
    for s in 0..sectors {
        let a_idx: Vec<usize> = (0..blocks)
            .filter(|&r| sector_of[r] == s)
            .flat_map(|r| a_ranges[r].clone())
            .collect();
        let b_idx: Vec<usize> = b_ranges[s].clone().collect();
        let j = tensor(&columns(&q_a, &a_idx), &columns(&q_b, &b_idx));
        let n = a_idx.len() * b_idx.len();
        let (w, rho_s) = match opts.rho {
            RhoKind::Random => {
                let w: f64 = -rng.random::<f64>().max(f64::MIN_POSITIVE).ln();
                (w, random_density(n, rng))
            }
            RhoKind::Flat => (n as f64, ComplexMatrix::identity(n).scale_re(1.0 / n as f64)),
        };
        weights.push(w);
        pieces.push(j.matmul(&rho_s).matmul(&j.adjoint()));
    }
    let total: f64 = weights.iter().sum();
    let rho = pieces
        .iter()
        .zip(&weights)
        .fold(ComplexMatrix::zeros(a * bp, a * bp), |acc, (x, w)| &acc + &x.scale_re(w / total));

    let sigma = paulis();
    let sector_frames: Vec<ComplexMatrix> = (0..sectors).map(|_| haar(2, rng)).collect();
    let frames: Vec<ComplexMatrix> = (0..blocks)
        .map(|r| {
            if opts.null {
                return ComplexMatrix::identity(2);
            }
            let k = rng.random_range(0..4);
            let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            sector_frames[sector_of[r]].matmul(&sigma[k]).scale(phase)
        })
        .collect();

    let c: Vec<ComplexMatrix> = (0..4).map(|_| haar(a, rng)).collect();
    let v = haar(2 * a, rng);
    let w = haar(2 * bp, rng);

    let dec = CanonicalDecomposition {
        v,
        w,
        c,
        rho,
        blocks: projectors
            .into_iter()
            .zip(frames)
            .map(|(p, s)| Block { p, s, sign: 1 })
            .collect(),
    };
    let p = dec.to_protocol()?;
    Ok((p, dec))
}

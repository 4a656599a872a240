//! Orthogonal unitary bases and non-equivalence certificates.

mod certify;
mod matching;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numkit::{hs_inner, tensor, ComplexMatrix, NumError, ONE};

pub use certify::{
    certify_not_clock_shift, recheck, CertificateKind, NonEquivalenceCertificate, WitnessValue,
};
pub use matching::{regular_bipartite_edge_coloring, PermutationMatching};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BasisError {
    #[error("dimension {d} is below the minimum {min}")]
    TooSmall { d: usize, min: usize },
    #[error("element {index} is {rows}x{cols}, expected {d}x{d}")]
    ElementShape {
        index: usize,
        rows: usize,
        cols: usize,
        d: usize,
    },
    #[error("{0:?} is not a permutation")]
    NotBijection(Vec<usize>),
    #[error("graph is not {k}-regular")]
    NotRegular { k: usize },
    #[error("no perfect matching in a regular bipartite graph")]
    MatchingFailed,
    #[error("beta must have modulus 1, got {0}")]
    NotUnitModulus(f64),
    #[error("not an orthogonal unitary basis: {0}")]
    Invalid(String),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

/// A list of `d x d` unitaries meant to be pairwise Hilbert-Schmidt
/// orthogonal. Validity is checked by [`verify_orthogonal_unitary_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryBasis {
    pub d: usize,
    pub elements: Vec<ComplexMatrix>,
    pub labels: Option<Vec<String>>,
}

impl UnitaryBasis {
    pub fn new(d: usize, elements: Vec<ComplexMatrix>) -> Result<Self, BasisError> {
        for (index, e) in elements.iter().enumerate() {
            if e.shape() != (d, d) {
                return Err(BasisError::ElementShape {
                    index,
                    rows: e.rows(),
                    cols: e.cols(),
                    d,
                });
            }
        }
        Ok(Self {
            d,
            elements,
            labels: None,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.elements.len());
        self.labels = Some(labels);
        self
    }
}

/// `omega_d = exp(2 pi i / d)`
pub fn root_of_unity(d: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / d as f64)
}

/// `X_d |k> = |k + 1 mod d>`
pub fn shift(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |r, c| if r == (c + 1) % d { ONE } else { crate::numkit::ZERO })
}

/// `Z_d = diag(1, omega, ..., omega^(d-1))`
pub fn clock(d: usize) -> ComplexMatrix {
    let w = root_of_unity(d);
    ComplexMatrix::diag(&(0..d).map(|k| w.powu(k as u32)).collect::<Vec<_>>())
}

fn power(m: &ComplexMatrix, e: usize) -> ComplexMatrix {
    (0..e).fold(ComplexMatrix::identity(m.rows()), |acc, _| acc.matmul(m))
}

/// The `d^2` operators `X^i Z^j`, stored at index `i * d + j`.
pub fn clock_shift_basis(d: usize) -> Result<UnitaryBasis, BasisError> {
    if d < 2 {
        return Err(BasisError::TooSmall { d, min: 2 });
    }
    let x = shift(d);
    let z = clock(d);
    let mut elements = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for i in 0..d {
        let xi = power(&x, i);
        for j in 0..d {
            elements.push(xi.matmul(&power(&z, j)));
            labels.push(format!("X^{i} Z^{j}"));
        }
    }
    Ok(UnitaryBasis::new(d, elements)?.with_labels(labels))
}

/// `{1, Z, X, XZ}`
pub fn pauli_basis() -> UnitaryBasis {
    clock_shift_basis(2).expect("d = 2 is valid")
}

/// All products `a (x) b`, stored at index `i * |b2| + j`.
pub fn tensor_product_basis(b1: &UnitaryBasis, b2: &UnitaryBasis) -> UnitaryBasis {
    let mut elements = Vec::with_capacity(b1.len() * b2.len());
    let mut labels = Vec::with_capacity(b1.len() * b2.len());
    for (i, a) in b1.elements.iter().enumerate() {
        for (j, b) in b2.elements.iter().enumerate() {
            elements.push(tensor(a, b));
            let la = b1.labels.as_ref().map_or(i.to_string(), |l| l[i].clone());
            let lb = b2.labels.as_ref().map_or(j.to_string(), |l| l[j].clone());
            labels.push(format!("({la}) x ({lb})"));
        }
    }
    UnitaryBasis {
        d: b1.d * b2.d,
        elements,
        labels: Some(labels),
    }
}

/// The `k`-fold tensor power of the Pauli basis, on dimension `2^k`.
pub fn pauli_tensor_basis(k: u32) -> Result<UnitaryBasis, BasisError> {
    if k == 0 {
        return Err(BasisError::TooSmall { d: 1, min: 2 });
    }
    let p = pauli_basis();
    Ok((1..k).fold(p.clone(), |acc, _| tensor_product_basis(&acc, &p)))
}

/// Least `k` in `[2, d - 2]` that does not divide `d`.
pub fn smallest_nondividing(d: usize) -> Result<usize, BasisError> {
    if d < 5 {
        return Err(BasisError::TooSmall { d, min: 5 });
    }
    Ok((2..=d - 2)
        .find(|k| d % k != 0)
        .expect("some k in [2, d-2] does not divide d when d >= 5"))
}

fn permutation_matrix(m: &PermutationMatching) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(m.d, m.d);
    for (a, &b) in m.image.iter().enumerate() {
        p[(b, a)] = ONE;
    }
    p
}

/// The `d` permutations `P_0 = 1`, `P_1`, ... used by [`matching_basis`].
/// `P_1` has cycles of lengths `k` and `d - k` with `k` the smallest
/// non-divisor of `d`; the rest split the remaining edges of `K_{d,d}`.
pub fn matching_permutations(d: usize) -> Result<Vec<PermutationMatching>, BasisError> {
    let k = smallest_nondividing(d)?;
    let p0 = PermutationMatching::identity(d);
    let p1 = PermutationMatching::from_cycles(&[k, d - k]);
    let adj: Vec<Vec<bool>> = (0..d)
        .map(|a| (0..d).map(|b| b != a && b != p1.image[a]).collect())
        .collect();
    let mut out = vec![p0, p1];
    out.extend(regular_bipartite_edge_coloring(d, &adj, d - 2)?);
    Ok(out)
}

/// `{P_i Z^j}` at index `i * d + j`, where the `P_i` are disjoint perfect
/// matchings of `K_{d,d}` and `P_1` contains a cycle whose length does not
/// divide `d`.
pub fn matching_basis(d: usize) -> Result<UnitaryBasis, BasisError> {
    let perms = matching_permutations(d)?;
    let z = clock(d);
    let mut elements = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for (i, m) in perms.iter().enumerate() {
        let p = permutation_matrix(m);
        let mut zj = ComplexMatrix::identity(d);
        for j in 0..d {
            elements.push(p.matmul(&zj));
            labels.push(format!("P{i} Z^{j}"));
            zj = zj.matmul(&z);
        }
    }
    Ok(UnitaryBasis::new(d, elements)?.with_labels(labels))
}

/// Werner's nine unitaries on `C^3`: `X^j Z^i` at index `j * 3 + i` for
/// `j` in `{0, 2}`, and `X Z^i M` with `M = diag(beta, 1, 1)` for `j = 1`.
pub fn werner3_basis(beta: Complex64) -> Result<UnitaryBasis, BasisError> {
    if (beta.norm() - 1.0).abs() > 1e-12 {
        return Err(BasisError::NotUnitModulus(beta.norm()));
    }
    let x = shift(3);
    let z = clock(3);
    let m = ComplexMatrix::diag(&[beta, ONE, ONE]);
    let mut elements = Vec::with_capacity(9);
    let mut labels = Vec::with_capacity(9);
    for j in 0..3 {
        for i in 0..3 {
            let mut u = power(&x, j).matmul(&power(&z, i));
            if j == 1 {
                u = u.matmul(&m);
                labels.push(format!("X Z^{i} M"));
            } else {
                labels.push(format!("X^{j} Z^{i}"));
            }
            elements.push(u);
        }
    }
    Ok(UnitaryBasis::new(3, elements)?.with_labels(labels))
}

/// Outcome of [`verify_orthogonal_unitary_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct BasisReport {
    pub d: usize,
    pub count: usize,
    /// Largest `||U^* U - 1||_F` over elements.
    pub max_unitarity_violation: f64,
    /// Largest `|Tr(U_i^* U_j)|` over `i != j`.
    pub max_inner_violation: f64,
    pub pass: bool,
}

impl BasisReport {
    pub fn max_violation(&self) -> f64 {
        self.max_unitarity_violation.max(self.max_inner_violation)
    }
}

pub fn verify_orthogonal_unitary_basis(b: &UnitaryBasis, tol: f64) -> BasisReport {
    let id = ComplexMatrix::identity(b.d);
    let max_unitarity_violation = b
        .elements
        .iter()
        .map(|u| u.adjoint().matmul(u).distance(&id))
        .fold(0.0, f64::max);
    let mut max_inner_violation: f64 = 0.0;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let ip = hs_inner(&b.elements[i], &b.elements[j]).expect("shapes checked on construction");
            max_inner_violation = max_inner_violation.max(ip.norm());
        }
    }
    let count = b.len();
    BasisReport {
        d: b.d,
        count,
        max_unitarity_violation,
        max_inner_violation,
        pass: count == b.d * b.d && max_unitarity_violation <= tol && max_inner_violation <= tol,
    }
}

//! JSON and CSV formats.
//!
//! Complex numbers are `[re, im]` pairs. Basis elements are flat row-major
//! lists (their size is fixed by `d`); other matrices are arrays of rows.
//! Numbers are written in the shortest form that parses back to the same
//! double, so `load(save(x)) == x` bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bases::UnitaryBasis;
use crate::numkit::{Complex64, ComplexMatrix};
use crate::protocol::Protocol;
use crate::randlab::ESDSample;
use crate::rigidity::{Block, CanonicalDecomposition};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: field `{field}`: {message}")]
    Field {
        origin: String,
        field: String,
        message: String,
    },
}

type Rows = Vec<Vec<[f64; 2]>>;

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn from_rows(rows: &Rows, origin: &str, field: &str) -> Result<ComplexMatrix, IoError> {
    let bad = |message: String| IoError::Field {
        origin: origin.to_string(),
        field: field.to_string(),
        message,
    };
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(bad("empty matrix".into()));
    }
    if let Some(r) = rows.iter().position(|row| row.len() != cols) {
        return Err(bad(format!("row {r} has {} entries, expected {cols}", rows[r].len())));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::from_vec(rows.len(), cols, data).map_err(|e| bad(e.to_string()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisDoc {
    d: usize,
    elements: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProtocolDoc {
    dim_a_prime: usize,
    dim_a_dbl: usize,
    dim_b: usize,
    tau: Rows,
    encoders: Vec<Rows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    p: Rows,
    s: Rows,
    sign: i8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionDoc {
    v: Rows,
    w: Rows,
    c: Vec<Rows>,
    rho: Rows,
    blocks: Vec<BlockDoc>,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str, origin: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string(doc).expect("documents are plain data");
    s.push('\n');
    s
}

pub fn basis_to_json(b: &UnitaryBasis) -> String {
    render(&BasisDoc {
        d: b.d,
        elements: b
            .elements
            .iter()
            .map(|m| to_rows(m).into_iter().flatten().collect())
            .collect(),
        labels: b.labels.clone(),
    })
}

/// `origin` names the source in error messages.
pub fn basis_from_json(text: &str, origin: &str) -> Result<UnitaryBasis, IoError> {
    let doc: BasisDoc = parse(text, origin)?;
    let elements = doc
        .elements
        .iter()
        .enumerate()
        .map(|(i, m)| {
            if doc.d == 0 || m.len() != doc.d * doc.d {
                return Err(IoError::Field {
                    origin: origin.to_string(),
                    field: format!("elements[{i}]"),
                    message: format!("expected {} entries, got {}", doc.d * doc.d, m.len()),
                });
            }
            from_rows(&m.chunks(doc.d).map(<[_]>::to_vec).collect(), origin, &format!("elements[{i}]"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let field = |field: &str, message: String| IoError::Field {
        origin: origin.to_string(),
        field: field.to_string(),
        message,
    };
    let mut b = UnitaryBasis::new(doc.d, elements).map_err(|e| field("elements", e.to_string()))?;
    if let Some(labels) = doc.labels {
        if labels.len() != b.len() {
            return Err(field("labels", format!("{} labels for {} elements", labels.len(), b.len())));
        }
        b = b.with_labels(labels);
    }
    Ok(b)
}

pub fn protocol_to_json(p: &Protocol) -> String {
    render(&ProtocolDoc {
        dim_a_prime: p.dim_a_prime,
        dim_a_dbl: p.dim_a_dbl,
        dim_b: p.dim_b,
        tau: to_rows(&p.tau),
        encoders: p.encoders.iter().map(to_rows).collect(),
    })
}

pub fn protocol_from_json(text: &str, origin: &str) -> Result<Protocol, IoError> {
    let doc: ProtocolDoc = parse(text, origin)?;
    let tau = from_rows(&doc.tau, origin, "tau")?;
    let encoders = doc
        .encoders
        .iter()
        .enumerate()
        .map(|(i, m)| from_rows(m, origin, &format!("encoders[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Protocol::new(doc.dim_a_prime, doc.dim_a_dbl, doc.dim_b, tau, encoders).map_err(|e| IoError::Field {
        origin: origin.to_string(),
        field: "protocol".into(),
        message: e.to_string(),
    })
}

pub fn decomposition_to_json(dec: &CanonicalDecomposition) -> String {
    render(&DecompositionDoc {
        v: to_rows(&dec.v),
        w: to_rows(&dec.w),
        c: dec.c.iter().map(to_rows).collect(),
        rho: to_rows(&dec.rho),
        blocks: dec
            .blocks
            .iter()
            .map(|b| BlockDoc {
                p: to_rows(&b.p),
                s: to_rows(&b.s),
                sign: b.sign,
            })
            .collect(),
    })
}

pub fn decomposition_from_json(text: &str, origin: &str) -> Result<CanonicalDecomposition, IoError> {
    let doc: DecompositionDoc = parse(text, origin)?;
    let c = doc
        .c
        .iter()
        .enumerate()
        .map(|(i, m)| from_rows(m, origin, &format!("c[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let blocks = doc
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if b.sign != 1 && b.sign != -1 {
                return Err(IoError::Field {
                    origin: origin.to_string(),
                    field: format!("blocks[{i}].sign"),
                    message: format!("must be 1 or -1, got {}", b.sign),
                });
            }
            Ok(Block {
                p: from_rows(&b.p, origin, &format!("blocks[{i}].p"))?,
                s: from_rows(&b.s, origin, &format!("blocks[{i}].s"))?,
                sign: b.sign,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CanonicalDecomposition {
        v: from_rows(&doc.v, origin, "v")?,
        w: from_rows(&doc.w, origin, "w")?,
        c,
        rho: from_rows(&doc.rho, origin, "rho")?,
        blocks,
    })
}

/// One eigenvalue per line under the header `eigenvalue`.
pub fn esd_to_csv(s: &ESDSample) -> String {
    let mut out = String::with_capacity(24 * (s.eigenvalues.len() + 1));
    out.push_str("eigenvalue\n");
    for x in &s.eigenvalues {
        out.push_str(&format!("{x:?}\n"));
    }
    out
}

pub fn esd_from_csv(text: &str, origin: &str) -> Result<Vec<f64>, IoError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "eigenvalue" => {}
        other => {
            return Err(IoError::Parse {
                origin: origin.to_string(),
                message: format!("expected header `eigenvalue`, got {other:?}"),
            })
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse::<f64>().map_err(|e| IoError::Field {
                origin: origin.to_string(),
                field: format!("eigenvalue (line {})", i + 2),
                message: e.to_string(),
            })
        })
        .collect()
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn origin(path: &Path) -> String {
    path.display().to_string()
}

pub fn save_basis(path: &Path, b: &UnitaryBasis) -> Result<(), IoError> {
    write(path, &basis_to_json(b))
}

pub fn load_basis(path: &Path) -> Result<UnitaryBasis, IoError> {
    basis_from_json(&read(path)?, &origin(path))
}

pub fn save_protocol(path: &Path, p: &Protocol) -> Result<(), IoError> {
    write(path, &protocol_to_json(p))
}

pub fn load_protocol(path: &Path) -> Result<Protocol, IoError> {
    protocol_from_json(&read(path)?, &origin(path))
}

pub fn save_decomposition(path: &Path, dec: &CanonicalDecomposition) -> Result<(), IoError> {
    write(path, &decomposition_to_json(dec))
}

pub fn load_decomposition(path: &Path) -> Result<CanonicalDecomposition, IoError> {
    decomposition_from_json(&read(path)?, &origin(path))
}

pub fn save_esd_csv(path: &Path, s: &ESDSample) -> Result<(), IoError> {
    write(path, &esd_to_csv(s))
}

pub fn load_esd_csv(path: &Path) -> Result<Vec<f64>, IoError> {
    esd_from_csv(&read(path)?, &origin(path))
}

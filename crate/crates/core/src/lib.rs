//! Superdense coding workbench.
//!
//! - [`numkit`]: dense complex matrices, kets, partial traces and matrix functions.
//! - [`bases`]: orthogonal unitary bases and certificates of non-equivalence to
//!   the clock and shift basis.
//! - [`protocol`]: protocols, encoded ensembles, errorlessness and the
//!   Holevo-Curlander / pretty-good-measurement bounds.
//! - [`rigidity`]: canonicalization of errorless two-dimensional protocols.
//! - [`randlab`]: Haar-random protocols, Marchenko-Pastur spectra and related
//!   Monte-Carlo checks.
//! - [`io`] and [`cli`]: JSON/CSV formats and the `sdc` command line.

pub mod numkit;
pub mod bases;
pub mod protocol;
pub mod rigidity;
pub mod randlab;
pub mod io;
pub mod cli;

//! Intersection posets, characteristic polynomials, chambers and the
//! simpliciality test for finite affine arrangements.

mod chambers;
mod finite_field;
mod polynomial;
mod poset;
mod restrict;

use serde::Serialize;
use thiserror::Error;

pub use chambers::{
    enumerate_chambers, is_simplicial, Chamber, ChamberSet, Sign, SimplicialCertificate,
    MAX_CHAMBER_DIM, MAX_CHAMBER_HYPERPLANES, SIMPLICIAL_DEFINITION,
};
pub use finite_field::{bad_primes, finite_field_count, good_primes, integer_rows, is_prime};
pub use polynomial::Polynomial;
pub use poset::{
    chamber_count, characteristic_polynomial, deletion_restriction_holds, flat_poset,
    poincare_polynomial, restriction, ChamberCount, Flat, FlatPoset,
};

use crate::exactfield::Rational;
use crate::orbit_config::{ArrangementSpec, ConfigError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrangementError {
    #[error("arrangement is not defined over the rationals")]
    NotReal,
    #[error("arrangement is not central")]
    Centrality,
    #[error("arrangement too large: dimension {dim}, {hyperplanes} hyperplanes")]
    Size { dim: usize, hyperplanes: usize },
    #[error("{0} is a bad prime for this arrangement")]
    BadPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("witness bound must be positive, got {0}")]
    InvalidBound(Rational),
    #[error("no hyperplane with index {0}")]
    NoSuchHyperplane(usize),
    #[error("internal consistency check failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl ArrangementError {
    /// Whether the error comes from a size guard rail.
    pub fn is_guard_rail(&self) -> bool {
        matches!(self, ArrangementError::Size { .. })
    }
}

/// Summary of everything computed for one arrangement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArrangementReport {
    pub label: String,
    pub dim: usize,
    pub hyperplanes: usize,
    /// Number of flats of each dimension, indexed by dimension.
    pub flats: Vec<usize>,
    pub chi: Polynomial,
    pub poincare: Polynomial,
    pub central: bool,
    pub rank: usize,
    /// Zaslavsky counts; absent over non-real fields.
    pub chambers: Option<ChamberCount>,
    pub enumerated_chambers: Option<usize>,
    pub simplicial: Option<bool>,
    pub certificate: Option<Vec<usize>>,
    pub simplicial_definition: &'static str,
}

/// Computes the report. Parts that do not apply (chambers over ℚ(ζ_m),
/// simpliciality of affine arrangements, enumeration past the guard rails)
/// are left empty.
pub fn arrangement_report(a: &ArrangementSpec) -> Result<ArrangementReport, ArrangementError> {
    let p = flat_poset(a);
    let real = a.is_rational();
    let chambers = if real { Some(chamber_count(&p)?) } else { None };
    let enumerated = match enumerate_chambers(a, &Rational::one()) {
        Ok(c) => Some(c.len()),
        Err(ArrangementError::NotReal | ArrangementError::Size { .. }) => None,
        Err(e) => return Err(e),
    };
    let central = p.is_central();
    let cert = if real && central { Some(is_simplicial(a)?) } else { None };
    Ok(ArrangementReport {
        label: a.label.clone(),
        dim: a.dim,
        hyperplanes: a.len(),
        flats: p.count_by_dim(),
        chi: characteristic_polynomial(&p),
        poincare: poincare_polynomial(&p)?,
        central,
        rank: p.rank(),
        chambers,
        enumerated_chambers: enumerated,
        simplicial: cert.as_ref().map(|c| c.simplicial),
        certificate: cert.map(|c| c.wall_counts),
        simplicial_definition: SIMPLICIAL_DEFINITION,
    })
}

//! Fibers of the map forgetting the last coordinate of an orbit
//! configuration, and a pair of fibers with different first Betti numbers.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactfield::{ComplexPoint, GaussianRational, Rational};
use crate::orbit_config::{is_orbit_config, ConfigError};
use crate::orbmodel::{OrbifoldError, PlanarAction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObstructionError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0} has infinite orbits; only finite groups are supported")]
    Unsupported(String),
    #[error("{0} has no fixed point, so no witness pair exists")]
    NoWitness(String),
    #[error("base {0} is not an orbit configuration")]
    Membership(String),
    #[error("need n >= 2, got {0}")]
    Arity(usize),
}

impl From<OrbifoldError> for ObstructionError {
    fn from(e: OrbifoldError) -> Self {
        ObstructionError::Config(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitSize {
    Finite(u64),
    Infinite,
}

impl Serialize for OrbitSize {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            OrbitSize::Finite(n) => s.serialize_u64(*n),
            OrbitSize::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// `|H| / |H_z|`.
pub fn orbit_size(a: &PlanarAction, z: &ComplexPoint) -> Result<OrbitSize, ObstructionError> {
    a.validate()?;
    a.check_domain(z)?;
    let Some(order) = a.group_order() else {
        return Ok(OrbitSize::Infinite);
    };
    let fixed = a
        .special_points()
        .iter()
        .any(|s| z.coincides(&ComplexPoint::exact(s.point.clone())));
    Ok(OrbitSize::Finite(if fixed { 1 } else { order as u64 }))
}

/// The fiber over a base tuple: the domain minus the orbits of the base
/// coordinates, a plane with finitely many punctures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberDescriptor {
    pub base: Vec<ComplexPoint>,
    pub orbit_sizes: Vec<u64>,
    /// Points removed by the base orbits.
    pub punctures: u64,
    /// Points already missing from the domain.
    pub domain_punctures: u64,
    pub b1: u64,
}

pub fn fiber_descriptor(a: &PlanarAction, base: &[ComplexPoint]) -> Result<FiberDescriptor, ObstructionError> {
    a.validate()?;
    if a.group_order().is_none() {
        return Err(ObstructionError::Unsupported(a.name()));
    }
    if !is_orbit_config(a, base)? {
        return Err(ObstructionError::Membership(format!("{base:?}")));
    }
    let orbit_sizes = base
        .iter()
        .map(|z| match orbit_size(a, z)? {
            OrbitSize::Finite(n) => Ok(n),
            OrbitSize::Infinite => Err(ObstructionError::Unsupported(a.name())),
        })
        .collect::<Result<Vec<u64>, _>>()?;
    let punctures = orbit_sizes.iter().sum();
    let domain_punctures = a.domain_punctures().len() as u64;
    Ok(FiberDescriptor {
        base: base.to_vec(),
        orbit_sizes,
        punctures,
        domain_punctures,
        b1: punctures + domain_punctures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NotQuasifibration,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasifibrationWitness {
    pub action: PlanarAction,
    pub n: usize,
    pub fixed_point: GaussianRational,
    pub free_point: GaussianRational,
    pub at_fixed: FiberDescriptor,
    pub at_free: FiberDescriptor,
    pub verdict: Verdict,
    pub narrative: String,
}

/// Compares the fibers over `(s, x_2, …, x_{n−1})` and `(s', x_2, …, x_{n−1})`
/// for a fixed point `s` and a nearby free point `s'`.
pub fn quasifibration_witness(a: &PlanarAction, n: usize) -> Result<QuasifibrationWitness, ObstructionError> {
    a.validate()?;
    if n < 2 {
        return Err(ObstructionError::Arity(n));
    }
    let fixed = a
        .special_points()
        .into_iter()
        .find(|p| p.isotropy > 1)
        .ok_or_else(|| ObstructionError::NoWitness(a.name()))?;
    if a.group_order().is_none() {
        return Err(ObstructionError::Unsupported(a.name()));
    }
    let s = fixed.point;
    let s_free = &s + &GaussianRational::real(Rational::frac(1, 4));
    // shared coordinates s + 2, s + 3, …: free, avoiding the domain
    // punctures, and in orbits distinct from each other and from s, s'
    let shared: Vec<ComplexPoint> = (0..n - 2)
        .map(|k| ComplexPoint::exact(&s + &GaussianRational::from_ints(k as i64 + 2, 0)))
        .collect();
    let with = |first: &GaussianRational| {
        let mut v = vec![ComplexPoint::exact(first.clone())];
        v.extend(shared.iter().cloned());
        v
    };
    let at_fixed = fiber_descriptor(a, &with(&s))?;
    let at_free = fiber_descriptor(a, &with(&s_free))?;
    let verdict = if at_fixed.b1 != at_free.b1 {
        Verdict::NotQuasifibration
    } else {
        Verdict::Inconclusive
    };
    let narrative = format!(
        "s = {s:?} has isotropy of order {iso} and s' = {s_free:?} is free; the fibers over \
         (s, x_2, ..., x_{n1}) and (s', x_2, ..., x_{n1}) remove {p} and {q} points, so b1 = {b} vs {c}{tail}",
        iso = fixed.isotropy,
        n1 = n - 1,
        p = at_fixed.punctures,
        q = at_free.punctures,
        b = at_fixed.b1,
        c = at_free.b1,
        tail = match verdict {
            Verdict::NotQuasifibration => " and the projection is not a quasifibration",
            Verdict::Inconclusive => " and homology gives no obstruction",
        },
    );
    Ok(QuasifibrationWitness {
        action: a.clone(),
        n,
        fixed_point: s,
        free_point: s_free,
        at_fixed,
        at_free,
        verdict,
        narrative,
    })
}

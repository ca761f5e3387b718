//! Two-dimensional orbifolds with cone points, their classification, and the
//! planar group actions whose quotients appear in the main examples.
//!
//! Only cone-point singularities are representable. Reflector lines and
//! corner reflectors are rejected when parsing; an orbifold with reflectors
//! is double covered by one with only cone points, so that is the form to
//! feed in.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{ComplexPoint, GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbifoldError {
    #[error("cone order {0} is invalid; cone points have order at least 2")]
    InvalidCone(u32),
    #[error("non-orientable underlying surfaces need at least one crosscap (genus >= 1)")]
    InvalidGenus,
    #[error(
        "reflector lines and corner reflectors are not supported; pass the double of the \
         underlying space along the orbifold boundary, which has only cone points"
    )]
    Reflector,
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
    #[error("point {0} is outside the domain of the action")]
    Domain(String),
}

/// Underlying-surface data and cone points of a 2-orbifold.
///
/// For non-orientable surfaces `genus` counts crosscaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbifold2D {
    pub genus: u32,
    pub orientable: bool,
    pub punctures: u32,
    #[serde(rename = "boundary")]
    pub boundary_circles: u32,
    #[serde(rename = "cones")]
    cone_orders: Vec<u32>,
}

impl Orbifold2D {
    pub fn new(
        genus: u32,
        orientable: bool,
        punctures: u32,
        boundary_circles: u32,
        mut cone_orders: Vec<u32>,
    ) -> Result<Self, OrbifoldError> {
        if let Some(&bad) = cone_orders.iter().find(|&&m| m < 2) {
            return Err(OrbifoldError::InvalidCone(bad));
        }
        if !orientable && genus == 0 {
            return Err(OrbifoldError::InvalidGenus);
        }
        cone_orders.sort_unstable();
        Ok(Orbifold2D {
            genus,
            orientable,
            punctures,
            boundary_circles,
            cone_orders,
        })
    }

    pub fn sphere(cones: Vec<u32>) -> Result<Self, OrbifoldError> {
        Self::new(0, true, 0, 0, cones)
    }

    /// ℂ, i.e. the sphere with one puncture.
    pub fn plane(cones: Vec<u32>) -> Result<Self, OrbifoldError> {
        Self::new(0, true, 1, 0, cones)
    }

    pub fn cone_orders(&self) -> &[u32] {
        &self.cone_orders
    }

    pub fn is_closed(&self) -> bool {
        self.punctures == 0 && self.boundary_circles == 0
    }

    /// Euler characteristic of the underlying surface with its punctures and
    /// boundary circles.
    pub fn underlying_euler(&self) -> i64 {
        let base = if self.orientable {
            2 - 2 * self.genus as i64
        } else {
            2 - self.genus as i64
        };
        base - self.punctures as i64 - self.boundary_circles as i64
    }

    pub fn with_extra_puncture(&self) -> Self {
        let mut o = self.clone();
        o.punctures += 1;
        o
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbifoldRepr {
    #[serde(default)]
    schema: Option<u32>,
    #[serde(default)]
    genus: u32,
    #[serde(default = "default_true")]
    orientable: bool,
    #[serde(default)]
    punctures: u32,
    #[serde(default)]
    boundary: u32,
    #[serde(default)]
    cones: Vec<u32>,
    #[serde(default)]
    reflectors: Option<serde_json::Value>,
    #[serde(default)]
    corner_reflectors: Option<serde_json::Value>,
}

fn default_true() -> bool {
    true
}

fn is_present(v: &Option<serde_json::Value>) -> bool {
    match v {
        None | Some(serde_json::Value::Null) | Some(serde_json::Value::Bool(false)) => false,
        Some(serde_json::Value::Number(n)) => n.as_f64() != Some(0.0),
        Some(serde_json::Value::Array(a)) => !a.is_empty(),
        Some(_) => true,
    }
}

/// Errors from [`parse_orbifold`]: malformed JSON versus a well-formed spec
/// the model refuses.
#[derive(Debug, Error)]
pub enum OrbifoldParseError {
    #[error("malformed orbifold spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] OrbifoldError),
}

/// Parses `{"genus":g, "orientable":b, "punctures":p, "boundary":b, "cones":[..]}`.
/// Any nonzero `reflectors` / `corner_reflectors` entry is refused.
pub fn parse_orbifold(json: &str) -> Result<Orbifold2D, OrbifoldParseError> {
    let repr: OrbifoldRepr = serde_json::from_str(json)?;
    let _ = repr.schema;
    if is_present(&repr.reflectors) || is_present(&repr.corner_reflectors) {
        return Err(OrbifoldError::Reflector.into());
    }
    Ok(Orbifold2D::new(
        repr.genus,
        repr.orientable,
        repr.punctures,
        repr.boundary,
        repr.cones,
    )?)
}

/// Orbifold Euler characteristic `χ(surface) − Σ (1 − 1/m_i)`.
pub fn euler_characteristic_orb(o: &Orbifold2D) -> Rational {
    let mut chi = Rational::from(o.underlying_euler());
    for &m in &o.cone_orders {
        chi -= &(Rational::one() - Rational::frac(1, m as i64));
    }
    chi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_bad: bool,
    pub is_good: bool,
    pub pi1_infinite: TriState,
    pub is_aspherical: TriState,
    pub euler_orb: Rational,
    /// Which rule of the decision table fired.
    pub rule: &'static str,
}

/// Decision table for good/bad, finiteness of π₁^orb and asphericity.
///
/// Bad orbifolds are exactly the closed orientable spheres with one cone
/// point or two cone points of different orders. A good orbifold is
/// aspherical unless it is closed with χ^orb > 0 (a spherical quotient).
/// π₁^orb is infinite iff χ^orb ≤ 0; every non-closed case with χ^orb > 0
/// is the plane with at most one cone point, whose group is finite cyclic.
pub fn classify(o: &Orbifold2D) -> Classification {
    let chi = euler_characteristic_orb(o);
    let sphere = o.orientable && o.genus == 0 && o.is_closed();
    let cones = &o.cone_orders;
    let is_bad = sphere && (cones.len() == 1 || (cones.len() == 2 && cones[0] != cones[1]));
    let nonpositive = !chi.is_positive();

    let (pi1_infinite, is_aspherical, rule) = if is_bad {
        (TriState::No, TriState::No, "bad: teardrop or spindle with unequal orders")
    } else if nonpositive {
        (TriState::Yes, TriState::Yes, "good, χ^orb ≤ 0: infinite π₁^orb, contractible universal cover")
    } else if o.is_closed() {
        (TriState::No, TriState::No, "good, closed, χ^orb > 0: spherical quotient")
    } else {
        (TriState::No, TriState::Yes, "good, open, χ^orb > 0: plane with at most one cone point")
    };

    Classification {
        is_bad,
        is_good: !is_bad,
        pi1_infinite,
        is_aspherical,
        euler_orb: chi,
        rule,
    }
}

/// A point with nontrivial isotropy, in the coordinates of the covering plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialPoint {
    pub point: GaussianRational,
    pub isotropy: u32,
}

/// The supported actions on planar domains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanarAction {
    /// ℤ/m rotating ℂ about `center`.
    CyclicRotation {
        m: u32,
        #[serde(default)]
        center: GaussianRational,
    },
    /// The group generated by `z ↦ z + 1` and `z ↦ −z` on ℂ.
    IntegerDihedral,
    /// `z ↦ z + k`, `k ∈ ℤ`, on ℂ: a free action with quotient ℂ*.
    IntegerTranslation,
    /// `w ↦ −w` on ℂ ∖ {±1}; the punctures are the preimages of the
    /// puncture 1 of the quotient under squaring.
    SignFlipPunctured,
}

/// Orbit invariant: equal keys iff same orbit (exact points only).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKey {
    /// `(z − c)^m`.
    Power(GaussianRational),
    /// Canonical representative of `±z + ℤ`.
    Representative(GaussianRational),
}

impl PlanarAction {
    pub fn rotation(m: u32, center: GaussianRational) -> Result<Self, OrbifoldError> {
        let a = PlanarAction::CyclicRotation { m, center };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<(), OrbifoldError> {
        match self {
            PlanarAction::CyclicRotation { m, .. } if *m < 2 => Err(
                OrbifoldError::UnsupportedAction(format!("rotation of order {m} (need m >= 2)")),
            ),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            PlanarAction::CyclicRotation { m, center } => format!("rotation(m={m}, center={center:?})"),
            PlanarAction::IntegerDihedral => "integer-dihedral".to_string(),
            PlanarAction::IntegerTranslation => "integer-translation".to_string(),
            PlanarAction::SignFlipPunctured => "sign-flip-punctured".to_string(),
        }
    }

    /// Group order, `None` for infinite groups.
    pub fn group_order(&self) -> Option<u32> {
        match self {
            PlanarAction::CyclicRotation { m, .. } => Some(*m),
            PlanarAction::IntegerDihedral | PlanarAction::IntegerTranslation => None,
            PlanarAction::SignFlipPunctured => Some(2),
        }
    }

    /// Points removed from ℂ to form the domain.
    pub fn domain_punctures(&self) -> Vec<GaussianRational> {
        match self {
            PlanarAction::SignFlipPunctured => vec![
                GaussianRational::from_ints(1, 0),
                GaussianRational::from_ints(-1, 0),
            ],
            _ => Vec::new(),
        }
    }

    /// One representative per orbit of points with nontrivial isotropy.
    pub fn special_points(&self) -> Vec<SpecialPoint> {
        match self {
            PlanarAction::CyclicRotation { m, center } => vec![SpecialPoint {
                point: center.clone(),
                isotropy: *m,
            }],
            PlanarAction::IntegerDihedral => vec![
                SpecialPoint {
                    point: GaussianRational::zero(),
                    isotropy: 2,
                },
                SpecialPoint {
                    point: GaussianRational::real(Rational::frac(1, 2)),
                    isotropy: 2,
                },
            ],
            PlanarAction::SignFlipPunctured => vec![SpecialPoint {
                point: GaussianRational::zero(),
                isotropy: 2,
            }],
            PlanarAction::IntegerTranslation => Vec::new(),
        }
    }

    pub fn in_domain(&self, z: &ComplexPoint) -> bool {
        self.domain_punctures()
            .into_iter()
            .all(|p| !z.coincides(&ComplexPoint::exact(p)))
    }

    pub fn check_domain(&self, z: &ComplexPoint) -> Result<(), OrbifoldError> {
        if self.in_domain(z) {
            Ok(())
        } else {
            Err(OrbifoldError::Domain(format!("{z:?} for {}", self.name())))
        }
    }

    /// Canonical orbit invariant of an exact point.
    pub fn orbit_key(&self, z: &GaussianRational) -> Result<OrbitKey, OrbifoldError> {
        self.check_domain(&ComplexPoint::exact(z.clone()))?;
        Ok(match self {
            PlanarAction::CyclicRotation { m, center } => OrbitKey::Power((z - center).pow(*m)),
            PlanarAction::SignFlipPunctured => OrbitKey::Power(z.pow(2)),
            PlanarAction::IntegerDihedral => {
                let a = GaussianRational::new(z.re.fract_part(), z.im.clone());
                let b = GaussianRational::new((-&z.re).fract_part(), -&z.im);
                OrbitKey::Representative(a.min(b))
            }
            PlanarAction::IntegerTranslation => {
                OrbitKey::Representative(GaussianRational::new(z.re.fract_part(), z.im.clone()))
            }
        })
    }

    /// Image of a point under the `k`-th group element, for the finite
    /// actions (`k` taken modulo the group order).
    pub fn apply(&self, k: u32, z: &GaussianRational) -> Option<GaussianRational> {
        match self {
            PlanarAction::CyclicRotation { m, center } => {
                // rotation by a root of unity only stays in ℚ(i) for m | 4
                let step = match *m {
                    2 => GaussianRational::from_ints(-1, 0),
                    4 => GaussianRational::i(),
                    _ => return if k % m == 0 { Some(z.clone()) } else { None },
                };
                let rot = step.pow(k % m);
                Some(&(&rot * &(z - center)) + center)
            }
            PlanarAction::SignFlipPunctured => Some(if k % 2 == 0 { z.clone() } else { -z }),
            PlanarAction::IntegerDihedral | PlanarAction::IntegerTranslation => None,
        }
    }
}

/// Quotient orbifold with the positions of its cone points and punctures in
/// the standard quotient coordinate (`(z − c)^m`, `q(exp 2πiz)`, or `w²`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientData {
    pub orbifold: Orbifold2D,
    pub cone_points: Vec<SpecialPoint>,
    pub punctures: Vec<GaussianRational>,
}

pub fn quotient_data(a: &PlanarAction) -> Result<QuotientData, OrbifoldError> {
    a.validate()?;
    Ok(match a {
        PlanarAction::CyclicRotation { m, .. } => QuotientData {
            orbifold: Orbifold2D::plane(vec![*m])?,
            cone_points: vec![SpecialPoint {
                point: GaussianRational::zero(),
                isotropy: *m,
            }],
            punctures: Vec::new(),
        },
        PlanarAction::IntegerDihedral => QuotientData {
            orbifold: Orbifold2D::plane(vec![2, 2])?,
            cone_points: vec![
                SpecialPoint {
                    point: GaussianRational::zero(),
                    isotropy: 2,
                },
                SpecialPoint {
                    point: GaussianRational::real(Rational::frac(1, 2)),
                    isotropy: 2,
                },
            ],
            punctures: Vec::new(),
        },
        PlanarAction::IntegerTranslation => QuotientData {
            orbifold: Orbifold2D::new(0, true, 2, 0, Vec::new())?,
            cone_points: Vec::new(),
            punctures: Vec::new(),
        },
        PlanarAction::SignFlipPunctured => QuotientData {
            orbifold: Orbifold2D::new(0, true, 2, 0, vec![2])?,
            cone_points: vec![SpecialPoint {
                point: GaussianRational::zero(),
                isotropy: 2,
            }],
            punctures: vec![GaussianRational::from_ints(1, 0)],
        },
    })
}

pub fn quotient_orbifold(a: &PlanarAction) -> Result<Orbifold2D, OrbifoldError> {
    Ok(quotient_data(a)?.orbifold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn euler_characteristics() {
        let plane_m = Orbifold2D::plane(vec![7]).unwrap();
        assert_eq!(euler_characteristic_orb(&plane_m), Rational::frac(1, 7));
        assert_eq!(
            euler_characteristic_orb(&Orbifold2D::sphere(vec![]).unwrap()),
            Rational::from(2)
        );
        let case2 = Orbifold2D::plane(vec![2, 2]).unwrap();
        assert_eq!(euler_characteristic_orb(&case2), Rational::zero());
        let case3 = Orbifold2D::new(0, true, 2, 0, vec![2]).unwrap();
        assert_eq!(euler_characteristic_orb(&case3), Rational::frac(-1, 2));
        let rp2 = Orbifold2D::new(1, false, 0, 0, vec![3]).unwrap();
        assert_eq!(euler_characteristic_orb(&rp2), Rational::frac(1, 3));
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(Orbifold2D::sphere(vec![1]), Err(OrbifoldError::InvalidCone(1)));
        assert_eq!(
            Orbifold2D::new(0, false, 0, 0, vec![]),
            Err(OrbifoldError::InvalidGenus)
        );
        assert!(PlanarAction::rotation(1, GaussianRational::zero()).is_err());
    }

    #[test]
    fn teardrop_is_bad() {
        let c = classify(&Orbifold2D::sphere(vec![5]).unwrap());
        assert!(c.is_bad && !c.is_good);
        assert_eq!(c.is_aspherical, TriState::No);
        assert!(classify(&Orbifold2D::sphere(vec![2, 3]).unwrap()).is_bad);
        assert!(!classify(&Orbifold2D::sphere(vec![3, 3]).unwrap()).is_bad);
        // the open disk analogue is good
        assert!(classify(&Orbifold2D::plane(vec![5]).unwrap()).is_good);
    }

    #[test]
    fn plane_with_one_cone_is_aspherical() {
        for m in 2..10 {
            let c = classify(&Orbifold2D::plane(vec![m]).unwrap());
            assert!(c.is_good);
            assert_eq!(c.is_aspherical, TriState::Yes);
            assert_eq!(c.pi1_infinite, TriState::No);
        }
    }

    #[test]
    fn torus_and_sphere() {
        let t = classify(&Orbifold2D::new(1, true, 0, 0, vec![]).unwrap());
        assert_eq!(t.pi1_infinite, TriState::Yes);
        assert_eq!(t.is_aspherical, TriState::Yes);
        let s = classify(&Orbifold2D::sphere(vec![]).unwrap());
        assert!(s.is_good);
        assert_eq!(s.is_aspherical, TriState::No);
        // (2,3,5) is spherical, (2,3,7) hyperbolic
        let icosa = classify(&Orbifold2D::sphere(vec![2, 3, 5]).unwrap());
        assert_eq!(icosa.pi1_infinite, TriState::No);
        let hyp = classify(&Orbifold2D::sphere(vec![2, 3, 7]).unwrap());
        assert_eq!(hyp.is_aspherical, TriState::Yes);
    }

    #[test]
    fn reflectors_rejected_when_parsing() {
        let err = parse_orbifold(r#"{"genus":0,"reflectors":1}"#).unwrap_err();
        assert!(matches!(err, OrbifoldParseError::Invalid(OrbifoldError::Reflector)));
        let ok = parse_orbifold(r#"{"schema":1,"genus":0,"punctures":1,"cones":[3],"reflectors":0}"#)
            .unwrap();
        assert_eq!(ok, Orbifold2D::plane(vec![3]).unwrap());
        assert!(matches!(
            parse_orbifold("{not json").unwrap_err(),
            OrbifoldParseError::Json(_)
        ));
    }

    #[test]
    fn quotients_of_the_actions() {
        let rot = PlanarAction::rotation(3, GaussianRational::zero()).unwrap();
        assert_eq!(quotient_orbifold(&rot).unwrap(), Orbifold2D::plane(vec![3]).unwrap());
        assert_eq!(
            quotient_orbifold(&PlanarAction::IntegerDihedral).unwrap(),
            Orbifold2D::plane(vec![2, 2]).unwrap()
        );
        let cylinder = quotient_orbifold(&PlanarAction::IntegerTranslation).unwrap();
        assert_eq!(cylinder, Orbifold2D::new(0, true, 2, 0, vec![]).unwrap());
        let q3 = quotient_data(&PlanarAction::SignFlipPunctured).unwrap();
        assert_eq!(q3.orbifold, Orbifold2D::new(0, true, 2, 0, vec![2]).unwrap());
        assert_eq!(q3.punctures, vec![GaussianRational::from_ints(1, 0)]);
        let dihedral = quotient_data(&PlanarAction::IntegerDihedral).unwrap();
        let positions: Vec<_> = dihedral.cone_points.iter().map(|c| c.point.clone()).collect();
        assert_eq!(
            positions,
            vec![GaussianRational::zero(), GaussianRational::real(Rational::frac(1, 2))]
        );
    }

    #[test]
    fn cone_orders_match_isotropy() {
        let actions = [
            PlanarAction::rotation(5, GaussianRational::from_ints(1, 1)).unwrap(),
            PlanarAction::IntegerDihedral,
            PlanarAction::IntegerTranslation,
            PlanarAction::SignFlipPunctured,
        ];
        for a in &actions {
            let mut iso: Vec<u32> = a.special_points().iter().map(|s| s.isotropy).collect();
            iso.sort_unstable();
            assert_eq!(quotient_orbifold(a).unwrap().cone_orders(), iso.as_slice());
            if let Some(order) = a.group_order() {
                assert!(iso.iter().all(|i| order % i == 0));
            }
        }
    }

    #[test]
    fn action_json() {
        let a: PlanarAction =
            serde_json::from_str(r#"{"kind":"cyclic_rotation","m":4}"#).unwrap();
        assert_eq!(a, PlanarAction::rotation(4, GaussianRational::zero()).unwrap());
        let b: PlanarAction = serde_json::from_str(r#"{"kind":"sign_flip_punctured"}"#).unwrap();
        assert_eq!(b, PlanarAction::SignFlipPunctured);
    }

    fn orbifold() -> impl Strategy<Value = Orbifold2D> {
        (
            0u32..4,
            any::<bool>(),
            0u32..4,
            0u32..3,
            proptest::collection::vec(2u32..9, 0..5),
        )
            .prop_filter_map("valid", |(g, o, p, b, c)| Orbifold2D::new(g, o, p, b, c).ok())
    }

    proptest! {
        #[test]
        fn classification_is_consistent(o in orbifold()) {
            let c = classify(&o);
            prop_assert_eq!(c.is_bad, !c.is_good);
            if c.pi1_infinite == TriState::Yes {
                prop_assert!(c.is_good);
            }
            if c.is_aspherical == TriState::Yes {
                prop_assert!(c.is_good);
            }
            prop_assert_eq!(classify(&o), c);
        }

        #[test]
        fn puncture_lowers_chi_by_one(o in orbifold()) {
            let before = euler_characteristic_orb(&o);
            let after = euler_characteristic_orb(&o.with_extra_puncture());
            prop_assert_eq!(before - after, Rational::one());
        }
    }
}

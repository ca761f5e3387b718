//! Orbit configuration spaces `PB_n(M̃, H)` of the planar actions, and the
//! hyperplane arrangements whose complements realise them.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactfield::{ComplexPoint, Cyclotomic, Field, FieldError, GaussianRational, Rational};
use crate::orbmodel::{OrbifoldError, PlanarAction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("arrangement needs n >= {min}, got {n}")]
    Arity { n: usize, min: usize },
    #[error("no valid configuration after {0} attempts")]
    SamplingExhausted(usize),
    #[error("sampling box is empty or the grid pitch is not positive")]
    InvalidBox,
    #[error("point is not in the required configuration space: {0}")]
    Membership(String),
    #[error("hyperplane {0} has a zero normal vector")]
    ZeroNormal(usize),
    #[error("hyperplane {0} duplicates an earlier one")]
    DuplicateHyperplane(usize),
    #[error("hyperplane {index} has {got} coordinates, expected {dim}")]
    DimensionMismatch { index: usize, got: usize, dim: usize },
    #[error("coefficient of order {got} does not fit the field of order {field}")]
    FieldMismatch { got: u32, field: u32 },
}

/// Tuple of points together with the action it is meant for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigPoint {
    pub points: Vec<ComplexPoint>,
    pub action: PlanarAction,
    /// Set once `is_orbit_config` has accepted the tuple.
    pub checked: bool,
}

impl ConfigPoint {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn validated(action: &PlanarAction, points: Vec<ComplexPoint>) -> Result<Self, ConfigError> {
        if !is_orbit_config(action, &points)? {
            return Err(ConfigError::Membership(format!(
                "{points:?} has two coordinates in one orbit of {}",
                action.name()
            )));
        }
        Ok(ConfigPoint {
            points,
            action: action.clone(),
            checked: true,
        })
    }
}

fn nearest_integer_distance(z: Complex64) -> f64 {
    (z - Complex64::new(z.re.round(), 0.0)).norm()
}

/// Whether `z` and `w` lie in one orbit of the action.
pub fn same_orbit(a: &PlanarAction, z: &ComplexPoint, w: &ComplexPoint) -> Result<bool, ConfigError> {
    a.validate()?;
    a.check_domain(z)?;
    a.check_domain(w)?;
    if let (Some(ze), Some(we)) = (z.as_exact(), w.as_exact()) {
        return Ok(match a {
            PlanarAction::CyclicRotation { m, center } => {
                (&ze - center).pow(*m) == (&we - center).pow(*m)
            }
            PlanarAction::IntegerDihedral => (&ze - &we).is_integer() || (&ze + &we).is_integer(),
            PlanarAction::IntegerTranslation => (&ze - &we).is_integer(),
            PlanarAction::SignFlipPunctured => ze == we || ze == -&we,
        });
    }
    let eps = z.joint_epsilon(w).expect("one side approximate");
    let (zc, wc) = (z.to_complex64(), w.to_complex64());
    Ok(match a {
        PlanarAction::CyclicRotation { m, center } => {
            let c = center.to_complex64();
            (0..*m).any(|k| {
                let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / *m as f64);
                ((zc - c) - rot * (wc - c)).norm() <= eps
            })
        }
        PlanarAction::IntegerDihedral => {
            nearest_integer_distance(zc - wc) <= eps || nearest_integer_distance(zc + wc) <= eps
        }
        PlanarAction::IntegerTranslation => nearest_integer_distance(zc - wc) <= eps,
        PlanarAction::SignFlipPunctured => (zc - wc).norm() <= eps || (zc + wc).norm() <= eps,
    })
}

/// Membership in `PB_n(M̃, H)`: coordinates in pairwise distinct orbits.
pub fn is_orbit_config(a: &PlanarAction, pts: &[ComplexPoint]) -> Result<bool, ConfigError> {
    for p in pts {
        a.check_domain(p)?;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if same_orbit(a, &pts[i], &pts[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rectangle and grid for [`sample_orbit_config`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub re_min: Rational,
    pub re_max: Rational,
    pub im_min: Rational,
    pub im_max: Rational,
    pub pitch: Rational,
    pub max_attempts: usize,
}

impl SampleBox {
    /// Square `[-r, r]²` with the given grid pitch.
    pub fn square(radius: Rational, pitch: Rational) -> Self {
        SampleBox {
            re_min: -&radius,
            re_max: radius.clone(),
            im_min: -&radius,
            im_max: radius,
            pitch,
            max_attempts: 10_000,
        }
    }

    fn steps(&self, lo: &Rational, hi: &Rational) -> Result<u64, ConfigError> {
        if !self.pitch.is_positive() || hi < lo {
            return Err(ConfigError::InvalidBox);
        }
        let n = ((hi - lo) / &self.pitch).floor();
        num_traits::ToPrimitive::to_u64(n.numer()).ok_or(ConfigError::InvalidBox)
    }

    pub fn draw(&self, rng: &mut impl Rng) -> Result<GaussianRational, ConfigError> {
        let nr = self.steps(&self.re_min, &self.re_max)?;
        let ni = self.steps(&self.im_min, &self.im_max)?;
        let kr = rng.gen_range(0..=nr);
        let ki = rng.gen_range(0..=ni);
        Ok(GaussianRational::new(
            &self.re_min + &(&self.pitch * &Rational::from(kr as i64)),
            &self.im_min + &(&self.pitch * &Rational::from(ki as i64)),
        ))
    }
}

/// Rejection sampler on the rational grid; deterministic in `seed`.
pub fn sample_orbit_config(
    a: &PlanarAction,
    n: usize,
    seed: u64,
    bx: &SampleBox,
) -> Result<ConfigPoint, ConfigError> {
    if n == 0 {
        return Err(ConfigError::Arity { n, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<ComplexPoint> = Vec::with_capacity(n);
    let mut attempts = 0;
    while points.len() < n {
        if attempts >= bx.max_attempts {
            return Err(ConfigError::SamplingExhausted(attempts));
        }
        attempts += 1;
        let z = ComplexPoint::exact(bx.draw(&mut rng)?);
        if !a.in_domain(&z) {
            continue;
        }
        let mut fresh = true;
        for p in &points {
            if same_orbit(a, p, &z)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            points.push(z);
        }
    }
    ConfigPoint::validated(a, points)
}

/// Coefficient field of an arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum FieldTag {
    Q,
    #[serde(rename = "cyclotomic")]
    Cyclotomic { m: u32 },
}

impl FieldTag {
    /// Order of the cyclotomic field the coefficients are stored in (1 for ℚ).
    pub fn order(&self) -> u32 {
        match self {
            FieldTag::Q => 1,
            FieldTag::Cyclotomic { m } => *m,
        }
    }

    fn for_order(m: u32) -> Self {
        if m <= 2 {
            FieldTag::Q
        } else {
            FieldTag::Cyclotomic { m }
        }
    }
}

/// The affine hyperplane `normal · x = offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<Cyclotomic>,
    pub offset: Cyclotomic,
}

impl Hyperplane {
    /// Scales so the first nonzero normal coordinate is 1.
    fn normalized(&self) -> Option<Hyperplane> {
        let lead = self.normal.iter().find(|c| !Field::is_zero(*c))?;
        let inv = Field::inverse(lead).ok()?;
        Some(Hyperplane {
            normal: self.normal.iter().map(|c| c.times(&inv)).collect(),
            offset: self.offset.times(&inv),
        })
    }

    pub fn evaluate(&self, x: &[Cyclotomic]) -> Cyclotomic {
        let zero = self.offset.zero_like();
        crate::linalg::dot(&self.normal, x, &zero).minus(&self.offset)
    }

    pub fn as_rational(&self) -> Option<(Vec<Rational>, Rational)> {
        let normal = self
            .normal
            .iter()
            .map(Cyclotomic::as_rational)
            .collect::<Option<Vec<_>>>()?;
        Some((normal, self.offset.as_rational()?))
    }
}

/// A finite affine arrangement with normalized, distinct hyperplanes kept in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementSpec {
    pub dim: usize,
    pub field: FieldTag,
    hyperplanes: Vec<Hyperplane>,
    pub label: String,
}

impl ArrangementSpec {
    pub fn new(
        dim: usize,
        field: FieldTag,
        hyperplanes: Vec<Hyperplane>,
        label: impl Into<String>,
    ) -> Result<Self, ConfigError> {
        let order = field.order();
        let mut normalized = Vec::with_capacity(hyperplanes.len());
        for (index, h) in hyperplanes.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(ConfigError::DimensionMismatch {
                    index,
                    got: h.normal.len(),
                    dim,
                });
            }
            for c in h.normal.iter().chain(std::iter::once(&h.offset)) {
                if c.order() != order {
                    return Err(ConfigError::FieldMismatch {
                        got: c.order(),
                        field: order,
                    });
                }
            }
            let n = h.normalized().ok_or(ConfigError::ZeroNormal(index))?;
            if normalized.contains(&n) {
                return Err(ConfigError::DuplicateHyperplane(index));
            }
            normalized.push(n);
        }
        normalized.sort();
        Ok(ArrangementSpec {
            dim,
            field,
            hyperplanes: normalized,
            label: label.into(),
        })
    }

    /// Like [`ArrangementSpec::new`] but silently drops repeated hyperplanes.
    pub fn new_dedup(
        dim: usize,
        field: FieldTag,
        hyperplanes: Vec<Hyperplane>,
        label: impl Into<String>,
    ) -> Result<Self, ConfigError> {
        let mut seen: Vec<Hyperplane> = Vec::new();
        for h in hyperplanes {
            match h.normalized() {
                Some(n) if seen.iter().any(|s| s.normalized().as_ref() == Some(&n)) => {}
                _ => seen.push(h),
            }
        }
        Self::new(dim, field, seen, label)
    }

    /// Rational arrangement from `(normal, offset)` pairs.
    pub fn from_rational(
        dim: usize,
        hyperplanes: Vec<(Vec<Rational>, Rational)>,
        label: impl Into<String>,
    ) -> Result<Self, ConfigError> {
        let hs = hyperplanes
            .into_iter()
            .map(|(n, b)| Hyperplane {
                normal: n.into_iter().map(|c| Cyclotomic::from_rational(1, c)).collect(),
                offset: Cyclotomic::from_rational(1, b),
            })
            .collect();
        Self::new(dim, FieldTag::Q, hs, label)
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn zero(&self) -> Cyclotomic {
        Cyclotomic::zero(self.field.order())
    }

    /// All coefficients rational, as `(normal, offset)` pairs.
    pub fn as_rational(&self) -> Option<Vec<(Vec<Rational>, Rational)>> {
        self.hyperplanes.iter().map(Hyperplane::as_rational).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// The same arrangement without hyperplane `index`.
    pub fn deletion(&self, index: usize) -> ArrangementSpec {
        let mut hs = self.hyperplanes.clone();
        hs.remove(index);
        ArrangementSpec {
            dim: self.dim,
            field: self.field,
            hyperplanes: hs,
            label: format!("{} \\ H{index}", self.label),
        }
    }

    /// True when `x` lies on some hyperplane. Coordinates must live in the
    /// arrangement's field.
    pub fn on_some_hyperplane(&self, x: &[Cyclotomic]) -> bool {
        self.hyperplanes
            .iter()
            .any(|h| Field::is_zero(&h.evaluate(x)))
    }

    /// Complement membership for a point with Gaussian-rational coordinates;
    /// everything is moved into ℚ(ζ_L) with L = lcm(4, m).
    pub fn complement_contains(&self, x: &[GaussianRational]) -> Result<bool, ConfigError> {
        if x.len() != self.dim {
            return Err(ConfigError::DimensionMismatch {
                index: 0,
                got: x.len(),
                dim: self.dim,
            });
        }
        let m = self.field.order();
        let l = m.lcm(&4);
        let point: Vec<Cyclotomic> = x
            .iter()
            .map(|z| z.to_cyclotomic(l))
            .collect::<Result<_, _>>()?;
        for h in &self.hyperplanes {
            let normal: Vec<Cyclotomic> = h
                .normal
                .iter()
                .map(|c| c.embed(l))
                .collect::<Result<_, _>>()?;
            let lifted = Hyperplane {
                normal,
                offset: h.offset.embed(l)?,
            };
            if Field::is_zero(&lifted.evaluate(&point)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Rat(Rational),
    Cyc(Cyclotomic),
}

#[derive(Serialize, Deserialize)]
struct HyperplaneRepr {
    normal: Vec<CoeffRepr>,
    offset: CoeffRepr,
}

#[derive(Serialize, Deserialize)]
struct ArrangementRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<u32>,
    dim: usize,
    field: FieldTag,
    hyperplanes: Vec<HyperplaneRepr>,
    #[serde(default = "custom_label")]
    label: String,
}

fn custom_label() -> String {
    "custom".to_string()
}

impl Serialize for ArrangementSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeff = |c: &Cyclotomic| match (self.field, c.as_rational()) {
            (FieldTag::Q, Some(r)) => CoeffRepr::Rat(r),
            _ => CoeffRepr::Cyc(c.clone()),
        };
        ArrangementRepr {
            schema: None,
            dim: self.dim,
            field: self.field,
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| HyperplaneRepr {
                    normal: h.normal.iter().map(coeff).collect(),
                    offset: coeff(&h.offset),
                })
                .collect(),
            label: self.label.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ArrangementSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ArrangementRepr::deserialize(deserializer)?;
        let order = repr.field.order();
        let lift = |c: CoeffRepr| -> Result<Cyclotomic, ConfigError> {
            match c {
                CoeffRepr::Rat(r) => Ok(Cyclotomic::from_rational(order, r)),
                CoeffRepr::Cyc(c) if order % c.order() == 0 => Ok(c.embed(order)?),
                CoeffRepr::Cyc(c) => match c.as_rational() {
                    Some(r) => Ok(Cyclotomic::from_rational(order, r)),
                    None => Err(ConfigError::FieldMismatch {
                        got: c.order(),
                        field: order,
                    }),
                },
            }
        };
        let hyperplanes = repr
            .hyperplanes
            .into_iter()
            .map(|h| {
                Ok(Hyperplane {
                    normal: h.normal.into_iter().map(lift).collect::<Result<_, ConfigError>>()?,
                    offset: lift(h.offset)?,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()
            .map_err(serde::de::Error::custom)?;
        ArrangementSpec::new(repr.dim, repr.field, hyperplanes, repr.label)
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ArrangementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} hyperplanes in dimension {})",
            self.label,
            self.hyperplanes.len(),
            self.dim
        )
    }
}

fn unit_vector(dim: usize, order: u32, entries: &[(usize, Cyclotomic)]) -> Vec<Cyclotomic> {
    let mut v = vec![Cyclotomic::zero(order); dim];
    for (i, c) in entries {
        v[*i] = c.clone();
    }
    v
}

/// Braid arrangement `x_i = x_j` in dimension n.
pub fn braid_arrangement(n: usize) -> Result<ArrangementSpec, ConfigError> {
    let mut hs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            hs.push(Hyperplane {
                normal: unit_vector(
                    n,
                    1,
                    &[(i, Cyclotomic::one(1)), (j, Cyclotomic::one(1).neg())],
                ),
                offset: Cyclotomic::zero(1),
            });
        }
    }
    ArrangementSpec::new(n, FieldTag::Q, hs, format!("braid(n={n})"))
}

/// `z_i = ζ_m^k z_j` for all i < j and 0 ≤ k < m, whose complement is
/// `{z : z_i^m ≠ z_j^m}`. Rational for m ≤ 2.
pub fn case1_arrangement(n: usize, m: u32) -> Result<ArrangementSpec, ConfigError> {
    if n < 2 {
        return Err(ConfigError::Arity { n, min: 2 });
    }
    if m == 0 {
        return Err(FieldError::InvalidOrder(0).into());
    }
    let field = FieldTag::for_order(m);
    let order = field.order();
    let mut hs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..m {
                let zeta_k = Cyclotomic::zeta_pow(m, k as i64);
                let coeff = if order == 1 {
                    Cyclotomic::from_rational(1, zeta_k.as_rational().expect("m <= 2 is rational"))
                } else {
                    zeta_k
                };
                hs.push(Hyperplane {
                    normal: unit_vector(n, order, &[(i, Cyclotomic::one(order)), (j, coeff.neg())]),
                    offset: Cyclotomic::zero(order),
                });
            }
        }
    }
    ArrangementSpec::new(n, field, hs, format!("case1(n={n},m={m})"))
}

/// `x_i = ±x_j` (i < j) and `x_1 = 0` in dimension n + 1.
pub fn case3_x_arrangement(n: usize) -> Result<ArrangementSpec, ConfigError> {
    let d = n + 1;
    let one = Cyclotomic::one(1);
    let mut hs = vec![Hyperplane {
        normal: unit_vector(d, 1, &[(0, one.clone())]),
        offset: Cyclotomic::zero(1),
    }];
    for i in 0..d {
        for j in i + 1..d {
            for sign in [one.neg(), one.clone()] {
                hs.push(Hyperplane {
                    normal: unit_vector(d, 1, &[(i, one.clone()), (j, sign)]),
                    offset: Cyclotomic::zero(1),
                });
            }
        }
    }
    ArrangementSpec::new(d, FieldTag::Q, hs, format!("case3X(n={n})"))
}

/// Finite window `z_i ± z_j = k`, `|k| ≤ window`, of the infinite affine
/// arrangement whose complement is `{z : z_i ± z_j ∉ ℤ}`.
pub fn case2_truncated_arrangement(n: usize, window: i64) -> Result<ArrangementSpec, ConfigError> {
    if n < 2 {
        return Err(ConfigError::Arity { n, min: 2 });
    }
    let one = Cyclotomic::one(1);
    let mut hs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for sign in [one.neg(), one.clone()] {
                for k in -window..=window {
                    hs.push(Hyperplane {
                        normal: unit_vector(n, 1, &[(i, one.clone()), (j, sign.clone())]),
                        offset: Cyclotomic::from_rational(1, Rational::from(k)),
                    });
                }
            }
        }
    }
    ArrangementSpec::new(n, FieldTag::Q, hs, format!("case2(n={n},window={window})"))
}

/// Membership in `X = {x ∈ ℂ^{n+1} : x_i ≠ ±x_j, x_1 ≠ 0}`.
pub fn in_case3_x(x: &[ComplexPoint]) -> bool {
    let Some(first) = x.first() else {
        return true;
    };
    if first.coincides(&ComplexPoint::exact_int(0, 0)) {
        return false;
    }
    // x_i ≠ ±x_j is orbit-distinctness for w ↦ −w, ignoring the ±1 punctures
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let neg = negate(&x[j]);
            if x[i].coincides(&x[j]) || x[i].coincides(&neg) {
                return false;
            }
        }
    }
    true
}

/// Membership in `W = {w : w_i ≠ ±w_j, w_k ≠ ±1}`.
pub fn in_case3_w(w: &[ComplexPoint]) -> Result<bool, ConfigError> {
    let a = PlanarAction::SignFlipPunctured;
    if !w.iter().all(|p| a.in_domain(p)) {
        return Ok(false);
    }
    is_orbit_config(&a, w)
}

fn negate(z: &ComplexPoint) -> ComplexPoint {
    match z {
        ComplexPoint::Exact { re, im } => ComplexPoint::Exact {
            re: -re,
            im: -im,
        },
        ComplexPoint::Approx { re, im, eps } => ComplexPoint::Approx {
            re: -re,
            im: -im,
            eps: *eps,
        },
    }
}

fn scale_point(lambda: &ComplexPoint, z: &ComplexPoint, divide: bool) -> Result<ComplexPoint, ConfigError> {
    match (lambda.as_exact(), z.as_exact()) {
        (Some(l), Some(w)) => Ok(ComplexPoint::exact(if divide {
            w.checked_div(&l)?
        } else {
            &l * &w
        })),
        _ => {
            let eps = lambda.joint_epsilon(z).expect("one side approximate");
            let (l, w) = (lambda.to_complex64(), z.to_complex64());
            Ok(ComplexPoint::approx(if divide { w / l } else { l * w }, eps)?)
        }
    }
}

fn check_nonzero(lambda: &ComplexPoint) -> Result<(), ConfigError> {
    if lambda.coincides(&ComplexPoint::exact_int(0, 0)) {
        Err(OrbifoldError::Domain(format!("λ = {lambda:?} must be nonzero")).into())
    } else {
        Ok(())
    }
}

/// `(λ, w_1, …, w_n) ↦ (λ, λw_1, …, λw_n)` from `ℂ* × W` onto `X`.
pub fn cw_homeomorphism(lambda: &ComplexPoint, w: &[ComplexPoint]) -> Result<Vec<ComplexPoint>, ConfigError> {
    check_nonzero(lambda)?;
    if !in_case3_w(w)? {
        return Err(ConfigError::Membership(format!("{w:?} is not in W")));
    }
    let mut out = vec![lambda.clone()];
    for z in w {
        out.push(scale_point(lambda, z, false)?);
    }
    debug_assert!(in_case3_x(&out));
    Ok(out)
}

/// Inverse of [`cw_homeomorphism`]: `x ↦ (x_1, x_2/x_1, …, x_{n+1}/x_1)`.
pub fn cw_homeomorphism_inverse(x: &[ComplexPoint]) -> Result<(ComplexPoint, Vec<ComplexPoint>), ConfigError> {
    let lambda = x
        .first()
        .ok_or(ConfigError::Arity { n: 0, min: 1 })?
        .clone();
    check_nonzero(&lambda)?;
    if !in_case3_x(x) {
        return Err(ConfigError::Membership(format!("{x:?} is not in X")));
    }
    let w = x[1..]
        .iter()
        .map(|z| scale_point(&lambda, z, true))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((lambda, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rot(m: u32) -> PlanarAction {
        PlanarAction::rotation(m, GaussianRational::zero()).unwrap()
    }

    fn ex(re: i64, im: i64) -> ComplexPoint {
        ComplexPoint::exact_int(re, im)
    }

    fn exq(n: i64, d: i64) -> ComplexPoint {
        ComplexPoint::exact_real(Rational::frac(n, d))
    }

    #[test]
    fn rotation_orbits() {
        assert!(same_orbit(&rot(4), &ex(1, 0), &ex(0, 1)).unwrap());
        assert!(!same_orbit(&rot(2), &ex(1, 0), &ex(2, 0)).unwrap());
        assert!(same_orbit(&rot(2), &ex(3, 1), &ex(-3, -1)).unwrap());
    }

    #[test]
    fn dihedral_orbits() {
        // window oracle: -1/4 + 2 = 7/4
        let z = Rational::frac(1, 4);
        let w = Rational::frac(7, 4);
        let oracle = (-3..=3).any(|k| {
            let k = Rational::from(k);
            &z + &k == w || &(-&z) + &k == w
        });
        assert!(oracle);
        assert!(same_orbit(&PlanarAction::IntegerDihedral, &exq(1, 4), &exq(7, 4)).unwrap());
        assert!(!is_orbit_config(&PlanarAction::IntegerDihedral, &[exq(1, 4), exq(3, 4)]).unwrap());
        assert!(is_orbit_config(&PlanarAction::IntegerTranslation, &[exq(1, 4), exq(3, 4)]).unwrap());
        assert!(same_orbit(&PlanarAction::IntegerTranslation, &exq(1, 4), &exq(9, 4)).unwrap());
    }

    #[test]
    fn sign_flip_orbits_and_domain() {
        let a = PlanarAction::SignFlipPunctured;
        assert!(!is_orbit_config(&a, &[ex(2, 0), ex(-2, 0)]).unwrap());
        assert!(is_orbit_config(&a, &[ex(2, 0), ex(3, 0)]).unwrap());
        assert!(matches!(
            same_orbit(&a, &ex(1, 0), &ex(2, 0)),
            Err(ConfigError::Orbifold(OrbifoldError::Domain(_)))
        ));
        assert!(same_orbit(&a, &ex(0, 0), &ex(0, 0)).unwrap());
    }

    #[test]
    fn approximate_orbits() {
        let eps = 1e-9;
        let z = ComplexPoint::approx(Complex64::new(0.25, 0.1), eps).unwrap();
        let w = ComplexPoint::approx(Complex64::new(1.75, -0.1), eps).unwrap();
        assert!(same_orbit(&PlanarAction::IntegerDihedral, &z, &w).unwrap());
        let r = ComplexPoint::approx(Complex64::from_polar(2.0, 0.3), eps).unwrap();
        let s = ComplexPoint::approx(
            Complex64::from_polar(2.0, 0.3 + 2.0 * std::f64::consts::PI / 3.0),
            eps,
        )
        .unwrap();
        assert!(same_orbit(&rot(3), &r, &s).unwrap());
        assert!(!same_orbit(&rot(4), &r, &s).unwrap());
    }

    #[test]
    fn orbit_configs() {
        assert!(is_orbit_config(&rot(2), &[ex(1, 0), ex(2, 0), ex(3, 0)]).unwrap());
    }

    #[test]
    fn sampler_is_deterministic() {
        let bx = SampleBox::square(Rational::from(3), Rational::frac(1, 2));
        let a = sample_orbit_config(&rot(2), 3, 7, &bx).unwrap();
        let b = sample_orbit_config(&rot(2), 3, 7, &bx).unwrap();
        assert_eq!(a, b);
        assert!(a.checked);
        let single = sample_orbit_config(&PlanarAction::SignFlipPunctured, 1, 99, &bx).unwrap();
        assert_eq!(single.n(), 1);
        let pair = sample_orbit_config(&PlanarAction::IntegerDihedral, 2, 1, &bx).unwrap();
        assert!(is_orbit_config(&PlanarAction::IntegerDihedral, &pair.points).unwrap());
    }

    #[test]
    fn sampler_gives_up() {
        // a single grid point cannot host two orbits
        let mut bx = SampleBox::square(Rational::zero(), Rational::one());
        bx.max_attempts = 50;
        assert_eq!(
            sample_orbit_config(&rot(3), 2, 0, &bx),
            Err(ConfigError::SamplingExhausted(50))
        );
    }

    #[test]
    fn case1_examples() {
        let a = case1_arrangement(2, 2).unwrap();
        assert_eq!(a.field, FieldTag::Q);
        assert_eq!(a.len(), 2);
        assert_eq!(case1_arrangement(3, 1).unwrap().hyperplanes(), braid_arrangement(3).unwrap().hyperplanes());
        let c = case1_arrangement(3, 3).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(c.field, FieldTag::Cyclotomic { m: 3 });
        assert_eq!(case1_arrangement(1, 3), Err(ConfigError::Arity { n: 1, min: 2 }));
        for n in 2..=4 {
            for m in 1..=4u32 {
                assert_eq!(case1_arrangement(n, m).unwrap().len(), m as usize * n * (n - 1) / 2);
            }
        }
    }

    #[test]
    fn case3_examples() {
        let x1 = case3_x_arrangement(1).unwrap();
        assert_eq!((x1.dim, x1.len()), (2, 3));
        let x2 = case3_x_arrangement(2).unwrap();
        assert_eq!((x2.dim, x2.len()), (3, 7));
        let x0 = case3_x_arrangement(0).unwrap();
        assert_eq!((x0.dim, x0.len()), (1, 1));
    }

    #[test]
    fn hyperplanes_sorted_and_checked() {
        let q = Rational::from;
        let bad = ArrangementSpec::from_rational(
            2,
            vec![(vec![q(1), q(1)], q(0)), (vec![q(2), q(2)], q(0))],
            "dup",
        );
        assert_eq!(bad, Err(ConfigError::DuplicateHyperplane(1)));
        let zero = ArrangementSpec::from_rational(2, vec![(vec![q(0), q(0)], q(1))], "z");
        assert_eq!(zero, Err(ConfigError::ZeroNormal(0)));
        let a = case3_x_arrangement(2).unwrap();
        let mut sorted = a.hyperplanes().to_vec();
        sorted.sort();
        assert_eq!(sorted, a.hyperplanes());
    }

    #[test]
    fn arrangement_json() {
        let a = case1_arrangement(2, 3).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let back: ArrangementSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let text = r#"{"schema":1,"dim":2,"field":{"type":"Q"},
            "hyperplanes":[{"normal":["2","0"],"offset":"1"},{"normal":[0,1],"offset":0}]}"#;
        let b: ArrangementSpec = serde_json::from_str(text).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.label, "custom");
        assert_eq!(
            serde_json::to_value(&b).unwrap()["hyperplanes"][0]["normal"][0],
            "0/1"
        );
    }

    #[test]
    fn cw_examples() {
        let w = vec![ex(3, 0)];
        let x = cw_homeomorphism(&ex(2, 0), &w).unwrap();
        assert_eq!(x, vec![ex(2, 0), ex(6, 0)]);
        assert_eq!(cw_homeomorphism_inverse(&x).unwrap(), (ex(2, 0), w));
        let id = cw_homeomorphism(&ex(1, 0), &[ex(2, 0), ex(0, 3)]).unwrap();
        assert_eq!(id, vec![ex(1, 0), ex(2, 0), ex(0, 3)]);
        assert!(cw_homeomorphism(&ex(0, 0), &[ex(2, 0)]).is_err());
        assert!(matches!(
            cw_homeomorphism(&ex(1, 0), &[ex(2, 0), ex(-2, 0)]),
            Err(ConfigError::Membership(_))
        ));
    }

    fn gauss() -> impl Strategy<Value = GaussianRational> {
        (-12i64..12, 1i64..4, -12i64..12, 1i64..4)
            .prop_map(|(a, b, c, d)| GaussianRational::new(Rational::frac(a, b), Rational::frac(c, d)))
    }

    proptest! {
        #[test]
        fn cw_round_trips(l in gauss(), w in proptest::collection::vec(gauss(), 1..4)) {
            prop_assume!(!l.is_zero());
            let lambda = ComplexPoint::exact(l);
            let w: Vec<ComplexPoint> = w.into_iter().map(ComplexPoint::exact).collect();
            prop_assume!(in_case3_w(&w).unwrap_or(false));
            let x = cw_homeomorphism(&lambda, &w).unwrap();
            prop_assert!(in_case3_x(&x));
            let (l2, w2) = cw_homeomorphism_inverse(&x).unwrap();
            prop_assert_eq!(&l2, &lambda);
            prop_assert_eq!(&w2, &w);
            let again = cw_homeomorphism(&l2, &w2).unwrap();
            prop_assert_eq!(again, x);
        }

        #[test]
        fn dihedral_key_matches_predicate(z in gauss(), k in -3i64..3, flip in any::<bool>(), w in gauss()) {
            let a = PlanarAction::IntegerDihedral;
            let moved = {
                let base = if flip { -&z } else { z.clone() };
                &base + &GaussianRational::from_ints(k, 0)
            };
            prop_assert_eq!(a.orbit_key(&z).unwrap(), a.orbit_key(&moved).unwrap());
            let same = same_orbit(&a, &ComplexPoint::exact(z.clone()), &ComplexPoint::exact(w.clone())).unwrap();
            prop_assert_eq!(same, a.orbit_key(&z).unwrap() == a.orbit_key(&w).unwrap());
        }

        #[test]
        fn dihedral_predicate_matches_window_enumeration(a in -20i64..20, b in 1i64..6, c in -20i64..20, d in 1i64..6) {
            let z = Rational::frac(a, b);
            let w = Rational::frac(c, d);
            let k_max = (z.abs() + w.abs()).floor().to_f64() as i64 + 1;
            let oracle = (-k_max..=k_max).any(|k| {
                let k = Rational::from(k);
                &z + &k == w || &(-&z) + &k == w
            });
            let got = same_orbit(
                &PlanarAction::IntegerDihedral,
                &ComplexPoint::exact_real(z),
                &ComplexPoint::exact_real(w),
            ).unwrap();
            prop_assert_eq!(got, oracle);
        }
    }
}

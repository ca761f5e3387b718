//! The explicit covering maps of the planar cases: `q(w) = ¼(1 − (1+w²)/(2w))`,
//! the exponential cover, their composite, the squaring cover, and the
//! fibration `z ↦ (z_n^m − z_j^m)_j`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{ComplexPoint, FieldError, GaussianRational, Rational, DEFAULT_EPSILON};
use crate::orbit_config::{in_case3_w, is_orbit_config, sample_orbit_config, ConfigError, SampleBox};
use crate::orbmodel::{OrbifoldError, PlanarAction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoveringError {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("map needs n >= 1")]
    Arity,
}

impl From<OrbifoldError> for CoveringError {
    fn from(e: OrbifoldError) -> Self {
        CoveringError::Config(e.into())
    }
}

/// `a + b√r` with `a, b, r ∈ ℚ(i)` and `r` not a square when `b ≠ 0`.
/// `√r` is the principal square root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadExt {
    pub a: GaussianRational,
    pub b: GaussianRational,
    pub r: GaussianRational,
}

impl QuadExt {
    pub fn new(a: GaussianRational, b: GaussianRational, r: GaussianRational) -> Self {
        if b.is_zero() {
            return Self::from_gaussian(a);
        }
        match r.sqrt_exact() {
            Some(s) => Self::from_gaussian(&a + &(&b * &s)),
            None => QuadExt { a, b, r },
        }
    }

    pub fn from_gaussian(a: GaussianRational) -> Self {
        QuadExt {
            a,
            b: GaussianRational::zero(),
            r: GaussianRational::zero(),
        }
    }

    pub fn as_gaussian(&self) -> Option<&GaussianRational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn radicand(&self, other: &Self) -> GaussianRational {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.r.clone(),
            (false, true) => self.r.clone(),
            (false, false) => {
                assert_eq!(self.r, other.r, "elements of different quadratic extensions");
                self.r.clone()
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.a + &other.a, &self.b + &other.b, self.radicand(other))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.a - &other.a, &self.b - &other.b, self.radicand(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.radicand(other);
        let a = &(&self.a * &other.a) + &(&(&self.b * &other.b) * &r);
        let b = &(&self.a * &other.b) + &(&self.b * &other.a);
        Self::new(a, b, r)
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.r.clone())
    }

    /// `(a + b√r)(a − b√r) = a² − b²r`.
    pub fn norm(&self) -> GaussianRational {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &self.r)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        let n = self.norm().inv()?;
        let c = self.conjugate();
        Ok(Self::new(&c.a * &n, &c.b * &n, c.r))
    }

    pub fn to_complex64(&self) -> Complex64 {
        self.a.to_complex64() + self.b.to_complex64() * self.r.to_complex64().sqrt()
    }
}

fn quarter() -> GaussianRational {
    GaussianRational::real(Rational::frac(1, 4))
}

/// `q` on the quadratic extension; exact.
pub fn q_exact(w: &QuadExt) -> Result<QuadExt, CoveringError> {
    if w.is_zero() {
        return Err(CoveringError::Domain("q is undefined at w = 0".into()));
    }
    let one = QuadExt::from_gaussian(GaussianRational::one());
    let two = QuadExt::from_gaussian(GaussianRational::from_ints(2, 0));
    let frac = one.add(&w.mul(w)).mul(&two.mul(w).inv()?);
    Ok(one.sub(&frac).mul(&QuadExt::from_gaussian(quarter())))
}

fn q_complex(w: Complex64) -> Complex64 {
    0.25 * (1.0 - (1.0 + w * w) / (2.0 * w))
}

/// `q(w) = ¼(1 − (1+w²)/(2w))`, exact on exact input.
pub fn q_map(w: &ComplexPoint) -> Result<ComplexPoint, CoveringError> {
    match w.as_exact() {
        Some(e) => {
            let v = q_exact(&QuadExt::from_gaussian(e))?;
            Ok(ComplexPoint::exact(v.as_gaussian().expect("ℚ(i) is closed").clone()))
        }
        None => {
            let z = w.to_complex64();
            let eps = w.epsilon().expect("approximate");
            if z.norm() <= eps {
                return Err(CoveringError::Domain("q is undefined at w = 0".into()));
            }
            Ok(ComplexPoint::approx(q_complex(z), eps)?)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum FiberRoot {
    Exact(QuadExt),
    Approx { re: f64, im: f64 },
}

impl FiberRoot {
    pub fn to_complex64(&self) -> Complex64 {
        match self {
            FiberRoot::Exact(x) => x.to_complex64(),
            FiberRoot::Approx { re, im } => Complex64::new(*re, *im),
        }
    }
}

/// Solutions of `w² − 2(1 − 4v)w + 1 = 0`, i.e. `q⁻¹(v)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QFiber {
    pub value: ComplexPoint,
    pub roots: Vec<FiberRoot>,
    /// The quadratic has a repeated root (local degree 2).
    pub double_root: bool,
}

/// Half the linear coefficient and the reduced discriminant `(1−4v)² − 1 = 8v(2v−1)`.
fn fiber_quadratic(v: &GaussianRational) -> (GaussianRational, GaussianRational) {
    let s = &GaussianRational::one() - &v.scale(&Rational::from(4));
    let disc = &(&s * &s) - &GaussianRational::one();
    (s, disc)
}

pub fn q_fiber(v: &ComplexPoint) -> QFiber {
    match v.as_exact() {
        Some(e) => {
            let (s, disc) = fiber_quadratic(&e);
            if disc.is_zero() {
                return QFiber {
                    value: v.clone(),
                    roots: vec![FiberRoot::Exact(QuadExt::from_gaussian(s))],
                    double_root: true,
                };
            }
            let one = GaussianRational::one();
            let roots = [one.clone(), -&one]
                .into_iter()
                .map(|sign| FiberRoot::Exact(QuadExt::new(s.clone(), sign, disc.clone())))
                .collect();
            QFiber {
                value: v.clone(),
                roots,
                double_root: false,
            }
        }
        None => {
            let eps = v.epsilon().expect("approximate");
            let s = 1.0 - 4.0 * v.to_complex64();
            let disc = s * s - 1.0;
            let root = |z: Complex64| FiberRoot::Approx { re: z.re, im: z.im };
            if disc.norm() <= eps {
                return QFiber {
                    value: v.clone(),
                    roots: vec![root(s)],
                    double_root: true,
                };
            }
            let d = disc.sqrt();
            QFiber {
                value: v.clone(),
                roots: vec![root(s + d), root(s - d)],
                double_root: false,
            }
        }
    }
}

/// `exp(2πiz)`; always approximate.
pub fn exp_cover(z: &ComplexPoint) -> ComplexPoint {
    let eps = z.epsilon().unwrap_or(DEFAULT_EPSILON);
    let w = (Complex64::new(0.0, 2.0 * PI) * z.to_complex64()).exp();
    ComplexPoint::approx(w, eps).expect("positive tolerance")
}

/// Principal solution of `exp(2πiz) = w`, real part in `(−½, ½]`.
fn principal_preimage(w: Complex64) -> Complex64 {
    Complex64::new(w.arg() / (2.0 * PI), -w.norm().ln() / (2.0 * PI))
}

/// `{z₀ + k : |k| ≤ window}` for the principal preimage `z₀` of `w`.
pub fn exp_fiber(w: &ComplexPoint, window: u32) -> Result<Vec<ComplexPoint>, CoveringError> {
    let eps = w.epsilon().unwrap_or(DEFAULT_EPSILON);
    let wc = w.to_complex64();
    if wc.norm() <= eps {
        return Err(CoveringError::Domain("exp never vanishes".into()));
    }
    let z0 = principal_preimage(wc);
    let k = window as i64;
    (-k..=k)
        .map(|j| Ok(ComplexPoint::approx(z0 + j as f64, eps)?))
        .collect()
}

fn close(a: Complex64, b: Complex64, eps: f64) -> bool {
    (a - b).norm() <= eps * (1.0 + a.norm().max(b.norm()))
}

/// Coordinatewise `q(exp(2πiz))` on `{z : z_i ± z_j ∉ ℤ}`.
pub fn qe_composite(z: &[ComplexPoint], eps: f64) -> Result<Vec<ComplexPoint>, CoveringError> {
    let pts: Vec<ComplexPoint> = z
        .iter()
        .map(|p| if p.is_exact() { Ok(p.clone()) } else { p.to_approx(eps) })
        .collect::<Result<_, FieldError>>()?;
    if !is_orbit_config(&PlanarAction::IntegerDihedral, &pts)? {
        return Err(CoveringError::Domain(format!("{z:?} has z_i ± z_j ∈ ℤ")));
    }
    let out: Vec<Complex64> = pts
        .iter()
        .map(|p| q_complex(exp_cover(p).to_complex64()))
        .collect();
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if close(out[i], out[j], eps) {
                return Err(CoveringError::Domain(format!(
                    "images of coordinates {i} and {j} coincide"
                )));
            }
        }
    }
    out.into_iter()
        .map(|v| Ok(ComplexPoint::approx(v, eps)?))
        .collect()
}

fn square(z: &ComplexPoint) -> ComplexPoint {
    match z.as_exact() {
        Some(e) => ComplexPoint::exact(&e * &e),
        None => {
            let c = z.to_complex64();
            ComplexPoint::approx(c * c, z.epsilon().expect("approximate")).expect("valid tolerance")
        }
    }
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

/// `(w_1, …, w_n) ↦ (w_1², …, w_n²)` on `W = {w_i ≠ ±w_j, w_k ≠ ±1}`.
pub fn squaring_cover(w: &[ComplexPoint]) -> Result<Vec<ComplexPoint>, CoveringError> {
    if !in_case3_w(w)? {
        return Err(CoveringError::Domain(format!("{w:?} is not in W")));
    }
    let out: Vec<ComplexPoint> = w.iter().map(square).collect();
    let one = ComplexPoint::exact_int(1, 0);
    for (i, x) in out.iter().enumerate() {
        assert!(!x.coincides(&one), "image coordinate {i} hit the puncture");
        for y in &out[i + 1..] {
            assert!(!x.coincides(y), "image coordinates collide");
        }
    }
    Ok(out)
}

fn square_roots(x: &ComplexPoint) -> Vec<ComplexPoint> {
    let root = match x.as_exact().and_then(|e| e.sqrt_exact()) {
        Some(s) => ComplexPoint::exact(s),
        None => {
            let eps = x.epsilon().unwrap_or(DEFAULT_EPSILON);
            ComplexPoint::approx(x.to_complex64().sqrt(), eps).expect("valid tolerance")
        }
    };
    let neg = negate(&root);
    if root.coincides(&neg) {
        vec![root]
    } else {
        vec![root, neg]
    }
}

/// All preimages in `W` of `x` under the squaring cover, by sign enumeration.
pub fn squaring_fiber(x: &[ComplexPoint]) -> Result<Vec<Vec<ComplexPoint>>, CoveringError> {
    let mut out: Vec<Vec<ComplexPoint>> = vec![Vec::new()];
    for xi in x {
        let roots = square_roots(xi);
        out = out
            .into_iter()
            .flat_map(|pre| {
                roots.iter().map(move |r| {
                    let mut v = pre.clone();
                    v.push(r.clone());
                    v
                })
            })
            .collect();
    }
    let mut kept = Vec::new();
    for w in out {
        if in_case3_w(&w)? {
            kept.push(w);
        }
    }
    Ok(kept)
}

fn power(z: &ComplexPoint, m: u32) -> ComplexPoint {
    match z.as_exact() {
        Some(e) => ComplexPoint::exact(e.pow(m)),
        None => ComplexPoint::approx(z.to_complex64().powu(m), z.epsilon().expect("approximate"))
            .expect("valid tolerance"),
    }
}

fn difference(a: &ComplexPoint, b: &ComplexPoint) -> ComplexPoint {
    match (a.as_exact(), b.as_exact()) {
        (Some(x), Some(y)) => ComplexPoint::exact(&x - &y),
        _ => ComplexPoint::approx(
            a.to_complex64() - b.to_complex64(),
            a.joint_epsilon(b).expect("one side approximate"),
        )
        .expect("valid tolerance"),
    }
}

/// Membership in `PB_k(ℂ*)`: nonzero, pairwise distinct coordinates.
pub fn in_pb_cstar(b: &[ComplexPoint]) -> bool {
    let zero = ComplexPoint::exact_int(0, 0);
    b.iter().enumerate().all(|(i, x)| {
        !x.coincides(&zero) && b[i + 1..].iter().all(|y| !x.coincides(y))
    })
}

/// `b_j = z_n^m − z_j^m` for `j < n`, defined where `z_i^m ≠ z_j^m`.
pub fn fn_fibration_map(z: &[ComplexPoint], m: u32) -> Result<Vec<ComplexPoint>, CoveringError> {
    if z.len() < 2 {
        return Err(CoveringError::Config(ConfigError::Arity { n: z.len(), min: 2 }));
    }
    if m == 0 {
        return Err(CoveringError::Domain("exponent m must be positive".into()));
    }
    let powers: Vec<ComplexPoint> = z.iter().map(|zj| power(zj, m)).collect();
    for (i, p) in powers.iter().enumerate() {
        if powers[i + 1..].iter().any(|q| p.coincides(q)) {
            return Err(CoveringError::Domain(format!("{z:?} has z_i^{m} = z_j^{m}")));
        }
    }
    let last = &powers[powers.len() - 1];
    let b: Vec<ComplexPoint> = powers[..powers.len() - 1]
        .iter()
        .map(|pj| difference(last, pj))
        .collect();
    assert!(in_pb_cstar(&b), "fibration map left PB(C*)");
    Ok(b)
}

/// Which covering map [`verify_cover`] checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "lowercase")]
pub enum CoverMap {
    Q,
    Squaring { n: usize },
    #[serde(rename = "qE")]
    QE { n: usize },
}

impl CoverMap {
    pub fn name(&self) -> String {
        match self {
            CoverMap::Q => "q".into(),
            CoverMap::Squaring { n } => format!("squaring(n={n})"),
            CoverMap::QE { n } => format!("qE(n={n})"),
        }
    }

    pub fn declared_degree(&self) -> u64 {
        match self {
            CoverMap::Q => 2,
            CoverMap::Squaring { n } | CoverMap::QE { n } => 1 << n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub samples: usize,
    pub seed: u64,
    pub epsilon: f64,
    /// Half-width K of the translation window for the exponential cover.
    pub window: u32,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            samples: 200,
            seed: 0,
            epsilon: DEFAULT_EPSILON,
            window: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchPoint {
    pub value: ComplexPoint,
    pub preimages: Vec<FiberRoot>,
    pub local_degree: u32,
    pub exact: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeckCheck {
    pub name: String,
    pub exact: bool,
    pub checked: usize,
    pub failures: usize,
    /// Largest discrepancy seen, for approximate checks.
    pub max_error: Option<f64>,
}

impl DeckCheck {
    fn new(name: &str, exact: bool) -> Self {
        DeckCheck {
            name: name.to_string(),
            exact,
            checked: 0,
            failures: 0,
            max_error: if exact { None } else { Some(0.0) },
        }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn record_error(&mut self, a: Complex64, b: Complex64, eps: f64) {
        let err = (a - b).norm();
        if let Some(m) = self.max_error.as_mut() {
            *m = m.max(err);
        }
        self.record(close(a, b, eps));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringReport {
    pub map: String,
    pub declared_degree: u64,
    /// Generic fiber size ↦ number of samples with that size.
    pub fiber_sizes: BTreeMap<usize, usize>,
    pub branch_points: Vec<BranchPoint>,
    pub deck_checks: Vec<DeckCheck>,
    /// Samples landing on a singular value, left out of the degree count.
    pub skipped_singular: usize,
    /// Problems found with individual fibers.
    pub fiber_failures: Vec<String>,
    pub plan: SamplePlan,
    pub pass: bool,
}

impl CoveringReport {
    fn new(map: CoverMap, plan: &SamplePlan) -> Self {
        CoveringReport {
            map: map.name(),
            declared_degree: map.declared_degree(),
            fiber_sizes: BTreeMap::new(),
            branch_points: Vec::new(),
            deck_checks: Vec::new(),
            skipped_singular: 0,
            fiber_failures: Vec::new(),
            plan: plan.clone(),
            pass: false,
        }
    }

    fn finish(mut self) -> Self {
        let degree = self.declared_degree as usize;
        self.pass = !self.fiber_sizes.is_empty()
            && self.fiber_sizes.keys().all(|&s| s == degree)
            && self.fiber_failures.is_empty()
            && self.branch_points.iter().all(|b| b.verified)
            && self.deck_checks.iter().all(|d| d.failures == 0);
        self
    }
}

fn random_gaussian(rng: &mut ChaCha8Rng, real: bool) -> GaussianRational {
    let part = |rng: &mut ChaCha8Rng| Rational::frac(rng.gen_range(-40..=40), rng.gen_range(1..=12));
    let re = part(rng);
    let im = if real { Rational::zero() } else { part(rng) };
    GaussianRational::new(re, im)
}

/// Samples generic target points and checks fiber sizes, branch data and
/// deck transformations. Numerical mismatches make the report fail; they
/// are not errors.
pub fn verify_cover(map: CoverMap, plan: &SamplePlan) -> Result<CoveringReport, CoveringError> {
    if !(plan.epsilon > 0.0) || !plan.epsilon.is_finite() {
        return Err(FieldError::InvalidTolerance(plan.epsilon).into());
    }
    let report = CoveringReport::new(map, plan);
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let report = match map {
        CoverMap::Q => verify_q(report, plan, &mut rng)?,
        CoverMap::Squaring { n } => verify_squaring(report, n, plan, &mut rng)?,
        CoverMap::QE { n } => verify_qe(report, n, plan, &mut rng)?,
    };
    Ok(report.finish())
}

fn q_branch_points() -> Result<Vec<BranchPoint>, CoveringError> {
    [(Rational::zero(), 1), (Rational::frac(1, 2), -1)]
        .into_iter()
        .map(|(v, expected)| {
            let value = ComplexPoint::exact_real(v.clone());
            let fiber = q_fiber(&value);
            let (_, disc) = fiber_quadratic(&GaussianRational::real(v.clone()));
            let root = QuadExt::from_gaussian(GaussianRational::from_ints(expected, 0));
            let verified = fiber.double_root
                && disc.is_zero()
                && fiber.roots == vec![FiberRoot::Exact(root.clone())]
                && q_exact(&root)?.as_gaussian() == Some(&GaussianRational::real(v));
            Ok(BranchPoint {
                value,
                preimages: fiber.roots,
                local_degree: 2,
                exact: true,
                verified,
            })
        })
        .collect()
}

fn verify_q(mut report: CoveringReport, plan: &SamplePlan, rng: &mut ChaCha8Rng) -> Result<CoveringReport, CoveringError> {
    let branch = [GaussianRational::zero(), GaussianRational::real(Rational::frac(1, 2))];
    let mut deck = DeckCheck::new("q(w) = q(1/w)", true);
    let mut product = DeckCheck::new("roots multiply to 1", true);
    for k in 0..plan.samples {
        let v = random_gaussian(rng, k % 2 == 0);
        if branch.contains(&v) {
            report.skipped_singular += 1;
            continue;
        }
        let fiber = q_fiber(&ComplexPoint::exact(v.clone()));
        let roots: Vec<QuadExt> = fiber
            .roots
            .iter()
            .filter_map(|r| match r {
                FiberRoot::Exact(x) => Some(x.clone()),
                FiberRoot::Approx { .. } => None,
            })
            .collect();
        let distinct = roots.len() == 2 && roots[0] != roots[1];
        *report.fiber_sizes.entry(if distinct { 2 } else { roots.len() }).or_default() += 1;
        let target = QuadExt::from_gaussian(v.clone());
        for r in &roots {
            if q_exact(r)? != target {
                report.fiber_failures.push(format!("q({r:?}) != {v:?}"));
            }
            deck.record(q_exact(&r.inv()?)? == q_exact(r)?);
        }
        if roots.len() == 2 {
            product.record(roots[0].mul(&roots[1]) == QuadExt::from_gaussian(GaussianRational::one()));
        }
        let w = random_gaussian(rng, false);
        if !w.is_zero() {
            let w = QuadExt::from_gaussian(w);
            deck.record(q_exact(&w)? == q_exact(&w.inv()?)?);
        }
    }
    report.branch_points = q_branch_points()?;
    report.deck_checks = vec![deck, product];
    Ok(report)
}

fn verify_squaring(
    mut report: CoveringReport,
    n: usize,
    plan: &SamplePlan,
    rng: &mut ChaCha8Rng,
) -> Result<CoveringReport, CoveringError> {
    if n == 0 {
        return Err(CoveringError::Arity);
    }
    let bx = SampleBox::square(Rational::from(3), Rational::frac(1, 4));
    let zero = ComplexPoint::exact_int(0, 0);
    let mut deck = DeckCheck::new("w_k -> -w_k preserves the image", true);
    for _ in 0..plan.samples {
        let w = sample_orbit_config(&PlanarAction::SignFlipPunctured, n, rng.gen(), &bx)?.points;
        if w.iter().any(|p| p.coincides(&zero)) {
            report.skipped_singular += 1;
            continue;
        }
        let x = squaring_cover(&w)?;
        let fiber = squaring_fiber(&x)?;
        *report.fiber_sizes.entry(fiber.len()).or_default() += 1;
        if !fiber.contains(&w) {
            report.fiber_failures.push(format!("{w:?} missing from its own fiber"));
        }
        for pre in &fiber {
            if squaring_cover(pre)? != x {
                report.fiber_failures.push(format!("{pre:?} does not map to {x:?}"));
            }
        }
        for k in 0..n {
            let mut flipped = w.clone();
            flipped[k] = negate(&flipped[k]);
            deck.record(squaring_cover(&flipped)? == x);
        }
    }
    let roots = square_roots(&zero);
    report.branch_points = vec![BranchPoint {
        value: zero.clone(),
        verified: roots.len() == 1 && square(&roots[0]) == zero,
        preimages: roots
            .into_iter()
            .map(|r| FiberRoot::Exact(QuadExt::from_gaussian(r.as_exact().expect("exact"))))
            .collect(),
        local_degree: 2,
        exact: true,
    }];
    report.deck_checks = vec![deck];
    Ok(report)
}

/// Snaps values within `1e-7` of an integer before taking the floor.
fn window_index(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < 1e-7 {
        r as i64
    } else {
        x.floor() as i64
    }
}

fn verify_qe(
    mut report: CoveringReport,
    n: usize,
    plan: &SamplePlan,
    rng: &mut ChaCha8Rng,
) -> Result<CoveringReport, CoveringError> {
    if n == 0 {
        return Err(CoveringError::Arity);
    }
    if plan.window == 0 {
        return Err(CoveringError::Domain("window must be at least 1".into()));
    }
    let eps = plan.epsilon;
    let k = plan.window as i64;
    let bx = SampleBox {
        re_min: Rational::from(-1),
        re_max: Rational::from(1),
        im_min: Rational::frac(-1, 2),
        im_max: Rational::frac(1, 2),
        pitch: Rational::frac(1, 16),
        max_attempts: 10_000,
    };
    let mut periodic = DeckCheck::new("exp(z + 1) = exp(z)", false);
    let mut shift = DeckCheck::new("z_k -> z_k + 1 preserves the image", false);
    let mut flip = DeckCheck::new("z_k -> -z_k preserves the image", false);
    let mut q_deck = DeckCheck::new("q(w) = q(1/w)", true);
    for _ in 0..plan.samples {
        let z = sample_orbit_config(&PlanarAction::IntegerDihedral, n, rng.gen(), &bx)?.points;
        let singular = z.iter().any(|p| {
            let e = p.as_exact().expect("sampler is exact");
            e.im.is_zero() && (&e.re + &e.re).is_integer()
        });
        if singular {
            report.skipped_singular += 1;
            continue;
        }
        let y = qe_composite(&z, eps)?;
        let mut unit_window = 1usize;
        for (j, yj) in y.iter().enumerate() {
            let fiber = q_fiber(yj);
            let mut buckets: BTreeMap<i64, usize> = BTreeMap::new();
            let mut found = false;
            for root in &fiber.roots {
                let w = ComplexPoint::approx(root.to_complex64(), eps)?;
                for pre in exp_fiber(&w, plan.window)? {
                    let c = pre.to_complex64();
                    *buckets.entry(window_index(c.re)).or_default() += 1;
                    found |= close(c, z[j].to_complex64(), eps);
                }
            }
            let counts: Vec<usize> = (-k..k).map(|b| buckets.get(&b).copied().unwrap_or(0)).collect();
            if counts.iter().any(|&c| c != counts[0]) {
                report
                    .fiber_failures
                    .push(format!("coordinate {j}: window counts {counts:?} differ"));
            }
            if !found {
                report
                    .fiber_failures
                    .push(format!("coordinate {j}: {:?} not among its preimages", z[j]));
            }
            unit_window *= counts[k as usize];
        }
        *report.fiber_sizes.entry(unit_window).or_default() += 1;

        let base: Vec<Complex64> = y.iter().map(ComplexPoint::to_complex64).collect();
        for idx in 0..n {
            let zc = z[idx].to_complex64();
            let e0 = exp_cover(&z[idx]).to_complex64();
            let e1 = exp_cover(&ComplexPoint::approx(zc + 1.0, eps)?).to_complex64();
            periodic.record_error(e0, e1, eps);
            for (check, moved) in [(&mut shift, zc + 1.0), (&mut flip, -zc)] {
                let mut tuple = z.clone();
                tuple[idx] = ComplexPoint::approx(moved, eps)?;
                let image = qe_composite(&tuple, eps)?;
                check.record_error(image[idx].to_complex64(), base[idx], eps);
            }
        }
        for p in &z {
            let w = QuadExt::from_gaussian(p.as_exact().expect("exact"));
            if !w.is_zero() {
                q_deck.record(q_exact(&w)? == q_exact(&w.inv()?)?);
            }
        }
    }
    report.branch_points = q_branch_points()?;
    report.deck_checks = vec![periodic, shift, flip, q_deck];
    Ok(report)
}

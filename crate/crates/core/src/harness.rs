//! Harmonic test fields with known majorants, membership checks, measured sups
//! and the sample registry used for end-to-end soundness sweeps.

use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CertError, Result};
use crate::json::serialize_f64;
use crate::majorant::Majorant;
use crate::pipeline::{certify_bound, BoundCertificate, CylinderSpec};
use crate::quad::gauss_legendre;
use crate::reduction::{CylinderField, SphereRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    /// Exponents of `(x₁, …, x_{n−1}, y)`.
    pub powers: Vec<u32>,
}

/// Holomorphic generator `F(ζ)`, `ζ = ρ + ih`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `coeff·ζ^degree`.
    Monomial { degree: u32, coeff: f64 },
    /// `exp(−ic/(ζ − ib))`, singular at the top boundary point `ib`.
    BoundaryBlowup { c: f64, b: f64 },
    /// `exp(ic/(ζ − a))`, singular at the lateral boundary point `a`.
    LateralBlowup { c: f64, a: f64 },
}

impl Generator {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let i = Complex64::i();
        match *self {
            Generator::Monomial { degree, coeff } => z.powu(degree) * coeff,
            Generator::BoundaryBlowup { c, b } => (-i * c / (z - i * b)).exp(),
            Generator::LateralBlowup { c, a } => (i * c / (z - a)).exp(),
        }
    }

    /// Distance from `z` to the nearest singularity (`∞` for polynomials).
    pub fn singular_distance(&self, z: Complex64) -> f64 {
        match *self {
            Generator::Monomial { .. } => f64::INFINITY,
            Generator::BoundaryBlowup { b, .. } => (z - Complex64::new(0.0, b)).norm(),
            Generator::LateralBlowup { a, .. } => (z - a).norm().min((z + a).norm()),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let i = Complex64::i();
        match *self {
            Generator::Monomial { degree: 0, .. } => Complex64::new(0.0, 0.0),
            Generator::Monomial { degree, coeff } => z.powu(degree - 1) * (coeff * degree as f64),
            Generator::BoundaryBlowup { c, b } => {
                let w = z - i * b;
                self.eval(z) * (i * c / (w * w))
            }
            Generator::LateralBlowup { c, a } => {
                let w = z - a;
                self.eval(z) * (-i * c / (w * w))
            }
        }
    }
}

/// `|Re w + Im w| ≤ √2·|w|`, doubled by the mean value theorem.
const AXIAL_FACTOR: f64 = 2.0 * std::f64::consts::SQRT_2;

fn gauss_legendre_20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleFamily {
    /// `Σ coeff·∏ coordᵖ`, checked to be harmonic on construction.
    HarmonicPolynomial { terms: Vec<Monomial> },
    /// `Re exp(−ic/(z − ib))` with `z = x₁ + iy`, constant in the other coordinates.
    #[serde(rename = "boundary_blowup_2d")]
    BoundaryBlowup2D { c: f64, b: f64 },
    /// `Re exp(ic/(z − R))` with `z = x₁ + iy`, singular at the lateral boundary point `(R, 0)`.
    #[serde(rename = "lateral_blowup_2d")]
    LateralBlowup2D { c: f64 },
    /// `u(ρ, h) = [G(ρ+ih) − G(−ρ+ih)]/ρ`, `G = Re F + Im F`, with `ρ = |(x₁, x₂, x₃)|`; needs `n ≥ 4`.
    #[serde(rename = "axial_from_2d")]
    AxialFrom2D { generator: Generator },
    /// `|X − P|^{2−n}` (`ln|X − P|` for `n = 2`) with the pole outside the closed cylinder.
    PointSourceShell { pole: Vec<f64> },
}

/// Pointwise bound on `|field|` as a function of the signed height `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `M(|y|)` with `M` non-increasing.
    Symmetric(Majorant),
    /// `scale·exp(c/(b − y))`.
    TopBlowup { c: f64, b: f64, scale: f64 },
}

impl Profile {
    pub fn log_value(&self, y: f64) -> f64 {
        match self {
            Profile::Symmetric(m) => m.log_level(y.abs()),
            Profile::TopBlowup { c, b, scale } => {
                if y < *b {
                    scale.ln() + c / (b - y)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    fn scaled(&self, factor: f64) -> Result<Self> {
        Ok(match self {
            Profile::Symmetric(m) => Profile::Symmetric(Majorant::scaled(m.clone(), factor)?),
            Profile::TopBlowup { c, b, scale } => Profile::TopBlowup { c: *c, b: *b, scale: scale * factor },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSample {
    pub name: String,
    pub family: SampleFamily,
    pub spec: CylinderSpec,
    /// Pointwise domination profile checked by [`verify_membership`].
    pub profile: Profile,
    /// Non-increasing `M` with `|u(x, y)| ≤ M(|y|)` on the whole cylinder;
    /// `None` when the profile is unbounded near the top and no such `M` exists.
    pub majorant: Option<Majorant>,
    /// Majorant with the same distribution function as the profile, for the
    /// planar Domar estimate on `(−R, R) × (−H, H)`.
    pub planar_majorant: Majorant,
}

fn symmetric(name: &str, family: SampleFamily, spec: CylinderSpec, m: Majorant) -> HarmonicSample {
    HarmonicSample {
        name: name.to_string(),
        family,
        spec,
        profile: Profile::Symmetric(m.clone()),
        planar_majorant: m.clone(),
        majorant: Some(m),
    }
}

fn exp_blowup_scaled(amplitude: f64, scale: f64, height: f64) -> Result<Majorant> {
    let base = Majorant::exp_blowup_scaled(1.0, amplitude, height)?;
    if scale == 1.0 {
        Ok(base)
    } else {
        Majorant::scaled(base, scale)
    }
}

/// Planar sample `f(z) = exp(−ic/(z − ib))` on the square `(−b, b)²`.
///
/// `|f(x+iy)| = exp(c(b−y)/|z−ib|²) ≤ exp(c/(b−y))` with equality on `x = 0`.
pub fn make_boundary_blowup(c: f64, b: f64) -> Result<HarmonicSample> {
    make_boundary_blowup_on(c, b, CylinderSpec::new(2, b, b, 0.25 * b)?)
}

/// Boundary-blowup sample on an arbitrary cylinder with `H ≤ b`.
///
/// The profile `exp(c/(b − y))` is not a function of `|y|`; its non-increasing
/// hull is the constant `exp(c/(b − H))`, finite only for `H < b`.
pub fn make_boundary_blowup_on(c: f64, b: f64, spec: CylinderSpec) -> Result<HarmonicSample> {
    if !(c >= 0.0) || !(b > 0.0) || spec.height > b {
        return Err(CertError::Domain(format!(
            "boundary blowup needs c ≥ 0, b > 0 and H ≤ b (c = {c}, b = {b}, H = {})",
            spec.height
        )));
    }
    let h = spec.height;
    let hull = if c == 0.0 {
        Some(Majorant::constant(1.0, h)?)
    } else {
        (h < b).then(|| Majorant::constant((c / (b - h)).exp(), h)).transpose()?
    };
    let planar = if c == 0.0 { Majorant::constant(1.0, h)? } else { exp_blowup_scaled(0.5 * c, 1.0, h)? };
    Ok(HarmonicSample {
        name: format!("boundary_blowup_2d(c={c},b={b})"),
        family: SampleFamily::BoundaryBlowup2D { c, b },
        spec,
        profile: Profile::TopBlowup { c, b, scale: 1.0 },
        majorant: hull,
        planar_majorant: planar,
    })
}

/// `Re exp(ic/(z − R))`: `|f| = exp(cy/|z − R|²) ≤ exp(c/|y|)`.
pub fn make_lateral_blowup(c: f64, spec: CylinderSpec) -> Result<HarmonicSample> {
    if !(c > 0.0) {
        return Err(CertError::Domain(format!("lateral blowup needs c > 0, got {c}")));
    }
    let m = exp_blowup_scaled(c, 1.0, spec.height)?;
    Ok(symmetric(&format!("lateral_blowup_2d(c={c})"), SampleFamily::LateralBlowup2D { c }, spec, m))
}

/// `u(ρ, h) = ṽ(ρ, h)/ρ` with `ṽ = G(ρ+ih) − G(−ρ+ih)` and `G = Re F + Im F`, an
/// axially symmetric harmonic function of `(x₁, x₂, x₃)` and harmonic in any `n ≥ 4`.
/// Either part alone can vanish: `Im ζ³` and `Re` of the boundary-blowup generator
/// are both even in `ρ`.
///
/// `|u| ≤ 2√2·sup_{|s| ≤ ρ} |F'(s + ih)|` by the mean value theorem; the declared
/// majorants bound that supremum per generator.
pub fn make_axial_from_2d(generator: Generator, spec: CylinderSpec) -> Result<HarmonicSample> {
    if spec.n < 4 {
        return Err(CertError::Domain(format!("axial sample needs n ≥ 4, got {}", spec.n)));
    }
    let (r, h) = (spec.radius, spec.height);
    let family = SampleFamily::AxialFrom2D { generator: generator.clone() };
    let name = format!("axial_from_2d({generator:?})");
    match generator {
        Generator::Monomial { degree, coeff } => {
            let bound = if degree == 0 {
                0.0
            } else {
                AXIAL_FACTOR * coeff.abs() * degree as f64 * (r * r + h * h).powf(0.5 * (degree as f64 - 1.0))
            };
            Ok(symmetric(&name, family, spec, Majorant::constant(bound, h)?))
        }
        Generator::BoundaryBlowup { c, b } => {
            if !(c > 0.0) || h > b {
                return Err(CertError::Domain(format!("generator singular inside the rectangle (b = {b}, H = {h})")));
            }
            // |F'| ≤ c·e^{c/(b−h)}/(b−h)² ≤ c·e^{(c+2)/(b−h)}
            let hull =
                (h < b).then(|| Majorant::constant(AXIAL_FACTOR * c * ((c + 2.0) / (b - h)).exp(), h)).transpose()?;
            Ok(HarmonicSample {
                name,
                family,
                spec,
                profile: Profile::TopBlowup { c: c + 2.0, b, scale: AXIAL_FACTOR * c },
                majorant: hull,
                planar_majorant: exp_blowup_scaled(0.5 * (c + 2.0), AXIAL_FACTOR * c, h)?,
            })
        }
        Generator::LateralBlowup { c, a } => {
            if !(c > 0.0) || a < r {
                return Err(CertError::Domain(format!("generator singular inside the rectangle (a = {a}, R = {r})")));
            }
            // |F'| ≤ c·e^{c/|h|}/h² ≤ c·e^{(c+2)/|h|}
            Ok(symmetric(&name, family, spec, exp_blowup_scaled(c + 2.0, AXIAL_FACTOR * c, h)?))
        }
    }
}

fn laplacian_of(poly: &[Monomial], n: usize) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for t in poly {
        for k in 0..n {
            let p = t.powers[k];
            if p < 2 {
                continue;
            }
            let mut powers = t.powers.clone();
            powers[k] -= 2;
            let coeff = t.coeff * (p * (p - 1)) as f64;
            match out.iter_mut().find(|m| m.powers == powers) {
                Some(m) => m.coeff += coeff,
                None => out.push(Monomial { coeff, powers }),
            }
        }
    }
    out
}

/// Polynomial sample; rejects non-harmonic input by exact symbolic Laplacian.
pub fn make_polynomial(terms: Vec<Monomial>, spec: CylinderSpec) -> Result<HarmonicSample> {
    let n = spec.n as usize;
    if terms.iter().any(|t| t.powers.len() != n) {
        return Err(CertError::Domain(format!("every monomial needs {n} exponents")));
    }
    let scale: f64 = terms.iter().map(|t| t.coeff.abs()).sum::<f64>().max(1.0);
    if let Some(bad) = laplacian_of(&terms, n).iter().find(|m| m.coeff.abs() > 1e-12 * scale) {
        return Err(CertError::Domain(format!("polynomial is not harmonic (Laplacian has term {bad:?})")));
    }
    // |x_i| ≤ |x| < R and |y| < H
    let bound: f64 = terms
        .iter()
        .map(|t| {
            let px: u32 = t.powers[..n - 1].iter().sum();
            t.coeff.abs() * spec.radius.powi(px as i32) * spec.height.powi(t.powers[n - 1] as i32)
        })
        .sum();
    let name = format!("harmonic_polynomial({} terms)", terms.len());
    Ok(symmetric(&name, SampleFamily::HarmonicPolynomial { terms }, spec, Majorant::constant(bound, spec.height)?))
}

/// Fundamental solution centred at a pole outside the closed cylinder.
pub fn make_point_source(pole: Vec<f64>, spec: CylinderSpec) -> Result<HarmonicSample> {
    let n = spec.n as usize;
    if pole.len() != n {
        return Err(CertError::Domain(format!("pole needs {n} coordinates")));
    }
    let px = pole[..n - 1].iter().map(|c| c * c).sum::<f64>().sqrt();
    let py = pole[n - 1];
    // distance from the pole to the closed cylinder
    let dx = (px - spec.radius).max(0.0);
    let dy = (py.abs() - spec.height).max(0.0);
    let dmin = dx.hypot(dy);
    if !(dmin > 0.0) {
        return Err(CertError::Domain("pole must lie outside the closed cylinder".into()));
    }
    let dmax = (px + spec.radius).hypot(py.abs() + spec.height);
    let bound = if n == 2 { dmin.ln().abs().max(dmax.ln().abs()) } else { dmin.powi(2 - n as i32) };
    let name = format!("point_source_shell(n={n})");
    Ok(symmetric(&name, SampleFamily::PointSourceShell { pole }, spec, Majorant::constant(bound, spec.height)?))
}

impl HarmonicSample {
    /// Multiplies the declared profile and majorants by `factor`.
    pub fn with_majorant_scale(mut self, factor: f64) -> Result<Self> {
        self.profile = self.profile.scaled(factor)?;
        self.majorant = self.majorant.map(|m| Majorant::scaled(m, factor)).transpose()?;
        self.planar_majorant = Majorant::scaled(self.planar_majorant, factor)?;
        Ok(self)
    }

    /// Replaces all declared bounds by one non-increasing majorant.
    pub fn with_majorant(mut self, m: Majorant) -> Self {
        self.profile = Profile::Symmetric(m.clone());
        self.planar_majorant = m.clone();
        self.majorant = Some(m);
        self
    }

    fn complex_2d(&self, x1: f64, y: f64) -> Option<Complex64> {
        let z = Complex64::new(x1, y);
        let i = Complex64::i();
        match self.family {
            SampleFamily::BoundaryBlowup2D { c, b } => Some((-i * c / (z - i * b)).exp()),
            SampleFamily::LateralBlowup2D { c } => Some((i * c / (z - self.spec.radius)).exp()),
            _ => None,
        }
    }

    /// The real harmonic field `u(x, y)`.
    pub fn field(&self, x: &[f64], y: f64) -> f64 {
        match &self.family {
            SampleFamily::BoundaryBlowup2D { .. } | SampleFamily::LateralBlowup2D { .. } => {
                self.complex_2d(x[0], y).expect("planar family").re
            }
            SampleFamily::HarmonicPolynomial { terms } => terms
                .iter()
                .map(|t| {
                    let mut v = t.coeff;
                    for (k, &p) in t.powers.iter().enumerate() {
                        let c = if k < x.len() { x[k] } else { y };
                        v *= c.powi(p as i32);
                    }
                    v
                })
                .sum(),
            SampleFamily::AxialFrom2D { generator } => {
                let rho = x[..3].iter().map(|c| c * c).sum::<f64>().sqrt();
                let near_axis = rho < 0.1f64.min(0.25 * generator.singular_distance(Complex64::new(0.0, y)));
                if near_axis {
                    // ∫_{−1}^{1} G'(ih + tρ) dt, free of the cancellation in ṽ/ρ
                    let (t, w) = gauss_legendre_20();
                    t.iter()
                        .zip(w)
                        .map(|(ti, wi)| {
                            let d = generator.derivative(Complex64::new(ti * rho, y));
                            wi * (d.re + d.im)
                        })
                        .sum()
                } else {
                    let d = generator.eval(Complex64::new(rho, y)) - generator.eval(Complex64::new(-rho, y));
                    (d.re + d.im) / rho
                }
            }
            SampleFamily::PointSourceShell { pole } => {
                let n = pole.len();
                let mut r2 = (y - pole[n - 1]).powi(2);
                for (xi, pi) in x.iter().zip(pole) {
                    r2 += (xi - pi).powi(2);
                }
                if n == 2 {
                    0.5 * r2.ln()
                } else {
                    r2.powf(0.5 * (2.0 - n as f64))
                }
            }
        }
    }

    /// `ln|f|` for the holomorphic planar families, `ln|u|` otherwise.
    pub fn log_modulus(&self, x: &[f64], y: f64) -> f64 {
        let z = Complex64::new(x[0], y);
        match self.family {
            SampleFamily::BoundaryBlowup2D { c, b } => {
                let w = z - Complex64::new(0.0, b);
                c * (b - y) / w.norm_sqr()
            }
            SampleFamily::LateralBlowup2D { c } => {
                let w = z - self.spec.radius;
                c * y / w.norm_sqr()
            }
            _ => self.field(x, y).abs().ln(),
        }
    }

    /// `|f|` for the holomorphic planar families, `|u|` otherwise.
    pub fn modulus(&self, x: &[f64], y: f64) -> f64 {
        self.log_modulus(x, y).exp()
    }

    pub fn is_holomorphic_planar(&self) -> bool {
        matches!(self.family, SampleFamily::BoundaryBlowup2D { .. } | SampleFamily::LateralBlowup2D { .. })
    }
}

impl CylinderField for HarmonicSample {
    fn dimension(&self) -> usize {
        self.spec.n as usize
    }
    fn radius(&self) -> f64 {
        self.spec.radius
    }
    fn height(&self) -> f64 {
        self.spec.height
    }
    fn eval(&self, x: &[f64], y: f64) -> f64 {
        self.field(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Radial nodes on `[0, r_max]` (sup) or cells on `[0, R)` (domination).
    pub radial: usize,
    /// Vertical nodes (sup) or cells (domination).
    pub vertical: usize,
    /// Order of the product rule supplying the radial directions.
    pub direction_order: usize,
    pub residual_radial: usize,
    pub residual_vertical: usize,
    pub residual_direction_order: usize,
    pub residual_step: f64,
    pub residual_tol: f64,
    /// Residual points keep this distance from the lateral and top boundaries;
    /// `None` means `ε/2`.
    pub interior_margin: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            radial: 41,
            vertical: 81,
            direction_order: 3,
            residual_radial: 9,
            residual_vertical: 17,
            residual_direction_order: 2,
            residual_step: 1e-3,
            residual_tol: 1e-6,
            interior_margin: None,
        }
    }
}

impl GridConfig {
    /// Same grid with `nodes` points per axis.
    pub fn with_resolution(self, nodes: usize) -> Self {
        Self { radial: nodes, vertical: nodes, ..self }
    }
}

fn directions(n: usize, order: usize) -> Vec<Vec<f64>> {
    SphereRule::new(n - 1, order.max(1)).expect("valid rule").points
}

fn scaled_point(dir: &[f64], r: f64) -> Vec<f64> {
    dir.iter().map(|d| d * r).collect()
}

/// Relative Laplacian residual with fourth-order centered differences:
/// `|Σ D_ii u| / (Σ |D_ii u| + max|u|/L²)`.
pub fn relative_residual(f: &dyn Fn(&[f64]) -> f64, p: &[f64], s: f64, scale: f64) -> f64 {
    let mut lap = 0.0;
    let mut abs_sum = 0.0;
    let u0 = f(p);
    let mut umax = u0.abs();
    let mut q = p.to_vec();
    for k in 0..p.len() {
        let mut at = |off: f64| {
            q[k] = p[k] + off;
            let v = f(&q);
            q[k] = p[k];
            v
        };
        let (p1, m1, p2, m2) = (at(s), at(-s), at(2.0 * s), at(-2.0 * s));
        umax = umax.max(p1.abs()).max(m1.abs()).max(p2.abs()).max(m2.abs());
        let d2 = (-p2 + 16.0 * p1 - 30.0 * u0 + 16.0 * m1 - m2) / (12.0 * s * s);
        lap += d2;
        abs_sum += d2.abs();
    }
    lap.abs() / (abs_sum + umax / (scale * scale) + f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipReport {
    #[serde(serialize_with = "serialize_f64")]
    pub residual_max: f64,
    /// `max |field|/profile(y)`.
    #[serde(serialize_with = "serialize_f64")]
    pub ratio_max: f64,
    pub residual_points: usize,
    pub domination_points: usize,
    pub ok: bool,
}

/// Checks harmonicity (relative residual) and pointwise domination by the profile.
///
/// Domination is tested on a cell-centred grid over the whole cylinder, so no
/// node sits on `y = 0` or on the boundary; the ratio is compared in log form.
pub fn verify_membership(s: &HarmonicSample, cfg: &GridConfig) -> MembershipReport {
    let n = s.spec.n as usize;
    let (r, h) = (s.spec.radius, s.spec.height);
    let margin = cfg.interior_margin.unwrap_or(0.5 * s.spec.eps);
    let eval = |p: &[f64]| s.field(&p[..n - 1], p[n - 1]);

    let mut residual_max = 0.0f64;
    let mut residual_points = 0;
    let (rr, rh) = (r - margin, h - margin);
    for dir in directions(n, cfg.residual_direction_order) {
        for i in 0..cfg.residual_radial {
            let rad = rr * i as f64 / (cfg.residual_radial - 1).max(1) as f64;
            for j in 0..cfg.residual_vertical {
                let y = -rh + 2.0 * rh * j as f64 / (cfg.residual_vertical - 1).max(1) as f64;
                let mut p = scaled_point(&dir, rad);
                p.push(y);
                let res = relative_residual(&eval, &p, cfg.residual_step, r.min(h));
                residual_max = residual_max.max(if res.is_nan() { f64::INFINITY } else { res });
                residual_points += 1;
            }
        }
    }

    let mut log_ratio = f64::NEG_INFINITY;
    let mut domination_points = 0;
    for dir in directions(n, cfg.direction_order) {
        for i in 0..cfg.radial {
            let rad = r * i as f64 / cfg.radial as f64;
            let x = scaled_point(&dir, rad);
            for j in 0..cfg.vertical {
                let y = -h + (j as f64 + 0.5) * 2.0 * h / cfg.vertical as f64;
                let lm = s.log_modulus(&x, y);
                domination_points += 1;
                if lm == f64::NEG_INFINITY {
                    continue;
                }
                let d = lm - s.profile.log_value(y);
                log_ratio = log_ratio.max(if d.is_nan() { f64::INFINITY } else { d });
            }
        }
    }
    let ratio_max = log_ratio.exp();
    MembershipReport {
        residual_max,
        ratio_max,
        residual_points,
        domination_points,
        ok: residual_max <= cfg.residual_tol && log_ratio <= 1e-9f64.ln_1p(),
    }
}

/// Axis-aligned target `{|x| ≤ rx, |y| ≤ hy}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub rx: f64,
    pub hy: f64,
}

impl Target {
    pub fn of(spec: &CylinderSpec) -> Self {
        let (rx, hy) = spec.target();
        Self { rx, hy }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupMeasurement {
    #[serde(serialize_with = "serialize_f64")]
    pub fine: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub coarse: f64,
    /// `|fine − coarse|`, an estimate of the grid under-sampling.
    #[serde(serialize_with = "serialize_f64")]
    pub bias: f64,
}

impl SupMeasurement {
    /// Fine-grid sup plus the Richardson bias.
    pub fn value(&self) -> f64 {
        self.fine + self.bias
    }
}

fn grid_sup(s: &HarmonicSample, k: Target, cfg: &GridConfig, stride: usize, modulus: bool) -> f64 {
    let n = s.spec.n as usize;
    let nr = cfg.radial.max(2);
    let ny = cfg.vertical.max(2);
    let mut best = 0.0f64;
    for dir in directions(n, cfg.direction_order) {
        for i in (0..nr).step_by(stride) {
            let x = scaled_point(&dir, k.rx * i as f64 / (nr - 1) as f64);
            for j in (0..ny).step_by(stride) {
                let y = -k.hy + 2.0 * k.hy * j as f64 / (ny - 1) as f64;
                let v = if modulus { s.modulus(&x, y) } else { s.field(&x, y).abs() };
                best = best.max(v);
            }
        }
    }
    best
}

/// `max |u|` over `K` on a directions × radial × vertical grid, with the
/// coarse grid (every other node) giving the Richardson bias.
pub fn measured_sup(s: &HarmonicSample, k: Target, cfg: &GridConfig) -> SupMeasurement {
    let fine = grid_sup(s, k, cfg, 1, false);
    let coarse = grid_sup(s, k, cfg, 2, false);
    SupMeasurement { fine, coarse, bias: (fine - coarse).abs() }
}

/// As [`measured_sup`] but of `|f|` for the holomorphic planar families.
pub fn measured_sup_modulus(s: &HarmonicSample, k: Target, cfg: &GridConfig) -> SupMeasurement {
    let fine = grid_sup(s, k, cfg, 1, true);
    let coarse = grid_sup(s, k, cfg, 2, true);
    SupMeasurement { fine, coarse, bias: (fine - coarse).abs() }
}

/// Whether `sup ≤ bound`, compared in log or log-log form when the bound overflows.
pub fn within_bound(sup: f64, cert: &BoundCertificate) -> bool {
    if let Some(b) = cert.final_bound {
        return sup <= b;
    }
    let ls = sup.ln();
    if cert.log_bound.is_finite() {
        ls <= cert.log_bound
    } else {
        ls <= 0.0 || ls.ln() <= cert.loglog_bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecEntry {
    pub n: u32,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "H")]
    pub height: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub name: String,
    pub spec: SpecEntry,
    pub family: SampleFamily,
    /// Majorant text form overriding the declared one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub majorant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub majorant_scale: Option<f64>,
}

impl RegistryEntry {
    pub fn build(&self) -> Result<HarmonicSample> {
        let sp = &self.spec;
        let spec = CylinderSpec::new(sp.n, sp.radius, sp.height, sp.eps)?;
        let mut s = match &self.family {
            SampleFamily::HarmonicPolynomial { terms } => make_polynomial(terms.clone(), spec)?,
            SampleFamily::BoundaryBlowup2D { c, b } => make_boundary_blowup_on(*c, *b, spec)?,
            SampleFamily::LateralBlowup2D { c } => make_lateral_blowup(*c, spec)?,
            SampleFamily::AxialFrom2D { generator } => make_axial_from_2d(generator.clone(), spec)?,
            SampleFamily::PointSourceShell { pole } => make_point_source(pole.clone(), spec)?,
        };
        s.name = self.name.clone();
        if let Some(text) = &self.majorant {
            s = s.with_majorant(Majorant::parse(text, spec.height)?);
        }
        if let Some(f) = self.majorant_scale {
            s = s.with_majorant_scale(f)?;
        }
        Ok(s)
    }
}

pub fn parse_registry(json: &str) -> Result<Vec<RegistryEntry>> {
    Ok(serde_json::from_str(json)?)
}

pub fn load_registry(path: &Path) -> Result<Vec<RegistryEntry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CertError::Io(format!("cannot read registry {}: {e}", path.display())))?;
    parse_registry(&text)
}

const DEFAULT_REGISTRY: &str = include_str!("../data/default_registry.json");

/// Built-in registry spanning dimensions 2 through 7.
pub fn default_registry() -> Vec<RegistryEntry> {
    parse_registry(DEFAULT_REGISTRY).expect("built-in registry parses")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub name: String,
    pub n: u32,
    pub membership: Option<MembershipReport>,
    pub sup: Option<SupMeasurement>,
    pub certificate: Option<BoundCertificate>,
    pub error: Option<String>,
    pub sound: bool,
}

/// Membership, measured sup over `K` and certificate comparison for one entry.
pub fn check_entry(entry: &RegistryEntry, cfg: &GridConfig) -> SampleReport {
    let mut report = SampleReport {
        name: entry.name.clone(),
        n: entry.spec.n,
        membership: None,
        sup: None,
        certificate: None,
        error: None,
        sound: false,
    };
    let sample = match entry.build() {
        Ok(s) => s,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let membership = verify_membership(&sample, cfg);
    report.membership = Some(membership);
    let sup = measured_sup(&sample, Target::of(&sample.spec), cfg);
    report.sup = Some(sup);
    let Some(majorant) = &sample.majorant else {
        report.error = Some("profile has no non-increasing majorant on this cylinder".into());
        return report;
    };
    match certify_bound(&sample.spec, majorant) {
        Ok(cert) => {
            report.sound = membership.ok && within_bound(sup.value(), &cert);
            report.certificate = Some(cert);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Pretty JSON array of reports with the fixed float formatting.
pub fn reports_to_json(reports: &[SampleReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

//! Structural transforms: axial symmetrization of a harmonic function on an
//! n-cylinder, the lifts `ρ·u` (R⁴ → R²) and `ρᵏe^{ikφ}·u` (R^{2k+3} → R³),
//! the holomorphic gradient `v_ρ − i·v_h`, and explicit derivative bounds.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{CertError, Result};
use crate::majorant::{cauchy_branch, cauchy_prefactor, derived_majorant, CauchyBranch, Majorant};
use crate::quad::gauss_gegenbauer;

type Scalar2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Gradient2 = Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>;

/// A real function on `{(x, y) : |x| < R, |y| < H}` with `x ∈ R^{n−1}`.
pub trait CylinderField: Send + Sync {
    fn dimension(&self) -> usize;
    fn radius(&self) -> f64;
    fn height(&self) -> f64;
    /// `x` has `n − 1` coordinates.
    fn eval(&self, x: &[f64], y: f64) -> f64;
}

/// Centered 5-point Laplacian of `f` at `(a, b)`.
pub(crate) fn laplacian_2d(f: &dyn Fn(f64, f64) -> f64, a: f64, b: f64, s: f64) -> f64 {
    (f(a + s, b) + f(a - s, b) + f(a, b + s) + f(a, b - s) - 4.0 * f(a, b)) / (s * s)
}

/// Axially symmetric function `u(ρ, h)` of an n-dimensional cylinder.
#[derive(Clone)]
pub struct AxialField {
    pub dimension: usize,
    /// Radial extent `ε` of the domain `ρ < ε`.
    pub radial_extent: f64,
    pub height: f64,
    value: Scalar2,
    gradient: Option<Gradient2>,
}

impl fmt::Debug for AxialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AxialField")
            .field("dimension", &self.dimension)
            .field("radial_extent", &self.radial_extent)
            .field("height", &self.height)
            .field("closed_form_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl AxialField {
    pub fn new<F>(dimension: usize, radial_extent: f64, height: f64, value: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if dimension < 2 || !(radial_extent > 0.0) || !(height > 0.0) {
            return Err(CertError::Domain(format!(
                "axial field needs n ≥ 2 and a non-empty domain (n = {dimension}, ε = {radial_extent}, H = {height})"
            )));
        }
        Ok(Self { dimension, radial_extent, height, value: Arc::new(value), gradient: None })
    }

    /// Attaches the closed-form gradient `(u_ρ, u_h)`.
    pub fn with_gradient<G>(mut self, gradient: G) -> Self
    where
        G: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    /// `u(|ρ|, h)`.
    pub fn eval(&self, rho: f64, h: f64) -> f64 {
        (self.value)(rho.abs(), h)
    }

    pub fn gradient(&self, rho: f64, h: f64) -> Option<(f64, f64)> {
        self.gradient.as_ref().map(|g| g(rho, h))
    }

    /// `u_ρρ + u_hh + ((n−2)/ρ)·u_ρ` by centered differences; needs `ρ > step`.
    pub fn euler_darboux_residual(&self, rho: f64, h: f64, step: f64) -> f64 {
        let u = |a: f64, b: f64| self.eval(a, b);
        let lap = laplacian_2d(&u, rho, h, step);
        let u_rho = (u(rho + step, h) - u(rho - step, h)) / (2.0 * step);
        lap + (self.dimension as f64 - 2.0) / rho * u_rho
    }
}

/// Real function on a rectangle `(−ε, ε) × (−H, H)` in the `(ρ, h)` plane.
#[derive(Clone)]
pub struct PlanarField {
    pub halfwidth: f64,
    pub height: f64,
    value: Scalar2,
    gradient: Option<Gradient2>,
}

impl fmt::Debug for PlanarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanarField")
            .field("halfwidth", &self.halfwidth)
            .field("height", &self.height)
            .field("closed_form_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl PlanarField {
    pub fn new<F>(halfwidth: f64, height: f64, value: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self { halfwidth, height, value: Arc::new(value), gradient: None }
    }

    pub fn with_gradient<G>(mut self, gradient: G) -> Self
    where
        G: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn eval(&self, rho: f64, h: f64) -> f64 {
        (self.value)(rho, h)
    }

    pub fn has_closed_form_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn laplacian_residual(&self, rho: f64, h: f64, step: f64) -> f64 {
        laplacian_2d(&|a, b| self.eval(a, b), rho, h, step)
    }
}

/// Complex function `v(φ, ρ, h) = ρᵏe^{ikφ}·u(ρ, h)` on a 3-D cylinder.
#[derive(Clone)]
pub struct SpatialField {
    pub k: u32,
    pub radial_extent: f64,
    pub height: f64,
    profile: Scalar2,
}

impl fmt::Debug for SpatialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpatialField")
            .field("k", &self.k)
            .field("radial_extent", &self.radial_extent)
            .field("height", &self.height)
            .finish()
    }
}

impl SpatialField {
    pub fn eval(&self, phi: f64, rho: f64, h: f64) -> Complex64 {
        Complex64::from_polar(rho.powi(self.k as i32), self.k as f64 * phi) * (self.profile)(rho, h)
    }

    /// Same function in Cartesian coordinates, `(x₁ + i x₂)ᵏ·u(|x|, h)`.
    pub fn eval_cartesian(&self, x1: f64, x2: f64, h: f64) -> Complex64 {
        let rho = x1.hypot(x2);
        Complex64::new(x1, x2).powu(self.k) * (self.profile)(rho, h)
    }

    /// Modulus of the centered 7-point Laplacian in Cartesian coordinates.
    pub fn laplacian_residual(&self, x1: f64, x2: f64, h: f64, step: f64) -> f64 {
        let v = |a: f64, b: f64, c: f64| self.eval_cartesian(a, b, c);
        let sum = v(x1 + step, x2, h)
            + v(x1 - step, x2, h)
            + v(x1, x2 + step, h)
            + v(x1, x2 - step, h)
            + v(x1, x2, h + step)
            + v(x1, x2, h - step)
            - v(x1, x2, h) * 6.0;
        (sum / (step * step)).norm()
    }
}

/// Product rule on the unit sphere `S^{d−1}`: unit vectors with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Exact for polynomials of degree `≤ 2·order − 1` restricted to the sphere.
    ///
    /// `S¹` uses `2·order` equispaced azimuths. For `d ≥ 3` the last coordinate
    /// `t` gets a Gauss–Gegenbauer rule for the weight `(1 − t²)^{(d−3)/2}` and the
    /// remaining coordinates recurse on `S^{d−2}` of radius `√(1 − t²)`.
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        if dim == 0 || order == 0 {
            return Err(CertError::Config(format!(
                "sphere rule needs d ≥ 1 and order ≥ 1 (d = {dim}, order = {order})"
            )));
        }
        let (points, weights) = match dim {
            1 => (vec![vec![1.0], vec![-1.0]], vec![0.5, 0.5]),
            2 => {
                let n = 2 * order;
                let pts = (0..n)
                    .map(|j| {
                        let a = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                        vec![a.cos(), a.sin()]
                    })
                    .collect();
                (pts, vec![1.0 / n as f64; n])
            }
            _ => {
                let (t, w) = gauss_gegenbauer(order, 0.5 * (dim as f64 - 3.0));
                let total: f64 = w.iter().sum();
                let sub = SphereRule::new(dim - 1, order)?;
                let mut pts = Vec::with_capacity(t.len() * sub.points.len());
                let mut wts = Vec::with_capacity(pts.capacity());
                for (ti, wi) in t.iter().zip(&w) {
                    let s = (1.0 - ti * ti).max(0.0).sqrt();
                    for (p, wp) in sub.points.iter().zip(&sub.weights) {
                        let mut q: Vec<f64> = p.iter().map(|c| c * s).collect();
                        q.push(*ti);
                        pts.push(q);
                        wts.push(wi / total * wp);
                    }
                }
                (pts, wts)
            }
        };
        Ok(Self { dim, points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetrizeConfig {
    /// Per-factor quadrature order.
    pub order: usize,
    /// Polynomial degree that must be integrated exactly.
    pub exact_degree: usize,
}

impl Default for SymmetrizeConfig {
    fn default() -> Self {
        Self { order: 9, exact_degree: 16 }
    }
}

/// Spherical mean `w(ρ, h)` of `u(x0 + ρω, h)` over `ω ∈ S^{n−2}`.
///
/// For `n = 2` the "sphere" is the pair `{±1}`. The axial domain is `ρ < ε`.
pub fn symmetrize(u: Arc<dyn CylinderField>, x0: &[f64], eps: f64, cfg: &SymmetrizeConfig) -> Result<AxialField> {
    let n = u.dimension();
    if x0.len() + 1 != n {
        return Err(CertError::Domain(format!("base point has {} coordinates, expected {}", x0.len(), n - 1)));
    }
    if cfg.order == 0 || 2 * cfg.order < cfg.exact_degree + 1 {
        return Err(CertError::Config(format!(
            "sphere quadrature of order {} is exact only to degree {}, {} requested",
            cfg.order,
            (2 * cfg.order).saturating_sub(1),
            cfg.exact_degree
        )));
    }
    let norm = x0.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(eps > 0.0) || !(norm < u.radius() - eps) {
        return Err(CertError::Geometry(format!(
            "axis through |x0| = {norm} with ε = {eps} leaves the cylinder of radius {}",
            u.radius()
        )));
    }
    let rule = Arc::new(SphereRule::new(n - 1, cfg.order)?);
    let base = x0.to_vec();
    let height = u.height();
    let value = move |rho: f64, h: f64| {
        let mut x = vec![0.0; base.len()];
        let mut acc = 0.0;
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            for ((xi, bi), pi) in x.iter_mut().zip(&base).zip(p) {
                *xi = bi + rho * pi;
            }
            acc += w * u.eval(&x, h);
        }
        acc
    };
    AxialField::new(n, eps, height, value)
}

/// `ṽ(ρ, h) = ρ·u(|ρ|, h)` for an axial field in R⁴; odd in `ρ` and harmonic in the plane.
pub fn lift_4_to_2(u: &AxialField) -> Result<PlanarField> {
    if u.dimension != 4 {
        return Err(CertError::Domain(format!("ρ·u lift needs n = 4, got {}", u.dimension)));
    }
    let val = u.clone();
    let mut out = PlanarField::new(u.radial_extent, u.height, move |rho, h| rho * val.eval(rho, h));
    if u.gradient.is_some() {
        let g = u.clone();
        // ṽ_ρ = u + |ρ|·u_ρ(|ρ|, h), ṽ_h = ρ·u_h(|ρ|, h)
        out = out.with_gradient(move |rho, h| {
            let (ur, uh) = g.gradient(rho.abs(), h).expect("gradient attached");
            (g.eval(rho, h) + rho.abs() * ur, rho * uh)
        });
    }
    Ok(out)
}

/// `v = ρᵏe^{ikφ}·u(ρ, h)` for an axial field in R^{2k+3}; harmonic in R³.
pub fn lift_odd_to_3(u: &AxialField, k: u32) -> Result<SpatialField> {
    if k == 0 || u.dimension != 2 * k as usize + 3 {
        return Err(CertError::Domain(format!(
            "ρᵏe^{{ikφ}}·u lift needs k ≥ 1 and n = 2k + 3 (k = {k}, n = {})",
            u.dimension
        )));
    }
    let val = u.clone();
    Ok(SpatialField {
        k,
        radial_extent: u.radial_extent,
        height: u.height,
        profile: Arc::new(move |rho, h| val.eval(rho, h)),
    })
}

/// `f(ρ + ih) = v_ρ − i·v_h`, holomorphic whenever `v` is harmonic.
#[derive(Clone)]
pub struct HolomorphicGradient {
    field: PlanarField,
    /// Step of the centered differences used when no closed form is attached.
    pub fd_step: f64,
}

impl fmt::Debug for HolomorphicGradient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HolomorphicGradient").field("field", &self.field).field("fd_step", &self.fd_step).finish()
    }
}

impl HolomorphicGradient {
    pub fn eval(&self, rho: f64, h: f64) -> Complex64 {
        let (vr, vh) = match &self.field.gradient {
            Some(g) => g(rho, h),
            None => {
                let s = self.fd_step;
                let v = |a, b| self.field.eval(a, b);
                ((v(rho + s, h) - v(rho - s, h)) / (2.0 * s), (v(rho, h + s) - v(rho, h - s)) / (2.0 * s))
            }
        };
        Complex64::new(vr, -vh)
    }

    /// `|∂f/∂ζ̄|` estimated by centered differences of `f`.
    pub fn cauchy_riemann_residual(&self, rho: f64, h: f64, step: f64) -> f64 {
        let d_rho = (self.eval(rho + step, h) - self.eval(rho - step, h)) / (2.0 * step);
        let d_h = (self.eval(rho, h + step) - self.eval(rho, h - step)) / (2.0 * step);
        // ∂/∂ζ̄ = (∂_ρ + i∂_h)/2
        ((d_rho + Complex64::i() * d_h) * 0.5).norm()
    }
}

pub fn gradient_to_holomorphic(v: &PlanarField) -> HolomorphicGradient {
    HolomorphicGradient { field: v.clone(), fd_step: 1e-5 }
}

/// `(n·k)ᵏ / rᵏ`: `k` nested gradient estimates `|∇v|(x) ≤ (n/s)·sup_{B_s(x)}|v|`
/// with `s = r/k` bound `|∂ᵏv/∂ρᵏ(x)|` by this times `sup_{B_r(x)}|v|`.
pub fn derivative_bound_constant(k: u32, r: f64, n: u32) -> Result<f64> {
    if k == 0 || !(r > 0.0) || n == 0 {
        return Err(CertError::Domain(format!(
            "derivative bound needs k ≥ 1, r > 0, n ≥ 1 (k = {k}, r = {r}, n = {n})"
        )));
    }
    Ok((n as f64 * k as f64 / r).powi(k as i32))
}

/// Natural log of [`derivative_bound_constant`], finite for any size of `k`.
pub fn ln_derivative_bound_constant(k: u32, r: f64, n: u32) -> Result<f64> {
    derivative_bound_constant(1, r, n)?;
    Ok(k as f64 * (n as f64 * k as f64 / r).ln())
}

/// `M̃` for the holomorphic gradient, with the Cauchy branch bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyGradientMajorant {
    pub majorant: Majorant,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchRecord {
    pub h: f64,
    pub branch: CauchyBranch,
    pub prefactor: f64,
}

impl CauchyGradientMajorant {
    /// Height where the two Cauchy estimates agree.
    pub fn crossover(&self) -> f64 {
        self.eps
    }

    pub fn branch_at(&self, h: f64) -> BranchRecord {
        BranchRecord { h, branch: cauchy_branch(self.eps, h), prefactor: cauchy_prefactor(self.eps, h) }
    }
}

pub fn cauchy_gradient_majorant(m: &Majorant, eps: f64) -> Result<CauchyGradientMajorant> {
    Ok(CauchyGradientMajorant { majorant: derived_majorant(m, eps)?, eps })
}

impl fmt::Display for CauchyBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CauchyBranch::NearAxis => "h <= eps",
            CauchyBranch::Interior => "h >= eps",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    struct Poly<F: Fn(&[f64], f64) -> f64 + Send + Sync>(usize, F);

    impl<F: Fn(&[f64], f64) -> f64 + Send + Sync> CylinderField for Poly<F> {
        fn dimension(&self) -> usize {
            self.0
        }
        fn radius(&self) -> f64 {
            1.0
        }
        fn height(&self) -> f64 {
            1.0
        }
        fn eval(&self, x: &[f64], y: f64) -> f64 {
            (self.1)(x, y)
        }
    }

    fn sym(n: usize, f: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> AxialField {
        symmetrize(Arc::new(Poly(n, f)), &vec![0.0; n - 1], 0.5, &SymmetrizeConfig::default()).unwrap()
    }

    #[test]
    fn sphere_rule_weights_and_norms() {
        for d in 1..=6 {
            let r = SphereRule::new(d, 5).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13, "d = {d}");
            for p in &r.points {
                assert!((p.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn linear_function_averages_to_zero() {
        let w = sym(4, |x, _| x[0]);
        for rho in [0.1, 0.3, 0.45] {
            assert!(w.eval(rho, 0.2).abs() < 1e-14);
        }
    }

    #[test]
    fn square_averages_to_rho_squared_over_three() {
        let w = sym(4, |x, _| x[0] * x[0]);
        // independent oracle: Monte-Carlo average over S² with an LCG and Gaussian directions
        let mut state: u64 = 0x2545_F491_4F6C_DD1D;
        let mut unif = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 + 0.5) / (1u64 << 53) as f64
        };
        let samples = 200_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let g: Vec<f64> = (0..3)
                .map(|_| {
                    let (a, b) = (unif(), unif());
                    (-2.0 * a.ln()).sqrt() * (2.0 * std::f64::consts::PI * b).cos()
                })
                .collect();
            let r2: f64 = g.iter().map(|c| c * c).sum();
            acc += g[0] * g[0] / r2;
        }
        let mc = acc / samples as f64;
        let rho = 0.4;
        assert!((w.eval(rho, 0.0) - rho * rho * mc).abs() < 0.01 * rho * rho);
        assert!((w.eval(rho, 0.0) - rho * rho / 3.0).abs() < 1e-14);
    }

    #[test]
    fn axis_value_and_symmetric_input() {
        let w = sym(5, |x, y| x.iter().map(|c| c * c).sum::<f64>() - 3.0 * y * y + x[1]);
        assert!((w.eval(0.0, 0.3) + 0.27).abs() < 1e-12);
        assert!((w.eval(0.2, 0.3) - (0.04 - 0.27)).abs() < 1e-12);
    }

    #[test]
    fn high_degree_exactness_in_every_dimension() {
        // mean of x₁⁴ over S^{d−1} is 3/(d(d+2))
        for n in 3..=7 {
            let d = (n - 1) as f64;
            let w = sym(n, |x, _| x[0].powi(4));
            assert!((w.eval(0.5, 0.0) - 0.0625 * 3.0 / (d * (d + 2.0))).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn symmetrize_rejects_bad_configuration() {
        let f: Arc<dyn CylinderField> = Arc::new(Poly(4, |x: &[f64], _| x[0]));
        let low = SymmetrizeConfig { order: 3, exact_degree: 16 };
        assert!(matches!(symmetrize(f.clone(), &[0.0; 3], 0.5, &low), Err(CertError::Config(_))));
        assert!(matches!(
            symmetrize(f.clone(), &[0.6, 0.0, 0.0], 0.5, &SymmetrizeConfig::default()),
            Err(CertError::Geometry(_))
        ));
        assert!(symmetrize(f, &[0.0; 2], 0.5, &SymmetrizeConfig::default()).is_err());
    }

    #[test]
    fn lift_4_to_2_examples() {
        let u =
            AxialField::new(4, 0.5, 1.0, |r, h| 3.0 * h * h - r * r).unwrap().with_gradient(|r, h| (-2.0 * r, 6.0 * h));
        assert!(u.euler_darboux_residual(0.2, 0.1, 1e-3).abs() < 1e-8);
        let v = lift_4_to_2(&u).unwrap();
        for (r, h) in [(0.3, 0.2), (-0.1, 0.7), (0.45, -0.4)] {
            assert!((v.eval(r, h) - (3.0 * r * h * h - r * r * r)).abs() < 1e-14);
            assert_eq!(v.eval(-r, h), -v.eval(r, h));
            assert!(v.laplacian_residual(r, h, 1e-2).abs() < 1e-9);
        }
        let one = lift_4_to_2(&AxialField::new(4, 0.5, 1.0, |_, _| 1.0).unwrap()).unwrap();
        assert_eq!(one.eval(0.3, 0.1), 0.3);
        let lin = lift_4_to_2(&AxialField::new(4, 0.5, 1.0, |_, h| h).unwrap()).unwrap();
        assert!((lin.eval(0.3, 0.1) - 0.03).abs() < 1e-16);
        assert!(lift_4_to_2(&AxialField::new(5, 0.5, 1.0, |_, _| 1.0).unwrap()).is_err());
    }

    #[test]
    fn lift_odd_to_3_examples() {
        let u = AxialField::new(5, 0.5, 1.0, |r, h| r * r - 4.0 * h * h).unwrap();
        assert!(u.euler_darboux_residual(0.2, 0.1, 1e-3).abs() < 1e-8);
        let v = lift_odd_to_3(&u, 1).unwrap();
        let (x, y, h) = (0.2, -0.1, 0.3);
        let want = Complex64::new(x, y) * (x * x + y * y - 4.0 * h * h);
        assert!((v.eval_cartesian(x, y, h) - want).norm() < 1e-15);
        let phi = y.atan2(x);
        assert!((v.eval(phi, x.hypot(y), h) - want).norm() < 1e-15);
        assert!(v.laplacian_residual(x, y, h, 1e-2) < 1e-9);
        assert!(v.laplacian_residual(0.0, 0.0, h, 1e-2) < 1e-9);

        let one7 = AxialField::new(7, 0.5, 1.0, |_, _| 1.0).unwrap();
        let v2 = lift_odd_to_3(&one7, 2).unwrap();
        assert!((v2.eval_cartesian(x, y, h) - Complex64::new(x, y).powu(2)).norm() < 1e-15);
        assert!(lift_odd_to_3(&one7, 1).is_err());
    }

    #[test]
    fn holomorphic_gradient_examples() {
        let rho = PlanarField::new(0.5, 1.0, |r, _| r).with_gradient(|_, _| (1.0, 0.0));
        assert_eq!(gradient_to_holomorphic(&rho).eval(0.2, 0.3), Complex64::new(1.0, 0.0));

        let rh = PlanarField::new(0.5, 1.0, |r, h| r * h);
        let f = gradient_to_holomorphic(&rh).eval(0.2, 0.3);
        assert!((f - Complex64::new(0.3, -0.2)).norm() < 1e-9);
        assert!((f.norm() - Complex64::new(0.2, 0.3).norm()).abs() < 1e-9);

        let cubic = PlanarField::new(0.5, 1.0, |r, h| 3.0 * r * h * h - r * r * r)
            .with_gradient(|r, h| (3.0 * h * h - 3.0 * r * r, 6.0 * r * h));
        let g = gradient_to_holomorphic(&cubic);
        for (r, h) in [(0.1, 0.2), (-0.3, 0.4), (0.45, -0.7)] {
            // oracle: f = −3·(ζ̄)²·(−1) with ζ = ρ + ih, i.e. 3(h² − ρ²) − 6iρh
            let want = Complex64::new(3.0 * (h * h - r * r), -6.0 * r * h);
            assert!((g.eval(r, h) - want).norm() < 1e-14);
            assert!(g.cauchy_riemann_residual(r, h, 1e-3) < 1e-10);
        }
    }

    #[test]
    fn derivative_constants() {
        assert_eq!(derivative_bound_constant(1, 1.0, 3).unwrap(), 3.0);
        let chain = (3.0 / 0.5) * (3.0 / 0.5);
        assert_eq!(derivative_bound_constant(2, 1.0, 3).unwrap(), chain);
        assert_eq!(derivative_bound_constant(1, 0.5, 3).unwrap(), 6.0);
        assert!(derivative_bound_constant(0, 1.0, 3).is_err());
        assert!((ln_derivative_bound_constant(3, 0.25, 3).unwrap() - 36f64.powi(3).ln()).abs() < 1e-12);
    }

    #[test]
    fn cauchy_branches() {
        let m = Majorant::constant(E, 1.0).unwrap();
        let g = cauchy_gradient_majorant(&m, 0.5).unwrap();
        let near = g.branch_at(0.1);
        assert_eq!(near.branch, CauchyBranch::NearAxis);
        assert!((near.prefactor - 1000.0).abs() < 1e-9);
        let far = g.branch_at(0.9);
        assert_eq!(far.branch, CauchyBranch::Interior);
        assert!((far.prefactor - 200.0).abs() < 1e-10);
        let cross = g.branch_at(g.crossover());
        assert!((cross.prefactor - 200.0).abs() < 1e-10);
        assert!(cauchy_gradient_majorant(&m, 0.0).is_err());
    }

    /// Harmonic polynomials in R³ from Re/Im of (x₃ + i x₁)^d.
    fn harmonic_3d(d: u32, imag: bool) -> impl Fn(f64, f64, f64) -> f64 {
        move |x1, _x2, x3| {
            let z = Complex64::new(x3, x1).powu(d);
            if imag {
                z.im
            } else {
                z.re
            }
        }
    }

    proptest! {
        #[test]
        fn derivative_bound_is_admissible(d in 1u32..=6, k in 1u32..=4, imag: bool,
                                          cx in -0.3f64..0.3, cz in -0.3f64..0.3, r in 0.2f64..1.0) {
            // ∂ᵏ/∂x₁ᵏ at the center by finite differences versus the bound times a sampled sup
            let v = harmonic_3d(d, imag);
            let rule = SphereRule::new(3, 24).unwrap();
            let mut sup = 0.0f64;
            for p in &rule.points {
                sup = sup.max(v(cx + r * p[0], r * p[1], cz + r * p[2]).abs());
            }
            // exact k-th derivative along x₁ of (x₃ + i x₁)^d
            let z = Complex64::new(cz, cx);
            let deriv = if k > d {
                Complex64::new(0.0, 0.0)
            } else {
                let fall: f64 = (0..k).map(|j| (d - j) as f64).product();
                Complex64::i().powu(k) * z.powu(d - k) * fall
            };
            let dk = if imag { deriv.im } else { deriv.re };
            let bound = derivative_bound_constant(k, r, 3).unwrap() * sup;
            prop_assert!(dk.abs() <= bound * (1.0 + 1e-9) + 1e-12, "{} > {}", dk.abs(), bound);
        }
    }
}

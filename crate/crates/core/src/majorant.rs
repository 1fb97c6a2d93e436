//! Decreasing majorants `M: (0, H) → [0, ∞)` and the quantities built from them:
//! the log-log integral, the distribution function of `log⁺M`, the dyadic tail
//! envelopes used to close Domar sums, and the Cauchy-derived majorant `M̃`.
//!
//! Every family is handled in log space (`ln M` and `ln ln M`) so that values such
//! as `exp(exp(y^-α))` never need to be materialised.

use std::f64::consts::LN_2;
use std::fmt;
use std::path::Path;

use crate::error::{CertError, Result};
use crate::quad::adaptive_simpson;

/// Absolute constant standing in for the Cauchy-estimate constants.
pub const CAUCHY_CONSTANT: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `M ≡ c`.
    Constant(f64),
    /// `M(y) = exp(amplitude · y^-beta)`.
    ExpBlowup { beta: f64, amplitude: f64 },
    /// `M(y) = exp(exp(y^-alpha))`.
    DoubleExpBlowup { alpha: f64 },
    /// Piecewise constant, right-continuous: `M(y) = v_j` on `[y_j, y_{j+1})`,
    /// `v_0` below the first breakpoint and `v_last` up to `H`.
    Tabulated(Vec<(f64, f64)>),
    /// `M(y) = factor · inner(y)`.
    Scaled { inner: Box<Majorant>, factor: f64 },
    /// `M̃(h) = max(1, ε) · max(100/ε, 100/h) · inner(h/2)`.
    Derived { inner: Box<Majorant>, eps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Majorant {
    family: Family,
    height: f64,
}

/// Threshold `t` and halfwidth `b` of a distribution-function query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionQuery {
    pub threshold: f64,
    pub halfwidth: f64,
}

impl DistributionQuery {
    pub fn new(threshold: f64, halfwidth: f64) -> Result<Self> {
        if !(threshold > 0.0) || !(halfwidth > 0.0) {
            return Err(CertError::Domain(format!(
                "distribution query needs t > 0 and b > 0 (got t = {threshold}, b = {halfwidth})"
            )));
        }
        Ok(Self { threshold, halfwidth })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub tol: f64,
    pub max_depth: u32,
    /// The singular head is `(0, head_fraction · H)`.
    pub head_fraction: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_depth: 48, head_fraction: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogIntegral {
    pub value: f64,
    pub finite: bool,
}

/// Which Cauchy estimate produced the prefactor of `M̃` at a given height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CauchyBranch {
    /// `|h| ≤ ε`: disc of radius `|h|/2`, prefactor `100/|h|`.
    NearAxis,
    /// `|h| ≥ ε`: disc of radius `ε/4`, prefactor `100/ε`.
    Interior,
}

fn domain_err(msg: String) -> CertError {
    CertError::Domain(msg)
}

impl Majorant {
    pub fn constant(c: f64, height: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(domain_err(format!("constant majorant needs finite c ≥ 0, got {c}")));
        }
        Self::with_height(Family::Constant(c), height)
    }

    pub fn exp_blowup(beta: f64, height: f64) -> Result<Self> {
        Self::exp_blowup_scaled(beta, 1.0, height)
    }

    /// `exp(amplitude · y^-beta)`; the amplitude form is what rearranging a
    /// one-sided boundary blowup produces.
    pub fn exp_blowup_scaled(beta: f64, amplitude: f64, height: f64) -> Result<Self> {
        if !(beta > 0.0) || !(amplitude > 0.0) || !beta.is_finite() || !amplitude.is_finite() {
            return Err(domain_err(format!("expblowup needs beta > 0 and a > 0, got beta = {beta}, a = {amplitude}")));
        }
        Self::with_height(Family::ExpBlowup { beta, amplitude }, height)
    }

    pub fn double_exp(alpha: f64, height: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(domain_err(format!("doubleexp needs alpha > 0, got {alpha}")));
        }
        Self::with_height(Family::DoubleExpBlowup { alpha }, height)
    }

    pub fn tabulated(points: Vec<(f64, f64)>, height: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(domain_err("tabulated majorant needs at least one breakpoint".into()));
        }
        for (i, &(y, v)) in points.iter().enumerate() {
            if !(y > 0.0 && y < height) {
                return Err(domain_err(format!("breakpoint y = {y} outside (0, {height})")));
            }
            if !(v >= 0.0) || !v.is_finite() {
                return Err(domain_err(format!("breakpoint value {v} must be finite and ≥ 0")));
            }
            if i > 0 {
                let (py, pv) = points[i - 1];
                if !(y > py) {
                    return Err(domain_err("breakpoints must be strictly increasing in y".into()));
                }
                if v > pv {
                    return Err(domain_err("breakpoint values must be non-increasing".into()));
                }
            }
        }
        Self::with_height(Family::Tabulated(points), height)
    }

    /// Reads a tabulated majorant from a CSV file with columns `y,value`.
    pub fn tabulated_from_csv(path: &Path, height: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| CertError::Parse(format!("short row in {}", path.display())))?
                    .parse::<f64>()
                    .map_err(|e| CertError::Parse(e.to_string()))
            };
            points.push((parse(0)?, parse(1)?));
        }
        Self::tabulated(points, height)
    }

    pub fn scaled(inner: Majorant, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(domain_err(format!("scale factor must be positive, got {factor}")));
        }
        let height = inner.height;
        Ok(Self { family: Family::Scaled { inner: Box::new(inner), factor }, height })
    }

    fn with_height(family: Family, height: f64) -> Result<Self> {
        if !(height > 0.0) || !height.is_finite() {
            return Err(domain_err(format!("majorant height must be positive, got {height}")));
        }
        Ok(Self { family, height })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Same family on a different argument range.
    pub fn with_domain_height(&self, height: f64) -> Result<Self> {
        let mut m = Self::with_height(self.family.clone(), height)?;
        if let Family::Tabulated(points) = &m.family {
            m = Self::tabulated(points.clone(), height)?;
        }
        Ok(m)
    }

    /// `M ≡ 0` (possibly wrapped).
    pub fn is_zero(&self) -> bool {
        match &self.family {
            Family::Constant(c) => *c == 0.0,
            Family::Tabulated(p) => p[0].1 == 0.0,
            Family::Scaled { inner, .. } | Family::Derived { inner, .. } => inner.is_zero(),
            _ => false,
        }
    }

    /// `M(y)` for `y ∈ (0, H)`.
    pub fn evaluate(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y < self.height) {
            return Err(domain_err(format!("y = {y} outside (0, {})", self.height)));
        }
        Ok(self.value(y))
    }

    fn value(&self, y: f64) -> f64 {
        match &self.family {
            Family::Constant(c) => *c,
            Family::Tabulated(points) => tabulated_value(points, y),
            Family::Scaled { inner, factor } => factor * inner.value(y),
            Family::Derived { inner, eps } => cauchy_prefactor(*eps, y) * inner.value(0.5 * y),
            _ => self.log_level(y).exp(),
        }
    }

    /// `ln M(y)`; `-∞` where `M = 0`, `+∞` on overflow.
    pub fn log_level(&self, y: f64) -> f64 {
        match &self.family {
            Family::Constant(c) => c.ln(),
            Family::ExpBlowup { beta, amplitude } => amplitude * y.powf(-beta),
            Family::DoubleExpBlowup { alpha } => y.powf(-alpha).exp(),
            Family::Tabulated(points) => tabulated_value(points, y).ln(),
            Family::Scaled { inner, factor } => factor.ln() + inner.log_level(y),
            Family::Derived { inner, eps } => derived_prefactor_ln(*eps, y) + inner.log_level(0.5 * y),
        }
    }

    /// `ln ln M(y)` where `ln M(y) > 0`, otherwise `-∞`.
    pub fn loglog_level(&self, y: f64) -> f64 {
        match &self.family {
            Family::Constant(c) => positive_ln(c.ln()),
            Family::ExpBlowup { beta, amplitude } => amplitude.ln() - beta * y.ln(),
            Family::DoubleExpBlowup { alpha } => y.powf(-alpha),
            Family::Tabulated(points) => positive_ln(tabulated_value(points, y).ln()),
            Family::Scaled { inner, factor } => shifted_loglog(factor.ln(), inner, y),
            Family::Derived { inner, eps } => shifted_loglog(derived_prefactor_ln(*eps, y), inner, 0.5 * y),
        }
    }

    /// Whether `ln M(y) ≥ s`, compared in log-log space when `s > 0`.
    fn level_at_least(&self, y: f64, s: f64) -> bool {
        if s > 0.0 {
            self.loglog_level(y) >= s.ln()
        } else {
            self.log_level(y) >= s
        }
    }

    /// `sup { y ∈ (0, H) : ln M(y) ≥ s }`, or 0 for an empty set.
    ///
    /// Closed form for the analytic families, breakpoint scan for `Tabulated`,
    /// monotone bisection for `Derived`. Bisection returns the upper end of its
    /// final bracket, so the result never underestimates the superlevel set.
    pub fn level_extent(&self, s: f64) -> f64 {
        let h = self.height;
        match &self.family {
            Family::Constant(c) => {
                if c.ln() >= s {
                    h
                } else {
                    0.0
                }
            }
            Family::ExpBlowup { beta, amplitude } => {
                if s <= 0.0 {
                    h
                } else {
                    (amplitude / s).powf(1.0 / beta).min(h)
                }
            }
            Family::DoubleExpBlowup { alpha } => {
                if s <= 1.0 {
                    h
                } else {
                    s.ln().powf(-1.0 / alpha).min(h)
                }
            }
            Family::Tabulated(points) => {
                let mut last = None;
                for (j, &(_, v)) in points.iter().enumerate() {
                    if v.ln() >= s {
                        last = Some(j);
                    }
                }
                match last {
                    None => 0.0,
                    Some(j) if j + 1 == points.len() => h,
                    Some(j) => points[j + 1].0,
                }
            }
            Family::Scaled { inner, factor } => inner.level_extent(s - factor.ln()).min(h),
            Family::Derived { .. } => self.level_extent_by_bisection(s),
        }
    }

    /// Bisection on the monotone predicate `ln M(y) ≥ s`, valid for every family.
    pub fn level_extent_by_bisection(&self, s: f64) -> f64 {
        self.bisect_extent(|y| self.level_at_least(y, s))
    }

    /// `level_extent(exp(ln_s))` for levels beyond the range of binary64.
    pub fn level_extent_ln(&self, ln_s: f64) -> f64 {
        if ln_s <= LN_DIRECT_LIMIT {
            return self.level_extent(ln_s.exp());
        }
        let h = self.height;
        match &self.family {
            // every finite tabulated or constant level sits below e^{710}
            Family::Constant(_) | Family::Tabulated(_) => 0.0,
            Family::ExpBlowup { beta, amplitude } => ((amplitude.ln() - ln_s) / beta).exp().min(h),
            Family::DoubleExpBlowup { alpha } => ln_s.powf(-1.0 / alpha).min(h),
            Family::Scaled { inner, factor } => inner.level_extent_ln(ln_shifted(ln_s, factor.ln())).min(h),
            Family::Derived { .. } => self.bisect_extent(|y| self.loglog_level(y) >= ln_s),
        }
    }

    /// `F` at the level `t = exp(ln_t)`.
    pub fn distribution_ln(&self, ln_t: f64, halfwidth: f64) -> f64 {
        2.0 * halfwidth.min(self.level_extent_ln(ln_t))
    }

    fn bisect_extent(&self, at_least: impl Fn(f64) -> bool) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let h = self.height;
        if at_least(h) {
            return h;
        }
        let (mut lo, mut hi) = (0.0f64, h);
        for _ in 0..4000 {
            let mid = if lo == 0.0 { 0.5 * hi } else { 0.5 * (lo + hi) };
            if !(mid > lo && mid < hi) {
                break;
            }
            if at_least(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            if lo > 0.0 && hi - lo <= 1e-15 * hi {
                break;
            }
            if lo == 0.0 && hi < 1e-300 {
                // below the representable resolution of the argument
                return 0.0;
            }
        }
        hi
    }

    /// `F(t) = λ₁{ y ∈ (−b, b) : log⁺ M(|y|) ≥ t } = 2·min(b, y*(t))`.
    pub fn distribution(&self, q: DistributionQuery) -> f64 {
        2.0 * q.halfwidth.min(self.level_extent(q.threshold))
    }

    /// Error unless every dyadic tail of the distribution function is summable.
    pub fn check_summable(&self) -> Result<()> {
        match &self.family {
            Family::DoubleExpBlowup { alpha } if *alpha >= 1.0 => {
                Err(CertError::NonSummableTail(format!("doubleexp with alpha = {alpha} ≥ 1 has no summable envelope")))
            }
            Family::Scaled { inner, .. } | Family::Derived { inner, .. } => inner.check_summable(),
            _ => Ok(()),
        }
    }

    /// Whether `∫₀^H log⁺log⁺M < ∞` (decided analytically per family).
    pub fn loglog_finite(&self) -> bool {
        match &self.family {
            Family::DoubleExpBlowup { alpha } => *alpha < 1.0,
            Family::Scaled { inner, .. } | Family::Derived { inner, .. } => inner.loglog_finite(),
            _ => true,
        }
    }

    /// Upper envelope of the superlevel extent `y*(τ)`, unclipped by the halfwidth.
    /// `None` when `τ` lies below the range where the envelope is established.
    pub(crate) fn extent_envelope(&self, tau: f64) -> Option<f64> {
        if self.is_zero() {
            return Some(0.0);
        }
        match &self.family {
            Family::Constant(_) | Family::Tabulated(_) => Some(self.level_extent(tau)),
            Family::ExpBlowup { beta, amplitude } => (tau > 0.0).then(|| (amplitude / tau).powf(1.0 / beta)),
            Family::DoubleExpBlowup { alpha } => (tau > 1.0).then(|| tau.ln().powf(-1.0 / alpha)),
            Family::Scaled { inner, factor } => {
                let shift = factor.ln();
                if shift <= 0.0 {
                    inner.extent_envelope(tau)
                } else {
                    inner.extent_envelope(tau - shift)
                }
            }
            Family::Derived { inner, eps } => {
                let pref = derived_axis_log(*eps);
                if !(0.5 * tau > pref) {
                    return None;
                }
                let s = soundness_factor(*eps);
                let inner_env = inner.extent_envelope(0.5 * tau)?;
                Some(CAUCHY_CONSTANT * s * (-0.5 * tau).exp() + 2.0 * inner_env)
            }
        }
    }

    /// Envelope term `E(t) = 2·y*_env(t)` used to decide truncation of Domar sums.
    pub(crate) fn envelope_term(&self, t: f64) -> Option<f64> {
        self.extent_envelope(t).map(|e| 2.0 * e)
    }

    /// Closed-form upper bound on `Σ_{i>m} F(2^i C)` (any halfwidth), or `None`
    /// while the envelope is not yet established at index `m`.
    pub(crate) fn dyadic_tail(&self, c: f64, m: i32) -> Option<f64> {
        if self.is_zero() {
            return Some(0.0);
        }
        let first = c * 2f64.powi(m + 1);
        match &self.family {
            Family::Constant(_) | Family::Tabulated(_) => {
                let top = self.log_level(f64::MIN_POSITIVE);
                (first > top).then_some(0.0)
            }
            Family::ExpBlowup { beta, amplitude } => {
                let p = 1.0 / beta;
                let ratio = 2f64.powf(-p);
                Some(2.0 * (amplitude / c).powf(p) * 2f64.powf(-(m as f64 + 1.0) * p) / (1.0 - ratio))
            }
            Family::DoubleExpBlowup { alpha } => {
                if *alpha >= 1.0 {
                    return None;
                }
                // Σ_{i>m} 2(ln C + i ln2)^{-p} ≤ 2∫_{m+1/2}^∞ (ln C + x ln2)^{-p} dx (convexity)
                let p = 1.0 / alpha;
                let l2 = LN_2;
                let x0 = c.ln() + (m as f64 + 0.5) * l2;
                (x0 > 0.0).then(|| 2.0 * x0.powf(1.0 - p) / (l2 * (p - 1.0)))
            }
            Family::Scaled { inner, factor } => {
                let shift = factor.ln();
                if shift <= 0.0 {
                    inner.dyadic_tail(c, m)
                } else if c * 2f64.powi(m) >= shift {
                    inner.dyadic_tail(0.5 * c, m)
                } else {
                    None
                }
            }
            Family::Derived { inner, eps } => {
                let pref = derived_axis_log(*eps);
                let lead = c * 2f64.powi(m);
                if !(lead > pref) || !(lead > 0.0) {
                    return None;
                }
                let s = soundness_factor(*eps);
                let q = (-lead).exp();
                let exp_part = 2.0 * CAUCHY_CONSTANT * s * q / (1.0 - q);
                Some(exp_part + 2.0 * inner.dyadic_tail(0.5 * c, m)?)
            }
        }
    }

    /// [`Self::extent_envelope`] at `τ = exp(ln_tau)`.
    pub(crate) fn extent_envelope_ln(&self, ln_tau: f64) -> Option<f64> {
        if ln_tau <= LN_DIRECT_LIMIT {
            return self.extent_envelope(ln_tau.exp());
        }
        if self.is_zero() {
            return Some(0.0);
        }
        match &self.family {
            Family::Constant(_) | Family::Tabulated(_) => Some(0.0),
            Family::ExpBlowup { beta, amplitude } => Some(((amplitude.ln() - ln_tau) / beta).exp()),
            Family::DoubleExpBlowup { alpha } => Some(ln_tau.powf(-1.0 / alpha)),
            Family::Scaled { inner, factor } => {
                let shift = factor.ln();
                if shift <= 0.0 {
                    inner.extent_envelope_ln(ln_tau)
                } else {
                    inner.extent_envelope_ln(ln_shifted(ln_tau, shift))
                }
            }
            // the exponential part 100·s·e^{−τ/2} underflows to zero here
            Family::Derived { inner, .. } => Some(2.0 * inner.extent_envelope_ln(ln_tau - LN_2)?),
        }
    }

    pub(crate) fn envelope_term_ln(&self, ln_t: f64) -> Option<f64> {
        self.extent_envelope_ln(ln_t).map(|e| 2.0 * e)
    }

    /// [`Self::dyadic_tail`] at `C = exp(ln_c)`.
    pub(crate) fn dyadic_tail_ln(&self, ln_c: f64, m: i32) -> Option<f64> {
        if ln_c <= LN_DIRECT_LIMIT {
            return self.dyadic_tail(ln_c.exp(), m);
        }
        if self.is_zero() {
            return Some(0.0);
        }
        match &self.family {
            Family::Constant(_) | Family::Tabulated(_) => Some(0.0),
            Family::ExpBlowup { beta, amplitude } => {
                let p = 1.0 / beta;
                let ratio = 2f64.powf(-p);
                Some(2.0 * (p * (amplitude.ln() - ln_c - (m as f64 + 1.0) * LN_2)).exp() / (1.0 - ratio))
            }
            Family::DoubleExpBlowup { alpha } => {
                if *alpha >= 1.0 {
                    return None;
                }
                let p = 1.0 / alpha;
                let x0 = ln_c + (m as f64 + 0.5) * LN_2;
                (x0 > 0.0).then(|| 2.0 * x0.powf(1.0 - p) / (LN_2 * (p - 1.0)))
            }
            // the level 2^m·C exceeds every finite shift and prefactor here
            Family::Scaled { inner, factor } => {
                if factor.ln() <= 0.0 {
                    inner.dyadic_tail_ln(ln_c, m)
                } else {
                    inner.dyadic_tail_ln(ln_c - LN_2, m)
                }
            }
            Family::Derived { inner, .. } => Some(2.0 * inner.dyadic_tail_ln(ln_c - LN_2, m)?),
        }
    }

    /// Analytic upper bound `E(t) ≥ F(t)` on `(−b, b)`, non-increasing in `t ≥ 1`.
    pub fn tail_envelope(&self, t: f64, halfwidth: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(domain_err(format!("tail envelope needs t ≥ 1, got {t}")));
        }
        self.check_summable()?;
        let cap = halfwidth.min(self.height);
        Ok(match self.extent_envelope(t) {
            Some(e) => 2.0 * cap.min(e),
            None => 2.0 * cap,
        })
    }

    /// `∫₀^H log⁺log⁺M(y) dy` with a closed-form (or exponentially substituted)
    /// head on `(0, δ)` and adaptive Simpson on `[δ, H]`.
    pub fn loglog_integral(&self, cfg: &QuadratureConfig) -> LogLogIntegral {
        if !self.loglog_finite() {
            return LogLogIntegral { value: f64::INFINITY, finite: false };
        }
        let h = self.height;
        let integrand = |y: f64| self.loglog_level(y).max(0.0);
        if let Family::Tabulated(points) = &self.family {
            let mut total = 0.0;
            let mut left = 0.0;
            for (j, &(_, v)) in points.iter().enumerate() {
                let right = points.get(j + 1).map_or(h, |p| p.0);
                if j == 0 {
                    // v_0 also covers (0, y_0)
                    left = 0.0;
                }
                total += (right - left) * positive_ln(v.ln()).max(0.0);
                left = right;
            }
            return LogLogIntegral { value: total, finite: true };
        }
        let delta = cfg.head_fraction * h;
        let head = self.loglog_head(delta, cfg);
        let body = adaptive_simpson(&integrand, delta, h, cfg.tol, cfg.max_depth);
        LogLogIntegral { value: head + body, finite: true }
    }

    fn loglog_head(&self, delta: f64, cfg: &QuadratureConfig) -> f64 {
        match &self.family {
            Family::Constant(c) => delta * positive_ln(c.ln()).max(0.0),
            Family::ExpBlowup { beta, amplitude } => {
                // integrand ln a − β ln y, positive below Y = a^{1/β}
                let z = delta.min(amplitude.powf(1.0 / beta));
                z * amplitude.ln() - beta * (z * z.ln() - z)
            }
            Family::DoubleExpBlowup { alpha } => delta.powf(1.0 - alpha) / (1.0 - alpha),
            _ => {
                // y = δ e^{-s}, dy = δ e^{-s} ds
                let g = |s: f64| {
                    let y = delta * (-s).exp();
                    if y <= 0.0 {
                        return 0.0;
                    }
                    self.loglog_level(y).max(0.0) * y
                };
                adaptive_simpson(&g, 0.0, 700.0, cfg.tol, cfg.max_depth)
            }
        }
    }

    /// Parses the text form `constant:c=..`, `expblowup:beta=..[,a=..]`,
    /// `doubleexp:alpha=..` or `tabulated:@file.csv`.
    pub fn parse(spec: &str, height: f64) -> Result<Self> {
        let (kind, rest) =
            spec.split_once(':').ok_or_else(|| CertError::Parse(format!("majorant spec `{spec}` lacks `kind:`")))?;
        let kind = kind.trim().to_ascii_lowercase();
        if kind == "tabulated" {
            let path = rest
                .trim()
                .strip_prefix('@')
                .ok_or_else(|| CertError::Parse("tabulated spec must be `tabulated:@file.csv`".into()))?;
            return Self::tabulated_from_csv(Path::new(path), height);
        }
        let mut params = std::collections::BTreeMap::new();
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) =
                kv.split_once('=').ok_or_else(|| CertError::Parse(format!("parameter `{kv}` is not key=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| CertError::Parse(format!("parameter `{kv}` is not a number")))?;
            params.insert(k.trim().to_ascii_lowercase(), v);
        }
        let get =
            |k: &str| params.get(k).copied().ok_or_else(|| CertError::Parse(format!("`{kind}` needs parameter `{k}`")));
        let m = match kind.as_str() {
            "constant" => Self::constant(get("c")?, height),
            "expblowup" => Self::exp_blowup_scaled(get("beta")?, params.get("a").copied().unwrap_or(1.0), height),
            "doubleexp" => Self::double_exp(get("alpha")?, height),
            other => return Err(CertError::Parse(format!("unknown majorant kind `{other}`"))),
        };
        m.map_err(|e| CertError::Parse(e.to_string()))
    }
}

impl fmt::Display for Majorant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Constant(c) => write!(f, "constant:c={c}"),
            Family::ExpBlowup { beta, amplitude } if *amplitude == 1.0 => {
                write!(f, "expblowup:beta={beta}")
            }
            Family::ExpBlowup { beta, amplitude } => write!(f, "expblowup:beta={beta},a={amplitude}"),
            Family::DoubleExpBlowup { alpha } => write!(f, "doubleexp:alpha={alpha}"),
            Family::Tabulated(p) => write!(f, "tabulated:[{} breakpoints]", p.len()),
            Family::Scaled { inner, factor } => write!(f, "scaled(factor={factor}; {inner})"),
            Family::Derived { inner, eps } => write!(f, "derived(eps={eps}; {inner})"),
        }
    }
}

fn tabulated_value(points: &[(f64, f64)], y: f64) -> f64 {
    let idx = points.partition_point(|p| p.0 <= y);
    if idx == 0 {
        points[0].1
    } else {
        points[idx - 1].1
    }
}

/// Levels `t` with `ln t` up to this are handled in plain binary64.
pub(crate) const LN_DIRECT_LIMIT: f64 = 700.0;

/// `ln(exp(ln_s) − shift)` for `ln_s > LN_DIRECT_LIMIT` and a moderate shift.
fn ln_shifted(ln_s: f64, shift: f64) -> f64 {
    ln_s + (-shift * (-ln_s).exp()).ln_1p()
}

fn positive_ln(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `ln(shift + ln M_inner(y))` computed without forming `ln M_inner` when it overflows.
fn shifted_loglog(shift: f64, inner: &Majorant, y: f64) -> f64 {
    let ll = inner.loglog_level(y);
    if ll > 30.0 {
        let r = shift * (-ll).exp();
        if r > -1.0 {
            return ll + r.ln_1p();
        }
    }
    positive_ln(shift + inner.log_level(y))
}

pub(crate) fn soundness_factor(eps: f64) -> f64 {
    eps.max(1.0)
}

/// `ln( s(ε) · max(100/ε, 100/h) )`.
fn derived_prefactor_ln(eps: f64, h: f64) -> f64 {
    let h = h.abs();
    (soundness_factor(eps) * CAUCHY_CONSTANT).ln() - eps.min(h).ln()
}

/// Log of the prefactor on the interior branch, `ln(100·s/ε)`.
fn derived_axis_log(eps: f64) -> f64 {
    (soundness_factor(eps) * CAUCHY_CONSTANT / eps).ln()
}

/// `M̃(h) = s(ε)·max(100/ε, 100/|h|)·M(|h|/2)` with `s(ε) = max(1, ε)`.
pub fn derived_majorant(m: &Majorant, eps: f64) -> Result<Majorant> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(domain_err(format!("derived majorant needs ε > 0, got {eps}")));
    }
    Ok(Majorant { family: Family::Derived { inner: Box::new(m.clone()), eps }, height: m.height })
}

/// Which Cauchy branch sets the prefactor of `M̃` at height `h`.
pub fn cauchy_branch(eps: f64, h: f64) -> CauchyBranch {
    if h.abs() <= eps {
        CauchyBranch::NearAxis
    } else {
        CauchyBranch::Interior
    }
}

/// Prefactor `s(ε)·max(100/ε, 100/|h|)` of `M̃` at height `h`.
pub fn cauchy_prefactor(eps: f64, h: f64) -> f64 {
    derived_prefactor_ln(eps, h).exp()
}

/// Distribution function computed by bisection on the monotone superlevel
/// predicate, independent of the per-family closed forms.
pub fn distribution_by_bisection(m: &Majorant, q: DistributionQuery) -> f64 {
    2.0 * q.halfwidth.min(m.level_extent_by_bisection(q.threshold))
}

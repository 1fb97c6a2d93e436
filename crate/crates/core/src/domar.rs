//! Domar's explicit estimate for functions subharmonic in a rectangle
//! `(−a, a) × (−b, b)` and dominated by `log⁺M(|y|)`.
//!
//! If `(8/π)·Σ_{i≥−1} F(2ⁱC) < d(K, ∂P)` then `v ≤ C` on `K`, hence
//! `|f| ≤ exp(C)` for holomorphic `f` with `|f| ≤ M`. This module computes the
//! dyadic sum with a certified tail, searches the smallest admissible `C`, and
//! simulates the doubling iteration on sampled fields.

use std::f64::consts::{LN_2, PI};
use std::io::Write;

use serde::Serialize;

use crate::error::{CertError, Result};
use crate::field::SampledField;
use crate::json::{csv_float, serialize_f64};
use crate::majorant::{DistributionQuery, Majorant, LN_DIRECT_LIMIT};

/// `8/π`, the radius factor of the doubling step.
pub const DOMAR_FACTOR: f64 = 8.0 / PI;

/// Smallest constant the search will return.
pub const C_FLOOR: f64 = 1e-9;
/// Largest `C` with `exp(C)` comfortably inside binary64.
pub const C_REPRESENTABLE: f64 = 700.0;
/// Search ceiling for `ln C`.
pub const LN_C_CAP: f64 = 1e300;
/// Relative resolution of the constant search.
pub const C_RESOLUTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Stop once the envelope term `E(2ⁱC)` drops below this.
    pub tolerance: f64,
    /// Stop after this many explicit terms even if the envelope is still larger.
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { tolerance: 1e-12, max_terms: 512 }
    }
}

/// `(8/π)·[Σ_{i=−1}^{i_max} F(2ⁱC) + tail]` together with its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct DomarSum {
    pub value: f64,
    pub i_max: i32,
    /// Already multiplied by `8/π`.
    pub tail: f64,
    /// `F(2ⁱC)` for `i = −1 ..= i_max`.
    pub terms: Vec<f64>,
}

const HARD_INDEX_LIMIT: i32 = 1100;

pub fn domar_sum(m: &Majorant, c: f64, halfwidth: f64, policy: &TruncationPolicy) -> Result<DomarSum> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(CertError::Domain(format!("Domar constant must be positive, got {c}")));
    }
    sum_impl(m, c, c.ln(), halfwidth, policy)
}

/// [`domar_sum`] at `C = exp(ln_c)`, for constants beyond the range of binary64.
pub fn domar_sum_ln(m: &Majorant, ln_c: f64, halfwidth: f64, policy: &TruncationPolicy) -> Result<DomarSum> {
    if !ln_c.is_finite() {
        return Err(CertError::Domain(format!("ln C must be finite, got {ln_c}")));
    }
    let c = if ln_c <= LN_DIRECT_LIMIT { ln_c.exp() } else { f64::INFINITY };
    sum_impl(m, c, ln_c, halfwidth, policy)
}

/// `c` is `exp(ln_c)` when representable, `+∞` otherwise.
fn sum_impl(m: &Majorant, c: f64, ln_c: f64, halfwidth: f64, policy: &TruncationPolicy) -> Result<DomarSum> {
    if !(halfwidth > 0.0) {
        return Err(CertError::Domain(format!("halfwidth must be positive, got {halfwidth}")));
    }
    m.check_summable()?;
    let mut terms = Vec::new();
    let mut partial = 0.0;
    let mut i: i32 = -1;
    let tail = loop {
        let t = c * 2f64.powi(i);
        let (f, env) = if t.is_finite() {
            (m.distribution(DistributionQuery { threshold: t, halfwidth }), m.envelope_term(t))
        } else {
            let ln_t = ln_c + i as f64 * LN_2;
            (m.distribution_ln(ln_t, halfwidth), m.envelope_term_ln(ln_t))
        };
        terms.push(f);
        partial += f;
        let small = env.is_some_and(|e| e < policy.tolerance);
        if small || terms.len() >= policy.max_terms {
            let tail = if c.is_finite() { m.dyadic_tail(c, i) } else { m.dyadic_tail_ln(ln_c, i) };
            if let Some(tail) = tail {
                break tail;
            }
        }
        if i >= HARD_INDEX_LIMIT {
            return Err(CertError::NonSummableTail(format!(
                "tail envelope of {m} not established by index {i} at ln C = {ln_c}"
            )));
        }
        i += 1;
    };
    Ok(DomarSum { value: DOMAR_FACTOR * (partial + tail), i_max: i, tail: DOMAR_FACTOR * tail, terms })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomarCertificate {
    /// Infinite (JSON `null`) when `C` itself overflows; `ln_C` is always finite.
    #[serde(rename = "C", serialize_with = "serialize_f64")]
    pub c: f64,
    #[serde(rename = "ln_C", serialize_with = "serialize_f64")]
    pub ln_c: f64,
    /// `exp(C)`; infinite when `C` exceeds the representable range.
    #[serde(serialize_with = "serialize_f64")]
    pub bound: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub sum_value: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub tail_bound: f64,
    pub i_max: i32,
    #[serde(serialize_with = "serialize_f64")]
    pub distance: f64,
    #[serde(skip)]
    pub halfwidth: f64,
}

impl DomarCertificate {
    pub fn representable(&self) -> bool {
        self.c <= C_REPRESENTABLE
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Re-evaluates the dyadic sum at the certified constant.
    pub fn revalidate(&self, m: &Majorant, policy: &TruncationPolicy) -> Result<bool> {
        let s = if self.c.is_finite() {
            domar_sum(m, self.c, self.halfwidth, policy)?
        } else {
            domar_sum_ln(m, self.ln_c, self.halfwidth, policy)?
        };
        Ok(s.value < self.distance)
    }
}

/// Index where the lattice switches from steps in `C` to steps in `ln C`.
fn lattice_switch() -> u64 {
    ((LN_DIRECT_LIMIT - C_FLOOR.ln()) / C_RESOLUTION.ln_1p()).floor() as u64
}

/// `ln C_j`: relative steps of `10⁻⁶` in `C` from `10⁻⁹` up to `C ≈ e^{700}`,
/// then relative steps of `10⁻⁶` in `ln C`.
fn lattice_ln(j: u64) -> f64 {
    let step = C_RESOLUTION.ln_1p();
    let sw = lattice_switch();
    if j <= sw {
        C_FLOOR.ln() + j as f64 * step
    } else {
        lattice_ln(sw) * ((j - sw) as f64 * step).exp()
    }
}

fn lattice_constant(j: u64) -> (f64, f64) {
    if j == 0 {
        return (C_FLOOR, C_FLOOR.ln());
    }
    let l = lattice_ln(j);
    (if l <= LN_DIRECT_LIMIT { l.exp() } else { f64::INFINITY }, l)
}

/// Smallest constant on a fixed log-lattice at which the strict Domar condition
/// `(8/π)·Σ F(2ⁱC) < d` holds.
///
/// The lattice starts at `10⁻⁹` with relative spacing `10⁻⁶` in `C`; past
/// `C ≈ e^{700}` the spacing is relative `10⁻⁶` in `ln C`. The lattice point below
/// the result fails the condition. Because the lattice is fixed, pointwise-smaller
/// sums never produce larger constants.
pub fn minimal_constant(
    m: &Majorant,
    distance: f64,
    halfwidth: f64,
    policy: &TruncationPolicy,
) -> Result<DomarCertificate> {
    if !(distance > 0.0) {
        return Err(CertError::Domain(format!("distance must be positive, got {distance}")));
    }
    m.check_summable()?;
    let eval = |j: u64| -> Result<(bool, DomarSum)> {
        let (c, l) = lattice_constant(j);
        let s = sum_impl(m, c, l, halfwidth, policy)?;
        Ok((s.value < distance, s))
    };
    let (ok0, s0) = eval(0)?;
    let (j, sum) = if ok0 {
        (0, s0)
    } else {
        let mut lo = 0u64;
        let mut hi = 1u64;
        let mut hi_sum = loop {
            if lattice_ln(hi) > LN_C_CAP {
                return Err(CertError::NoCertificate { ln_cap: LN_C_CAP });
            }
            let (ok, s) = eval(hi)?;
            if ok {
                break s;
            }
            lo = hi;
            hi *= 2;
        };
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let (ok, s) = eval(mid)?;
            if ok {
                hi = mid;
                hi_sum = s;
            } else {
                lo = mid;
            }
        }
        (hi, hi_sum)
    };
    let (c, ln_c) = lattice_constant(j);
    log::debug!("minimal constant for {m}: ln C = {ln_c} (lattice index {j}), sum {}", sum.value);
    Ok(DomarCertificate {
        c,
        ln_c,
        bound: c.exp(),
        sum_value: sum.value,
        tail_bound: sum.tail,
        i_max: sum.i_max,
        distance,
        halfwidth,
    })
}

/// `exp(C)` for the minimal certified constant: every holomorphic `f` on
/// `(−a, a) × (−b, b)` with `|f(x+iy)| ≤ M(|y|)` obeys `|f| ≤ exp(C)` on any `K`
/// with `d(K, ∂P) ≥ d`.
pub fn certify_bound_2d(m: &Majorant, distance: f64, halfwidth: f64) -> Result<f64> {
    let cert = minimal_constant(m, distance, halfwidth, &TruncationPolicy::default())?;
    if !cert.representable() {
        return Err(CertError::BoundNotRepresentable { log_bound: cert.c });
    }
    Ok(cert.bound)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub ok: bool,
}

/// Sub-mean-value test `v(center) ≤ (1/|B|)∫_B v` on a sampled field.
///
/// The disc average uses a Gauss–Legendre (radial) × uniform (angular) product
/// rule over the bilinear interpolant. The tolerance is the largest second
/// difference of the samples near the disc, which bounds the interpolation bias.
pub fn subharmonic_mean_check(v: &SampledField, center: (f64, f64), radius: f64) -> Result<MeanCheck> {
    if !(radius > 0.0) || !v.contains_disc(center, radius) {
        return Err(CertError::Geometry(format!(
            "disc of radius {radius} at {center:?} is not inside the sampled rectangle"
        )));
    }
    let h = v.spacing();
    let lhs = v.interpolate(center.0, center.1).expect("center inside grid");
    let n_r = ((radius / h).ceil() as usize).clamp(8, 400);
    let n_t = ((2.0 * PI * radius / h).ceil() as usize).clamp(32, 4000);
    let (nodes, weights) = crate::quad::gauss_legendre(n_r);
    let mut acc = 0.0;
    for (t, w) in nodes.iter().zip(&weights) {
        let r = 0.5 * radius * (t + 1.0);
        let mut ring = 0.0;
        for k in 0..n_t {
            let th = 2.0 * PI * k as f64 / n_t as f64;
            let (px, py) = (center.0 + r * th.cos(), center.1 + r * th.sin());
            ring += v.interpolate(px, py).expect("disc inside grid");
        }
        acc += w * 0.5 * radius * r * ring * (2.0 * PI / n_t as f64);
    }
    let rhs = acc / (PI * radius * radius);
    let tolerance = v.max_second_difference(center, radius) + 1e-12 * lhs.abs().max(rhs.abs());
    Ok(MeanCheck { lhs, rhs, tolerance, ok: lhs <= rhs + tolerance })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeTrace {
    pub points: Vec<(f64, f64)>,
    pub levels: Vec<f64>,
    /// `radii[i] = (8/π)·F(2^{i−1}C)`, the search radius around `points[i]`.
    pub radii: Vec<f64>,
    pub terminated: bool,
    pub escaped_domain: bool,
    pub step_cap_hit: bool,
    pub start_level: f64,
    pub spacing: f64,
}

impl EscapeTrace {
    /// Checks `levels[i] ≥ 2ⁱC` and `|z_{i+1} − z_i| ≤ radii[i] + h`.
    pub fn satisfies_invariants(&self) -> bool {
        let levels_ok = self.levels.iter().enumerate().all(|(i, &l)| l >= self.start_level * 2f64.powi(i as i32));
        let steps_ok = self.points.windows(2).enumerate().all(|(i, w)| {
            let d = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
            d <= self.radii[i] + self.spacing
        });
        levels_ok && steps_ok
    }

    /// Number of doubling steps taken.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "step,x,y,level,radius")?;
        for (i, (p, l)) in self.points.iter().zip(&self.levels).enumerate() {
            let r = self.radii.get(i).copied().unwrap_or(f64::NAN);
            writeln!(w, "{i},{},{},{},{}", csv_float(p.0), csv_float(p.1), csv_float(*l), csv_float(r))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub halfwidth: f64,
    pub max_steps: usize,
}

/// Runs the doubling iteration on grid samples: from `z_i` with `v(z_i) ≥ 2ⁱC`,
/// scan the closed disc of radius `(8/π)F(2^{i−1}C)` for the nearest node with
/// `v ≥ 2^{i+1}C` (ties in row-major order).
///
/// Stops when no node qualifies (`terminated`), when the disc leaves the grid
/// (`escaped_domain`), or after `max_steps`.
pub fn domar_escape_trace(
    v: &SampledField,
    z0: (f64, f64),
    c: f64,
    m: &Majorant,
    cfg: &TraceConfig,
) -> Result<EscapeTrace> {
    if !(c > 0.0) {
        return Err(CertError::Domain(format!("trace level must be positive, got {c}")));
    }
    let (i0, j0) = v.nearest_node(z0.0, z0.1);
    let level0 = v.get(i0, j0);
    if level0 < c {
        return Err(CertError::Precondition(format!("v(z0) = {level0} is below the starting level C = {c}")));
    }
    let mut trace = EscapeTrace {
        points: vec![v.point(i0, j0)],
        levels: vec![level0],
        radii: Vec::new(),
        terminated: false,
        escaped_domain: false,
        step_cap_hit: false,
        start_level: c,
        spacing: v.spacing(),
    };
    let (hx, hy) = (v.x.spacing(), v.y.spacing());
    let (mut ci, mut cj) = (i0, j0);
    for step in 0..=cfg.max_steps {
        let t = c * 2f64.powi(step as i32 - 1);
        let radius = DOMAR_FACTOR * m.distribution(DistributionQuery::new(t, cfg.halfwidth)?);
        trace.radii.push(radius);
        if step == cfg.max_steps {
            trace.step_cap_hit = true;
            break;
        }
        let center = v.point(ci, cj);
        if !v.contains_disc(center, radius) {
            trace.escaped_domain = true;
            break;
        }
        let target = c * 2f64.powi(step as i32 + 1);
        let di = (radius / hx).floor() as usize;
        let dj = (radius / hy).floor() as usize;
        let mut best: Option<(f64, usize, usize)> = None;
        for j in cj.saturating_sub(dj)..=(cj + dj).min(v.y.count - 1) {
            for i in ci.saturating_sub(di)..=(ci + di).min(v.x.count - 1) {
                let p = v.point(i, j);
                let d2 = (p.0 - center.0).powi(2) + (p.1 - center.1).powi(2);
                if d2 > radius * radius * (1.0 + 1e-12) || v.get(i, j) < target {
                    continue;
                }
                if best.is_none_or(|(bd, _, _)| d2 < bd) {
                    best = Some((d2, i, j));
                }
            }
        }
        match best {
            None => {
                trace.terminated = true;
                break;
            }
            Some((_, i, j)) => {
                ci = i;
                cj = j;
                trace.points.push(v.point(i, j));
                trace.levels.push(v.get(i, j));
            }
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Axis;
    use std::f64::consts::E;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn sum_constant_e_large_c_vanishes() {
        let m = Majorant::constant(E, 1.0).unwrap();
        let s = domar_sum(&m, 4.0, 1.0, &policy()).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.i_max, -1);
        assert_eq!(s.tail, 0.0);
    }

    #[test]
    fn sum_constant_e_at_one_enumerates_two_terms() {
        // oracle: i ∈ {−1, 0} have 2ⁱ ≤ 1 = ln e, each contributes 2b = 2
        let m = Majorant::constant(E, 1.0).unwrap();
        let s = domar_sum(&m, 1.0, 1.0, &policy()).unwrap();
        let oracle: f64 = (-1..=10).filter(|&i| 2f64.powi(i) <= 1.0).map(|_| 2.0).sum::<f64>() * 8.0 / PI;
        assert!((s.value - oracle).abs() < 1e-14);
        assert!((s.value - 32.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn sum_rejects_non_summable() {
        let m = Majorant::double_exp(1.0, 1.0).unwrap();
        assert!(matches!(domar_sum(&m, 1.0, 1.0, &policy()), Err(CertError::NonSummableTail(_))));
        assert!(domar_sum(&Majorant::constant(1.0, 1.0).unwrap(), 0.0, 1.0, &policy()).is_err());
    }

    #[test]
    fn expblowup_tail_is_exact_geometric() {
        // F(t) = 2 min(1, 1/t); terms with 2ⁱC ≥ 1 are 2/(2ⁱC), a geometric series
        let m = Majorant::exp_blowup(1.0, 1.0).unwrap();
        let c = 3.0;
        let s = domar_sum(&m, c, 1.0, &policy()).unwrap();
        let mut oracle = 0.0;
        for i in -1..400 {
            oracle += 2.0 * (1.0f64).min(1.0 / (c * 2f64.powi(i)));
        }
        assert!((s.value - 8.0 / PI * oracle).abs() < 1e-11, "{} vs {}", s.value, 8.0 / PI * oracle);
    }

    #[test]
    fn minimal_constant_zero_majorant_hits_floor() {
        let m = Majorant::constant(0.0, 1.0).unwrap();
        let cert = minimal_constant(&m, 0.5, 1.0, &policy()).unwrap();
        assert_eq!(cert.c, C_FLOOR);
        assert!((cert.bound - 1.0).abs() < 1e-8);
        assert!((certify_bound_2d(&m, 0.5, 1.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn minimal_constant_constant_e() {
        let m = Majorant::constant(E, 1.0).unwrap();
        let cert = minimal_constant(&m, 0.5, 1.0, &policy()).unwrap();
        assert!(cert.c > 2.0 && cert.c <= 2.0 * (1.0 + 2e-6), "{}", cert.c);
        assert!(cert.sum_value < 0.5);
        assert!(cert.revalidate(&m, &policy()).unwrap());
        let b = certify_bound_2d(&m, 0.5, 1.0).unwrap();
        assert!((b / (E * E) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn minimal_constant_doubleexp_small_margin() {
        let m = Majorant::double_exp(0.5, 1.0).unwrap();
        let cert = minimal_constant(&m, 0.25, 1.0, &policy()).unwrap();
        assert!(cert.sum_value < 0.25);
        assert!(cert.revalidate(&m, &policy()).unwrap());
        // the lattice point below must fail
        let below = cert.c / (1.0 + C_RESOLUTION);
        assert!(domar_sum(&m, below, 1.0, &policy()).unwrap().value >= 0.25);
    }

    #[test]
    fn overflow_reported_for_huge_constants() {
        // (8/π)·2·F(C/2)-dominated: tiny margin forces C beyond 700
        let m = Majorant::exp_blowup(1.0, 1.0).unwrap();
        let cert = minimal_constant(&m, 1e-3, 1.0, &policy()).unwrap();
        assert!(cert.c > C_REPRESENTABLE);
        assert!(matches!(certify_bound_2d(&m, 1e-3, 1.0), Err(CertError::BoundNotRepresentable { .. })));
        assert!(cert.to_json().contains("\"bound\": null"));
    }

    #[test]
    fn certificate_json_fields() {
        let m = Majorant::constant(E, 1.0).unwrap();
        let cert = minimal_constant(&m, 0.5, 1.0, &policy()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        for k in ["C", "ln_C", "bound", "sum_value", "tail_bound", "i_max", "distance"] {
            assert!(v.get(k).is_some(), "missing {k}");
        }
        assert_eq!(v.as_object().unwrap().len(), 7);
    }

    fn grid(f: impl Fn(f64, f64) -> f64, h: f64) -> SampledField {
        let n = (1.0 / h).round() as usize + 1;
        let a = Axis::new(-0.5, 0.5, n).unwrap();
        SampledField::from_fn(a, a, f).unwrap()
    }

    #[test]
    fn mean_check_log_modulus_is_harmonic() {
        let v = grid(|x, y| ((x - 2.0).powi(2) + y * y).sqrt().ln(), 0.01);
        let r = subharmonic_mean_check(&v, (0.0, 0.1), 0.3).unwrap();
        assert!(r.ok);
        assert!((r.lhs - r.rhs).abs() <= r.tolerance);
    }

    #[test]
    fn mean_check_square_modulus() {
        let v = grid(|x, y| x * x + y * y, 0.005);
        let r = subharmonic_mean_check(&v, (0.0, 0.0), 0.1).unwrap();
        assert!(r.ok);
        assert_eq!(r.lhs, 0.0);
        assert!((r.rhs - 0.005).abs() < 1e-4, "{}", r.rhs);
        let neg = grid(|x, y| -(x * x + y * y), 0.005);
        assert!(!subharmonic_mean_check(&neg, (0.0, 0.0), 0.1).unwrap().ok);
    }

    #[test]
    fn mean_check_rejects_escaping_disc() {
        let v = grid(|x, _| x, 0.01);
        assert!(matches!(subharmonic_mean_check(&v, (0.4, 0.0), 0.2), Err(CertError::Geometry(_))));
    }

    #[test]
    fn constant_field_trace_terminates_immediately() {
        let c = 3.0;
        let v = grid(|_, _| c, 0.01);
        let m = Majorant::exp_blowup(1.0, 1.0).unwrap();
        let cfg = TraceConfig { halfwidth: 1.0, max_steps: 32 };
        // radius (8/π)·F(1.5) with F = 2/1.5 escapes; use a large threshold majorant instead
        let narrow = Majorant::exp_blowup_scaled(1.0, 0.01, 1.0).unwrap();
        let t = domar_escape_trace(&v, (0.0, 0.0), c, &narrow, &cfg).unwrap();
        assert_eq!(t.points.len(), 1);
        assert!(t.terminated && !t.escaped_domain);
        assert!(t.satisfies_invariants());
        let wide = domar_escape_trace(&v, (0.0, 0.0), c, &m, &cfg).unwrap();
        assert!(wide.escaped_domain);
        assert!(domar_escape_trace(&v, (0.0, 0.0), 4.0, &m, &cfg).is_err());
    }

    #[test]
    fn trace_csv_has_header_and_rows() {
        let v = grid(|_, _| 1.0, 0.1);
        let narrow = Majorant::exp_blowup_scaled(1.0, 0.01, 1.0).unwrap();
        let t =
            domar_escape_trace(&v, (0.0, 0.0), 1.0, &narrow, &TraceConfig { halfwidth: 1.0, max_steps: 4 }).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("step,x,y,level,radius\n0,"));
    }

    proptest::proptest! {
        #[test]
        fn sum_non_increasing_in_c(c1 in 0.01f64..50.0, c2 in 0.01f64..50.0, alpha in 0.2f64..0.9) {
            let m = Majorant::double_exp(alpha, 1.0).unwrap();
            let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
            let s_lo = domar_sum(&m, lo, 1.0, &policy()).unwrap().value;
            let s_hi = domar_sum(&m, hi, 1.0, &policy()).unwrap().value;
            proptest::prop_assert!(s_lo + 1e-11 >= s_hi, "{} < {}", s_lo, s_hi);
        }

        #[test]
        fn doubling_c_drops_the_first_term(c in 0.05f64..40.0, beta in 0.3f64..2.0) {
            // with a fixed term count the list at 2C is the list at C shifted by one index
            let m = Majorant::exp_blowup(beta, 1.0).unwrap();
            let p = TruncationPolicy { tolerance: 0.0, max_terms: 60 };
            let a = domar_sum(&m, c, 1.0, &p).unwrap();
            let b = domar_sum(&m, 2.0 * c, 1.0, &p).unwrap();
            for (x, y) in a.terms[1..].iter().zip(&b.terms) {
                proptest::prop_assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0));
            }
        }
    }
}

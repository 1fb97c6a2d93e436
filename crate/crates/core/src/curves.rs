//! Plot data: the distribution function `F(t)`, the Domar sum `S(C)` and the
//! certified bound as a function of the margin `ε`.

use std::io::Write;

use crate::domar::{domar_sum, TruncationPolicy};
use crate::error::{CertError, Result};
use crate::json::csv_float;
use crate::majorant::{DistributionQuery, Majorant};
use crate::pipeline::{certify_bound, CylinderSpec};

/// `points` log-spaced values on `[lo, hi]`, both ends included.
pub fn log_space(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi >= lo) || points == 0 {
        return Err(CertError::Domain(format!("log grid needs 0 < lo ≤ hi and points ≥ 1 (lo = {lo}, hi = {hi})")));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points)
        .map(|k| match k {
            0 => lo,
            k if k + 1 == points => hi,
            k => (a + (b - a) * k as f64 / (points - 1) as f64).exp(),
        })
        .collect())
}

/// Rows `(t, F(t))`.
pub fn distribution_curve(m: &Majorant, halfwidth: f64, ts: &[f64]) -> Result<Vec<(f64, f64)>> {
    ts.iter().map(|&t| Ok((t, m.distribution(DistributionQuery::new(t, halfwidth)?)))).collect()
}

/// Rows `(C, S(C))` with `S(C) = (8/π)·Σ_{i≥−1} F(2ⁱC)`.
pub fn sum_curve(m: &Majorant, halfwidth: f64, cs: &[f64], policy: &TruncationPolicy) -> Result<Vec<(f64, f64)>> {
    cs.iter().map(|&c| Ok((c, domar_sum(m, c, halfwidth, policy)?.value))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub eps: f64,
    pub log_bound: f64,
    pub loglog_bound: f64,
    /// `None` when the bound overflows binary64.
    pub final_bound: Option<f64>,
}

/// Certified bound at `points` margins evenly spaced in `(0, min(R, H))`.
pub fn bound_curve(spec: &CylinderSpec, m: &Majorant, points: usize) -> Result<Vec<BoundPoint>> {
    let top = spec.radius.min(spec.height);
    (1..=points)
        .map(|k| {
            let eps = top * k as f64 / (points + 1) as f64;
            let cert = certify_bound(&CylinderSpec { eps, ..*spec }, m)?;
            Ok(BoundPoint {
                eps,
                log_bound: cert.log_bound,
                loglog_bound: cert.loglog_bound,
                final_bound: cert.final_bound,
            })
        })
        .collect()
}

/// Two-column CSV under `header`.
pub fn write_pairs_csv<W: Write>(mut w: W, header: &str, rows: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "{header}")?;
    for (a, b) in rows {
        writeln!(w, "{},{}", csv_float(*a), csv_float(*b))?;
    }
    Ok(())
}

/// Header `eps,log_bound,loglog_bound,final_bound`; an overflowed bound is left empty.
pub fn write_bound_csv<W: Write>(mut w: W, rows: &[BoundPoint]) -> Result<()> {
    writeln!(w, "eps,log_bound,loglog_bound,final_bound")?;
    for p in rows {
        writeln!(
            w,
            "{},{},{},{}",
            csv_float(p.eps),
            csv_float(p.log_bound),
            csv_float(p.loglog_bound),
            p.final_bound.map(csv_float).unwrap_or_default()
        )?;
    }
    Ok(())
}

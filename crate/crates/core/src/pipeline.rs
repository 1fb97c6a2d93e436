//! End-to-end certified bound for harmonic functions on an n-cylinder.
//!
//! Route by dimension:
//! - `n = 2, 3`: add fake coordinates up to `n = 4`;
//! - `n = 4`: Domar certificate for the holomorphic gradient of `ρ·u`, bound `exp(C)`;
//! - odd `n = 2k + 3`: certify the lifted 3-D field, then undo the lift with `k`
//!   derivative estimates;
//! - even `n ≥ 6`: add one fake coordinate.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::domar::{minimal_constant, DomarCertificate, TruncationPolicy, C_REPRESENTABLE};
use crate::error::{CertError, Result};
use crate::json::serialize_f64;
use crate::majorant::Majorant;
use crate::quad::ln_gamma;
use crate::reduction::{cauchy_gradient_majorant, ln_derivative_bound_constant};

/// `{(x, y) : x ∈ R^{n−1}, |x| < R, |y| < H}` with target `K = {|x| ≤ R−ε, |y| ≤ H−ε}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderSpec {
    pub n: u32,
    #[serde(rename = "R", serialize_with = "serialize_f64")]
    pub radius: f64,
    #[serde(rename = "H", serialize_with = "serialize_f64")]
    pub height: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub eps: f64,
}

impl CylinderSpec {
    pub fn new(n: u32, radius: f64, height: f64, eps: f64) -> Result<Self> {
        let s = Self { n, radius, height, eps };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(CertError::Config(format!("dimension must be at least 2, got {}", self.n)));
        }
        let finite = [self.radius, self.height, self.eps].iter().all(|v| v.is_finite());
        if !finite || !(self.eps > 0.0) || !(self.eps < self.radius.min(self.height)) {
            return Err(CertError::Config(format!(
                "need 0 < ε < min(R, H) (R = {}, H = {}, ε = {})",
                self.radius, self.height, self.eps
            )));
        }
        Ok(())
    }

    pub fn with_dimension(&self, n: u32) -> Self {
        Self { n, ..*self }
    }

    /// Half-extents of the target compact set, `(R − ε, H − ε)`.
    pub fn target(&self) -> (f64, f64) {
        (self.radius - self.eps, self.height - self.eps)
    }
}

/// Named real constants of a stage, serialized as a JSON object in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constants(pub Vec<(String, f64)>);

impl Constants {
    fn with(mut self, key: &str, v: f64) -> Self {
        self.0.push((key.to_string(), v));
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

impl Serialize for Constants {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct F(f64);
        impl Serialize for F {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_f64(&self.0, s)
            }
        }
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &F(*v))?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub n: u32,
    pub input: String,
    pub output: String,
    pub constants: Constants,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub spec: CylinderSpec,
    pub stages: Vec<StageRecord>,
    pub domar: DomarCertificate,
    /// `exp(log_bound)`, or `None` when it overflows binary64.
    #[serde(serialize_with = "crate::json::serialize_opt_f64")]
    pub final_bound: Option<f64>,
    /// Natural log of the bound; `+∞` (JSON `null`) when even that overflows.
    #[serde(serialize_with = "serialize_f64")]
    pub log_bound: f64,
    /// `ln(log_bound)`, finite whenever the bound exceeds `e`.
    #[serde(serialize_with = "serialize_f64")]
    pub loglog_bound: f64,
    pub bound_overflow: bool,
}

impl BoundCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Recomputes the whole chain and checks it reproduces this certificate exactly.
    pub fn replay(&self, m: &Majorant) -> Result<bool> {
        let again = certify_bound(&self.spec, m)?;
        let domar_ok = self.domar.revalidate(&self.domar_majorant(m)?, &TruncationPolicy::default())?;
        Ok(domar_ok
            && again.log_bound.to_bits() == self.log_bound.to_bits()
            && again.loglog_bound.to_bits() == self.loglog_bound.to_bits()
            && again.final_bound.map(f64::to_bits) == self.final_bound.map(f64::to_bits)
            && again.stages == self.stages)
    }

    /// The majorant the 2-D Domar stage was run on.
    fn domar_majorant(&self, m: &Majorant) -> Result<Majorant> {
        let mut inner = m.clone();
        for st in &self.stages {
            if st.name == "lift_odd_to_3" {
                inner = Majorant::scaled(inner, st.constants.get("scale").expect("recorded"))?;
            }
        }
        let eps = self
            .stages
            .iter()
            .find(|s| s.name == "cauchy_gradient")
            .and_then(|s| s.constants.get("eps"))
            .expect("route always records the gradient stage");
        Ok(cauchy_gradient_majorant(&inner, eps)?.majorant)
    }
}

struct Route {
    stages: Vec<StageRecord>,
    domar: Option<DomarCertificate>,
}

/// Certified `sup_K |u|` over every harmonic `u` on the cylinder with `|u(x, y)| ≤ M(|y|)`.
pub fn certify_bound(spec: &CylinderSpec, m: &Majorant) -> Result<BoundCertificate> {
    spec.validate()?;
    if !m.loglog_finite() {
        return Err(CertError::LevinsonFails(format!("∫ log⁺log⁺M diverges for {m}")));
    }
    if m.height() < spec.height {
        return Err(CertError::Domain(format!(
            "majorant is defined up to height {} but the cylinder has H = {}",
            m.height(),
            spec.height
        )));
    }
    m.check_summable()?;
    let mut route = Route { stages: Vec::new(), domar: None };
    let LogBound { log, loglog } = route_bound(spec, m, &mut route)?;
    let bound_overflow = !(log <= C_REPRESENTABLE);
    Ok(BoundCertificate {
        spec: *spec,
        stages: route.stages,
        domar: route.domar.expect("every route ends in a Domar stage"),
        final_bound: (!bound_overflow).then(|| log.exp()),
        log_bound: log,
        loglog_bound: loglog,
        bound_overflow,
    })
}

/// `ln` and `ln ln` of a bound; `log` is `+∞` once it leaves binary64.
#[derive(Debug, Clone, Copy)]
struct LogBound {
    log: f64,
    loglog: f64,
}

fn route_bound(spec: &CylinderSpec, m: &Majorant, route: &mut Route) -> Result<LogBound> {
    let n = spec.n;
    match n {
        2 | 3 => pad(spec, m, route, 4),
        4 => {
            let eps = spec.eps;
            let grad = cauchy_gradient_majorant(m, eps)?;
            let near = grad.branch_at(0.5 * eps);
            let far = grad.branch_at(spec.height - 0.5 * eps);
            route.stages.push(StageRecord {
                name: "cauchy_gradient".into(),
                n,
                input: m.to_string(),
                output: grad.majorant.to_string(),
                constants: Constants::default()
                    .with("eps", eps)
                    .with("crossover_h", grad.crossover())
                    .with("prefactor_near_axis_at_eps_half", near.prefactor)
                    .with("prefactor_interior", far.prefactor),
            });
            let halfwidth = spec.height - 0.5 * eps;
            let distance = 0.5 * eps;
            let cert = minimal_constant(&grad.majorant, distance, halfwidth, &TruncationPolicy::default())?;
            route.stages.push(StageRecord {
                name: "domar".into(),
                n: 2,
                input: grad.majorant.to_string(),
                output: format!("ln C={}", cert.ln_c),
                constants: Constants::default()
                    .with("C", cert.c)
                    .with("ln_C", cert.ln_c)
                    .with("distance", distance)
                    .with("halfwidth", halfwidth)
                    .with("sum_value", cert.sum_value)
                    .with("tail_bound", cert.tail_bound)
                    .with("i_max", cert.i_max as f64),
            });
            let bound = LogBound { log: cert.c, loglog: cert.ln_c };
            route.domar = Some(cert);
            Ok(bound)
        }
        n if n % 2 == 1 => {
            let k = (n - 3) / 2;
            let eps = spec.eps;
            let scale = eps.powi(k as i32);
            let lifted = Majorant::scaled(m.clone(), scale)?;
            route.stages.push(StageRecord {
                name: "lift_odd_to_3".into(),
                n,
                input: m.to_string(),
                output: lifted.to_string(),
                constants: Constants::default().with("k", k as f64).with("scale", scale),
            });
            let spec3 = CylinderSpec::new(3, eps, spec.height, 0.5 * eps)?;
            let c3 = route_bound(&spec3, &lifted, route)?;
            let ln_ck = ln_derivative_bound_constant(k, 0.5 * eps, 3)?;
            let ln_kfact = ln_gamma(k as f64 + 1.0);
            let shift = ln_ck - ln_kfact;
            let bound = if c3.log.is_finite() {
                let log = shift + c3.log;
                LogBound { log, loglog: log.ln() }
            } else {
                LogBound { log: f64::INFINITY, loglog: c3.loglog + (shift * (-c3.loglog).exp()).ln_1p() }
            };
            route.stages.push(StageRecord {
                name: "derivative_bound".into(),
                n,
                input: format!("ln ln C3={}", c3.loglog),
                output: format!("ln ln bound={}", bound.loglog),
                constants: Constants::default()
                    .with("k", k as f64)
                    .with("radius", 0.5 * eps)
                    .with("ln_derivative_constant", ln_ck)
                    .with("ln_k_factorial", ln_kfact)
                    .with("log_c3", c3.log)
                    .with("loglog_c3", c3.loglog),
            });
            Ok(bound)
        }
        _ => pad(spec, m, route, n + 1),
    }
}

fn pad(spec: &CylinderSpec, m: &Majorant, route: &mut Route, to: u32) -> Result<LogBound> {
    route.stages.push(StageRecord {
        name: "pad".into(),
        n: spec.n,
        input: m.to_string(),
        output: m.to_string(),
        constants: Constants::default().with("from_n", spec.n as f64).with("to_n", to as f64),
    });
    route_bound(&spec.with_dimension(to), m, route)
}

/// Bound on `|u(x0, h)|` for any `|x0| ≤ R − ε`: the same number as the cylinder bound,
/// since translating `x0` to the axis and symmetrizing preserves the majorant.
pub fn bound_on_axis(spec: &CylinderSpec, m: &Majorant) -> Result<f64> {
    let cert = certify_bound(spec, m)?;
    cert.final_bound.ok_or(CertError::BoundNotRepresentable { log_bound: cert.log_bound })
}

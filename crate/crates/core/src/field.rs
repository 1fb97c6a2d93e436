//! Uniform 2-D grids of real samples and their CSV form.
//!
//! CSV layout:
//! ```text
//! axis,min,max,count,spacing
//! x,-1,1,201,0.01
//! y,-1,1,101,0.02
//! values
//! v(x0,y0),v(x1,y0),...      one row per y index, row-major
//! ```

use std::io::{BufRead, Write};

use crate::error::{CertError, Result};
use crate::json::csv_float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 || !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(CertError::Geometry(format!(
                "axis needs min < max and at least two nodes (got [{min}, {max}] with {count})"
            )));
        }
        Ok(Self { min, max, count })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    /// Nodes of the same range at half the resolution (every other node).
    pub fn coarsened(&self) -> Option<Self> {
        ((self.count - 1).is_multiple_of(2) && self.count >= 5).then(|| Self {
            min: self.min,
            max: self.max,
            count: (self.count - 1) / 2 + 1,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub x: Axis,
    pub y: Axis,
    values: Vec<f64>,
    /// Closed-form description of the sampled function, when there is one.
    pub tag: Option<String>,
}

impl SampledField {
    pub fn from_fn<F: Fn(f64, f64) -> f64>(x: Axis, y: Axis, f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(x.count * y.count);
        for j in 0..y.count {
            let yy = y.node(j);
            for i in 0..x.count {
                values.push(f(x.node(i), yy));
            }
        }
        Self::from_values(x, y, values)
    }

    pub fn from_values(x: Axis, y: Axis, values: Vec<f64>) -> Result<Self> {
        if values.len() != x.count * y.count {
            return Err(CertError::Geometry(format!("expected {} samples, got {}", x.count * y.count, values.len())));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(CertError::Domain(format!("non-finite sample at flat index {bad}")));
        }
        Ok(Self { x, y, values, tag: None })
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.x.count + i]
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x.node(i), self.y.node(j))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Larger of the two spacings.
    pub fn spacing(&self) -> f64 {
        self.x.spacing().max(self.y.spacing())
    }

    /// Grid node nearest to `(px, py)`, clamped to the grid.
    pub fn nearest_node(&self, px: f64, py: f64) -> (usize, usize) {
        let idx = |a: &Axis, p: f64| {
            let k = ((p - a.min) / a.spacing()).round();
            k.clamp(0.0, (a.count - 1) as f64) as usize
        };
        (idx(&self.x, px), idx(&self.y, py))
    }

    pub fn contains_disc(&self, (cx, cy): (f64, f64), r: f64) -> bool {
        cx - r >= self.x.min && cx + r <= self.x.max && cy - r >= self.y.min && cy + r <= self.y.max
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn interpolate(&self, px: f64, py: f64) -> Option<f64> {
        let locate = |a: &Axis, p: f64| -> Option<(usize, f64)> {
            if !(p >= a.min && p <= a.max) {
                return None;
            }
            let s = (p - a.min) / a.spacing();
            let k = (s.floor() as usize).min(a.count - 2);
            Some((k, s - k as f64))
        };
        let (i, fx) = locate(&self.x, px)?;
        let (j, fy) = locate(&self.y, py)?;
        let v00 = self.get(i, j);
        let v10 = self.get(i + 1, j);
        let v01 = self.get(i, j + 1);
        let v11 = self.get(i + 1, j + 1);
        Some((1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11))
    }

    /// Largest centred second difference (either direction) among nodes within
    /// `r` of `center`, padded by one node.
    pub fn max_second_difference(&self, center: (f64, f64), r: f64) -> f64 {
        let (hx, hy) = (self.x.spacing(), self.y.spacing());
        let mut worst = 0.0f64;
        for j in 1..self.y.count - 1 {
            let yy = self.y.node(j);
            if (yy - center.1).abs() > r + hy {
                continue;
            }
            for i in 1..self.x.count - 1 {
                let xx = self.x.node(i);
                if (xx - center.0).abs() > r + hx {
                    continue;
                }
                let c = self.get(i, j);
                let dx = self.get(i + 1, j) - 2.0 * c + self.get(i - 1, j);
                let dy = self.get(i, j + 1) - 2.0 * c + self.get(i, j - 1);
                worst = worst.max(dx.abs()).max(dy.abs());
            }
        }
        worst
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "axis,min,max,count,spacing")?;
        for (name, a) in [("x", &self.x), ("y", &self.y)] {
            writeln!(w, "{name},{},{},{},{}", csv_float(a.min), csv_float(a.max), a.count, csv_float(a.spacing()))?;
        }
        writeln!(w, "values")?;
        for j in 0..self.y.count {
            let row: Vec<String> = (0..self.x.count).map(|i| csv_float(self.get(i, j))).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            lines.next().ok_or_else(|| CertError::Parse("truncated grid file".into()))?.map_err(CertError::from)
        };
        if next()?.trim() != "axis,min,max,count,spacing" {
            return Err(CertError::Parse("grid file must start with the axis header".into()));
        }
        let mut parse_axis = |want: &str| -> Result<Axis> {
            let line = next()?;
            let cols: Vec<&str> = line.trim().split(',').collect();
            if cols.len() != 5 || cols[0] != want {
                return Err(CertError::Parse(format!("bad axis row `{line}`")));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| CertError::Parse(e.to_string()));
            let count = cols[3].parse::<usize>().map_err(|e| CertError::Parse(e.to_string()))?;
            Axis::new(num(cols[1])?, num(cols[2])?, count)
        };
        let x = parse_axis("x")?;
        let y = parse_axis("y")?;
        if next()?.trim() != "values" {
            return Err(CertError::Parse("missing `values` marker".into()));
        }
        let mut values = Vec::with_capacity(x.count * y.count);
        for _ in 0..y.count {
            let line = next()?;
            for cell in line.trim().split(',') {
                values.push(cell.parse::<f64>().map_err(|e| CertError::Parse(e.to_string()))?);
            }
        }
        Self::from_values(x, y, values)
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_STEPS_PER_UNIT_ARC: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathKind {
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "default_ccw")]
        counterclockwise: bool,
        #[serde(default)]
        start_angle: f64,
    },
    Polyline {
        vertices: Vec<[f64; 2]>,
        closed: bool,
    },
}

/// A piecewise-smooth path in the `λ₁`-plane, parameterized by arc length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSpec {
    #[serde(flatten)]
    pub kind: PathKind,
    pub steps_per_unit_arc: usize,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

fn default_ccw() -> bool {
    true
}

fn c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl PathSpec {
    pub fn circle(center: Complex64, radius: f64, start_angle: f64, counterclockwise: bool) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Validation(format!("circle radius must be positive, got {radius}")));
        }
        if !(center.re.is_finite() && center.im.is_finite() && start_angle.is_finite()) {
            return Err(Error::Validation("circle parameters must be finite".into()));
        }
        Ok(Self {
            kind: PathKind::Circle { center: [center.re, center.im], radius, counterclockwise, start_angle },
            steps_per_unit_arc: DEFAULT_STEPS_PER_UNIT_ARC,
            cumulative: Vec::new(),
        })
    }

    /// Counterclockwise circle about `center` starting and ending at `start`.
    pub fn circle_through(center: Complex64, start: Complex64) -> Result<Self> {
        let offset = start - center;
        Self::circle(center, offset.norm(), offset.arg(), true)
    }

    /// Polyline through `vertices`; a closed polyline returns to the first vertex.
    pub fn polyline(vertices: Vec<Complex64>, closed: bool) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Validation("polyline needs at least one vertex".into()));
        }
        if vertices.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Validation("polyline vertices must be finite".into()));
        }
        let mut path = Self {
            kind: PathKind::Polyline { vertices: vertices.iter().map(|v| [v.re, v.im]).collect(), closed },
            steps_per_unit_arc: DEFAULT_STEPS_PER_UNIT_ARC,
            cumulative: Vec::new(),
        };
        path.cumulative = path.polyline_cumulative();
        Ok(path)
    }

    pub fn from_kind(kind: PathKind) -> Result<Self> {
        match kind {
            PathKind::Circle { center, radius, counterclockwise, start_angle } => {
                Self::circle(c(center), radius, start_angle, counterclockwise)
            }
            PathKind::Polyline { vertices, closed } => Self::polyline(vertices.into_iter().map(c).collect(), closed),
        }
    }

    pub fn with_steps_per_unit_arc(mut self, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Validation("steps per unit arc must be positive".into()));
        }
        self.steps_per_unit_arc = steps;
        Ok(self)
    }

    fn polyline_nodes(&self) -> Vec<Complex64> {
        match &self.kind {
            PathKind::Polyline { vertices, closed } => {
                let mut nodes: Vec<Complex64> = vertices.iter().copied().map(c).collect();
                if *closed && nodes.len() > 1 {
                    nodes.push(nodes[0]);
                }
                nodes
            }
            PathKind::Circle { .. } => Vec::new(),
        }
    }

    fn polyline_cumulative(&self) -> Vec<f64> {
        let nodes = self.polyline_nodes();
        let mut acc = vec![0.0];
        for pair in nodes.windows(2) {
            let last = *acc.last().unwrap();
            acc.push(last + (pair[1] - pair[0]).norm());
        }
        acc
    }

    pub fn length(&self) -> f64 {
        match &self.kind {
            PathKind::Circle { radius, .. } => 2.0 * std::f64::consts::PI * radius,
            PathKind::Polyline { .. } => *self.cumulative.last().unwrap_or(&0.0),
        }
    }

    pub fn is_closed(&self) -> bool {
        match &self.kind {
            PathKind::Circle { .. } => true,
            PathKind::Polyline { closed, vertices } => {
                *closed || vertices.first() == vertices.last()
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        match &self.kind {
            PathKind::Circle { center, radius, start_angle, .. } => {
                c(*center) + Complex64::from_polar(*radius, *start_angle)
            }
            PathKind::Polyline { vertices, .. } => c(vertices[0]),
        }
    }

    pub fn end(&self) -> Complex64 {
        self.point_at(self.length())
    }

    /// Point at arc length `s`, clamped to `[0, length]`. The endpoint of a
    /// closed path is returned as the start point exactly.
    pub fn point_at(&self, s: f64) -> Complex64 {
        let len = self.length();
        let s = s.clamp(0.0, len);
        match &self.kind {
            PathKind::Circle { center, radius, counterclockwise, start_angle } => {
                if s <= 0.0 || s >= len {
                    return self.start();
                }
                let dir = if *counterclockwise { 1.0 } else { -1.0 };
                c(*center) + Complex64::from_polar(*radius, start_angle + dir * s / radius)
            }
            PathKind::Polyline { .. } => {
                let nodes = self.polyline_nodes();
                if s >= len {
                    return *nodes.last().unwrap();
                }
                let seg = match self.cumulative.partition_point(|&x| x <= s) {
                    0 => 0,
                    k => (k - 1).min(nodes.len().saturating_sub(2)),
                };
                if nodes.len() < 2 {
                    return nodes[0];
                }
                let seg_len = self.cumulative[seg + 1] - self.cumulative[seg];
                if seg_len == 0.0 {
                    return nodes[seg];
                }
                let t = (s - self.cumulative[seg]) / seg_len;
                nodes[seg] + (nodes[seg + 1] - nodes[seg]) * t
            }
        }
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        match &self.kind {
            PathKind::Circle { center, radius, counterclockwise, start_angle } => Self {
                kind: PathKind::Circle {
                    center: *center,
                    radius: *radius,
                    counterclockwise: !counterclockwise,
                    start_angle: *start_angle,
                },
                steps_per_unit_arc: self.steps_per_unit_arc,
                cumulative: Vec::new(),
            },
            PathKind::Polyline { .. } => {
                let mut nodes = self.polyline_nodes();
                nodes.reverse();
                let mut p = Self::polyline(nodes, false).expect("reversal of a valid polyline");
                p.steps_per_unit_arc = self.steps_per_unit_arc;
                p
            }
        }
    }

    /// Smallest distance from the path to any of `points`.
    pub fn min_distance(&self, points: &[Complex64]) -> f64 {
        match &self.kind {
            PathKind::Circle { center, radius, .. } => points
                .iter()
                .map(|p| ((p - c(*center)).norm() - radius).abs())
                .fold(f64::INFINITY, f64::min),
            PathKind::Polyline { .. } => {
                let nodes = self.polyline_nodes();
                let seg_dist = |p: Complex64, a: Complex64, b: Complex64| {
                    let ab = b - a;
                    let n2 = ab.norm_sqr();
                    let t = if n2 == 0.0 { 0.0 } else { (((p - a) * ab.conj()).re / n2).clamp(0.0, 1.0) };
                    (p - (a + ab * t)).norm()
                };
                points
                    .iter()
                    .map(|&p| {
                        if nodes.len() == 1 {
                            (p - nodes[0]).norm()
                        } else {
                            nodes.windows(2).map(|w| seg_dist(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
                        }
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

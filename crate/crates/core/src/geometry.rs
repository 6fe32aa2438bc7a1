//! Components (open balls cut by symmetric slabs), annulus shells, and
//! the rigorous distance / diameter / line-intersection primitives the
//! certifier consumes.
//!
//! All geometric bounds are f64 with explicit outward slop; every bound
//! labelled "lower"/"upper" is rigorous in the stated direction. The
//! body class ball-intersect-slabs admits exact support evaluation (see
//! the support module), which keeps the enclosures tight.

use crate::error::{Error, Result};
use crate::support::{self, cross_extreme, CrossBound};
use serde::{Deserialize, Serialize};

/// Relative slop applied outward to every rigorous f64 bound. The
/// underlying evaluations are short dot-product chains (relative error
/// well under 1e-14); 1e-13 leaves an order of magnitude of headroom
/// while staying far below the certification tolerance at every scale
/// the constructions reach (distances up to ~3e4).
pub(crate) const SLOP: f64 = 1e-13;

pub(crate) fn slop_for(scale: f64) -> f64 {
    SLOP * scale.abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub(crate) fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// A line through `base` with unit `direction`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Line {
    pub base: Point,
    pub direction: Vec<f64>,
}

impl Line {
    pub fn new(base: Point, direction: Vec<f64>) -> Result<Self> {
        if base.dim() != direction.len() {
            return Err(Error::domain("line base and direction dimensions differ"));
        }
        let n = norm(&direction);
        if !(n.is_finite() && n > 1e-12) {
            return Err(Error::domain("line direction must be nonzero"));
        }
        Ok(Line {
            base,
            direction: scale(&direction, 1.0 / n),
        })
    }

    pub fn through(a: &[f64], b: &[f64]) -> Result<Self> {
        Line::new(Point(a.to_vec()), sub(b, a))
    }

    /// Perpendicular distance from a point to the line.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let rel = sub(p, &self.base.0);
        let t = dot(&rel, &self.direction);
        let mut perp = rel;
        axpy(&mut perp, -t, &self.direction);
        norm(&perp)
    }
}

/// A symmetric slab |<x - center, normal>| <= half_width, always centered
/// at the owning component's center.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Slab {
    pub normal: Vec<f64>,
    pub half_width: f64,
}

/// An open convex body: ball of `ball_diameter` around `center`,
/// intersected with finitely many centered symmetric slabs. Slabs that
/// cannot cut the ball (half_width >= radius) are dropped on validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Component {
    pub center: Point,
    pub ball_diameter: f64,
    #[serde(default)]
    pub slabs: Vec<Slab>,
}

impl Component {
    pub fn ball(center: Vec<f64>, diameter: f64) -> Result<Self> {
        let c = Component {
            center: Point(center),
            ball_diameter: diameter,
            slabs: Vec::new(),
        };
        c.validated()
    }

    pub fn validated(mut self) -> Result<Self> {
        let d = self.center.dim();
        if d == 0 {
            return Err(Error::domain("component center must be nonempty"));
        }
        if !(self.ball_diameter.is_finite() && self.ball_diameter > 0.0) {
            return Err(Error::domain("ball diameter must be positive"));
        }
        let r = self.ball_diameter / 2.0;
        let mut kept = Vec::with_capacity(self.slabs.len());
        for mut s in self.slabs.into_iter() {
            if s.normal.len() != d {
                return Err(Error::domain("slab normal dimension mismatch"));
            }
            let n = norm(&s.normal);
            if !(n.is_finite() && n > 1e-12) {
                return Err(Error::domain("slab normal must be nonzero"));
            }
            s.normal = scale(&s.normal, 1.0 / n);
            if !(s.half_width.is_finite() && s.half_width > 0.0) {
                return Err(Error::domain("slab half width must be positive"));
            }
            if s.half_width < r {
                kept.push(s);
            }
            // half_width >= r: the slab does not cut the ball; drop it.
        }
        self.slabs = kept;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn radius(&self) -> f64 {
        self.ball_diameter / 2.0
    }

    /// Strict membership of the open body with margin.
    pub fn contains(&self, x: &[f64], margin: f64) -> bool {
        let rel = sub(x, &self.center.0);
        if norm(&rel) >= self.radius() - margin {
            return false;
        }
        self.slabs
            .iter()
            .all(|s| dot(&rel, &s.normal).abs() < s.half_width - margin)
    }

    /// Projection of x onto the closed body (Dykstra over ball + slabs).
    pub(crate) fn project(&self, x: &[f64]) -> Vec<f64> {
        let r = self.radius();
        let c = &self.center.0;
        let mut y = sub(x, c);
        let m = self.slabs.len() + 1;
        let mut corrections = vec![vec![0.0; y.len()]; m];
        for _sweep in 0..64 {
            let mut moved = 0.0f64;
            for (ci, corr) in corrections.iter_mut().enumerate() {
                // add back this constraint's correction
                for (yi, co) in y.iter_mut().zip(corr.iter()) {
                    *yi += *co;
                }
                let before = y.clone();
                if ci == 0 {
                    let n = norm(&y);
                    if n > r {
                        let f = r / n;
                        for yi in y.iter_mut() {
                            *yi *= f;
                        }
                    }
                } else {
                    let s = &self.slabs[ci - 1];
                    let t = dot(&y, &s.normal);
                    let clamped = t.clamp(-s.half_width, s.half_width);
                    if t != clamped {
                        axpy(&mut y, clamped - t, &s.normal);
                    }
                }
                for ((co, b), yi) in corr.iter_mut().zip(before.iter()).zip(y.iter()) {
                    let delta = b - yi;
                    moved += (*co - delta).abs();
                    *co = delta;
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        let mut out = y;
        for (oi, ci) in out.iter_mut().zip(c.iter()) {
            *oi += ci;
        }
        out
    }
}

/// Open spherical shell between two concentric spheres.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnulusShell {
    pub center: Point,
    pub r_inner: f64,
    pub r_outer: f64,
}

impl AnnulusShell {
    pub fn new(center: Vec<f64>, r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner.is_finite() && r_outer.is_finite() && 0.0 < r_inner && r_inner < r_outer) {
            return Err(Error::domain("shell needs 0 < r_inner < r_outer"));
        }
        Ok(AnnulusShell {
            center: Point(center),
            r_inner,
            r_outer,
        })
    }
}

/// A finite disjoint union of components, plus shells for the annuli
/// example. This is the object that gets certified and measured.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentUnion {
    pub dimension: usize,
    pub components: Vec<Component>,
    #[serde(default)]
    pub shells: Vec<AnnulusShell>,
}

impl ComponentUnion {
    pub fn new(dimension: usize, components: Vec<Component>) -> Result<Self> {
        let u = ComponentUnion {
            dimension,
            components,
            shells: Vec::new(),
        };
        u.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.dimension == 0 {
            return Err(Error::domain("dimension must be >= 1"));
        }
        for c in &self.components {
            if c.dim() != self.dimension {
                return Err(Error::domain("component dimension mismatch"));
            }
        }
        for s in &self.shells {
            if s.center.dim() != self.dimension {
                return Err(Error::domain("shell dimension mismatch"));
            }
            if !(s.r_inner > 0.0 && s.r_inner < s.r_outer) {
                return Err(Error::domain("shell needs 0 < r_inner < r_outer"));
            }
        }
        Ok(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let u: ComponentUnion =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("component union: {e}")))?;
        let mut u = u;
        u.components = u
            .components
            .into_iter()
            .map(|c| c.validated())
            .collect::<Result<Vec<_>>>()?;
        u.validated()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("union serializes")
    }
}

/// Support interval of a component along a unit direction: rigorous
/// [lo, hi] containing the true extent, tight to active-set accuracy.
pub fn extent(c: &Component, u: &[f64]) -> (f64, f64) {
    let hi = support::support_upper(c, u);
    let neg: Vec<f64> = u.iter().map(|x| -x).collect();
    let lo = -support::support_upper(c, &neg);
    (lo, hi)
}

/// Rigorous enclosure of dist(c1, c2) between closed bodies, with an
/// overlap flag. `lower <= dist <= upper`; overlapping bodies yield
/// (0, 0, overlap = true).
#[derive(Clone, Copy, Debug)]
pub struct DistanceEnclosure {
    pub lower: f64,
    pub upper: f64,
    pub overlap: bool,
}

/// Feasible near-optimal pair from alternating projections plus a
/// support-gap lower bound along the converged direction.
pub fn pair_distance(c1: &Component, c2: &Component) -> Result<(DistanceEnclosure, Vec<f64>, Vec<f64>)> {
    if c1.dim() != c2.dim() {
        return Err(Error::domain("components live in different dimensions"));
    }
    let mut x = c1.center.0.clone();
    let mut y = c2.project(&x);
    let mut last = f64::INFINITY;
    for _ in 0..10_000 {
        x = c1.project(&y);
        y = c2.project(&x);
        let d = norm(&sub(&x, &y));
        if (last - d).abs() < 1e-13 {
            break;
        }
        last = d;
    }
    let d = norm(&sub(&x, &y));
    let sl = slop_for(d + norm(&sub(&c1.center.0, &c2.center.0)));
    let upper = d + sl;

    // membership-based overlap: either projected point inside the other body
    if d < 1e-9 {
        let inside = c2.contains(&x, -1e-12) || c1.contains(&y, -1e-12);
        if inside || d < 1e-12 {
            return Ok((
                DistanceEnclosure {
                    lower: 0.0,
                    upper: 0.0,
                    overlap: true,
                },
                x,
                y,
            ));
        }
    }

    // support-gap lower bound along candidate directions
    let mut lower: f64 = 0.0;
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    if d > 1e-12 {
        dirs.push(scale(&sub(&y, &x), 1.0 / d));
    }
    let cc = sub(&c2.center.0, &c1.center.0);
    let ncc = norm(&cc);
    if ncc > 1e-12 {
        dirs.push(scale(&cc, 1.0 / ncc));
    }
    for u in &dirs {
        let h1 = support::support_upper(c1, u);
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        let h2 = support::support_upper(c2, &neg);
        // inf over K2 of <y,u> minus sup over K1 of <x,u>
        let gap = -h2 - h1;
        lower = lower.max(gap - sl);
    }
    lower = lower.max(0.0).min(upper);
    Ok((
        DistanceEnclosure {
            lower,
            upper,
            overlap: false,
        },
        x,
        y,
    ))
}

/// Rigorous enclosure of diam(closure(c1) union closure(c2)) together
/// with a feasible far pair attaining the lower bound.
pub fn pair_diameter(
    c1: &Component,
    c2: &Component,
) -> Result<(f64, f64, Vec<f64>, Vec<f64>)> {
    if c1.dim() != c2.dim() {
        return Err(Error::domain("components live in different dimensions"));
    }
    let CrossBound {
        lower: cross_lo,
        upper: cross_hi,
        far_a,
        far_b,
    } = cross_extreme(c1, c2)?;
    let d1 = component_diameter(c1)?;
    let d2 = component_diameter(c2)?;
    let lower = cross_lo.max(d1.0).max(d2.0);
    let upper = cross_hi.max(d1.1).max(d2.1);
    Ok((lower, upper, far_a, far_b))
}

/// Rigorous enclosure of a single component's diameter.
pub fn component_diameter(c: &Component) -> Result<(f64, f64)> {
    let CrossBound { lower, upper, .. } = cross_extreme(c, c)?;
    Ok((lower, upper.min(c.ball_diameter + slop_for(c.ball_diameter))))
}

/// Exact parameter interval of line ∩ component (ball chord intersected
/// with each slab's parameter interval). None when the line misses.
pub fn line_chord(c: &Component, line: &Line) -> Option<(f64, f64)> {
    let r = c.radius();
    let rel = sub(&line.base.0, &c.center.0);
    // |rel + t v|^2 = r^2
    let b = dot(&rel, &line.direction);
    let cc = dot(&rel, &rel) - r * r;
    let disc = b * b - cc;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let mut lo = -b - sq;
    let mut hi = -b + sq;
    for s in &c.slabs {
        let a = dot(&line.direction, &s.normal);
        let off = dot(&rel, &s.normal);
        if a.abs() < 1e-15 {
            if off.abs() > s.half_width {
                return None;
            }
            continue;
        }
        let t1 = (-s.half_width - off) / a;
        let t2 = (s.half_width - off) / a;
        let (slo, shi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        lo = lo.max(slo);
        hi = hi.min(shi);
        if lo >= hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// Length of line ∩ shell: with l the perpendicular center distance,
/// 2(sqrt(r2^2-l^2) - sqrt(r1^2-l^2)) for l <= r1, 2 sqrt(r2^2-l^2) for
/// r1 < l <= r2, zero beyond.
pub fn annulus_chord_length(shell: &AnnulusShell, line: &Line) -> f64 {
    let l = line.distance_to(&shell.center.0);
    let (r1, r2) = (shell.r_inner, shell.r_outer);
    if l > r2 {
        return 0.0;
    }
    // stable products (r - l)(r + l)
    let outer = ((r2 - l) * (r2 + l)).max(0.0).sqrt();
    if l <= r1 {
        let inner = ((r1 - l) * (r1 + l)).max(0.0).sqrt();
        2.0 * (outer - inner)
    } else {
        2.0 * outer
    }
}

/// Total length of the union's intersection with a line (members are
/// disjoint, so chord lengths add).
pub fn union_line_length(union: &ComponentUnion, line: &Line) -> f64 {
    let mut total = 0.0;
    for c in &union.components {
        if let Some((lo, hi)) = line_chord(c, line) {
            total += hi - lo;
        }
    }
    for s in &union.shells {
        total += annulus_chord_length(s, line);
    }
    total
}

//! Avoidance criteria and machine-checkable certificates.
//!
//! The rigorous path is the pairwise criterion: for components of
//! diameter at most 1, the union contains an integral-distance pair iff
//! some pair of components admits an integer strictly between their
//! distance and joint diameter. Certificates compare integers against
//! rigorous enclosures; an integer within tol of the distance or
//! diameter boundary counts as "equal" (the open interval excludes it),
//! matching the open-set semantics. Line sampling corroborates but never
//! certifies.

use crate::error::{Error, Result};
use crate::geometry::{
    dot, norm, scale, sub, AnnulusShell, Component, ComponentUnion, Line, Point,
};
use crate::interval1d::{check_1d, Check1dOutcome, IntervalSet1D};
use crate::precision::{Dimension, PrecisionContext};
use crate::support::cross_extreme;
use crate::volumes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedAvoiding,
    Violation,
    Inconclusive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    Pairwise,
    LineSampled,
    OneDimExact,
    MonteCarlo,
}

/// Per-pair bound ledger entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairLedger {
    pub i: usize,
    pub j: usize,
    pub dist_lower: f64,
    pub dist_upper: f64,
    pub diam_lower: f64,
    pub diam_upper: f64,
    /// an integer strictly inside (dist, diam) at tol resolution, if any
    pub blocking_integer: Option<i64>,
    /// true when an integer sits in the enclosure's gray zone only
    pub boundary: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub pair: (usize, usize),
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub distance: f64,
    pub integer: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub method: CertMethod,
    pub bits: u32,
    pub tol: f64,
    pub ledger: Vec<PairLedger>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiameterCheck {
    pub pass: bool,
    /// first component whose diameter upper bound exceeds 1 + tol
    pub offending: Option<(usize, f64)>,
}

/// Lemma "diameter": every component of an avoiding set has diameter <= 1.
pub fn check_diameters(union: &ComponentUnion, tol: f64) -> Result<DiameterCheck> {
    for (idx, c) in union.components.iter().enumerate() {
        let (_, hi) = crate::geometry::component_diameter(c)?;
        if hi > 1.0 + tol {
            return Ok(DiameterCheck {
                pass: false,
                offending: Some((idx, hi)),
            });
        }
    }
    Ok(DiameterCheck {
        pass: true,
        offending: None,
    })
}

struct PairBounds {
    dist_lower: f64,
    dist_upper: f64,
    cross_lower: f64,
    diam_lower: f64,
    diam_upper: f64,
    near: (Vec<f64>, Vec<f64>),
    far: (Vec<f64>, Vec<f64>),
}

fn pair_bounds(c1: &Component, c2: &Component) -> Result<PairBounds> {
    let (enc, x, y) = crate::geometry::pair_distance(c1, c2)?;
    if enc.overlap {
        return Err(Error::precondition(
            "components overlap; the union is not pairwise disjoint",
        ));
    }
    let cross = cross_extreme(c1, c2)?;
    let d1 = crate::geometry::component_diameter(c1)?;
    let d2 = crate::geometry::component_diameter(c2)?;
    Ok(PairBounds {
        dist_lower: enc.lower,
        dist_upper: enc.upper,
        cross_lower: cross.lower,
        diam_lower: cross.lower.max(d1.0).max(d2.0),
        diam_upper: cross.upper.max(d1.1).max(d2.1),
        near: (x, y),
        far: (cross.far_a, cross.far_b),
    })
}

/// Pulls a feasible point strictly inside the open component.
fn nudge_inside(c: &Component, x: &[f64]) -> Vec<f64> {
    let rel = sub(x, &c.center.0);
    let mut out = c.center.0.clone();
    let shrink = 1.0 - 1e-9;
    for (o, r) in out.iter_mut().zip(&rel) {
        *o += shrink * r;
    }
    out
}

/// Witness construction by segment bisection: the components are convex,
/// so straight paths between the near pair and the far pair realize
/// every intermediate distance.
fn bisect_witness(
    c1: &Component,
    c2: &Component,
    m: i64,
    near: &(Vec<f64>, Vec<f64>),
    far: &(Vec<f64>, Vec<f64>),
) -> Option<(Vec<f64>, Vec<f64>, f64)> {
    let x0 = nudge_inside(c1, &near.0);
    let y0 = nudge_inside(c2, &near.1);
    let x1 = nudge_inside(c1, &far.0);
    let y1 = nudge_inside(c2, &far.1);
    let f = |t: f64| -> (Vec<f64>, Vec<f64>, f64) {
        let x: Vec<f64> = x0
            .iter()
            .zip(&x1)
            .map(|(a, b)| a + t * (b - a))
            .collect();
        let y: Vec<f64> = y0
            .iter()
            .zip(&y1)
            .map(|(a, b)| a + t * (b - a))
            .collect();
        let d = norm(&sub(&x, &y));
        (x, y, d)
    };
    let target = m as f64;
    let (_, _, d_lo) = f(0.0);
    let (_, _, d_hi) = f(1.0);
    if !(d_lo < target && target < d_hi) {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (_, _, d) = f(mid);
        if d < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let (x, y, d) = f(0.5 * (lo + hi));
    Some((x, y, d))
}

/// The pairwise certificate: rigorous verdicts from the interval test on
/// every unordered pair.
pub fn pairwise_certify(ctx: &PrecisionContext, union: &ComponentUnion) -> Result<Certificate> {
    let tol = ctx.tol();
    if !union.shells.is_empty() {
        return Err(Error::precondition(
            "the pairwise criterion applies to bounded components only, not shells",
        ));
    }
    if union.components.is_empty() {
        return Err(Error::precondition("the union has no components"));
    }
    let diam_check = check_diameters(union, tol)?;
    if !diam_check.pass {
        let (idx, hi) = diam_check.offending.unwrap();
        return Err(Error::precondition(format!(
            "component {idx} has diameter upper bound {hi} > 1 + tol"
        )));
    }

    let n = union.components.len();
    let mut ledger = Vec::new();
    let mut witness: Option<Witness> = None;
    let mut any_blocking = false;
    let mut notes = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            let pb = pair_bounds(&union.components[i], &union.components[j])?;
            let mut blocking: Option<i64> = None;
            let mut boundary = false;
            let m_lo = pb.dist_lower.floor() as i64;
            let m_hi = pb.diam_upper.ceil() as i64;
            for m in m_lo..=m_hi {
                if m < 1 {
                    continue;
                }
                let mf = m as f64;
                let strictly_inside = pb.dist_lower + tol <= mf && mf <= pb.diam_upper - tol;
                if !strictly_inside {
                    continue;
                }
                any_blocking = true;
                if blocking.is_none() {
                    blocking = Some(m);
                }
                let violating = pb.dist_upper + tol <= mf && mf <= pb.cross_lower - tol;
                if violating && witness.is_none() {
                    if let Some((x, y, d)) =
                        bisect_witness(&union.components[i], &union.components[j], m, &pb.near, &pb.far)
                    {
                        witness = Some(Witness {
                            pair: (i, j),
                            x,
                            y,
                            distance: d,
                            integer: m,
                        });
                    } else {
                        notes.push(format!(
                            "pair ({i}, {j}): integer {m} is rigorously inside but bisection failed"
                        ));
                    }
                } else if !violating {
                    boundary = true;
                }
            }
            ledger.push(PairLedger {
                i,
                j,
                dist_lower: pb.dist_lower,
                dist_upper: pb.dist_upper,
                diam_lower: pb.diam_lower,
                diam_upper: pb.diam_upper,
                blocking_integer: blocking,
                boundary,
            });
        }
    }

    let verdict = if let Some(w) = &witness {
        debug_assert!((w.distance - w.integer as f64).abs() < ctx.tol());
        Verdict::Violation
    } else if any_blocking {
        Verdict::Inconclusive
    } else {
        Verdict::CertifiedAvoiding
    };
    Ok(Certificate {
        verdict,
        method: CertMethod::Pairwise,
        bits: ctx.bits(),
        tol,
        ledger,
        witness,
        notes,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineCheckReport {
    pub pass: bool,
    pub lines_checked: usize,
    pub max_total_length: f64,
    /// the worst line by total intersection length
    pub worst_line: Option<Line>,
    /// count of condition (ii) failures (gap vs joint chord length)
    pub ii_failures: usize,
}

fn sample_in_component<R: Rng>(c: &Component, rng: &mut R) -> Vec<f64> {
    let d = c.dim();
    let r = c.radius();
    loop {
        // uniform in the ball: Gaussian direction, radius ~ r U^(1/d)
        let mut v: Vec<f64> = (0..d)
            .map(|_| {
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (-2.0 * u1.ln()).sqrt() * u2.cos()
            })
            .collect();
        let n = norm(&v);
        if n < 1e-12 {
            continue;
        }
        let radius = r * rng.gen_range(0.0f64..1.0).powf(1.0 / d as f64);
        for vi in v.iter_mut() {
            *vi *= radius / n;
        }
        let x: Vec<f64> = c.center.0.iter().zip(&v).map(|(a, b)| a + b).collect();
        if c.slabs
            .iter()
            .all(|s| dot(&v, &s.normal).abs() < s.half_width)
        {
            return x;
        }
    }
}

fn random_unit<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d)
            .map(|_| {
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (-2.0 * u1.ln()).sqrt() * u2.cos()
            })
            .collect();
        let n = norm(&v);
        if n > 1e-9 {
            return scale(&v, 1.0 / n);
        }
    }
}

/// Samples N lines (center pairs, random point pairs, random placements)
/// and checks both line-intersection conditions. Sampled evidence only:
/// a pass is never upgraded to a certificate.
pub fn line_criterion_check(
    union: &ComponentUnion,
    seed: u64,
    n_lines: usize,
    tol: f64,
) -> Result<LineCheckReport> {
    if n_lines == 0 {
        return Err(Error::usage("line check needs at least one line"));
    }
    let d = union.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines: Vec<Line> = Vec::new();

    let comps = &union.components;
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if let Ok(l) = Line::through(&comps[i].center.0, &comps[j].center.0) {
                lines.push(l);
            }
        }
    }

    // bounding box scale for random offsets
    let mut extent = 1.0f64;
    for c in comps {
        extent = extent.max(norm(&c.center.0) + c.radius());
    }
    for s in &union.shells {
        extent = extent.max(norm(&s.center.0) + s.r_outer);
    }

    while lines.len() < n_lines {
        let choice = rng.gen_range(0..2u8);
        if choice == 0 && comps.len() >= 2 {
            let i = rng.gen_range(0..comps.len());
            let mut j = rng.gen_range(0..comps.len());
            while j == i {
                j = rng.gen_range(0..comps.len());
            }
            let x = sample_in_component(&comps[i], &mut rng);
            let y = sample_in_component(&comps[j], &mut rng);
            if let Ok(l) = Line::through(&x, &y) {
                lines.push(l);
            }
        } else {
            let dir = random_unit(d, &mut rng);
            let base: Vec<f64> = (0..d).map(|_| rng.gen_range(-extent..extent)).collect();
            if let Ok(l) = Line::new(Point(base), dir) {
                lines.push(l);
            }
        }
    }
    lines.truncate(n_lines.max(lines.len().min(n_lines + comps.len() * comps.len())));

    let mut max_total = 0.0f64;
    let mut worst: Option<Line> = None;
    let mut ii_failures = 0usize;
    let mut pass = true;

    for line in &lines {
        let mut chords: Vec<(f64, f64)> = Vec::new();
        let mut total = 0.0;
        for c in comps {
            if let Some((lo, hi)) = crate::geometry::line_chord(c, line) {
                chords.push((lo, hi));
                total += hi - lo;
            }
        }
        for s in &union.shells {
            total += crate::geometry::annulus_chord_length(s, line);
        }
        if total > max_total {
            max_total = total;
            worst = Some(line.clone());
        }
        if total > 1.0 + tol {
            pass = false;
        }
        chords.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for a in 0..chords.len() {
            for b in a + 1..chords.len() {
                let gap = chords[b].0 - chords[a].1;
                if gap <= tol {
                    continue;
                }
                let nearest = gap.round();
                if (gap - nearest).abs() <= tol {
                    continue; // gap is integral: no (ii) constraint
                }
                let joint = (chords[a].1 - chords[a].0) + (chords[b].1 - chords[b].0);
                if gap.ceil() - gap < joint - tol {
                    ii_failures += 1;
                    pass = false;
                }
            }
        }
    }
    Ok(LineCheckReport {
        pass,
        lines_checked: lines.len(),
        max_total_length: max_total,
        worst_line: worst,
        ii_failures,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepulsionReport {
    pub pass: bool,
    pub pairs_flagged: usize,
    pub failures: Vec<(usize, usize)>,
}

/// Lemma "repulsion" consistency: pairs whose joint volume exceeds the
/// unit-ball volume must be at distance >= 1. Failure indicates a
/// certifier inconsistency, not bad input.
pub fn repulsion_check(
    ctx: &PrecisionContext,
    union: &ComponentUnion,
    seed: u64,
) -> Result<RepulsionReport> {
    let d = Dimension::new(union.dimension)?;
    let ball = volumes::ball_volume(ctx, d, &ctx.float(1u32))?.to_f64();
    let vols: Vec<f64> = union
        .components
        .iter()
        .enumerate()
        .map(|(idx, c)| component_volume(ctx, c, 200_000, seed ^ (idx as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut flagged = 0usize;
    let mut failures = Vec::new();
    for i in 0..union.components.len() {
        for j in i + 1..union.components.len() {
            if vols[i] + vols[j] > ball {
                flagged += 1;
                let (enc, _, _) =
                    crate::geometry::pair_distance(&union.components[i], &union.components[j])?;
                if enc.lower < 1.0 - ctx.tol() {
                    failures.push((i, j));
                }
            }
        }
    }
    Ok(RepulsionReport {
        pass: failures.is_empty(),
        pairs_flagged: flagged,
        failures,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McIntegralPair {
    pub min_margin: f64,
    pub pair: (usize, usize),
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub distance: f64,
}

/// distance to the nearest positive integer
fn integer_margin(dist: f64) -> f64 {
    if dist < 0.5 {
        1.0 - dist
    } else {
        (dist - dist.round()).abs()
    }
}

/// Stochastic oracle: samples point pairs (cross-component when the
/// union has several components) and reports the smallest distance to a
/// positive integer. Deterministic for a given seed.
pub fn monte_carlo_integral_pair(
    union: &ComponentUnion,
    samples: u64,
    seed: u64,
) -> Result<McIntegralPair> {
    if samples == 0 {
        return Err(Error::usage("sample count must be >= 1"));
    }
    if union.components.is_empty() {
        return Err(Error::domain("the union has no components to sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = union.components.len();
    let mut best = McIntegralPair {
        min_margin: f64::INFINITY,
        pair: (0, 0),
        x: Vec::new(),
        y: Vec::new(),
        distance: 0.0,
    };
    for _ in 0..samples {
        let (i, j) = if n == 1 {
            (0, 0)
        } else {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            (i.min(j), i.max(j))
        };
        let x = sample_in_component(&union.components[i], &mut rng);
        let y = sample_in_component(&union.components[j], &mut rng);
        let dist = norm(&sub(&x, &y));
        let margin = integer_margin(dist);
        if margin < best.min_margin {
            best = McIntegralPair {
                min_margin: margin,
                pair: (i, j),
                x,
                y,
                distance: dist,
            };
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    Analytic,
    MonteCarlo,
    Auto,
}

fn component_volume_analytic(ctx: &PrecisionContext, c: &Component) -> Result<f64> {
    let d = Dimension::new(c.dim())?;
    match c.slabs.len() {
        0 => Ok(volumes::ball_volume(ctx, d, &ctx.float(c.ball_diameter))?.to_f64()),
        1 => {
            let diam = ctx.float(c.ball_diameter);
            let width = ctx.float(2.0 * c.slabs[0].half_width);
            Ok(volumes::width_volume_bound(ctx, d, &diam, &width)?.to_f64())
        }
        _ => Err(Error::usage(
            "analytic volume covers balls and single-slab slices; use monte_carlo",
        )),
    }
}

fn component_volume_mc(
    ctx: &PrecisionContext,
    c: &Component,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    let d = Dimension::new(c.dim())?;
    let ball = volumes::ball_volume(ctx, d, &ctx.float(c.ball_diameter))?.to_f64();
    if c.slabs.is_empty() {
        return Ok((ball, 0.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = c.radius();
    let dim = c.dim();
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut v: Vec<f64> = (0..dim)
            .map(|_| {
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (-2.0 * u1.ln()).sqrt() * u2.cos()
            })
            .collect();
        let nv = norm(&v);
        if nv < 1e-12 {
            continue;
        }
        let radius = r * rng.gen_range(0.0f64..1.0).powf(1.0 / dim as f64);
        for vi in v.iter_mut() {
            *vi *= radius / nv;
        }
        if c.slabs
            .iter()
            .all(|s| dot(&v, &s.normal).abs() < s.half_width)
        {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let sigma = ball * (p * (1.0 - p) / samples as f64).sqrt();
    Ok((ball * p, 3.0 * sigma))
}

fn component_volume(ctx: &PrecisionContext, c: &Component, samples: u64, seed: u64) -> Result<f64> {
    if c.slabs.len() <= 1 {
        component_volume_analytic(ctx, c)
    } else {
        Ok(component_volume_mc(ctx, c, samples, seed)?.0)
    }
}

fn shell_volume(ctx: &PrecisionContext, s: &AnnulusShell, dim: usize) -> Result<f64> {
    let d = Dimension::new(dim)?;
    let outer = volumes::ball_volume(ctx, d, &ctx.float(2.0 * s.r_outer))?.to_f64();
    let inner = volumes::ball_volume(ctx, d, &ctx.float(2.0 * s.r_inner))?.to_f64();
    Ok(outer - inner)
}

/// Volume of the union with an error bound: exact for balls, single-slab
/// slices and shells; Monte-Carlo rejection for multi-slab bodies.
pub fn volume_of_union(
    ctx: &PrecisionContext,
    union: &ComponentUnion,
    method: VolumeMethod,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    let mut value = 0.0f64;
    let mut error = 0.0f64;
    for (idx, c) in union.components.iter().enumerate() {
        match method {
            VolumeMethod::Analytic => {
                value += component_volume_analytic(ctx, c)?;
            }
            VolumeMethod::MonteCarlo => {
                let (v, e) = component_volume_mc(ctx, c, samples, seed ^ (idx as u64 + 1))?;
                value += v;
                error += e;
            }
            VolumeMethod::Auto => {
                if c.slabs.len() <= 1 {
                    value += component_volume_analytic(ctx, c)?;
                } else {
                    let (v, e) = component_volume_mc(ctx, c, samples, seed ^ (idx as u64 + 1))?;
                    value += v;
                    error += e;
                }
            }
        }
    }
    for s in &union.shells {
        value += shell_volume(ctx, s, union.dimension)?;
    }
    Ok((value, error))
}

/// Re-exported 1-D criterion (exact rational arithmetic).
pub fn check_interval_set(set: &IntervalSet1D) -> Result<Check1dOutcome> {
    check_1d(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(center: Vec<f64>, diameter: f64) -> Component {
        Component::ball(center, diameter).unwrap()
    }

    fn two_balls(gap_centers: f64) -> ComponentUnion {
        ComponentUnion::new(
            2,
            vec![
                ball(vec![0.0, 0.0], 0.5),
                ball(vec![gap_centers, 0.0], 0.5),
            ],
        )
        .unwrap()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn certified_two_ball_instance() {
        let cert = pairwise_certify(&ctx(), &two_balls(5.5)).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedAvoiding);
        assert_eq!(cert.ledger.len(), 1);
        let entry = &cert.ledger[0];
        assert!(entry.blocking_integer.is_none());
        assert!((entry.dist_lower - 5.0).abs() < 1e-8);
        assert!((entry.diam_upper - 6.0).abs() < 1e-8);
    }

    #[test]
    fn violating_two_ball_instance() {
        let cert = pairwise_certify(&ctx(), &two_balls(5.75)).unwrap();
        assert_eq!(cert.verdict, Verdict::Violation);
        let w = cert.witness.expect("violation carries a witness");
        assert_eq!(w.integer, 6);
        assert!((w.distance - 6.0).abs() < 1e-9);
    }

    #[test]
    fn single_component_is_vacuous() {
        let u = ComponentUnion::new(2, vec![ball(vec![0.0, 0.0], 1.0)]).unwrap();
        let cert = pairwise_certify(&ctx(), &u).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedAvoiding);
        assert!(cert.ledger.is_empty());
    }

    #[test]
    fn oversized_component_is_rejected() {
        let u = ComponentUnion::new(2, vec![ball(vec![0.0, 0.0], 1.2)]).unwrap();
        assert!(pairwise_certify(&ctx(), &u).is_err());
        let check = check_diameters(&u, 1e-9).unwrap();
        assert!(!check.pass);
        assert_eq!(check.offending.unwrap().0, 0);
    }

    #[test]
    fn overlapping_components_are_rejected() {
        let u = ComponentUnion::new(
            2,
            vec![ball(vec![0.0, 0.0], 0.5), ball(vec![0.1, 0.0], 0.5)],
        )
        .unwrap();
        assert!(pairwise_certify(&ctx(), &u).is_err());
    }

    #[test]
    fn line_check_flags_long_chords() {
        // two balls of diameter 0.6 with centers 0.7 apart: the x-axis
        // accumulates length 1.2
        let u = ComponentUnion::new(
            2,
            vec![ball(vec![0.0, 0.0], 0.6), ball(vec![0.7, 0.0], 0.6)],
        )
        .unwrap();
        let report = line_criterion_check(&u, 7, 500, 1e-9).unwrap();
        assert!(!report.pass);
        assert!(report.max_total_length > 1.0 + 1e-9);
    }

    #[test]
    fn line_check_accepts_single_ball() {
        let u = ComponentUnion::new(2, vec![ball(vec![0.0, 0.0], 1.0)]).unwrap();
        let report = line_criterion_check(&u, 7, 200, 1e-9).unwrap();
        assert!(report.pass);
        assert!(report.max_total_length <= 1.0 + 1e-9);
    }

    #[test]
    fn mc_margins() {
        // certified instance (distances in the open interval (5, 6)):
        // sampled pairs approach the boundary integers like N^(-1/3), so
        // the margin is small but bounded well away from zero
        let good = two_balls(5.5);
        let mc = monte_carlo_integral_pair(&good, 20_000, 42).unwrap();
        assert!(mc.min_margin > 1e-4, "margin {}", mc.min_margin);
        // violating instance: the integer 6 is strictly inside (5.25, 6.25)
        let bad = two_balls(5.75);
        let mc = monte_carlo_integral_pair(&bad, 200_000, 42).unwrap();
        assert!(mc.min_margin < 1e-2, "margin {}", mc.min_margin);
        // single ball of diameter 0.5: every distance is below 1/2
        let single = ComponentUnion::new(2, vec![ball(vec![0.0, 0.0], 0.5)]).unwrap();
        let mc = monte_carlo_integral_pair(&single, 10_000, 42).unwrap();
        assert!(mc.min_margin >= 0.5);
    }

    #[test]
    fn volume_methods_agree() {
        let c = ctx();
        let u = two_balls(5.5);
        let (analytic, _) = volume_of_union(&c, &u, VolumeMethod::Analytic, 0, 0).unwrap();
        let want = 2.0 * (0.5f64).powi(2) * std::f64::consts::PI / 4.0;
        assert!((analytic - want).abs() < 1e-12);
        let (mc, err) = volume_of_union(&c, &u, VolumeMethod::MonteCarlo, 200_000, 3).unwrap();
        assert!((mc - want).abs() < err.max(3e-3));
    }

    #[test]
    fn shell_volumes_are_exact_differences() {
        let c = ctx();
        let u = ComponentUnion {
            dimension: 2,
            components: vec![],
            shells: vec![AnnulusShell::new(vec![0.0, 0.0], 3.0, 5.0).unwrap()],
        };
        let (v, e) = volume_of_union(&c, &u, VolumeMethod::Analytic, 0, 0).unwrap();
        assert_eq!(e, 0.0);
        let want = std::f64::consts::PI * (25.0 - 9.0);
        assert!((v - want).abs() < 1e-9);
    }

    #[test]
    fn repulsion_on_disjoint_small_balls_is_vacuous() {
        let c = ctx();
        let u = ComponentUnion::new(
            2,
            vec![ball(vec![0.0, 0.0], 0.1), ball(vec![0.3, 0.0], 0.1)],
        )
        .unwrap();
        let rep = repulsion_check(&c, &u, 5).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.pairs_flagged, 0);
    }
}

//! The explicit extremal configurations, parameterized as in the source
//! constructions, ready for certification and measurement.
//!
//! Builders are deterministic. They validate their own parameter
//! domains and report construction-specific side conditions (the p-gon
//! scaling system, the inscribed-slice adequacy check, the
//! no-three-on-a-line validator). Pipelines chain search -> build ->
//! certify -> measure and return the first rigorously certified
//! candidate; the searches are heuristics, the certificate is the
//! ground truth.

use crate::certifier::{
    monte_carlo_integral_pair, pairwise_certify, volume_of_union, Certificate, Verdict,
    VolumeMethod,
};
use crate::diophantine::{find_k, fractional_part, golden_ratio_problem, solve_pgon_system, PgonForm};
use crate::error::{Error, Result};
use crate::geometry::{dot, norm, scale, sub, AnnulusShell, Component, ComponentUnion, Line, Point, Slab};
use crate::interval1d::IntervalSet1D;
use crate::precision::{Dimension, PrecisionContext};
use crate::volumes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;
use rug::Rational;
use serde::{Deserialize, Serialize};

/// Regular p-gon vertex in the first two coordinates of R^d, enumerated
/// clockwise so that the chord between vertices 1 and 2 is horizontal.
fn pgon_vertex(d: usize, p: u64, circumradius: f64, index: usize) -> Vec<f64> {
    let angle = std::f64::consts::FRAC_PI_2 + std::f64::consts::PI / p as f64
        - 2.0 * std::f64::consts::PI * index as f64 / p as f64;
    let mut v = vec![0.0; d];
    v[0] = circumradius * angle.cos();
    v[1] = circumradius * angle.sin();
    v
}

/// Five discs of diameter 1/2 - 2e at the vertices of a regular pentagon
/// with side length 1/2 - 2e + k.
pub fn build_pentagon_discs(k: u64, epsilon: f64) -> Result<ComponentUnion> {
    if k < 2 {
        return Err(Error::domain("pentagon construction needs integer k >= 2"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0 / 7.0) {
        return Err(Error::domain("pentagon construction needs 0 < epsilon < 1/7"));
    }
    let side = 0.5 - 2.0 * epsilon + k as f64;
    let circumradius = side / (2.0 * (std::f64::consts::PI / 5.0).sin());
    let diameter = 0.5 - 2.0 * epsilon;
    let components = (0..5)
        .map(|i| Component::ball(pgon_vertex(2, 5, circumradius, i), diameter))
        .collect::<Result<Vec<_>>>()?;
    ComponentUnion::new(2, components)
}

#[derive(Clone, Debug)]
pub struct PgonBalls {
    pub union: ComponentUnion,
    /// whether the scaling system held for every realized diagonal index
    pub system_satisfied: bool,
    pub worst_frac: f64,
}

/// n balls of diameter 1/2 - 2e at consecutive vertices of a regular
/// p-gon with circumradius k, embedded in the first two coordinates.
/// A k that fails the scaling system still builds, flagged unverified.
pub fn build_pgon_balls(
    ctx: &PrecisionContext,
    d: Dimension,
    n: u64,
    p: u64,
    k: u64,
    epsilon: f64,
) -> Result<PgonBalls> {
    let indices: Vec<usize> = (0..n as usize).collect();
    build_pgon_balls_at(ctx, d, &indices, p, k, epsilon)
}

/// Vertex-list variant of the p-gon ball construction.
pub fn build_pgon_balls_at(
    ctx: &PrecisionContext,
    d: Dimension,
    indices: &[usize],
    p: u64,
    k: u64,
    epsilon: f64,
) -> Result<PgonBalls> {
    let n = indices.len() as u64;
    if d.get() < 2 {
        return Err(Error::domain("the p-gon construction needs d >= 2"));
    }
    if n == 0 || p < n || !is_odd_prime(p) {
        return Err(Error::domain("need an odd prime p >= n"));
    }
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::domain("need 0 < epsilon < 1/4"));
    }
    if k == 0 {
        return Err(Error::domain("circumradius k must be >= 1"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for &i in indices {
        if i >= p as usize || !seen.insert(i) {
            return Err(Error::domain("vertex indices must be distinct and < p"));
        }
    }
    let diameter = 0.5 - 2.0 * epsilon;
    let components = indices
        .iter()
        .map(|&i| Component::ball(pgon_vertex(d.get(), p, k as f64, i), diameter))
        .collect::<Result<Vec<_>>>()?;
    let union = ComponentUnion::new(d.get(), components)?;

    // realized diagonal indices and the scaling system check
    let mut realized = std::collections::BTreeSet::new();
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            let diff = (j as i64 - i as i64).unsigned_abs() % p;
            realized.insert(diff.min(p - diff));
        }
    }
    let bits = ctx.guard_bits();
    let pi = ctx.guard_pi();
    let mut worst = Float::with_val(bits, -1f64);
    for j in realized {
        let mut m = Float::with_val(bits, &pi * (j as u32));
        m /= p as u32;
        m.sin_mut();
        m *= 2u32;
        m *= k;
        m -= 0.5f64;
        m += 2.0 * epsilon;
        let f = fractional_part(&m);
        if f > worst {
            worst = f;
        }
    }
    let worst_f64 = worst.to_f64();
    Ok(PgonBalls {
        union,
        system_satisfied: worst_f64 <= 4.0 * epsilon,
        worst_frac: worst_f64,
    })
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut q = 3;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 2;
    }
    true
}

/// Two truncated balls: diameter 1 - 2/k, caps cut at +-(1/4 - 1/k)
/// along the first axis, the copy shifted dk + 1/2 - 2/k.
pub fn build_two_slices(d: Dimension, k: u64) -> Result<ComponentUnion> {
    if k < 5 {
        return Err(Error::domain("the two-slice construction needs integer k >= 5"));
    }
    let dd = d.get();
    let kf = k as f64;
    let diameter = 1.0 - 2.0 / kf;
    let half_width = 0.25 - 1.0 / kf;
    let shift = dd as f64 * kf + 0.5 - 2.0 / kf;
    let mut e1 = vec![0.0; dd];
    e1[0] = 1.0;
    let make = |center: Vec<f64>| -> Result<Component> {
        Component {
            center: Point(center),
            ball_diameter: diameter,
            slabs: vec![Slab {
                normal: e1.clone(),
                half_width,
            }],
        }
        .validated()
    };
    let mut c2 = vec![0.0; dd];
    c2[0] = shift;
    ComponentUnion::new(dd, vec![make(vec![0.0; dd])?, make(c2)?])
}

/// Support of the inscribed slice (diameter 1-2e, width 1/2-2e, cuts
/// orthogonal to the x-axis) along a direction at angle `theta` from the
/// x-axis.
fn inscribed_slice_support(epsilon: f64, cos_theta: f64) -> f64 {
    let r = (1.0 - 2.0 * epsilon) / 2.0;
    let w = 0.25 - epsilon;
    let t = cos_theta.abs().min(1.0);
    if r * t <= w {
        r
    } else {
        w * t + (r * r - w * w).sqrt() * (1.0 - t * t).max(0.0).sqrt()
    }
}

/// p-adequacy: does every cutting direction of the n-consecutive-vertex
/// construction keep the inscribed slice inside the cut slab? Depends
/// only on (n, p, epsilon). Returns the minimum margin and the first
/// failing vertex if any.
pub fn slice_inscription_margins(n: u64, p: u64, epsilon: f64) -> (f64, Option<usize>) {
    let target = 0.25 - epsilon / 2.0;
    let mut min_margin = f64::INFINITY;
    let mut failing = None;
    for i in 0..n as usize {
        for j in 0..n as usize {
            if i == j {
                continue;
            }
            // chord(i, j) deviates from chord(1, 2) by (pi/p)(i + j - 1)
            // with zero-based indices
            let theta = std::f64::consts::PI / p as f64 * (i as f64 + j as f64 - 1.0);
            let h = inscribed_slice_support(epsilon, theta.cos());
            let margin = target - h;
            if margin < min_margin {
                min_margin = margin;
            }
            if margin < 0.0 && failing.is_none() {
                failing = Some(i);
            }
        }
    }
    (min_margin, failing)
}

/// Smallest odd prime p >= max(n, 3) passing the inscription check.
pub fn adequate_slice_prime(n: u64, epsilon: f64, p_max: u64) -> Option<u64> {
    let mut p = n.max(3);
    if p % 2 == 0 {
        p += 1;
    }
    while p <= p_max {
        if is_odd_prime(p) {
            let (margin, _) = slice_inscription_margins(n, p, epsilon);
            if margin > 0.0 {
                return Some(p);
            }
        }
        p += 2;
    }
    None
}

#[derive(Clone, Debug)]
pub struct PgonSlices {
    pub union: ComponentUnion,
    /// inscription margin per component (all nonnegative when built)
    pub inscribed_margins: Vec<f64>,
}

/// n balls of diameter 1 - e at consecutive p-gon vertices (circumradius
/// k), each cut to width 1/2 - e along every center-to-center direction.
/// Errors with the failing vertex when p is too small for the inscribed
/// slice at this epsilon.
pub fn build_pgon_slices(
    d: Dimension,
    n: u64,
    p: u64,
    k: u64,
    epsilon: f64,
) -> Result<PgonSlices> {
    if d.get() < 2 {
        return Err(Error::domain("the p-gon construction needs d >= 2"));
    }
    if n < 2 || p < n || !is_odd_prime(p) {
        return Err(Error::domain("need an odd prime p >= n >= 2"));
    }
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::domain("need 0 < epsilon < 1/4"));
    }
    let dd = d.get();
    let centers: Vec<Vec<f64>> = (0..n as usize)
        .map(|i| pgon_vertex(dd, p, k as f64, i))
        .collect();
    let half_width = (0.5 - epsilon) / 2.0;
    let mut components = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let mut slabs = Vec::new();
        for j in 0..n as usize {
            if i == j {
                continue;
            }
            let dir = sub(&centers[j], &centers[i]);
            let nd = norm(&dir);
            if nd < 1e-12 {
                return Err(Error::domain("coincident p-gon vertices"));
            }
            slabs.push(Slab {
                normal: scale(&dir, 1.0 / nd),
                half_width,
            });
        }
        components.push(
            Component {
                center: Point(centers[i].clone()),
                ball_diameter: 1.0 - epsilon,
                slabs,
            }
            .validated()?,
        );
    }
    let union = ComponentUnion::new(dd, components)?;

    // inscription check against the actual cut directions
    let ex = {
        let mut e = vec![0.0; dd];
        e[0] = 1.0;
        e
    };
    let target = 0.25 - epsilon / 2.0;
    let mut margins = Vec::with_capacity(n as usize);
    for (i, c) in union.components.iter().enumerate() {
        let mut min_margin = f64::INFINITY;
        for s in &c.slabs {
            let h = inscribed_slice_support(epsilon, dot(&s.normal, &ex));
            min_margin = min_margin.min(target - h);
        }
        if min_margin < 0.0 {
            return Err(Error::PTooSmall { vertex: i });
        }
        margins.push(min_margin);
    }
    Ok(PgonSlices {
        union,
        inscribed_margins: margins,
    })
}

/// One ball of diameter 1 - e plus n - 1 tiny balls, all packed strictly
/// inside the open unit-diameter ball.
pub fn build_nested(d: Dimension, n: u64, epsilon: f64) -> Result<ComponentUnion> {
    let dd = d.get();
    if dd < 2 {
        return Err(Error::domain("the nested construction needs d >= 2"));
    }
    if n == 1 {
        let diam = 1.0 - epsilon;
        if !(diam > 0.0 && epsilon >= 0.0) {
            return Err(Error::domain("need 0 <= epsilon < 1"));
        }
        return ComponentUnion::new(dd, vec![Component::ball(vec![0.0; dd], diam)?]);
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain("need 0 < epsilon < 1 for n >= 2"));
    }
    let big = Component::ball(vec![0.0; dd], 1.0 - epsilon)?;
    let tiny_diam = (epsilon / (2.0 * (n as f64 - 1.0))).min(epsilon / 8.0);
    let ring_radius = 0.5 - epsilon / 4.0;
    // strict disjointness: ring keeps tiny balls off the big ball and
    // inside the unit ball
    if !(ring_radius - tiny_diam / 2.0 > (1.0 - epsilon) / 2.0
        && ring_radius + tiny_diam / 2.0 < 0.5)
    {
        return Err(Error::Packing {
            n: n as usize,
            epsilon,
        });
    }
    let spacing = 2.0 * ring_radius * (std::f64::consts::PI / (n as f64 - 1.0)).sin();
    if n > 2 && spacing <= tiny_diam {
        return Err(Error::Packing {
            n: n as usize,
            epsilon,
        });
    }
    let mut components = vec![big];
    for i in 0..(n - 1) as usize {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / (n as f64 - 1.0);
        let mut c = vec![0.0; dd];
        c[0] = ring_radius * angle.cos();
        c[1] = ring_radius * angle.sin();
        components.push(Component::ball(c, tiny_diam)?);
    }
    ComponentUnion::new(dd, components)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparatedLayout {
    Ngon,
    Parabola,
}

/// n balls of diameter 1/2 in a layout where no line meets three of
/// them, validated by a projection-aware point-line distance check on
/// every center triple.
pub fn build_separated_balls(
    d: Dimension,
    n: u64,
    k: f64,
    layout: SeparatedLayout,
) -> Result<ComponentUnion> {
    let dd = d.get();
    if dd < 2 {
        return Err(Error::domain("separated balls need d >= 2"));
    }
    if n < 2 {
        return Err(Error::domain("need n >= 2"));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::domain("scale k must be positive"));
    }
    let centers: Vec<Vec<f64>> = match layout {
        SeparatedLayout::Ngon => (0..n as usize)
            .map(|i| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let mut c = vec![0.0; dd];
                c[0] = k * angle.cos();
                c[1] = k * angle.sin();
                c
            })
            .collect(),
        SeparatedLayout::Parabola => (1..=n as usize)
            .map(|i| {
                let mut c = vec![0.0; dd];
                c[0] = i as f64 * k;
                c[1] = (i * i) as f64;
                c
            })
            .collect(),
    };
    // triple validator: a line through balls a and b deviates from the
    // center line by at most 1/4 (|t| + |1-t|) at projection parameter t,
    // so a third ball at distance > that + 1/4 + slack cannot be hit.
    let slack = 0.01;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            for m in 0..centers.len() {
                if m == i || m == j {
                    continue;
                }
                let ab = sub(&centers[j], &centers[i]);
                let am = sub(&centers[m], &centers[i]);
                let denom = dot(&ab, &ab);
                let t = dot(&am, &ab) / denom;
                let mut perp = am.clone();
                crate::geometry::axpy(&mut perp, -t, &ab);
                let dist = norm(&perp);
                let threshold = 0.25 * (t.abs() + (1.0 - t).abs()) + 0.25 + slack;
                if dist <= threshold {
                    return Err(Error::KTooSmall(i, j, m));
                }
            }
        }
    }
    let components = centers
        .into_iter()
        .map(|c| Component::ball(c, 0.5))
        .collect::<Result<Vec<_>>>()?;
    ComponentUnion::new(dd, components)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnuliReport {
    pub connectivity_ok: bool,
    /// sum of shell volumes of the A-family
    pub volume_sum: f64,
    /// the divergence witness: lambda_d(B_d) 2^d sum 1/n
    pub harmonic_lower: f64,
    pub lines_checked: usize,
    pub max_total_length: f64,
    pub max_b_sum: f64,
    pub max_a_sum_low: f64,
    pub max_a_sum_high: f64,
}

/// The unbounded-volume example: shells A_n (inner radius n, outer
/// n + 1/(d n^d)) and connector shells B_n for 30 <= n <= n_max, with
/// the line-length ledger mirroring the case split at l = 30.
pub fn build_annuli(
    ctx: &PrecisionContext,
    d: Dimension,
    n_max: u64,
    n_lines: usize,
    seed: u64,
) -> Result<(ComponentUnion, AnnuliReport)> {
    let dd = d.get();
    if dd < 2 {
        return Err(Error::domain("the annuli construction needs d >= 2"));
    }
    if n_max < 31 {
        return Err(Error::domain("need n_max >= 31"));
    }
    let mut shells = Vec::new();
    let mut b_shells = Vec::new();
    for n in 30..=n_max {
        let nf = n as f64;
        let delta = 1.0 / (dd as f64 * nf.powi(dd as i32));
        shells.push(AnnulusShell::new(vec![0.0; dd], nf, nf + delta)?);
        let mut bc = vec![0.0; dd];
        bc[1] = nf + 0.75;
        b_shells.push(AnnulusShell::new(bc, 1.0, 1.0 + 1.0 / nf.powi(4))?);
    }

    // connectivity: A_n and A_{n+1} both meet B_n (open-shell test)
    let meets = |a: &AnnulusShell, b: &AnnulusShell| -> bool {
        let c = norm(&sub(&a.center.0, &b.center.0));
        c < a.r_outer + b.r_outer && a.r_inner - b.r_outer < c && b.r_inner - a.r_outer < c
    };
    let mut connectivity_ok = true;
    for (i, b) in b_shells.iter().enumerate() {
        if !meets(&shells[i], b) {
            connectivity_ok = false;
        }
        if i + 1 < shells.len() && !meets(&shells[i + 1], b) {
            connectivity_ok = false;
        }
    }

    // partial volumes (exact differences at working precision)
    let mut volume_sum = ctx.float(0u32);
    let mut harmonic = ctx.float(0u32);
    let unit = volumes::ball_volume(ctx, d, &ctx.float(1u32))?;
    for n in 30..=n_max {
        let nf = ctx.float(n);
        let delta = {
            let mut t = ctx.float(n);
            t = t.pow(dd as u32);
            t *= dd as u32;
            t.recip()
        };
        let outer = {
            let mut t = ctx.float(&nf + &delta);
            t *= 2u32;
            t.pow(dd as u32)
        };
        let inner = {
            let t = ctx.float(&nf * 2u32);
            t.pow(dd as u32)
        };
        volume_sum += Float::with_val(ctx.bits(), &unit * &Float::with_val(ctx.bits(), &outer - &inner));
        let mut h = ctx.float(1u32);
        h /= n as u32;
        harmonic += h;
    }
    let mut harmonic_lower = Float::with_val(ctx.bits(), &unit * &harmonic);
    harmonic_lower <<= dd as u32;

    // stratified line ledger
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strat_max = n_max as f64 + 2.0;
    let mut max_total = 0.0f64;
    let mut max_b = 0.0f64;
    let mut max_a_low = 0.0f64;
    let mut max_a_high = 0.0f64;
    for idx in 0..n_lines {
        let l = (idx as f64 + rng.gen_range(0.0..1.0)) / n_lines as f64 * strat_max;
        // direction v, offset along a unit vector orthogonal to v
        let v = random_unit_vec(dd, &mut rng);
        let w = orthogonal_unit(&v, &mut rng);
        let line = Line::new(Point(scale(&w, l)), v)?;
        let mut a_sum = 0.0;
        for s in &shells {
            a_sum += crate::geometry::annulus_chord_length(s, &line);
        }
        let mut b_sum = 0.0;
        for s in &b_shells {
            b_sum += crate::geometry::annulus_chord_length(s, &line);
        }
        let total = a_sum + b_sum;
        max_total = max_total.max(total);
        max_b = max_b.max(b_sum);
        if l < 30.0 {
            max_a_low = max_a_low.max(a_sum);
        } else {
            max_a_high = max_a_high.max(a_sum);
        }
    }

    let mut union = ComponentUnion {
        dimension: dd,
        components: Vec::new(),
        shells,
    };
    union.shells.extend(b_shells);
    let report = AnnuliReport {
        connectivity_ok,
        volume_sum: volume_sum.to_f64(),
        harmonic_lower: harmonic_lower.to_f64(),
        lines_checked: n_lines,
        max_total_length: max_total,
        max_b_sum: max_b,
        max_a_sum_low: max_a_low,
        max_a_sum_high: max_a_high,
    };
    Ok((union, report))
}

fn random_unit_vec<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
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

fn orthogonal_unit<R: Rng>(v: &[f64], rng: &mut R) -> Vec<f64> {
    loop {
        let mut w = random_unit_vec(v.len(), rng);
        let t = dot(&w, v);
        crate::geometry::axpy(&mut w, -t, v);
        let n = norm(&w);
        if n > 1e-6 {
            return scale(&w, 1.0 / n);
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OneDimVariant {
    /// one interval of length 1 - e plus n - 1 of length e/n
    BigSmall,
    /// n intervals of length 1/n tiling the open unit interval
    Equal,
}

/// Disjoint open intervals inside (0, 1), exact rational endpoints.
pub fn build_1d_family(n: u64, epsilon: f64, variant: OneDimVariant) -> Result<IntervalSet1D> {
    if n == 0 {
        return Err(Error::domain("need n >= 1"));
    }
    match variant {
        OneDimVariant::Equal => {
            let nn = Rational::from(n);
            let intervals = (0..n)
                .map(|i| {
                    let a = Rational::from(i) / nn.clone();
                    let b = Rational::from(i + 1) / nn.clone();
                    (a, b)
                })
                .collect();
            IntervalSet1D::from_rationals(intervals)
        }
        OneDimVariant::BigSmall => {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(Error::domain("need 0 < epsilon < 1"));
            }
            let eps = Rational::from_f64(epsilon)
                .ok_or_else(|| Error::domain("epsilon must be finite"))?;
            let one = Rational::from(1u32);
            let big_end = Rational::from(&one - &eps);
            let mut intervals = vec![(Rational::new(), big_end.clone())];
            if n > 1 {
                // n - 1 slots of width eps/(n-1) over (1 - eps, 1), each
                // holding a centered interval of length eps/n
                let slots = Rational::from(n - 1);
                let slot_w = Rational::from(&eps / &slots);
                let len = Rational::from(&eps / &Rational::from(n));
                let margin = Rational::from(&(Rational::from(&slot_w - &len)) / &Rational::from(2u32));
                for s in 0..n - 1 {
                    let base = Rational::from(&big_end + &(Rational::from(s) * slot_w.clone()));
                    let a = Rational::from(&base + &margin);
                    let b = Rational::from(&a + &len);
                    intervals.push((a, b));
                }
            }
            IntervalSet1D::from_rationals(intervals)
        }
    }
}

/// One search -> build -> certify -> measure run.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub construction: String,
    pub params: String,
    pub k: Option<u64>,
    pub union: ComponentUnion,
    pub certificate: Certificate,
    pub volume: f64,
    pub volume_error: f64,
    pub paper_limit: f64,
    pub mc_margin: f64,
}

/// Pentagon pipeline: golden-ratio candidates (k-list form, tolerance
/// 3e), first rigorously certified k wins.
pub fn pentagon_pipeline(
    ctx: &PrecisionContext,
    epsilon: f64,
    k_max: u64,
    mc_samples: u64,
    seed: u64,
) -> Result<PipelineRun> {
    let tol3 = ctx.float(3.0 * epsilon);
    let problem = golden_ratio_problem(ctx, &tol3, k_max)?;
    let candidates = find_k(ctx, &problem)?;
    if candidates.is_empty() {
        return Err(Error::domain(format!(
            "no golden-ratio candidate k <= {k_max} at tolerance 3 x {epsilon}"
        )));
    }
    let mut last_reason = String::new();
    for (k, _) in &candidates {
        let union = build_pentagon_discs(*k, epsilon)?;
        let cert = pairwise_certify(ctx, &union)?;
        if cert.verdict == Verdict::CertifiedAvoiding {
            let (volume, volume_error) =
                volume_of_union(ctx, &union, VolumeMethod::Analytic, 0, seed)?;
            let d2 = Dimension::new(2)?;
            let limit = volumes::extremal_volume(ctx, volumes::ExtremalKind::FCirc, d2, 5)?
                .value
                .to_f64();
            let mc = monte_carlo_integral_pair(&union, mc_samples, seed)?;
            return Ok(PipelineRun {
                construction: "pentagon".into(),
                params: format!("epsilon={epsilon}, k={k}"),
                k: Some(*k),
                union,
                certificate: cert,
                volume,
                volume_error,
                paper_limit: limit,
                mc_margin: mc.min_margin,
            });
        }
        last_reason = format!("k = {k}: verdict {:?}", cert.verdict);
    }
    Err(Error::domain(format!(
        "no candidate k <= {k_max} certified at epsilon = {epsilon} ({last_reason})"
    )))
}

/// p-gon ball pipeline: theorem system candidates, certify-filtered.
pub fn pgon_balls_pipeline(
    ctx: &PrecisionContext,
    d: Dimension,
    n: u64,
    p: u64,
    epsilon: f64,
    k_max: u64,
    mc_samples: u64,
    seed: u64,
) -> Result<PipelineRun> {
    let eps = ctx.float(epsilon);
    let candidates = solve_pgon_system(ctx, p, PgonForm::BallConstruction, &eps, k_max, Some(n))?;
    for (k, _) in &candidates {
        let built = build_pgon_balls(ctx, d, n, p, *k, epsilon)?;
        let cert = pairwise_certify(ctx, &built.union)?;
        if cert.verdict == Verdict::CertifiedAvoiding {
            let (volume, volume_error) =
                volume_of_union(ctx, &built.union, VolumeMethod::Analytic, 0, seed)?;
            let limit = volumes::extremal_volume(ctx, volumes::ExtremalKind::FCirc, d, n)?
                .value
                .to_f64();
            let mc = monte_carlo_integral_pair(&built.union, mc_samples, seed)?;
            return Ok(PipelineRun {
                construction: "pgon-balls".into(),
                params: format!("d={d}, n={n}, p={p}, epsilon={epsilon}, k={k}"),
                k: Some(*k),
                union: built.union,
                certificate: cert,
                volume,
                volume_error,
                paper_limit: limit,
                mc_margin: mc.min_margin,
            });
        }
    }
    Err(Error::domain(format!(
        "no certified k <= {k_max} for the p-gon ball system (p={p}, epsilon={epsilon})"
    )))
}

/// p-gon slice pipeline: adequate prime, slice-form system, certify.
pub fn pgon_slices_pipeline(
    ctx: &PrecisionContext,
    d: Dimension,
    n: u64,
    epsilon: f64,
    k_max: u64,
    p_max: u64,
    mc_samples: u64,
    seed: u64,
) -> Result<PipelineRun> {
    let p = adequate_slice_prime(n, epsilon, p_max).ok_or_else(|| Error::PTooSmall { vertex: 0 })?;
    let eps = ctx.float(epsilon);
    let candidates = solve_pgon_system(ctx, p, PgonForm::SliceConstruction, &eps, k_max, Some(n))?;
    for (k, _) in &candidates {
        let built = build_pgon_slices(d, n, p, *k, epsilon)?;
        let cert = pairwise_certify(ctx, &built.union)?;
        if cert.verdict == Verdict::CertifiedAvoiding {
            let (volume, volume_error) =
                volume_of_union(ctx, &built.union, VolumeMethod::Auto, 1_000_000, seed)?;
            let limit = volumes::extremal_volume(ctx, volumes::ExtremalKind::F, d, n)?
                .value
                .to_f64();
            let mc = monte_carlo_integral_pair(&built.union, mc_samples, seed)?;
            return Ok(PipelineRun {
                construction: "pgon-slices".into(),
                params: format!("d={d}, n={n}, p={p}, epsilon={epsilon}, k={k}"),
                k: Some(*k),
                union: built.union,
                certificate: cert,
                volume,
                volume_error,
                paper_limit: limit,
                mc_margin: mc.min_margin,
            });
        }
    }
    Err(Error::domain(format!(
        "no certified k <= {k_max} for the p-gon slice system (p={p}, epsilon={epsilon})"
    )))
}

/// Two-slice pipeline (no search step).
pub fn two_slices_pipeline(
    ctx: &PrecisionContext,
    d: Dimension,
    k: u64,
    mc_samples: u64,
    seed: u64,
) -> Result<PipelineRun> {
    let union = build_two_slices(d, k)?;
    let cert = pairwise_certify(ctx, &union)?;
    let (volume, volume_error) = volume_of_union(ctx, &union, VolumeMethod::Analytic, 0, seed)?;
    let limit = volumes::extremal_volume(ctx, volumes::ExtremalKind::F, d, 2)?
        .value
        .to_f64();
    let mc = monte_carlo_integral_pair(&union, mc_samples, seed)?;
    Ok(PipelineRun {
        construction: "two-slices".into(),
        params: format!("d={d}, k={k}"),
        k: Some(k),
        union,
        certificate: cert,
        volume,
        volume_error,
        paper_limit: limit,
        mc_margin: mc.min_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn pentagon_domain_checks() {
        assert!(build_pentagon_discs(1, 0.01).is_err());
        assert!(build_pentagon_discs(6, 0.2).is_err());
        let u = build_pentagon_discs(6, 0.01).unwrap();
        assert_eq!(u.components.len(), 5);
        // side length check: adjacent centers
        let d01 = norm(&sub(&u.components[0].center.0, &u.components[1].center.0));
        assert!((d01 - 6.48).abs() < 1e-9);
    }

    #[test]
    fn two_slices_shape() {
        let u = build_two_slices(Dimension::new(2).unwrap(), 100).unwrap();
        assert_eq!(u.components.len(), 2);
        assert!((u.components[0].ball_diameter - 0.98).abs() < 1e-12);
        assert_eq!(u.components[0].slabs.len(), 1);
        assert!((u.components[1].center.0[0] - 200.48).abs() < 1e-12);
        assert!(build_two_slices(Dimension::new(2).unwrap(), 4).is_err());
    }

    #[test]
    fn nested_builds_disjoint() {
        let u = build_nested(Dimension::new(2).unwrap(), 3, 0.1).unwrap();
        assert_eq!(u.components.len(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                let (enc, _, _) =
                    crate::geometry::pair_distance(&u.components[i], &u.components[j]).unwrap();
                assert!(!enc.overlap, "components {i} and {j} overlap");
                assert!(enc.lower > 0.0);
            }
        }
        // degenerate n = 1
        let u = build_nested(Dimension::new(3).unwrap(), 1, 0.0).unwrap();
        assert_eq!(u.components.len(), 1);
        assert!((u.components[0].ball_diameter - 1.0).abs() < 1e-15);
    }

    #[test]
    fn separated_layouts() {
        // equilateral triangle passes at every scale (height 1.5 k)
        assert!(build_separated_balls(Dimension::new(2).unwrap(), 3, 1.0, SeparatedLayout::Ngon).is_ok());
        assert!(
            build_separated_balls(Dimension::new(2).unwrap(), 5, 100.0, SeparatedLayout::Ngon).is_ok()
        );
        // parabola passes at k = 10, fails at k = 0.1
        assert!(
            build_separated_balls(Dimension::new(2).unwrap(), 3, 10.0, SeparatedLayout::Parabola)
                .is_ok()
        );
        let err = build_separated_balls(
            Dimension::new(2).unwrap(),
            3,
            0.1,
            SeparatedLayout::Parabola,
        );
        assert!(matches!(err, Err(Error::KTooSmall(_, _, _))));
    }

    #[test]
    fn one_d_families() {
        let eq = build_1d_family(3, 0.0, OneDimVariant::Equal).unwrap();
        assert_eq!(eq.intervals().len(), 3);
        let total = eq.total_length();
        assert_eq!(total, Rational::from(1u32));
        let bs = build_1d_family(2, 0.1, OneDimVariant::BigSmall).unwrap();
        assert_eq!(bs.intervals().len(), 2);
        assert!(bs.total_length() < Rational::from(1u32));
    }

    #[test]
    fn slice_inscription_threshold() {
        // for n = 3, epsilon = 0.01 the first adequate prime is 541
        let p = adequate_slice_prime(3, 0.01, 1000).unwrap();
        assert_eq!(p, 541);
        let (margin, failing) = slice_inscription_margins(3, 541, 0.01);
        assert!(margin > 0.0 && failing.is_none());
        let (margin, _) = slice_inscription_margins(3, 149, 0.01);
        assert!(margin < 0.0, "p = 149 must be inadequate, margin {margin}");
    }

    #[test]
    fn pgon_balls_flags_bad_k() {
        let c = ctx();
        let d2 = Dimension::new(2).unwrap();
        // k = 1 will essentially never satisfy the system at eps = 0.01
        let built = build_pgon_balls(&c, d2, 5, 5, 1, 0.01).unwrap();
        assert!(!built.system_satisfied);
        assert_eq!(built.union.components.len(), 5);
    }
}

//! Simultaneous fractional-part searches and rational-independence tests.
//!
//! The search problem: given irrational multipliers a_j and offsets b_j,
//! find integers k with frac(a_j k + b_j) < eps for every j. Existence
//! for unbounded k is Weyl/Kronecker; this module just scans exhaustively
//! at working precision, with an f64 prefilter that provably cannot
//! reject a true solution (its error is orders of magnitude below the
//! guard band).
//!
//! Independence of p-gon diagonal lengths is tested, never proved: an
//! absent integer relation at a stated coefficient bound and precision is
//! heuristic evidence only, and both parameters are recorded in the
//! verdict.

use crate::error::{Error, Result};
use crate::lll::{lll_reduce, reduced_rows_by_norm};
use crate::precision::PrecisionContext;
use rug::float::Constant;
use rug::{Float, Integer};

/// Positive fractional part, x - floor(x), in [0, 1).
pub fn fractional_part(x: &Float) -> Float {
    let floor = x.clone().floor();
    Float::with_val(x.prec(), x - &floor)
}

/// One Weyl/Kronecker search instance.
#[derive(Clone, Debug)]
pub struct ApproximationProblem {
    multipliers: Vec<Float>,
    offsets: Vec<Float>,
    epsilon: Float,
    k_max: u64,
}

impl ApproximationProblem {
    pub fn new(
        multipliers: Vec<Float>,
        offsets: Vec<Float>,
        epsilon: Float,
        k_max: u64,
    ) -> Result<Self> {
        if multipliers.is_empty() {
            return Err(Error::domain("multiplier list must be nonempty"));
        }
        if multipliers.len() != offsets.len() {
            return Err(Error::domain("multipliers and offsets must have equal length"));
        }
        if multipliers
            .iter()
            .any(|a| !a.is_finite() || !a.is_sign_positive() || a.is_zero())
        {
            return Err(Error::domain("multipliers must be positive"));
        }
        if !(epsilon.clone().signum() == 1u32 && epsilon < 1u32) {
            return Err(Error::domain("epsilon must lie in (0, 1)"));
        }
        if k_max == 0 {
            return Err(Error::domain("k_max must be >= 1"));
        }
        Ok(ApproximationProblem {
            multipliers,
            offsets,
            epsilon,
            k_max,
        })
    }

    pub fn multipliers(&self) -> &[Float] {
        &self.multipliers
    }

    pub fn epsilon(&self) -> &Float {
        &self.epsilon
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }
}

/// worst fractional part over all constraints at k, evaluated at `bits`.
fn worst_frac(problem: &ApproximationProblem, k: u64, bits: u32) -> Float {
    let mut worst = Float::with_val(bits, -1i32);
    for (a, b) in problem.multipliers.iter().zip(&problem.offsets) {
        let mut v = Float::with_val(bits, a);
        v *= k;
        v += Float::with_val(bits, b);
        let f = fractional_part(&v);
        if f > worst {
            worst = f;
        }
    }
    worst
}

/// All k <= k_max satisfying every constraint strictly, each paired with
/// its worst fractional part, in increasing k. Values within 2^(-bits/4)
/// of epsilon are re-decided at doubled precision; if a value coincides
/// with epsilon even then, the scan aborts as undecidable.
pub fn find_k(ctx: &PrecisionContext, problem: &ApproximationProblem) -> Result<Vec<(u64, Float)>> {
    let bits = ctx.bits();
    // f64 prefilter band: worst-case f64 frac error for |a k| <= 2^63 is
    // far below 1e-7; the band is deliberately generous.
    let band = 1e-6f64;
    let eps_f64 = problem.epsilon.to_f64();
    let mults_f64: Vec<f64> = problem.multipliers.iter().map(|a| a.to_f64()).collect();
    let offs_f64: Vec<f64> = problem.offsets.iter().map(|b| b.to_f64()).collect();

    let mut guard = Float::with_val(bits, 1u32);
    guard >>= bits / 4;

    let mut hits = Vec::new();
    'scan: for k in 1..=problem.k_max {
        for (a, b) in mults_f64.iter().zip(&offs_f64) {
            let f = (a * k as f64 + b).rem_euclid(1.0);
            if f >= eps_f64 + band && f <= 1.0 - band {
                continue 'scan;
            }
        }
        // full-precision confirmation
        let worst = worst_frac(problem, k, bits);
        let mut margin = Float::with_val(bits, &worst - &problem.epsilon);
        margin.abs_mut();
        let accept = if margin < guard {
            // guard band: re-evaluate at doubled precision
            let worst2 = worst_frac(problem, k, bits * 2);
            let mut margin2 = Float::with_val(bits * 2, &worst2 - &problem.epsilon);
            margin2.abs_mut();
            let mut tiny = Float::with_val(bits * 2, 1u32);
            tiny >>= bits;
            if margin2 < tiny {
                return Err(Error::undecidable(format!(
                    "worst fractional part at k = {k} coincides with epsilon at {} bits",
                    bits * 2
                )));
            }
            worst2 < problem.epsilon
        } else {
            worst < problem.epsilon
        };
        if accept {
            hits.push((k, worst));
        }
    }
    Ok(hits)
}

/// The distinct diagonal lengths 2 sin(j pi / p) of a regular p-gon with
/// circumradius 1, for j = 1 .. (p-1)/2.
#[derive(Clone, Debug)]
pub struct DiagonalSet {
    pub p: u64,
    pub values: Vec<Float>,
}

pub fn pgon_diagonals(ctx: &PrecisionContext, p: u64) -> Result<DiagonalSet> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::domain("p must be an odd integer >= 3"));
    }
    let bits = ctx.guard_bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let mut values = Vec::with_capacity(((p - 1) / 2) as usize);
    for j in 1..=(p - 1) / 2 {
        let mut v = Float::with_val(bits, &pi * j);
        v /= p as u32;
        v.sin_mut();
        v *= 2u32;
        values.push(ctx.round(v));
    }
    Ok(DiagonalSet { p, values })
}

/// A nonzero integer combination with nearly vanishing value.
#[derive(Clone, Debug)]
pub struct IntegerRelation {
    pub coefficients: Vec<i64>,
    pub residual: Float,
}

/// Searches for an integer relation among `values` by LLL on the lattice
/// rows (e_i | round(2^precision_bits * x_i)). A returned relation has
/// |c_j| <= coeff_bound and |sum c_j x_j| < 2^(-precision_bits/2); `None`
/// is a heuristic independence certificate at those parameters, never a
/// proof.
pub fn integer_relation(
    values: &[Float],
    coeff_bound: u64,
    precision_bits: u32,
) -> Result<Option<IntegerRelation>> {
    if values.is_empty() {
        return Err(Error::usage("relation search needs at least one value"));
    }
    if coeff_bound == 0 {
        return Err(Error::usage("coefficient bound must be >= 1"));
    }
    if precision_bits < 16 {
        return Err(Error::undecidable(
            "fewer than 16 bits cannot separate relation candidates",
        ));
    }
    let work_bits = precision_bits + 64;
    let m = values.len();

    let mut accept = Float::with_val(work_bits, 1u32);
    accept >>= precision_bits / 2;
    let mut gray = Float::with_val(work_bits, 1u32);
    gray >>= precision_bits / 4;

    let residual_of = |coeffs: &[i64]| -> Float {
        let mut acc = Float::with_val(work_bits, 0u32);
        for (c, x) in coeffs.iter().zip(values) {
            let mut t = Float::with_val(work_bits, x);
            t *= *c;
            acc += t;
        }
        acc.abs()
    };

    if m == 1 {
        let r = residual_of(&[1]);
        if r < accept {
            return Ok(Some(IntegerRelation {
                coefficients: vec![1],
                residual: r,
            }));
        }
        return Ok(None);
    }

    let mut basis: Vec<Vec<Integer>> = Vec::with_capacity(m);
    for (i, x) in values.iter().enumerate() {
        let mut row = vec![Integer::new(); m + 1];
        row[i] = Integer::from(1u32);
        let mut scaled = Float::with_val(work_bits, x);
        scaled <<= precision_bits;
        row[m] = scaled
            .round()
            .to_integer()
            .ok_or_else(|| Error::domain("relation values must be finite"))?;
        basis.push(row);
    }
    lll_reduce(&mut basis);

    let mut best: Option<IntegerRelation> = None;
    let mut gray_zone = false;
    for row in reduced_rows_by_norm(&basis) {
        let mut coeffs = Vec::with_capacity(m);
        let mut ok = true;
        let mut nonzero = false;
        for c in &row[..m] {
            match c.to_i64() {
                Some(v) if v.unsigned_abs() <= coeff_bound => {
                    nonzero |= v != 0;
                    coeffs.push(v);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !nonzero {
            continue;
        }
        let r = residual_of(&coeffs);
        if r < accept {
            // normalize: first nonzero coefficient positive
            if coeffs.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                for c in &mut coeffs {
                    *c = -*c;
                }
            }
            best = Some(IntegerRelation {
                coefficients: coeffs,
                residual: r,
            });
            break;
        } else if r < gray {
            gray_zone = true;
        }
    }
    if best.is_none() && gray_zone {
        return Err(Error::undecidable(format!(
            "a candidate relation has residual between 2^-{} and 2^-{}; increase precision",
            precision_bits / 2,
            precision_bits / 4
        )));
    }
    Ok(best)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PgonForm {
    /// Theorem system for ball components: offsets -1/2 + 2e, tolerance 4e.
    BallConstruction,
    /// Final-theorem system for slice components: offsets -1/2 + e, tolerance 2e.
    SliceConstruction,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// Assembles the p-gon scaling system and delegates to `find_k`.
///
/// `component_limit`: builders place components at consecutive vertices,
/// so only diagonal indices j <= n-1 occur; passing Some(n) restricts the
/// system accordingly. None solves the full system j = 1..(p-1)/2.
pub fn solve_pgon_system(
    ctx: &PrecisionContext,
    p: u64,
    form: PgonForm,
    epsilon: &Float,
    k_max: u64,
    component_limit: Option<u64>,
) -> Result<Vec<(u64, Float)>> {
    if !is_prime(p) || p < 3 || p % 2 == 0 {
        return Err(Error::domain("p must be an odd prime"));
    }
    let quarter = Float::with_val(epsilon.prec(), 0.25f64);
    if !(epsilon.clone().signum() == 1u32 && *epsilon < quarter) {
        return Err(Error::domain("epsilon must lie in (0, 1/4)"));
    }
    let all = pgon_diagonals(ctx, p)?;
    let j_max = match component_limit {
        Some(n) if n >= 2 => ((n - 1) as usize).min(all.values.len()),
        Some(_) => return Err(Error::domain("component limit must be >= 2")),
        None => all.values.len(),
    };
    let multipliers: Vec<Float> = all.values[..j_max].to_vec();
    let bits = ctx.bits();
    let (offset, tol) = match form {
        PgonForm::BallConstruction => {
            let mut o = Float::with_val(bits, epsilon);
            o *= 2u32;
            o -= 0.5f64;
            let mut t = Float::with_val(bits, epsilon);
            t *= 4u32;
            (o, t)
        }
        PgonForm::SliceConstruction => {
            let mut o = Float::with_val(bits, epsilon);
            o -= 0.5f64;
            let mut t = Float::with_val(bits, epsilon);
            t *= 2u32;
            (o, t)
        }
    };
    let offsets = vec![offset; multipliers.len()];
    let problem = ApproximationProblem::new(multipliers, offsets, tol, k_max)?;
    find_k(ctx, &problem)
}

/// The pentagon lemma's search problem in the paper's k-list form:
/// frac((sqrt(5)-1)/4 + phi k) < tolerance, with phi the golden ratio.
pub fn golden_ratio_problem(
    ctx: &PrecisionContext,
    tolerance: &Float,
    k_max: u64,
) -> Result<ApproximationProblem> {
    let bits = ctx.guard_bits();
    let sqrt5 = Float::with_val(bits, 5u32).sqrt();
    let phi = Float::with_val(bits, &sqrt5 + 1u32) / 2u32;
    let beta = Float::with_val(bits, &sqrt5 - 1u32) / 4u32;
    ApproximationProblem::new(
        vec![ctx.round(phi)],
        vec![ctx.round(beta)],
        tolerance.clone(),
        k_max,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn fractional_part_conventions() {
        let c = ctx();
        assert_eq!(fractional_part(&c.float(2.75f64)), 0.75f64);
        assert_eq!(fractional_part(&c.float(-0.25f64)), 0.75f64);
        assert_eq!(fractional_part(&c.float(3.0f64)), 0f64);
    }

    #[test]
    fn rejects_malformed_problems() {
        let c = ctx();
        assert!(ApproximationProblem::new(vec![], vec![], c.float(0.5f64), 10).is_err());
        assert!(
            ApproximationProblem::new(vec![c.float(1u32)], vec![], c.float(0.5f64), 10).is_err()
        );
        assert!(ApproximationProblem::new(
            vec![c.float(1u32)],
            vec![c.float(0u32)],
            c.float(1u32),
            10
        )
        .is_err());
    }

    #[test]
    fn sqrt2_single_step() {
        let c = ctx();
        let problem = ApproximationProblem::new(
            vec![c.float(2u32).sqrt()],
            vec![c.float(0u32)],
            c.float(0.5f64),
            1,
        )
        .unwrap();
        let hits = find_k(&c, &problem).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].0, 1);
        let want = c.float(2u32).sqrt() - 1u32;
        let diff = Float::with_val(256, &hits[0].1 - &want).abs();
        assert!(diff < 1e-60);
    }

    #[test]
    fn golden_ratio_k_list_first_entry() {
        let c = ctx();
        let problem = golden_ratio_problem(&c, &c.float(0.02f64), 10).unwrap();
        let hits = find_k(&c, &problem).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].0, 6);
        assert!((hits[0].1.to_f64() - 0.01722).abs() < 5e-5);
    }

    #[test]
    fn pgon_diagonals_shapes() {
        let c = ctx();
        let tri = pgon_diagonals(&c, 3).unwrap();
        assert_eq!(tri.values.len(), 1);
        let s3 = c.float(3u32).sqrt();
        let diff = Float::with_val(256, &tri.values[0] - &s3).abs();
        assert!(diff < 1e-70);

        let hepta = pgon_diagonals(&c, 7).unwrap();
        assert_eq!(hepta.values.len(), 3);
        for w in hepta.values.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(*hepta.values.last().unwrap() < 2u32);

        assert!(pgon_diagonals(&c, 4).is_err());
        assert!(pgon_diagonals(&c, 1).is_err());
    }

    #[test]
    fn relation_for_rational_pair() {
        let c = ctx();
        let rel = integer_relation(&[c.float(1u32), c.float(2u32)], 10, 128)
            .unwrap()
            .expect("dependent input must yield a relation");
        assert_eq!(rel.coefficients, vec![2, -1]);
        assert!(rel.residual.is_zero());
    }

    #[test]
    fn hexagon_diagonals_are_dependent() {
        let c = ctx();
        let vals = [c.float(1u32), c.float(3u32).sqrt(), c.float(2u32)];
        let rel = integer_relation(&vals, 10, 128)
            .unwrap()
            .expect("hexagon diagonals are rationally dependent");
        assert_eq!(rel.coefficients, vec![2, 0, -1]);
    }

    #[test]
    fn pentagon_diagonals_show_no_relation() {
        let c = PrecisionContext::new(640).unwrap();
        let diag = pgon_diagonals(&c, 5).unwrap();
        let rel = integer_relation(&diag.values, 1_000_000, 512).unwrap();
        assert!(rel.is_none());
    }

    #[test]
    fn pgon_system_p3_postcondition() {
        let c = ctx();
        let eps = c.float(0.1f64);
        let hits = solve_pgon_system(&c, 3, PgonForm::BallConstruction, &eps, 100, None).unwrap();
        assert!(!hits.is_empty());
        let s3 = c.float(3u32).sqrt();
        for (k, worst) in &hits {
            let mut v = Float::with_val(256, &s3);
            v *= *k;
            v -= 0.5f64;
            v += 0.2f64;
            let f = fractional_part(&v);
            assert!(f < 0.4f64, "k = {k} has frac {f}");
            let diff = Float::with_val(256, &f - worst).abs();
            assert!(diff < 1e-60);
        }
    }

    #[test]
    fn pgon_system_rejects_bad_parameters() {
        let c = ctx();
        let eps = c.float(0.1f64);
        assert!(solve_pgon_system(&c, 9, PgonForm::BallConstruction, &eps, 10, None).is_err());
        let big = c.float(0.3f64);
        assert!(solve_pgon_system(&c, 5, PgonForm::BallConstruction, &big, 10, None).is_err());
    }
}

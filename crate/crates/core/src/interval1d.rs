//! Exact one-dimensional avoidance check.
//!
//! Endpoints are rationals (f64 inputs are rationals), so the criterion
//! is decided exactly: a disjoint union of open intervals contains a
//! pair of points an integral distance apart iff its total length
//! exceeds 1 or some pair of intervals at gap g admits an integer in the
//! open achievable-distance interval (g, g + len_i + len_j). When no
//! pair exists, a shift a with (s - a) ∩ Z = ∅ is produced by sweeping
//! the fractional images of the intervals.

use crate::error::{Error, Result};
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct IntervalSet1D {
    /// sorted, pairwise disjoint open intervals (a, b), a < b
    intervals: Vec<(Rational, Rational)>,
}

/// Outcome of the exact 1-D check.
#[derive(Clone, Debug)]
pub enum Check1dOutcome {
    IntegralPair {
        x: Rational,
        y: Rational,
        distance: Integer,
    },
    Avoids {
        shift: Rational,
    },
}

impl Check1dOutcome {
    pub fn has_integral_pair(&self) -> bool {
        matches!(self, Check1dOutcome::IntegralPair { .. })
    }
}

/// JSON form used by the CLI: {"intervals": [[a, b], ...]}.
#[derive(Serialize, Deserialize)]
pub struct IntervalSetJson {
    pub intervals: Vec<(f64, f64)>,
}

fn rational_of(x: f64) -> Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::domain("interval endpoints must be finite"))
}

impl IntervalSet1D {
    pub fn from_rationals(mut intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::domain("interval set must be nonempty"));
        }
        for (a, b) in &intervals {
            if a >= b {
                return Err(Error::domain("intervals must satisfy a < b"));
            }
        }
        intervals.sort_by(|x, y| x.0.cmp(&y.0));
        for w in intervals.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::precondition("intervals overlap"));
            }
        }
        Ok(IntervalSet1D { intervals })
    }

    pub fn from_f64(pairs: &[(f64, f64)]) -> Result<Self> {
        let intervals = pairs
            .iter()
            .map(|&(a, b)| Ok((rational_of(a)?, rational_of(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(intervals)
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn total_length(&self) -> Rational {
        let mut acc = Rational::new();
        for (a, b) in &self.intervals {
            acc += Rational::from(b - a);
        }
        acc
    }

    pub fn to_json(&self) -> IntervalSetJson {
        IntervalSetJson {
            intervals: self
                .intervals
                .iter()
                .map(|(a, b)| (a.to_f64(), b.to_f64()))
                .collect(),
        }
    }
}

fn frac(x: &Rational) -> Rational {
    let f = Rational::from(x.clone().floor());
    Rational::from(x - &f)
}

/// Decides integral-pair existence exactly; returns a witness pair or a
/// valid shift.
pub fn check_1d(set: &IntervalSet1D) -> Result<Check1dOutcome> {
    let one = Rational::from(1u32);

    // an interval longer than 1 contains a pair at distance exactly 1
    for (a, b) in set.intervals() {
        if Rational::from(b - a) > one {
            let margin = Rational::from(&(Rational::from(b - a) - &one) / &Rational::from(2u32));
            let x = Rational::from(a + &margin);
            let y = Rational::from(&x + &one);
            return Ok(Check1dOutcome::IntegralPair {
                x,
                y,
                distance: Integer::from(1u32),
            });
        }
    }

    // pairwise criterion: integer strictly inside (g, g + len_i + len_j)
    let n = set.intervals().len();
    for i in 0..n {
        for j in i + 1..n {
            let (a1, b1) = &set.intervals()[i];
            let (a2, b2) = &set.intervals()[j];
            let g = Rational::from(a2 - b1); // >= 0 by sortedness/disjointness
            let len1 = Rational::from(b1 - a1);
            let len2 = Rational::from(b2 - a2);
            let span = Rational::from(&len1 + &len2);
            let hi = Rational::from(&g + &span);
            // smallest integer strictly above g (g >= 0, so m >= 1)
            let m = g.clone().floor() + Rational::from(1u32);
            if m < hi {
                // witness per the lemma's proof: walk alpha = m - g into
                // the two intervals proportionally to their lengths
                let alpha = Rational::from(&m - &g);
                let u = Rational::from(&alpha * &len1) / span.clone();
                let v = Rational::from(&alpha * &len2) / span;
                let x = Rational::from(b1 - &u);
                let y = Rational::from(a2 + &v);
                let dist = Rational::from(&y - &x);
                debug_assert_eq!(dist, m);
                return Ok(Check1dOutcome::IntegralPair {
                    x,
                    y,
                    distance: m.numer().clone(),
                });
            }
        }
    }

    // total length > 1 forces overlapping fractional images
    if set.total_length() > one {
        if let Some((x, y)) = overlapping_residues(set) {
            let dist = Rational::from(&y - &x).abs();
            return Ok(Check1dOutcome::IntegralPair {
                x: x.clone().min(y.clone()),
                y: x.max(y),
                distance: dist.numer().clone(),
            });
        }
        // unreachable: measure forces an overlap
        return Err(Error::undecidable(
            "total length exceeds 1 but no overlapping residues were found",
        ));
    }

    // no pair: sweep the fractional images for an uncovered residue
    match uncovered_residue(set) {
        Some(z) => Ok(Check1dOutcome::Avoids { shift: z }),
        None => Err(Error::undecidable(
            "fractional images cover the circle although the total length is at most 1",
        )),
    }
}

/// Fractional image pieces of one open interval with length <= 1, as
/// (start, end, closed_start) with start < end <= 1.
fn image_pieces(a: &Rational, b: &Rational) -> Vec<(Rational, Rational, bool)> {
    let fa = frac(a);
    let len = Rational::from(b - a);
    let one = Rational::from(1u32);
    // smallest integer strictly above a
    let n0 = Rational::from(a.clone().floor()) + &one;
    if n0 < *b {
        // wraps around an interior integer: (fa, 1) and [0, frac(b))
        let fb = frac(b);
        vec![
            (fa, one, false),
            (Rational::new(), fb, true),
        ]
    } else {
        // contiguous: (fa, fa + len), where the end may equal 1 exactly
        let end = Rational::from(&fa + &len);
        vec![(fa, end, false)]
    }
}

/// Finds x in interval i, y in interval j (i != j) with equal fractional
/// parts, when two image pieces overlap.
fn overlapping_residues(set: &IntervalSet1D) -> Option<(Rational, Rational)> {
    let mut pieces: Vec<(Rational, Rational, usize)> = Vec::new();
    for (idx, (a, b)) in set.intervals().iter().enumerate() {
        for (s, e, _) in image_pieces(a, b) {
            if s < e {
                pieces.push((s, e, idx));
            }
        }
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let (s1, e1, i1) = &pieces[i];
            let (s2, e2, i2) = &pieces[j];
            if i1 == i2 {
                continue;
            }
            let lo = s1.clone().max(s2.clone());
            let hi = e1.clone().min(e2.clone());
            if lo < hi {
                let z = Rational::from(&lo + &hi) / Rational::from(2u32);
                let x = point_with_residue(&set.intervals()[*i1], &z);
                let y = point_with_residue(&set.intervals()[*i2], &z);
                return Some((x, y));
            }
        }
    }
    None
}

/// The point of (a, b) whose fractional part is z (assumes one exists).
fn point_with_residue(interval: &(Rational, Rational), z: &Rational) -> Rational {
    let (a, b) = interval;
    let base = Rational::from(a.clone().floor());
    let mut x = Rational::from(&base + z);
    while x <= *a {
        x += Rational::from(1u32);
    }
    debug_assert!(x < *b);
    let _ = b;
    x
}

/// A residue in [0, 1) not hit by any interval's fractional image.
fn uncovered_residue(set: &IntervalSet1D) -> Option<Rational> {
    let mut pieces: Vec<(Rational, Rational, bool)> = Vec::new();
    for (a, b) in set.intervals() {
        pieces.extend(image_pieces(a, b));
    }
    let covered = |z: &Rational| -> bool {
        pieces
            .iter()
            .any(|(s, e, closed)| (z > s || (*closed && z == s)) && z < e)
    };
    // candidate residues: piece endpoints and midpoints between
    // consecutive breakpoints
    let mut breaks: Vec<Rational> = vec![Rational::new(), Rational::from(1u32)];
    for (s, e, _) in &pieces {
        breaks.push(s.clone());
        breaks.push(e.clone());
    }
    breaks.sort();
    breaks.dedup();
    for w in breaks.windows(2) {
        let mid = Rational::from(&w[0] + &w[1]) / Rational::from(2u32);
        if !covered(&mid) {
            return Some(mid);
        }
    }
    for b in &breaks {
        if *b < 1u32 && !covered(b) {
            return Some(b.clone());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(f64, f64)]) -> IntervalSet1D {
        IntervalSet1D::from_f64(pairs).unwrap()
    }

    fn assert_witness_valid(s: &IntervalSet1D, outcome: &Check1dOutcome) {
        match outcome {
            Check1dOutcome::IntegralPair { x, y, distance } => {
                assert!(distance >= &1);
                assert_eq!(Rational::from(y - x), Rational::from(distance));
                let inside = |p: &Rational| {
                    s.intervals().iter().any(|(a, b)| p > a && p < b)
                };
                assert!(inside(x), "witness x not inside");
                assert!(inside(y), "witness y not inside");
            }
            Check1dOutcome::Avoids { shift } => {
                // no shifted endpoint interval contains an integer
                for (a, b) in s.intervals() {
                    let sa = Rational::from(a - shift);
                    let sb = Rational::from(b - shift);
                    let fa = sa.clone().floor();
                    let next = fa + Rational::from(1u32);
                    // integer in (sa, sb) iff next < sb (and sa itself not integral inside)
                    assert!(
                        next >= sb,
                        "shifted interval ({sa}, {sb}) contains an integer"
                    );
                }
            }
        }
    }

    #[test]
    fn gap_pair_example() {
        // {(0, 0.6), (1.7, 2.1)}: gap 1.1, ceil - gap = 0.9 < total 1.0
        let s = set(&[(0.0, 0.6), (1.7, 2.1)]);
        let out = check_1d(&s).unwrap();
        assert!(out.has_integral_pair());
        if let Check1dOutcome::IntegralPair { distance, .. } = &out {
            assert_eq!(distance, &2);
        }
        assert_witness_valid(&s, &out);
    }

    #[test]
    fn single_short_interval_avoids() {
        let s = set(&[(0.0, 0.9)]);
        let out = check_1d(&s).unwrap();
        assert!(!out.has_integral_pair());
        assert_witness_valid(&s, &out);
    }

    #[test]
    fn wide_gap_avoids() {
        // {(0, 0.5), (2.6, 3.0)}: gap 2.1, ceil - gap = 0.9 >= total 0.9
        let s = set(&[(0.0, 0.5), (2.6, 3.0)]);
        let out = check_1d(&s).unwrap();
        assert!(!out.has_integral_pair());
        assert_witness_valid(&s, &out);
    }

    #[test]
    fn long_interval_has_pair() {
        let s = set(&[(0.0, 1.25)]);
        let out = check_1d(&s).unwrap();
        assert!(out.has_integral_pair());
        assert_witness_valid(&s, &out);
    }

    #[test]
    fn total_length_overflow_has_pair() {
        // three intervals, total length 1.2, no single pair gap triggers
        let s = set(&[(0.0, 0.4), (10.3, 10.7), (20.6, 21.0)]);
        let out = check_1d(&s).unwrap();
        assert_witness_valid(&s, &out);
    }

    #[test]
    fn exact_tiling_total_one_avoids() {
        // (0, 1/2) and (1/2, 1): touching closures, total exactly 1
        let s = set(&[(0.0, 0.5), (0.5, 1.0)]);
        let out = check_1d(&s).unwrap();
        assert!(!out.has_integral_pair());
        assert_witness_valid(&s, &out);
    }

    #[test]
    fn overlap_rejected() {
        assert!(IntervalSet1D::from_f64(&[(0.0, 0.6), (0.5, 0.9)]).is_err());
        assert!(IntervalSet1D::from_f64(&[(0.3, 0.3)]).is_err());
        assert!(IntervalSet1D::from_f64(&[]).is_err());
    }

    #[test]
    fn touching_pair_with_large_total() {
        // touching intervals (gap 0) with total > 1: pair at distance 1
        let s = set(&[(0.0, 0.7), (0.7, 1.4)]);
        let out = check_1d(&s).unwrap();
        assert!(out.has_integral_pair());
        assert_witness_valid(&s, &out);
    }
}

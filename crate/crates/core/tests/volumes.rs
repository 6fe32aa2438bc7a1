//! Closed-form volume oracles and the module invariants.
//!
//! Expected values are built independently from the radical expressions
//! (sqrt(3)/8 + pi/12 and friends), never from the code under test.

use intdist::precision::{Dimension, PrecisionContext};
use intdist::rug::ops::Pow;
use intdist::rug::Float;
use intdist::volumes::{
    asymptotic_v, averaging_bound, ball_volume, cap_volume, cos_power_integral, extremal_volume,
    jung_bound, slice_volume, width_volume_bound, CosPowerMethod, ExtremalKind,
};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn dim(d: usize) -> Dimension {
    Dimension::new(d).unwrap()
}

fn rel_err(got: &Float, want: &Float) -> f64 {
    let diff = Float::with_val(320, got - want).abs();
    let denom = Float::with_val(320, want).abs();
    (diff / denom).to_f64()
}

/// The slice/cap table oracle in radical form.
fn table_oracle(c: &PrecisionContext) -> Vec<(usize, Float, Float)> {
    let pi = c.pi();
    let s3 = c.float(3u32).sqrt();
    let pi2 = c.float(pi.clone().square());
    vec![
        (
            2,
            c.float(&s3 / 8u32) + c.float(&pi / 12u32),
            c.float(&pi / 12u32) - c.float(&s3 / 16u32),
        ),
        (
            3,
            c.float(&pi * 11u32) / 96u32,
            c.float(&pi * 5u32) / 192u32,
        ),
        (
            4,
            (c.float(&s3 * 9u32) + c.float(&pi * 4u32)) * c.float(&pi / 384u32),
            c.float(&pi2 / 96u32) - c.float(&s3 * 3u32) * c.float(&pi / 256u32),
        ),
        (
            5,
            c.float(&pi2 * 203u32) / 15360u32,
            c.float(&pi2 * 53u32) / 30720u32,
        ),
    ]
}

#[test]
fn slice_and_cap_match_radical_forms() {
    let c = ctx();
    for (d, slice_want, cap_want) in table_oracle(&c) {
        let slice = slice_volume(&c, dim(d));
        let cap = cap_volume(&c, dim(d));
        assert!(
            rel_err(&slice, &slice_want) < 1e-70,
            "slice d={d}: got {slice}, want {slice_want}"
        );
        assert!(
            rel_err(&cap, &cap_want) < 1e-70,
            "cap d={d}: got {cap}, want {cap_want}"
        );
    }
}

#[test]
fn width_bound_strictly_increasing_in_width() {
    let c = ctx();
    let one = c.float(1u32);
    for d in [2usize, 3, 6] {
        let mut prev = c.float(0u32);
        for step in 1..=20 {
            let w = c.float(step as f64 / 20.0);
            let v = width_volume_bound(&c, dim(d), &one, &w).unwrap();
            assert!(v > prev, "d={d}, w={w}: {v} <= {prev}");
            prev = v;
        }
    }
}

#[test]
fn split_width_sum_is_maximized_at_half() {
    // grid search plus golden-section refinement around the best cell
    let c = ctx();
    let one = c.float(1u32);
    for d in [2usize, 3, 4] {
        let f = |x: f64| -> f64 {
            let wa = c.float(x);
            let wb = c.float(1.0 - x);
            let va = width_volume_bound(&c, dim(d), &one, &wa).unwrap();
            let vb = width_volume_bound(&c, dim(d), &one, &wb).unwrap();
            (va + vb).to_f64()
        };
        let mut best_x = 0.0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=40 {
            let x = i as f64 / 40.0;
            let v = f(x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        // golden-section refinement on [best_x - 1/40, best_x + 1/40]
        let (mut lo, mut hi) = ((best_x - 0.025).max(0.0), (best_x + 0.025).min(1.0));
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..60 {
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if f(a) < f(b) {
                lo = a;
            } else {
                hi = b;
            }
        }
        let xstar = 0.5 * (lo + hi);
        assert!(
            (xstar - 0.5).abs() < 1e-6,
            "d={d}: maximizer at {xstar}, expected 1/2"
        );
    }
}

#[test]
fn ball_restricted_never_beats_general() {
    // f°_d(n) <= f_d(n)
    let c = ctx();
    for d in 1..=6 {
        for n in 1..=20u64 {
            let fc = extremal_volume(&c, ExtremalKind::FCirc, dim(d), n).unwrap();
            let f = extremal_volume(&c, ExtremalKind::F, dim(d), n).unwrap();
            assert!(
                fc.value <= f.value,
                "d={d}, n={n}: f° = {} > f = {}",
                fc.value,
                f.value
            );
        }
    }
}

#[test]
fn kernel_decreases_and_normalizes() {
    let c = ctx();
    let mut prev = c.float(1u32);
    for d in 1..=60 {
        let v = cos_power_integral(&c, dim(d), CosPowerMethod::ClosedForm);
        assert!(v < prev, "v({d}) did not decrease");
        prev = v;
    }
    // d v(d)^2 -> pi/2
    let half_pi = (c.pi() / 2u32).to_f64();
    let mut prev_err = f64::INFINITY;
    for d in [10usize, 100, 1000] {
        let v = cos_power_integral(&c, dim(d), CosPowerMethod::Recursion);
        let err = ((v.clone() * v * d as f64).to_f64() / half_pi - 1.0).abs();
        assert!(err < prev_err, "d v(d)^2 error did not shrink at d={d}");
        prev_err = err;
    }
    assert!(prev_err < 1e-2);
}

#[test]
fn jung_bound_paper_values() {
    let c = ctx();
    let pi = c.pi();
    // 8 sqrt(2) pi / (15 sqrt(5))
    let want4 = c.float(&pi * 8u32) * c.float(2u32).sqrt() / (c.float(5u32).sqrt() * 15u32);
    assert!(rel_err(&jung_bound(&c, dim(4)).unwrap(), &want4) < 1e-60);
    // 25 pi^2 / 288
    let want5 = c.float(pi.clone().square()) * 25u32 / 288u32;
    assert!(rel_err(&jung_bound(&c, dim(5)).unwrap(), &want5) < 1e-60);
}

#[test]
fn averaging_with_table_value() {
    let c = ctx();
    // n = 2, Lambda = 2 lambda_2(S_2), k = 3 -> 3 lambda_2(S_2)
    let s2 = slice_volume(&c, dim(2));
    let lambda = c.float(&s2 * 2u32);
    let v = averaging_bound(&c, 2, &lambda, 3).unwrap();
    let want = c.float(&s2 * 3u32);
    assert!(rel_err(&v, &want) < 1e-70);
    assert!((v.to_f64() - 1.4349).abs() < 1e-3);
}

#[test]
fn scaled_ball_volumes() {
    let c = ctx();
    // m^d scaling against the unit value
    for d in 1..=5 {
        let unit = ball_volume(&c, dim(d), &c.float(1u32)).unwrap();
        let m = c.float(7u32) / 2u32;
        let scaled = ball_volume(&c, dim(d), &m).unwrap();
        let want = c.float(&unit * &m.pow(d as u32));
        assert!(rel_err(&scaled, &want) < 1e-70);
    }
}

#[test]
fn asymptotic_prefactor() {
    let c = ctx();
    // v(d)/asymptotic -> 1 from below-ish; check relative error at 1e4
    let v = cos_power_integral(&c, dim(10_000), CosPowerMethod::Recursion);
    let a = asymptotic_v(&c, dim(10_000));
    let ratio = (v / a).to_f64();
    assert!((ratio - 1.0).abs() < 1e-3, "ratio {ratio}");
}

//! Closed-form volumes, extremal-volume functions and upper bounds.
//!
//! Conventions: `B_d` is the open d-ball of unit diameter, `S_d` the
//! spherical symmetric slice of diameter 1 and width 1/2, `C_d` one of
//! the two caps cut off a unit ball to form `S_d`, and
//! `v(d) = integral of cos^d over [0, pi/6]`, the kernel of every slice
//! volume. The zero-dimensional ball volume is taken to be 1 so that
//! slice volumes are defined in dimension 1.

use crate::error::{Error, Result};
use crate::precision::{Dimension, PrecisionContext};
use crate::quadrature::integrate_cos_power;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosPowerMethod {
    ClosedForm,
    Recursion,
    Quadrature,
}

/// Volume of the d-ball with unit diameter; d = 0 yields 1.
pub(crate) fn unit_ball_volume(ctx: &PrecisionContext, d: usize) -> Float {
    let bits = ctx.guard_bits();
    if d == 0 {
        return ctx.float(1u32);
    }
    let pi = ctx.guard_pi();
    let half_d = Float::with_val(bits, d as u32) / 2u32;
    let num = pi.pow(&half_d);
    let gamma = (half_d + 1u32).gamma();
    let mut denom = Float::with_val(bits, 1u32) << d as u32;
    denom *= gamma;
    ctx.round(num / denom)
}

/// Volume of the open d-ball of the given diameter:
/// diameter^d * pi^(d/2) / (2^d * Gamma(d/2 + 1)).
pub fn ball_volume(ctx: &PrecisionContext, d: Dimension, diameter: &Float) -> Result<Float> {
    if !(diameter.is_finite() && diameter.is_sign_positive() && !diameter.is_zero()) {
        return Err(Error::domain("ball diameter must be positive"));
    }
    let bits = ctx.guard_bits();
    let unit = Float::with_val(bits, unit_ball_volume(ctx, d.get()));
    let scale = Float::with_val(bits, diameter).pow(d.get() as u32);
    Ok(ctx.round(unit * scale))
}

fn sqrt3(bits: u32) -> Float {
    Float::with_val(bits, 3u32).sqrt()
}

fn cos_power_closed_form(ctx: &PrecisionContext, d: usize) -> Float {
    let bits = ctx.guard_bits();
    let three_quarters = Float::with_val(bits, 3u32) / 4u32;
    if d % 2 == 0 {
        // d = 2m: ((2m-1)!!/(2m)!!) * (sqrt3/4 * sum_{k<m} ((2k)!!/(2k+1)!!)(3/4)^k + pi/6)
        let m = d / 2;
        let mut ratio = Float::with_val(bits, 1u32);
        for i in 1..=m {
            ratio *= 2 * i as u32 - 1;
            ratio /= 2 * i as u32;
        }
        let mut sum = Float::with_val(bits, 0u32);
        let mut coeff = Float::with_val(bits, 1u32); // (2k)!!/(2k+1)!!
        let mut power = Float::with_val(bits, 1u32); // (3/4)^k
        for k in 0..m {
            let term = Float::with_val(bits, &coeff * &power);
            sum += term;
            coeff *= 2 * (k as u32 + 1);
            coeff /= 2 * (k as u32 + 1) + 1;
            power *= &three_quarters;
        }
        sum *= sqrt3(bits);
        sum /= 4u32;
        sum += ctx.guard_pi() / 6u32;
        ctx.round(ratio * sum)
    } else {
        // d = 2m+1: ((2m)!!/(2m+1)!!) * (1/2) * sum_{k<=m} ((2k-1)!!/(2k)!!)(3/4)^k
        let m = (d - 1) / 2;
        let mut ratio = Float::with_val(bits, 1u32);
        for i in 1..=m {
            ratio *= 2 * i as u32;
            ratio /= 2 * i as u32 + 1;
        }
        let mut sum = Float::with_val(bits, 0u32);
        let mut coeff = Float::with_val(bits, 1u32); // (2k-1)!!/(2k)!!
        let mut power = Float::with_val(bits, 1u32);
        for k in 0..=m {
            let term = Float::with_val(bits, &coeff * &power);
            sum += term;
            coeff *= 2 * k as u32 + 1;
            coeff /= 2 * (k as u32 + 1);
            power *= &three_quarters;
        }
        ratio /= 2u32;
        ctx.round(ratio * sum)
    }
}

fn cos_power_recursion(ctx: &PrecisionContext, d: usize) -> Float {
    let bits = ctx.guard_bits();
    if d % 2 == 1 {
        // v(1) = 1/2, v(3) = 11/24,
        // v(2n-1) = ((14n-17) v(2n-3) - 6(n-2) v(2n-5)) / (8n-4) for n >= 3.
        let mut older = Float::with_val(bits, 1u32) / 2u32;
        if d == 1 {
            return ctx.round(older);
        }
        let mut newer = Float::with_val(bits, 11u32) / 24u32;
        if d == 3 {
            return ctx.round(newer);
        }
        let steps = (d + 1) / 2;
        for n in 3..=steps {
            let n = n as u32;
            let mut next = Float::with_val(bits, &newer * (14 * n - 17));
            let mut t = Float::with_val(bits, &older * (6 * (n - 2)));
            next -= &t;
            next /= 8 * n - 4;
            t = std::mem::replace(&mut newer, next);
            older = t;
        }
        ctx.round(newer)
    } else {
        // Even counterpart, derived by integration by parts:
        // v(2) = sqrt3/8 + pi/12, v(4) = 9 sqrt3/64 + pi/16,
        // v(2n) = ((14n-10) v(2n-2) - 3(2n-3) v(2n-4)) / (8n) for n >= 3.
        let s3 = sqrt3(bits);
        let pi = ctx.guard_pi();
        let mut older = Float::with_val(bits, &s3 / 8u32);
        older += Float::with_val(bits, &pi / 12u32);
        if d == 2 {
            return ctx.round(older);
        }
        let mut newer = Float::with_val(bits, &s3 * 9u32) / 64u32;
        newer += pi / 16u32;
        if d == 4 {
            return ctx.round(newer);
        }
        let steps = d / 2;
        for n in 3..=steps {
            let n = n as u32;
            let mut next = Float::with_val(bits, &newer * (14 * n - 10));
            let t = Float::with_val(bits, &older * (3 * (2 * n - 3)));
            next -= &t;
            next /= 8 * n;
            older = std::mem::replace(&mut newer, next);
        }
        ctx.round(newer)
    }
}

/// v(d) = integral of cos^d over [0, pi/6], by the requested route.
pub fn cos_power_integral(ctx: &PrecisionContext, d: Dimension, method: CosPowerMethod) -> Float {
    let d = d.get();
    match method {
        CosPowerMethod::ClosedForm => cos_power_closed_form(ctx, d),
        CosPowerMethod::Recursion => cos_power_recursion(ctx, d),
        CosPowerMethod::Quadrature => {
            let bits = ctx.guard_bits();
            let upper = ctx.guard_pi() / 6u32;
            let target = ctx.quad_target();
            ctx.round(integrate_cos_power(d, &upper, bits, &target))
        }
    }
}

/// lambda_d(S_d) = lambda_{d-1}(B_{d-1}) * v(d).
pub fn slice_volume(ctx: &PrecisionContext, d: Dimension) -> Float {
    let bits = ctx.guard_bits();
    let shell = Float::with_val(bits, unit_ball_volume(ctx, d.get() - 1));
    let kernel = Float::with_val(bits, cos_power_closed_form(ctx, d.get()));
    ctx.round(shell * kernel)
}

/// lambda_d(C_d) = (lambda_d(B_d) - lambda_d(S_d)) / 2.
pub fn cap_volume(ctx: &PrecisionContext, d: Dimension) -> Float {
    let bits = ctx.guard_bits();
    let mut v = Float::with_val(bits, unit_ball_volume(ctx, d.get()));
    v -= Float::with_val(bits, slice_volume(ctx, d));
    v /= 2u32;
    ctx.round(v)
}

/// Volume of the spherical symmetric slice with diameter `diameter` and
/// minimum width `width`:
/// lambda_{d-1}(B_{d-1}) * D^d * integral_0^{arcsin(w/D)} cos^d.
pub fn width_volume_bound(
    ctx: &PrecisionContext,
    d: Dimension,
    diameter: &Float,
    width: &Float,
) -> Result<Float> {
    if !(diameter.is_finite() && diameter.is_sign_positive() && !diameter.is_zero()) {
        return Err(Error::domain("diameter must be positive"));
    }
    if width.is_sign_negative() || width > diameter {
        return Err(Error::domain("width must satisfy 0 <= w <= diameter"));
    }
    let bits = ctx.guard_bits();
    let ratio = Float::with_val(bits, width / diameter);
    let upper = ratio.asin();
    let target = ctx.quad_target();
    let integral = integrate_cos_power(d.get(), &upper, bits, &target);
    let shell = Float::with_val(bits, unit_ball_volume(ctx, d.get() - 1));
    let scale = Float::with_val(bits, diameter).pow(d.get() as u32);
    Ok(ctx.round(shell * scale * integral))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    /// f°_d(n): components restricted to open balls, avoiding integral distances.
    FCirc,
    /// l°_d(n): ball components, unit line-intersection bound.
    LCirc,
    /// f_d(n): arbitrary open components, avoiding integral distances.
    F,
    /// f_d(1) = lambda_d(B_d), the isodiametric value.
    FOne,
    /// f_1(n) = l_1(n) = 1.
    OneDim,
    /// l_d(n): only conjectured for n >= 2, d >= 2; returned flagged.
    LConjecture,
}

/// An extremal-volume value; `conjectural` marks the l_d(n) conjecture,
/// which is never treated as certified.
#[derive(Clone, Debug)]
pub struct ExtremalValue {
    pub value: Float,
    pub conjectural: bool,
}

/// Exact extremal volumes: f°_d(n) = l°_d(n) = max(1, n/2^d) lambda_d(B_d),
/// f_d(n) = n lambda_d(S_d) for d, n >= 2, and the one-dimensional value 1.
pub fn extremal_volume(
    ctx: &PrecisionContext,
    kind: ExtremalKind,
    d: Dimension,
    n: u64,
) -> Result<ExtremalValue> {
    if n == 0 {
        return Err(Error::domain("component count must be >= 1"));
    }
    let bits = ctx.guard_bits();
    let exact = |v: Float| ExtremalValue {
        value: v,
        conjectural: false,
    };
    let one = ctx.float(1u32);
    match kind {
        ExtremalKind::OneDim => Ok(exact(one)),
        ExtremalKind::FOne => Ok(exact(ctx.round(unit_ball_volume(ctx, d.get())))),
        ExtremalKind::FCirc | ExtremalKind::LCirc => {
            if d.get() == 1 {
                return Ok(exact(one));
            }
            let ball = Float::with_val(bits, unit_ball_volume(ctx, d.get()));
            let mut factor = Float::with_val(bits, n) >> d.get() as u32;
            if factor < 1u32 {
                factor = Float::with_val(bits, 1u32);
            }
            Ok(exact(ctx.round(ball * factor)))
        }
        ExtremalKind::F => {
            if d.get() == 1 {
                return Ok(exact(one));
            }
            if n == 1 {
                return Ok(exact(ctx.round(unit_ball_volume(ctx, d.get()))));
            }
            let slice = Float::with_val(bits, slice_volume(ctx, d));
            Ok(exact(ctx.round(slice * Float::with_val(bits, n))))
        }
        ExtremalKind::LConjecture => {
            if d.get() == 1 {
                return Ok(exact(one));
            }
            if n == 1 {
                return Ok(exact(ctx.round(unit_ball_volume(ctx, d.get()))));
            }
            let slice = Float::with_val(bits, slice_volume(ctx, d));
            Ok(ExtremalValue {
                value: ctx.round(slice * Float::with_val(bits, n)),
                conjectural: true,
            })
        }
    }
}

/// Jung-type upper bound for l_d(2):
/// lambda_{d-1}(B_{d-1}) * (2d/(d+1))^{(d-1)/2}.
pub fn jung_bound(ctx: &PrecisionContext, d: Dimension) -> Result<Float> {
    if d.get() < 2 {
        return Err(Error::domain("the Jung bound needs d >= 2"));
    }
    let bits = ctx.guard_bits();
    let shell = Float::with_val(bits, unit_ball_volume(ctx, d.get() - 1));
    let mut base = Float::with_val(bits, 2 * d.get() as u32);
    base /= d.get() as u32 + 1;
    let exponent = Float::with_val(bits, d.get() as u32 - 1) / 2u32;
    Ok(ctx.round(shell * base.pow(&exponent)))
}

/// Averaging bound: an upper bound Lambda at n components yields
/// (k/n) * Lambda at k >= n components.
pub fn averaging_bound(ctx: &PrecisionContext, n: u64, lambda: &Float, k: u64) -> Result<Float> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    if k < n {
        return Err(Error::domain("the averaging bound needs k >= n"));
    }
    if !(lambda.is_finite() && lambda.is_sign_positive() && !lambda.is_zero()) {
        return Err(Error::domain("Lambda must be positive"));
    }
    let bits = ctx.guard_bits();
    let mut v = Float::with_val(bits, lambda * Float::with_val(bits, k));
    v /= Float::with_val(bits, n);
    Ok(ctx.round(v))
}

/// Leading-order asymptotic sqrt(pi / (2d)) of v(d).
pub fn asymptotic_v(ctx: &PrecisionContext, d: Dimension) -> Float {
    let bits = ctx.guard_bits();
    let mut v = ctx.guard_pi();
    v /= 2 * d.get() as u32;
    ctx.round(Float::with_val(bits, v.sqrt()))
}

/// CLI-facing evaluator handle over every formula in the module.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VolumeFormula {
    pub kind: FormulaKind,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaKind {
    Ball,
    Slice,
    Cap,
    CosPowerIntegral,
    FCirc,
    LCirc,
    F,
    LConjecture,
    WidthBound,
    JungBound,
    AveragingBound,
    AsymptoticV,
}

impl VolumeFormula {
    pub fn eval(&self, ctx: &PrecisionContext) -> Result<ExtremalValue> {
        let d = Dimension::new(self.d)?;
        let exact = |v: Float| ExtremalValue {
            value: v,
            conjectural: false,
        };
        let need_n = || {
            self.n
                .ok_or_else(|| Error::usage("this formula needs a component count n"))
        };
        match self.kind {
            FormulaKind::Ball => {
                let diam = ctx.float(self.diameter.unwrap_or(1.0));
                Ok(exact(ball_volume(ctx, d, &diam)?))
            }
            FormulaKind::Slice => Ok(exact(slice_volume(ctx, d))),
            FormulaKind::Cap => Ok(exact(cap_volume(ctx, d))),
            FormulaKind::CosPowerIntegral => {
                Ok(exact(cos_power_integral(ctx, d, CosPowerMethod::ClosedForm)))
            }
            FormulaKind::FCirc => extremal_volume(ctx, ExtremalKind::FCirc, d, need_n()?),
            FormulaKind::LCirc => extremal_volume(ctx, ExtremalKind::LCirc, d, need_n()?),
            FormulaKind::F => extremal_volume(ctx, ExtremalKind::F, d, need_n()?),
            FormulaKind::LConjecture => {
                extremal_volume(ctx, ExtremalKind::LConjecture, d, need_n()?)
            }
            FormulaKind::WidthBound => {
                let diam = ctx.float(
                    self.diameter
                        .ok_or_else(|| Error::usage("width_bound needs a diameter"))?,
                );
                let width = ctx.float(
                    self.width
                        .ok_or_else(|| Error::usage("width_bound needs a width"))?,
                );
                Ok(exact(width_volume_bound(ctx, d, &diam, &width)?))
            }
            FormulaKind::JungBound => Ok(exact(jung_bound(ctx, d)?)),
            FormulaKind::AveragingBound => {
                let n = need_n()?;
                let lambda = ctx.float(
                    self.diameter
                        .ok_or_else(|| Error::usage("averaging_bound carries Lambda in `diameter`"))?,
                );
                let k = self
                    .width
                    .ok_or_else(|| Error::usage("averaging_bound carries k in `width`"))?
                    as u64;
                Ok(exact(averaging_bound(ctx, n, &lambda, k)?))
            }
            FormulaKind::AsymptoticV => Ok(exact(asymptotic_v(ctx, d))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn assert_close(a: &Float, b: &Float, tol: f64) {
        let diff = Float::with_val(256, a - b).abs();
        assert!(diff < tol, "difference {diff} exceeds {tol}: {a} vs {b}");
    }

    #[test]
    fn ball_volume_small_dimensions() {
        let c = ctx();
        let one = c.float(1u32);
        // lambda_1(B_1) = 1, lambda_2(B_2) = pi/4.
        assert_close(
            &ball_volume(&c, dim(1), &one).unwrap(),
            &c.float(1u32),
            1e-70,
        );
        let quarter_pi = c.pi() / 4u32;
        assert_close(&ball_volume(&c, dim(2), &one).unwrap(), &quarter_pi, 1e-70);
        // Scaling: diameter 2 in d = 3 gives 2^3 * pi/6 = 4 pi / 3.
        let two = c.float(2u32);
        let four_thirds_pi = c.pi() * 4u32 / 3u32;
        assert_close(
            &ball_volume(&c, dim(3), &two).unwrap(),
            &four_thirds_pi,
            1e-70,
        );
    }

    #[test]
    fn ball_volume_rejects_bad_diameter() {
        let c = ctx();
        let zero = c.float(0u32);
        assert!(ball_volume(&c, dim(2), &zero).is_err());
        let neg = c.float(-1i32);
        assert!(ball_volume(&c, dim(2), &neg).is_err());
    }

    #[test]
    fn cos_power_known_values() {
        let c = ctx();
        for method in [
            CosPowerMethod::ClosedForm,
            CosPowerMethod::Recursion,
            CosPowerMethod::Quadrature,
        ] {
            let v1 = cos_power_integral(&c, dim(1), method);
            assert_close(&v1, &(c.float(1u32) / 2u32), 1e-38);
            let v3 = cos_power_integral(&c, dim(3), method);
            assert_close(&v3, &(c.float(11u32) / 24u32), 1e-38);
            // v(2) = sqrt(3)/8 + pi/12
            let mut want = c.float(3u32).sqrt() / 8u32;
            want += c.pi() / 12u32;
            let v2 = cos_power_integral(&c, dim(2), method);
            assert_close(&v2, &want, 1e-38);
        }
    }

    #[test]
    fn methods_agree_at_larger_d() {
        let c = ctx();
        for d in [5usize, 8, 17, 40, 101, 200] {
            let a = cos_power_integral(&c, dim(d), CosPowerMethod::ClosedForm);
            let b = cos_power_integral(&c, dim(d), CosPowerMethod::Recursion);
            let q = cos_power_integral(&c, dim(d), CosPowerMethod::Quadrature);
            assert_close(&a, &b, 1e-30);
            assert_close(&a, &q, 1e-30);
        }
    }

    #[test]
    fn slice_cap_ball_partition() {
        let c = ctx();
        for d in 1..=12 {
            let s = slice_volume(&c, dim(d));
            let cap = cap_volume(&c, dim(d));
            let b = ball_volume(&c, dim(d), &c.float(1u32)).unwrap();
            let total = Float::with_val(320, &s + Float::with_val(320, &cap * 2u32));
            assert_close(&total, &b, 1e-70);
        }
    }

    #[test]
    fn slice_volume_dimension_one() {
        let c = ctx();
        assert_close(&slice_volume(&c, dim(1)), &(c.float(1u32) / 2u32), 1e-70);
    }

    #[test]
    fn width_bound_recovers_slice_and_ball() {
        let c = ctx();
        let one = c.float(1u32);
        let half = c.float(1u32) / 2u32;
        let slice = width_volume_bound(&c, dim(3), &one, &half).unwrap();
        assert_close(&slice, &slice_volume(&c, dim(3)), 1e-35);
        let ball = width_volume_bound(&c, dim(4), &one, &one).unwrap();
        assert_close(&ball, &ball_volume(&c, dim(4), &one).unwrap(), 1e-35);
        let zero = c.float(0u32);
        let nothing = width_volume_bound(&c, dim(4), &one, &zero).unwrap();
        assert!(nothing.is_zero());
    }

    #[test]
    fn width_bound_domain_errors() {
        let c = ctx();
        let one = c.float(1u32);
        let big = c.float(2u32);
        assert!(width_volume_bound(&c, dim(2), &one, &big).is_err());
        let neg = c.float(-1i32);
        assert!(width_volume_bound(&c, dim(2), &one, &neg).is_err());
    }

    #[test]
    fn extremal_values() {
        let c = ctx();
        // f°_2(5) = 5 pi / 16
        let v = extremal_volume(&c, ExtremalKind::FCirc, dim(2), 5).unwrap();
        assert!(!v.conjectural);
        let want = c.pi() * 5u32 / 16u32;
        assert_close(&v.value, &want, 1e-70);
        // n <= 2^d regime: f°_3(8) = lambda_3(B_3) = pi/6
        let v = extremal_volume(&c, ExtremalKind::FCirc, dim(3), 8).unwrap();
        let want = c.pi() / 6u32;
        assert_close(&v.value, &want, 1e-70);
        // f_2(2) = 2 lambda_2(S_2) = sqrt3/4 + pi/6
        let v = extremal_volume(&c, ExtremalKind::F, dim(2), 2).unwrap();
        let mut want = c.float(3u32).sqrt() / 4u32;
        want += c.pi() / 6u32;
        assert_close(&v.value, &want, 1e-70);
        // conjecture is flagged
        let v = extremal_volume(&c, ExtremalKind::LConjecture, dim(2), 3).unwrap();
        assert!(v.conjectural);
        // one-dimensional cases are exact
        let v = extremal_volume(&c, ExtremalKind::LConjecture, dim(1), 3).unwrap();
        assert!(!v.conjectural);
        assert_eq!(v.value, 1u32);
    }

    #[test]
    fn jung_bound_values() {
        let c = ctx();
        let two_over_sqrt3 = c.float(2u32) / c.float(3u32).sqrt();
        assert_close(&jung_bound(&c, dim(2)).unwrap(), &two_over_sqrt3, 1e-70);
        let three_pi_8 = c.pi() * 3u32 / 8u32;
        assert_close(&jung_bound(&c, dim(3)).unwrap(), &three_pi_8, 1e-70);
        assert!(jung_bound(&c, dim(1)).is_err());
    }

    #[test]
    fn averaging_bound_values() {
        let c = ctx();
        let one = c.float(1u32);
        let v = averaging_bound(&c, 2, &one, 4).unwrap();
        assert_eq!(v, 2u32);
        let v = averaging_bound(&c, 5, &(c.pi() * 5u32 / 16u32), 5).unwrap();
        assert_close(&v, &(c.pi() * 5u32 / 16u32), 1e-70);
        assert!(averaging_bound(&c, 5, &one, 4).is_err());
    }

    #[test]
    fn asymptotic_values() {
        let c = ctx();
        let want = (c.pi() / 2u32).sqrt();
        assert_close(&asymptotic_v(&c, dim(1)), &want, 1e-70);
        let want = (c.pi() / 200u32).sqrt();
        assert_close(&asymptotic_v(&c, dim(100)), &want, 1e-70);
    }
}

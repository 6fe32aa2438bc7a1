//! Gauss-Legendre quadrature at arbitrary precision.
//!
//! Nodes are computed once per (order, bits) by Newton iteration on the
//! Legendre recurrence and cached. The only integrand in this crate is
//! cos^d on a subinterval of [0, pi/2], which is entire, so composite
//! panels with doubling give spectral convergence and the doubling
//! comparison is a reliable error estimate.

use once_cell::sync::Lazy;
use rug::ops::Pow;
use rug::Float;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

const ORDER: usize = 48;

type NodeTable = Arc<Vec<(Float, Float)>>;

static NODE_CACHE: Lazy<Mutex<HashMap<(usize, u32), NodeTable>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Legendre P_n and its derivative at x.
fn legendre(n: usize, x: &Float, bits: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(bits, 1u32);
    let mut p1 = x.clone();
    for k in 2..=n {
        // p = ((2k-1) x p1 - (k-1) p0) / k
        let mut p = Float::with_val(bits, &p1 * x);
        p *= 2 * k as u32 - 1;
        let mut t = p0.clone();
        t *= k as u32 - 1;
        p -= t;
        p /= k as u32;
        p0 = std::mem::replace(&mut p1, p);
    }
    // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let mut num = Float::with_val(bits, &p1 * x);
    num -= &p0;
    num *= n as u32;
    let mut den = Float::with_val(bits, x * x);
    den -= 1u32;
    (p1, num / den)
}

/// Nodes and weights on [-1, 1] for the cached order at `bits` precision.
fn nodes(order: usize, bits: u32) -> NodeTable {
    let key = (order, bits);
    if let Some(t) = NODE_CACHE.lock().unwrap().get(&key) {
        return Arc::clone(t);
    }
    let mut table = Vec::with_capacity(order);
    let half = (order + 1) / 2;
    for i in 0..half {
        // Tricomi seed, then Newton at full precision.
        let seed = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut x = Float::with_val(bits, seed);
        let mut eps = Float::with_val(bits, 1u32);
        eps >>= bits - 8;
        for _ in 0..200 {
            let (p, dp) = legendre(order, &x, bits);
            let dx = p / dp;
            x -= &dx;
            if dx.abs() < eps {
                break;
            }
        }
        let (_, dp) = legendre(order, &x, bits);
        // w = 2 / ((1 - x^2) P'_n(x)^2)
        let mut w = Float::with_val(bits, &x * &x);
        w = 1u32 - w;
        w *= dp.square();
        w.recip_mut();
        w *= 2u32;
        table.push((x, w));
    }
    let mut full = Vec::with_capacity(order);
    for (x, w) in &table {
        let neg = Float::with_val(bits, -x.clone());
        full.push((neg, w.clone()));
    }
    if order % 2 == 1 {
        full.pop(); // the middle node would be duplicated
    }
    for (x, w) in table.into_iter().rev() {
        full.push((x, w));
    }
    let arc: NodeTable = Arc::new(full);
    NODE_CACHE.lock().unwrap().insert(key, Arc::clone(&arc));
    arc
}

/// Integrates cos^d over [0, upper] at `bits` precision, doubling the
/// panel count until successive composite values agree to `target`
/// relative to max(1, |I|).
pub fn integrate_cos_power(d: usize, upper: &Float, bits: u32, target: &Float) -> Float {
    if upper.is_zero() || upper.is_sign_negative() {
        return Float::with_val(bits, 0u32);
    }
    let table = nodes(ORDER, bits);
    let mut prev: Option<Float> = None;
    let mut panels = 1usize;
    loop {
        let mut total = Float::with_val(bits, 0u32);
        let width = Float::with_val(bits, upper / (panels as u32));
        let halfw = Float::with_val(bits, &width >> 1);
        for p in 0..panels {
            let mut mid = Float::with_val(bits, &width * (p as u32));
            mid += &halfw;
            let mut panel_sum = Float::with_val(bits, 0u32);
            for (x, w) in table.iter() {
                let mut t = Float::with_val(bits, &halfw * x);
                t += &mid;
                let mut f = t.cos();
                f = f.pow(d as u32);
                f *= w;
                panel_sum += f;
            }
            panel_sum *= &halfw;
            total += panel_sum;
        }
        if let Some(prev_val) = prev {
            let mut diff = Float::with_val(bits, &total - &prev_val);
            diff.abs_mut();
            let mut scale = Float::with_val(bits, total.clone().abs());
            if scale < 1u32 {
                scale = Float::with_val(bits, 1u32);
            }
            scale *= target;
            if diff <= scale || panels >= 1 << 14 {
                return total;
            }
        }
        prev = Some(total);
        panels *= 2;
    }
}

//! Integer LLL with exact rational Gram-Schmidt data.
//!
//! The relation lattices here are tiny (dimension <= 8, entries up to a
//! few hundred bits), so the classical algorithm with incrementally
//! maintained mu/B in exact rationals is both simple and fast enough.

use rug::{Integer, Rational};

const DELTA_NUM: u32 = 3;
const DELTA_DEN: u32 = 4;

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut acc = Integer::new();
    for (x, y) in a.iter().zip(b) {
        acc += Integer::from(x * y);
    }
    acc
}

fn dot_int_rat(a: &[Integer], b: &[Rational]) -> Rational {
    let mut acc = Rational::new();
    for (x, y) in a.iter().zip(b) {
        acc += Rational::from(y * x);
    }
    acc
}

/// Reduces `basis` in place; rows are lattice vectors.
pub(crate) fn lll_reduce(basis: &mut [Vec<Integer>]) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let cols = basis[0].len();
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut b_norm = vec![Rational::new(); n]; // ||b*_i||^2
    let mut star = vec![vec![Rational::new(); cols]; n]; // b*_i
    let mut kmax = 0usize;

    let gso_row = |basis: &[Vec<Integer>],
                   star: &mut Vec<Vec<Rational>>,
                   mu: &mut Vec<Vec<Rational>>,
                   b_norm: &mut Vec<Rational>,
                   k: usize| {
        let mut s: Vec<Rational> = basis[k].iter().map(Rational::from).collect();
        for j in 0..k {
            if b_norm[j] == 0u32 {
                mu[k][j] = Rational::new();
                continue;
            }
            let m = Rational::from(&dot_int_rat(&basis[k], &star[j]) / &b_norm[j]);
            for (si, sj) in s.iter_mut().zip(&star[j]) {
                *si -= Rational::from(&m * sj);
            }
            mu[k][j] = m;
        }
        let mut norm = Rational::new();
        for si in &s {
            norm += Rational::from(si * si);
        }
        star[k] = s;
        b_norm[k] = norm;
    };

    gso_row(basis, &mut star, &mut mu, &mut b_norm, 0);

    let mut k = 1usize;
    while k < n {
        if k > kmax {
            kmax = k;
            gso_row(basis, &mut star, &mut mu, &mut b_norm, k);
        }
        loop {
            // size-reduce against k-1
            reduce(basis, &mut mu, k, k - 1);
            // Lovasz condition: B_k >= (delta - mu^2) B_{k-1}
            let mut rhs = Rational::from((DELTA_NUM, DELTA_DEN));
            rhs -= Rational::from(&mu[k][k - 1] * &mu[k][k - 1]);
            rhs *= &b_norm[k - 1];
            if b_norm[k] >= rhs {
                break;
            }
            swap_rows(basis, &mut mu, &mut b_norm, &mut star, k, kmax);
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
        for l in (0..k.saturating_sub(1)).rev() {
            reduce(basis, &mut mu, k, l);
        }
        k += 1;
    }
}

fn reduce(basis: &mut [Vec<Integer>], mu: &mut [Vec<Rational>], k: usize, l: usize) {
    let half = Rational::from((1u32, 2u32));
    if Rational::from(mu[k][l].clone().abs()) <= half {
        return;
    }
    let q = mu[k][l].clone().round(); // nearest integer as Rational
    let qi = q.numer().clone();
    let (head, tail) = basis.split_at_mut(k);
    for (x, y) in tail[0].iter_mut().zip(&head[l]) {
        *x -= Integer::from(y * &qi);
    }
    for i in 0..l {
        let t = Rational::from(&mu[l][i] * &q);
        mu[k][i] -= t;
    }
    mu[k][l] -= q;
}

fn swap_rows(
    basis: &mut [Vec<Integer>],
    mu: &mut [Vec<Rational>],
    b_norm: &mut [Rational],
    star: &mut [Vec<Rational>],
    k: usize,
    kmax: usize,
) {
    basis.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let (a, b) = (mu[k][j].clone(), mu[k - 1][j].clone());
        mu[k][j] = b;
        mu[k - 1][j] = a;
    }
    let m = mu[k][k - 1].clone();
    let mut big_b = Rational::from(&m * &m);
    big_b *= &b_norm[k - 1];
    big_b += &b_norm[k];

    if big_b == 0u32 {
        // both projections vanish; just swap the cached stars
        star.swap(k, k - 1);
        b_norm.swap(k, k - 1);
        return;
    }

    // star updates: new b*_{k-1} = b*_k + m b*_{k-1}; new b*_k spans the rest
    let old_star_km1 = star[k - 1].clone();
    let old_star_k = star[k].clone();
    let old_bk = b_norm[k].clone();
    for (dst, (sk, skm1)) in star[k - 1]
        .iter_mut()
        .zip(old_star_k.iter().zip(old_star_km1.iter()))
    {
        *dst = Rational::from(sk + &Rational::from(&m * skm1));
    }
    let coef = Rational::from(&old_bk / &big_b);
    let mcoef = Rational::from(&m * &Rational::from(&b_norm[k - 1] / &big_b));
    for (dst, (sk, skm1)) in star[k]
        .iter_mut()
        .zip(old_star_k.iter().zip(old_star_km1.iter()))
    {
        let mut v = Rational::from(skm1 * &coef);
        v -= Rational::from(sk * &mcoef);
        *dst = v;
    }

    mu[k][k - 1] = Rational::from(&m * &Rational::from(&b_norm[k - 1] / &big_b));
    b_norm[k] = Rational::from(&b_norm[k - 1] * &Rational::from(&old_bk / &big_b));
    b_norm[k - 1] = big_b;

    for i in k + 1..=kmax {
        let t = mu[i][k].clone();
        mu[i][k] = Rational::from(&mu[i][k - 1] - &Rational::from(&m * &t));
        let u = Rational::from(&mu[k][k - 1] * &mu[i][k]);
        mu[i][k - 1] = Rational::from(&t + &u);
    }
}

/// Shortest-vector candidates after reduction (all rows, shortest first).
pub(crate) fn reduced_rows_by_norm(basis: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    let mut rows: Vec<Vec<Integer>> = basis.to_vec();
    rows.sort_by_key(|r| dot(r, r));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn reduces_a_classic_basis() {
        // Example from many LLL texts: reduced basis of this lattice has
        // a vector of squared norm <= 9.
        let mut basis = vec![row(&[1, 1, 1]), row(&[-1, 0, 2]), row(&[3, 5, 6])];
        lll_reduce(&mut basis);
        let shortest = &reduced_rows_by_norm(&basis)[0];
        let norm = dot(shortest, shortest);
        assert!(norm <= 9u32, "norm {norm}");
    }

    #[test]
    fn finds_dependency_in_scaled_column() {
        // Rows (e_i | N x_i) with x = (1, 2): relation 2*x0 - x1 = 0.
        let n: i64 = 1 << 40;
        let mut basis = vec![row(&[1, 0, n]), row(&[0, 1, 2 * n])];
        lll_reduce(&mut basis);
        let rows = reduced_rows_by_norm(&basis);
        let c = &rows[0];
        // the scaled residual must vanish: c0 * N + c1 * 2N == 0
        let resid = Integer::from(&c[0] * &Integer::from(n)) + Integer::from(&c[1] * &Integer::from(2 * n));
        assert_eq!(resid, 0u32);
        assert_eq!(c[0].clone().abs(), 2u32);
        assert_eq!(c[1].clone().abs(), 1u32);
    }
}

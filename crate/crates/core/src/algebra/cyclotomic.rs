//! Reduction of rational polynomials in a primitive root of unity.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_traits::Zero;

use crate::phase::{int, Rational};

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both monic, integer coefficients, lowest degree first
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    quot
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub(crate) fn cyclotomic_poly(n: u64) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

pub(crate) fn euler_phi(n: u64) -> u64 {
    (cyclotomic_poly(n).len() - 1) as u64
}

/// Reduces `Σ c_k ζ^k` (ζ a primitive n-th root of unity) to degree `< φ(n)`.
pub(crate) fn reduce(mut coeffs: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    for i in (deg..coeffs.len()).rev() {
        let c = std::mem::replace(&mut coeffs[i], Rational::zero());
        if c.is_zero() {
            continue;
        }
        // ζ^i = ζ^{i-deg} · ζ^deg and ζ^deg = -Σ_{j<deg} φ_j ζ^j
        for (j, pj) in phi.iter().take(deg).enumerate() {
            if *pj != 0 {
                coeffs[i - deg + j] -= &c * int(*pj);
            }
        }
    }
    coeffs.truncate(deg);
    coeffs
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(9), 6);
    }

    #[test]
    fn third_roots_sum_to_zero() {
        let r = reduce(vec![int(1), int(1), int(1)], 3);
        assert!(r.iter().all(|c| c.is_zero()));
    }
}

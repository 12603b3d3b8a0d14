use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Q;

pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub(crate) fn qfrac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

pub(crate) fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub(crate) fn factorial(n: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 2..=n {
        r *= BigInt::from(i);
    }
    r
}

/// n!/(n-k)!
pub(crate) fn falling(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r *= BigInt::from(n - i);
    }
    r
}

pub(crate) fn lcm_den(v: &[Q]) -> BigInt {
    let mut l = BigInt::one();
    for c in v {
        l = num_integer::Integer::lcm(&l, c.denom());
    }
    l
}

pub(crate) fn all_tuples(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = alloc::vec![Vec::new()];
    for &b in bound {
        let mut next = Vec::new();
        for t in &out {
            for k in 0..=b {
                let mut t2 = t.clone();
                t2.push(k);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// All exponent vectors of length `m` with total degree exactly `deg`, in
/// graded-lex order (first variable highest).
pub(crate) fn exps_of_degree(m: usize, deg: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if deg == 0 { alloc::vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for a in (0..=deg).rev() {
        for mut rest in exps_of_degree(m - 1, deg - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

//! Hom dimensions in the first Weyl algebra against a bounded-degree
//! brute-force count: maps D/DP -> D/DQ are `1 -> g` with `P*g` in `DQ`,
//! taken modulo `DQ`.  A single operator is a Gröbner basis of the left
//! ideal it generates, so normal forms only need division by `Q`.

use std::collections::BTreeMap;

use dmod::weyl::{Ctx, Weyl};
use dmod::{BigInt, Q};
use num_traits::{One, Zero};

/// `x^a dx^b -> c`
pub type Op = BTreeMap<(u32, u32), Q>;

pub fn op(terms: &[(i64, u32, u32)]) -> Op {
    let mut m = Op::new();
    for &(c, a, b) in terms {
        *m.entry((a, b)).or_insert_with(Q::zero) += Q::from_integer(c.into());
    }
    m.retain(|_, c| !c.is_zero());
    m
}

fn binom(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

pub fn mul(f: &Op, g: &Op) -> Op {
    let mut out = Op::new();
    for (&(a, b), c1) in f {
        for (&(c, d), c2) in g {
            // dx^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) dx^(b-k)
            for k in 0..=b.min(c) {
                let coef = Q::from_integer(binom(b, k) * falling(c, k)) * c1 * c2;
                *out.entry((a + c - k, b + d - k)).or_insert_with(Q::zero) += coef;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn rank_key(m: &(u32, u32)) -> (u32, u32) {
    (m.0 + m.1, m.1)
}

fn lead(f: &Op) -> ((u32, u32), Q) {
    let (m, c) = f.iter().max_by_key(|(m, _)| rank_key(m)).expect("nonzero");
    (*m, c.clone())
}

/// Full reduction modulo the left ideal `D q`.
pub fn normal_form(f: &Op, q: &Op) -> Op {
    let ((qa, qb), qc) = lead(q);
    let mut rem = f.clone();
    let mut out = Op::new();
    while !rem.is_empty() {
        let ((a, b), c) = lead(&rem);
        if a >= qa && b >= qb {
            let mut m = Op::new();
            m.insert((a - qa, b - qb), c / &qc);
            for (k, v) in mul(&m, q) {
                *rem.entry(k).or_insert_with(Q::zero) -= v;
            }
            rem.retain(|_, c| !c.is_zero());
        } else {
            rem.remove(&(a, b));
            out.insert((a, b), c);
        }
    }
    out
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][col].clone();
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &piv;
                for j in col..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// dim of { g : deg g <= bound, P g in DQ } modulo DQ.
pub fn oracle_dim(p: &Op, q: &Op, bound: u32) -> usize {
    let monos: Vec<(u32, u32)> = (0..=bound).flat_map(|d| (0..=d).map(move |b| (d - b, b))).collect();
    let images: Vec<(Op, Op)> = monos
        .iter()
        .map(|&m| {
            let g: Op = [(m, Q::one())].into_iter().collect();
            (normal_form(&mul(p, &g), q), normal_form(&g, q))
        })
        .collect();
    let mut keys_a: Vec<(u32, u32)> = images.iter().flat_map(|(a, _)| a.keys().copied()).collect();
    let mut keys_b: Vec<(u32, u32)> = images.iter().flat_map(|(_, b)| b.keys().copied()).collect();
    keys_a.sort_unstable();
    keys_a.dedup();
    keys_b.sort_unstable();
    keys_b.dedup();
    // columns are ansatz coefficients; rows are coordinates of the images
    let row = |img: &dyn Fn(usize) -> Option<Q>| -> Vec<Q> { (0..monos.len()).map(|i| img(i).unwrap_or_else(Q::zero)).collect() };
    let a_rows: Vec<Vec<Q>> = keys_a.iter().map(|k| row(&|i| images[i].0.get(k).cloned())).collect();
    let b_rows: Vec<Vec<Q>> = keys_b.iter().map(|k| row(&|i| images[i].1.get(k).cloned())).collect();
    let both: Vec<Vec<Q>> = a_rows.iter().chain(&b_rows).cloned().collect();
    rank(&both) - rank(&a_rows)
}

pub fn to_weyl(ctx: &Ctx, f: &Op) -> Weyl {
    let mut w = Weyl::zero(ctx);
    for (&(a, b), c) in f {
        w = &w + &Weyl::monomial(ctx, c.clone(), &[a], &[b]);
    }
    w
}


/// Five first-Weyl-algebra pairs `(P, Q)` standing for `D/DP -> D/DQ`.
pub fn pairs() -> Vec<(&'static str, Op, Op)> {
    vec![
        ("dx-1 to (dx-1)^2", op(&[(1, 0, 1), (-1, 0, 0)]), op(&[(1, 0, 2), (-2, 0, 1), (1, 0, 0)])),
        ("dx^2 to dx", op(&[(1, 0, 2)]), op(&[(1, 0, 1)])),
        ("dx to dx^2", op(&[(1, 0, 1)]), op(&[(1, 0, 2)])),
        ("dx to x", op(&[(1, 0, 1)]), op(&[(1, 1, 0)])),
        ("x*dx-1 to x*dx-2", op(&[(1, 1, 1), (-1, 0, 0)]), op(&[(1, 1, 1), (-2, 0, 0)])),
    ]
}

/// `(oracle, hom_basis)` dimensions for one pair.
pub fn compare(p: &Op, q: &Op) -> (usize, usize) {
    let ctx = Ctx::std(1);
    let m = dmod::homology::Presentation::cyclic(&ctx, &[to_weyl(&ctx, p)]);
    let n = dmod::homology::Presentation::cyclic(&ctx, &[to_weyl(&ctx, q)]);
    (oracle_dim(p, q, 6), dmod::solutions::hom_basis(&m, &n).unwrap().len())
}

//! b-functions for restriction and integration.
//!
//! The b-function of `D^r/I` with shift m is computed from the initial
//! module `J = in(I)` under the (-w, w) weight: `b_j` is the minimal
//! polynomial of θ acting on the class of `e_j` in `D^r/J`, and
//! `b(s) = lcm_j b_j(s - m(j))`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::groebner::{groebner_basis, v_weight, weighted_degree, TermOrder, Variant};
use crate::homology::Presentation;
use crate::qlinalg::{kernel_basis, RationalMatrix};
use crate::weyl::{fmt_q, FreeVector, Weyl};
use crate::{Error, Result, Q};

/// Dense univariate polynomial, coefficients from degree 0 up.
pub(crate) type UPoly = Vec<Q>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn umul(a: &[Q], b: &[Q]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder.
fn udivmod(a: &[Q], b: &[Q]) -> (UPoly, UPoly) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![Q::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().expect("nonempty") / &lead;
        for (i, y) in b.iter().enumerate() {
            r[k + i] -= &c * y;
        }
        q[k] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn umonic(p: UPoly) -> UPoly {
    match p.last() {
        None => p,
        Some(l) => {
            let inv = l.recip();
            p.iter().map(|c| c * &inv).collect()
        }
    }
}

fn ugcd(a: &[Q], b: &[Q]) -> UPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = udivmod(&a, &b).1;
        a = b;
        b = r;
    }
    umonic(a)
}

fn ulcm(a: &[Q], b: &[Q]) -> UPoly {
    let g = ugcd(a, b);
    umonic(udivmod(&umul(a, b), &g).0)
}

/// p(s + c)
fn ushift(p: &[Q], c: &Q) -> UPoly {
    let mut out: UPoly = Vec::new();
    let lin = vec![c.clone(), Q::one()];
    for coef in p.iter().rev() {
        out = umul(&out, &lin);
        if out.is_empty() {
            out.push(Q::zero());
        }
        out[0] += coef;
        out = trim(out);
    }
    out
}

fn ueval(p: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let Some(m) = n.to_u64() else {
        return out;
    };
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(BigInt::from(d));
            if d * d != m {
                out.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    out
}

/// Rational roots with multiplicity, and the cofactor without them.
fn rational_roots(p: &[Q]) -> (Vec<Q>, UPoly) {
    let mut p = trim(p.to_vec());
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        roots.push(Q::zero());
    }
    loop {
        if p.len() <= 1 {
            break;
        }
        let l = crate::util::lcm_den(&p);
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
        let mut found = None;
        'search: for a in divisors(&ints[0]) {
            for b in divisors(ints.last().expect("nonempty")) {
                for r in [Q::new(a.clone(), b.clone()), -Q::new(a.clone(), b.clone())] {
                    if ueval(&p, &r).is_zero() {
                        found = Some(r);
                        break 'search;
                    }
                }
            }
        }
        match found {
            None => break,
            Some(r) => {
                p = udivmod(&p, &[-r.clone(), Q::one()]).0;
                roots.push(r);
            }
        }
    }
    (roots, p)
}

/// A monic polynomial in s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPolynomial {
    coeffs: Vec<Q>,
    roots: Vec<i64>,
}

impl BPolynomial {
    /// Normalizes to monic; the zero polynomial is rejected.
    pub fn from_coeffs(coeffs: &[Q]) -> Result<BPolynomial> {
        let c = umonic(trim(coeffs.to_vec()));
        if c.is_empty() {
            return Err(Error::NotSpecializable);
        }
        let (rs, _) = rational_roots(&c);
        let mut roots: Vec<i64> =
            rs.iter().filter(|r| r.is_integer()).filter_map(|r| r.to_integer().to_i64()).collect();
        roots.sort_unstable();
        roots.dedup();
        Ok(BPolynomial { coeffs: c, roots })
    }

    /// The product of (s - r) over the given roots.
    pub fn from_roots(roots: &[i64]) -> BPolynomial {
        let mut c = vec![Q::one()];
        for &r in roots {
            c = umul(&c, &[-crate::util::q(r), Q::one()]);
        }
        BPolynomial::from_coeffs(&c).expect("nonzero")
    }

    /// Coefficients from degree 0 up; the last one is 1.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Distinct integer roots in increasing order.
    pub fn integer_roots(&self) -> &[i64] {
        &self.roots
    }

    pub fn eval(&self, s: &Q) -> Q {
        ueval(&self.coeffs, s)
    }

    /// Writes the polynomial with `var` in place of s.
    pub fn format_in(&self, var: &str) -> String {
        if self.degree() == 0 {
            return "1".into();
        }
        let (mut roots, rest) = rational_roots(&self.coeffs);
        roots.sort_by(|a, b| b.cmp(a));
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < roots.len() {
            let r = &roots[i];
            let mut k = 1;
            while i + k < roots.len() && roots[i + k] == *r {
                k += 1;
            }
            let f = if r.is_zero() {
                String::from(var)
            } else if r.is_positive() {
                format!("({var}-{})", fmt_q(r))
            } else {
                format!("({var}+{})", fmt_q(&-r.clone()))
            };
            parts.push(if k > 1 { format!("{f}^{k}") } else { f });
            i += k;
        }
        if rest.len() > 1 {
            parts.push(format!("({})", expanded(&rest, var)));
        }
        parts.join("*")
    }
}

fn expanded(p: &[Q], var: &str) -> String {
    let mut s = String::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => String::from(var),
            _ => format!("{var}^{k}"),
        };
        if mono.is_empty() {
            s.push_str(&fmt_q(&a));
        } else if a.is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{}*{mono}", fmt_q(&a)));
        }
    }
    s
}

impl fmt::Display for BPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in("s"))
    }
}

/// Initial forms, under the (-w, w) weight on the first d variables and the
/// shift, of a Gröbner basis of the submodule generated by `gens`.
/// For the integration variant the weight is (w, -w).
pub fn initial_module(gens: &[FreeVector], rank: usize, d: usize, shift: &[i64], variant: Variant) -> Vec<FreeVector> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let ctx = first.ctx.clone();
    let w = v_weight(ctx.n(), d, variant);
    let ord = TermOrder::v_filtration(ctx.n(), d, variant).with_shift(shift);
    let gb = groebner_basis(&ctx, rank, gens, &ord);
    gb.generators().iter().map(|g| initial_form(g, &w, shift)).collect()
}

/// The terms of top weight.
pub fn initial_form(v: &FreeVector, w: &[i64], shift: &[i64]) -> FreeVector {
    let top = weighted_degree(v, w, shift);
    let entries = v
        .entries
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let s = shift.get(k).copied().unwrap_or(0);
            let ts = p
                .terms()
                .iter()
                .filter(|t| t.e.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum::<i64>() + s == top)
                .cloned()
                .collect();
            Weyl::from_terms(&v.ctx, ts)
        })
        .collect();
    FreeVector::new(&v.ctx, entries)
}

/// Degree cap for the minimal polynomial search.
const MAX_BDEG: usize = 64;

/// The b-function for restriction (or integration) of `p` with shift
/// vector `shift` along the first d variables.
pub fn b_function(p: &Presentation, d: usize, shift: &[i64], variant: Variant) -> Result<BPolynomial> {
    let n = p.ctx.n();
    if d == 0 || d > n {
        return Err(Error::OutOfRange(format!("d = {d} with n = {n}")));
    }
    let p = match variant {
        Variant::Restriction => p.clone(),
        Variant::Integration => p.fourier(d)?,
    };
    let ctx = &p.ctx;
    let mut shift = shift.to_vec();
    shift.resize(p.rank, 0);
    let init = initial_module(&p.relations, p.rank, d, &shift, Variant::Restriction);
    let j = groebner_basis(ctx, p.rank, &init, &TermOrder::standard());
    let mut theta = Weyl::zero(ctx);
    for i in 0..d {
        theta = &theta + &Weyl::theta(ctx, i);
    }
    let mut b: UPoly = vec![Q::one()];
    for comp in 0..p.rank {
        let mut v = j.normal_form(&FreeVector::unit(ctx, p.rank, comp));
        if v.is_zero() {
            continue;
        }
        let mut seq = vec![v.clone()];
        let bj = loop {
            v = j.normal_form(&v.lmul(&theta));
            seq.push(v.clone());
            if let Some(c) = dependency(&seq) {
                break c;
            }
            if seq.len() > MAX_BDEG {
                return Err(Error::NotSpecializable);
            }
        };
        let shifted = ushift(&bj, &-crate::util::q(shift[comp]));
        b = ulcm(&b, &shifted);
    }
    BPolynomial::from_coeffs(&b)
}

/// Coefficients c with sum c_i seq_i = 0 and last coefficient 1, if the
/// vectors are dependent (the earlier ones are assumed independent).
fn dependency(seq: &[FreeVector]) -> Option<UPoly> {
    let mut cols: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
    for v in seq {
        for (k, p) in v.entries.iter().enumerate() {
            for t in p.terms() {
                let next = cols.len();
                cols.entry((k, t.e.clone())).or_insert(next);
            }
        }
    }
    let mut m = RationalMatrix::zero(seq.len(), cols.len());
    for (i, v) in seq.iter().enumerate() {
        for (k, p) in v.entries.iter().enumerate() {
            for t in p.terms() {
                m.set(i, cols[&(k, t.e.clone())], t.c.clone());
            }
        }
    }
    let ker = kernel_basis(&m);
    let c = ker.into_iter().next()?;
    let last = c.last().expect("nonempty").clone();
    if last.is_zero() {
        return None;
    }
    Some(c.iter().map(|x| x / &last).collect())
}

/// The smallest and largest integer roots, or None when there are none.
pub fn truncation_window(b: &BPolynomial) -> Option<(i64, i64)> {
    let r = b.integer_roots();
    Some((*r.first()?, *r.last()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::w;
    use crate::weyl::Ctx;
    use alloc::string::ToString;

    #[test]
    fn display() {
        assert_eq!(BPolynomial::from_roots(&[11, 4, 1]).to_string(), "(s-11)*(s-4)*(s-1)");
        assert_eq!(BPolynomial::from_roots(&[-1, -2]).to_string(), "(s+1)*(s+2)");
        assert_eq!(BPolynomial::from_roots(&[0]).to_string(), "s");
        assert_eq!(BPolynomial::from_roots(&[4]).to_string(), "(s-4)");
        let b = BPolynomial::from_coeffs(&[Q::one(), Q::zero(), Q::one()]).unwrap();
        assert_eq!(b.to_string(), "(s^2 + 1)");
        assert_eq!(truncation_window(&b), None);
    }

    #[test]
    fn windows() {
        assert_eq!(truncation_window(&BPolynomial::from_roots(&[-1, -2])), Some((-2, -1)));
        assert_eq!(truncation_window(&BPolynomial::from_roots(&[4])), Some((4, 4)));
    }

    #[test]
    fn lcm_and_shift() {
        let a = vec![crate::util::q(-1), Q::one()];
        let b = vec![crate::util::q(-2), Q::one()];
        assert_eq!(ulcm(&a, &a), a);
        assert_eq!(ulcm(&a, &b).len(), 3);
        assert_eq!(ushift(&a, &Q::one()), vec![Q::zero(), Q::one()]);
    }

    #[test]
    fn polynomial_ring_in_two_variables() {
        let c = Ctx::std(2);
        let p = Presentation::cyclic(&c, &[w(&c, "dx1"), w(&c, "dx2")]);
        let r = b_function(&p, 1, &[0], Variant::Restriction).unwrap();
        assert_eq!(r, BPolynomial::from_roots(&[0]));
        let i = b_function(&p, 1, &[0], Variant::Integration).unwrap();
        assert_eq!(i, BPolynomial::from_roots(&[-1]));
    }

    #[test]
    fn gkz_dual() {
        let c = Ctx::std(2);
        let p = Presentation::cyclic(&c, &[w(&c, "x1*dx1 + 2*x2*dx2 + 6"), w(&c, "dx1^2 + dx2")]);
        let b = b_function(&p, 2, &[0], Variant::Integration).unwrap();
        assert_eq!(b, BPolynomial::from_roots(&[4]));
    }

    #[test]
    fn delta_module() {
        let c = Ctx::std(1);
        let p = Presentation::cyclic(&c, &[w(&c, "x1")]);
        let b = b_function(&p, 1, &[0], Variant::Restriction).unwrap();
        assert_eq!(b, BPolynomial::from_roots(&[-1]));
    }
}

//! Weyl algebra elements, matrices over them, and the structural maps
//! (transposition, Fourier transform, the diagonal twist `eta`, external
//! products).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::util::{binom, factorial, qfrac};
use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Names {
    /// x1..xn, dx1..dxn
    Std,
    /// x1..xh, y1..yh, dx1..dxh, dy1..dyh with n = 2h
    Doubled,
    /// explicit names for the x-type variables; the derivations get a `d` prefix
    Custom(Arc<[String]>),
}

/// The algebra an element lives in: the number of x-variables and their names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ctx {
    n: usize,
    names: Names,
}

impl Ctx {
    pub fn std(n: usize) -> Ctx {
        Ctx { n, names: Names::Std }
    }

    /// The algebra D_{2h} in variables x1..xh, y1..yh.
    pub fn doubled(h: usize) -> Ctx {
        Ctx { n: 2 * h, names: Names::Doubled }
    }

    pub fn custom<S: AsRef<str>>(names: &[S]) -> Ctx {
        let v: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        Ctx { n: v.len(), names: Names::Custom(v.into()) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &Names {
        &self.names
    }

    pub fn is_doubled(&self) -> bool {
        self.names == Names::Doubled
    }

    /// h for a doubled context.
    pub fn half(&self) -> Option<usize> {
        self.is_doubled().then_some(self.n / 2)
    }

    pub fn x_name(&self, i: usize) -> String {
        match &self.names {
            Names::Std => format!("x{}", i + 1),
            Names::Doubled => {
                let h = self.n / 2;
                if i < h {
                    format!("x{}", i + 1)
                } else {
                    format!("y{}", i - h + 1)
                }
            }
            Names::Custom(v) => v[i].clone(),
        }
    }

    pub fn d_name(&self, i: usize) -> String {
        format!("d{}", self.x_name(i))
    }

    /// Looks up an identifier; returns (variable index, is_derivation).
    pub fn lookup(&self, ident: &str) -> Option<(usize, bool)> {
        (0..self.n).find_map(|i| {
            if self.x_name(i) == ident {
                Some((i, false))
            } else if self.d_name(i) == ident {
                Some((i, true))
            } else {
                None
            }
        })
    }
}

/// Degree reverse lexicographic comparison of exponent vectors;
/// `Greater` means `a` is the larger monomial.
pub fn cmp_mono(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// Expands `x^a dx^b * x^c dx^e` into normally ordered terms.
///
/// Exponent slices hold the n x-exponents followed by the n derivation
/// exponents, plus one slot for a central `h` when `hslot` is set; in that
/// case the commutation rule is `dx*x = x*dx + h^2`.
pub(crate) fn mono_product(
    n: usize,
    l: &[u32],
    r: &[u32],
    hslot: bool,
    mut f: impl FnMut(Vec<u32>, BigInt),
) {
    let mut base: Vec<u32> = l.iter().zip(r).map(|(a, b)| a + b).collect();
    let mut opts: Vec<(usize, u32)> = Vec::new();
    for i in 0..n {
        let m = l[n + i].min(r[i]);
        if m > 0 {
            opts.push((i, m));
        }
    }
    if opts.is_empty() {
        f(base, BigInt::one());
        return;
    }
    let tables: Vec<Vec<BigInt>> = opts
        .iter()
        .map(|&(i, m)| {
            (0..=m)
                .map(|k| binom(l[n + i], k) * binom(r[i], k) * factorial(k))
                .collect()
        })
        .collect();
    let mut ks = vec![0u32; opts.len()];
    loop {
        let mut c = BigInt::one();
        let mut e = base.clone();
        let mut tot = 0;
        for (t, &(i, _)) in opts.iter().enumerate() {
            let k = ks[t];
            c *= &tables[t][k as usize];
            e[i] -= k;
            e[n + i] -= k;
            tot += k;
        }
        if hslot {
            e[2 * n] += 2 * tot;
        }
        f(e, c);
        let mut t = 0;
        loop {
            if t == ks.len() {
                base.clear();
                return;
            }
            if ks[t] < opts[t].1 {
                ks[t] += 1;
                break;
            }
            ks[t] = 0;
            t += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub c: Q,
    /// x-exponents then derivation exponents
    pub e: Vec<u32>,
}

/// An element of the Weyl algebra, as normally ordered terms sorted in
/// decreasing degrevlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weyl {
    ctx: Ctx,
    terms: Vec<Term>,
}

impl Weyl {
    pub fn zero(ctx: &Ctx) -> Weyl {
        Weyl { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn constant(ctx: &Ctx, c: Q) -> Weyl {
        if c.is_zero() {
            return Weyl::zero(ctx);
        }
        Weyl { ctx: ctx.clone(), terms: vec![Term { c, e: vec![0; 2 * ctx.n] }] }
    }

    pub fn int(ctx: &Ctx, c: i64) -> Weyl {
        Weyl::constant(ctx, Q::from_integer(c.into()))
    }

    pub fn one(ctx: &Ctx) -> Weyl {
        Weyl::int(ctx, 1)
    }

    pub fn monomial(ctx: &Ctx, c: Q, x: &[u32], d: &[u32]) -> Weyl {
        let mut e = x.to_vec();
        e.extend_from_slice(d);
        Weyl::from_terms(ctx, vec![Term { c, e }])
    }

    pub fn x(ctx: &Ctx, i: usize) -> Weyl {
        let mut e = vec![0; 2 * ctx.n];
        e[i] = 1;
        Weyl { ctx: ctx.clone(), terms: vec![Term { c: Q::one(), e }] }
    }

    pub fn d(ctx: &Ctx, i: usize) -> Weyl {
        let mut e = vec![0; 2 * ctx.n];
        e[ctx.n + i] = 1;
        Weyl { ctx: ctx.clone(), terms: vec![Term { c: Q::one(), e }] }
    }

    /// The Euler operator x_i*dx_i.
    pub fn theta(ctx: &Ctx, i: usize) -> Weyl {
        let mut e = vec![0; 2 * ctx.n];
        e[i] = 1;
        e[ctx.n + i] = 1;
        Weyl { ctx: ctx.clone(), terms: vec![Term { c: Q::one(), e }] }
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms(ctx: &Ctx, terms: Vec<Term>) -> Weyl {
        let mut m: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for t in terms {
            assert_eq!(t.e.len(), 2 * ctx.n, "exponent length");
            *m.entry(t.e).or_insert_with(Q::zero) += t.c;
        }
        Weyl::from_map(ctx, m)
    }

    pub(crate) fn from_map(ctx: &Ctx, m: BTreeMap<Vec<u32>, Q>) -> Weyl {
        let mut terms: Vec<Term> =
            m.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| Term { c, e }).collect();
        terms.sort_by(|a, b| cmp_mono(&b.e, &a.e));
        Weyl { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].c.is_one() && self.terms[0].e.iter().all(|&e| e == 0)
    }

    /// The constant coefficient if the element is a scalar.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms[0].e.iter().all(|&e| e == 0) => Some(self.terms[0].c.clone()),
            _ => None,
        }
    }

    /// True when no derivation occurs.
    pub fn is_polynomial(&self) -> bool {
        let n = self.ctx.n;
        self.terms.iter().all(|t| t.e[n..].iter().all(|&e| e == 0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.e.iter().sum()).max()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Q) -> Weyl {
        if c.is_zero() {
            return Weyl::zero(&self.ctx);
        }
        Weyl {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|t| Term { c: &t.c * c, e: t.e.clone() }).collect(),
        }
    }

    pub fn try_mul(&self, other: &Weyl) -> Result<Weyl> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Weyl) -> Weyl {
        let n = self.ctx.n;
        let mut acc: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let ab = &a.c * &b.c;
                mono_product(n, &a.e, &b.e, false, |e, k| {
                    let v = &ab * Q::from_integer(k);
                    *acc.entry(e).or_insert_with(Q::zero) += v;
                });
            }
        }
        Weyl::from_map(&self.ctx, acc)
    }

    pub fn pow(&self, k: u32) -> Weyl {
        let mut r = Weyl::one(&self.ctx);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// The anti-involution x^a dx^b -> (-dx)^b x^a.
    pub fn transpose(&self) -> Weyl {
        let n = self.ctx.n;
        let mut acc: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for t in &self.terms {
            let mut l = vec![0; 2 * n];
            let mut r = vec![0; 2 * n];
            l[n..].copy_from_slice(&t.e[n..]);
            r[..n].copy_from_slice(&t.e[..n]);
            let odd = t.e[n..].iter().sum::<u32>() % 2 == 1;
            let c = if odd { -t.c.clone() } else { t.c.clone() };
            mono_product(n, &l, &r, false, |e, k| {
                *acc.entry(e).or_insert_with(Q::zero) += &c * Q::from_integer(k);
            });
        }
        Weyl::from_map(&self.ctx, acc)
    }

    fn swap_product(&self, d: usize, inverse: bool) -> Result<Weyl> {
        let n = self.ctx.n;
        if d == 0 || d > n {
            return Err(Error::OutOfRange(format!("fourier index {d} for n = {n}")));
        }
        let mut acc: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for t in &self.terms {
            // image of x^a is x^{a_>d} dx^{a_<=d}; image of dx^b is x^{b_<=d} dx^{b_>d}
            let mut l = vec![0; 2 * n];
            let mut r = vec![0; 2 * n];
            let mut sign = 0u32;
            for i in 0..n {
                if i < d {
                    l[n + i] = t.e[i];
                    r[i] = t.e[n + i];
                    sign += if inverse { t.e[i] } else { t.e[n + i] };
                } else {
                    l[i] = t.e[i];
                    r[n + i] = t.e[n + i];
                }
            }
            let c = if sign % 2 == 1 { -t.c.clone() } else { t.c.clone() };
            mono_product(n, &l, &r, false, |e, k| {
                *acc.entry(e).or_insert_with(Q::zero) += &c * Q::from_integer(k);
            });
        }
        Ok(Weyl::from_map(&self.ctx, acc))
    }

    /// x_i -> dx_i, dx_i -> -x_i for i < d.
    pub fn fourier(&self, d: usize) -> Result<Weyl> {
        self.swap_product(d, false)
    }

    /// x_i -> -dx_i, dx_i -> x_i for i < d.
    pub fn fourier_inv(&self, d: usize) -> Result<Weyl> {
        self.swap_product(d, true)
    }

    /// The algebra map sending x_i to `ximg[i]` and dx_i to `dimg[i]`.
    /// The images must satisfy the Weyl relations in `target`.
    pub fn substitute(&self, target: &Ctx, ximg: &[Weyl], dimg: &[Weyl]) -> Weyl {
        let n = self.ctx.n;
        let mut cache: BTreeMap<(usize, u32), Weyl> = BTreeMap::new();
        let mut power = |v: usize, k: u32| -> Weyl {
            if let Some(w) = cache.get(&(v, k)) {
                return w.clone();
            }
            let g = if v < n { &ximg[v] } else { &dimg[v - n] };
            let w = g.pow(k);
            cache.insert((v, k), w.clone());
            w
        };
        let mut out = Weyl::zero(target);
        for t in &self.terms {
            let mut p = Weyl::constant(target, t.c.clone());
            for (v, &k) in t.e.iter().enumerate() {
                if k > 0 {
                    p = &p * &power(v, k);
                }
            }
            out = &out + &p;
        }
        out
    }

    /// x -> x/2 - dy, dx -> y/2 + dx, y -> -x/2 - dy, dy -> y/2 - dx.
    pub fn eta(&self) -> Result<Weyl> {
        let h = self.ctx.half().ok_or(Error::ContextMismatch)?;
        let c = &self.ctx;
        let half = qfrac(1, 2);
        let mut xi = Vec::new();
        let mut di = Vec::new();
        for i in 0..h {
            xi.push(&Weyl::x(c, i).scale(&half) - &Weyl::d(c, h + i));
        }
        for i in 0..h {
            xi.push(&Weyl::x(c, i).scale(&-half.clone()) - &Weyl::d(c, h + i));
        }
        for i in 0..h {
            di.push(&Weyl::x(c, h + i).scale(&half) + &Weyl::d(c, i));
        }
        for i in 0..h {
            di.push(&Weyl::x(c, h + i).scale(&half) - &Weyl::d(c, i));
        }
        Ok(self.substitute(c, &xi, &di))
    }

    /// Inverse of [`Weyl::eta`]: x -> x - y, y -> dx + dy,
    /// dx -> (dx - dy)/2, dy -> -(x + y)/2.
    pub fn eta_inv(&self) -> Result<Weyl> {
        let h = self.ctx.half().ok_or(Error::ContextMismatch)?;
        let c = &self.ctx;
        let half = qfrac(1, 2);
        let mut xi = Vec::new();
        let mut di = Vec::new();
        for i in 0..h {
            xi.push(&Weyl::x(c, i) - &Weyl::x(c, h + i));
        }
        for i in 0..h {
            xi.push(&Weyl::d(c, i) + &Weyl::d(c, h + i));
        }
        for i in 0..h {
            di.push((&Weyl::d(c, i) - &Weyl::d(c, h + i)).scale(&half));
        }
        for i in 0..h {
            di.push((&Weyl::x(c, i) + &Weyl::x(c, h + i)).scale(&-half.clone()));
        }
        Ok(self.substitute(c, &xi, &di))
    }

    /// Re-reads the exponent vectors in another context with the same number of
    /// variables.
    pub fn with_ctx(&self, ctx: &Ctx) -> Result<Weyl> {
        if ctx.n != self.ctx.n {
            return Err(Error::ContextMismatch);
        }
        Ok(Weyl { ctx: ctx.clone(), terms: self.terms.clone() })
    }

    /// Partial derivative of a polynomial.
    pub fn partial(&self, i: usize) -> Weyl {
        let n = self.ctx.n;
        let mut terms = Vec::new();
        for t in &self.terms {
            debug_assert!(t.e[n..].iter().all(|&e| e == 0));
            if t.e[i] > 0 {
                let mut e = t.e.clone();
                e[i] -= 1;
                terms.push(Term { c: &t.c * Q::from_integer(t.e[i].into()), e });
            }
        }
        Weyl::from_terms(&self.ctx, terms)
    }

    /// Divides all coefficients so that the leading one is 1.
    pub fn monic(&self) -> Weyl {
        match self.terms.first() {
            None => self.clone(),
            Some(t) => self.scale(&t.c.recip()),
        }
    }

    /// Scales to an integer primitive multiple with positive leading coefficient.
    pub fn primitive(&self) -> Weyl {
        if self.is_zero() {
            return self.clone();
        }
        let cs: Vec<Q> = self.terms.iter().map(|t| t.c.clone()).collect();
        let l = crate::util::lcm_den(&cs);
        let mut g = BigInt::zero();
        for c in &cs {
            let v = c * Q::from_integer(l.clone());
            g = num_integer::Integer::gcd(&g, v.numer());
        }
        let mut s = Q::new(l, g);
        if self.terms[0].c.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

impl<'a> Add<&'a Weyl> for &'a Weyl {
    type Output = Weyl;
    fn add(self, o: &Weyl) -> Weyl {
        assert_eq!(self.ctx, o.ctx, "context mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match cmp_mono(&self.terms[i].e, &o.terms[j].e) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].c + &o.terms[j].c;
                    if !c.is_zero() {
                        out.push(Term { c, e: self.terms[i].e.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Weyl { ctx: self.ctx.clone(), terms: out }
    }
}

impl<'a> Neg for &'a Weyl {
    type Output = Weyl;
    fn neg(self) -> Weyl {
        Weyl {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|t| Term { c: -t.c.clone(), e: t.e.clone() }).collect(),
        }
    }
}

impl Neg for Weyl {
    type Output = Weyl;
    fn neg(self) -> Weyl {
        -&self
    }
}

impl<'a> Sub<&'a Weyl> for &'a Weyl {
    type Output = Weyl;
    fn sub(self, o: &Weyl) -> Weyl {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Weyl> for &'a Weyl {
    type Output = Weyl;
    fn mul(self, o: &Weyl) -> Weyl {
        assert_eq!(self.ctx, o.ctx, "context mismatch");
        self.mul_unchecked(o)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Weyl> for Weyl {
            type Output = Weyl;
            fn $f(self, o: Weyl) -> Weyl {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Weyl> for Weyl {
            type Output = Weyl;
            fn $f(self, o: &Weyl) -> Weyl {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_mono(ctx: &Ctx, e: &[u32]) -> String {
    let n = ctx.n;
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let name = if i < n { ctx.x_name(i) } else { ctx.d_name(i - n) };
        if k == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{k}"));
        }
    }
    parts.join("*")
}

impl fmt::Display for Weyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let m = fmt_mono(&self.ctx, &t.e);
            let neg = t.c.is_negative();
            let a = t.c.abs();
            let body = if m.is_empty() {
                fmt_q(&a)
            } else if a.is_one() {
                m
            } else {
                format!("{}*{}", fmt_q(&a), m)
            };
            match (k, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// The external product p ⊠ q in D_{2h}: p acts on the x-variables and q on
/// the y-variables.  Both inputs must have h variables.
pub fn box_embed(p: &Weyl, q: &Weyl) -> Result<Weyl> {
    let h = p.ctx.n;
    if q.ctx.n != h {
        return Err(Error::ContextMismatch);
    }
    let ctx = Ctx::doubled(h);
    let mut terms = Vec::new();
    for a in &p.terms {
        for b in &q.terms {
            let mut e = Vec::with_capacity(4 * h);
            e.extend_from_slice(&a.e[..h]);
            e.extend_from_slice(&b.e[..h]);
            e.extend_from_slice(&a.e[h..]);
            e.extend_from_slice(&b.e[h..]);
            terms.push(Term { c: &a.c * &b.c, e });
        }
    }
    Ok(Weyl::from_terms(&ctx, terms))
}

/// A quotient `num / den^pow` of polynomials.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub num: Weyl,
    pub den: Weyl,
    pub pow: u32,
}

impl RationalFunction {
    pub fn poly(p: Weyl) -> RationalFunction {
        let den = Weyl::one(p.ctx());
        RationalFunction { num: p, den, pow: 0 }
    }

    pub fn new(num: Weyl, den: Weyl, pow: u32) -> RationalFunction {
        RationalFunction { num, den, pow }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality as rational functions.
    pub fn same_as(&self, o: &RationalFunction) -> bool {
        let a = &self.num * &o.den.pow(o.pow);
        let b = &o.num * &self.den.pow(self.pow);
        a == b
    }

    fn partial(&self, i: usize) -> RationalFunction {
        if self.pow == 0 {
            return RationalFunction { num: self.num.partial(i), den: self.den.clone(), pow: 0 };
        }
        let j = Q::from_integer(self.pow.into());
        let num = &(&self.den * &self.num.partial(i)) - &(&self.num * &self.den.partial(i)).scale(&j);
        RationalFunction { num, den: self.den.clone(), pow: self.pow + 1 }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pow == 0 || self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.pow == 1 {
            write!(f, "({})/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})^{}", self.num, self.den, self.pow)
        }
    }
}

/// The action of an operator on a rational function.
pub fn apply(p: &Weyl, f: &RationalFunction) -> Result<RationalFunction> {
    if p.ctx != f.num.ctx || p.ctx != f.den.ctx {
        return Err(Error::ContextMismatch);
    }
    if f.den.is_zero() {
        return Err(Error::OutOfRange("zero denominator".into()));
    }
    let n = p.ctx.n;
    let mut parts: Vec<RationalFunction> = Vec::new();
    let mut cache: BTreeMap<Vec<u32>, RationalFunction> = BTreeMap::new();
    for t in &p.terms {
        let beta = t.e[n..].to_vec();
        let g = match cache.get(&beta) {
            Some(g) => g.clone(),
            None => {
                let mut g = f.clone();
                for (i, &b) in beta.iter().enumerate() {
                    for _ in 0..b {
                        g = g.partial(i);
                    }
                }
                cache.insert(beta, g.clone());
                g
            }
        };
        let mut xe = t.e[..n].to_vec();
        xe.extend(core::iter::repeat(0).take(n));
        let xm = Weyl::from_terms(&p.ctx, vec![Term { c: t.c.clone(), e: xe }]);
        parts.push(RationalFunction { num: &xm * &g.num, den: g.den, pow: g.pow });
    }
    let top = parts.iter().map(|r| r.pow).max().unwrap_or(f.pow);
    let mut num = Weyl::zero(&p.ctx);
    for r in parts {
        num = &num + &(&r.num * &f.den.pow(top - r.pow));
    }
    Ok(RationalFunction { num, den: f.den.clone(), pow: top })
}

/// A row vector in D^r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeVector {
    pub ctx: Ctx,
    pub entries: Vec<Weyl>,
}

impl FreeVector {
    pub fn new(ctx: &Ctx, entries: Vec<Weyl>) -> FreeVector {
        FreeVector { ctx: ctx.clone(), entries }
    }

    pub fn zero(ctx: &Ctx, rank: usize) -> FreeVector {
        FreeVector { ctx: ctx.clone(), entries: vec![Weyl::zero(ctx); rank] }
    }

    pub fn unit(ctx: &Ctx, rank: usize, i: usize) -> FreeVector {
        let mut v = FreeVector::zero(ctx, rank);
        v.entries[i] = Weyl::one(ctx);
        v
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Weyl::is_zero)
    }

    pub fn add(&self, o: &FreeVector) -> FreeVector {
        FreeVector::new(&self.ctx, self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &FreeVector) -> FreeVector {
        FreeVector::new(&self.ctx, self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect())
    }

    /// p * v
    pub fn lmul(&self, p: &Weyl) -> FreeVector {
        FreeVector::new(&self.ctx, self.entries.iter().map(|a| p * a).collect())
    }

    pub fn scale(&self, c: &Q) -> FreeVector {
        FreeVector::new(&self.ctx, self.entries.iter().map(|a| a.scale(c)).collect())
    }

    /// v * A
    pub fn mul_matrix(&self, a: &OpMatrix) -> Result<FreeVector> {
        if a.rows != self.rank() {
            return Err(Error::ShapeMismatch(format!("vector of rank {} times {}x{}", self.rank(), a.rows, a.cols)));
        }
        let mut out = FreeVector::zero(&self.ctx, a.cols);
        for (i, vi) in self.entries.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..a.cols {
                let aij = a.get(i, j);
                if !aij.is_zero() {
                    out.entries[j] = &out.entries[j] + &(vi * aij);
                }
            }
        }
        Ok(out)
    }

    pub fn concat(&self, o: &FreeVector) -> FreeVector {
        let mut e = self.entries.clone();
        e.extend(o.entries.iter().cloned());
        FreeVector::new(&self.ctx, e)
    }
}

impl fmt::Display for FreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A matrix of operators acting on row vectors from the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpMatrix {
    pub ctx: Ctx,
    pub rows: usize,
    pub cols: usize,
    e: Vec<Weyl>,
}

impl OpMatrix {
    pub fn zero(ctx: &Ctx, rows: usize, cols: usize) -> OpMatrix {
        OpMatrix { ctx: ctx.clone(), rows, cols, e: vec![Weyl::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &Ctx, n: usize) -> OpMatrix {
        let mut m = OpMatrix::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, Weyl::one(ctx));
        }
        m
    }

    pub fn from_rows(ctx: &Ctx, cols: usize, rows: &[FreeVector]) -> OpMatrix {
        let mut m = OpMatrix::zero(ctx, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.rank(), cols, "row length");
            for (j, x) in r.entries.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Weyl {
        &self.e[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Weyl) {
        self.e[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> FreeVector {
        FreeVector::new(&self.ctx, self.e[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<FreeVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[Weyl] {
        &self.e
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Weyl::is_zero)
    }

    pub fn mul(&self, o: &OpMatrix) -> Result<OpMatrix> {
        if self.cols != o.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut m = OpMatrix::zero(&self.ctx, self.rows, o.cols);
        for i in 0..self.rows {
            let r = self.row(i).mul_matrix(o)?;
            for (j, v) in r.entries.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// tau applied entrywise, then the matrix transposed.
    pub fn tau(&self) -> OpMatrix {
        let mut m = OpMatrix::zero(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).transpose());
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(&Weyl) -> Weyl) -> OpMatrix {
        let e: Vec<Weyl> = self.e.iter().map(f).collect();
        let ctx = e.first().map(|w| w.ctx().clone()).unwrap_or_else(|| self.ctx.clone());
        OpMatrix { ctx, rows: self.rows, cols: self.cols, e }
    }

    pub fn try_map(&self, ctx: &Ctx, f: impl Fn(&Weyl) -> Result<Weyl>) -> Result<OpMatrix> {
        let e = self.e.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(OpMatrix { ctx: ctx.clone(), rows: self.rows, cols: self.cols, e })
    }

    pub fn neg(&self) -> OpMatrix {
        self.map(|w| -w)
    }

    pub fn add(&self, o: &OpMatrix) -> OpMatrix {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let e = self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect();
        OpMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, e }
    }
}

impl fmt::Display for OpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.row_vectors().iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

//! Left Gröbner bases of submodules of D^r.
//!
//! Orders compare, in turn: block (used for elimination), weight plus shift,
//! total degree, position, then degrevlex.  When the weight has a negative
//! entry the computation runs in the homogenized algebra
//! (`dx*x = x*dx + h^2`) and the result is dehomogenized afterwards.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use crate::weyl::{mono_product, Ctx, FreeVector, OpMatrix, Term, Weyl};
use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TermOrder {
    /// weights of x1..xn then dx1..dxn
    pub weight: Option<Vec<i64>>,
    /// per-component offsets added to the weight
    pub shift: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Restriction,
    Integration,
}

impl TermOrder {
    pub fn standard() -> TermOrder {
        TermOrder::default()
    }

    pub fn weighted(u: &[i64], v: &[i64]) -> TermOrder {
        let mut w = u.to_vec();
        w.extend_from_slice(v);
        TermOrder { weight: Some(w), shift: Vec::new() }
    }

    /// (-1,1) on the first d variables for restriction, (1,-1) for integration.
    pub fn v_filtration(n: usize, d: usize, variant: Variant) -> TermOrder {
        TermOrder { weight: Some(v_weight(n, d, variant)), shift: Vec::new() }
    }

    pub fn with_shift(mut self, shift: &[i64]) -> TermOrder {
        self.shift = shift.to_vec();
        self
    }

    fn needs_homogenization(&self) -> bool {
        self.weight.as_ref().is_some_and(|w| w.iter().any(|&x| x < 0))
    }
}

pub fn v_weight(n: usize, d: usize, variant: Variant) -> Vec<i64> {
    let s = match variant {
        Variant::Restriction => 1,
        Variant::Integration => -1,
    };
    let mut w = vec![0; 2 * n];
    for i in 0..d {
        w[i] = -s;
        w[n + i] = s;
    }
    w
}

/// Largest weight+shift over the terms of `v`; `i64::MIN` for zero.
pub fn weighted_degree(v: &FreeVector, weight: &[i64], shift: &[i64]) -> i64 {
    let mut best = i64::MIN;
    for (k, p) in v.entries.iter().enumerate() {
        let s = shift.get(k).copied().unwrap_or(0);
        for t in p.terms() {
            let w: i64 = t.e.iter().zip(weight).map(|(&e, &w)| e as i64 * w).sum();
            best = best.max(w + s);
        }
    }
    best
}

/// V_d-degree max(|b_H| - |a_H| + shift(j)) of a vector; `i64::MIN` for zero.
pub fn vdeg(v: &FreeVector, d: usize, shift: &[i64]) -> i64 {
    weighted_degree(v, &v_weight(v.ctx.n(), d, Variant::Restriction), shift)
}

#[derive(Clone, Debug)]
pub(crate) struct GT {
    pub e: Vec<u32>,
    pub k: usize,
    pub c: Q,
}

pub(crate) type GV = Vec<GT>;

#[derive(Clone, Debug)]
pub(crate) struct Engine {
    pub n: usize,
    pub rank: usize,
    pub weight: Option<Vec<i64>>,
    pub shift: Vec<i64>,
    pub block: Vec<u8>,
    pub homog: bool,
}

fn deg(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

impl Engine {
    pub fn new(n: usize, rank: usize, order: &TermOrder) -> Engine {
        let mut shift = order.shift.clone();
        shift.resize(rank, 0);
        Engine {
            n,
            rank,
            weight: order.weight.clone(),
            shift,
            block: vec![0; rank],
            homog: order.needs_homogenization(),
        }
    }

    fn wdeg(&self, e: &[u32], k: usize) -> i64 {
        match &self.weight {
            None => 0,
            Some(w) => e.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum::<i64>() + self.shift[k],
        }
    }

    pub fn cmp(&self, ae: &[u32], ak: usize, be: &[u32], bk: usize) -> Ordering {
        let o = self.block[bk].cmp(&self.block[ak]);
        if o != Ordering::Equal {
            return o;
        }
        if self.weight.is_some() {
            let o = self.wdeg(ae, ak).cmp(&self.wdeg(be, bk));
            if o != Ordering::Equal {
                return o;
            }
        }
        let o = deg(ae).cmp(&deg(be));
        if o != Ordering::Equal {
            return o;
        }
        let o = bk.cmp(&ak);
        if o != Ordering::Equal {
            return o;
        }
        for i in (0..ae.len()).rev() {
            if ae[i] != be[i] {
                return be[i].cmp(&ae[i]);
            }
        }
        Ordering::Equal
    }

    fn sort(&self, mut v: Vec<GT>) -> GV {
        v.sort_by(|a, b| self.cmp(&b.e, b.k, &a.e, a.k));
        let mut out: GV = Vec::with_capacity(v.len());
        for t in v {
            if let Some(last) = out.last_mut() {
                if last.k == t.k && last.e == t.e {
                    last.c += t.c;
                    if last.c.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !t.c.is_zero() {
                out.push(t);
            }
        }
        out
    }

    pub fn from_vector(&self, v: &FreeVector) -> GV {
        let mut ts = Vec::new();
        for (k, p) in v.entries.iter().enumerate() {
            for t in p.terms() {
                let mut e = t.e.clone();
                e.push(0);
                ts.push(GT { e, k, c: t.c.clone() });
            }
        }
        let g = self.sort(ts);
        if self.homog {
            self.homogenize(g)
        } else {
            g
        }
    }

    fn homogenize(&self, g: GV) -> GV {
        let top = g.iter().map(|t| deg(&t.e)).max().unwrap_or(0);
        let hs = 2 * self.n;
        let ts = g
            .into_iter()
            .map(|mut t| {
                t.e[hs] += (top - deg(&t.e)) as u32;
                t
            })
            .collect();
        self.sort(ts)
    }

    pub fn dehomogenize(&self, g: &GV) -> GV {
        let hs = 2 * self.n;
        let ts = g
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.e[hs] = 0;
                t
            })
            .collect();
        self.sort(ts)
    }

    pub fn to_vector(&self, ctx: &Ctx, g: &GV) -> FreeVector {
        let mut per: Vec<Vec<Term>> = vec![Vec::new(); self.rank];
        for t in g {
            let mut e = t.e.clone();
            let h = e.pop().unwrap_or(0);
            debug_assert!(h == 0 || !self.homog || true);
            per[t.k].push(Term { c: t.c.clone(), e });
        }
        FreeVector::new(ctx, per.into_iter().map(|ts| Weyl::from_terms(ctx, ts)).collect())
    }

    /// m * g for a monomial m (with h slot).
    pub fn mul_mono(&self, m: &[u32], g: &GV) -> GV {
        let mut out = Vec::with_capacity(g.len());
        for t in g {
            mono_product(self.n, m, &t.e, self.homog, |e, c| {
                out.push(GT { e, k: t.k, c: &t.c * Q::from_integer(c) });
            });
        }
        self.sort(out)
    }

    /// f - c*g, both sorted.
    fn sub_scaled(&self, f: &[GT], c: &Q, g: &[GT]) -> GV {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < f.len() && j < g.len() {
            match self.cmp(&f[i].e, f[i].k, &g[j].e, g[j].k) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(GT { e: g[j].e.clone(), k: g[j].k, c: -(c * &g[j].c) });
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &f[i].c - c * &g[j].c;
                    if !v.is_zero() {
                        out.push(GT { e: f[i].e.clone(), k: f[i].k, c: v });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        for t in &g[j..] {
            out.push(GT { e: t.e.clone(), k: t.k, c: -(c * &t.c) });
        }
        out
    }

    fn divides(a: &GT, b: &GT) -> bool {
        a.k == b.k && a.e.iter().zip(&b.e).all(|(x, y)| x <= y)
    }

    /// Full reduction of f by a list of monic elements.  When `quot` is
    /// given, the multipliers used are accumulated per basis element.
    pub fn reduce(&self, mut f: GV, basis: &[GV], mut quot: Option<&mut Vec<BTreeMap<Vec<u32>, Q>>>) -> GV {
        let mut i = 0;
        while i < f.len() {
            let hit = basis.iter().position(|g| Self::divides(&g[0], &f[i]));
            match hit {
                None => i += 1,
                Some(bi) => {
                    let g = &basis[bi];
                    let m: Vec<u32> = f[i].e.iter().zip(&g[0].e).map(|(a, b)| a - b).collect();
                    let c = &f[i].c / &g[0].c;
                    let mg = self.mul_mono(&m, g);
                    let tail = self.sub_scaled(&f[i..], &c, &mg);
                    if let Some(q) = quot.as_deref_mut() {
                        *q[bi].entry(m).or_insert_with(Q::zero) += c;
                    }
                    f.truncate(i);
                    f.extend(tail);
                }
            }
        }
        f
    }

    fn monic(mut g: GV) -> GV {
        if let Some(t) = g.first() {
            let inv = t.c.recip();
            for t in g.iter_mut() {
                t.c = &t.c * &inv;
            }
        }
        g
    }

    fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
    }

    fn strictly_divides(a: &[u32], b: &[u32]) -> bool {
        a != b && a.iter().zip(b).all(|(x, y)| x <= y)
    }

    /// Buchberger's algorithm with the chain criterion; returns a reduced basis.
    pub fn buchberger(&self, input: Vec<GV>) -> Vec<GV> {
        let mut input: Vec<GV> = input.into_iter().filter(|g| !g.is_empty()).collect();
        input.sort_by(|a, b| self.cmp(&a[0].e, a[0].k, &b[0].e, b[0].k));
        let mut basis: Vec<GV> = Vec::new();
        let mut pairs: Vec<(usize, usize, Vec<u32>)> = Vec::new();
        for f in input {
            let r = self.reduce(f, &basis, None);
            if !r.is_empty() {
                self.add(&mut basis, &mut pairs, Self::monic(r));
            }
        }
        while !pairs.is_empty() {
            let mut best = 0;
            for p in 1..pairs.len() {
                let (a, b) = (&pairs[p], &pairs[best]);
                let ka = basis[a.0][0].k;
                let kb = basis[b.0][0].k;
                let o = deg(&a.2).cmp(&deg(&b.2)).then_with(|| self.cmp(&a.2, ka, &b.2, kb));
                if o == Ordering::Less {
                    best = p;
                }
            }
            let (i, j, l) = pairs.swap_remove(best);
            let mi: Vec<u32> = l.iter().zip(&basis[i][0].e).map(|(a, b)| a - b).collect();
            let mj: Vec<u32> = l.iter().zip(&basis[j][0].e).map(|(a, b)| a - b).collect();
            let s = self.sub_scaled(&self.mul_mono(&mi, &basis[i]), &Q::one(), &self.mul_mono(&mj, &basis[j]));
            let r = self.reduce(s, &basis, None);
            if !r.is_empty() {
                self.add(&mut basis, &mut pairs, Self::monic(r));
            }
        }
        self.interreduce(basis)
    }

    fn add(&self, basis: &mut Vec<GV>, pairs: &mut Vec<(usize, usize, Vec<u32>)>, g: GV) {
        let k = basis.len();
        let lk = g[0].e.clone();
        let ck = g[0].k;
        pairs.retain(|(i, j, l)| {
            if basis[*i][0].k != ck || !lk.iter().zip(l).all(|(a, b)| a <= b) {
                return true;
            }
            let li = Self::lcm(&basis[*i][0].e, &lk);
            let lj = Self::lcm(&basis[*j][0].e, &lk);
            li == *l || lj == *l
        });
        let mut cand: Vec<(usize, Vec<u32>)> = Vec::new();
        for (i, b) in basis.iter().enumerate() {
            if b[0].k == ck {
                cand.push((i, Self::lcm(&b[0].e, &lk)));
            }
        }
        let mut keep: Vec<(usize, Vec<u32>)> = Vec::new();
        for (i, l) in &cand {
            if cand.iter().any(|(_, l2)| Self::strictly_divides(l2, l)) {
                continue;
            }
            if keep.iter().any(|(_, l2)| l2 == l) {
                continue;
            }
            keep.push((*i, l.clone()));
        }
        for (i, l) in keep {
            pairs.push((i, k, l));
        }
        basis.push(g);
    }

    pub fn interreduce(&self, basis: Vec<GV>) -> Vec<GV> {
        let mut basis: Vec<GV> = basis.into_iter().filter(|g| !g.is_empty()).collect();
        basis.sort_by(|a, b| self.cmp(&a[0].e, a[0].k, &b[0].e, b[0].k));
        let mut minimal: Vec<GV> = Vec::new();
        for g in basis {
            if minimal.iter().any(|m| Self::divides(&m[0], &g[0])) {
                continue;
            }
            minimal.push(g);
        }
        let mut out = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let lead = minimal[i][0].clone();
            let others: Vec<GV> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let tail = self.reduce(minimal[i][1..].to_vec(), &others, None);
            let mut g = vec![lead];
            g.extend(tail);
            out.push(Self::monic(g));
        }
        out
    }
}

/// A Gröbner basis of a submodule of D^rank.
#[derive(Clone, Debug)]
pub struct GBasis {
    ctx: Ctx,
    rank: usize,
    order: TermOrder,
    eng: Engine,
    /// the basis as computed (homogenized when the order needs it)
    raw: Vec<GV>,
    gens: Vec<FreeVector>,
}

pub fn groebner_basis(ctx: &Ctx, rank: usize, gens: &[FreeVector], order: &TermOrder) -> GBasis {
    let eng = Engine::new(ctx.n(), rank, order);
    let input: Vec<GV> = gens.iter().map(|g| eng.from_vector(g)).collect();
    let raw = eng.buchberger(input);
    let gens = raw.iter().map(|g| eng.to_vector(ctx, &eng.dehomogenize(g))).collect();
    GBasis { ctx: ctx.clone(), rank, order: order.clone(), eng, raw, gens }
}

impl GBasis {
    pub fn generators(&self) -> &[FreeVector] {
        &self.gens
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Remainder of `v` after division.  Under orders that need
    /// homogenization this is a remainder in the homogenized algebra,
    /// dehomogenized, so zero is sufficient but not necessary for membership.
    pub fn normal_form(&self, v: &FreeVector) -> FreeVector {
        let f = self.eng.from_vector(v);
        let r = self.eng.reduce(f, &self.raw, None);
        self.eng.to_vector(&self.ctx, &self.eng.dehomogenize(&r))
    }

    pub fn is_member(&self, v: &FreeVector) -> bool {
        if self.eng.homog {
            let f = self.eng.from_vector(v);
            let hs = 2 * self.ctx.n();
            // h-saturation: some h^k v^h reduces to zero
            for k in 0..=4 * (v.entries.iter().filter_map(Weyl::total_degree).max().unwrap_or(0) + 2) {
                let mut g = f.clone();
                for t in g.iter_mut() {
                    t.e[hs] += k;
                }
                if self.eng.reduce(g, &self.raw, None).is_empty() {
                    return true;
                }
            }
            return false;
        }
        self.normal_form(v).is_zero()
    }

    /// Division with quotients: `v = sum q_i * g_i + r` for the dehomogenized
    /// generators.  For homogenized orders `h^k v^h` is divided for the
    /// first k that leaves no remainder (up to `max_h`).
    pub fn divide(&self, v: &FreeVector, max_h: u32) -> (Vec<Weyl>, FreeVector) {
        let f = self.eng.from_vector(v);
        let hs = 2 * self.ctx.n();
        let tries = if self.eng.homog { max_h } else { 0 };
        let mut last = None;
        for k in 0..=tries {
            let mut g = f.clone();
            for t in g.iter_mut() {
                t.e[hs] += k;
            }
            let mut q = vec![BTreeMap::new(); self.raw.len()];
            let r = self.eng.reduce(g, &self.raw, Some(&mut q));
            let done = r.is_empty();
            last = Some((q, r));
            if done {
                break;
            }
        }
        let (q, r) = last.expect("at least one attempt");
        let n = self.ctx.n();
        let qs = q
            .into_iter()
            .map(|m| {
                let ts = m
                    .into_iter()
                    .map(|(mut e, c)| {
                        e.truncate(2 * n);
                        Term { c, e }
                    })
                    .collect();
                Weyl::from_terms(&self.ctx, ts)
            })
            .collect();
        (qs, self.eng.to_vector(&self.ctx, &self.eng.dehomogenize(&r)))
    }

    /// True when the basis contains a unit vector times a nonzero constant in
    /// every component (the submodule is everything).
    pub fn is_everything(&self) -> bool {
        (0..self.rank).all(|k| {
            self.raw.iter().any(|g| g[0].k == k && g[0].e.iter().all(|&x| x == 0))
        })
    }

    /// Leading exponent (without h) and component of each generator, under
    /// the dehomogenized order.
    pub fn leading_monomials(&self) -> Vec<(Vec<u32>, usize)> {
        let n = self.ctx.n();
        self.raw
            .iter()
            .map(|g| {
                let d = self.eng.dehomogenize(g);
                let mut e = d[0].e.clone();
                e.truncate(2 * n);
                (e, d[0].k)
            })
            .collect()
    }
}

pub fn normal_form(v: &FreeVector, gb: &GBasis) -> FreeVector {
    gb.normal_form(v)
}

pub fn is_member(v: &FreeVector, gb: &GBasis) -> bool {
    gb.is_member(v)
}

/// Reduced standard basis of the submodule generated by rows of a matrix and
/// relations, in D^s ⊕ D^r where the rows are tagged with unit vectors of
/// D^r.  Elements whose D^s part vanishes describe the kernel.
pub(crate) struct Augmented {
    ctx: Ctx,
    s: usize,
    r: usize,
    eng: Engine,
    raw: Vec<GV>,
}

impl Augmented {
    /// `rows` live in D^s and get the tags e_i; `rels` get tag 0.
    /// `order` applies to the D^s ⊕ D^r module (weights and shifts), with the
    /// D^s block eliminated first.
    pub fn new(ctx: &Ctx, s: usize, rows: &[FreeVector], rels: &[FreeVector], order: &TermOrder) -> Augmented {
        let r = rows.len();
        let mut eng = Engine::new(ctx.n(), s + r, order);
        for k in s..s + r {
            eng.block[k] = 1;
        }
        let mut input = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let v = row.concat(&FreeVector::unit(ctx, r, i));
            input.push(eng.from_vector(&v));
        }
        for rel in rels {
            input.push(eng.from_vector(&rel.concat(&FreeVector::zero(ctx, r))));
        }
        let raw = eng.buchberger(input);
        Augmented { ctx: ctx.clone(), s, r, eng, raw }
    }

    /// Kernel generators: tags of basis elements with no D^s part.
    pub fn kernel(&self) -> Vec<FreeVector> {
        self.raw
            .iter()
            .filter(|g| self.eng.block[g[0].k] == 1)
            .map(|g| {
                let v = self.eng.to_vector(&self.ctx, &self.eng.dehomogenize(g));
                FreeVector::new(&self.ctx, v.entries[self.s..].to_vec())
            })
            .collect()
    }

    /// Some u with u*rows = v modulo rels.
    pub fn lift(&self, v: &FreeVector) -> Result<FreeVector> {
        let f = self.eng.from_vector(&v.concat(&FreeVector::zero(&self.ctx, self.r)));
        let red = self.eng.reduce(f, &self.raw, None);
        if red.iter().any(|t| t.k < self.s) {
            return Err(Error::NotInImage);
        }
        let w = self.eng.to_vector(&self.ctx, &self.eng.dehomogenize(&red));
        Ok(FreeVector::new(&self.ctx, w.entries[self.s..].iter().map(|x| -x).collect()))
    }
}

/// Generators of {l : sum l_i * gens_i = 0}.
pub fn syzygies(ctx: &Ctx, rank: usize, gens: &[FreeVector]) -> Vec<FreeVector> {
    Augmented::new(ctx, rank, gens, &[], &TermOrder::standard()).kernel()
}

/// Generators of the kernel of D^r -> D^s / rels, v -> v*A.
pub fn kernel(a: &OpMatrix, rels: &[FreeVector]) -> Result<Vec<FreeVector>> {
    if rels.iter().any(|r| r.rank() != a.cols) {
        return Err(Error::ShapeMismatch("relation rank differs from codomain".into()));
    }
    Ok(Augmented::new(&a.ctx, a.cols, &a.row_vectors(), rels, &TermOrder::standard()).kernel())
}

/// Solves u*B = v modulo relations, reusing one Gröbner basis for many
/// right-hand sides.
pub struct Lifter {
    aug: Augmented,
    b: OpMatrix,
    rels: GBasis,
}

impl Lifter {
    pub fn new(b: &OpMatrix, rels: &[FreeVector]) -> Lifter {
        let aug = Augmented::new(&b.ctx, b.cols, &b.row_vectors(), rels, &TermOrder::standard());
        let rels = groebner_basis(&b.ctx, b.cols, rels, &TermOrder::standard());
        Lifter { aug, b: b.clone(), rels }
    }

    pub fn lift(&self, v: &FreeVector) -> Result<FreeVector> {
        let u = self.aug.lift(v)?;
        debug_assert!(self.rels.is_member(&u.mul_matrix(&self.b)?.sub(v)), "lift check");
        Ok(u)
    }
}

pub fn lift(v: &FreeVector, b: &OpMatrix, rels: &[FreeVector]) -> Result<FreeVector> {
    Lifter::new(b, rels).lift(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::w;

    fn v1(c: &Ctx, s: &str) -> FreeVector {
        FreeVector::new(c, vec![w(c, s)])
    }

    #[test]
    fn unit_ideal() {
        let c = Ctx::std(1);
        let gb = groebner_basis(&c, 1, &[v1(&c, "x1"), v1(&c, "1")], &TermOrder::standard());
        assert_eq!(gb.len(), 1);
        assert!(gb.is_everything());
    }

    #[test]
    fn reduce_by_d2() {
        let c = Ctx::std(1);
        let gb = groebner_basis(&c, 1, &[v1(&c, "dx1^2")], &TermOrder::standard());
        assert_eq!(gb.normal_form(&v1(&c, "x1*dx1^2 + 1")), v1(&c, "1"));
        assert!(gb.is_member(&v1(&c, "x1*dx1^3")));
    }

    #[test]
    fn membership() {
        let c = Ctx::std(1);
        let gb = groebner_basis(&c, 1, &[v1(&c, "(dx1-1)^2")], &TermOrder::standard());
        assert!(!gb.is_member(&v1(&c, "dx1-1")));
        assert!(gb.is_member(&v1(&c, "(dx1-1)^3")));
        assert!(gb.is_member(&FreeVector::zero(&c, 1)));
    }

    #[test]
    fn syzygy_of_duplicates() {
        let c = Ctx::std(1);
        let p = v1(&c, "x1*dx1 + 3");
        let s = syzygies(&c, 1, &[p.clone(), p.clone()]);
        assert_eq!(s.len(), 1);
        assert_eq!(&s[0].entries[0] + &s[0].entries[1], Weyl::zero(&c));
        assert!(syzygies(&c, 1, &[v1(&c, "dx1")]).is_empty());
    }

    #[test]
    fn lift_simple() {
        let c = Ctx::std(1);
        let b = OpMatrix::from_rows(&c, 1, &[v1(&c, "dx1")]);
        let u = lift(&v1(&c, "dx1^2"), &b, &[]).unwrap();
        assert_eq!(u, v1(&c, "dx1"));
        assert!(lift(&v1(&c, "x1"), &b, &[]).is_err());
    }

    #[test]
    fn weighted_basis_is_strict() {
        let c = Ctx::std(2);
        let gens = [v1(&c, "x1*dx1 + 2*x2*dx2 - 5"), v1(&c, "dx1^2 - dx2")];
        let ord = TermOrder::v_filtration(2, 2, Variant::Restriction);
        let gb = groebner_basis(&c, 1, &gens, &ord);
        for g in &gens {
            assert!(gb.is_member(g));
        }
    }
}

//! Polynomial and rational solutions, homomorphisms and extensions between
//! holonomic modules, all obtained by duality from derived restriction and
//! integration.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::groebner::{kernel, Variant};
use crate::homology::{box_total_complex, chain_lift, dual_transpose, free_resolution, Presentation, ShiftedComplex};
use crate::isomorphism::is_holonomic;
use crate::qlinalg::{rref, Echelon, RationalMatrix};
use crate::bfun::{b_function, BPolynomial};
use crate::restriction::derived;
use crate::weyl::{apply, cmp_mono, Ctx, FreeVector, OpMatrix, RationalFunction, Term, Weyl};
use crate::{Error, Result, Q};

/// A basis of solutions; every element is a vector of rational functions
/// with one entry per generator of the module.
#[derive(Clone, Debug)]
pub struct SolutionBasis {
    pub elements: Vec<Vec<RationalFunction>>,
    pub denominator: Option<Weyl>,
}

impl SolutionBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Sum over j of `L_j . R_j`.
pub fn act(l: &FreeVector, r: &[RationalFunction]) -> Result<RationalFunction> {
    let ctx = &l.ctx;
    let mut acc = RationalFunction::poly(Weyl::zero(ctx));
    for (p, f) in l.entries.iter().zip(r) {
        let g = apply(p, f)?;
        acc = add_rf(&acc, &g);
    }
    Ok(acc)
}

fn add_rf(a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        let top = a.pow.max(b.pow);
        let num = &(&a.num * &a.den.pow(top - a.pow)) + &(&b.num * &b.den.pow(top - b.pow));
        return RationalFunction::new(num, a.den.clone(), top);
    }
    let num = &(&a.num * &b.den.pow(b.pow)) + &(&b.num * &a.den.pow(a.pow));
    let den = &a.den.pow(a.pow) * &b.den.pow(b.pow);
    RationalFunction::new(num, den, 1)
}

/// True when every relation annihilates the candidate.
pub fn is_solution(p: &Presentation, r: &[RationalFunction]) -> Result<bool> {
    for l in &p.relations {
        if !act(l, r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reduced echelon form of a list of polynomial vectors sharing the
/// denominator `den^pow`; the largest monomial of each element gets
/// coefficient one.
fn echelon_numerators(rows: &[Vec<Weyl>]) -> Vec<Vec<Weyl>> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let ctx = first[0].ctx().clone();
    let r = first.len();
    let mut cols: Vec<(usize, Vec<u32>)> = Vec::new();
    for row in rows {
        for (j, p) in row.iter().enumerate() {
            for t in p.terms() {
                cols.push((j, t.e.clone()));
            }
        }
    }
    cols.sort_by(|a, b| a.0.cmp(&b.0).then(cmp_mono(&b.1, &a.1)));
    cols.dedup();
    let index: BTreeMap<&(usize, Vec<u32>), usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut m = RationalMatrix::zero(rows.len(), cols.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            for t in p.terms() {
                m.set(i, index[&(j, t.e.clone())], t.c.clone());
            }
        }
    }
    let (red, piv) = rref(&m);
    (0..piv.len())
        .map(|i| {
            let mut per: Vec<Vec<Term>> = vec![Vec::new(); r];
            for (k, (j, e)) in cols.iter().enumerate() {
                let c = red.get(i, k);
                if !c.is_zero() {
                    per[*j].push(Term { c: c.clone(), e: e.clone() });
                }
            }
            per.into_iter().map(|ts| Weyl::from_terms(&ctx, ts)).collect()
        })
        .collect()
}

/// The transposed top dual `tau(Ext^n(M, D))` presented by generators of the
/// kernel of the top map, together with those generators and the transposed
/// dual complex.  `None` when the module is zero.
fn top_dual(p: &Presentation) -> Result<Option<(Presentation, OpMatrix, ShiftedComplex)>> {
    let ctx = &p.ctx;
    let n = ctx.n();
    let x = free_resolution(p, n + 1);
    let t = dual_transpose(&x);
    let top = n as i32;
    let w_rows = if t.rank(top + 1) == 0 {
        (0..t.rank(top)).map(|i| FreeVector::unit(ctx, t.rank(top), i)).collect()
    } else {
        kernel(&t.map(top), &[])?
    };
    if w_rows.is_empty() {
        return Ok(None);
    }
    let w = OpMatrix::from_rows(ctx, t.rank(top), &w_rows);
    let pre = kernel(&w, &t.map(top - 1).row_vectors())?;
    let ext = Presentation::new(ctx, w_rows.len(), pre);
    if ext.gb().is_everything() {
        return Ok(None);
    }
    Ok(Some((ext, w, t)))
}

/// `tau(Ext^n(M, D))`, the module whose integration gives the polynomial
/// solutions of `p`; `None` when it vanishes.
pub fn solution_module(p: &Presentation) -> Result<Option<Presentation>> {
    if !is_holonomic(p) {
        return Err(Error::NotHolonomic);
    }
    Ok(top_dual(p)?.map(|t| t.0))
}

/// Polynomial solutions of a holonomic system.
pub fn polynomial_solutions(p: &Presentation) -> Result<SolutionBasis> {
    if !is_holonomic(p) {
        return Err(Error::NotHolonomic);
    }
    let ctx = &p.ctx;
    let n = ctx.n();
    let r0 = p.rank;
    let empty = SolutionBasis { elements: Vec::new(), denominator: None };
    if r0 == 0 {
        return Ok(empty);
    }
    let top = n as i32;
    let Some((ext, w, t)) = top_dual(p)? else {
        return Ok(empty);
    };
    let s = ext.rank;
    let dr = derived(&ext, n, &vec![0; s], Variant::Integration, top, n + 1)?;
    let classes = dr.classes(0)?;
    if classes.reps.is_empty() {
        return Ok(empty);
    }
    let pi = chain_lift(&w, top, &dr.resolution, &t, 0)?;
    let pi0 = pi.at(0).ok_or(Error::NotChainMap)?;
    let one = RationalFunction::poly(Weyl::one(ctx));
    let mut rows = Vec::new();
    for g in &classes.reps {
        let img = g.mul_matrix(pi0)?;
        let mut sol = Vec::with_capacity(r0);
        for e in &img.entries {
            sol.push(apply(&e.transpose(), &one)?.num);
        }
        rows.push(sol);
    }
    let elements: Vec<Vec<RationalFunction>> =
        echelon_numerators(&rows).into_iter().map(|v| v.into_iter().map(RationalFunction::poly).collect()).collect();
    for e in &elements {
        if !is_solution(p, e)? {
            return Err(Error::NotChainMap);
        }
    }
    Ok(SolutionBasis { elements, denominator: None })
}

/// Exact quotient of polynomials, if `f` divides `p`.
pub fn poly_div_exact(p: &Weyl, f: &Weyl) -> Option<Weyl> {
    let ctx = p.ctx().clone();
    let lf = f.leading()?.clone();
    let mut rem = p.clone();
    let mut quo = Weyl::zero(&ctx);
    while let Some(lt) = rem.leading().cloned() {
        if lt.e.iter().zip(&lf.e).any(|(a, b)| a < b) {
            return None;
        }
        let e = lt.e.iter().zip(&lf.e).map(|(a, b)| a - b).collect();
        let t = Weyl::from_terms(&ctx, vec![Term { c: &lt.c / &lf.c, e }]);
        rem = &rem - &(&t * f);
        quo = &quo + &t;
    }
    Some(quo)
}

/// `l = f * q` with f a polynomial: divides the x-coefficient of each
/// derivation monomial.
fn div_left(l: &Weyl, f: &Weyl) -> Option<Weyl> {
    let ctx = l.ctx().clone();
    let n = ctx.n();
    let mut groups: BTreeMap<Vec<u32>, Vec<Term>> = BTreeMap::new();
    for t in l.terms() {
        let mut e = t.e.clone();
        let beta = e[n..].to_vec();
        for x in &mut e[n..] {
            *x = 0;
        }
        groups.entry(beta).or_default().push(Term { c: t.c.clone(), e });
    }
    let mut out = Vec::new();
    for (beta, ts) in groups {
        let q = poly_div_exact(&Weyl::from_terms(&ctx, ts), f)?;
        for t in q.terms() {
            let mut e = t.e.clone();
            e[n..].copy_from_slice(&beta);
            out.push(Term { c: t.c.clone(), e });
        }
    }
    Some(Weyl::from_terms(&ctx, out))
}

/// `f^-pow * body` in the localized free module.
#[derive(Clone, Debug)]
struct Local {
    pow: u32,
    body: FreeVector,
}

impl Local {
    fn normalize(mut self, f: &Weyl) -> Local {
        while self.pow > 0 && !self.body.is_zero() {
            let q: Option<Vec<Weyl>> = self.body.entries.iter().map(|e| div_left(e, f)).collect();
            match q {
                Some(q) => {
                    self.body = FreeVector::new(&self.body.ctx, q);
                    self.pow -= 1;
                }
                None => break,
            }
        }
        if self.body.is_zero() {
            self.pow = 0;
        }
        self
    }

    fn add(&self, o: &Local, f: &Weyl) -> Local {
        let top = self.pow.max(o.pow);
        let a = self.body.lmul(&f.pow(top - self.pow));
        let b = o.body.lmul(&f.pow(top - o.pow));
        Local { pow: top, body: a.add(&b) }
    }
}

/// `u * f^-pow * body` rewritten as `f^-m * body'`, moving the derivations
/// of `u` past the fraction with the Leibniz rule.
fn lmul_local(u: &Weyl, v: &Local, f: &Weyl) -> Result<Local> {
    let ctx = u.ctx().clone();
    let n = ctx.n();
    if v.pow == 0 {
        return Ok(Local { pow: 0, body: v.body.lmul(u) });
    }
    let bmax = u.terms().iter().map(|t| t.e[n..].iter().sum::<u32>()).max().unwrap_or(0);
    let m = v.pow + bmax;
    let base = RationalFunction::new(Weyl::one(&ctx), f.clone(), v.pow);
    let mut derivs: BTreeMap<Vec<u32>, RationalFunction> = BTreeMap::new();
    let mut acc = FreeVector::zero(&ctx, v.body.rank());
    for t in u.terms() {
        let beta = &t.e[n..];
        let mut xa = t.e[..n].to_vec();
        xa.extend(core::iter::repeat(0).take(n));
        let xm = Weyl::from_terms(&ctx, vec![Term { c: t.c.clone(), e: xa }]);
        for gamma in crate::util::all_tuples(beta) {
            let mut de = vec![0u32; 2 * n];
            let mut coef = num_bigint::BigInt::from(1);
            let mut rest = vec![0u32; n];
            for i in 0..n {
                de[n + i] = gamma[i];
                coef *= crate::util::binom(beta[i], gamma[i]);
                rest[i] = beta[i] - gamma[i];
            }
            let g = match derivs.get(&gamma) {
                Some(g) => g.clone(),
                None => {
                    let dg = Weyl::from_terms(&ctx, vec![Term { c: Q::from_integer(1.into()), e: de }]);
                    let g = apply(&dg, &base)?;
                    derivs.insert(gamma.clone(), g.clone());
                    g
                }
            };
            if g.is_zero() {
                continue;
            }
            let lead = &(&xm * &g.num) * &f.pow(m - g.pow);
            let op = &lead.scale(&Q::from_integer(coef)) * &Weyl::monomial(&ctx, Q::from_integer(1.into()), &vec![0; n], &rest);
            acc = acc.add(&v.body.lmul(&op));
        }
    }
    Ok(Local { pow: m, body: acc })
}

/// `u * f^-pow = f^-m * l`; returns (m, l).
pub fn past_fraction(u: &Weyl, f: &Weyl, pow: u32) -> Result<(u32, Weyl)> {
    let ctx = u.ctx();
    let v = Local { pow, body: FreeVector::new(ctx, vec![Weyl::one(ctx)]) };
    let r = lmul_local(u, &v, f)?;
    Ok((r.pow, r.body.entries[0].clone()))
}

fn combine(row: &FreeVector, imgs: &[Local], f: &Weyl) -> Result<Local> {
    let ctx = &row.ctx;
    let rank = imgs.first().map(|l| l.body.rank()).unwrap_or(0);
    let mut acc = Local { pow: 0, body: FreeVector::zero(ctx, rank) };
    for (u, img) in row.entries.iter().zip(imgs) {
        if u.is_zero() || img.body.is_zero() {
            continue;
        }
        acc = acc.add(&lmul_local(u, img, f)?, f);
    }
    Ok(acc.normalize(f))
}

/// The localization of the top dual module, supplied by the caller: the
/// presentation `D^s / Q`, the polynomial f and the exponents with
/// `e_i -> e_i * f^-a_i`.
#[derive(Clone, Debug)]
pub struct LocalizationData {
    pub f: Weyl,
    pub presentation: Presentation,
    pub exponents: Vec<u32>,
}

/// Solutions with poles along `loc.f`.
pub fn localized_solutions(p: &Presentation, loc: &LocalizationData, cap: u32) -> Result<SolutionBasis> {
    if !is_holonomic(p) {
        return Err(Error::NotHolonomic);
    }
    let ctx = &p.ctx;
    let n = ctx.n();
    let f = &loc.f;
    let x = free_resolution(p, n + 1);
    let t = dual_transpose(&x);
    let top = n as i32;
    let w_rows: Vec<FreeVector> = if t.rank(top + 1) == 0 {
        (0..t.rank(top)).map(|i| FreeVector::unit(ctx, t.rank(top), i)).collect()
    } else {
        kernel(&t.map(top), &[])?
    };
    let s = w_rows.len();
    if loc.presentation.rank != s || loc.exponents.len() != s {
        return Err(Error::ShapeMismatch(alloc::format!(
            "localization has rank {} for a dual module on {} generators",
            loc.presentation.rank,
            s
        )));
    }
    let dr = derived(&loc.presentation, n, &vec![0; s], Variant::Integration, top, n + 1)?;
    let classes = dr.classes(0)?;
    let e = &dr.resolution;
    let mut pi: Vec<Local> =
        w_rows.iter().zip(&loc.exponents).map(|(r, &a)| Local { pow: a, body: r.clone() }.normalize(f)).collect();
    let mut deg = top - 1;
    while deg >= 0 {
        let tm = t.map(deg);
        let lifter = crate::groebner::Lifter::new(&tm, &[]);
        let mut next = Vec::new();
        for row in e.map(deg).row_vectors() {
            let l = combine(&row, &pi, f)?;
            if l.body.is_zero() {
                next.push(Local { pow: 0, body: FreeVector::zero(ctx, t.rank(deg)) });
                continue;
            }
            let mut found = None;
            let mut cur = l.body.clone();
            for k in 0..=cap {
                if let Ok(u) = lifter.lift(&cur) {
                    found = Some(Local { pow: l.pow + k, body: u }.normalize(f));
                    break;
                }
                cur = cur.lmul(f);
            }
            next.push(found.ok_or(Error::LiftCapExceeded(cap))?);
        }
        pi = next;
        deg -= 1;
    }
    let mut out = Vec::new();
    for g in &classes.reps {
        let img = combine(g, &pi, f)?;
        let base = RationalFunction::new(Weyl::one(ctx), f.clone(), img.pow);
        let mut sol = Vec::new();
        for e in &img.body.entries {
            sol.push(apply(&e.transpose(), &base)?);
        }
        out.push(sol);
    }
    for sol in &out {
        if !is_solution(p, sol)? {
            return Err(Error::NotChainMap);
        }
    }
    Ok(SolutionBasis { elements: out, denominator: Some(f.clone()) })
}

/// Puts solutions with possibly different denominators over a common one,
/// reduces to echelon form and cancels what can be cancelled.
pub fn merge_solutions(ctx: &crate::weyl::Ctx, parts: &[SolutionBasis]) -> SolutionBasis {
    let mut dens: Vec<(Weyl, u32)> = Vec::new();
    for b in parts {
        for sol in &b.elements {
            for r in sol {
                if r.pow == 0 || r.den.is_one() || r.is_zero() {
                    continue;
                }
                match dens.iter_mut().find(|(d, _)| d == &r.den) {
                    Some(entry) => entry.1 = entry.1.max(r.pow),
                    None => dens.push((r.den.clone(), r.pow)),
                }
            }
        }
    }
    let mut rows = Vec::new();
    for b in parts {
        for sol in &b.elements {
            let row: Vec<Weyl> = sol
                .iter()
                .map(|r| {
                    let mut num = r.num.clone();
                    for (d, k) in &dens {
                        let have = if &r.den == d && !r.den.is_one() { r.pow } else { 0 };
                        num = &num * &d.pow(k - have);
                    }
                    num
                })
                .collect();
            rows.push(row);
        }
    }
    let mut elements = Vec::new();
    for row in echelon_numerators(&rows) {
        let mut row = row;
        let mut exps: Vec<u32> = dens.iter().map(|(_, k)| *k).collect();
        for (i, (d, _)) in dens.iter().enumerate() {
            while exps[i] > 0 {
                let q: Option<Vec<Weyl>> = row.iter().map(|p| poly_div_exact(p, d)).collect();
                match q {
                    Some(q) => {
                        row = q;
                        exps[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        let live: Vec<usize> = (0..dens.len()).filter(|&i| exps[i] > 0).collect();
        let sol = row
            .into_iter()
            .map(|num| match live.as_slice() {
                [] => RationalFunction::poly(num),
                [i] => RationalFunction::new(num, dens[*i].0.clone(), exps[*i]),
                _ => {
                    let mut den = Weyl::one(ctx);
                    for &i in &live {
                        den = &den * &dens[i].0.pow(exps[i]);
                    }
                    RationalFunction::new(num, den, 1)
                }
            })
            .collect();
        elements.push(sol);
    }
    let denominator = match dens.len() {
        0 => None,
        _ => Some(dens.iter().fold(Weyl::one(ctx), |a, (d, _)| &a * d)),
    };
    SolutionBasis { elements, denominator }
}

/// Rational solutions: the polynomial ones together with those found for
/// each localization.  Without localization data the singular locus must
/// have no hypersurface component.
pub fn rational_solutions(p: &Presentation, localized: &[LocalizationData], cap: u32) -> Result<SolutionBasis> {
    if !is_holonomic(p) {
        return Err(Error::NotHolonomic);
    }
    if localized.is_empty() {
        let f = crate::isomorphism::singular_locus_hypersurface(p)?;
        if f.as_constant().is_none() {
            return Err(Error::LocalizationRequired);
        }
        return polynomial_solutions(p);
    }
    let mut parts = vec![polynomial_solutions(p)?];
    for loc in localized {
        parts.push(localized_solutions(p, loc, cap)?);
    }
    Ok(merge_solutions(&p.ctx, &parts))
}

/// A map `D^{r0}/M0 -> D^{s0}/N0` given by right multiplication with `a`.
#[derive(Clone, Debug)]
pub struct HomMatrix {
    pub a: OpMatrix,
    pub source: Presentation,
    pub target: Presentation,
}

impl HomMatrix {
    /// `L * A` lies in the target relations for every source relation `L`.
    pub fn is_valid(&self) -> Result<bool> {
        let gb = self.target.gb();
        for l in &self.source.relations {
            if !gb.is_member(&l.mul_matrix(&self.a)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Cocycles `D^{r_{-i}} -> N` spanning `H^i(Hom(X, N))`.
#[derive(Clone, Debug)]
pub struct ExtBasis {
    pub i: usize,
    pub resolution: ShiftedComplex,
    pub classes: Vec<OpMatrix>,
}

/// The middle term of the extension attached to a cocycle combination.
#[derive(Clone, Debug)]
pub struct YonedaExtension {
    pub kappa: Vec<Q>,
    /// `(D^{r_{-i+1}} + D^{s0})` modulo `0 + N0` and the graph of the cocycle
    pub q: Presentation,
    /// `N -> Q`
    pub from_n: OpMatrix,
    /// `Q -> D^{r_{-i+2}}`, or the projection onto `D^{r0}` when i = 1
    pub to_next: OpMatrix,
}

/// `x^a dx^b y^c dy^e` in the (a, b) slot of `D^r ⊠ D^s` is rewritten as
/// `tau(x^a dx^b) x^c dx^e` in `ctx`.
fn diagonal(l: &Weyl, ctx: &Ctx) -> Result<Weyl> {
    let h = ctx.n();
    let mut out = Weyl::zero(ctx);
    for t in l.terms() {
        let mut left = vec![0u32; 2 * h];
        left[..h].copy_from_slice(&t.e[..h]);
        left[h..].copy_from_slice(&t.e[2 * h..3 * h]);
        let mut right = vec![0u32; 2 * h];
        right[..h].copy_from_slice(&t.e[h..2 * h]);
        right[h..].copy_from_slice(&t.e[3 * h..]);
        let lw = Weyl::from_terms(ctx, vec![Term { c: t.c.clone(), e: left }]).transpose();
        let rw = Weyl::from_terms(ctx, vec![Term { c: Q::from_integer(1.into()), e: right }]);
        out = &out + &(&lw * &rw);
    }
    Ok(out)
}

/// Keeps the matrices whose row normal forms modulo `gb` are K-linearly
/// independent of the earlier ones; the kept matrices are the normal forms.
fn independent_mod(gb: &crate::groebner::GBasis, mats: Vec<OpMatrix>) -> Vec<OpMatrix> {
    let reduced: Vec<OpMatrix> = mats
        .iter()
        .map(|m| {
            let rows: Vec<FreeVector> = m.row_vectors().iter().map(|r| gb.normal_form(r)).collect();
            OpMatrix::from_rows(&m.ctx, m.cols, &rows)
        })
        .collect();
    let mut index: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
    for m in &reduced {
        for (k, e) in m.entries().iter().enumerate() {
            for t in e.terms() {
                let len = index.len();
                index.entry((k, t.e.clone())).or_insert(len);
            }
        }
    }
    let mut ech = Echelon::new();
    let mut kept = Vec::new();
    for m in reduced {
        let mut v = vec![Q::zero(); index.len()];
        for (k, e) in m.entries().iter().enumerate() {
            for t in e.terms() {
                v[index[&(k, t.e.clone())]] = t.c.clone();
            }
        }
        if ech.insert(&v) {
            kept.push(m);
        }
    }
    kept
}

/// The data of the diagonal restriction: the resolution X of M, the twisted
/// total complex, the surjection onto its top kernel and the module at the top.
struct Diagonal {
    x: ShiftedComplex,
    y_ctx: Ctx,
    twisted: ShiftedComplex,
    w: OpMatrix,
    module: Presentation,
}

fn diagonal_module(m: &Presentation, n: &Presentation) -> Result<Option<Diagonal>> {
    if m.ctx != n.ctx {
        return Err(Error::ContextMismatch);
    }
    if !is_holonomic(m) || !is_holonomic(n) {
        return Err(Error::NotHolonomic);
    }
    let h = m.ctx.n();
    let y = free_resolution(n, 2 * h + 1);
    let x = free_resolution(m, 2 * h + 2 + y.maps.len());
    if m.rank == 0 || n.rank == 0 {
        return Ok(None);
    }
    let std = Ctx::std(h);
    let to_std = |c: &ShiftedComplex| -> Result<ShiftedComplex> {
        let mut c = c.clone();
        c.maps = c.maps.iter().map(|a| a.try_map(&std, |e| e.with_ctx(&std))).collect::<Result<_>>()?;
        c.ctx = std.clone();
        Ok(c)
    };
    let z = box_total_complex(&dual_transpose(&to_std(&x)?), &to_std(&y)?)?;
    let dctx = z.ctx.clone();
    let mut twisted = z.clone();
    twisted.maps = z.maps.iter().map(|a| a.try_map(&dctx, Weyl::eta)).collect::<Result<_>>()?;
    let top = h as i32;
    let un = twisted.rank(top);
    if un == 0 {
        return Ok(None);
    }
    let w_rows = if twisted.rank(top + 1) == 0 {
        (0..un).map(|k| FreeVector::unit(&dctx, un, k)).collect()
    } else {
        kernel(&twisted.map(top), &[])?
    };
    if w_rows.is_empty() {
        return Ok(None);
    }
    let w = OpMatrix::from_rows(&dctx, un, &w_rows);
    let pre = kernel(&w, &twisted.map(top - 1).row_vectors())?;
    let module = Presentation::new(&dctx, w_rows.len(), pre);
    if module.gb().is_everything() {
        return Ok(None);
    }
    Ok(Some(Diagonal { x, y_ctx: std, twisted, w, module }))
}

/// The restriction b-function of the module whose restriction to the
/// origin computes `Hom(M, N)`; None when that module is zero.
pub fn hom_b_function(m: &Presentation, n: &Presentation) -> Result<Option<BPolynomial>> {
    let Some(dg) = diagonal_module(m, n)? else {
        return Ok(None);
    };
    let d = dg.module.ctx.n();
    b_function(&dg.module, d, &vec![0; dg.module.rank], Variant::Restriction).map(Some)
}

/// The classes of `H^i(Hom(X, N))` as matrices `D^{r_{-i}} -> D^{s0}`, with
/// the resolution X of `m` they refer to.
fn ext_cocycles(m: &Presentation, n: &Presentation, i: usize) -> Result<(ShiftedComplex, Vec<OpMatrix>)> {
    let ctx = &m.ctx;
    let h = ctx.n();
    let Some(dg) = diagonal_module(m, n)? else {
        return Ok((free_resolution(m, 2 * h + 1), Vec::new()));
    };
    let x = dg.x;
    let deg = i as i32;
    if i > h || x.rank(-deg) == 0 {
        return Ok((x, Vec::new()));
    }
    let top = h as i32;
    let s = dg.module.rank;
    let dr = derived(&dg.module, 2 * h, &vec![0; s], Variant::Restriction, top, h + 1 - i)?;
    let classes = dr.classes(deg)?;
    if classes.reps.is_empty() {
        return Ok((x, Vec::new()));
    }
    let pi = chain_lift(&dg.w, top, &dr.resolution, &dg.twisted, deg)?;
    let pid = pi.at(deg).ok_or(Error::NotChainMap)?;
    let r = x.rank(-deg);
    let s0 = n.rank;
    // the summand D^{r_{-i}} ⊠ D^{s0} comes first in degree i
    let mut out = Vec::new();
    for g in &classes.reps {
        let l = g.mul_matrix(pid)?;
        let mut a = OpMatrix::zero(ctx, r, s0);
        for ra in 0..r {
            for sb in 0..s0 {
                let e = l.entries[ra * s0 + sb].eta_inv()?;
                a.set(ra, sb, diagonal(&e, &dg.y_ctx)?.with_ctx(ctx)?);
            }
        }
        out.push(a);
    }
    Ok((x, out))
}

/// A basis of `Hom(M, N)`, normalized modulo the target relations.
pub fn hom_basis(m: &Presentation, n: &Presentation) -> Result<Vec<HomMatrix>> {
    let (_, mats) = ext_cocycles(m, n, 0)?;
    let gb = n.gb();
    let mut out = Vec::new();
    for a in independent_mod(&gb, mats) {
        let hm = HomMatrix { a, source: m.clone(), target: n.clone() };
        if !hm.is_valid()? {
            return Err(Error::NotChainMap);
        }
        out.push(hm);
    }
    Ok(out)
}

/// A basis of `Ext^i(M, N)` as cocycles on a free resolution of M.
pub fn ext_basis(m: &Presentation, n: &Presentation, i: usize) -> Result<ExtBasis> {
    let (x, mats) = ext_cocycles(m, n, i)?;
    let gb = n.gb();
    let classes = independent_mod(&gb, mats);
    let deg = i as i32;
    if x.rank(-deg - 1) > 0 {
        let inc = x.map(-deg - 1);
        for a in &classes {
            let c = inc.mul(a)?;
            if !c.row_vectors().iter().all(|r| gb.is_member(r)) {
                return Err(Error::NotChainMap);
            }
        }
    }
    Ok(ExtBasis { i, resolution: x, classes })
}

/// The extension `0 -> N -> Q -> X^{-i+2} -> ... -> X^0 -> M -> 0` of the
/// cocycle `sum kappa_h phi_h`.
pub fn yoneda_extension(n: &Presentation, ext: &ExtBasis, kappa: &[Q]) -> Result<YonedaExtension> {
    if ext.i == 0 {
        return Err(Error::OutOfRange(String::from("Yoneda extensions need i >= 1")));
    }
    if kappa.len() != ext.classes.len() {
        return Err(Error::ShapeMismatch(format!("{} coefficients for {} classes", kappa.len(), ext.classes.len())));
    }
    let ctx = &n.ctx;
    let x = &ext.resolution;
    let deg = ext.i as i32;
    let r = x.rank(-deg + 1);
    let ri = x.rank(-deg);
    let s0 = n.rank;
    let mut phi = OpMatrix::zero(ctx, ri, s0);
    for (c, k) in ext.classes.iter().zip(kappa) {
        phi = phi.add(&c.map(|e| e.scale(k)));
    }
    let mi = if ri > 0 { x.map(-deg) } else { OpMatrix::zero(ctx, 0, r) };
    let mut rels = Vec::new();
    for j in 0..ri {
        rels.push(mi.row(j).concat(&phi.row(j)));
    }
    for g in &n.relations {
        rels.push(FreeVector::zero(ctx, r).concat(g));
    }
    let q = Presentation::new(ctx, r + s0, rels);
    let mut from_n = OpMatrix::zero(ctx, s0, r + s0);
    for b in 0..s0 {
        from_n.set(b, r + b, Weyl::one(ctx));
    }
    let next = if ext.i == 1 { OpMatrix::identity(ctx, r) } else { x.map(-deg + 1) };
    let mut to_next = OpMatrix::zero(ctx, r + s0, next.cols);
    for a in 0..r {
        for c in 0..next.cols {
            to_next.set(a, c, next.get(a, c).clone());
        }
    }
    Ok(YonedaExtension { kappa: kappa.to_vec(), q, from_n, to_next })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::w;

    fn polys(b: &SolutionBasis) -> Vec<Weyl> {
        b.elements.iter().map(|v| v[0].num.clone()).collect()
    }

    #[test]
    fn third_derivative() {
        let c = Ctx::std(1);
        let b = polynomial_solutions(&Presentation::cyclic(&c, &[w(&c, "dx1^3")])).unwrap();
        assert_eq!(b.dim(), 3);
        let want = echelon_numerators(&[vec![w(&c, "1")], vec![w(&c, "x1")], vec![w(&c, "x1^2")]]);
        let got = echelon_numerators(&b.elements.iter().map(|v| vec![v[0].num.clone()]).collect::<Vec<_>>());
        assert_eq!(got, want);
    }

    #[test]
    fn unit_ideal_has_none() {
        let c = Ctx::std(1);
        let b = polynomial_solutions(&Presentation::cyclic(&c, &[w(&c, "1")])).unwrap();
        assert_eq!(b.dim(), 0);
    }

    #[test]
    fn exponential_has_none() {
        let c = Ctx::std(1);
        let b = polynomial_solutions(&Presentation::cyclic(&c, &[w(&c, "dx1 - 1")])).unwrap();
        assert_eq!(b.dim(), 0);
    }

    #[test]
    fn reciprocal() {
        let c = Ctx::std(1);
        let p = Presentation::cyclic(&c, &[w(&c, "x1*dx1 + 1")]);
        let x1 = w(&c, "x1");
        let loc = LocalizationData { f: x1.clone(), presentation: p.clone(), exponents: vec![1] };
        let b = rational_solutions(&p, &[loc], 50).unwrap();
        assert_eq!(b.dim(), 1);
        let r = &b.elements[0][0];
        assert!(r.same_as(&RationalFunction::new(w(&c, "1"), x1, 1)));
    }

    #[test]
    fn division() {
        let c = Ctx::std(2);
        let q = poly_div_exact(&w(&c, "x1^2 - x2^2"), &w(&c, "x1 + x2")).unwrap();
        assert_eq!(q, w(&c, "x1 - x2"));
        assert!(poly_div_exact(&w(&c, "x1^2 + x2"), &w(&c, "x1 + x2")).is_none());
        let l = w(&c, "x1^2*dx2 + x1*x2*dx1*dx2");
        assert_eq!(div_left(&l, &w(&c, "x1")).unwrap(), w(&c, "x1*dx2 + x2*dx1*dx2"));
    }

    #[test]
    fn gkz() {
        let c = Ctx::std(2);
        let p = Presentation::cyclic(&c, &[w(&c, "x1*dx1 + 2*x2*dx2 - 5"), w(&c, "dx1^2 - dx2")]);
        let b = polynomial_solutions(&p).unwrap();
        assert_eq!(polys(&b), vec![w(&c, "x1^5 + 20*x1^3*x2 + 60*x1*x2^2")]);
    }

    fn mat(c: &Ctx, e: &str) -> OpMatrix {
        OpMatrix::from_rows(c, 1, &[FreeVector::new(c, vec![w(c, e)])])
    }

    fn same_span(n: &Presentation, a: Vec<OpMatrix>, b: Vec<OpMatrix>) -> bool {
        let gb = n.gb();
        let k = independent_mod(&gb, a.clone()).len();
        k == independent_mod(&gb, b.clone()).len() && independent_mod(&gb, [a, b].concat()).len() == k
    }

    #[test]
    fn hom_between_exponentials() {
        let c = Ctx::std(1);
        let m = Presentation::cyclic(&c, &[w(&c, "dx1 - 1")]);
        let n = Presentation::cyclic(&c, &[w(&c, "(dx1 - 1)^2")]);
        let hs = hom_basis(&m, &n).unwrap();
        assert_eq!(hs.len(), 2);
        let got = hs.into_iter().map(|h| h.a).collect();
        assert!(same_span(&n, got, vec![mat(&c, "dx1 - 1"), mat(&c, "x1*dx1 - x1 - 1")]));
        let b = hom_b_function(&m, &n).unwrap().unwrap();
        assert_eq!(b, BPolynomial::from_roots(&[-1, -2]));
    }

    #[test]
    fn identity_is_an_endomorphism() {
        let c = Ctx::std(1);
        let m = Presentation::cyclic(&c, &[w(&c, "x1*dx1 - 2")]);
        let hs: Vec<OpMatrix> = hom_basis(&m, &m).unwrap().into_iter().map(|h| h.a).collect();
        let k = hs.len();
        assert!(k >= 1);
        assert_eq!(independent_mod(&m.gb(), [hs, vec![mat(&c, "1")]].concat()).len(), k);
    }

    #[test]
    fn ext_one_and_its_extensions() {
        let c = Ctx::std(1);
        let m = Presentation::cyclic(&c, &[w(&c, "dx1")]);
        let n = Presentation::cyclic(&c, &[w(&c, "x1")]);
        let e = ext_basis(&m, &n, 1).unwrap();
        assert_eq!(e.classes.len(), 1);
        assert!(e.classes[0].get(0, 0).as_constant().is_some_and(|q| !q.is_zero()));
        assert!(ext_basis(&m, &n, 2).unwrap().classes.is_empty());
        assert_eq!(hom_basis(&m, &n).unwrap().len(), 0);

        let k = e.classes[0].get(0, 0).as_constant().unwrap();
        let annihilator = |kappa: i64| {
            let y = yoneda_extension(&n, &e, &[Q::from_integer(kappa.into()) / &k]).unwrap();
            let gen = OpMatrix::from_rows(&c, 2, &[FreeVector::new(&c, vec![w(&c, "1"), w(&c, "1")])]);
            let ann = kernel(&gen, &y.q.relations).unwrap();
            Presentation::cyclic(&c, &ann.iter().map(|v| v.entries[0].clone()).collect::<Vec<_>>())
        };
        let gens = |p: Presentation| p.gb().generators().to_vec();
        let minus = Presentation::cyclic(&c, &[w(&c, "dx1^2*x1 - x1*dx1"), w(&c, "x1^2*dx1")]);
        let plus = Presentation::cyclic(&c, &[w(&c, "dx1^2*x1 + x1*dx1"), w(&c, "x1^2*dx1")]);
        assert_eq!(gens(annihilator(1)), gens(minus));
        assert_eq!(gens(annihilator(-1)), gens(plus));
    }
}

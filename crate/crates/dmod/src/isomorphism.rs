//! Holonomicity, isomorphism tests with explicit witnesses, direct summands,
//! the defect ideal of an endomorphism ring and the d-invariants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bfun::initial_form;
use crate::groebner::{groebner_basis, GBasis, TermOrder};
use crate::homology::Presentation;
use crate::qlinalg::{rref, RationalMatrix};
use crate::solutions::{hom_basis, HomMatrix};
use crate::weyl::{Ctx, FreeVector, OpMatrix, Term, Weyl};
use crate::{Error, Result, Q};

use num_traits::Zero;

/// Dimension of the graded module cut out by the leading monomials of a
/// standard basis, maximized over the components.
pub fn dimension(p: &Presentation) -> usize {
    let n2 = 2 * p.ctx.n();
    if p.rank == 0 {
        return 0;
    }
    let gb = p.gb();
    let lead = gb.leading_monomials();
    let mut best = 0;
    for k in 0..p.rank {
        let supports: Vec<u32> = lead
            .iter()
            .filter(|(_, c)| *c == k)
            .map(|(e, _)| e.iter().enumerate().filter(|(_, &x)| x > 0).fold(0u32, |m, (i, _)| m | (1 << i)))
            .collect();
        if supports.iter().any(|&s| s == 0) {
            continue;
        }
        for set in 0u32..(1 << n2) {
            let size = set.count_ones() as usize;
            if size > best && supports.iter().all(|&s| s & !set != 0) {
                best = size;
            }
        }
    }
    best
}

/// The characteristic variety has dimension at most n (zero modules count).
pub fn is_holonomic(p: &Presentation) -> bool {
    if p.rank == 0 {
        return true;
    }
    if p.gb().is_everything() {
        return true;
    }
    dimension(p) <= p.ctx.n()
}

/// Gröbner basis of a commutative ideal (derivation-free elements), with
/// an optional nonnegative weight on the variables.
pub fn comm_gb(ctx: &Ctx, gens: &[Weyl], weight: Option<&[i64]>) -> GBasis {
    let vs: Vec<FreeVector> = gens.iter().filter(|g| !g.is_zero()).map(|g| FreeVector::new(ctx, vec![g.clone()])).collect();
    let order = match weight {
        Some(w) => TermOrder::weighted(w, &vec![0; ctx.n()]),
        None => TermOrder::standard(),
    };
    groebner_basis(ctx, 1, &vs, &order)
}

fn uses(p: &Weyl, vars: &[usize]) -> bool {
    p.terms().iter().any(|t| vars.iter().any(|&v| t.e[v] > 0))
}

/// Generators of the ideal intersected with the ring of the other variables.
pub fn eliminate(ctx: &Ctx, gens: &[Weyl], vars: &[usize]) -> Vec<Weyl> {
    let mut w = vec![0; ctx.n()];
    for &v in vars {
        w[v] = 1;
    }
    comm_gb(ctx, gens, Some(&w))
        .generators()
        .iter()
        .map(|g| g.entries[0].clone())
        .filter(|g| !uses(g, vars))
        .collect()
}

/// `(a) ∩ (b)` through an auxiliary variable `t`.
pub fn intersect(ctx: &Ctx, a: &[Weyl], b: &[Weyl], t: usize) -> Vec<Weyl> {
    let tv = Weyl::x(ctx, t);
    let one_t = &Weyl::one(ctx) - &tv;
    let mut gens: Vec<Weyl> = a.iter().map(|g| &tv * g).collect();
    gens.extend(b.iter().map(|g| &one_t * g));
    eliminate(ctx, &gens, &[t])
}

/// `I : g^∞` through an auxiliary variable `t`.
pub fn saturate(ctx: &Ctx, gens: &[Weyl], g: &Weyl, t: usize) -> Vec<Weyl> {
    let mut all = gens.to_vec();
    all.push(&Weyl::one(ctx) - &(&Weyl::x(ctx, t) * g));
    eliminate(ctx, &all, &[t])
}

/// Greatest common divisor of two polynomials, up to a scalar.
pub fn poly_gcd(ctx: &Ctx, a: &Weyl, b: &Weyl, t: usize) -> Weyl {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let l = intersect(ctx, &[a.clone()], &[b.clone()], t);
    let l = l.into_iter().next().expect("principal intersection");
    crate::solutions::poly_div_exact(&(a * b), &l).expect("lcm divides the product").primitive()
}

/// The hypersurface part of the singular locus: the codimension one part of
/// the projection of the characteristic variety off the zero section.
/// Only cyclic presentations are handled.
pub fn singular_locus_hypersurface(p: &Presentation) -> Result<Weyl> {
    if !is_holonomic(p) {
        return Err(Error::NotHolonomic);
    }
    let n = p.ctx.n();
    if p.rank == 0 || p.gb().is_everything() {
        return Ok(Weyl::one(&p.ctx));
    }
    if p.rank != 1 {
        return Err(Error::OutOfRange(String::from("singular locus of a non-cyclic presentation")));
    }
    let mut names: Vec<String> = (0..n).map(|i| p.ctx.x_name(i)).collect();
    names.extend((0..n).map(|i| format!("xi{}", i + 1)));
    names.push(String::from("t"));
    let c = Ctx::custom(&names);
    let t = 2 * n;
    let mut w = vec![0; n];
    w.extend(vec![1; n]);
    let gb = groebner_basis(&p.ctx, 1, &p.relations, &TermOrder::weighted(&vec![0; n], &vec![1; n]));
    let to_comm = |q: &Weyl| {
        let ts = q
            .terms()
            .iter()
            .map(|tm| {
                let mut e = vec![0u32; 2 * (2 * n + 1)];
                e[..2 * n].copy_from_slice(&tm.e);
                Term { c: tm.c.clone(), e }
            })
            .collect();
        Weyl::from_terms(&c, ts)
    };
    let symbols: Vec<Weyl> = gb.generators().iter().map(|g| to_comm(&initial_form(g, &w, &[0]).entries[0])).collect();
    let mut sat: Option<Vec<Weyl>> = None;
    for i in 0..n {
        let part = saturate(&c, &symbols, &Weyl::x(&c, n + i), t);
        sat = Some(match sat {
            None => part,
            Some(prev) => intersect(&c, &prev, &part, t),
        });
    }
    let xi: Vec<usize> = (n..2 * n).collect();
    let base = eliminate(&c, &sat.unwrap_or_default(), &xi);
    if base.is_empty() {
        return Err(Error::OutOfRange(String::from("singular locus is everything")));
    }
    let mut g = Weyl::zero(&c);
    for b in &base {
        g = poly_gcd(&c, &g, b, t);
    }
    let mut h = g.clone();
    for i in 0..n {
        h = poly_gcd(&c, &h, &g.partial(i), t);
    }
    let f = crate::solutions::poly_div_exact(&g, &h).expect("gcd divides").primitive();
    let back = f
        .terms()
        .iter()
        .map(|tm| {
            let mut e = vec![0u32; 2 * n];
            e[..n].copy_from_slice(&tm.e[..n]);
            Term { c: tm.c.clone(), e }
        })
        .collect();
    Ok(Weyl::from_terms(&p.ctx, back))
}

/// The commutative ring K[mu1..mu_a, nu1..nu_b].
pub fn param_ctx(a: usize, b: usize) -> Ctx {
    let mut names: Vec<String> = (1..=a).map(|i| format!("mu{i}")).collect();
    names.extend((1..=b).map(|j| format!("nu{j}")));
    Ctx::custom(&names)
}

/// Coefficients, in the parameter ring, of the standard monomials of
/// `sum c_k A_k - id` reduced row by row modulo `gb`.
fn standard_coefficients(pctx: &Ctx, gb: &GBasis, terms: &[(Weyl, OpMatrix)], size: usize) -> Vec<Weyl> {
    let mut acc: BTreeMap<(usize, usize, Vec<u32>), Weyl> = BTreeMap::new();
    let mut add = |c: &Weyl, a: &OpMatrix| {
        for k in 0..a.rows {
            let nf = gb.normal_form(&a.row(k));
            for (col, e) in nf.entries.iter().enumerate() {
                for t in e.terms() {
                    let slot = acc.entry((k, col, t.e.clone())).or_insert_with(|| Weyl::zero(pctx));
                    *slot = &*slot + &c.scale(&t.c);
                }
            }
        }
    };
    for (c, a) in terms {
        add(c, a);
    }
    let ctx = gb.ctx().clone();
    add(&Weyl::int(pctx, -1), &OpMatrix::identity(&ctx, size));
    acc.into_values().filter(|w| !w.is_zero()).collect()
}

/// `I(V, W) = I_M + I_N` with the parameters `mu` on `s` and `nu` on `t`.
#[derive(Clone, Debug)]
pub struct CompositionIdeal {
    pub ctx: Ctx,
    pub sigma: usize,
    pub tau: usize,
    /// from `sum mu_i nu_j s_i t_j - id` modulo the relations of M
    pub i_m: Vec<Weyl>,
    /// from `sum mu_i nu_j t_j s_i - id` modulo the relations of N
    pub i_n: Vec<Weyl>,
}

fn dedup_up_to_sign(gens: impl IntoIterator<Item = Weyl>) -> Vec<Weyl> {
    let mut seen: Vec<Weyl> = Vec::new();
    let mut out = Vec::new();
    for g in gens {
        let key = g.monic();
        if !seen.contains(&key) {
            seen.push(key);
            out.push(g);
        }
    }
    out
}

impl CompositionIdeal {
    /// The generators of both parts, without repeats up to a scalar.
    pub fn generators(&self) -> Vec<Weyl> {
        dedup_up_to_sign(self.i_m.iter().chain(&self.i_n).cloned())
    }

    pub fn is_proper(&self) -> bool {
        !comm_gb(&self.ctx, &self.generators(), None).is_everything()
    }
}

pub fn composition_ideal(
    m: &Presentation,
    n: &Presentation,
    s: &[HomMatrix],
    t: &[HomMatrix],
) -> Result<CompositionIdeal> {
    let (sigma, tau) = (s.len(), t.len());
    let ctx = param_ctx(sigma, tau);
    let mut st = Vec::new();
    let mut ts = Vec::new();
    for (i, si) in s.iter().enumerate() {
        for (j, tj) in t.iter().enumerate() {
            let c = &Weyl::x(&ctx, i) * &Weyl::x(&ctx, sigma + j);
            st.push((c.clone(), si.a.mul(&tj.a)?));
            ts.push((c, tj.a.mul(&si.a)?));
        }
    }
    let i_m = standard_coefficients(&ctx, &m.gb(), &st, m.rank);
    let i_n = standard_coefficients(&ctx, &n.gb(), &ts, n.rank);
    Ok(CompositionIdeal { ctx, sigma, tau, i_m, i_n })
}

/// An isomorphism with its inverse, `forward = sum k_i s_i` and
/// `inverse = sum b_j t_j`.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub forward: HomMatrix,
    pub inverse: HomMatrix,
    pub k: Vec<Q>,
    pub b: Vec<Q>,
}

impl IsoWitness {
    /// Both compositions are identities modulo the relations.
    pub fn verify(&self) -> Result<bool> {
        let round = |a: &OpMatrix, b: &OpMatrix, p: &Presentation| -> Result<bool> {
            let c = a.mul(b)?.add(&OpMatrix::identity(&p.ctx, p.rank).neg());
            let gb = p.gb();
            Ok(c.row_vectors().iter().all(|r| gb.is_member(r)))
        };
        Ok(round(&self.forward.a, &self.inverse.a, &self.forward.source)?
            && round(&self.inverse.a, &self.forward.a, &self.forward.target)?)
    }
}

#[derive(Clone, Debug)]
pub enum IsoAnswer {
    No,
    Yes(IsoWitness),
}

/// 0, 1, -1, 2, -2, ...
fn trial_value(k: usize) -> Q {
    let v = k.div_ceil(2) as i64;
    Q::from_integer(if k % 2 == 1 { v } else { -v }.into())
}

fn combine(ctx: &Ctx, basis: &[HomMatrix], c: &[Q], m: &Presentation, n: &Presentation) -> HomMatrix {
    let mut a = OpMatrix::zero(ctx, m.rank, n.rank);
    for (h, k) in basis.iter().zip(c) {
        a = a.add(&h.a.map(|e| e.scale(k)));
    }
    HomMatrix { a, source: m.clone(), target: n.clone() }
}

/// Solves the equations, linear in the variables from `first` on, for a
/// particular solution.
fn solve_linear(ctx: &Ctx, eqs: &[Weyl], first: usize) -> Option<Vec<Q>> {
    let nv = ctx.n() - first;
    let mut rows = Vec::new();
    for g in eqs {
        let mut row = vec![Q::zero(); nv + 1];
        for t in g.terms() {
            let d: u32 = t.e.iter().sum();
            match d {
                0 => row[nv] = -t.c.clone(),
                1 => {
                    let v = t.e.iter().position(|&x| x == 1)?;
                    if v < first {
                        return None;
                    }
                    row[v - first] = t.c.clone();
                }
                _ => return None,
            }
        }
        rows.push(row);
    }
    let (r, piv) = rref(&RationalMatrix::from_rows(nv + 1, &rows));
    if piv.contains(&nv) {
        return None;
    }
    let mut sol = vec![Q::zero(); nv];
    for (i, &p) in piv.iter().enumerate() {
        sol[p] = r.get(i, nv).clone();
    }
    Some(sol)
}

/// Decides whether M and N are isomorphic, with an explicit isomorphism when
/// they are.  Hom bases are computed unless supplied.
pub fn is_isomorphic(
    m: &Presentation,
    n: &Presentation,
    bases: Option<(Vec<HomMatrix>, Vec<HomMatrix>)>,
) -> Result<IsoAnswer> {
    if !is_holonomic(m) || !is_holonomic(n) {
        return Err(Error::NotHolonomic);
    }
    let (s, t) = match bases {
        Some(b) => b,
        None => (hom_basis(m, n)?, hom_basis(n, m)?),
    };
    if s.len() != t.len() {
        return Ok(IsoAnswer::No);
    }
    let ci = composition_ideal(m, n, &s, &t)?;
    let ctx = ci.ctx.clone();
    let mut gens = ci.generators();
    if comm_gb(&ctx, &gens, None).is_everything() {
        return Ok(IsoAnswer::No);
    }
    let sigma = s.len();
    let mut k = Vec::with_capacity(sigma);
    for i in 0..sigma {
        let mu = Weyl::x(&ctx, i);
        let mut found = None;
        for trial in 0..=SEARCH_CAP {
            let v = trial_value(trial);
            let mut g = gens.clone();
            g.push(&mu - &Weyl::constant(&ctx, v.clone()));
            if !comm_gb(&ctx, &g, None).is_everything() {
                found = Some((v, g));
                break;
            }
        }
        let (v, g) = found.ok_or_else(|| Error::OutOfRange(String::from("no admissible value found")))?;
        k.push(v);
        gens = g;
    }
    let xi: Vec<Weyl> = (0..ctx.n())
        .map(|v| if v < sigma { Weyl::constant(&ctx, k[v].clone()) } else { Weyl::x(&ctx, v) })
        .collect();
    let di: Vec<Weyl> = (0..ctx.n()).map(|v| Weyl::d(&ctx, v)).collect();
    let eqs: Vec<Weyl> = ci.generators().iter().map(|g| g.substitute(&ctx, &xi, &di)).filter(|g| !g.is_zero()).collect();
    let b = solve_linear(&ctx, &eqs, sigma).ok_or(Error::NotInImage)?;
    let w = IsoWitness { forward: combine(&m.ctx, &s, &k, m, n), inverse: combine(&m.ctx, &t, &b, n, m), k, b };
    if !w.verify()? {
        return Err(Error::NotChainMap);
    }
    Ok(IsoAnswer::Yes(w))
}

const SEARCH_CAP: usize = 1000;

/// (M is a direct summand of N, N is a direct summand of M).
pub fn summand_test(m: &Presentation, n: &Presentation) -> Result<(bool, bool)> {
    if !is_holonomic(m) || !is_holonomic(n) {
        return Err(Error::NotHolonomic);
    }
    let s = hom_basis(m, n)?;
    let t = hom_basis(n, m)?;
    let ci = composition_ideal(m, n, &s, &t)?;
    let proper = |g: &[Weyl]| !comm_gb(&ci.ctx, g, None).is_everything();
    Ok((proper(&ci.i_m), proper(&ci.i_n)))
}

/// The ideal of non-invertible endomorphisms in the coordinates `nu`,
/// together with the system `A mu = b` it comes from.
#[derive(Clone, Debug)]
pub struct DefectIdeal {
    /// K[nu1..nu_tau]
    pub ctx: Ctx,
    pub generators: Vec<Weyl>,
    pub a: Vec<Vec<Weyl>>,
    pub b: Vec<Weyl>,
}

fn det(m: &[Vec<Weyl>], ctx: &Ctx) -> Weyl {
    let n = m.len();
    if n == 0 {
        return Weyl::one(ctx);
    }
    let mut out = Weyl::zero(ctx);
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Weyl>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, w)| w.clone()).collect()).collect();
        let term = entry * &det(&minor, ctx);
        out = if c % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

impl DefectIdeal {
    /// All (tau+1)-minors of the augmented matrix `(A|b)`.
    pub fn augmented_minors(&self) -> Vec<Weyl> {
        let rows: Vec<Vec<Weyl>> = self.a.iter().zip(&self.b).map(|(r, b)| [r.clone(), vec![b.clone()]].concat()).collect();
        let tau = self.a.first().map_or(0, Vec::len);
        subsets(rows.len(), tau + 1)
            .iter()
            .map(|sel| det(&sel.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(), &self.ctx))
            .collect()
    }
}

pub fn defect_ideal(m: &Presentation, basis: Option<Vec<HomMatrix>>) -> Result<DefectIdeal> {
    if !is_holonomic(m) {
        return Err(Error::NotHolonomic);
    }
    let s = match basis {
        Some(b) => b,
        None => hom_basis(m, m)?,
    };
    let tau = s.len();
    let ci = composition_ideal(m, m, &s, &s)?;
    let nctx = Ctx::custom(&(1..=tau).map(|j| format!("nu{j}")).collect::<Vec<_>>());
    let to_nu = |ts: Vec<Term>| Weyl::from_terms(&nctx, ts);
    let mut a = Vec::new();
    let mut b = Vec::new();
    // one-sided inverses already are two-sided in a finite-dimensional algebra
    for g in dedup_up_to_sign(ci.i_m) {
        let mut row: Vec<Vec<Term>> = vec![Vec::new(); tau];
        let mut rhs = Vec::new();
        for t in g.terms() {
            let mut e = vec![0u32; 2 * tau];
            e[..tau].copy_from_slice(&t.e[tau..2 * tau]);
            match t.e[..tau].iter().position(|&x| x > 0) {
                Some(i) => row[i].push(Term { c: t.c.clone(), e }),
                None => rhs.push(Term { c: -t.c.clone(), e }),
            }
        }
        a.push(row.into_iter().map(to_nu).collect::<Vec<_>>());
        b.push(to_nu(rhs));
    }
    let mut generators = Vec::new();
    for sel in subsets(a.len(), tau) {
        let d = det(&sel.iter().map(|&i| a[i].clone()).collect::<Vec<_>>(), &nctx);
        if !d.is_zero() {
            generators.push(d);
        }
    }
    let generators = dedup_up_to_sign(generators);
    Ok(DefectIdeal { ctx: nctx, generators, a, b })
}

/// Block sizes `d_i` from the Betti numbers of the group of automorphisms,
/// largest first.
pub fn d_invariants(betti: &[u64]) -> Result<Vec<usize>> {
    let mut p: Vec<i128> = betti.iter().map(|&h| h as i128).collect();
    while p.last() == Some(&0) {
        p.pop();
    }
    if p.is_empty() || p[0] != 1 {
        return Err(Error::NotAProduct);
    }
    let deg = p.len() - 1;
    let mut mult = vec![0usize; deg.div_ceil(2) + 1];
    let mut j = mult.len() - 1;
    while j >= 1 {
        let m = 2 * j - 1;
        while p.len() > m {
            // divide by 1 + q^m when exact
            let mut q = p.clone();
            let mut quo = vec![0i128; q.len() - m];
            for k in (0..quo.len()).rev() {
                let c = q[k + m];
                quo[k] = c;
                q[k + m] -= c;
                q[k] -= c;
            }
            if q.iter().any(|&c| c != 0) {
                break;
            }
            p = quo;
            mult[j] += 1;
        }
        j -= 1;
    }
    if p != [1] {
        return Err(Error::NotAProduct);
    }
    let k = &mult[1..];
    if k.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::NotAProduct);
    }
    let count = k.first().copied().unwrap_or(0);
    Ok((1..=count).map(|i| k.iter().filter(|&&kl| kl >= i).count()).collect())
}

/// `prod_i prod_{j <= d_i} (1 + q^(2j-1))` as a coefficient list.
pub fn poincare_of_blocks(d: &[usize]) -> Vec<u64> {
    let mut p = vec![1u64];
    for &di in d {
        for j in 1..=di {
            let m = 2 * j - 1;
            let mut r = vec![0u64; p.len() + m];
            for (k, &c) in p.iter().enumerate() {
                r[k] += c;
                r[k + m] += c;
            }
            p = r;
        }
    }
    p
}

fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort_by_key(|e| e.iter().sum::<u32>());
    let mut out: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.iter().zip(&g).all(|(a, b)| a <= b)) {
            out.push(g);
        }
    }
    out
}

/// Numerator of the Hilbert series of `K[x]/(gens)` over `(1-t)^n`.
fn hilbert_numerator(gens: Vec<Vec<u32>>) -> Vec<i128> {
    let gens = minimalize(gens);
    let Some((last, rest)) = gens.split_last() else {
        return vec![1];
    };
    let d = last.iter().sum::<u32>() as usize;
    let a = hilbert_numerator(rest.to_vec());
    let colon: Vec<Vec<u32>> = rest.iter().map(|g| g.iter().zip(last).map(|(x, y)| x.saturating_sub(*y)).collect()).collect();
    let b = hilbert_numerator(colon);
    let mut out = vec![0i128; a.len().max(b.len() + d)];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k + d] -= c;
    }
    out
}

/// Krull dimension and degree of `K[vars]/(gens)` (dimension -1 for the
/// unit ideal).
pub fn ideal_degree_dimension(ctx: &Ctx, gens: &[Weyl]) -> (i64, u64) {
    let n = ctx.n();
    let gb = comm_gb(ctx, gens, None);
    if gb.is_everything() {
        return (-1, 0);
    }
    let lead: Vec<Vec<u32>> = gb.leading_monomials().into_iter().map(|(e, _)| e[..n].to_vec()).collect();
    let mut num = hilbert_numerator(lead);
    let mut r = 0;
    while num.iter().sum::<i128>() == 0 {
        // divide by 1 - t
        let mut q = vec![0i128; num.len() - 1];
        let mut acc = 0;
        for (k, c) in num.iter().enumerate().take(num.len() - 1) {
            acc += c;
            q[k] = acc;
        }
        num = q;
        r += 1;
    }
    (n as i64 - r, num.iter().sum::<i128>() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::w;
    use crate::weyl::Ctx;
    extern crate std;
    use alloc::string::ToString;

    #[test]
    fn holonomic_examples() {
        let c = Ctx::std(1);
        assert!(is_holonomic(&Presentation::cyclic(&c, &[w(&c, "dx1")])));
        assert!(!is_holonomic(&Presentation::new(&c, 1, Vec::new())));
        let c2 = Ctx::std(2);
        let gkz = Presentation::cyclic(&c2, &[w(&c2, "x1*dx1 + 2*x2*dx2 - 5"), w(&c2, "dx1^2 - dx2")]);
        assert!(is_holonomic(&gkz));
        assert!(!is_holonomic(&Presentation::cyclic(&c2, &[w(&c2, "dx1")])));
    }

    #[test]
    fn singular_loci() {
        let c = Ctx::std(1);
        let sl = |s: &str| singular_locus_hypersurface(&Presentation::cyclic(&c, &[w(&c, s)])).unwrap();
        assert_eq!(sl("dx1"), w(&c, "1"));
        assert_eq!(sl("x1*dx1 + 1"), w(&c, "x1"));
        assert_eq!(sl("dx1 - 1"), w(&c, "1"));
        assert_eq!(sl("x1^2*(x1 - 1)*dx1 - 3"), w(&c, "x1^2 - x1"));
    }

    fn hm(c: &Ctx, m: &Presentation, n: &Presentation, e: &str) -> HomMatrix {
        let a = OpMatrix::from_rows(c, 1, &[FreeVector::new(c, vec![w(c, e)])]);
        HomMatrix { a, source: m.clone(), target: n.clone() }
    }

    fn same_ideal(ctx: &Ctx, a: &[Weyl], b: &[Weyl]) -> bool {
        let ga = comm_gb(ctx, a, None);
        let gb = comm_gb(ctx, b, None);
        a.iter().all(|g| gb.is_member(&FreeVector::new(ctx, vec![g.clone()])))
            && b.iter().all(|g| ga.is_member(&FreeVector::new(ctx, vec![g.clone()])))
    }

    #[test]
    fn second_derivative_endomorphisms() {
        let c = Ctx::std(1);
        let m = Presentation::cyclic(&c, &[w(&c, "dx1^2")]);
        let s: Vec<HomMatrix> = ["dx1", "x1*dx1", "1", "x1^2*dx1 - x1"].iter().map(|e| hm(&c, &m, &m, e)).collect();
        assert!(s.iter().all(|h| h.is_valid().unwrap()));
        let ci = composition_ideal(&m, &m, &s, &s).unwrap();
        let p = &ci.ctx;
        let printed: Vec<Weyl> = [
            "mu3*nu3 - mu1*nu4 - 1",
            "-mu4*nu3 - mu2*nu4 - mu3*nu4",
            "mu3*nu1 + mu1*nu2 + mu1*nu3",
            "-mu4*nu1 + mu2*nu2 + mu3*nu2 + mu2*nu3 + mu1*nu4",
            "mu4*nu3 + mu2*nu4 + mu3*nu4",
        ]
        .iter()
        .map(|e| w(p, e))
        .collect();
        let mut want: Vec<Weyl> = printed.iter().map(Weyl::monic).collect();
        let mut got: Vec<Weyl> = dedup_up_to_sign(ci.i_m.clone()).iter().map(Weyl::monic).collect();
        want.sort_by_key(|g| g.to_string());
        want.dedup();
        got.sort_by_key(|g| g.to_string());
        assert_eq!(got, want);
        assert!(same_ideal(p, &ci.generators(), &printed));
        assert_eq!(ideal_degree_dimension(p, &ci.generators()), (4, 8));

        let mut special = ci.generators();
        special.extend(["mu1 - 1", "mu2 - 2", "mu3"].iter().map(|e| w(p, e)));
        let residual: Vec<Weyl> =
            ["mu1 - 1", "mu2 - 2", "mu3", "nu4 + 1", "nu2 + nu3", "nu1 + 1/2*nu3", "mu4*nu3 - 2"].iter().map(|e| w(p, e)).collect();
        assert!(same_ideal(p, &special, &residual));

        let d = defect_ideal(&m, Some(s.clone())).unwrap();
        let g = w(&d.ctx, "(nu2*nu3 + nu3^2 + nu1*nu4)^2");
        assert!(same_ideal(&d.ctx, &d.generators, &[g]));
        assert!(d.augmented_minors().iter().all(Weyl::is_zero));
        let rows: Vec<Vec<Weyl>> = ["-nu4 0 nu3 0", "0 -nu4 -nu4 -nu3", "nu2+nu3 0 nu1 0", "nu4 nu2+nu3 nu2 -nu1"]
            .iter()
            .map(|r| r.split(' ').map(|e| w(&d.ctx, e)).collect())
            .collect();
        assert!(rows.iter().all(|r| d.a.contains(r)));

        match is_isomorphic(&m, &m, Some((s.clone(), s.clone()))).unwrap() {
            IsoAnswer::Yes(wit) => assert!(wit.verify().unwrap()),
            IsoAnswer::No => panic!("an endomorphism ring always has units"),
        }
    }

    #[test]
    fn second_derivative_against_first() {
        let c = Ctx::std(1);
        let m = Presentation::cyclic(&c, &[w(&c, "dx1^2")]);
        let n = Presentation::cyclic(&c, &[w(&c, "dx1")]);
        let s: Vec<HomMatrix> = ["1", "x1"].iter().map(|e| hm(&c, &m, &n, e)).collect();
        let t: Vec<HomMatrix> = ["dx1", "x1*dx1 - 1"].iter().map(|e| hm(&c, &n, &m, e)).collect();
        let ci = composition_ideal(&m, &n, &s, &t).unwrap();
        let p = &ci.ctx;
        assert!(same_ideal(p, &ci.i_n, &[w(p, "mu2*nu1 - mu1*nu2 - 1")]));
        let four: Vec<Weyl> = ["-mu1*nu2 - 1", "mu1*nu1", "mu1*nu2 + mu2*nu1", "mu2*nu2"].iter().map(|e| w(p, e)).collect();
        assert!(same_ideal(p, &ci.i_m, &four));
        assert!(!ci.is_proper());
        assert!(matches!(is_isomorphic(&m, &n, Some((s, t))).unwrap(), IsoAnswer::No));
        assert_eq!(summand_test(&m, &n).unwrap(), (false, true));
        assert!(matches!(is_isomorphic(&m, &n, None).unwrap(), IsoAnswer::No));
    }

    #[test]
    fn betti_numbers_to_blocks() {
        assert_eq!(d_invariants(&[1, 1, 0, 1, 1]).unwrap(), vec![2]);
        assert_eq!(d_invariants(&[1, 1]).unwrap(), vec![1]);
        let p = poincare_of_blocks(&[2, 1]);
        assert_eq!(d_invariants(&p).unwrap(), vec![2, 1]);
        assert_eq!(d_invariants(&[1, 2]), Err(Error::NotAProduct));
    }

    #[test]
    fn small_degrees() {
        let p = param_ctx(1, 1);
        assert_eq!(ideal_degree_dimension(&p, &[w(&p, "mu1")]), (1, 1));
        assert_eq!(ideal_degree_dimension(&p, &[w(&p, "1")]), (-1, 0));
        assert_eq!(ideal_degree_dimension(&p, &[w(&p, "mu1*nu1 - 1")]), (1, 2));
    }

    #[test]
    fn extensions_of_delta_by_polynomials() {
        use crate::solutions::{ext_basis, yoneda_extension};
        let c = Ctx::std(1);
        let m = Presentation::cyclic(&c, &[w(&c, "dx1")]);
        let n = Presentation::cyclic(&c, &[w(&c, "x1")]);
        let e = ext_basis(&m, &n, 1).unwrap();
        let target = Presentation::cyclic(&c, &[w(&c, "x1*dx1")]);
        let q = |k: i64| yoneda_extension(&n, &e, &[Q::from_integer(k.into())]).unwrap().q;
        match is_isomorphic(&q(1), &target, None).unwrap() {
            IsoAnswer::Yes(wit) => assert!(wit.verify().unwrap()),
            IsoAnswer::No => panic!("Q(1) should be cyclic"),
        }
        assert!(matches!(is_isomorphic(&q(0), &target, None).unwrap(), IsoAnswer::No));
    }
}

//! Bounded complexes of free modules with shift vectors, resolutions,
//! duals, external products and chain-map lifting.
//!
//! A complex is stored by its lowest degree, ranks, and the matrices of the
//! maps `degree k -> k+1` (acting on row vectors).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::groebner::{
    groebner_basis, syzygies, weighted_degree, Augmented, GBasis, Lifter, TermOrder, Variant,
};
use crate::bfun::initial_form;
use crate::weyl::{box_embed, Ctx, FreeVector, OpMatrix, Weyl};
use crate::{Error, Result};

/// D^rank / D*relations
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub ctx: Ctx,
    pub rank: usize,
    pub relations: Vec<FreeVector>,
}

impl Presentation {
    pub fn new(ctx: &Ctx, rank: usize, relations: Vec<FreeVector>) -> Presentation {
        for r in &relations {
            assert_eq!(r.rank(), rank, "relation rank");
        }
        Presentation { ctx: ctx.clone(), rank, relations }
    }

    /// A cyclic module D / D*{ops}.
    pub fn cyclic(ctx: &Ctx, ops: &[Weyl]) -> Presentation {
        let rels = ops.iter().map(|p| FreeVector::new(ctx, vec![p.clone()])).collect();
        Presentation::new(ctx, 1, rels)
    }

    pub fn matrix(&self) -> OpMatrix {
        OpMatrix::from_rows(&self.ctx, self.rank, &self.relations)
    }

    pub fn gb(&self) -> GBasis {
        groebner_basis(&self.ctx, self.rank, &self.relations, &TermOrder::standard())
    }

    /// Applies the Fourier transform on the first d variables to every relation.
    pub fn fourier(&self, d: usize) -> Result<Presentation> {
        let rels = self
            .relations
            .iter()
            .map(|r| Ok(FreeVector::new(&self.ctx, r.entries.iter().map(|p| p.fourier(d)).collect::<Result<_>>()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation::new(&self.ctx, self.rank, rels))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedComplex {
    pub ctx: Ctx,
    /// lowest degree
    pub lo: i32,
    pub ranks: Vec<usize>,
    /// maps[i] goes from degree lo+i to lo+i+1
    pub maps: Vec<OpMatrix>,
    pub shifts: Vec<Vec<i64>>,
}

impl ShiftedComplex {
    pub fn hi(&self) -> i32 {
        self.lo + self.ranks.len() as i32 - 1
    }

    pub fn rank(&self, deg: i32) -> usize {
        if deg < self.lo || deg > self.hi() {
            0
        } else {
            self.ranks[(deg - self.lo) as usize]
        }
    }

    pub fn shift(&self, deg: i32) -> Vec<i64> {
        if deg < self.lo || deg > self.hi() {
            Vec::new()
        } else {
            self.shifts[(deg - self.lo) as usize].clone()
        }
    }

    /// The map from `deg` to `deg + 1` (a zero matrix outside the range).
    pub fn map(&self, deg: i32) -> OpMatrix {
        if deg >= self.lo && deg < self.hi() {
            self.maps[(deg - self.lo) as usize].clone()
        } else {
            OpMatrix::zero(&self.ctx, self.rank(deg), self.rank(deg + 1))
        }
    }

    pub fn composes_to_zero(&self) -> bool {
        (self.lo..self.hi()).all(|k| self.map(k).mul(&self.map(k + 1)).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// Entry inequality `wdeg(a_jk) <= m_src(j) - m_tgt(k)` for every map.
    pub fn is_adapted(&self, weight: &[i64]) -> bool {
        (self.lo..self.hi()).all(|k| {
            let a = self.map(k);
            let src = self.shift(k);
            let tgt = self.shift(k + 1);
            (0..a.rows).all(|j| {
                (0..a.cols).all(|l| {
                    let e = FreeVector::new(&self.ctx, vec![a.get(j, l).clone()]);
                    e.is_zero() || weighted_degree(&e, weight, &[0]) <= src[j] - tgt[l]
                })
            })
        })
    }
}

/// Drops generators lying in the submodule spanned by the others.
pub fn prune(ctx: &Ctx, rank: usize, gens: &[FreeVector]) -> Vec<FreeVector> {
    let mut keep: Vec<FreeVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut i = keep.len();
    while i > 0 {
        i -= 1;
        let others: Vec<FreeVector> =
            keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        if groebner_basis(ctx, rank, &others, &TermOrder::standard()).is_member(&keep[i]) {
            keep.remove(i);
        }
    }
    keep
}

/// Free resolution X: ... -> D^{r_-1} -> D^{r_0}, with M_0 the relation
/// matrix at degrees -1 -> 0.  Stops at a zero kernel or after `max_len` maps.
pub fn free_resolution(p: &Presentation, max_len: usize) -> ShiftedComplex {
    let ctx = &p.ctx;
    let mut maps_rev: Vec<OpMatrix> = Vec::new();
    let mut ranks_rev = vec![p.rank];
    let mut rows = prune(ctx, p.rank, &p.relations);
    let mut cur = p.rank;
    while !rows.is_empty() && maps_rev.len() < max_len {
        maps_rev.push(OpMatrix::from_rows(ctx, cur, &rows));
        let syz = prune(ctx, rows.len(), &syzygies(ctx, cur, &rows));
        cur = rows.len();
        ranks_rev.push(cur);
        rows = syz;
    }
    maps_rev.reverse();
    ranks_rev.reverse();
    let lo = -(maps_rev.len() as i32);
    let shifts = ranks_rev.iter().map(|&r| vec![0; r]).collect();
    ShiftedComplex { ctx: ctx.clone(), lo, ranks: ranks_rev, maps: maps_rev, shifts }
}

/// Drops elements whose initial form lies in the module spanned by the
/// initial forms of the others, so the rest is still a strict basis.
fn prune_strict(
    ctx: &Ctx,
    rank: usize,
    gens: &[FreeVector],
    ord: &TermOrder,
    w: &[i64],
    shift: &[i64],
) -> Vec<FreeVector> {
    let order = ord.clone().with_shift(shift);
    let mut keep: Vec<FreeVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut i = keep.len();
    while i > 0 {
        i -= 1;
        let others: Vec<FreeVector> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| initial_form(g, w, shift))
            .collect();
        if groebner_basis(ctx, rank, &others, &order).is_member(&initial_form(&keep[i], w, shift)) {
            keep.remove(i);
        }
    }
    keep
}

/// A resolution of the module at degree `top` that respects the (shifted)
/// V- or Ṽ-filtration on the first d variables.  `len` bounds the number of
/// maps.
pub fn v_strict_resolution(
    p: &Presentation,
    d: usize,
    shift0: &[i64],
    variant: Variant,
    top: i32,
    len: usize,
) -> ShiftedComplex {
    let ctx = &p.ctx;
    let ord = TermOrder::v_filtration(ctx.n(), d, variant);
    let w = ord.weight.clone().expect("weight");
    let mut shift0 = shift0.to_vec();
    shift0.resize(p.rank, 0);
    let gb = groebner_basis(ctx, p.rank, &p.relations, &ord.clone().with_shift(&shift0));
    let mut rows = prune_strict(ctx, p.rank, gb.generators(), &ord, &w, &shift0);
    let mut maps_rev = Vec::new();
    let mut ranks_rev = vec![p.rank];
    let mut shifts_rev = vec![shift0.clone()];
    let mut cur_rank = p.rank;
    let mut cur_shift = shift0;
    while !rows.is_empty() && maps_rev.len() < len {
        let new_shift: Vec<i64> = rows.iter().map(|r| weighted_degree(r, &w, &cur_shift)).collect();
        maps_rev.push(OpMatrix::from_rows(ctx, cur_rank, &rows));
        ranks_rev.push(rows.len());
        shifts_rev.push(new_shift.clone());
        if maps_rev.len() == len {
            break;
        }
        let mut sh = cur_shift.clone();
        sh.extend_from_slice(&new_shift);
        let aug = Augmented::new(ctx, cur_rank, &rows, &[], &ord.clone().with_shift(&sh));
        cur_rank = rows.len();
        cur_shift = new_shift;
        rows = prune_strict(ctx, cur_rank, &aug.kernel(), &ord, &w, &cur_shift);
    }
    maps_rev.reverse();
    ranks_rev.reverse();
    shifts_rev.reverse();
    let lo = top - maps_rev.len() as i32;
    ShiftedComplex { ctx: ctx.clone(), lo, ranks: ranks_rev, maps: maps_rev, shifts: shifts_rev }
}

/// tau(Hom(X, D)): degree i holds D^{r_{-i}} and the map i -> i+1 is
/// `* tau(M_{-i})`.
pub fn dual_transpose(x: &ShiftedComplex) -> ShiftedComplex {
    let lo = -x.hi();
    let hi = -x.lo;
    let mut ranks = Vec::new();
    let mut maps = Vec::new();
    let mut shifts = Vec::new();
    for i in lo..=hi {
        ranks.push(x.rank(-i));
        shifts.push(x.shift(-i).iter().map(|s| -s).collect());
        if i < hi {
            maps.push(x.map(-i - 1).tau());
        }
    }
    ShiftedComplex { ctx: x.ctx.clone(), lo, ranks, maps, shifts }
}

/// The matrix A ⊠ B, rows indexed by a*s + b.
pub fn box_matrix(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix> {
    let h = a.ctx.n();
    let ctx = Ctx::doubled(h);
    let mut m = OpMatrix::zero(&ctx, a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            if a.get(i, j).is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    if b.get(k, l).is_zero() {
                        continue;
                    }
                    m.set(i * b.rows + k, j * b.cols + l, box_embed(a.get(i, j), b.get(k, l))?);
                }
            }
        }
    }
    Ok(m)
}

/// Summands of the total complex at total degree k: pairs (i, j) with
/// i - j = k, where i is a degree of `xdual` and -j a degree of `y`,
/// in increasing i.
pub fn box_summands(xdual: &ShiftedComplex, y: &ShiftedComplex, k: i32) -> Vec<(i32, i32)> {
    (xdual.lo..=xdual.hi())
        .filter_map(|i| {
            let j = i - k;
            (-j >= y.lo && -j <= y.hi()).then_some((i, j))
        })
        .collect()
}

/// Total complex of xdual ⊠ y in D_{2h}.  Horizontal maps are
/// `tau(M) ⊠ 1`, vertical maps `(-1)^i ⊠ N`.
pub fn box_total_complex(xdual: &ShiftedComplex, y: &ShiftedComplex) -> Result<ShiftedComplex> {
    if xdual.ctx.n() != y.ctx.n() {
        return Err(Error::ContextMismatch);
    }
    let h = xdual.ctx.n();
    let ctx = Ctx::doubled(h);
    let lo = xdual.lo - (-y.lo);
    let hi = xdual.hi() + y.hi();
    let size = |i: i32, j: i32| xdual.rank(i) * y.rank(-j);
    let mut ranks = Vec::new();
    let mut maps = Vec::new();
    for k in lo..=hi {
        let src = box_summands(xdual, y, k);
        ranks.push(src.iter().map(|&(i, j)| size(i, j)).sum());
        if k == hi {
            break;
        }
        let tgt = box_summands(xdual, y, k + 1);
        let rows: usize = src.iter().map(|&(i, j)| size(i, j)).sum();
        let cols: usize = tgt.iter().map(|&(i, j)| size(i, j)).sum();
        let mut m = OpMatrix::zero(&ctx, rows, cols);
        let mut r0 = 0;
        for &(i, j) in &src {
            let mut c0 = 0;
            for &(ti, tj) in &tgt {
                let block = if ti == i + 1 && tj == j {
                    Some(box_matrix(&xdual.map(i), &OpMatrix::identity(&y.ctx, y.rank(-j)))?)
                } else if ti == i && tj == j - 1 {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let id = OpMatrix::identity(&xdual.ctx, xdual.rank(i));
                    let b = box_matrix(&id, &y.map(-j))?;
                    Some(if sign == 1 { b } else { b.neg() })
                } else {
                    None
                };
                if let Some(b) = block {
                    for a in 0..b.rows {
                        for c in 0..b.cols {
                            m.set(r0 + a, c0 + c, b.get(a, c).clone());
                        }
                    }
                }
                c0 += size(ti, tj);
            }
            r0 += size(i, j);
        }
        maps.push(m);
    }
    let shifts = ranks.iter().map(|&r| vec![0; r]).collect();
    Ok(ShiftedComplex { ctx, lo, ranks, maps, shifts })
}

/// Components `pi_i: E^i -> T^i`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub comps: BTreeMap<i32, OpMatrix>,
}

impl ChainMap {
    pub fn at(&self, deg: i32) -> Option<&OpMatrix> {
        self.comps.get(&deg)
    }

    /// Checks `E_i * pi_{i+1} = pi_i * T_i` wherever both components exist.
    pub fn commutes(&self, e: &ShiftedComplex, t: &ShiftedComplex) -> bool {
        self.comps.iter().all(|(&i, p)| match self.comps.get(&(i + 1)) {
            None => true,
            Some(q) => {
                let l = e.map(i).mul(q);
                let r = p.mul(&t.map(i));
                matches!((l, r), (Ok(a), Ok(b)) if a == b)
            }
        })
    }
}

/// Extends `pi_top: E^top -> T^top` downwards to degree `bottom` by lifting
/// along the maps of `t`.
pub fn chain_lift(
    pi_top: &OpMatrix,
    top: i32,
    e: &ShiftedComplex,
    t: &ShiftedComplex,
    bottom: i32,
) -> Result<ChainMap> {
    if pi_top.rows != e.rank(top) || pi_top.cols != t.rank(top) {
        return Err(Error::ShapeMismatch(format!(
            "top component is {}x{}, expected {}x{}",
            pi_top.rows,
            pi_top.cols,
            e.rank(top),
            t.rank(top)
        )));
    }
    let next = e.map(top);
    let above = pi_top.mul(&t.map(top))?;
    if !(next.rows == 0 || next.cols == 0 || e.rank(top + 1) == 0) || !above.is_zero() {
        return Err(Error::NotChainMap);
    }
    let mut comps = BTreeMap::new();
    comps.insert(top, pi_top.clone());
    let mut cur = pi_top.clone();
    let mut i = top - 1;
    while i >= bottom {
        let target = e.map(i).mul(&cur)?;
        let tm = t.map(i);
        let lifter = Lifter::new(&tm, &[]);
        let mut rows = Vec::new();
        for r in target.row_vectors() {
            rows.push(lifter.lift(&r).map_err(|_| Error::NotChainMap)?);
        }
        cur = OpMatrix::from_rows(&t.ctx, t.rank(i), &rows);
        comps.insert(i, cur.clone());
        i -= 1;
    }
    Ok(ChainMap { comps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::w;

    #[test]
    fn principal_resolution() {
        let c = Ctx::std(1);
        let p = Presentation::cyclic(&c, &[w(&c, "dx1")]);
        let x = free_resolution(&p, 5);
        assert_eq!(x.ranks, vec![1, 1]);
        assert!(x.composes_to_zero());
    }

    #[test]
    fn box_of_one_term_complexes() {
        let c = Ctx::std(1);
        let a = Presentation::cyclic(&c, &[]);
        let xa = free_resolution(&a, 3);
        let z = box_total_complex(&dual_transpose(&xa), &xa).unwrap();
        assert_eq!(z.ranks, vec![1]);
    }
}

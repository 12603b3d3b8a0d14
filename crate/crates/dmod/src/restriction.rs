//! Derived restriction and integration of strict complexes by truncating
//! the filtration to a finite window.
//!
//! Restriction tensors with `D/xD`, whose elements are written `dx^a`;
//! integration tensors with `D/dxD`, whose elements are written `x^a`.
//! In both cases only the first d variables are truncated and the result is
//! a complex of free modules over the Weyl algebra in the remaining ones.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::bfun::{b_function, truncation_window, BPolynomial};
use crate::groebner::{kernel as op_kernel, Lifter, Variant};
use crate::homology::{v_strict_resolution, Presentation, ShiftedComplex};
use crate::qlinalg::{kernel_basis, quotient_basis, RationalMatrix};
use crate::util::{exps_of_degree, falling};
use crate::weyl::{Ctx, FreeVector, OpMatrix, Term, Weyl};
use crate::{Error, Result, Q};

/// A basis element `dx^exp * e_comp` (restriction) or `x^exp * e_comp`
/// (integration) in the truncated variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Label {
    pub comp: usize,
    pub exp: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    pub variant: Variant,
    pub d: usize,
    /// the algebra of the surviving variables
    pub ctx: Ctx,
    /// the algebra the complex was truncated from
    pub full: Ctx,
    pub lo: i32,
    pub bases: Vec<Vec<Label>>,
    /// maps[i]: degree lo+i -> lo+i+1
    pub maps: Vec<OpMatrix>,
}

/// The algebra on variables d..n of `ctx`.
pub fn surviving_ctx(ctx: &Ctx, d: usize) -> Ctx {
    let names: Vec<String> = (d..ctx.n()).map(|i| ctx.x_name(i)).collect();
    Ctx::custom(&names)
}

/// Truncates `e` to the window `k0 <= deg <= k1` (None gives the zero complex).
pub fn truncate(e: &ShiftedComplex, d: usize, window: Option<(i64, i64)>, variant: Variant) -> Result<TruncatedComplex> {
    let n = e.ctx.n();
    if d == 0 || d > n {
        return Err(Error::OutOfRange(format!("d = {d} with n = {n}")));
    }
    let ctx = surviving_ctx(&e.ctx, d);
    let mut bases = Vec::new();
    for deg in e.lo..=e.hi() {
        let mut b = Vec::new();
        if let Some((k0, k1)) = window {
            for (j, &m) in e.shift(deg).iter().enumerate() {
                let from = (k0 - m).max(0);
                let to = k1 - m;
                for t in from..=to {
                    for exp in exps_of_degree(d, t as u32) {
                        b.push(Label { comp: j, exp });
                    }
                }
            }
        }
        bases.push(b);
    }
    let mut maps = Vec::new();
    for deg in e.lo..e.hi() {
        let i = (deg - e.lo) as usize;
        let src = &bases[i];
        let tgt = &bases[i + 1];
        let index: BTreeMap<&Label, usize> = tgt.iter().enumerate().map(|(k, l)| (l, k)).collect();
        let a = e.map(deg);
        let tshift = e.shift(deg + 1);
        let mut m = OpMatrix::zero(&ctx, src.len(), tgt.len());
        for (r, lab) in src.iter().enumerate() {
            let mut row: BTreeMap<usize, Vec<Term>> = BTreeMap::new();
            for l in 0..a.cols {
                for t in a.get(lab.comp, l).terms() {
                    let Some((c, exp)) = induced(&lab.exp, &t.e, n, d, variant) else {
                        continue;
                    };
                    let c = &t.c * Q::from_integer(c);
                    let dg: i64 = exp.iter().map(|&x| x as i64).sum::<i64>() + tshift[l];
                    let (k0, k1) = window.expect("nonempty basis");
                    if dg > k1 {
                        return Err(Error::NotStrict);
                    }
                    if dg < k0 {
                        continue;
                    }
                    let col = index[&Label { comp: l, exp }];
                    let mut rest = t.e[d..n].to_vec();
                    rest.extend_from_slice(&t.e[n + d..]);
                    row.entry(col).or_default().push(Term { c, e: rest });
                }
            }
            for (col, ts) in row {
                m.set(r, col, Weyl::from_terms(&ctx, ts));
            }
        }
        maps.push(m);
    }
    Ok(TruncatedComplex { variant, d, ctx, full: e.ctx.clone(), lo: e.lo, bases, maps })
}

/// The coefficient and exponent of `mono(a) * x^alpha dx^beta` reduced in
/// the quotient module, for the truncated variables only.
fn induced(a: &[u32], e: &[u32], n: usize, d: usize, variant: Variant) -> Option<(num_bigint::BigInt, Vec<u32>)> {
    let mut c = num_bigint::BigInt::one();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let (al, be) = (e[i], e[n + i]);
        match variant {
            Variant::Restriction => {
                if a[i] < al {
                    return None;
                }
                c *= falling(a[i], al);
                out.push(a[i] - al + be);
            }
            Variant::Integration => {
                let top = a[i] + al;
                if top < be {
                    return None;
                }
                c *= falling(top, be);
                if be % 2 == 1 {
                    c = -c;
                }
                out.push(top - be);
            }
        }
    }
    Some((c, out))
}

impl TruncatedComplex {
    pub fn hi(&self) -> i32 {
        self.lo + self.bases.len() as i32 - 1
    }

    pub fn basis(&self, deg: i32) -> &[Label] {
        if deg < self.lo || deg > self.hi() {
            &[]
        } else {
            &self.bases[(deg - self.lo) as usize]
        }
    }

    pub fn map(&self, deg: i32) -> OpMatrix {
        if deg >= self.lo && deg < self.hi() {
            self.maps[(deg - self.lo) as usize].clone()
        } else {
            OpMatrix::zero(&self.ctx, self.basis(deg).len(), self.basis(deg + 1).len())
        }
    }

    /// The map as a rational matrix (only when every variable was truncated).
    pub fn rational_map(&self, deg: i32) -> Result<RationalMatrix> {
        let m = self.map(deg);
        let mut r = RationalMatrix::zero(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = m.get(i, j);
                if !v.is_zero() {
                    r.set(i, j, v.as_constant().ok_or(Error::ContextMismatch)?);
                }
            }
        }
        Ok(r)
    }

    pub fn composes_to_zero(&self) -> bool {
        (self.lo..self.hi()).all(|k| self.map(k).mul(&self.map(k + 1)).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// The element of the free module in the full algebra with the given
    /// coordinates on the basis at `deg`.
    pub fn lift_coords(&self, deg: i32, coords: &[Q], rank: usize) -> FreeVector {
        let n = self.full.n();
        let mut per: Vec<Vec<Term>> = vec![Vec::new(); rank];
        for (lab, c) in self.basis(deg).iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0u32; 2 * n];
            for (i, &a) in lab.exp.iter().enumerate() {
                match self.variant {
                    Variant::Restriction => e[n + i] = a,
                    Variant::Integration => e[i] = a,
                }
            }
            per[lab.comp].push(Term { c: c.clone(), e });
        }
        FreeVector::new(&self.full, per.into_iter().map(|ts| Weyl::from_terms(&self.full, ts)).collect())
    }

    /// Cohomology at `deg` as a K-vector space: representatives of a basis
    /// of ker/im.  Only for complexes truncated in every variable.
    pub fn cohomology(&self, deg: i32) -> Result<Vec<Vec<Q>>> {
        let out = self.rational_map(deg)?;
        let inc = self.rational_map(deg - 1)?;
        let ker = kernel_basis(&out);
        let im: Vec<Vec<Q>> = (0..inc.nrows).map(|i| inc.row(i).to_vec()).collect();
        quotient_basis(&ker, &im)
    }

    /// Cohomology at `deg` as a module over the surviving algebra, presented
    /// on generators of the kernel.
    pub fn cohomology_module(&self, deg: i32) -> Result<Presentation> {
        let out = self.map(deg);
        let inc = self.map(deg - 1);
        let ker = op_kernel(&out, &[])?;
        let p = ker.len();
        if p == 0 {
            return Ok(Presentation::new(&self.ctx, 0, Vec::new()));
        }
        let k = OpMatrix::from_rows(&self.ctx, out.rows, &ker);
        let lifter = Lifter::new(&k, &[]);
        let mut rels = Vec::new();
        for r in inc.row_vectors() {
            if !r.is_zero() {
                rels.push(lifter.lift(&r)?);
            }
        }
        rels.extend(crate::groebner::syzygies(&self.ctx, out.rows, &ker));
        Ok(Presentation::new(&self.ctx, p, rels))
    }
}

/// Cohomology classes with representatives in a free module of the resolution.
#[derive(Clone, Debug)]
pub struct CohomologyClasses {
    pub degree: i32,
    pub reps: Vec<FreeVector>,
    pub coords: Vec<Vec<Q>>,
}

/// The intermediate data of a derived restriction or integration.
#[derive(Clone, Debug)]
pub struct Derived {
    pub resolution: ShiftedComplex,
    pub b: BPolynomial,
    pub window: Option<(i64, i64)>,
    pub truncated: TruncatedComplex,
}

/// Resolves `p` strictly with the module at degree `top` (`len` maps),
/// computes the b-function, and truncates.  The lower end of the window is
/// lowered to the smallest shift so that the truncation is a subcomplex.
pub fn derived(
    p: &Presentation,
    d: usize,
    shift0: &[i64],
    variant: Variant,
    top: i32,
    len: usize,
) -> Result<Derived> {
    let resolution = v_strict_resolution(p, d, shift0, variant, top, len);
    let b = b_function(p, d, shift0, variant)?;
    let window = truncation_window(&b).map(|(k0, k1)| {
        let lowest = resolution.shifts.iter().flatten().copied().min().unwrap_or(k0);
        (k0.min(lowest), k1)
    });
    let truncated = truncate(&resolution, d, window, variant)?;
    Ok(Derived { resolution, b, window, truncated })
}

impl Derived {
    /// Basis classes at `deg` (every variable truncated).
    pub fn classes(&self, deg: i32) -> Result<CohomologyClasses> {
        let coords = self.truncated.cohomology(deg)?;
        let rank = self.resolution.rank(deg);
        let reps = coords.iter().map(|c| self.truncated.lift_coords(deg, c, rank)).collect();
        Ok(CohomologyClasses { degree: deg, reps, coords })
    }
}

pub fn derived_restriction(p: &Presentation, shift0: &[i64], top: i32, deg: i32) -> Result<CohomologyClasses> {
    let n = p.ctx.n();
    let len = (top - deg + 1).max(1) as usize;
    derived(p, n, shift0, Variant::Restriction, top, len)?.classes(deg)
}

pub fn derived_integration(p: &Presentation, shift0: &[i64], top: i32, deg: i32) -> Result<CohomologyClasses> {
    let n = p.ctx.n();
    let len = (top - deg + 1).max(1) as usize;
    derived(p, n, shift0, Variant::Integration, top, len)?.classes(deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::w;

    #[test]
    fn delta_restricts_to_a_line() {
        let c = Ctx::std(1);
        let p = Presentation::cyclic(&c, &[w(&c, "x1")]);
        let z = derived_restriction(&p, &[0], 0, 0).unwrap();
        assert!(z.reps.is_empty());
        let cl = derived_restriction(&p, &[0], 0, -1).unwrap();
        assert_eq!(cl.reps.len(), 1);
    }

    #[test]
    fn exponential_has_no_integer_window() {
        let c = Ctx::std(1);
        let p = Presentation::cyclic(&c, &[w(&c, "dx1 - 1")]);
        let dr = derived(&p, 1, &[0], Variant::Restriction, 0, 2).unwrap();
        assert_eq!(dr.truncated.cohomology(0).unwrap().len(), 1);
    }

    #[test]
    fn polynomial_ring_integrated_along_one_variable() {
        let c = Ctx::std(2);
        let p = Presentation::cyclic(&c, &[w(&c, "dx1"), w(&c, "dx2")]);
        let dr = derived(&p, 1, &[0], Variant::Integration, 0, 3).unwrap();
        assert_eq!(dr.window, Some((-1, -1)));
        assert!(dr.truncated.composes_to_zero());
        let h = dr.truncated.cohomology_module(-1).unwrap();
        assert_eq!(h.rank, 1);
        let gb = h.gb();
        let c1 = surviving_ctx(&c, 1);
        assert!(gb.is_member(&FreeVector::new(&c1, vec![w(&c1, "dx2")])));
        assert!(!gb.is_member(&FreeVector::new(&c1, vec![w(&c1, "1")])));
        assert_eq!(dr.truncated.cohomology_module(0).unwrap().rank, 0);
        let h2 = dr.truncated.cohomology_module(-2).unwrap();
        assert!(h2.rank == 0 || h2.gb().is_everything());
    }
}

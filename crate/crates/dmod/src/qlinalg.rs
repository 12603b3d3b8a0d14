//! Dense exact linear algebra over the rationals, row-vector convention:
//! a matrix `m` acts by `u -> u*m`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<Q>,
}

impl RationalMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> RationalMatrix {
        RationalMatrix { nrows, ncols, data: vec![Q::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: &[Vec<Q>]) -> RationalMatrix {
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols);
            data.extend(r.iter().cloned());
        }
        RationalMatrix { nrows: rows.len(), ncols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> RationalMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rs: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&v| crate::util::q(v)).collect()).collect();
        RationalMatrix::from_rows(ncols, &rs)
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.ncols, o.nrows);
        let mut m = RationalMatrix::zero(self.nrows, o.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.ncols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + a * b;
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    /// u*m for a row vector u.
    pub fn apply(&self, u: &[Q]) -> Vec<Q> {
        assert_eq!(u.len(), self.nrows);
        let mut out = vec![Q::zero(); self.ncols];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !b.is_zero() {
                    *o += ui * b;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.ncols {
        if r == a.nrows {
            break;
        }
        let Some(p) = (r..a.nrows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.ncols {
                a.data.swap(p * a.ncols + j, r * a.ncols + j);
            }
        }
        let inv = a.get(r, c).recip();
        for j in c..a.ncols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.nrows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..a.ncols {
                let s = a.get(r, j);
                if !s.is_zero() {
                    let v = a.get(i, j) - &f * s;
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of {u : u*m = 0}.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Q>> {
    let t = m.transpose();
    let (a, pivots) = rref(&t);
    let n = t.ncols;
    let mut out = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Q::zero(); n];
        v[f] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -a.get(r, f).clone();
        }
        out.push(v);
    }
    out
}

/// Some u with u*m = rhs.
pub fn solve(m: &RationalMatrix, rhs: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(rhs.len(), m.ncols);
    let t = m.transpose();
    let mut aug = RationalMatrix::zero(t.nrows, t.ncols + 1);
    for i in 0..t.nrows {
        for j in 0..t.ncols {
            aug.set(i, j, t.get(i, j).clone());
        }
        aug.set(i, t.ncols, rhs[i].clone());
    }
    let (a, pivots) = rref(&aug);
    if pivots.last() == Some(&t.ncols) {
        return None;
    }
    let mut u = vec![Q::zero(); t.ncols];
    for (r, &p) in pivots.iter().enumerate() {
        u[p] = a.get(r, t.ncols).clone();
    }
    Some(u)
}

/// An incrementally built echelon basis of a subspace.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<Q>)>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (a, b) in v.iter_mut().zip(r) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        let r: Vec<Q> = r.iter().map(|c| c * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(&r) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Representatives from `ker` whose classes form a basis of span(ker)/span(im).
pub fn quotient_basis(ker: &[Vec<Q>], im: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let mut ek = Echelon::new();
    for v in ker {
        ek.insert(v);
    }
    let mut e = Echelon::new();
    for v in im {
        if !ek.contains(v) {
            return Err(Error::ContainmentViolated);
        }
        e.insert(v);
    }
    let mut out = Vec::new();
    for v in ker {
        if e.insert(v) {
            out.push(v.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_small() {
        let m = RationalMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        let (r, p) = rref(&m);
        assert_eq!(r, RationalMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
        let z = RationalMatrix::zero(2, 3);
        assert_eq!(rref(&z), (z.clone(), vec![]));
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&RationalMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&RationalMatrix::zero(2, 2)).len(), 2);
        let m = RationalMatrix::from_i64(&[&[1, 1], &[2, 2], &[0, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solving() {
        let m = RationalMatrix::from_i64(&[&[1, 0], &[1, 0]]);
        assert!(solve(&m, &[crate::util::q(1), crate::util::q(1)]).is_none());
        let u = solve(&m, &[crate::util::q(3), Q::zero()]).unwrap();
        assert_eq!(m.apply(&u), vec![crate::util::q(3), Q::zero()]);
    }

    #[test]
    fn quotient() {
        let e1 = vec![Q::one(), Q::zero()];
        let e2 = vec![Q::zero(), Q::one()];
        let k = vec![e1.clone(), e2.clone()];
        assert_eq!(quotient_basis(&k, &[e1.clone()]).unwrap(), vec![e2.clone()]);
        assert!(quotient_basis(&k, &k).unwrap().is_empty());
        assert_eq!(quotient_basis(&k, &[]).unwrap().len(), 2);
        assert_eq!(quotient_basis(&[e1], &[e2]), Err(Error::ContainmentViolated));
    }
}

//! Dense linear algebra over the prime field GF(p).
//!
//! Residues are stored as `u8` in `[0, p)`, so every prime below 256 is
//! supported. Subspaces are kept in reduced row-echelon form, which makes
//! equality a structural comparison.

use crate::error::{is_prime, Error, Result};

fn check_prime(p: u32) -> Result<()> {
    if p > 255 || !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    Ok(())
}

/// Multiplicative inverse of `a` modulo the prime `p`.
pub fn inv_mod(a: u8, p: u32) -> u8 {
    debug_assert!(a != 0);
    // Fermat: a^(p-2)
    let mut result = 1u32;
    let mut base = a as u32 % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result as u8
}

fn reduce_i64(x: i64, p: u32) -> u8 {
    x.rem_euclid(p as i64) as u8
}

/// `v += m` entrywise modulo `p`, starting at `from`.
#[inline]
fn add_assign_from(v: &mut [u8], m: &[u8], from: usize, p: u8) {
    for (a, &b) in v[from..].iter_mut().zip(&m[from..]) {
        let s = *a + b;
        *a = if s >= p { s - p } else { s };
    }
}

fn scaled(row: &[u8], c: u8, p: u32) -> Vec<u8> {
    row.iter()
        .map(|&x| ((x as u32 * c as u32) % p) as u8)
        .collect()
}

/// A dense matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FpMatrix {
    /// Builds a matrix from integer rows, reducing every entry into `[0, p)`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        check_prime(p)?;
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| reduce_i64(x, p)));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zero(p: u32, rows: usize, cols: usize) -> Result<Self> {
        check_prime(p)?;
        Ok(FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(p: u32, n: usize) -> Result<Self> {
        let mut m = Self::zero(p, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Reduced row-echelon form and rank. Zero rows are kept at the bottom so
    /// the shape is preserved.
    pub fn rref(&self) -> (FpMatrix, usize) {
        let p = self.p;
        let mut m: Vec<Vec<u8>> = self.to_rows();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = inv_mod(m[rank][col], p);
            m[rank] = scaled(&m[rank], inv, p);
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let neg = scaled(&pivot_row, (p - row[col] as u32) as u8, p);
                    add_assign_from(row, &neg, col, p as u8);
                }
            }
            rank += 1;
        }
        let data = m.into_iter().flatten().collect();
        (
            FpMatrix {
                p,
                rows: self.rows,
                cols: self.cols,
                data,
            },
            rank,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }
}

/// A linear endomorphism of GF(p)^n.
pub trait LinearMap {
    fn dim(&self) -> usize;
    /// Writes the image of `v` into `out` (both of length `dim`).
    fn apply(&self, v: &[u8], out: &mut [u8]);
}

impl LinearMap for FpMatrix {
    fn dim(&self) -> usize {
        self.cols
    }

    /// Column convention: `out = M v`.
    fn apply(&self, v: &[u8], out: &mut [u8]) {
        let p = self.p;
        for (r, o) in out.iter_mut().enumerate().take(self.rows) {
            let s: u32 = self
                .row(r)
                .iter()
                .zip(v)
                .map(|(&a, &b)| a as u32 * b as u32 % p)
                .sum();
            *o = (s % p) as u8;
        }
    }
}

/// The linear map sending basis vector `e_i` to `e_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinatePermutation {
    pub perm: Vec<usize>,
}

impl LinearMap for CoordinatePermutation {
    fn dim(&self) -> usize {
        self.perm.len()
    }

    fn apply(&self, v: &[u8], out: &mut [u8]) {
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i]] = x;
        }
    }
}

/// Incrementally grown echelon basis.
///
/// Rows are normalized to leading coefficient 1 and are zero left of their
/// pivot; columns right of a pivot are not cleared until [`EchelonBasis::into_subspace`].
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    p: u32,
    n: usize,
    rows: Vec<Vec<u8>>,
    // multiples[r][c - 1] = c * rows[r]
    multiples: Vec<Vec<Vec<u8>>>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        check_prime(p)?;
        Ok(EchelonBasis {
            p,
            n,
            rows: Vec::new(),
            multiples: Vec::new(),
            pivot_row: vec![None; n],
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Reduces `v` in place against the basis; returns the first nonzero column left over.
    pub fn reduce(&self, v: &mut [u8]) -> Option<usize> {
        let p = self.p as u8;
        let mut first = None;
        for col in 0..self.n {
            let c = v[col];
            if c == 0 {
                continue;
            }
            match self.pivot_row[col] {
                Some(r) => {
                    let k = p - c;
                    add_assign_from(v, &self.multiples[r][k as usize - 1], col, p);
                }
                None => {
                    if first.is_none() {
                        first = Some(col);
                    }
                }
            }
        }
        first
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds `v` to the span. Returns true when the dimension grew.
    pub fn insert(&mut self, mut v: Vec<u8>) -> bool {
        debug_assert_eq!(v.len(), self.n);
        let Some(col) = self.reduce(&mut v) else {
            return false;
        };
        let inv = inv_mod(v[col], self.p);
        let row = scaled(&v, inv, self.p);
        let mults = (1..self.p).map(|c| scaled(&row, c as u8, self.p)).collect();
        self.pivot_row[col] = Some(self.rows.len());
        self.rows.push(row);
        self.multiples.push(mults);
        true
    }

    /// Canonical reduced row-echelon form of the span.
    pub fn into_subspace(self) -> FpSubspace {
        let p = self.p;
        let n = self.n;
        let mut order: Vec<(usize, usize)> = self
            .pivot_row
            .iter()
            .enumerate()
            .filter_map(|(c, r)| r.map(|r| (c, r)))
            .collect();
        order.sort();
        let mut basis: Vec<Vec<u8>> = order.iter().map(|&(_, r)| self.rows[r].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&(c, _)| c).collect();
        // clear above each pivot, bottom-up
        for i in (0..basis.len()).rev() {
            let col = pivots[i];
            let pivot = basis[i].clone();
            for row in basis.iter_mut().take(i) {
                let c = row[col];
                if c != 0 {
                    let neg = scaled(&pivot, (p - c as u32) as u8, p);
                    add_assign_from(row, &neg, col, p as u8);
                }
            }
        }
        FpSubspace {
            p,
            ambient_dim: n,
            basis,
        }
    }
}

/// A subspace of GF(p)^n in canonical reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpSubspace {
    p: u32,
    ambient_dim: usize,
    basis: Vec<Vec<u8>>,
}

impl FpSubspace {
    pub fn zero(p: u32, n: usize) -> Result<Self> {
        check_prime(p)?;
        Ok(FpSubspace {
            p,
            ambient_dim: n,
            basis: Vec::new(),
        })
    }

    pub fn full(p: u32, n: usize) -> Result<Self> {
        let id = FpMatrix::identity(p, n)?;
        Ok(FpSubspace {
            p,
            ambient_dim: n,
            basis: id.to_rows(),
        })
    }

    /// Span of integer vectors (entries reduced mod p).
    pub fn span(p: u32, n: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        let mut e = EchelonBasis::new(p, n)?;
        for v in vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            e.insert(v.iter().map(|&x| reduce_i64(x, p)).collect());
        }
        Ok(e.into_subspace())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect()
    }

    fn echelon(&self) -> EchelonBasis {
        let mut e = EchelonBasis::new(self.p, self.ambient_dim).expect("prime checked");
        for r in &self.basis {
            e.insert(r.clone());
        }
        e
    }

    fn same_space(&self, other: &FpSubspace) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(self.p, other.p));
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u8]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        if v.iter().any(|&x| x as u32 >= self.p) {
            return Err(Error::InvalidParams(format!(
                "vector entry outside [0, {})",
                self.p
            )));
        }
        // Rows are fully reduced, so one pass over the pivots suffices.
        let p = self.p as u8;
        let mut w = v.to_vec();
        for (row, col) in self.basis.iter().zip(self.pivots()) {
            let c = w[col];
            if c != 0 {
                let neg = scaled(row, p - c, self.p);
                add_assign_from(&mut w, &neg, col, p);
            }
        }
        Ok(w.iter().all(|&x| x == 0))
    }

    pub fn is_subspace_of(&self, other: &FpSubspace) -> Result<bool> {
        self.same_space(other)?;
        for r in &self.basis {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn join(&self, other: &FpSubspace) -> Result<FpSubspace> {
        self.same_space(other)?;
        let mut e = self.echelon();
        for r in &other.basis {
            e.insert(r.clone());
        }
        Ok(e.into_subspace())
    }

    /// Intersection by the Zassenhaus method: row-reduce `[a | a]` stacked on
    /// `[b | 0]`; rows whose left half vanishes carry the intersection.
    pub fn meet(&self, other: &FpSubspace) -> Result<FpSubspace> {
        self.same_space(other)?;
        let n = self.ambient_dim;
        let mut e = EchelonBasis::new(self.p, 2 * n)?;
        for r in &self.basis {
            let mut v = r.clone();
            v.extend_from_slice(r);
            e.insert(v);
        }
        for r in &other.basis {
            let mut v = r.clone();
            v.extend(std::iter::repeat(0).take(n));
            e.insert(v);
        }
        let full = e.into_subspace();
        let mut out = EchelonBasis::new(self.p, n)?;
        for r in full.basis {
            if r[..n].iter().all(|&x| x == 0) {
                out.insert(r[n..].to_vec());
            }
        }
        Ok(out.into_subspace())
    }

    /// Smallest subspace containing `self` and stable under every operator.
    pub fn close_under(&self, operators: &[&dyn LinearMap]) -> Result<FpSubspace> {
        for op in operators {
            if op.dim() != self.ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.ambient_dim,
                    got: op.dim(),
                });
            }
        }
        let mut e = self.echelon();
        close_echelon(&mut e, 0, operators);
        Ok(e.into_subspace())
    }
}

/// Closes an echelon basis under `operators`, treating rows from `start` on
/// as not yet processed.
pub fn close_echelon(e: &mut EchelonBasis, start: usize, operators: &[&dyn LinearMap]) {
    let n = e.ambient_dim();
    let mut next = start;
    let mut img = vec![0u8; n];
    while next < e.dim() {
        let row = e.rows()[next].clone();
        next += 1;
        for op in operators {
            op.apply(&row, &mut img);
            e.insert(img.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        let id = FpMatrix::identity(2, 2).unwrap();
        assert_eq!(id.rref(), (id.clone(), 2));

        let m = FpMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r.to_rows(), vec![vec![1, 1], vec![0, 0]]);

        let m = FpMatrix::from_rows(5, &[vec![2, 4], vec![1, 3]]).unwrap();
        let (r, rank) = m.rref();
        assert_eq!(rank, 2);
        assert_eq!(r.to_rows(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(FpMatrix::zero(6, 1, 1), Err(Error::NotPrime(6)));
        assert!(FpSubspace::zero(1, 3).is_err());
    }

    #[test]
    fn join_examples() {
        let s = FpSubspace::span(3, 3, &[vec![1, 2, 0]]).unwrap();
        let z = FpSubspace::zero(3, 3).unwrap();
        assert_eq!(s.join(&z).unwrap(), s);
        let e1 = FpSubspace::span(3, 3, &[vec![1, 0, 0]]).unwrap();
        let e2 = FpSubspace::span(3, 3, &[vec![0, 1, 0]]).unwrap();
        assert_eq!(e1.join(&e2).unwrap().dim(), 2);
    }

    #[test]
    fn contains_examples() {
        let s = FpSubspace::span(2, 2, &[vec![1, 0]]).unwrap();
        assert!(s.contains(&[0, 0]).unwrap());
        assert!(!s.contains(&[0, 1]).unwrap());
        let t = FpSubspace::span(5, 2, &[vec![1, 2], vec![0, 1]]).unwrap();
        assert!(t.contains(&[1, 0]).unwrap());
        // [1,0] = [1,2] - 2*[0,1], found by trying all 25 combinations
        let hits: Vec<(u32, u32)> = (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .filter(|&(a, b)| (a % 5, (2 * a + b) % 5) == (1, 0))
            .collect();
        assert_eq!(hits, vec![(1, 3)]);
    }

    #[test]
    fn close_under_examples() {
        let s = FpSubspace::span(2, 3, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(s.close_under(&[]).unwrap(), s);
        let shift = CoordinatePermutation {
            perm: vec![1, 2, 0],
        };
        assert_eq!(
            s.close_under(&[&shift]).unwrap(),
            FpSubspace::full(2, 3).unwrap()
        );
        let proj = FpMatrix::from_rows(2, &[vec![1, 0], vec![0, 0]]).unwrap();
        let t = FpSubspace::span(2, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(
            t.close_under(&[&proj]).unwrap(),
            FpSubspace::full(2, 2).unwrap()
        );
    }

    #[test]
    fn meet_of_overlapping_planes() {
        let a = FpSubspace::span(2, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = FpSubspace::span(2, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        let m = a.meet(&b).unwrap();
        assert_eq!(m.basis(), &[vec![1, 1, 0, 0]]);
    }
}

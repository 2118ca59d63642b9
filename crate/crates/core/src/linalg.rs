//! Dense matrices and canonical subspaces over a [`FieldTable`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldTable};

/// Row-major dense matrix over `F_q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// `self * v` for a column vector `v` of length `cols`.
    pub fn apply(&self, f: &FieldTable, v: &[Elem], out: &mut Vec<Elem>) {
        debug_assert_eq!(v.len(), self.cols);
        out.clear();
        out.extend((0..self.rows).map(|r| {
            self.row(r)
                .iter()
                .zip(v)
                .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
        }));
    }

    pub fn mul(&self, f: &FieldTable, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0;
                for k in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, k), other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn rank(&self, f: &FieldTable) -> usize {
        let mut m = self.clone();
        rref_in_place(f, &mut m.data, m.rows, m.cols).len()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(fmt, "; ")?;
            }
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(fmt, " ")?;
                }
                write!(fmt, "{x}")?;
            }
        }
        write!(fmt, "]")
    }
}

/// Gauss-Jordan elimination of a row-major `rows x cols` block. Returns the
/// pivot columns; the first `pivots.len()` rows hold the reduced basis and the
/// remaining rows are zero.
fn rref_in_place(f: &FieldTable, data: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == rows {
            break;
        }
        let Some(pr) = (top..rows).find(|&r| data[r * cols + c] != 0) else {
            continue;
        };
        if pr != top {
            for k in 0..cols {
                data.swap(pr * cols + k, top * cols + k);
            }
        }
        let s = f.inv_nonzero(data[top * cols + c]);
        for k in 0..cols {
            data[top * cols + k] = f.mul(s, data[top * cols + k]);
        }
        for r in 0..rows {
            if r == top {
                continue;
            }
            let factor = data[r * cols + c];
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for k in 0..cols {
                let t = f.mul(nf, data[top * cols + k]);
                data[r * cols + k] = f.add(data[r * cols + k], t);
            }
        }
        pivots.push(c);
        top += 1;
    }
    pivots
}

/// A subspace of `F_q^n` stored by its reduced row echelon basis.
///
/// RREF is canonical, so two subspaces are equal exactly when their storage
/// is equal. Storage is shared, so clones are cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    pivots: Arc<[usize]>,
    /// `rank x ambient`, row-major.
    basis: Arc<[Elem]>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            pivots: Arc::from([]),
            basis: Arc::from([]),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut basis = vec![0; ambient * ambient];
        for i in 0..ambient {
            basis[i * ambient + i] = 1;
        }
        Subspace {
            ambient,
            pivots: (0..ambient).collect(),
            basis: basis.into(),
        }
    }

    /// Span of the given vectors (each of length `ambient`).
    pub fn span<'v, I>(f: &FieldTable, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'v [Elem]>,
    {
        let mut data = Vec::new();
        let mut rows = 0;
        for v in vectors {
            debug_assert_eq!(v.len(), ambient);
            data.extend_from_slice(v);
            rows += 1;
        }
        let pivots = rref_in_place(f, &mut data, rows, ambient);
        data.truncate(pivots.len() * ambient);
        Subspace {
            ambient,
            pivots: pivots.into(),
            basis: data.into(),
        }
    }

    /// Builds from a matrix already in reduced row echelon form; checks it.
    pub fn from_rref(f: &FieldTable, ambient: usize, basis: Vec<Elem>) -> Result<Self> {
        if ambient == 0 && !basis.is_empty() || ambient > 0 && !basis.len().is_multiple_of(ambient) {
            return Err(Error::Shape("basis length not a multiple of ambient".into()));
        }
        let rows = basis.len().checked_div(ambient).unwrap_or(0);
        let s = Subspace::span(f, ambient, basis.chunks(ambient.max(1)));
        if s.rank() != rows || *s.basis != basis[..] {
            return Err(Error::Shape("basis is not in reduced row echelon form".into()));
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_row(&self, r: usize) -> &[Elem] {
        &self.basis[r * self.ambient..(r + 1) * self.ambient]
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rank()).map(move |r| self.basis_row(r))
    }

    /// Columns that carry no pivot; these coordinates parametrize the quotient.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in self.pivots.iter() {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Subtracts the basis combination that clears all pivot coordinates.
    /// The residue is zero iff `v` lies in the subspace.
    pub fn reduce(&self, f: &FieldTable, v: &mut [Elem]) {
        for (r, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            let row = &self.basis[r * self.ambient..(r + 1) * self.ambient];
            for (x, &b) in v.iter_mut().zip(row) {
                if b != 0 {
                    *x = f.add(*x, f.mul(nc, b));
                }
            }
        }
    }

    pub fn contains(&self, f: &FieldTable, v: &[Elem]) -> bool {
        // in RREF the only candidate combination has coefficients v[pivot]
        (0..self.ambient).all(|c| {
            let mut x = 0;
            for (r, &p) in self.pivots.iter().enumerate() {
                let b = self.basis[r * self.ambient + c];
                if b != 0 {
                    x = f.add(x, f.mul(v[p], b));
                }
            }
            x == v[c]
        })
    }

    pub fn is_subspace_of(&self, f: &FieldTable, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.rank() <= other.rank()
            && self.basis_rows().all(|row| other.contains(f, row))
    }

    /// Coordinates of a member vector with respect to the RREF basis.
    pub fn coordinates(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "<")?;
        for (i, row) in self.basis_rows().enumerate() {
            if i > 0 {
                write!(fmt, "; ")?;
            }
            for (c, x) in row.iter().enumerate() {
                if c > 0 {
                    write!(fmt, " ")?;
                }
                write!(fmt, "{x}")?;
            }
        }
        write!(fmt, "> in F^{}", self.ambient)
    }
}

/// Every `k`-dimensional subspace of `F_q^n`, each exactly once.
///
/// Ordered by pivot set (lexicographic), then by the free entries read as a
/// base-`q` number.
pub fn enumerate_subspaces(
    f: &FieldTable,
    n: usize,
    k: usize,
) -> Result<impl Iterator<Item = Subspace> + '_> {
    if k > n {
        return Err(Error::Domain(format!("no {k}-dimensional subspaces of F^{n}")));
    }
    let q = f.q() as u64;
    // (pivot columns, free (row, column) positions) per echelon shape
    let shapes: Vec<Shape> = combinations(n, k)
        .into_iter()
        .map(|pivots| {
            let mut free = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in p + 1..n {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            (pivots, free)
        })
        .collect();
    Ok(shapes.into_iter().flat_map(move |(pivots, free)| {
        let pivots: Arc<[usize]> = pivots.into();
        let count = q.pow(free.len() as u32);
        (0..count).map(move |mut code| {
            let mut basis = vec![0; k * n];
            for (r, &p) in pivots.iter().enumerate() {
                basis[r * n + p] = 1;
            }
            for &(r, c) in free.iter().rev() {
                basis[r * n + c] = (code % q) as Elem;
                code /= q;
            }
            Subspace {
                ambient: n,
                pivots: pivots.clone(),
                basis: basis.into(),
            }
        })
    }))
}

type Shape = (Vec<usize>, Vec<(usize, usize)>);

/// Gaussian binomial `[n choose k]_q`, the number of `k`-subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

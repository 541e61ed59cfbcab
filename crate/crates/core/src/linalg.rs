//! Sparse exact linear algebra: vectors, column-sparse matrices, echelon spans.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

/// Sparse vector: entries sorted by index, no explicit zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: Field) -> Self {
        SparseVec { entries: vec![(i, field.one())] }
    }

    pub fn single(i: usize, c: Scalar) -> Self {
        if c.is_zero() {
            SparseVec::new()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    /// Builds from arbitrary (index, coefficient) pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in pairs {
            match acc.get_mut(&i) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(i, c);
                }
            }
        }
        SparseVec { entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Dense coefficient list (zeros dropped).
    pub fn from_dense(coeffs: &[Scalar]) -> Self {
        SparseVec {
            entries: coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// self + c * other
    pub fn add_scaled(&self, other: &SparseVec, c: &Scalar) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(x), Some(y)) if x == y => {
                    let v = &self.entries[a].1 + &(&other.entries[b].1 * c);
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (_, Some(y)) => {
                    out.push((y, &other.entries[b].1 * c));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().one()),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().from_i64(-1)),
        }
    }

    /// Reindexes entries through `f`; `f` must be injective on the support.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }

    pub fn dot(&self, other: &SparseVec) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        for (i, c) in &self.entries {
            if let Some(d) = other.get(*i) {
                let t = c * d;
                acc = Some(match acc {
                    Some(a) => &a + &t,
                    None => t,
                });
            }
        }
        acc
    }
}

/// Column-sparse matrix; column `j` is the image of the `j`-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: Vec<SparseVec>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols: vec![SparseVec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Matrix { field, rows: n, cols: (0..n).map(|i| SparseVec::unit(i, field)).collect() }
    }

    pub fn from_columns(field: Field, rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().map_or(true, |m| m < rows)));
        Matrix { field, rows, cols }
    }

    /// Integer entries given as dense rows (test and constructor convenience).
    pub fn from_rows_i64(field: Field, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|j| SparseVec::from_pairs((0..nrows).map(|i| (i, field.from_i64(rows[i][j])))))
            .collect();
        Matrix { field, rows: nrows, cols }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn set_column(&mut self, j: usize, v: SparseVec) {
        self.cols[j] = v;
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out = out.add_scaled(&self.cols[*j], c);
        }
        out
    }

    /// self ∘ rhs
    pub fn compose(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), rhs.nrows(), "matrix composition shape mismatch");
        Matrix { field: self.field, rows: self.rows, cols: rhs.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.ncols()), (rhs.rows, rhs.ncols()));
        Matrix { field: self.field, rows: self.rows, cols: self.cols.iter().zip(&rhs.cols).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.ncols()), (rhs.rows, rhs.ncols()));
        Matrix { field: self.field, rows: self.rows, cols: self.cols.iter().zip(&rhs.cols).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols.iter().map(|v| v.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.ncols() && self.cols.iter().enumerate().all(|(j, c)| c.nnz() == 1 && c.entries()[0].0 == j && c.entries()[0].1.is_one())
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                rows[*i].push((j, v.clone()));
            }
        }
        Matrix { field: self.field, rows: self.ncols(), cols: rows.into_iter().map(|r| SparseVec::from_pairs(r)).collect() }
    }

    /// Kronecker product without signs; column index of (a, b) is a * ncols(rhs) + b.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let mut cols = Vec::with_capacity(self.ncols() * rhs.ncols());
        for a in &self.cols {
            for b in &rhs.cols {
                cols.push(SparseVec::from_pairs(
                    a.iter().flat_map(|(i, x)| b.iter().map(move |(k, y)| (i * rhs.rows + k, x * y))),
                ));
            }
        }
        Matrix { field: self.field, rows: self.rows * rhs.rows, cols }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.rows);
        for c in &self.cols {
            e.insert(c.clone());
        }
        e.rank()
    }

    /// Two-sided inverse, if square and invertible.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.rows;
        if self.ncols() != n {
            return None;
        }
        // Gauss-Jordan on dense rows [A | I].
        let f = self.field;
        let mut m: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row: Vec<Scalar> = (0..n).map(|j| self.entry(i, j)).collect();
                row.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].inv()?;
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for k in 0..2 * n {
                        let t = &m[col][k] * &factor;
                        m[r][k] = &m[r][k] - &t;
                    }
                }
            }
        }
        let cols = (0..n).map(|j| SparseVec::from_pairs((0..n).map(|i| (i, m[i][n + j].clone())))).collect();
        Some(Matrix { field: f, rows: n, cols })
    }
}

/// Incrementally maintained echelon basis of a subspace.
///
/// Pivots are the largest index of each row, so reduction keeps the
/// low-index coordinates; quotient representatives are therefore the
/// earliest basis vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ambient: usize,
    rows: Vec<SparseVec>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field, ambient: usize) -> Self {
        Echelon { field, ambient, rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivot_row.contains_key(&i)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// Remainder of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut cursor = match acc.keys().next_back() {
            Some(&k) => k,
            None => return SparseVec::new(),
        };
        loop {
            let next = acc.range(..=cursor).rev().find(|(k, _)| self.pivot_row.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let (k, c) = match next {
                Some(x) => x,
                None => break,
            };
            let row = &self.rows[self.pivot_row[&k]];
            for (i, r) in row.iter() {
                let t = r * &c;
                let e = acc.entry(*i).or_insert_with(|| self.field.zero());
                *e = &*e - &t;
                if e.is_zero() {
                    acc.remove(i);
                }
            }
            if k == 0 {
                break;
            }
            cursor = k - 1;
        }
        SparseVec::from_pairs(acc)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(&v);
        let Some(p) = r.max_index() else { return false };
        let inv = r.get(p).unwrap().inv().unwrap();
        let r = r.scale(&inv);
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Back-substitutes so every row vanishes at all other pivots.
    pub fn fully_reduce(&mut self) {
        let order: Vec<(usize, usize)> = self.pivot_row.iter().map(|(p, r)| (*p, *r)).collect();
        for (k, &(_, ri)) in order.iter().enumerate() {
            let mut row = self.rows[ri].clone();
            // rows with smaller pivots are already fully reduced
            for &(q, qi) in order[..k].iter().rev() {
                if let Some(c) = row.get(q).cloned() {
                    row = row.add_scaled(&self.rows[qi], &(-&c));
                }
            }
            self.rows[ri] = row;
        }
    }

    /// Indices of the standard basis vectors that form a complement.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.ambient).filter(|i| !self.pivot_row.contains_key(i)).collect()
    }

    /// Projection onto the complement coordinates (requires `fully_reduce`).
    pub fn projection(&self) -> Matrix {
        let comp = self.complement();
        let mut pos = vec![usize::MAX; self.ambient];
        for (k, &i) in comp.iter().enumerate() {
            pos[i] = k;
        }
        let cols = (0..self.ambient)
            .map(|j| match self.pivot_row.get(&j) {
                None => SparseVec::unit(pos[j], self.field),
                Some(&ri) => SparseVec::from_pairs(self.rows[ri].iter().filter(|(i, _)| *i != j).map(|(i, c)| (pos[*i], -c))),
            })
            .collect();
        Matrix::from_columns(self.field, comp.len(), cols)
    }
}

//! Exact dense and sparse matrices over `Q(ζ_N)`.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::CycloScalar;
use crate::error::{Error, Result};
use crate::modp::{PrimeField, SparseModP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    data: Vec<CycloScalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, modulus: u32) -> Self {
        Matrix {
            rows,
            cols,
            modulus,
            data: vec![CycloScalar::zero(modulus); rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut m = Matrix::zero(n, n, modulus);
        for i in 0..n {
            m.set(i, i, CycloScalar::one(modulus));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycloScalar>>, cols: usize, modulus: u32) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Precondition("ragged matrix rows".into()));
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            modulus,
            data,
        })
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<CycloScalar>], rows: usize, modulus: u32) -> Self {
        let mut m = Matrix::zero(rows, columns.len(), modulus);
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &CycloScalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: CycloScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<CycloScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloScalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, other.cols, self.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &a.mul_ref(b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[CycloScalar]) -> Vec<CycloScalar> {
        (0..self.rows)
            .map(|i| {
                let mut acc = CycloScalar::zero(self.modulus);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &a.mul_ref(b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, CycloScalar::add_ref)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, CycloScalar::sub_ref)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&CycloScalar, &CycloScalar) -> CycloScalar) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Precondition("matrix shapes differ".into()));
        }
        Ok(Matrix {
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &CycloScalar) -> Matrix {
        Matrix {
            data: self.data.iter().map(|a| a.mul_ref(c)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> CycloScalar {
        let mut acc = CycloScalar::zero(self.modulus);
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Matrix {
        Matrix {
            data: self.data.iter().map(CycloScalar::conj).collect(),
            ..self.clone()
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Precondition("column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            data,
            ..self.clone()
        })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let b = m.get(r, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).sub_ref(&f.mul_ref(b));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as the columns of a `cols × nullity` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(self.cols, free.len(), self.modulus);
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, CycloScalar::one(self.modulus));
            for (row, &p) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if !v.is_zero() {
                    out.set(p, k, v.neg_ref());
                }
            }
        }
        out
    }

    /// Some `x` with `A x = b`.
    pub fn solve(&self, b: &[CycloScalar]) -> Result<Vec<CycloScalar>> {
        if b.len() != self.rows {
            return Err(Error::Precondition("right-hand side has the wrong length".into()));
        }
        let mut aug = Matrix::zero(self.rows, self.cols + 1, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![CycloScalar::zero(self.modulus); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Ok(x)
    }
}

/// A column-sparse matrix: `cols[j]` maps row indices to nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    modulus: u32,
    cols: Vec<BTreeMap<usize, CycloScalar>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize, modulus: u32) -> Self {
        SparseMatrix {
            nrows,
            modulus,
            cols: vec![BTreeMap::new(); ncols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, CycloScalar> {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn add_entry(&mut self, i: usize, j: usize, c: &CycloScalar) {
        if c.is_zero() {
            return;
        }
        assert!(i < self.nrows, "row out of range");
        let col = &mut self.cols[j];
        let v = col.entry(i).or_insert_with(|| CycloScalar::zero(self.modulus));
        *v += c;
        if v.is_zero() {
            col.remove(&i);
        }
    }

    pub fn set_column(&mut self, j: usize, col: BTreeMap<usize, CycloScalar>) {
        self.cols[j] = col;
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// `self · other`, exactly.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols() != other.nrows {
            return Err(Error::Precondition("sparse shapes do not compose".into()));
        }
        let mut out = SparseMatrix::zero(self.nrows, other.ncols(), self.modulus);
        for (j, col) in other.cols.iter().enumerate() {
            for (&k, b) in col {
                for (&i, a) in &self.cols[k] {
                    out.add_entry(i, j, &a.mul_ref(b));
                }
            }
        }
        Ok(out)
    }

    /// Keeps the listed rows and columns, renumbered in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut row_pos = vec![usize::MAX; self.nrows];
        for (k, &r) in rows.iter().enumerate() {
            row_pos[r] = k;
        }
        let mut out = SparseMatrix::zero(rows.len(), cols.len(), self.modulus);
        for (k, &c) in cols.iter().enumerate() {
            out.cols[k] = self.cols[c]
                .iter()
                .filter(|(&i, _)| row_pos[i] != usize::MAX)
                .map(|(&i, v)| (row_pos[i], v.clone()))
                .collect();
        }
        out
    }

    /// True when some listed column has an entry outside the listed rows.
    pub fn leaks_outside(&self, rows: &[usize], cols: &[usize]) -> bool {
        let mut keep = vec![false; self.nrows];
        for &r in rows {
            keep[r] = true;
        }
        cols.iter().any(|&c| self.cols[c].keys().any(|&i| !keep[i]))
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zero(self.nrows, self.ncols(), self.modulus);
        for (j, col) in self.cols.iter().enumerate() {
            for (&i, v) in col {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> SparseMatrix {
        let mut out = SparseMatrix::zero(m.rows(), m.cols(), m.modulus());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.add_entry(i, j, m.get(i, j));
            }
        }
        out
    }

    /// Image mod `p`; `None` when an entry has a denominator divisible by `p`.
    pub fn reduce(&self, f: &PrimeField) -> Option<SparseModP> {
        let mut cols = Vec::with_capacity(self.cols.len());
        for col in &self.cols {
            let mut c = Vec::with_capacity(col.len());
            for (&i, v) in col {
                let r = f.reduce(v)?;
                if r != 0 {
                    c.push((i as u32, r));
                }
            }
            cols.push(c);
        }
        Some(SparseModP {
            nrows: self.nrows,
            cols,
        })
    }

    /// Certified lower bound on the rank over `Q(ζ_N)`, probing at most `k` dimensions.
    pub fn rank_lower_bound(&self, k: usize, f: &PrimeField, rng: &mut ChaCha8Rng) -> usize {
        self.reduce(f)
            .map_or(0, |m| m.projected_rank(k, f, rng))
    }
}

/// A bounded complex `… → C_2 → C_1 → C_0 → T`, with `d_i: C_{i+1} → C_i` and `ε: C_0 → T`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    differentials: Vec<Matrix>,
    augmentation: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeExactness {
    pub degree: usize,
    /// Rank of the map leaving this degree (`ε` at degree 0).
    pub rank_out: usize,
    pub kernel_dim: usize,
    /// Rank of the map arriving at this degree.
    pub rank_in: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexExactness {
    pub degrees: Vec<DegreeExactness>,
    pub augmentation_surjective: Option<bool>,
    pub exact: bool,
}

impl ChainComplex {
    /// Checks shapes and `d_{i-1} d_i = 0`, including `ε d_0 = 0`.
    pub fn new(dims: Vec<usize>, differentials: Vec<Matrix>, augmentation: Option<Matrix>) -> Result<Self> {
        if differentials.len() + 1 != dims.len() {
            return Err(Error::Precondition(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != dims[i] || d.cols() != dims[i + 1] {
                return Err(Error::Precondition(format!("d_{i} has the wrong shape")));
            }
        }
        if let Some(e) = &augmentation {
            if e.cols() != dims[0] {
                return Err(Error::Precondition("augmentation has the wrong shape".into()));
            }
        }
        let c = ChainComplex {
            dims,
            differentials,
            augmentation,
        };
        for i in 0..c.differentials.len() {
            if !c.composite_is_zero(i)? {
                return Err(Error::InvariantViolation(format!("d∘d ≠ 0 at degree {i}")));
            }
        }
        Ok(c)
    }

    /// Skips the `d∘d = 0` check, for negative controls.
    pub fn new_unchecked(dims: Vec<usize>, differentials: Vec<Matrix>, augmentation: Option<Matrix>) -> Self {
        ChainComplex {
            dims,
            differentials,
            augmentation,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, i: usize) -> &Matrix {
        &self.differentials[i]
    }

    pub fn augmentation(&self) -> Option<&Matrix> {
        self.augmentation.as_ref()
    }

    // map leaving degree i composed with d_i
    fn composite_is_zero(&self, i: usize) -> Result<bool> {
        let out = if i == 0 {
            self.augmentation.as_ref()
        } else {
            Some(&self.differentials[i - 1])
        };
        match out {
            Some(o) => Ok(o.mul(&self.differentials[i])?.is_zero()),
            None => Ok(true),
        }
    }

    /// Exactness at `C_0, …, C_d`. Without an augmentation, degree 0 is compared with `C_0` itself.
    pub fn exactness_report(&self, through_degree: usize) -> ComplexExactness {
        let top = through_degree.min(self.dims.len().saturating_sub(1));
        let rank_of = |i: usize| self.differentials.get(i).map_or(0, Matrix::rank);
        let eps_rank = self.augmentation.as_ref().map(Matrix::rank);
        let mut degrees = Vec::new();
        if !self.dims.is_empty() {
            for i in 0..=top {
                let rank_out = if i == 0 { eps_rank.unwrap_or(0) } else { rank_of(i - 1) };
                let kernel_dim = self.dims[i] - rank_out;
                let rank_in = rank_of(i);
                degrees.push(DegreeExactness {
                    degree: i,
                    rank_out,
                    kernel_dim,
                    rank_in,
                    exact: rank_in == kernel_dim,
                });
            }
        }
        let augmentation_surjective = self
            .augmentation
            .as_ref()
            .zip(eps_rank)
            .map(|(e, r)| r == e.rows());
        let exact = degrees.iter().all(|d| d.exact) && augmentation_surjective != Some(false);
        ComplexExactness {
            degrees,
            augmentation_surjective,
            exact,
        }
    }
}

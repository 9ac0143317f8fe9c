use std::fmt;

use rand::Rng;

use crate::error::{dim_mismatch, Error, Result};
use crate::field::PrimeField;

/// A linear map `F^cols -> F^rows` over a prime field, acting on column vectors.
///
/// Entries are stored row-major and are always reduced into `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[GF({}); {}x{}](", self.field.modulus(), self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, ")")
    }
}

impl Mat {
    /// Builds a matrix from already-reduced row-major entries.
    pub fn new(field: PrimeField, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(dim_mismatch("Mat::new", format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(pos) = entries.iter().position(|&e| e >= field.modulus()) {
            return Err(Error::Malformed {
                invariant: "entry reduced mod p",
                location: format!("entry {pos} = {} with p = {}", entries[pos], field.modulus()),
            });
        }
        Ok(Self { field, rows, cols, entries })
    }

    /// Builds a matrix from arbitrary integers, reducing them mod p.
    pub fn from_i64(field: PrimeField, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "from_i64: wrong entry count");
        let entries = values.iter().map(|&v| field.reduce(v)).collect();
        Self { field, rows, cols, entries }
    }

    /// Builds a matrix from a list of rows; `cols` is needed for the 0-row case.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[&[i64]]) -> Self {
        let mut values = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "from_rows: ragged rows");
            values.extend_from_slice(r);
        }
        Self::from_i64(field, rows.len(), cols, &values)
    }

    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// The permutation matrix reversing the order of the basis.
    pub fn reversal(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + (n - 1 - i)] = 1;
        }
        m
    }

    /// A uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let p = field.modulus();
        let entries = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
        Self { field, rows, cols, entries }
    }

    /// A uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.modulus());
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// `self ∘ rhs`, i.e. the matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Mat) -> Result<Mat> {
        self.field.check_same(rhs.field)?;
        if self.cols != rhs.rows {
            return Err(dim_mismatch(
                "compose",
                format!("{}x{} after {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let p = self.field.modulus() as u64;
        let mut out = Self::zero(self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let idx = r * rhs.cols + c;
                    out.entries[idx] = ((out.entries[idx] as u64 + a * rhs.get(k, c) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    /// Product for callers that already guarantee compatible shapes.
    pub(crate) fn mul(&self, rhs: &Mat) -> Mat {
        self.compose(rhs).expect("shape-checked product")
    }

    pub fn add(&self, rhs: &Mat) -> Result<Mat> {
        self.same_shape(rhs, "add")?;
        let f = self.field;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Mat { entries, ..self.clone() })
    }

    pub fn sub(&self, rhs: &Mat) -> Result<Mat> {
        self.same_shape(rhs, "sub")?;
        let f = self.field;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Mat { entries, ..self.clone() })
    }

    pub fn neg(&self) -> Mat {
        let f = self.field;
        Mat { entries: self.entries.iter().map(|&a| f.neg(a)).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: u32) -> Mat {
        let f = self.field;
        Mat { entries: self.entries.iter().map(|&a| f.mul(a, s)).collect(), ..self.clone() }
    }

    fn same_shape(&self, rhs: &Mat, op: &'static str) -> Result<()> {
        self.field.check_same(rhs.field)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(dim_mismatch(op, format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        Ok(())
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Mat) -> Result<Mat> {
        self.field.check_same(rhs.field)?;
        if self.rows != rhs.rows {
            return Err(dim_mismatch("hstack", format!("{} rows vs {} rows", self.rows, rhs.rows)));
        }
        let cols = self.cols + rhs.cols;
        let mut out = Self::zero(self.field, self.rows, cols);
        for r in 0..self.rows {
            out.entries[r * cols..r * cols + self.cols]
                .copy_from_slice(&self.entries[r * self.cols..(r + 1) * self.cols]);
            out.entries[r * cols + self.cols..(r + 1) * cols]
                .copy_from_slice(&rhs.entries[r * rhs.cols..(r + 1) * rhs.cols]);
        }
        Ok(out)
    }

    /// `[self; rhs]`.
    pub fn vstack(&self, rhs: &Mat) -> Result<Mat> {
        self.field.check_same(rhs.field)?;
        if self.cols != rhs.cols {
            return Err(dim_mismatch("vstack", format!("{} cols vs {} cols", self.cols, rhs.cols)));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&rhs.entries);
        Ok(Mat { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, entries })
    }

    pub fn block_diag(&self, rhs: &Mat) -> Result<Mat> {
        self.field.check_same(rhs.field)?;
        let mut out = Self::zero(self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        Ok(out)
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub(crate) fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut out = Self::zero(self.field, rows.len(), cols.len());
        for (ro, r) in rows.clone().enumerate() {
            for (co, c) in cols.clone().enumerate() {
                out.set(ro, co, self.get(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.entries.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        self.solve(&Mat::identity(self.field, self.rows))
    }

    /// Some `x` with `self · x = rhs`, if one exists.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = self.hstack(rhs).ok()?;
        let (r, pivots) = aug.rref();
        let mut x = Mat::zero(self.field, self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            if pc >= self.cols {
                return None;
            }
            for c in 0..rhs.cols {
                x.set(pc, c, r.get(row, self.cols + c));
            }
        }
        Some(x)
    }
}

/// `g ∘ f`.
pub fn mat_compose(g: &Mat, f: &Mat) -> Result<Mat> {
    g.compose(f)
}

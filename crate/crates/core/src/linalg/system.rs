//! Homogeneous linear systems whose unknowns are matrices.
//!
//! Used to describe spaces such as "all natural transformations between two
//! diagrams" and to draw uniformly random elements of them.

use rand::Rng;

use crate::field::PrimeField;
use crate::linalg::{exact::kernel, Mat};

/// One term `left · U_k · right` of a matrix equation.
#[derive(Debug, Clone)]
pub struct Term {
    pub unknown: usize,
    pub left: Mat,
    pub right: Mat,
}

/// A homogeneous system of equations `Σ left · U_k · right = 0`, collected as
/// rows over the flattened entries of the unknown blocks.
#[derive(Debug, Clone)]
pub struct MatrixSystem {
    field: PrimeField,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl MatrixSystem {
    pub fn new(field: PrimeField) -> Self {
        Self { field, shapes: Vec::new(), offsets: Vec::new(), rows: Vec::new() }
    }

    /// Registers an unknown `rows x cols` block and returns its handle.
    pub fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        let offset = self.offsets.last().copied().unwrap_or(0) + self.shapes.last().map(|&(r, c)| r * c).unwrap_or(0);
        self.shapes.push((rows, cols));
        self.offsets.push(offset);
        self.shapes.len() - 1
    }

    pub fn num_variables(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0) + self.shapes.last().map(|&(r, c)| r * c).unwrap_or(0)
    }

    /// Adds the matrix equation `Σ terms = 0`, whose value has shape `rows x cols`.
    pub fn equation(&mut self, rows: usize, cols: usize, terms: &[Term]) {
        let f = self.field;
        let n = self.num_variables();
        for a in 0..rows {
            for b in 0..cols {
                let mut row = vec![0u32; n];
                for t in terms {
                    let (ur, uc) = self.shapes[t.unknown];
                    debug_assert_eq!((t.left.rows(), t.left.cols()), (rows, ur));
                    debug_assert_eq!((t.right.rows(), t.right.cols()), (uc, cols));
                    let base = self.offsets[t.unknown];
                    for c in 0..ur {
                        let l = t.left.get(a, c);
                        if l == 0 {
                            continue;
                        }
                        for d in 0..uc {
                            let r = t.right.get(d, b);
                            if r == 0 {
                                continue;
                            }
                            let idx = base + c * uc + d;
                            row[idx] = f.add(row[idx], f.mul(l, r));
                        }
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    self.rows.push(row);
                }
            }
        }
    }

    fn coefficient_matrix(&self) -> Mat {
        let n = self.num_variables();
        let mut entries = Vec::with_capacity(self.rows.len() * n);
        for row in &self.rows {
            entries.extend_from_slice(row);
            entries.resize(entries.len() + n - row.len(), 0);
        }
        Mat::new(self.field, self.rows.len(), n, entries).expect("coefficients are reduced")
    }

    /// A uniformly random solution, split back into its unknown blocks.
    pub fn random_solution<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Mat> {
        let sols = kernel(&self.coefficient_matrix());
        let coeffs = Mat::random(self.field, sols.dim(), 1, rng);
        let flat = sols.basis().mul(&coeffs);
        self.unflatten(&flat)
    }

    /// Dimension of the solution space.
    pub fn solution_dim(&self) -> usize {
        kernel(&self.coefficient_matrix()).dim()
    }

    fn unflatten(&self, flat: &Mat) -> Vec<Mat> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| {
                let vals: Vec<u32> = (0..r * c).map(|k| flat.get(off + k, 0)).collect();
                Mat::new(self.field, r, c, vals).expect("solution entries are reduced")
            })
            .collect()
    }
}

impl Term {
    pub fn new(unknown: usize, left: Mat, right: Mat) -> Self {
        Self { unknown, left, right }
    }
}

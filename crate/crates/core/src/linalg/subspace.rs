use crate::error::{dim_mismatch, Result};
use crate::field::PrimeField;
use crate::linalg::Mat;

/// A subspace of `F^ambient_dim`, carried by a canonical basis.
///
/// The basis columns are in reduced column-echelon form, so two subspaces are
/// equal exactly when their basis matrices are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Mat,
}

impl Subspace {
    /// The span of the columns of `gens` (which need not be independent).
    pub fn span(gens: &Mat) -> Self {
        let (r, pivots) = gens.transpose().rref();
        let basis = r.submatrix(0..pivots.len(), 0..gens.rows()).transpose();
        Self { basis }
    }

    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Self { basis: Mat::zero(field, ambient_dim, 0) }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        Self { basis: Mat::identity(field, ambient_dim) }
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient_dim() == self.ambient_dim()
            && self.basis.hstack(&other.basis).map(|m| m.rank() == self.dim()).unwrap_or(false)
    }

    /// Coordinates of the columns of `vectors` in this basis, if they lie in the subspace.
    pub fn coordinates(&self, vectors: &Mat) -> Option<Mat> {
        self.basis.solve(vectors)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other, "sum")?;
        Ok(Subspace::span(&self.basis.hstack(&other.basis)?))
    }

    pub(crate) fn check_ambient(&self, other: &Subspace, op: &'static str) -> Result<()> {
        self.field().check_same(other.field())?;
        if self.ambient_dim() != other.ambient_dim() {
            return Err(dim_mismatch(op, format!("ambient {} vs {}", self.ambient_dim(), other.ambient_dim())));
        }
        Ok(())
    }
}

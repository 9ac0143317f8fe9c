//! Kernels, images, cokernels, pullbacks, pushouts and the exactness predicates
//! built from them.

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{Mat, Subspace};

pub fn kernel(f: &Mat) -> Subspace {
    let (r, pivots) = f.rref();
    let field = f.field();
    let free: Vec<usize> = (0..f.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut gens = Mat::zero(field, f.cols(), free.len());
    for (k, &fc) in free.iter().enumerate() {
        gens.set(fc, k, 1);
        for (row, &pc) in pivots.iter().enumerate() {
            gens.set(pc, k, field.neg(r.get(row, fc)));
        }
    }
    Subspace::span(&gens)
}

pub fn image(f: &Mat) -> Subspace {
    Subspace::span(f)
}

/// A surjection `q` out of the codomain of `f` with `kernel(q) = image(f)`.
///
/// The rows of `q` are a basis of the annihilator of `image(f)`.
pub fn cokernel(f: &Mat) -> Mat {
    kernel(&f.transpose()).basis().transpose()
}

pub fn intersect(s1: &Subspace, s2: &Subspace) -> Result<Subspace> {
    s1.check_ambient(s2, "intersect")?;
    let combined = s1.basis().hstack(&s2.basis().neg())?;
    let k = kernel(&combined);
    let coeffs = k.basis().submatrix(0..s1.dim(), 0..k.dim());
    Ok(Subspace::span(&s1.basis().mul(&coeffs)))
}

/// `image(f) = kernel(g)` for `f: a -> b`, `g: b -> c`.
pub fn is_exact_at(f: &Mat, g: &Mat) -> Result<bool> {
    f.field().check_same(g.field())?;
    if f.rows() != g.cols() {
        return Err(dim_mismatch("is_exact_at", format!("f has {} rows, g has {} cols", f.rows(), g.cols())));
    }
    Ok(image(f) == kernel(g))
}

/// A candidate short exact sequence `a' -> a -> a''`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SesTriple {
    pub mono: Mat,
    pub epi: Mat,
}

impl SesTriple {
    pub fn new(mono: Mat, epi: Mat) -> Self {
        Self { mono, epi }
    }
}

pub fn is_ses(t: &SesTriple) -> Result<bool> {
    Ok(is_exact_at(&t.mono, &t.epi)? && t.mono.is_injective() && t.epi.is_surjective())
}

/// The pullback of a cospan `b -f-> c <-g- d`, realized as a kernel inside `b ⊕ d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub apex_dim: usize,
    pub to_b: Mat,
    pub to_d: Mat,
}

pub fn pullback(f: &Mat, g: &Mat) -> Result<Pullback> {
    f.field().check_same(g.field())?;
    if f.rows() != g.rows() {
        return Err(dim_mismatch("pullback", format!("codomains {} vs {}", f.rows(), g.rows())));
    }
    let diff = f.hstack(&g.neg())?;
    let m = kernel(&diff);
    let apex_dim = m.dim();
    let to_b = m.basis().submatrix(0..f.cols(), 0..apex_dim);
    let to_d = m.basis().submatrix(f.cols()..f.cols() + g.cols(), 0..apex_dim);
    Ok(Pullback { apex_dim, to_b, to_d })
}

impl Pullback {
    /// The unique `w` with `to_b·w = u` and `to_d·w = v`, if the cone commutes.
    pub fn mediate(&self, u: &Mat, v: &Mat) -> Option<Mat> {
        let legs = self.to_b.vstack(&self.to_d).ok()?;
        let target = u.vstack(v).ok()?;
        legs.solve(&target)
    }

    /// The mediating map is unique whenever it exists: the legs are jointly injective.
    pub fn legs_jointly_injective(&self) -> bool {
        self.to_b.vstack(&self.to_d).map(|m| m.is_injective()).unwrap_or(false)
    }
}

/// The pushout of a span `b <-f- a -g-> d`, realized as a cokernel of `b ⊕ d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushout {
    pub apex_dim: usize,
    pub from_b: Mat,
    pub from_d: Mat,
}

pub fn pushout(f: &Mat, g: &Mat) -> Result<Pushout> {
    f.field().check_same(g.field())?;
    if f.cols() != g.cols() {
        return Err(dim_mismatch("pushout", format!("domains {} vs {}", f.cols(), g.cols())));
    }
    let q = cokernel(&f.vstack(&g.neg())?);
    let apex_dim = q.rows();
    let from_b = q.submatrix(0..apex_dim, 0..f.rows());
    let from_d = q.submatrix(0..apex_dim, f.rows()..f.rows() + g.rows());
    Ok(Pushout { apex_dim, from_b, from_d })
}

impl Pushout {
    /// The unique `w` with `w·from_b = u` and `w·from_d = v`, if the cocone commutes.
    pub fn mediate(&self, u: &Mat, v: &Mat) -> Option<Mat> {
        let legs = self.from_b.hstack(&self.from_d).ok()?;
        let target = u.hstack(v).ok()?;
        Some(legs.transpose().solve(&target.transpose())?.transpose())
    }

    pub fn legs_jointly_surjective(&self) -> bool {
        self.from_b.hstack(&self.from_d).map(|m| m.is_surjective()).unwrap_or(false)
    }
}

/// A square
///
/// ```text
///   tl --top--> tr
///   |           |
///  left       right
///   v           v
///   bl -bottom-> br
/// ```
///
/// In an admissible square the horizontal arrows are monos and the vertical ones epis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    pub top: Mat,
    pub left: Mat,
    pub right: Mat,
    pub bottom: Mat,
}

impl Square {
    pub fn new(top: Mat, left: Mat, right: Mat, bottom: Mat) -> Self {
        Self { top, left, right, bottom }
    }

    /// Dimensions of `(tl, tr, bl, br)`.
    pub fn corner_dims(&self) -> (usize, usize, usize, usize) {
        (self.top.cols(), self.top.rows(), self.left.rows(), self.right.rows())
    }

    pub fn check_shape(&self) -> Result<()> {
        let f = self.top.field();
        for m in [&self.left, &self.right, &self.bottom] {
            f.check_same(m.field())?;
        }
        let ok = self.top.cols() == self.left.cols()
            && self.top.rows() == self.right.cols()
            && self.left.rows() == self.bottom.cols()
            && self.right.rows() == self.bottom.rows();
        if ok {
            Ok(())
        } else {
            Err(dim_mismatch("square", format!("{self:?}")))
        }
    }

    pub fn commutes(&self) -> Result<bool> {
        self.check_shape()?;
        Ok(self.right.mul(&self.top) == self.bottom.mul(&self.left))
    }

    pub fn is_admissible(&self) -> Result<bool> {
        self.check_shape()?;
        Ok(self.top.is_injective()
            && self.bottom.is_injective()
            && self.left.is_surjective()
            && self.right.is_surjective())
    }

    pub fn transpose(&self) -> Square {
        Square {
            top: self.left.transpose(),
            left: self.top.transpose(),
            right: self.bottom.transpose(),
            bottom: self.right.transpose(),
        }
    }
}

fn require_commuting(sq: &Square) -> Result<()> {
    if sq.commutes()? {
        Ok(())
    } else {
        Err(Error::NonCommutingSquare)
    }
}

/// Whether `tl` is the pullback of `tr -> br <- bl`: the canonical map from `tl`
/// into the computed apex is an isomorphism.
pub fn is_cartesian(sq: &Square) -> Result<bool> {
    require_commuting(sq)?;
    let pb = pullback(&sq.right, &sq.bottom)?;
    let Some(canonical) = pb.mediate(&sq.top, &sq.left) else {
        return Ok(false);
    };
    Ok(canonical.is_invertible())
}

/// Whether `br` is the pushout of `tr <- tl -> bl`: the canonical map from the
/// computed apex into `br` is an isomorphism.
pub fn is_cocartesian(sq: &Square) -> Result<bool> {
    require_commuting(sq)?;
    let po = pushout(&sq.top, &sq.left)?;
    let Some(canonical) = po.mediate(&sq.right, &sq.bottom) else {
        return Ok(false);
    };
    Ok(canonical.is_invertible())
}

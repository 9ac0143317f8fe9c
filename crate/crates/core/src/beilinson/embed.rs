use crate::error::{Error, Result};
use crate::linalg::{cokernel, Mat};
use crate::window::{IndWindow, ProWindow};

use super::{dualize, PiWindow};

/// Embeds a strict ind-system on `[-1, N]`: `X(-1, j) = X_j`, `X(i, j) = X_j / X_i`
/// for `0 <= i <= j`, and `X(-1, -1) = 0`. Quotients are canonical cokernels.
///
/// The epis `X(-1, j) -> X(0, j)` are identities exactly when `X_0 = 0`.
pub fn embed_ind_window(x: &IndWindow) -> Result<PiWindow> {
    if !x.is_strict() {
        return Err(Error::Precondition("embed_ind_window needs injective structure maps".into()));
    }
    let f = x.field();
    let n = x.last() as i64;
    // Row -1 uses the identity "quotient" of X_j by the zero subspace.
    let quotient = |i: i64, j: i64| -> Mat {
        if i < 0 {
            Mat::identity(f, x.dim(j as usize))
        } else {
            cokernel(&x.transition(i as usize, j as usize))
        }
    };
    let dim = |i: i64, j: i64| -> usize {
        if j < 0 {
            0
        } else {
            quotient(i, j).rows()
        }
    };
    // Maps between quotients are induced by X's structure maps: solve q_to · X(j -> j') = m · q_from.
    let induced = |from: (i64, i64), to: (i64, i64)| -> Mat {
        if from.1 < 0 {
            return Mat::zero(f, dim(to.0, to.1), 0);
        }
        let q_from = quotient(from.0, from.1);
        let q_to = quotient(to.0, to.1);
        let rhs = q_to.mul(&x.transition(from.1 as usize, to.1 as usize));
        q_from
            .transpose()
            .solve(&rhs.transpose())
            .expect("the quotient map is surjective and kills the smaller subspace")
            .transpose()
    };
    PiWindow::from_fn(f, -1, n, dim, |i, j| induced((i, j), (i + 1, j)), |i, j| induced((i, j), (i, j + 1)))
}

/// A single object placed at the corner cell `(-1, 0)` of a `[-1, 0]` window.
pub fn embed_object(x: &Mat) -> Result<PiWindow> {
    embed_ind_window(&IndWindow::constant(x.field(), x.rows()))
}

/// Embeds a strict pro-system on `[-N, 1]`, mirroring [`embed_ind_window`]:
/// the result is the dual of the embedding of the dual ind-system.
pub fn embed_pro_window(y: &ProWindow) -> Result<PiWindow> {
    if !y.is_strict() {
        return Err(Error::Precondition("embed_pro_window needs surjective structure maps".into()));
    }
    Ok(dualize(&embed_ind_window(&y.dual())?))
}

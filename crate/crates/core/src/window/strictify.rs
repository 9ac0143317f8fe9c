use crate::error::Result;
use crate::index::CofinalMap;
use crate::linalg::{image, intersect, Mat, Subspace};
use crate::window::{IndWindow, ProWindow, SRoof, StraightMorphism, TRoof};

/// A strict pro-system isomorphic to the input, with the two comparison maps.
#[derive(Debug, Clone)]
pub struct ProStrictification {
    pub strict: ProWindow,
    /// `V'_j` as subspaces of `Y_j`.
    pub subspaces: Vec<Subspace>,
    /// Number of strict dimension drops in the intersection loop, per index.
    pub steps: Vec<usize>,
    /// `Y -> V'`.
    pub fwd: TRoof,
    /// `V' -> Y`.
    pub bwd: TRoof,
}

/// A strict ind-system isomorphic to the input, with the two comparison maps.
#[derive(Debug, Clone)]
pub struct IndStrictification {
    pub strict: IndWindow,
    /// `X'_j` as subspaces of `X_N`.
    pub subspaces: Vec<Subspace>,
    /// `X -> X'`.
    pub fwd: SRoof,
    /// `X' -> X`.
    pub bwd: SRoof,
}

/// Replaces `Y` by `V'_j = ⋂_{i >= j} im(Y_i -> Y_j)` with the induced surjections.
pub fn strictify_pro(y: &ProWindow) -> Result<ProStrictification> {
    let f = y.field();
    let n = y.last();
    let mut subspaces = Vec::with_capacity(n + 1);
    let mut steps = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut v = Subspace::full(f, y.dim(j));
        let mut drops = 0;
        for i in j..=n {
            let next = intersect(&v, &image(&y.transition(i, j)))?;
            if next.dim() < v.dim() {
                drops += 1;
            }
            v = next;
        }
        subspaces.push(v);
        steps.push(drops);
    }
    let bases: Vec<&Mat> = subspaces.iter().map(Subspace::basis).collect();
    let dims = bases.iter().map(|b| b.cols()).collect();
    let maps = (0..n)
        .map(|j| bases[j].solve(&y.map(j).mul(bases[j + 1])).expect("Y_{j+1} -> Y_j maps V'_{j+1} into V'_j"))
        .collect();
    let strict = ProWindow::new(f, dims, maps)?;

    let phi = CofinalMap::from_fn(n, |_| n);
    let fwd_components =
        (0..=n).map(|j| bases[j].solve(&y.transition(n, j)).expect("Y_N -> Y_j lands in V'_j")).collect();
    let fwd = TRoof::new(y, &strict, phi, fwd_components)?;
    let bwd = TRoof::new(&strict, y, CofinalMap::identity(), bases.iter().map(|b| (*b).clone()).collect())?;
    Ok(ProStrictification { strict, subspaces, steps, fwd, bwd })
}

/// Replaces `X` by the images `X'_j = im(X_j -> X_N)` with the induced injections.
pub fn strictify_ind(x: &IndWindow) -> Result<IndStrictification> {
    let f = x.field();
    let n = x.last();
    let subspaces: Vec<Subspace> = (0..=n).map(|j| image(&x.transition(j, n))).collect();
    let bases: Vec<&Mat> = subspaces.iter().map(Subspace::basis).collect();
    let dims = bases.iter().map(|b| b.cols()).collect();
    let maps = (0..n).map(|j| bases[j + 1].solve(bases[j]).expect("images grow along the system")).collect();
    let strict = IndWindow::new(f, dims, maps)?;

    let fwd_components =
        (0..=n).map(|j| bases[j].solve(&x.transition(j, n)).expect("X_j -> X_N lands in X'_j")).collect();
    let fwd = SRoof::from_straight(&StraightMorphism::new(x.clone(), strict.clone(), fwd_components)?);
    let phi = CofinalMap::from_fn(n, |_| n);
    let bwd = SRoof::new(strict.clone(), x.clone(), phi, bases.iter().map(|b| (*b).clone()).collect())?;
    Ok(IndStrictification { strict, subspaces, fwd, bwd })
}

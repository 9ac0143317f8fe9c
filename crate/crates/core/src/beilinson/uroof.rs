use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::index::BicofinalMap;
use crate::linalg::system::{MatrixSystem, Term};
use crate::linalg::Mat;

use super::{cells, Cell, PiWindow};

/// A morphism `X -> Y` presented as `f(i, j): X(i, j) -> Y(φ(i), φ(j))`.
///
/// Components are stored on the roof window `[rlo, rhi] ⊇ [X.lo, X.hi]` with
/// `φ(rlo) <= Y.lo`. Below `rlo` they repeat the `rlo` row; above `rhi` they are
/// pushed along `Y`'s monos.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct URoof {
    source: PiWindow,
    target: PiWindow,
    phi: BicofinalMap,
    rlo: i64,
    rhi: i64,
    components: BTreeMap<Cell, Mat>,
}

impl URoof {
    pub fn new(
        source: PiWindow,
        target: PiWindow,
        phi: BicofinalMap,
        rlo: i64,
        rhi: i64,
        components: BTreeMap<Cell, Mat>,
    ) -> Result<Self> {
        source.field().check_same(target.field())?;
        if !phi.is_bicofinal() {
            return Err(Error::NotCofinal(format!("{phi:?}")));
        }
        if rlo > source.lo() || rhi < source.hi() {
            return Err(Error::Malformed {
                invariant: "roof window covers the source window",
                location: format!("[{rlo}, {rhi}] vs [{}, {}]", source.lo(), source.hi()),
            });
        }
        if phi.eval(rlo) > target.lo() {
            return Err(Error::Malformed {
                invariant: "φ(rlo) <= target lo",
                location: format!("φ({rlo}) = {} > {}", phi.eval(rlo), target.lo()),
            });
        }
        let r = Self { source, target, phi, rlo, rhi, components };
        for c in cells(rlo, rhi) {
            let m = r.components.get(&c).ok_or_else(|| Error::Malformed {
                invariant: "one component per roof cell",
                location: format!("{c:?}"),
            })?;
            if (m.rows(), m.cols()) != (r.target_dim(c), r.source.dim(c.0, c.1)) {
                return Err(Error::Malformed { invariant: "component shape", location: format!("{c:?}") });
            }
        }
        for (i, j) in cells(rlo, rhi) {
            if i < j && !r.natural_along(i, j, (i + 1, j)) {
                return Err(Error::Malformed { invariant: "naturality", location: format!("e:{i},{j}") });
            }
            if j < rhi && !r.natural_along(i, j, (i, j + 1)) {
                return Err(Error::Malformed { invariant: "naturality", location: format!("m:{i},{j}") });
            }
        }
        Ok(r)
    }

    fn natural_along(&self, i: i64, j: i64, to: Cell) -> bool {
        let f = |n: i64| self.phi.eval(n);
        let lhs = self.components[&to].mul(&self.source.transition((i, j), to));
        let rhs = self.target.transition((f(i), f(j)), (f(to.0), f(to.1))).mul(&self.components[&(i, j)]);
        lhs == rhs
    }

    fn target_dim(&self, (i, j): Cell) -> usize {
        self.target.dim(self.phi.eval(i), self.phi.eval(j))
    }

    pub fn identity(x: &PiWindow) -> Self {
        let components = cells(x.lo(), x.hi()).map(|(i, j)| ((i, j), Mat::identity(x.field(), x.dim(i, j)))).collect();
        Self {
            source: x.clone(),
            target: x.clone(),
            phi: BicofinalMap::identity_on(x.lo(), x.hi()),
            rlo: x.lo(),
            rhi: x.hi(),
            components,
        }
    }

    /// A uniformly random natural family `X -> Y·φ̃` on the roof window.
    pub fn random<R: Rng + ?Sized>(
        source: &PiWindow,
        target: &PiWindow,
        phi: BicofinalMap,
        rlo: i64,
        rhi: i64,
        rng: &mut R,
    ) -> Result<Self> {
        let field = source.field();
        let f = |n: i64| phi.eval(n);
        let tdim = |(i, j): Cell| target.dim(f(i), f(j));
        let mut sys = MatrixSystem::new(field);
        let handles: BTreeMap<Cell, usize> =
            cells(rlo, rhi).map(|c| (c, sys.unknown(tdim(c), source.dim(c.0, c.1)))).collect();
        for (i, j) in cells(rlo, rhi) {
            let mut steps = Vec::new();
            if i < j {
                steps.push((i + 1, j));
            }
            if j < rhi {
                steps.push((i, j + 1));
            }
            for to in steps {
                let (a, b) = (tdim(to), source.dim(i, j));
                sys.equation(
                    a,
                    b,
                    &[
                        Term::new(handles[&to], Mat::identity(field, a), source.transition((i, j), to)),
                        Term::new(
                            handles[&(i, j)],
                            target.transition((f(i), f(j)), (f(to.0), f(to.1))).neg(),
                            Mat::identity(field, b),
                        ),
                    ],
                );
            }
        }
        let sol = sys.random_solution(rng);
        let components = handles.iter().map(|(&c, &h)| (c, sol[h].clone())).collect();
        URoof::new(source.clone(), target.clone(), phi, rlo, rhi, components)
    }

    pub fn source(&self) -> &PiWindow {
        &self.source
    }

    pub fn target(&self) -> &PiWindow {
        &self.target
    }

    pub fn phi(&self) -> &BicofinalMap {
        &self.phi
    }

    pub fn roof_window(&self) -> (i64, i64) {
        (self.rlo, self.rhi)
    }

    pub fn components(&self) -> &BTreeMap<Cell, Mat> {
        &self.components
    }

    /// `f(i, j)` for any `i <= j`.
    pub fn component(&self, i: i64, j: i64) -> Mat {
        let rows = self.target_dim((i, j));
        let cols = self.source.dim(i, j);
        if cols == 0 {
            return Mat::zero(self.source.field(), rows, 0);
        }
        let (a, b) = (i.max(self.rlo), j.min(self.rhi));
        let f = |n: i64| self.phi.eval(n);
        self.target.transition((f(a), f(b)), (f(a), f(j))).mul(&self.components[&(a, b)])
    }
}

/// Components pushed into `Y(θ(i), θ(j))` with `θ = max(φ, ψ)` must agree on
/// every cell up to where both families become constant. On admissible windows
/// (epis onto, monos into) agreement for any larger θ already forces agreement
/// at this one.
pub fn uroof_equiv(r1: &URoof, r2: &URoof) -> Result<bool> {
    if r1.source != r2.source || r1.target != r2.target {
        return Err(Error::EndpointMismatch("uroof_equiv"));
    }
    let y = &r1.target;
    let theta = r1.phi.max(&r2.phi);
    let lo = r1.rlo.min(r2.rlo);
    let mut hi = r1.rhi.max(r2.rhi);
    while r1.phi.eval(hi) < y.hi() || r2.phi.eval(hi) < y.hi() {
        hi += 1;
    }
    let push = |r: &URoof, (i, j): Cell| {
        y.transition((r.phi.eval(i), r.phi.eval(j)), (theta.eval(i), theta.eval(j))).mul(&r.component(i, j))
    };
    Ok(cells(lo, hi).all(|c| push(r1, c) == push(r2, c)))
}

/// `r2 ∘ r1`, with components `g(φ₁(i), φ₁(j)) ∘ f(i, j)` and reindexing `φ₂ ∘ φ₁`.
pub fn uroof_compose(r2: &URoof, r1: &URoof) -> Result<URoof> {
    if r1.target != r2.source {
        return Err(Error::EndpointMismatch("uroof_compose"));
    }
    let phi = r2.phi.compose(&r1.phi);
    let mut rlo = r1.rlo;
    while phi.eval(rlo) > r2.target.lo() {
        rlo -= 1;
    }
    let components = cells(rlo, r1.rhi)
        .map(|(i, j)| {
            let (a, b) = (r1.phi.eval(i), r1.phi.eval(j));
            ((i, j), r2.component(a, b).mul(&r1.component(i, j)))
        })
        .collect();
    URoof::new(r1.source.clone(), r2.target.clone(), phi, rlo, r1.rhi, components)
}

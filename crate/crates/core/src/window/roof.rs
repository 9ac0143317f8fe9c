use rand::Rng;

use crate::error::{dim_mismatch, Error, Result};
use crate::index::CofinalMap;
use crate::linalg::Mat;
use crate::window::{IndWindow, ProWindow, StraightMorphism};

/// A morphism `X -> Y` of ind-objects presented as `f_i: X_i -> Y_{φ(i)}`.
///
/// Components are stored for `i <= W` with `W >= N_X`; beyond `W` they are
/// `Y(φ(W) -> φ(i)) ∘ f_W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SRoof {
    source: IndWindow,
    target: IndWindow,
    phi: CofinalMap,
    components: Vec<Mat>,
}

impl SRoof {
    pub fn new(source: IndWindow, target: IndWindow, phi: CofinalMap, components: Vec<Mat>) -> Result<Self> {
        if !phi.is_cofinal() {
            return Err(Error::NotCofinal(format!("{phi:?}")));
        }
        if components.len() <= source.last() {
            return Err(Error::Malformed {
                invariant: "roof window covers the source window",
                location: format!("{} components, source last index {}", components.len(), source.last()),
            });
        }
        for (i, c) in components.iter().enumerate() {
            if (c.rows(), c.cols()) != (target.dim(phi.eval(i)), source.dim(i)) {
                return Err(dim_mismatch("SRoof", format!("component {i}")));
            }
        }
        for i in 0..components.len() - 1 {
            let lhs = components[i + 1].mul(&source.map(i));
            let rhs = target.transition(phi.eval(i), phi.eval(i + 1)).mul(&components[i]);
            if lhs != rhs {
                return Err(Error::Malformed { invariant: "roof naturality", location: format!("square at {i}") });
            }
        }
        Ok(Self { source, target, phi, components })
    }

    pub fn identity(x: &IndWindow) -> Self {
        SRoof::from_straight(&StraightMorphism::identity(x))
    }

    /// A straight morphism as a roof with `φ = id`.
    pub fn from_straight(f: &StraightMorphism) -> Self {
        Self {
            source: f.source().clone(),
            target: f.target().clone(),
            phi: CofinalMap::identity(),
            components: f.components().to_vec(),
        }
    }

    /// A random roof with the given reindexing, drawn from `Hom(X, Y·φ)`.
    pub fn random<R: Rng + ?Sized>(source: &IndWindow, target: &IndWindow, phi: CofinalMap, rng: &mut R) -> Self {
        let f = StraightMorphism::random(source, &target.reindex(&phi), rng);
        Self { source: source.clone(), target: target.clone(), phi, components: f.components().to_vec() }
    }

    pub fn source(&self) -> &IndWindow {
        &self.source
    }

    pub fn target(&self) -> &IndWindow {
        &self.target
    }

    pub fn phi(&self) -> &CofinalMap {
        &self.phi
    }

    pub fn components(&self) -> &[Mat] {
        &self.components
    }

    fn window(&self) -> usize {
        self.components.len() - 1
    }

    /// `f_i: X_i -> Y_{φ(i)}` for any `i`.
    pub fn component(&self, i: usize) -> Mat {
        let w = self.window();
        if i <= w {
            self.components[i].clone()
        } else {
            self.target.transition(self.phi.eval(w), self.phi.eval(i)).mul(&self.components[w])
        }
    }

    /// The same morphism with target index `ψ >= φ`.
    pub fn push(&self, psi: &CofinalMap) -> Result<SRoof> {
        if !self.phi.leq(psi) {
            return Err(Error::Precondition("push needs φ <= ψ".into()));
        }
        let w = self.window().max(psi.last_index());
        let components =
            (0..=w).map(|i| self.target.transition(self.phi.eval(i), psi.eval(i)).mul(&self.component(i))).collect();
        Ok(SRoof { components, phi: psi.clone(), ..self.clone() })
    }
}

/// Two roofs are equivalent when their components agree after pushing both into
/// `Y_{θ(i)}` with `θ = max(φ, ψ, N_Y)`. Past `N_Y` all of `Y`'s maps are
/// identities, so this θ decides the question.
pub fn roof_equiv(r1: &SRoof, r2: &SRoof) -> Result<bool> {
    if r1.source != r2.source || r1.target != r2.target {
        return Err(Error::EndpointMismatch("roof_equiv"));
    }
    let y = &r1.target;
    let w = r1.window().max(r2.window());
    Ok((0..=w).all(|i| {
        let (a, b) = (r1.phi.eval(i), r2.phi.eval(i));
        let theta = a.max(b).max(y.last());
        y.transition(a, theta).mul(&r1.component(i)) == y.transition(b, theta).mul(&r2.component(i))
    }))
}

/// `r2 ∘ r1` with components `g_{φ₁(i)} ∘ f_i` and reindexing `φ₂ ∘ φ₁`.
pub fn roof_compose(r2: &SRoof, r1: &SRoof) -> Result<SRoof> {
    if r1.target != r2.source {
        return Err(Error::EndpointMismatch("roof_compose"));
    }
    let components = (0..=r1.window()).map(|i| r2.component(r1.phi.eval(i)).mul(&r1.component(i))).collect();
    Ok(SRoof { source: r1.source.clone(), target: r2.target.clone(), phi: r2.phi.compose(&r1.phi), components })
}

/// A morphism `Y -> Z` of pro-objects presented as `g_j: Y_{φ(j)} -> Z_j`.
///
/// Stored as the transposed roof `Z* -> Y*` between the dual ind-systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TRoof {
    dual: SRoof,
}

impl TRoof {
    pub fn new(source: &ProWindow, target: &ProWindow, phi: CofinalMap, components: Vec<Mat>) -> Result<Self> {
        let transposed = components.iter().map(Mat::transpose).collect();
        Ok(Self { dual: SRoof::new(target.dual(), source.dual(), phi, transposed)? })
    }

    pub fn identity(y: &ProWindow) -> Self {
        Self { dual: SRoof::identity(&y.dual()) }
    }

    pub fn source(&self) -> ProWindow {
        self.dual.target.dual()
    }

    pub fn target(&self) -> ProWindow {
        self.dual.source.dual()
    }

    pub fn phi(&self) -> &CofinalMap {
        &self.dual.phi
    }

    /// `g_j: Y_{φ(j)} -> Z_j`.
    pub fn component(&self, j: usize) -> Mat {
        self.dual.component(j).transpose()
    }

    /// The stored components, one per window index.
    pub fn components(&self) -> Vec<Mat> {
        self.dual.components.iter().map(Mat::transpose).collect()
    }

    /// The transposed roof between dual ind-systems.
    pub fn as_dual(&self) -> &SRoof {
        &self.dual
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &TRoof) -> Result<TRoof> {
        Ok(TRoof { dual: roof_compose(&inner.dual, &self.dual)? })
    }

    pub fn equiv(&self, other: &TRoof) -> Result<bool> {
        roof_equiv(&self.dual, &other.dual)
    }
}

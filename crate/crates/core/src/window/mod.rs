//! Countable ind- and pro-systems stored on a finite window `0..=N`.
//!
//! Past `N` every object equals `X_N` and every structure map is the identity.

mod roof;
mod strictify;

use rand::Rng;

use crate::error::{dim_mismatch, Error, Result};
use crate::field::PrimeField;
use crate::index::CofinalMap;
use crate::linalg::system::{MatrixSystem, Term};
use crate::linalg::Mat;

pub use roof::{roof_compose, roof_equiv, SRoof, TRoof};
pub use strictify::{strictify_ind, strictify_pro, IndStrictification, ProStrictification};

/// An ind-system `X_0 -> X_1 -> … -> X_N`, constant beyond `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndWindow {
    field: PrimeField,
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

/// A pro-system `Y_0 <- Y_1 <- … <- Y_N`, constant beyond `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProWindow {
    field: PrimeField,
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

fn check_chain(field: PrimeField, dims: &[usize], maps: &[Mat], ind: bool) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Malformed { invariant: "nonempty window", location: "dims".into() });
    }
    if maps.len() + 1 != dims.len() {
        return Err(Error::Malformed {
            invariant: "one structure map per consecutive pair",
            location: format!("{} dims, {} maps", dims.len(), maps.len()),
        });
    }
    for (i, m) in maps.iter().enumerate() {
        field.check_same(m.field())?;
        let (rows, cols) = if ind { (dims[i + 1], dims[i]) } else { (dims[i], dims[i + 1]) };
        if (m.rows(), m.cols()) != (rows, cols) {
            return Err(Error::Malformed {
                invariant: "structure map shape",
                location: format!("map {i}: {}x{}, expected {rows}x{cols}", m.rows(), m.cols()),
            });
        }
    }
    Ok(())
}

impl IndWindow {
    /// `maps[i]` is `X_i -> X_{i+1}`.
    pub fn new(field: PrimeField, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Self> {
        check_chain(field, &dims, &maps, true)?;
        Ok(Self { field, dims, maps })
    }

    /// The constant system on `F^d`.
    pub fn constant(field: PrimeField, d: usize) -> Self {
        Self { field, dims: vec![d], maps: vec![] }
    }

    /// A random window of length `len` with dimensions at most `max_dim`.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, len: usize, max_dim: usize, rng: &mut R) -> Self {
        let dims: Vec<usize> = (0..len.max(1)).map(|_| rng.gen_range(0..=max_dim)).collect();
        let maps = dims.windows(2).map(|w| Mat::random(field, w[1], w[0], rng)).collect();
        Self { field, dims, maps }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// The last stored index `N`.
    pub fn last(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i.min(self.last())]
    }

    /// `X_i -> X_{i+1}`.
    pub fn map(&self, i: usize) -> Mat {
        if i < self.last() {
            self.maps[i].clone()
        } else {
            Mat::identity(self.field, self.dim(i))
        }
    }

    /// The composite `X_i -> X_j` for `i <= j`.
    pub fn transition(&self, i: usize, j: usize) -> Mat {
        assert!(i <= j, "ind transition runs upward");
        let mut m = Mat::identity(self.field, self.dim(i));
        for k in i..j.min(self.last()) {
            m = self.maps[k].mul(&m);
        }
        m
    }

    /// `(X·φ)_i = X_{φ(i)}`.
    pub fn reindex(&self, phi: &CofinalMap) -> IndWindow {
        let l = phi.last_index();
        let top = l + self.last().saturating_sub(phi.eval(l));
        let dims = (0..=top).map(|i| self.dim(phi.eval(i))).collect();
        let maps = (0..top).map(|i| self.transition(phi.eval(i), phi.eval(i + 1))).collect();
        IndWindow { field: self.field, dims, maps }
    }

    /// The colimit `X_N` with its cocone legs `X_i -> X_N`.
    pub fn realize(&self) -> (usize, Vec<Mat>) {
        let n = self.last();
        (self.dims[n], (0..=n).map(|i| self.transition(i, n)).collect())
    }

    pub fn is_strict(&self) -> bool {
        self.maps.iter().all(Mat::is_injective)
    }

    /// The pro-system of dual spaces, with transposed maps.
    pub fn dual(&self) -> ProWindow {
        ProWindow { field: self.field, dims: self.dims.clone(), maps: self.maps.iter().map(Mat::transpose).collect() }
    }
}

impl ProWindow {
    /// `maps[i]` is `Y_{i+1} -> Y_i`.
    pub fn new(field: PrimeField, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Self> {
        check_chain(field, &dims, &maps, false)?;
        Ok(Self { field, dims, maps })
    }

    pub fn constant(field: PrimeField, d: usize) -> Self {
        Self { field, dims: vec![d], maps: vec![] }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, len: usize, max_dim: usize, rng: &mut R) -> Self {
        IndWindow::random(field, len, max_dim, rng).dual()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn last(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i.min(self.last())]
    }

    /// `Y_{i+1} -> Y_i`.
    pub fn map(&self, i: usize) -> Mat {
        if i < self.last() {
            self.maps[i].clone()
        } else {
            Mat::identity(self.field, self.dim(i))
        }
    }

    /// The composite `Y_j -> Y_i` for `i <= j`.
    pub fn transition(&self, j: usize, i: usize) -> Mat {
        assert!(i <= j, "pro transition runs downward");
        let mut m = Mat::identity(self.field, self.dim(j));
        for k in (i..j.min(self.last())).rev() {
            m = self.maps[k].mul(&m);
        }
        m
    }

    pub fn reindex(&self, phi: &CofinalMap) -> ProWindow {
        self.dual().reindex(phi).dual()
    }

    /// The limit `Y_N` with its cone legs `Y_N -> Y_i`.
    pub fn realize(&self) -> (usize, Vec<Mat>) {
        let n = self.last();
        (self.dims[n], (0..=n).map(|i| self.transition(n, i)).collect())
    }

    pub fn is_strict(&self) -> bool {
        self.maps.iter().all(Mat::is_surjective)
    }

    pub fn dual(&self) -> IndWindow {
        IndWindow { field: self.field, dims: self.dims.clone(), maps: self.maps.iter().map(Mat::transpose).collect() }
    }
}

/// A natural transformation `X -> Y` of ind-windows, constant beyond its stored components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StraightMorphism {
    source: IndWindow,
    target: IndWindow,
    components: Vec<Mat>,
}

impl StraightMorphism {
    /// Needs at least `max(N_X, N_Y) + 1` components.
    pub fn new(source: IndWindow, target: IndWindow, components: Vec<Mat>) -> Result<Self> {
        let need = source.last().max(target.last()) + 1;
        if components.len() < need {
            return Err(Error::Malformed {
                invariant: "components cover both windows",
                location: format!("{} components, need {need}", components.len()),
            });
        }
        for (i, c) in components.iter().enumerate() {
            if (c.rows(), c.cols()) != (target.dim(i), source.dim(i)) {
                return Err(dim_mismatch("StraightMorphism", format!("component {i}")));
            }
        }
        for i in 0..components.len() - 1 {
            if components[i + 1].mul(&source.map(i)) != target.map(i).mul(&components[i]) {
                return Err(Error::Malformed { invariant: "naturality", location: format!("square at {i}") });
            }
        }
        Ok(Self { source, target, components })
    }

    pub fn identity(x: &IndWindow) -> Self {
        let components = (0..=x.last()).map(|i| Mat::identity(x.field, x.dim(i))).collect();
        Self { source: x.clone(), target: x.clone(), components }
    }

    /// A uniformly random natural transformation.
    pub fn random<R: Rng + ?Sized>(source: &IndWindow, target: &IndWindow, rng: &mut R) -> Self {
        let k = source.last().max(target.last());
        let mut sys = MatrixSystem::new(source.field);
        let us: Vec<usize> = (0..=k).map(|i| sys.unknown(target.dim(i), source.dim(i))).collect();
        for i in 0..k {
            let (a, b) = (target.dim(i + 1), source.dim(i));
            sys.equation(
                a,
                b,
                &[
                    Term::new(us[i + 1], Mat::identity(source.field, a), source.map(i)),
                    Term::new(us[i], target.map(i).neg(), Mat::identity(source.field, b)),
                ],
            );
        }
        let components = sys.random_solution(rng);
        Self { source: source.clone(), target: target.clone(), components }
    }

    pub fn source(&self) -> &IndWindow {
        &self.source
    }

    pub fn target(&self) -> &IndWindow {
        &self.target
    }

    pub fn components(&self) -> &[Mat] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Mat {
        &self.components[i.min(self.components.len() - 1)]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &StraightMorphism) -> Result<StraightMorphism> {
        if inner.target != self.source {
            return Err(Error::EndpointMismatch("StraightMorphism::compose"));
        }
        let n = self.components.len().max(inner.components.len());
        let components = (0..n).map(|i| self.component(i).mul(inner.component(i))).collect();
        Ok(StraightMorphism { source: inner.source.clone(), target: self.target.clone(), components })
    }
}

/// Components agree from some index on. With constant tails this is decided at the last stored index.
pub fn sim_equal(f: &StraightMorphism, g: &StraightMorphism) -> Result<bool> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::EndpointMismatch("sim_equal"));
    }
    let k = f.components.len().max(g.components.len()) - 1;
    Ok(f.component(k) == g.component(k))
}

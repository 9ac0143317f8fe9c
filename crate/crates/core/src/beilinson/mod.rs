//! Bifunctors on the index preorder `Π = {(i, j) : i <= j}`, stored on a square window.
//!
//! A [`PiWindow`] on `[lo, hi]` keeps `X(i, j)` for `lo <= i <= j <= hi` together
//! with the elementary maps `e(i, j): X(i, j) -> X(i+1, j)` and
//! `m(i, j): X(i, j) -> X(i, j+1)`. Outside the window the pro direction is
//! constant below `lo` and the ind direction is constant above `hi`.

mod checks;
mod dual;
mod embed;
mod uroof;

use std::collections::BTreeMap;

use crate::error::{dim_mismatch, Error, Result};
use crate::field::PrimeField;
use crate::index::BicofinalMap;
use crate::linalg::{is_ses, Mat, SesTriple};

pub use checks::{charac_roundtrip, elementary_squares, is_admissible, is_kato, Admissibility};
pub use dual::dualize;
pub use embed::{embed_ind_window, embed_object, embed_pro_window};
pub use uroof::{uroof_compose, uroof_equiv, URoof};

/// A point `(i, j)` of the window.
pub type Cell = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiWindow {
    field: PrimeField,
    lo: i64,
    hi: i64,
    dims: BTreeMap<Cell, usize>,
    epis: BTreeMap<Cell, Mat>,
    monos: BTreeMap<Cell, Mat>,
}

fn malformed(invariant: &'static str, location: impl Into<String>) -> Error {
    Error::Malformed { invariant, location: location.into() }
}

/// Cells `(i, j)` with `lo <= i <= j <= hi`, in lexicographic order.
pub fn cells(lo: i64, hi: i64) -> impl Iterator<Item = Cell> {
    (lo..=hi).flat_map(move |i| (i..=hi).map(move |j| (i, j)))
}

impl PiWindow {
    pub fn new(
        field: PrimeField,
        lo: i64,
        hi: i64,
        dims: BTreeMap<Cell, usize>,
        epis: BTreeMap<Cell, Mat>,
        monos: BTreeMap<Cell, Mat>,
    ) -> Result<Self> {
        if lo > hi {
            return Err(malformed("window bounds", format!("lo = {lo} > hi = {hi}")));
        }
        let expected: Vec<Cell> = cells(lo, hi).collect();
        if dims.len() != expected.len() || expected.iter().any(|c| !dims.contains_key(c)) {
            return Err(malformed("one dimension per cell", format!("window [{lo}, {hi}]")));
        }
        for i in lo..=hi {
            if dims[&(i, i)] != 0 {
                return Err(malformed("diagonal cells are zero", format!("({i}, {i})")));
            }
        }
        let epi_keys: Vec<Cell> = expected.iter().copied().filter(|&(i, j)| i < j).collect();
        if epis.len() != epi_keys.len() || epi_keys.iter().any(|c| !epis.contains_key(c)) {
            return Err(malformed("one epi per cell with i < j", format!("window [{lo}, {hi}]")));
        }
        let mono_keys: Vec<Cell> = expected.iter().copied().filter(|&(_, j)| j < hi).collect();
        if monos.len() != mono_keys.len() || mono_keys.iter().any(|c| !monos.contains_key(c)) {
            return Err(malformed("one mono per cell with j < hi", format!("window [{lo}, {hi}]")));
        }
        for (&(i, j), m) in &epis {
            field.check_same(m.field())?;
            if (m.rows(), m.cols()) != (dims[&(i + 1, j)], dims[&(i, j)]) {
                return Err(malformed("epi shape", format!("e:{i},{j}")));
            }
        }
        for (&(i, j), m) in &monos {
            field.check_same(m.field())?;
            if (m.rows(), m.cols()) != (dims[&(i, j + 1)], dims[&(i, j)]) {
                return Err(malformed("mono shape", format!("m:{i},{j}")));
            }
        }
        let x = Self { field, lo, hi, dims, epis, monos };
        for (i, j) in cells(lo, hi) {
            if i < j && j < hi {
                let via_epi = x.monos[&(i + 1, j)].mul(&x.epis[&(i, j)]);
                let via_mono = x.epis[&(i, j + 1)].mul(&x.monos[&(i, j)]);
                if via_epi != via_mono {
                    return Err(malformed("elementary squares commute", format!("square at ({i}, {j})")));
                }
            }
        }
        Ok(x)
    }

    /// Builds a window from cell-wise closures.
    pub fn from_fn(
        field: PrimeField,
        lo: i64,
        hi: i64,
        dim: impl Fn(i64, i64) -> usize,
        mut epi: impl FnMut(i64, i64) -> Mat,
        mut mono: impl FnMut(i64, i64) -> Mat,
    ) -> Result<Self> {
        let dims = cells(lo, hi).map(|(i, j)| ((i, j), dim(i, j))).collect();
        let epis = cells(lo, hi).filter(|&(i, j)| i < j).map(|(i, j)| ((i, j), epi(i, j))).collect();
        let monos = cells(lo, hi).filter(|&(_, j)| j < hi).map(|(i, j)| ((i, j), mono(i, j))).collect();
        Self::new(field, lo, hi, dims, epis, monos)
    }

    /// The window with every cell zero.
    pub fn zero(field: PrimeField, lo: i64, hi: i64) -> Self {
        Self::from_fn(field, lo, hi, |_, _| 0, |_, _| Mat::zero(field, 0, 0), |_, _| Mat::zero(field, 0, 0))
            .expect("zero window is well formed")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dims(&self) -> &BTreeMap<Cell, usize> {
        &self.dims
    }

    pub fn epis(&self) -> &BTreeMap<Cell, Mat> {
        &self.epis
    }

    pub fn monos(&self) -> &BTreeMap<Cell, Mat> {
        &self.monos
    }

    /// The stored cell that `(i, j)` denotes, or `None` for a zero cell.
    fn clamp(&self, i: i64, j: i64) -> Option<Cell> {
        let (a, b) = (i.max(self.lo), j.min(self.hi));
        (a <= b).then_some((a, b))
    }

    /// `dim X(i, j)` for any `i <= j`, following the clamping convention.
    pub fn dim(&self, i: i64, j: i64) -> usize {
        self.clamp(i, j).map_or(0, |c| self.dims[&c])
    }

    /// The stored epi `e(i, j)`.
    pub fn epi(&self, i: i64, j: i64) -> &Mat {
        &self.epis[&(i, j)]
    }

    /// The stored mono `m(i, j)`.
    pub fn mono(&self, i: i64, j: i64) -> &Mat {
        &self.monos[&(i, j)]
    }

    /// The structure map `X(i, j) -> X(k, l)` for `i <= k`, `j <= l`: monos first, then epis.
    pub fn transition(&self, from: Cell, to: Cell) -> Mat {
        let (i, j) = from;
        let (k, l) = to;
        assert!(i <= k && j <= l && k <= l, "transition ({i},{j}) -> ({k},{l}) is not in Π");
        let (src, dst) = match (self.clamp(i, j), self.clamp(k, l)) {
            (Some(s), Some(d)) => (s, d),
            _ => return Mat::zero(self.field, self.dim(k, l), self.dim(i, j)),
        };
        let (a, b) = src;
        let (a2, b2) = dst;
        let mut m = Mat::identity(self.field, self.dims[&src]);
        for t in b..b2 {
            m = self.monos[&(a, t)].mul(&m);
        }
        for t in a..a2 {
            m = self.epis[&(t, b2)].mul(&m);
        }
        m
    }

    /// `X ⊕ Y` on a common window, with block-diagonal maps.
    pub fn direct_sum(&self, other: &PiWindow) -> Result<PiWindow> {
        self.check_bounds(other, "direct_sum")?;
        let block = |a: &Mat, b: &Mat| a.block_diag(b).expect("same field");
        PiWindow::from_fn(
            self.field,
            self.lo,
            self.hi,
            |i, j| self.dims[&(i, j)] + other.dims[&(i, j)],
            |i, j| block(&self.epis[&(i, j)], &other.epis[&(i, j)]),
            |i, j| block(&self.monos[&(i, j)], &other.monos[&(i, j)]),
        )
    }

    /// Changes the basis of every cell: `X'(c) = P(c) X(c)`, maps become `P(c') · x · P(c)^{-1}`.
    pub fn conjugate(&self, p: &BTreeMap<Cell, Mat>) -> Result<PiWindow> {
        let mut inv = BTreeMap::new();
        for c in cells(self.lo, self.hi) {
            let m = p.get(&c).ok_or_else(|| malformed("one change of basis per cell", format!("{c:?}")))?;
            let mi = m
                .inverse()
                .filter(|mi| mi.rows() == self.dims[&c])
                .ok_or_else(|| malformed("change of basis is invertible", format!("{c:?}")))?;
            inv.insert(c, mi);
        }
        PiWindow::from_fn(
            self.field,
            self.lo,
            self.hi,
            |i, j| self.dims[&(i, j)],
            |i, j| p[&(i + 1, j)].mul(&self.epis[&(i, j)]).mul(&inv[&(i, j)]),
            |i, j| p[&(i, j + 1)].mul(&self.monos[&(i, j)]).mul(&inv[&(i, j)]),
        )
    }

    /// The bifunctor on all of `[lo, hi]²`, zero below the diagonal.
    pub fn extend_bifunctor(&self) -> ExtendedView<'_> {
        ExtendedView { window: self }
    }

    pub(crate) fn check_bounds(&self, other: &PiWindow, op: &'static str) -> Result<()> {
        self.field.check_same(other.field)?;
        if (self.lo, self.hi) != (other.lo, other.hi) {
            return Err(dim_mismatch(
                op,
                format!("windows [{}, {}] vs [{}, {}]", self.lo, self.hi, other.lo, other.hi),
            ));
        }
        Ok(())
    }
}

/// `X(i, j)` for every `(i, j)` in the square, with `X(i, j) = X(j, j) = 0` when `i > j`.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedView<'a> {
    window: &'a PiWindow,
}

impl ExtendedView<'_> {
    pub fn dim(&self, i: i64, j: i64) -> usize {
        if i > j {
            0
        } else {
            self.window.dim(i, j)
        }
    }

    /// The induced map `X(i, j) -> X(k, l)` for `i <= k`, `j <= l`.
    pub fn map(&self, from: Cell, to: Cell) -> Mat {
        let (i, j) = from;
        let (k, l) = to;
        assert!(i <= k && j <= l, "extended bifunctor maps run in the product order");
        if i > j || k > l {
            Mat::zero(self.window.field, self.dim(k, l), self.dim(i, j))
        } else {
            self.window.transition(from, to)
        }
    }
}

/// `X · φ̃`, stored on φ's window: `(X·φ̃)(i, j) = X(φ(i), φ(j))`.
pub fn apply_tilde_phi(x: &PiWindow, phi: &BicofinalMap) -> Result<PiWindow> {
    for n in phi.lo()..=phi.hi() {
        let v = phi.eval(n);
        if v < x.lo || v > x.hi {
            return Err(Error::WindowUnderflow(format!("φ({n}) = {v} lies outside [{}, {}]", x.lo, x.hi)));
        }
    }
    let f = |n: i64| phi.eval(n);
    PiWindow::from_fn(
        x.field,
        phi.lo(),
        phi.hi(),
        |i, j| x.dim(f(i), f(j)),
        |i, j| x.transition((f(i), f(j)), (f(i + 1), f(j))),
        |i, j| x.transition((f(i), f(j)), (f(i), f(j + 1))),
    )
}

/// A natural transformation of windows on the same bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiStraightMorphism {
    source: PiWindow,
    target: PiWindow,
    components: BTreeMap<Cell, Mat>,
}

impl PiStraightMorphism {
    pub fn new(source: PiWindow, target: PiWindow, components: BTreeMap<Cell, Mat>) -> Result<Self> {
        source.check_bounds(&target, "PiStraightMorphism")?;
        for c in cells(source.lo, source.hi) {
            let m = components.get(&c).ok_or_else(|| malformed("one component per cell", format!("{c:?}")))?;
            if (m.rows(), m.cols()) != (target.dims[&c], source.dims[&c]) {
                return Err(malformed("component shape", format!("{c:?}")));
            }
        }
        for (&(i, j), e) in &source.epis {
            if components[&(i + 1, j)].mul(e) != target.epis[&(i, j)].mul(&components[&(i, j)]) {
                return Err(malformed("naturality", format!("e:{i},{j}")));
            }
        }
        for (&(i, j), m) in &source.monos {
            if components[&(i, j + 1)].mul(m) != target.monos[&(i, j)].mul(&components[&(i, j)]) {
                return Err(malformed("naturality", format!("m:{i},{j}")));
            }
        }
        Ok(Self { source, target, components })
    }

    pub fn identity(x: &PiWindow) -> Self {
        let components = cells(x.lo, x.hi).map(|c| (c, Mat::identity(x.field, x.dims[&c]))).collect();
        Self { source: x.clone(), target: x.clone(), components }
    }

    pub fn source(&self) -> &PiWindow {
        &self.source
    }

    pub fn target(&self) -> &PiWindow {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<Cell, Mat> {
        &self.components
    }

    pub fn component(&self, c: Cell) -> &Mat {
        &self.components[&c]
    }
}

/// `X ↪ Y ↠ Z`, short exact in every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiSes {
    mono: PiStraightMorphism,
    epi: PiStraightMorphism,
}

impl PiSes {
    pub fn new(mono: PiStraightMorphism, epi: PiStraightMorphism) -> Result<Self> {
        if mono.target != epi.source {
            return Err(Error::EndpointMismatch("PiSes"));
        }
        for (c, m) in &mono.components {
            let t = SesTriple::new(m.clone(), epi.components[c].clone());
            if !is_ses(&t)? {
                return Err(malformed("cell sequence is short exact", format!("{c:?}")));
            }
        }
        Ok(Self { mono, epi })
    }

    pub fn mono(&self) -> &PiStraightMorphism {
        &self.mono
    }

    pub fn epi(&self) -> &PiStraightMorphism {
        &self.epi
    }
}

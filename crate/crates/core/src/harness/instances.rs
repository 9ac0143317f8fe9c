//! Finite instances of the closure statements and their decision procedures.
//!
//! Each `*_check` first validates the hypotheses of its instance and reports a
//! violated hypothesis as [`Error::Precondition`], distinct from a failed conclusion.

use crate::error::{Error, Result};
use crate::index::{psi_of, CofinalMap};
use crate::linalg::{is_cartesian, is_ses, Mat, SesTriple, Square};
use crate::window::{sim_equal, IndWindow, StraightMorphism};

/// Squares `S' ↪ S ↠ S''`, with one short exact sequence per corner.
///
/// Corners are ordered `tl, tr, bl, br`; arrows `top, left, right, bottom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSquaresInstance {
    pub primed: Square,
    pub middle: Square,
    pub double_primed: Square,
    pub monos: Vec<Mat>,
    pub epis: Vec<Mat>,
}

const CORNERS: [&str; 4] = ["tl", "tr", "bl", "br"];
const ARROWS: [(&str, usize, usize); 4] = [("top", 0, 1), ("left", 0, 2), ("right", 1, 3), ("bottom", 2, 3)];

fn arrow(sq: &Square, k: usize) -> &Mat {
    [&sq.top, &sq.left, &sq.right, &sq.bottom][k]
}

fn pre(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

impl ThreeSquaresInstance {
    pub fn validate(&self) -> Result<()> {
        if self.monos.len() != 4 || self.epis.len() != 4 {
            return Err(pre("one mono and one epi per corner"));
        }
        for (name, sq) in [("primed", &self.primed), ("middle", &self.middle), ("double_primed", &self.double_primed)] {
            sq.check_shape()?;
            if !sq.commutes()? {
                return Err(pre(format!("{name} square commutes")));
            }
            if !sq.is_admissible()? {
                return Err(pre(format!("{name} square is admissible")));
            }
        }
        if !is_cartesian(&self.primed)? {
            return Err(pre("primed square is cartesian"));
        }
        if !is_cartesian(&self.double_primed)? {
            return Err(pre("double_primed square is cartesian"));
        }
        let (p, m, d) = (self.primed.corner_dims(), self.middle.corner_dims(), self.double_primed.corner_dims());
        let dims = |t: (usize, usize, usize, usize)| [t.0, t.1, t.2, t.3];
        let (p, m, d) = (dims(p), dims(m), dims(d));
        for v in 0..4 {
            let (mono, epi) = (&self.monos[v], &self.epis[v]);
            if (mono.rows(), mono.cols(), epi.rows(), epi.cols()) != (m[v], p[v], d[v], m[v]) {
                return Err(pre(format!("corner sequence shape at {}", CORNERS[v])));
            }
            if !is_ses(&SesTriple::new(mono.clone(), epi.clone()))? {
                return Err(pre(format!("corner sequence is short exact at {}", CORNERS[v])));
            }
        }
        for (k, &(name, s, t)) in ARROWS.iter().enumerate() {
            if arrow(&self.middle, k).mul(&self.monos[s]) != self.monos[t].mul(arrow(&self.primed, k)) {
                return Err(pre(format!("monos are natural along {name}")));
            }
            if self.epis[t].mul(arrow(&self.middle, k)) != arrow(&self.double_primed, k).mul(&self.epis[s]) {
                return Err(pre(format!("epis are natural along {name}")));
            }
        }
        Ok(())
    }
}

/// Whether the middle square of a valid instance is cartesian.
pub fn three_squares_check(inst: &ThreeSquaresInstance) -> Result<bool> {
    inst.validate()?;
    is_cartesian(&inst.middle)
}

/// A commutative 3x3 grid. `rows[r] = [a, b]` with `a: (r, 0) -> (r, 1)`,
/// `b: (r, 1) -> (r, 2)`; `cols[c] = [a, b]` with `a: (0, c) -> (1, c)`, `b: (1, c) -> (2, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid3x3 {
    pub rows: [[Mat; 2]; 3],
    pub cols: [[Mat; 2]; 3],
}

impl Grid3x3 {
    pub fn validate(&self) -> Result<()> {
        for r in 0..3 {
            for c in 0..3 {
                let (h, v) = (&self.rows[r], &self.cols[c]);
                let dim_h = if c == 0 { h[0].cols() } else { h[c - 1].rows() };
                let dim_v = if r == 0 { v[0].cols() } else { v[r - 1].rows() };
                if dim_h != dim_v || (c == 1 && h[0].rows() != h[1].cols()) || (r == 1 && v[0].rows() != v[1].cols()) {
                    return Err(pre(format!("grid shape at ({r}, {c})")));
                }
            }
        }
        for r in [0, 2] {
            if !is_ses(&SesTriple::new(self.rows[r][0].clone(), self.rows[r][1].clone()))? {
                return Err(pre(format!("row {r} is short exact")));
            }
        }
        for c in 0..3 {
            if !is_ses(&SesTriple::new(self.cols[c][0].clone(), self.cols[c][1].clone()))? {
                return Err(pre(format!("column {c} is short exact")));
            }
        }
        for r in 0..2 {
            for c in 0..2 {
                if self.rows[r + 1][c].mul(&self.cols[c][r]) != self.cols[c + 1][r].mul(&self.rows[r][c]) {
                    return Err(pre(format!("grid commutes at ({r}, {c})")));
                }
            }
        }
        if !self.rows[1][1].mul(&self.rows[1][0]).is_zero() {
            return Err(pre("middle row composes to zero"));
        }
        Ok(())
    }
}

/// Whether the middle row of a valid grid is short exact.
pub fn middle_3x3_check(grid: &Grid3x3) -> Result<bool> {
    grid.validate()?;
    is_ses(&SesTriple::new(grid.rows[1][0].clone(), grid.rows[1][1].clone()))
}

/// Straight `f, g : X -> Y` and `φ >= id` with `s·f = s·g`, where `s: Y -> Y·φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizingInstance {
    pub x: IndWindow,
    pub y: IndWindow,
    pub f: StraightMorphism,
    pub g: StraightMorphism,
    pub phi: CofinalMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalizingVerdict {
    /// `s` commutes past `f` through the reindexing of `X`.
    pub axiom_b: bool,
    /// `f·t = g·t` pointwise from `φ(0)` on, and up to equivalence.
    pub axiom_c: bool,
}

impl LocalizingVerdict {
    pub fn passed(self) -> bool {
        self.axiom_b && self.axiom_c
    }
}

impl LocalizingInstance {
    fn horizon(&self) -> usize {
        self.x
            .last()
            .max(self.y.last())
            .max(self.phi.last_index())
            .max(self.f.components().len())
            .max(self.g.components().len())
            + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.f.source() != &self.x || self.g.source() != &self.x {
            return Err(pre("f and g start at X"));
        }
        if self.f.target() != &self.y || self.g.target() != &self.y {
            return Err(pre("f and g end at Y"));
        }
        if !CofinalMap::identity().leq(&self.phi) {
            return Err(pre("phi is above the identity"));
        }
        for i in 0..=self.horizon() {
            let s = self.y.transition(i, self.phi.eval(i));
            if s.mul(self.f.component(i)) != s.mul(self.g.component(i)) {
                return Err(pre(format!("s·f = s·g at {i}")));
            }
        }
        Ok(())
    }
}

/// Decides both localizing axioms on a valid instance.
pub fn localizing_check(inst: &LocalizingInstance) -> Result<LocalizingVerdict> {
    inst.validate()?;
    let (x, y, f, g, phi) = (&inst.x, &inst.y, &inst.f, &inst.g, &inst.phi);
    let k = inst.horizon();

    let axiom_b = (0..=k).all(|i| {
        let t = phi.eval(i);
        y.transition(i, t).mul(f.component(i)) == f.component(t).mul(&x.transition(i, t))
    });

    let psi = psi_of(phi, k)?;
    let mut top = k.max(phi.eval(k)).max(x.last());
    while psi.eval(top) < x.last() {
        top += 1;
    }
    let through = |h: &StraightMorphism, j: usize| h.component(j).mul(&x.transition(psi.eval(j), j));
    let pointwise = (phi.eval(0)..=top).all(|j| through(f, j) == through(g, j));
    let x_psi = x.reindex(&psi);
    let top = top.max(x_psi.last());
    let build = |h: &StraightMorphism| {
        StraightMorphism::new(x_psi.clone(), y.clone(), (0..=top).map(|j| through(h, j)).collect())
    };
    let (ft, gt) = (build(f)?, build(g)?);
    let axiom_c = pointwise && sim_equal(&ft, &gt)?;
    Ok(LocalizingVerdict { axiom_b, axiom_c })
}

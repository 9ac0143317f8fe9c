//! Random extensions of finite diagrams of vector spaces.
//!
//! Given diagrams `D'` and `D''` of the same shape, every extension
//! `D' ↪ D ↠ D''` is, after choosing vertex-wise splittings, of the form
//! `D_v = D'_v ⊕ D''_v` with arrows `[[a', c_a], [0, a'']]`. The relations of the
//! shape are linear in the off-diagonal blocks `c_a`, so a uniformly random
//! solution followed by a random change of basis at each vertex samples all of them.

use rand::Rng;

use crate::field::PrimeField;
use crate::linalg::system::{MatrixSystem, Term};
use crate::linalg::Mat;

#[derive(Debug, Clone)]
pub(crate) struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub map: Mat,
}

#[derive(Debug, Clone)]
pub(crate) struct Quiver {
    pub dims: Vec<usize>,
    pub arrows: Vec<Arrow>,
}

/// Paths list arrow indices in the order they are applied.
#[derive(Debug, Clone)]
pub(crate) enum Relation {
    Commutes(Vec<usize>, Vec<usize>),
    Vanishes(Vec<usize>),
}

#[derive(Debug, Clone)]
pub(crate) struct Extension {
    pub total: Quiver,
    /// `D'_v -> D_v`.
    pub monos: Vec<Mat>,
    /// `D_v -> D''_v`.
    pub epis: Vec<Mat>,
}

impl Quiver {
    fn field(&self) -> PrimeField {
        self.arrows.first().map(|a| a.map.field()).expect("quivers used here have arrows")
    }

    fn path(&self, path: &[usize], start: usize) -> Mat {
        let f = self.field();
        path.iter().fold(Mat::identity(f, self.dims[start]), |acc, &a| self.arrows[a].map.mul(&acc))
    }

    #[cfg(test)]
    pub fn holds(&self, rel: &Relation) -> bool {
        match rel {
            Relation::Commutes(p, q) => {
                let s = self.arrows[p[0]].src;
                self.path(p, s) == self.path(q, s)
            }
            Relation::Vanishes(p) => self.path(p, self.arrows[p[0]].src).is_zero(),
        }
    }
}

/// Upper-right block of the composite along `path`, as terms in the unknowns.
fn path_terms(sub: &Quiver, quot: &Quiver, unknowns: &[usize], path: &[usize], negate: bool) -> Vec<Term> {
    let f = sub.field();
    let start = sub.arrows[path[0]].src;
    let end = sub.arrows[path[path.len() - 1]].dst;
    (0..path.len())
        .map(|t| {
            let a = path[t];
            let after = path[t + 1..]
                .iter()
                .fold(Mat::identity(f, sub.dims[sub.arrows[a].dst]), |acc, &b| sub.arrows[b].map.mul(&acc));
            let before = quot.path(&path[..t], start);
            debug_assert_eq!(after.rows(), sub.dims[end]);
            Term::new(unknowns[a], if negate { after.neg() } else { after }, before)
        })
        .collect()
}

/// A random extension of `quot` by `sub` satisfying `relations`, presented in random bases.
pub(crate) fn extend<R: Rng + ?Sized>(sub: &Quiver, quot: &Quiver, relations: &[Relation], rng: &mut R) -> Extension {
    let f = sub.field();
    let mut sys = MatrixSystem::new(f);
    let unknowns: Vec<usize> = sub.arrows.iter().map(|a| sys.unknown(sub.dims[a.dst], quot.dims[a.src])).collect();
    for rel in relations {
        let (terms, start, end) = match rel {
            Relation::Commutes(p, q) => {
                let mut t = path_terms(sub, quot, &unknowns, p, false);
                t.extend(path_terms(sub, quot, &unknowns, q, true));
                (t, sub.arrows[p[0]].src, sub.arrows[p[p.len() - 1]].dst)
            }
            Relation::Vanishes(p) => {
                (path_terms(sub, quot, &unknowns, p, false), sub.arrows[p[0]].src, sub.arrows[p[p.len() - 1]].dst)
            }
        };
        sys.equation(sub.dims[end], quot.dims[start], &terms);
    }
    let c = sys.random_solution(rng);

    let dims: Vec<usize> = sub.dims.iter().zip(&quot.dims).map(|(a, b)| a + b).collect();
    let bases: Vec<Mat> = dims.iter().map(|&d| Mat::random_invertible(f, d, rng)).collect();
    let inverses: Vec<Mat> = bases.iter().map(|b| b.inverse().expect("invertible")).collect();
    let arrows = sub
        .arrows
        .iter()
        .zip(&quot.arrows)
        .zip(&c)
        .map(|((a1, a2), ca)| {
            let upper = a1.map.hstack(ca).expect("block shapes");
            let lower = Mat::zero(f, a2.map.rows(), a1.map.cols()).hstack(&a2.map).expect("block shapes");
            let block = upper.vstack(&lower).expect("block shapes");
            Arrow { src: a1.src, dst: a1.dst, map: bases[a1.dst].mul(&block).mul(&inverses[a1.src]) }
        })
        .collect();
    let monos = (0..dims.len())
        .map(|v| {
            let incl = Mat::identity(f, sub.dims[v]).vstack(&Mat::zero(f, quot.dims[v], sub.dims[v])).expect("shapes");
            bases[v].mul(&incl)
        })
        .collect();
    let epis = (0..dims.len())
        .map(|v| {
            let proj = Mat::zero(f, quot.dims[v], sub.dims[v]).hstack(&Mat::identity(f, quot.dims[v])).expect("shapes");
            proj.mul(&inverses[v])
        })
        .collect();
    Extension { total: Quiver { dims, arrows }, monos, epis }
}

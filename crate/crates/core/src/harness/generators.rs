//! Random instances for the harness checks.

use std::collections::BTreeMap;

use rand::Rng;

use crate::beilinson::{cells, elementary_squares, is_kato, Cell, PiSes, PiStraightMorphism, PiWindow};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::index::CofinalMap;
use crate::linalg::system::{MatrixSystem, Term};
use crate::linalg::{pullback, Mat, SesTriple, Square};
use crate::window::{IndWindow, StraightMorphism};

use super::diagram::{extend, Arrow, Quiver, Relation};
use super::instances::{Grid3x3, LocalizingInstance, ThreeSquaresInstance};

fn inclusion(f: PrimeField, a: usize, b: usize) -> Mat {
    Mat::identity(f, a).vstack(&Mat::zero(f, b, a)).expect("same field")
}

fn projection(f: PrimeField, a: usize, b: usize) -> Mat {
    Mat::zero(f, b, a).hstack(&Mat::identity(f, b)).expect("same field")
}

/// `A ↪ A ⊕ B ↠ B` written in a random basis of the middle term.
pub fn random_ses<R: Rng + ?Sized>(field: PrimeField, max_dim: usize, rng: &mut R) -> SesTriple {
    let a = rng.gen_range(0..=max_dim);
    let b = rng.gen_range(0..=max_dim - a);
    let p = Mat::random_invertible(field, a + b, rng);
    let q = p.inverse().expect("invertible");
    SesTriple::new(p.mul(&inclusion(field, a, b)), projection(field, a, b).mul(&q))
}

fn conjugate_square<R: Rng + ?Sized>(sq: &Square, rng: &mut R) -> Square {
    let f = sq.top.field();
    let (a, b, c, d) = sq.corner_dims();
    let p: Vec<Mat> = [a, b, c, d].iter().map(|&n| Mat::random_invertible(f, n, rng)).collect();
    let q: Vec<Mat> = p.iter().map(|m| m.inverse().expect("invertible")).collect();
    Square::new(
        p[1].mul(&sq.top).mul(&q[0]),
        p[2].mul(&sq.left).mul(&q[0]),
        p[3].mul(&sq.right).mul(&q[1]),
        p[3].mul(&sq.bottom).mul(&q[2]),
    )
}

/// An admissible cartesian square: `K ⊕ Q ↪ K ⊕ Q ⊕ C`, `Q ↪ Q ⊕ C` with the
/// projections killing `K`, in random bases at every corner.
pub fn random_cartesian_square<R: Rng + ?Sized>(field: PrimeField, max_dim: usize, rng: &mut R) -> Square {
    let k = rng.gen_range(0..=max_dim);
    let q = rng.gen_range(0..=max_dim - k);
    let c = rng.gen_range(0..=max_dim - k - q);
    let f = field;
    let top = inclusion(f, k + q, c);
    let left = projection(f, k, q);
    let right = projection(f, k, q + c);
    let bottom = inclusion(f, q, c);
    conjugate_square(&Square::new(top, left, right, bottom), rng)
}

/// An admissible square that is cartesian about half of the time.
///
/// Any admissible square is the pullback `P` of its lower cospan restricted to
/// a subspace `S ⊆ P` that still covers the bottom-left corner; `S` is drawn as
/// a section of `P -> bl` plus a random part of `ker(right)`.
pub fn random_admissible_square<R: Rng + ?Sized>(field: PrimeField, max_dim: usize, rng: &mut R) -> Square {
    let f = field;
    let br = rng.gen_range(0..=max_dim);
    let tr = rng.gen_range(br..=max_dim.max(br));
    let bl = rng.gen_range(0..=br);
    let right = loop {
        let m = Mat::random(f, br, tr, rng);
        if m.is_surjective() {
            break m;
        }
    };
    let bottom = loop {
        let m = Mat::random(f, br, bl, rng);
        if m.is_injective() {
            break m;
        }
    };
    let pb = pullback(&right, &bottom).expect("cospan shapes");
    let kernel_part = crate::linalg::kernel(&pb.to_d).basis().clone();
    let section = pb.to_d.solve(&Mat::identity(f, bl)).expect("P -> bl is onto");
    let keep = if rng.gen_bool(0.5) { kernel_part.cols() } else { rng.gen_range(0..=kernel_part.cols()) };
    let mixing = Mat::random(f, kernel_part.cols(), keep, rng);
    let sub = section.hstack(&kernel_part.mul(&mixing)).expect("same field");
    let basis = crate::linalg::image(&sub).basis().clone();
    let sq = Square::new(pb.to_b.mul(&basis), pb.to_d.mul(&basis), right, bottom);
    conjugate_square(&sq, rng)
}

fn square_quiver(sq: &Square) -> Quiver {
    let (a, b, c, d) = sq.corner_dims();
    Quiver {
        dims: vec![a, b, c, d],
        arrows: vec![
            Arrow { src: 0, dst: 1, map: sq.top.clone() },
            Arrow { src: 0, dst: 2, map: sq.left.clone() },
            Arrow { src: 1, dst: 3, map: sq.right.clone() },
            Arrow { src: 2, dst: 3, map: sq.bottom.clone() },
        ],
    }
}

/// A random extension `primed ↪ middle ↠ double_primed` of two admissible cartesian squares.
pub fn random_three_squares<R: Rng + ?Sized>(field: PrimeField, max_dim: usize, rng: &mut R) -> ThreeSquaresInstance {
    let half = (max_dim / 2).max(1);
    let primed = random_cartesian_square(field, half, rng);
    let double_primed = random_cartesian_square(field, half, rng);
    let rel = [Relation::Commutes(vec![0, 2], vec![1, 3])];
    let e = extend(&square_quiver(&primed), &square_quiver(&double_primed), &rel, rng);
    let m = |k: usize| e.total.arrows[k].map.clone();
    ThreeSquaresInstance {
        primed,
        middle: Square::new(m(0), m(1), m(2), m(3)),
        double_primed,
        monos: e.monos,
        epis: e.epis,
    }
}

/// Two short exact rows with short exact columns between them; the middle row
/// is a random complex extending the bottom row by the top one.
pub fn random_grid<R: Rng + ?Sized>(field: PrimeField, max_dim: usize, rng: &mut R) -> Grid3x3 {
    let half = (max_dim / 2).max(1);
    let row = |rng: &mut R| {
        let t = random_ses(field, half, rng);
        Quiver {
            dims: vec![t.mono.cols(), t.mono.rows(), t.epi.rows()],
            arrows: vec![Arrow { src: 0, dst: 1, map: t.mono }, Arrow { src: 1, dst: 2, map: t.epi }],
        }
    };
    let top = row(rng);
    let bottom = row(rng);
    let e = extend(&top, &bottom, &[Relation::Vanishes(vec![0, 1])], rng);
    let pair = |q: &Quiver| [q.arrows[0].map.clone(), q.arrows[1].map.clone()];
    Grid3x3 {
        rows: [pair(&top), pair(&e.total), pair(&bottom)],
        cols: std::array::from_fn(|c| [e.monos[c].clone(), e.epis[c].clone()]),
    }
}

fn window_quiver(x: &PiWindow, index: &BTreeMap<Cell, usize>) -> Quiver {
    let dims = index.keys().map(|&(i, j)| x.dim(i, j)).collect();
    let mut arrows = Vec::new();
    for (&(i, j), m) in x.epis() {
        arrows.push(Arrow { src: index[&(i, j)], dst: index[&(i + 1, j)], map: m.clone() });
    }
    for (&(i, j), m) in x.monos() {
        arrows.push(Arrow { src: index[&(i, j)], dst: index[&(i, j + 1)], map: m.clone() });
    }
    Quiver { dims, arrows }
}

/// A random extension `X ↪ Y ↠ Z` of locally compact windows on the same bounds,
/// drawn from all extensions in the cell-wise split presentation.
pub fn random_extension<R: Rng + ?Sized>(x: &PiWindow, z: &PiWindow, rng: &mut R) -> Result<PiSes> {
    x.check_bounds(z, "random_extension")?;
    if !is_kato(x) || !is_kato(z) {
        return Err(Error::Precondition("random_extension needs locally compact ends".into()));
    }
    let f = x.field();
    let (lo, hi) = (x.lo(), x.hi());
    let mut sorted: Vec<Cell> = cells(lo, hi).collect();
    sorted.sort_unstable();
    let index: BTreeMap<Cell, usize> = sorted.into_iter().enumerate().map(|(k, c)| (c, k)).collect();
    let (total_dims, total_maps, monos, epis) = if lo == hi {
        (vec![0], Vec::new(), vec![Mat::zero(f, 0, 0)], vec![Mat::zero(f, 0, 0)])
    } else {
        let qx = window_quiver(x, &index);
        let qz = window_quiver(z, &index);
        let n_epi = x.epis().len();
        let mono_at: BTreeMap<Cell, usize> = x.monos().keys().enumerate().map(|(k, &c)| (c, n_epi + k)).collect();
        let epi_at: BTreeMap<Cell, usize> = x.epis().keys().enumerate().map(|(k, &c)| (c, k)).collect();
        let rels: Vec<Relation> = elementary_squares(x)
            .into_iter()
            .map(|((i, j), _)| {
                Relation::Commutes(
                    vec![mono_at[&(i, j)], epi_at[&(i, j + 1)]],
                    vec![epi_at[&(i, j)], mono_at[&(i + 1, j)]],
                )
            })
            .collect();
        let e = extend(&qx, &qz, &rels, rng);
        let maps = e.total.arrows.into_iter().map(|a| a.map).collect();
        (e.total.dims, maps, e.monos, e.epis)
    };
    let keys: Vec<Cell> = index.keys().copied().collect();
    let dims = keys.iter().map(|&c| (c, total_dims[index[&c]])).collect();
    let n_epi = x.epis().len();
    let epi_maps = x.epis().keys().zip(&total_maps[..n_epi]).map(|(&c, m)| (c, m.clone())).collect();
    let mono_maps = x.monos().keys().zip(&total_maps[n_epi..]).map(|(&c, m)| (c, m.clone())).collect();
    let y = PiWindow::new(f, lo, hi, dims, epi_maps, mono_maps)?;
    let per_cell = |ms: &[Mat]| keys.iter().map(|&c| (c, ms[index[&c]].clone())).collect();
    let mono = PiStraightMorphism::new(x.clone(), y.clone(), per_cell(&monos))?;
    let epi = PiStraightMorphism::new(y, z.clone(), per_cell(&epis))?;
    PiSes::new(mono, epi)
}

fn random_cofinal_above_identity<R: Rng + ?Sized>(last: usize, rng: &mut R) -> CofinalMap {
    let mut prev = 0;
    CofinalMap::from_fn(last, |i| {
        let v = (i + rng.gen_range(0..=2)).max(prev);
        prev = v;
        v
    })
}

/// `f, g : X -> Y` straight, `φ ≥ id`, with `Y(i -> φ(i))·f_i = Y(i -> φ(i))·g_i` for all `i`.
///
/// `g - f` is a uniformly random natural transformation killed by `s`.
pub fn random_localizing<R: Rng + ?Sized>(
    field: PrimeField,
    max_len: usize,
    max_dim: usize,
    rng: &mut R,
) -> LocalizingInstance {
    let x = IndWindow::random(field, rng.gen_range(1..=max_len), max_dim, rng);
    let y = IndWindow::random(field, rng.gen_range(1..=max_len), max_dim, rng);
    let phi = random_cofinal_above_identity(rng.gen_range(0..=max_len), rng);
    let f = StraightMorphism::random(&x, &y, rng);

    let k = x.last().max(y.last());
    let mut sys = MatrixSystem::new(field);
    let us: Vec<usize> = (0..=k).map(|i| sys.unknown(y.dim(i), x.dim(i))).collect();
    for i in 0..k {
        let (a, b) = (y.dim(i + 1), x.dim(i));
        sys.equation(
            a,
            b,
            &[
                Term::new(us[i + 1], Mat::identity(field, a), x.map(i)),
                Term::new(us[i], y.map(i).neg(), Mat::identity(field, b)),
            ],
        );
    }
    for (i, &u) in us.iter().enumerate().take(k + 1) {
        let s = y.transition(i, phi.eval(i));
        sys.equation(s.rows(), x.dim(i), &[Term::new(u, s, Mat::identity(field, x.dim(i)))]);
    }
    let h = sys.random_solution(rng);
    let g_comps = (0..=k).map(|i| f.component(i).add(&h[i]).expect("same shape")).collect();
    let g = StraightMorphism::new(x.clone(), y.clone(), g_comps).expect("natural by construction");
    LocalizingInstance { x, y, f, g, phi }
}

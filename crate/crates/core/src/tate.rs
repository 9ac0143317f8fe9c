//! Laurent-series windows and random locally compact windows.
//!
//! `laurent_window(lo, hi)` stores `X(i, j) = t^{-j} k[[t]] / t^{-i} k[[t]]`
//! in the ordered basis `t^{-j}, …, t^{-i-1}` (deep to shallow).

use std::collections::BTreeMap;

use rand::Rng;

use crate::beilinson::{apply_tilde_phi, cells, embed_ind_window, embed_pro_window, PiWindow, URoof};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::index::BicofinalMap;
use crate::linalg::Mat;
use crate::window::IndWindow;

/// The lattice quotients of `k((t))` on `[lo, hi]`.
pub fn laurent_window(field: PrimeField, lo: i64, hi: i64) -> Result<PiWindow> {
    if lo > hi {
        return Err(Error::Precondition(format!("laurent window needs lo <= hi, got [{lo}, {hi}]")));
    }
    let d = |i: i64, j: i64| (j - i) as usize;
    PiWindow::from_fn(
        field,
        lo,
        hi,
        d,
        |i, j| {
            // Drop the shallowest coordinate t^{-i-1}.
            let n = d(i, j);
            Mat::identity(field, n).submatrix(0..n - 1, 0..n)
        },
        |i, j| {
            // Prepend the new deepest coordinate t^{-j-1}.
            let n = d(i, j);
            Mat::zero(field, 1, n).vstack(&Mat::identity(field, n)).expect("same field")
        },
    )
}

/// Multiplication by `t^{-n}`: the coordinate identification
/// `laurent(lo, hi) -> laurent(lo + n, hi + n)` over `φ(k) = k + n`.
pub fn shift_lattice(x: &PiWindow, n: i64) -> Result<URoof> {
    let (lo, hi) = (x.lo(), x.hi());
    if *x != laurent_window(x.field(), lo, hi)? {
        return Err(Error::Precondition("shift_lattice needs a Laurent window".into()));
    }
    let (tlo, thi) = match (lo.checked_add(n), hi.checked_add(n)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::WindowUnderflow(format!("[{lo}, {hi}] shifted by {n}"))),
    };
    let target = laurent_window(x.field(), tlo, thi)?;
    let components = cells(lo, hi).map(|(i, j)| ((i, j), Mat::identity(x.field(), x.dim(i, j)))).collect();
    URoof::new(x.clone(), target, BicofinalMap::shift_on(lo, hi, n), lo, hi, components)
}

/// Rewrites every cell in the reversed basis.
pub fn reverse_bases(x: &PiWindow) -> PiWindow {
    let p: BTreeMap<_, _> =
        cells(x.lo(), x.hi()).map(|(i, j)| ((i, j), Mat::reversal(x.field(), x.dim(i, j)))).collect();
    x.conjugate(&p).expect("reversals are invertible")
}

/// A random strict ind-system: nondecreasing dimensions, injective maps.
pub fn random_strict_ind<R: Rng + ?Sized>(
    field: PrimeField,
    len: usize,
    max_dim: usize,
    start_at_zero: bool,
    rng: &mut R,
) -> IndWindow {
    let mut dims = vec![if start_at_zero { 0 } else { rng.gen_range(0..=max_dim.min(2)) }];
    for _ in 1..len.max(1) {
        let last = *dims.last().unwrap();
        dims.push((last + rng.gen_range(0..=2)).min(max_dim).max(last));
    }
    let maps = dims
        .windows(2)
        .map(|w| loop {
            let m = Mat::random(field, w[1], w[0], rng);
            if m.is_injective() {
                break m;
            }
        })
        .collect();
    IndWindow::new(field, dims, maps).expect("shapes follow dims")
}

fn random_monotone<R: Rng + ?Sized>(lo: i64, hi: i64, a: i64, b: i64, rng: &mut R) -> BicofinalMap {
    let mut v = rng.gen_range(a..=b);
    let values = (lo..=hi)
        .map(|_| {
            let out = v;
            v = (v + rng.gen_range(0..=2)).min(b);
            out
        })
        .collect();
    BicofinalMap::from_window(lo, values)
}

fn max_cell_dim(x: &PiWindow) -> usize {
    x.dims().values().copied().max().unwrap_or(0)
}

/// A conjugated direct sum of reindexed Laurent windows and embedded strict
/// ind- and pro-systems, with every cell of dimension at most `max_dim`.
pub fn random_kato_window<R: Rng + ?Sized>(
    field: PrimeField,
    lo: i64,
    hi: i64,
    max_dim: usize,
    rng: &mut R,
) -> Result<PiWindow> {
    if lo > hi {
        return Err(Error::Precondition(format!("random_kato_window needs lo <= hi, got [{lo}, {hi}]")));
    }
    let span = (hi - lo) as usize;
    let mut acc = PiWindow::zero(field, lo, hi);
    for _ in 0..rng.gen_range(1..=3) {
        let base = match rng.gen_range(0..3) {
            0 => laurent_window(field, lo, hi)?,
            1 => embed_ind_window(&random_strict_ind(field, span + 1, max_dim, false, rng))?,
            _ => embed_pro_window(&random_strict_ind(field, span + 1, max_dim, false, rng).dual())?,
        };
        let phi = random_monotone(lo, hi, base.lo(), base.hi(), rng);
        let block = apply_tilde_phi(&base, &phi)?;
        let sum = acc.direct_sum(&block)?;
        if max_cell_dim(&sum) <= max_dim {
            acc = sum;
        }
    }
    let p: BTreeMap<_, _> =
        cells(lo, hi).map(|(i, j)| ((i, j), Mat::random_invertible(field, acc.dim(i, j), rng))).collect();
    acc.conjugate(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beilinson::{charac_roundtrip, dualize, is_admissible, is_kato, uroof_compose, uroof_equiv};
    use crate::linalg::{is_ses, SesTriple};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn laurent_dimensions() {
        let f = PrimeField::new(2).unwrap();
        let x = laurent_window(f, 0, 0).unwrap();
        assert_eq!(x.dims().len(), 1);
        assert_eq!(x.dim(0, 0), 0);
        let x = laurent_window(f, -2, 2).unwrap();
        assert_eq!(x.dim(-2, 2), 4);
        assert!(laurent_window(f, 1, 0).is_err());
        for i in -2..=2 {
            for j in i..=2 {
                for k in j..=2 {
                    let t = SesTriple::new(x.transition((i, j), (i, k)), x.transition((i, k), (j, k)));
                    assert!(is_ses(&t).unwrap());
                    assert_eq!(x.dim(i, j) + x.dim(j, k), x.dim(i, k));
                }
            }
        }
    }

    #[test]
    fn laurent_is_kato_for_small_primes() {
        for p in [2, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            for span in 0..=5 {
                let x = laurent_window(f, -1, span - 1).unwrap();
                assert!(is_admissible(&x).ok);
                assert!(is_kato(&x));
                assert!(charac_roundtrip(&x).unwrap());
            }
        }
    }

    #[test]
    fn duality_is_basis_reversal() {
        let f = PrimeField::new(3).unwrap();
        for (lo, hi) in [(0, 0), (-2, 3), (1, 6)] {
            let d = dualize(&laurent_window(f, lo, hi).unwrap());
            assert_eq!(reverse_bases(&d), laurent_window(f, -hi, -lo).unwrap());
        }
    }

    #[test]
    fn lattice_shifts() {
        let f = PrimeField::new(5).unwrap();
        let x = laurent_window(f, -2, 2).unwrap();
        let zero = shift_lattice(&x, 0).unwrap();
        assert!(uroof_equiv(&zero, &URoof::identity(&x)).unwrap());
        let up = shift_lattice(&x, 1).unwrap();
        assert_eq!(up.target().dim(-1, 3), x.dim(-2, 2));
        assert!(up.component(0, 2).is_invertible());
        let back = shift_lattice(up.target(), -1).unwrap();
        assert!(uroof_equiv(&uroof_compose(&back, &up).unwrap(), &URoof::identity(&x)).unwrap());
        assert!(shift_lattice(&PiWindow::zero(f, 0, 2), 1).is_err());
        assert!(matches!(shift_lattice(&laurent_window(f, 0, 1).unwrap(), i64::MAX), Err(Error::WindowUnderflow(_))));
    }

    #[test]
    fn shift_reindexing_translates() {
        let f = PrimeField::new(2).unwrap();
        let x = laurent_window(f, -3, 3).unwrap();
        let y = apply_tilde_phi(&x, &BicofinalMap::shift_on(-5, 1, 2)).unwrap();
        assert_eq!(y, laurent_window(f, -5, 1).unwrap());
    }

    #[test]
    fn random_kato_windows() {
        let f = PrimeField::new(3).unwrap();
        let a = random_kato_window(f, -1, 3, 5, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = random_kato_window(f, -1, 3, 5, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let x = random_kato_window(f, -2, 2, 5, &mut rng).unwrap();
            assert!(x.dims().values().all(|&d| d <= 5));
            assert!(is_admissible(&x).ok);
            assert!(is_kato(&x));
            assert!(is_kato(&dualize(&x)));
        }
    }
}

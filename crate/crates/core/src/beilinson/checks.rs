use crate::error::{Error, Result};
use crate::linalg::{is_cartesian, is_cocartesian, is_ses, SesTriple, Square};

use super::{cells, Cell, PiWindow};

/// Result of the triple-wise admissibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    pub ok: bool,
    /// The lexicographically first `(i, j, k)` whose sequence is not short exact.
    pub first_failure: Option<(i64, i64, i64)>,
}

/// `X(i, j) ↪ X(i, k) ↠ X(j, k)` is short exact for every `lo <= i <= j <= k <= hi`.
pub fn is_admissible(x: &PiWindow) -> Admissibility {
    for i in x.lo..=x.hi {
        for j in i..=x.hi {
            for k in j..=x.hi {
                let t = SesTriple::new(x.transition((i, j), (i, k)), x.transition((i, k), (j, k)));
                if !is_ses(&t).expect("window maps compose") {
                    return Admissibility { ok: false, first_failure: Some((i, j, k)) };
                }
            }
        }
    }
    Admissibility { ok: true, first_failure: None }
}

/// The squares on `(i, j), (i, j+1), (i+1, j), (i+1, j+1)`, keyed by their top-left cell.
pub fn elementary_squares(x: &PiWindow) -> Vec<(Cell, Square)> {
    cells(x.lo, x.hi)
        .filter(|&(i, j)| i < j && j < x.hi)
        .map(|(i, j)| {
            let sq = Square::new(
                x.mono(i, j).clone(),
                x.epi(i, j).clone(),
                x.epi(i, j + 1).clone(),
                x.mono(i + 1, j).clone(),
            );
            ((i, j), sq)
        })
        .collect()
}

/// Every elementary square is admissible, cartesian and cocartesian.
pub fn is_kato(x: &PiWindow) -> bool {
    elementary_squares(x).iter().all(|(_, sq)| {
        sq.is_admissible().unwrap_or(false) && is_cartesian(sq).unwrap_or(false) && is_cocartesian(sq).unwrap_or(false)
    })
}

/// For `i <= i' <= j <= j'`, `X(i, j) -> X(i, j') ⊕ X(i', j) -> X(i', j')` is short exact.
pub fn charac_roundtrip(x: &PiWindow) -> Result<bool> {
    if !is_kato(x) {
        return Err(Error::Precondition("charac_roundtrip needs a Kato window".into()));
    }
    for i in x.lo..=x.hi {
        for i2 in i..=x.hi {
            for j in i2..=x.hi {
                for j2 in j..=x.hi {
                    let f = x.transition((i, j), (i, j2)).vstack(&x.transition((i, j), (i2, j)))?;
                    let g = x.transition((i, j2), (i2, j2)).hstack(&x.transition((i2, j), (i2, j2)).neg())?;
                    if !is_ses(&SesTriple::new(f, g))? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

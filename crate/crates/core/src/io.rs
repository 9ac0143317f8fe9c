//! JSON documents for windows, roofs, sequences and square diagrams.
//!
//! Every document carries a `kind` tag and the characteristic `p`. Matrices are
//! `{"rows", "cols", "entries"}` with entries in row-major order. Cells of a
//! window are keyed `"i,j"`; its elementary maps are keyed `"e:i,j"` and `"m:i,j"`.
//! Keys are written in sorted order, so serializing a parsed document reproduces it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::beilinson::{Cell, PiSes, PiStraightMorphism, PiWindow, URoof};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::harness::{Grid3x3, ThreeSquaresInstance};
use crate::index::{BicofinalMap, CofinalMap};
use crate::linalg::{Mat, SesTriple, Square};
use crate::window::{IndWindow, ProWindow, SRoof, TRoof};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    IndWindow(IndWindow),
    ProWindow(ProWindow),
    PiWindow(PiWindow),
    Roof(SRoof),
    ProRoof(TRoof),
    URoof(URoof),
    Ses(SesTriple),
    PiSes(PiSes),
    Grid(Grid3x3),
    ThreeSquares(ThreeSquaresInstance),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::IndWindow(_) => "ind_window",
            Document::ProWindow(_) => "pro_window",
            Document::PiWindow(_) => "pi_window",
            Document::Roof(_) | Document::ProRoof(_) => "roof",
            Document::URoof(_) => "u_roof",
            Document::Ses(_) | Document::PiSes(_) | Document::Grid(_) => "ses",
            Document::ThreeSquares(_) => "three_squares",
        }
    }

    pub fn field(&self) -> PrimeField {
        match self {
            Document::IndWindow(x) => x.field(),
            Document::ProWindow(x) => x.field(),
            Document::PiWindow(x) => x.field(),
            Document::Roof(r) => r.source().field(),
            Document::ProRoof(r) => r.as_dual().source().field(),
            Document::URoof(r) => r.source().field(),
            Document::Ses(t) => t.mono.field(),
            Document::PiSes(s) => s.mono().source().field(),
            Document::Grid(g) => g.rows[0][0].field(),
            Document::ThreeSquares(t) => t.middle.top.field(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&RawDoc::from_doc(self)).expect("documents serialize");
        s.push('\n');
        s
    }

    /// Parses a document. Syntax errors carry a line and column; semantic
    /// errors name the violated invariant and where it was found.
    pub fn from_json(text: &str) -> std::result::Result<Document, ParseError> {
        let raw: RawDoc = serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))?;
        raw.into_doc().map_err(ParseError::Invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{0}")]
    Invalid(Error),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMat {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChain {
    dims: Vec<usize>,
    maps: Vec<RawMat>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPi {
    lo: i64,
    hi: i64,
    dims: BTreeMap<String, usize>,
    maps: BTreeMap<String, RawMat>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBicofinal {
    lo: i64,
    values: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSquare {
    top: RawMat,
    left: RawMat,
    right: RawMat,
    bottom: RawMat,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Side {
    Ind,
    Pro,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
enum RawSes {
    Triple { mono: RawMat, epi: RawMat },
    Pi { sub: RawPi, middle: RawPi, quotient: RawPi, mono: BTreeMap<String, RawMat>, epi: BTreeMap<String, RawMat> },
    Grid { rows: Vec<[RawMat; 2]>, cols: Vec<[RawMat; 2]> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
enum RawDoc {
    IndWindow {
        p: u64,
        #[serde(flatten)]
        chain: RawChain,
    },
    ProWindow {
        p: u64,
        #[serde(flatten)]
        chain: RawChain,
    },
    PiWindow {
        p: u64,
        #[serde(flatten)]
        window: RawPi,
    },
    Roof {
        p: u64,
        side: Side,
        source: RawChain,
        target: RawChain,
        phi: Vec<usize>,
        components: Vec<RawMat>,
    },
    URoof {
        p: u64,
        source: RawPi,
        target: RawPi,
        phi: RawBicofinal,
        roof_window: [i64; 2],
        components: BTreeMap<String, RawMat>,
    },
    Ses {
        p: u64,
        #[serde(flatten)]
        ses: RawSes,
    },
    ThreeSquares {
        p: u64,
        primed: RawSquare,
        middle: RawSquare,
        double_primed: RawSquare,
        monos: Vec<RawMat>,
        epis: Vec<RawMat>,
    },
}

/// Larger windows are rejected before any per-cell work.
const MAX_SPAN: i64 = 64;

fn invalid(invariant: &'static str, location: impl Into<String>) -> Error {
    Error::Malformed { invariant, location: location.into() }
}

/// Prefixes the location of a construction error with the document path.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Malformed { invariant, location } => {
            Error::Malformed { invariant, location: format!("{path}: {location}") }
        }
        Error::DimensionMismatch { op, detail } => Error::DimensionMismatch { op, detail: format!("{path}: {detail}") },
        other => other,
    })
}

impl RawMat {
    fn from_mat(m: &Mat) -> Self {
        RawMat { rows: m.rows(), cols: m.cols(), entries: m.entries().iter().map(|&e| e as u64).collect() }
    }

    fn to_mat(&self, f: PrimeField, path: &str) -> Result<Mat> {
        if self.rows.checked_mul(self.cols) != Some(self.entries.len()) {
            return Err(invalid(
                "entries fill rows x cols",
                format!("{path}: {} entries for {}x{}", self.entries.len(), self.rows, self.cols),
            ));
        }
        if let Some(k) = self.entries.iter().position(|&e| e >= u64::from(f.modulus())) {
            return Err(invalid("entries reduced mod p", format!("{path}: entry {k} = {}", self.entries[k])));
        }
        at(path, Mat::new(f, self.rows, self.cols, self.entries.iter().map(|&e| e as u32).collect()))
    }
}

fn cell_key((i, j): Cell) -> String {
    format!("{i},{j}")
}

fn parse_cell(key: &str, path: &str) -> Result<Cell> {
    let bad = || invalid("cell keys are \"i,j\"", format!("{path}: {key:?}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn cell_maps(ms: &BTreeMap<Cell, Mat>) -> BTreeMap<String, RawMat> {
    ms.iter().map(|(&c, m)| (cell_key(c), RawMat::from_mat(m))).collect()
}

fn parse_cell_maps(raw: &BTreeMap<String, RawMat>, f: PrimeField, path: &str) -> Result<BTreeMap<Cell, Mat>> {
    raw.iter().map(|(k, m)| Ok((parse_cell(k, path)?, m.to_mat(f, &format!("{path}.{k}"))?))).collect()
}

impl RawChain {
    fn from_parts(dims: &[usize], maps: &[Mat]) -> Self {
        RawChain { dims: dims.to_vec(), maps: maps.iter().map(RawMat::from_mat).collect() }
    }

    fn parts(&self, f: PrimeField, path: &str) -> Result<(Vec<usize>, Vec<Mat>)> {
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, m)| m.to_mat(f, &format!("{path}.maps[{k}]")))
            .collect::<Result<_>>()?;
        Ok((self.dims.clone(), maps))
    }

    fn ind(&self, f: PrimeField, path: &str) -> Result<IndWindow> {
        let (d, m) = self.parts(f, path)?;
        at(path, IndWindow::new(f, d, m))
    }

    fn pro(&self, f: PrimeField, path: &str) -> Result<ProWindow> {
        let (d, m) = self.parts(f, path)?;
        at(path, ProWindow::new(f, d, m))
    }
}

impl RawPi {
    fn from_window(x: &PiWindow) -> Self {
        let dims = x.dims().iter().map(|(&c, &d)| (cell_key(c), d)).collect();
        let mut maps: BTreeMap<String, RawMat> = BTreeMap::new();
        for (&c, m) in x.epis() {
            maps.insert(format!("e:{}", cell_key(c)), RawMat::from_mat(m));
        }
        for (&c, m) in x.monos() {
            maps.insert(format!("m:{}", cell_key(c)), RawMat::from_mat(m));
        }
        RawPi { lo: x.lo(), hi: x.hi(), dims, maps }
    }

    fn window(&self, f: PrimeField, path: &str) -> Result<PiWindow> {
        if self.hi.checked_sub(self.lo).is_none_or(|span| span > MAX_SPAN) {
            return Err(invalid("window span is at most 64", format!("{path}: [{}, {}]", self.lo, self.hi)));
        }
        let mut dims = BTreeMap::new();
        for (k, &d) in &self.dims {
            let (i, j) = parse_cell(k, &format!("{path}.dims"))?;
            if i == j && d != 0 {
                return Err(invalid("diagonal cells are zero", format!("{path}.dims.{k} = {d}")));
            }
            dims.insert((i, j), d);
        }
        let (mut epis, mut monos) = (BTreeMap::new(), BTreeMap::new());
        for (k, m) in &self.maps {
            let mp = format!("{path}.maps.{k}");
            let (tag, rest) =
                k.split_once(':').ok_or_else(|| invalid("map keys are \"e:i,j\" or \"m:i,j\"", mp.clone()))?;
            let cell = parse_cell(rest, &mp)?;
            let mat = m.to_mat(f, &mp)?;
            match tag {
                "e" => epis.insert(cell, mat),
                "m" => monos.insert(cell, mat),
                _ => return Err(invalid("map keys are \"e:i,j\" or \"m:i,j\"", mp)),
            };
        }
        at(path, PiWindow::new(f, self.lo, self.hi, dims, epis, monos))
    }
}

impl RawSquare {
    fn from_square(s: &Square) -> Self {
        RawSquare {
            top: RawMat::from_mat(&s.top),
            left: RawMat::from_mat(&s.left),
            right: RawMat::from_mat(&s.right),
            bottom: RawMat::from_mat(&s.bottom),
        }
    }

    fn square(&self, f: PrimeField, path: &str) -> Result<Square> {
        let sq = Square::new(
            self.top.to_mat(f, &format!("{path}.top"))?,
            self.left.to_mat(f, &format!("{path}.left"))?,
            self.right.to_mat(f, &format!("{path}.right"))?,
            self.bottom.to_mat(f, &format!("{path}.bottom"))?,
        );
        at(path, sq.check_shape())?;
        Ok(sq)
    }
}

fn mats(ms: &[Mat]) -> Vec<RawMat> {
    ms.iter().map(RawMat::from_mat).collect()
}

fn parse_mats(raw: &[RawMat], f: PrimeField, path: &str) -> Result<Vec<Mat>> {
    raw.iter().enumerate().map(|(k, m)| m.to_mat(f, &format!("{path}[{k}]"))).collect()
}

fn pair(ms: &[Mat; 2]) -> [RawMat; 2] {
    [RawMat::from_mat(&ms[0]), RawMat::from_mat(&ms[1])]
}

fn parse_triples(raw: &[[RawMat; 2]], f: PrimeField, path: &str) -> Result<[[Mat; 2]; 3]> {
    if raw.len() != 3 {
        return Err(invalid("a grid has three rows and three columns", format!("{path}: {} entries", raw.len())));
    }
    let one = |k: usize| -> Result<[Mat; 2]> {
        Ok([raw[k][0].to_mat(f, &format!("{path}[{k}][0]"))?, raw[k][1].to_mat(f, &format!("{path}[{k}][1]"))?])
    };
    Ok([one(0)?, one(1)?, one(2)?])
}

impl RawDoc {
    fn from_doc(doc: &Document) -> Self {
        let p = u64::from(doc.field().modulus());
        match doc {
            Document::IndWindow(x) => RawDoc::IndWindow { p, chain: RawChain::from_parts(x.dims(), x.maps()) },
            Document::ProWindow(x) => RawDoc::ProWindow { p, chain: RawChain::from_parts(x.dims(), x.maps()) },
            Document::PiWindow(x) => RawDoc::PiWindow { p, window: RawPi::from_window(x) },
            Document::Roof(r) => RawDoc::Roof {
                p,
                side: Side::Ind,
                source: RawChain::from_parts(r.source().dims(), r.source().maps()),
                target: RawChain::from_parts(r.target().dims(), r.target().maps()),
                phi: r.phi().window().to_vec(),
                components: mats(r.components()),
            },
            Document::ProRoof(r) => {
                let (s, t) = (r.source(), r.target());
                RawDoc::Roof {
                    p,
                    side: Side::Pro,
                    source: RawChain::from_parts(s.dims(), s.maps()),
                    target: RawChain::from_parts(t.dims(), t.maps()),
                    phi: r.phi().window().to_vec(),
                    components: mats(&r.components()),
                }
            }
            Document::URoof(r) => {
                let (rlo, rhi) = r.roof_window();
                let phi = r.phi();
                RawDoc::URoof {
                    p,
                    source: RawPi::from_window(r.source()),
                    target: RawPi::from_window(r.target()),
                    phi: RawBicofinal { lo: phi.lo(), values: (phi.lo()..=phi.hi()).map(|n| phi.eval(n)).collect() },
                    roof_window: [rlo, rhi],
                    components: cell_maps(r.components()),
                }
            }
            Document::Ses(t) => RawDoc::Ses {
                p,
                ses: RawSes::Triple { mono: RawMat::from_mat(&t.mono), epi: RawMat::from_mat(&t.epi) },
            },
            Document::PiSes(s) => RawDoc::Ses {
                p,
                ses: RawSes::Pi {
                    sub: RawPi::from_window(s.mono().source()),
                    middle: RawPi::from_window(s.mono().target()),
                    quotient: RawPi::from_window(s.epi().target()),
                    mono: cell_maps(s.mono().components()),
                    epi: cell_maps(s.epi().components()),
                },
            },
            Document::Grid(g) => RawDoc::Ses {
                p,
                ses: RawSes::Grid { rows: g.rows.iter().map(pair).collect(), cols: g.cols.iter().map(pair).collect() },
            },
            Document::ThreeSquares(t) => RawDoc::ThreeSquares {
                p,
                primed: RawSquare::from_square(&t.primed),
                middle: RawSquare::from_square(&t.middle),
                double_primed: RawSquare::from_square(&t.double_primed),
                monos: mats(&t.monos),
                epis: mats(&t.epis),
            },
        }
    }

    fn into_doc(self) -> Result<Document> {
        let field = |p: u64| PrimeField::new(p);
        Ok(match self {
            RawDoc::IndWindow { p, chain } => Document::IndWindow(chain.ind(field(p)?, "$")?),
            RawDoc::ProWindow { p, chain } => Document::ProWindow(chain.pro(field(p)?, "$")?),
            RawDoc::PiWindow { p, window } => Document::PiWindow(window.window(field(p)?, "$")?),
            RawDoc::Roof { p, side, source, target, phi, components } => {
                let f = field(p)?;
                if phi.is_empty() {
                    return Err(invalid("index maps have a nonempty window", "$.phi"));
                }
                let phi = CofinalMap::new(phi)?;
                let comps = parse_mats(&components, f, "$.components")?;
                match side {
                    Side::Ind => Document::Roof(at(
                        "$",
                        SRoof::new(source.ind(f, "$.source")?, target.ind(f, "$.target")?, phi, comps),
                    )?),
                    Side::Pro => Document::ProRoof(at(
                        "$",
                        TRoof::new(&source.pro(f, "$.source")?, &target.pro(f, "$.target")?, phi, comps),
                    )?),
                }
            }
            RawDoc::URoof { p, source, target, phi, roof_window, components } => {
                let f = field(p)?;
                if phi.values.is_empty() {
                    return Err(invalid("index maps have a nonempty window", "$.phi.values"));
                }
                let phi = BicofinalMap::new(phi.lo, phi.values)?;
                Document::URoof(at(
                    "$",
                    URoof::new(
                        source.window(f, "$.source")?,
                        target.window(f, "$.target")?,
                        phi,
                        roof_window[0],
                        roof_window[1],
                        parse_cell_maps(&components, f, "$.components")?,
                    ),
                )?)
            }
            RawDoc::Ses { p, ses } => {
                let f = field(p)?;
                match ses {
                    RawSes::Triple { mono, epi } => {
                        let t = SesTriple::new(mono.to_mat(f, "$.mono")?, epi.to_mat(f, "$.epi")?);
                        if t.mono.rows() != t.epi.cols() {
                            return Err(invalid("mono target is epi source", "$"));
                        }
                        Document::Ses(t)
                    }
                    RawSes::Pi { sub, middle, quotient, mono, epi } => {
                        let (x, y, z) =
                            (sub.window(f, "$.sub")?, middle.window(f, "$.middle")?, quotient.window(f, "$.quotient")?);
                        let mono =
                            at("$.mono", PiStraightMorphism::new(x, y.clone(), parse_cell_maps(&mono, f, "$.mono")?))?;
                        let epi = at("$.epi", PiStraightMorphism::new(y, z, parse_cell_maps(&epi, f, "$.epi")?))?;
                        Document::PiSes(at("$", PiSes::new(mono, epi))?)
                    }
                    RawSes::Grid { rows, cols } => Document::Grid(Grid3x3 {
                        rows: parse_triples(&rows, f, "$.rows")?,
                        cols: parse_triples(&cols, f, "$.cols")?,
                    }),
                }
            }
            RawDoc::ThreeSquares { p, primed, middle, double_primed, monos, epis } => {
                let f = field(p)?;
                Document::ThreeSquares(ThreeSquaresInstance {
                    primed: primed.square(f, "$.primed")?,
                    middle: middle.square(f, "$.middle")?,
                    double_primed: double_primed.square(f, "$.double_primed")?,
                    monos: parse_mats(&monos, f, "$.monos")?,
                    epis: parse_mats(&epis, f, "$.epis")?,
                })
            }
        })
    }
}

//! File formats: one-sample-per-line CSV signals, PGM images (P2/P5,
//! maxval ≤ 255) and JSON dumps of decompositions.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::LegendreOrder;
use crate::transform::{Boundary, DecompositionResult, DetailBands, PacketTree, Subbands2D};

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so a failed run never leaves a partial output.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn parse_signal_csv(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: `{l}` is not a number", i + 1)))
        })
        .collect()
}

pub fn format_signal_csv(signal: &[f64]) -> String {
    let mut out = String::with_capacity(signal.len() * 20);
    for x in signal {
        let _ = writeln!(out, "{x:?}");
    }
    out
}

pub fn read_signal_csv(path: &Path) -> Result<Vec<f64>> {
    let bytes = read_bytes(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Parse(format!("{}: not UTF-8 text", path.display())))?;
    parse_signal_csv(&text)
}

struct PgmTokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmTokens<'a> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.skip_space();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse("PGM: unexpected end of data".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| Error::Parse("PGM: header is not ASCII".into()))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let t = self.token()?;
        t.parse()
            .map_err(|_| Error::Parse(format!("PGM: bad {what} `{t}`")))
    }
}

/// Parses a P2 or P5 graymap into a `rows × cols` matrix of raw gray levels.
pub fn parse_pgm(bytes: &[u8]) -> Result<DMatrix<f64>> {
    let mut tok = PgmTokens { bytes, pos: 0 };
    let magic = tok.token()?;
    let binary = match magic {
        "P2" => false,
        "P5" => true,
        other => return Err(Error::Parse(format!("PGM: unsupported magic `{other}`"))),
    };
    let cols = tok.number("width")?;
    let rows = tok.number("height")?;
    let maxval = tok.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Parse(format!(
            "PGM: maxval {maxval} outside 1..=255"
        )));
    }
    let count = rows * cols;
    let samples: Vec<f64> = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = tok.pos + 1;
        let raster = bytes
            .get(start..start + count)
            .ok_or_else(|| Error::Parse("PGM: truncated raster".into()))?;
        raster.iter().map(|&b| b as f64).collect()
    } else {
        (0..count)
            .map(|_| tok.number("sample").map(|s| s as f64))
            .collect::<Result<_>>()?
    };
    if let Some(bad) = samples.iter().find(|&&s| s > maxval as f64) {
        return Err(Error::Parse(format!(
            "PGM: sample {bad} exceeds maxval {maxval}"
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &samples))
}

pub fn read_pgm(path: &Path) -> Result<DMatrix<f64>> {
    parse_pgm(&read_bytes(path)?)
}

/// Clamps to `[0, 255]` and rounds half away from zero.
pub fn to_gray(x: f64) -> u8 {
    if x.is_nan() {
        return 0;
    }
    x.clamp(0.0, 255.0).round() as u8
}

pub fn encode_pgm(image: &DMatrix<f64>, binary: bool) -> Vec<u8> {
    let (rows, cols) = image.shape();
    let mut out =
        format!("{}\n{cols} {rows}\n255\n", if binary { "P5" } else { "P2" }).into_bytes();
    for i in 0..rows {
        let row = (0..cols).map(|j| to_gray(image[(i, j)]));
        if binary {
            out.extend(row);
        } else {
            let line: Vec<String> = row.map(|g| g.to_string()).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    }
    out
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn rows_to_matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::ShapeMismatch(format!("{what}: ragged rows")));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn order_from(family: &str, family_index: usize, v: usize) -> Result<LegendreOrder> {
    if family != "legd" {
        return Err(Error::Parse(format!("unknown wavelet family `{family}`")));
    }
    let order = LegendreOrder::new(v as i64)?;
    if order.family_index() != family_index {
        return Err(Error::Parse(format!(
            "N={family_index} inconsistent with v={v}"
        )));
    }
    Ok(order)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition1DFile {
    pub family: String,
    #[serde(rename = "N")]
    pub family_index: usize,
    pub v: usize,
    pub levels: usize,
    pub boundary: Boundary,
    pub original_length: usize,
    pub approx: Vec<f64>,
    pub details: Vec<Vec<f64>>,
}

impl From<&DecompositionResult> for Decomposition1DFile {
    fn from(d: &DecompositionResult) -> Self {
        Decomposition1DFile {
            family: "legd".into(),
            family_index: d.order.family_index(),
            v: d.order.v(),
            levels: d.levels,
            boundary: d.boundary,
            original_length: d.original_length,
            approx: d.approx.clone(),
            details: d.details.clone(),
        }
    }
}

impl Decomposition1DFile {
    pub fn into_result(self) -> Result<DecompositionResult> {
        Ok(DecompositionResult {
            order: order_from(&self.family, self.family_index, self.v)?,
            levels: self.levels,
            boundary: self.boundary,
            original_length: self.original_length,
            approx: self.approx,
            details: self.details,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandsFile {
    pub lh: Vec<Vec<f64>>,
    pub hl: Vec<Vec<f64>>,
    pub hh: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition2DFile {
    pub family: String,
    #[serde(rename = "N")]
    pub family_index: usize,
    pub v: usize,
    pub levels: usize,
    pub boundary: Boundary,
    pub rows: usize,
    pub cols: usize,
    pub ll: Vec<Vec<f64>>,
    pub details: Vec<BandsFile>,
}

impl From<&Subbands2D> for Decomposition2DFile {
    fn from(s: &Subbands2D) -> Self {
        Decomposition2DFile {
            family: "legd".into(),
            family_index: s.order.family_index(),
            v: s.order.v(),
            levels: s.levels,
            boundary: s.boundary,
            rows: s.rows,
            cols: s.cols,
            ll: matrix_rows(&s.ll),
            details: s
                .details
                .iter()
                .map(|b| BandsFile {
                    lh: matrix_rows(&b.lh),
                    hl: matrix_rows(&b.hl),
                    hh: matrix_rows(&b.hh),
                })
                .collect(),
        }
    }
}

impl Decomposition2DFile {
    pub fn into_subbands(self) -> Result<Subbands2D> {
        let details = self
            .details
            .iter()
            .map(|b| {
                Ok(DetailBands {
                    lh: rows_to_matrix(&b.lh, "lh")?,
                    hl: rows_to_matrix(&b.hl, "hl")?,
                    hh: rows_to_matrix(&b.hh, "hh")?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Subbands2D {
            order: order_from(&self.family, self.family_index, self.v)?,
            levels: self.levels,
            boundary: self.boundary,
            rows: self.rows,
            cols: self.cols,
            ll: rows_to_matrix(&self.ll, "ll")?,
            details,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketTreeFile {
    pub family: String,
    #[serde(rename = "N")]
    pub family_index: usize,
    pub v: usize,
    pub depth: usize,
    pub boundary: Boundary,
    /// `nodes[d][n]`, natural order.
    pub nodes: Vec<Vec<Vec<f64>>>,
}

impl From<&PacketTree> for PacketTreeFile {
    fn from(t: &PacketTree) -> Self {
        PacketTreeFile {
            family: "legd".into(),
            family_index: t.order.family_index(),
            v: t.order.v(),
            depth: t.depth,
            boundary: t.boundary,
            nodes: t.nodes.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Error::Parse(format!("JSON encoding failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("JSON: {e}")))
}

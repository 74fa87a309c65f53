//! Decimated periodic transforms: multi-level 1D, separable 2D, and full
//! wavelet-packet trees.
//!
//! Analysis output `i` reads the input window starting at `2i`:
//! `a[i] = Σ_k h_k x[(2i + k) mod n]`, and likewise with `g` for details.
//! Synthesis is the transpose of analysis, so with an orthonormal pair (Haar)
//! the round trip is exact; for the other Legendre filters it is not, and
//! the deviation is measured in [`crate::analysis`].

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cascade::{cascade_scaling, cascade_wavelet, masks, two_scale_same_grid};
use crate::cascade::{DyadicGridFunction, FunctionKind};
use crate::error::{Error, Result};
use crate::filterbank::FilterBank;
use crate::legendre::LegendreOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" | "per" => Ok(Boundary::Periodic),
            other => Err(Error::UnsupportedBoundary(other.to_string())),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("periodic")
    }
}

/// `out[i] = Σ_k taps[k]·x[(2i + k) mod n]`, `i < n/2`.
pub fn analysis_step(x: &[f64], taps: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n / 2)
        .map(|i| {
            taps.iter()
                .enumerate()
                .map(|(k, t)| t * x[(2 * i + k) % n])
                .sum()
        })
        .collect()
}

/// Transpose of [`analysis_step`] for both channels, summed.
pub fn synthesis_step(approx: &[f64], detail: &[f64], h: &[f64], g: &[f64]) -> Vec<f64> {
    let n = 2 * approx.len();
    let mut out = vec![0.0; n];
    for (i, (&a, &d)) in approx.iter().zip(detail).enumerate() {
        for (k, (hk, gk)) in h.iter().zip(g).enumerate() {
            out[(2 * i + k) % n] += hk * a + gk * d;
        }
    }
    out
}

fn check_length(len: usize, levels: usize, what: &str) -> Result<()> {
    if len == 0 {
        return Err(Error::LengthError(format!("{what} is empty")));
    }
    let block = 1usize
        .checked_shl(levels as u32)
        .filter(|&b| b <= len)
        .ok_or_else(|| {
            Error::LengthError(format!("{what} length {len} is shorter than 2^{levels}"))
        })?;
    if !len.is_multiple_of(block) {
        return Err(Error::LengthError(format!(
            "{what} length {len} is not divisible by 2^{levels} (periodic mode)"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    pub order: LegendreOrder,
    pub levels: usize,
    pub boundary: Boundary,
    pub original_length: usize,
    pub approx: Vec<f64>,
    /// `details[0]` is the finest level.
    pub details: Vec<Vec<f64>>,
}

impl DecompositionResult {
    pub fn coefficient_count(&self) -> usize {
        self.approx.len() + self.details.iter().map(Vec::len).sum::<usize>()
    }
}

pub fn dwt1d(
    signal: &[f64],
    filter: &FilterBank,
    levels: usize,
    boundary: Boundary,
) -> Result<DecompositionResult> {
    check_length(signal.len(), levels, "signal")?;
    let mut approx = signal.to_vec();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        details.push(analysis_step(&approx, filter.g()));
        approx = analysis_step(&approx, filter.h());
    }
    Ok(DecompositionResult {
        order: filter.order(),
        levels,
        boundary,
        original_length: signal.len(),
        approx,
        details,
    })
}

pub fn idwt1d(decomp: &DecompositionResult, filter: &FilterBank) -> Result<Vec<f64>> {
    if decomp.order != filter.order() {
        return Err(Error::ShapeMismatch(format!(
            "decomposition uses {}, filter is {}",
            decomp.order,
            filter.order()
        )));
    }
    if decomp.details.len() != decomp.levels {
        return Err(Error::ShapeMismatch(format!(
            "{} detail bands for {} levels",
            decomp.details.len(),
            decomp.levels
        )));
    }
    let expected = decomp.original_length >> decomp.levels;
    if decomp.approx.len() != expected || expected << decomp.levels != decomp.original_length {
        return Err(Error::ShapeMismatch(format!(
            "approximation has {} coefficients, expected {expected}",
            decomp.approx.len()
        )));
    }
    let mut approx = decomp.approx.clone();
    for detail in decomp.details.iter().rev() {
        if detail.len() != approx.len() {
            return Err(Error::ShapeMismatch(format!(
                "detail band of length {} next to approximation of length {}",
                detail.len(),
                approx.len()
            )));
        }
        approx = synthesis_step(&approx, detail, filter.h(), filter.g());
    }
    Ok(approx)
}

/// Detail subbands of one 2D level. The first letter names the filter run
/// along rows, the second the filter run along columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailBands {
    pub lh: DMatrix<f64>,
    pub hl: DMatrix<f64>,
    pub hh: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subbands2D {
    pub order: LegendreOrder,
    pub levels: usize,
    pub boundary: Boundary,
    pub rows: usize,
    pub cols: usize,
    pub ll: DMatrix<f64>,
    /// `details[0]` is the finest level.
    pub details: Vec<DetailBands>,
}

fn map_rows(m: &DMatrix<f64>, f: impl Fn(&[f64]) -> Vec<f64>) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = m
        .row_iter()
        .map(|r| f(&r.iter().copied().collect::<Vec<_>>()))
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(m.nrows(), cols, |i, j| rows[i][j])
}

fn map_cols(m: &DMatrix<f64>, f: impl Fn(&[f64]) -> Vec<f64>) -> DMatrix<f64> {
    map_rows(&m.transpose(), f).transpose()
}

fn analysis_2d(image: &DMatrix<f64>, filter: &FilterBank) -> (DMatrix<f64>, DetailBands) {
    let (h, g) = (filter.h(), filter.g());
    let row_lo = map_rows(image, |r| analysis_step(r, h));
    let row_hi = map_rows(image, |r| analysis_step(r, g));
    let ll = map_cols(&row_lo, |c| analysis_step(c, h));
    let lh = map_cols(&row_lo, |c| analysis_step(c, g));
    let hl = map_cols(&row_hi, |c| analysis_step(c, h));
    let hh = map_cols(&row_hi, |c| analysis_step(c, g));
    (ll, DetailBands { lh, hl, hh })
}

fn synthesis_2d(ll: &DMatrix<f64>, bands: &DetailBands, filter: &FilterBank) -> DMatrix<f64> {
    let (h, g) = (filter.h(), filter.g());
    let (r, c) = ll.shape();
    // Undo the column pass, then the row pass.
    let mut row_lo = DMatrix::zeros(2 * r, c);
    let mut row_hi = row_lo.clone();
    for j in 0..c {
        let lo: Vec<f64> = ll.column(j).iter().copied().collect();
        let lh: Vec<f64> = bands.lh.column(j).iter().copied().collect();
        let hl: Vec<f64> = bands.hl.column(j).iter().copied().collect();
        let hh: Vec<f64> = bands.hh.column(j).iter().copied().collect();
        let a = synthesis_step(&lo, &lh, h, g);
        let b = synthesis_step(&hl, &hh, h, g);
        row_lo.column_mut(j).copy_from_slice(&a);
        row_hi.column_mut(j).copy_from_slice(&b);
    }
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..2 * r {
        let lo: Vec<f64> = row_lo.row(i).iter().copied().collect();
        let hi: Vec<f64> = row_hi.row(i).iter().copied().collect();
        let row = synthesis_step(&lo, &hi, h, g);
        for (j, x) in row.into_iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    out
}

pub fn dwt2d(
    image: &DMatrix<f64>,
    filter: &FilterBank,
    levels: usize,
    boundary: Boundary,
) -> Result<Subbands2D> {
    check_length(image.nrows(), levels, "image height")?;
    check_length(image.ncols(), levels, "image width")?;
    let mut ll = image.clone();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (next, bands) = analysis_2d(&ll, filter);
        details.push(bands);
        ll = next;
    }
    Ok(Subbands2D {
        order: filter.order(),
        levels,
        boundary,
        rows: image.nrows(),
        cols: image.ncols(),
        ll,
        details,
    })
}

pub fn idwt2d(subbands: &Subbands2D, filter: &FilterBank) -> Result<DMatrix<f64>> {
    if subbands.order != filter.order() {
        return Err(Error::ShapeMismatch(format!(
            "subbands use {}, filter is {}",
            subbands.order,
            filter.order()
        )));
    }
    if subbands.details.len() != subbands.levels {
        return Err(Error::ShapeMismatch("detail level count mismatch".into()));
    }
    let mut ll = subbands.ll.clone();
    for bands in subbands.details.iter().rev() {
        let shape = ll.shape();
        if bands.lh.shape() != shape || bands.hl.shape() != shape || bands.hh.shape() != shape {
            return Err(Error::ShapeMismatch(format!(
                "detail bands do not match LL of shape {shape:?}"
            )));
        }
        ll = synthesis_2d(&ll, bands, filter);
    }
    if ll.shape() != (subbands.rows, subbands.cols) {
        return Err(Error::ShapeMismatch(format!(
            "reconstruction is {:?}, expected {:?}",
            ll.shape(),
            (subbands.rows, subbands.cols)
        )));
    }
    Ok(ll)
}

/// Full binary packet tree; `nodes[d][n]` is node `(d, n)` in natural order.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketTree {
    pub order: LegendreOrder,
    pub depth: usize,
    pub boundary: Boundary,
    pub nodes: Vec<Vec<Vec<f64>>>,
}

impl PacketTree {
    pub fn node(&self, depth: usize, index: usize) -> Option<&[f64]> {
        self.nodes.get(depth)?.get(index).map(Vec::as_slice)
    }

    pub fn leaves(&self) -> &[Vec<f64>] {
        &self.nodes[self.depth]
    }
}

pub fn wp_decompose(
    signal: &[f64],
    filter: &FilterBank,
    depth: usize,
    boundary: Boundary,
) -> Result<PacketTree> {
    check_length(signal.len(), depth, "signal")?;
    let mut nodes = vec![vec![signal.to_vec()]];
    for d in 0..depth {
        let children = nodes[d]
            .iter()
            .flat_map(|parent| {
                [
                    analysis_step(parent, filter.h()),
                    analysis_step(parent, filter.g()),
                ]
            })
            .collect();
        nodes.push(children);
    }
    Ok(PacketTree {
        order: filter.order(),
        depth,
        boundary,
        nodes,
    })
}

/// Packet functions `W_0 = φ`, `W_1 = ψ`, `W_2n = Σ √2 h_k W_n(2t−k)`,
/// `W_2n+1 = Σ √2 g_k W_n(2t−k)` for `n = 0..=max_index`, all on the cascade
/// grid `2^−iterations`.
pub fn wp_functions(
    filter: &FilterBank,
    max_index: usize,
    iterations: usize,
) -> Result<Vec<DyadicGridFunction>> {
    if max_index < 1 {
        return Err(Error::LengthError(
            "packet index range must include W_1".into(),
        ));
    }
    let phi = cascade_scaling(filter, iterations)?;
    let psi = cascade_wavelet(filter, &phi)?;
    let (lo, hi) = masks(filter);
    let mut out = vec![phi, psi];
    for n in 2..=max_index {
        let parent = &out[n / 2];
        let mask = if n % 2 == 0 { &lo } else { &hi };
        let values = two_scale_same_grid(mask, &parent.values, filter.v(), parent.level);
        out.push(DyadicGridFunction {
            values,
            kind: FunctionKind::Packet(n),
            ..parent.clone()
        });
    }
    Ok(out)
}

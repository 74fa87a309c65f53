//! Legendre multiresolution filter pair.
//!
//! The low-pass filter has `v + 1` taps with
//! `h_k / √2 = C(2k, k)·C(2v − 2k, v − k) / 2^(2v)`, so its transfer function
//! `H(ω) = (1/√2) Σ h_k e^{−jωk}` equals `e^{−jvω/2}·P_v(cos(ω/2))`, a
//! linear-phase FIR whose magnitude is the Legendre polynomial.
//! The high-pass filter is the alternating-sign mirror `g_k = (−1)^k h_k`,
//! giving `|G(ω)| = |P_v(sin(ω/2))|`.

use std::f64::consts::{PI, SQRT_2};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::{eval_legendre, trig_expansion_coeffs, Dyadic, LegendreOrder};

/// Highest supported filter order (`legd8`).
pub const MAX_FILTER_ORDER: usize = 15;

/// Global sign of the low-pass taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// All taps positive; `H(0) = 1`.
    #[default]
    Suppressed,
    /// Leading minus kept, `H(ω) = −e^{−jvω/2}·P_v(cos(ω/2))`.
    PaperMinus,
}

impl SignConvention {
    pub fn factor(self) -> i128 {
        match self {
            SignConvention::Suppressed => 1,
            SignConvention::PaperMinus => -1,
        }
    }
}

impl FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "suppressed" => Ok(SignConvention::Suppressed),
            "paper" | "paper-minus" => Ok(SignConvention::PaperMinus),
            other => Err(Error::Parse(format!(
                "unknown sign convention `{other}` (expected `paper` or `suppressed`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    order: LegendreOrder,
    sign: SignConvention,
    h_exact: Vec<Dyadic>,
    h: Vec<f64>,
    g: Vec<f64>,
}

impl FilterBank {
    pub fn new(order: LegendreOrder, sign: SignConvention) -> Result<Self> {
        let h_exact = lowpass_coeffs(order, sign)?;
        let h: Vec<f64> = h_exact.iter().map(|c| c.to_f64() * SQRT_2).collect();
        let g = highpass_coeffs(&h);
        Ok(FilterBank {
            order,
            sign,
            h_exact,
            h,
            g,
        })
    }

    /// Sign-suppressed filters of `legdN`.
    pub fn legd(n: i64) -> Result<Self> {
        Self::new(
            LegendreOrder::from_family_index(n)?,
            SignConvention::Suppressed,
        )
    }

    /// Sign-suppressed filters of odd degree `v`.
    pub fn with_degree(v: i64) -> Result<Self> {
        Self::new(LegendreOrder::new(v)?, SignConvention::Suppressed)
    }

    pub fn order(&self) -> LegendreOrder {
        self.order
    }

    pub fn v(&self) -> usize {
        self.order.v()
    }

    pub fn sign(&self) -> SignConvention {
        self.sign
    }

    /// Exact low-pass taps divided by `√2`.
    pub fn h_exact(&self) -> &[Dyadic] {
        &self.h_exact
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn export(&self) -> FilterExport {
        FilterExport {
            family: "legd".to_string(),
            family_index: self.order.family_index(),
            v: self.v(),
            h: self.h.clone(),
            g: self.g.clone(),
            h_exact: self
                .h_exact
                .iter()
                .map(|d| ExactTap {
                    num: d.num() as i64,
                    den_pow2: d.den_pow2(),
                })
                .collect(),
        }
    }
}

/// Exact low-pass taps `h_k/√2` for `k = 0..=v`.
pub fn lowpass_coeffs(order: LegendreOrder, sign: SignConvention) -> Result<Vec<Dyadic>> {
    let v = order.v();
    if v > MAX_FILTER_ORDER {
        return Err(Error::OverflowRisk {
            requested: v,
            limit: MAX_FILTER_ORDER,
        });
    }
    let a = trig_expansion_coeffs(v)?;
    let s = Dyadic::from_int(sign.factor());
    Ok((0..=v).map(|k| s * a.get(k)).collect())
}

/// Alternating-sign mirror of a low-pass filter, `g_k = (−1)^k h_k`.
pub fn highpass_coeffs(lowpass: &[f64]) -> Vec<f64> {
    lowpass
        .iter()
        .enumerate()
        .map(|(k, &h)| if k % 2 == 0 { h } else { -h })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySamples {
    pub omega: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl FrequencySamples {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }
}

/// `n` evenly spaced points from `lo` to `hi`, both included.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Transfer function value `(1/√2) Σ c_k e^{−jωk}`.
pub fn transfer(coeffs: &[f64], omega: f64) -> Complex64 {
    let sum = coeffs
        .iter()
        .enumerate()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
            let phase = omega * k as f64;
            acc + Complex64::new(c * phase.cos(), -c * phase.sin())
        });
    sum / SQRT_2
}

pub fn freq_response(coeffs: &[f64], omega_grid: &[f64]) -> FrequencySamples {
    FrequencySamples {
        omega: omega_grid.to_vec(),
        values: omega_grid.iter().map(|&w| transfer(coeffs, w)).collect(),
    }
}

/// `|P_v(cos(ω/2))|`.
pub fn closed_form_magnitude(order: LegendreOrder, omega: f64) -> f64 {
    eval_legendre(order.v(), (omega / 2.0).cos()).abs()
}

const ZERO_SCAN_POINTS: usize = 8192;
const ZERO_BISECTION_TOL: f64 = 1e-10;

/// Zeros of `|H_v|` in `(−π, π]`, ascending.
pub fn passband_zeros(order: LegendreOrder) -> Vec<f64> {
    let v = order.v();
    let f = |w: f64| eval_legendre(v, (w / 2.0).cos());
    let step = 2.0 * PI / ZERO_SCAN_POINTS as f64;
    let mut zeros = Vec::new();

    // Open interval first; ω = π is checked on its own below.
    let grid: Vec<f64> = (1..ZERO_SCAN_POINTS)
        .map(|i| -PI + step * i as f64)
        .collect();
    for pair in grid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(bisect(&f, a, b));
        }
    }
    if f(PI).abs() <= 1e-12 && zeros.last().is_none_or(|&z| PI - z > ZERO_BISECTION_TOL) {
        zeros.push(PI);
    }
    zeros
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > ZERO_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

pub fn count_passband_zeros(order: LegendreOrder) -> usize {
    passband_zeros(order).len()
}

/// Largest imaginary part left after removing the linear phase `e^{−jvω/2}`.
pub fn phase_linearity_residual(filter: &FilterBank, omega_grid: &[f64]) -> f64 {
    let half = filter.v() as f64 / 2.0;
    omega_grid
        .iter()
        .map(|&w| {
            let derotated = transfer(filter.h(), w) * Complex64::from_polar(1.0, half * w);
            derotated.im.abs()
        })
        .fold(0.0, f64::max)
}

/// One exact tap, `num / 2^den_pow2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTap {
    pub num: i64,
    pub den_pow2: u32,
}

/// JSON filter export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterExport {
    pub family: String,
    #[serde(rename = "N")]
    pub family_index: usize,
    pub v: usize,
    pub h: Vec<f64>,
    pub g: Vec<f64>,
    pub h_exact: Vec<ExactTap>,
}

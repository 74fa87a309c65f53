//! Diagnostics: distance from orthogonality, reconstruction error of the
//! transpose-based inverse, and the Legendre ODE check on the phased
//! transfer function.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filterbank::{transfer, uniform_grid, FilterBank, SignConvention};
use crate::legendre::{Dyadic, LegendreOrder};
use crate::transform::{dwt1d, idwt1d, Boundary};

/// Grid size of the half-band scan in [`orthogonality_defect`].
pub const HALFBAND_GRID_POINTS: usize = 1024;
/// Largest signal length for which the explicit round-trip operator is built.
pub const OPERATOR_MAX_LENGTH: usize = 32;

/// 64-bit linear congruential generator (Knuth's MMIX constants).
///
/// `state ← state·6364136223846793005 + 1442695040888963407`; each draw
/// advances once and maps the top 53 bits to `[−1, 1)`.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    pub fn next_signed_unit(&mut self) -> f64 {
        let unit = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        2.0 * unit - 1.0
    }

    pub fn signal(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.next_signed_unit()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub v: usize,
    /// `Σ_k h_k h_{k+m}` for even lags `m = 0, 2, …, ≤ v − 1`.
    pub lag_autocorrelations: BTreeMap<usize, f64>,
    pub lag_autocorrelations_exact: BTreeMap<usize, Dyadic>,
    /// `Σ_m |r(m) − δ_m|` over the same lags.
    pub defect: f64,
    pub halfband_deviation: f64,
}

/// Exact `Σ_k h_k h_{k+lag}`.
pub fn autocorrelation_exact(filter: &FilterBank, lag: i64) -> Dyadic {
    let h = filter.h_exact();
    let n = h.len() as i64;
    // h_k h_l = 2·(h_k/√2)(h_l/√2)
    (0..n)
        .filter(|k| (0..n).contains(&(k + lag)))
        .map(|k| Dyadic::from_int(2) * h[k as usize] * h[(k + lag) as usize])
        .sum()
}

pub fn orthogonality_defect(filter: &FilterBank) -> OrthogonalityReport {
    let v = filter.v();
    let lags: Vec<usize> = (0..v).step_by(2).collect();
    let exact: BTreeMap<usize, Dyadic> = lags
        .iter()
        .map(|&m| (m, autocorrelation_exact(filter, m as i64)))
        .collect();
    let defect: Dyadic = exact
        .iter()
        .map(|(&m, &r)| {
            let target = if m == 0 { Dyadic::ONE } else { Dyadic::ZERO };
            (r - target).abs()
        })
        .sum();
    let grid = uniform_grid(-PI, PI, HALFBAND_GRID_POINTS);
    OrthogonalityReport {
        v,
        lag_autocorrelations: exact.iter().map(|(&m, r)| (m, r.to_f64())).collect(),
        lag_autocorrelations_exact: exact,
        defect: defect.to_f64(),
        halfband_deviation: halfband_deviation(filter, &grid),
    }
}

/// `max_ω | |H(ω)|² + |H(ω+π)|² − 1 |`.
pub fn halfband_deviation(filter: &FilterBank, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&w| {
            let a = transfer(filter.h(), w).norm_sqr();
            let b = transfer(filter.h(), w + PI).norm_sqr();
            (a + b - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub signal_length: usize,
    pub levels: usize,
    pub v: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_abs_error: f64,
    pub relative_l2_error: f64,
    /// Max-abs entry of `S·A − I`; only for lengths up to
    /// [`OPERATOR_MAX_LENGTH`].
    pub operator_deviation: Option<f64>,
}

/// Round-trip operator `idwt1d ∘ dwt1d` as a dense matrix (column `j` is the
/// image of the `j`-th unit vector).
pub fn roundtrip_operator(
    filter: &FilterBank,
    length: usize,
    levels: usize,
) -> Result<nalgebra::DMatrix<f64>> {
    let mut op = nalgebra::DMatrix::zeros(length, length);
    for j in 0..length {
        let mut e = vec![0.0; length];
        e[j] = 1.0;
        let y = idwt1d(&dwt1d(&e, filter, levels, Boundary::Periodic)?, filter)?;
        op.column_mut(j).copy_from_slice(&y);
    }
    Ok(op)
}

/// Max-abs entry of `roundtrip_operator − I`.
pub fn operator_deviation(filter: &FilterBank, length: usize, levels: usize) -> Result<f64> {
    let op = roundtrip_operator(filter, length, levels)?;
    let id = nalgebra::DMatrix::<f64>::identity(length, length);
    Ok((op - id).amax())
}

pub fn roundtrip_error(
    length: usize,
    levels: usize,
    order: LegendreOrder,
    trials: usize,
    seed: u64,
) -> Result<ReconstructionReport> {
    let filter = FilterBank::new(order, SignConvention::Suppressed)?;
    let mut rng = Lcg::new(seed);
    let mut max_abs_error = 0.0f64;
    let mut relative_l2_error = 0.0f64;
    for _ in 0..trials {
        let x = rng.signal(length);
        let (abs, rel) = signal_roundtrip_error(&x, &filter, levels)?;
        max_abs_error = max_abs_error.max(abs);
        relative_l2_error = relative_l2_error.max(rel);
    }
    // Validates the length even when no trials run.
    dwt1d(&vec![0.0; length], &filter, levels, Boundary::Periodic)?;
    let operator_deviation = if length <= OPERATOR_MAX_LENGTH {
        Some(operator_deviation(&filter, length, levels)?)
    } else {
        None
    };
    Ok(ReconstructionReport {
        signal_length: length,
        levels,
        v: order.v(),
        trials,
        seed,
        max_abs_error,
        relative_l2_error,
        operator_deviation,
    })
}

/// `(‖y − x‖∞, ‖y − x‖₂ / ‖x‖₂)` for `y = idwt1d(dwt1d(x))`; the relative
/// error of a zero signal is 0.
pub fn signal_roundtrip_error(x: &[f64], filter: &FilterBank, levels: usize) -> Result<(f64, f64)> {
    let y = idwt1d(&dwt1d(x, filter, levels, Boundary::Periodic)?, filter)?;
    Ok(error_norms(x, &y))
}

pub(crate) fn error_norms(x: &[f64], y: &[f64]) -> (f64, f64) {
    let mut max_abs = 0.0f64;
    let mut err2 = 0.0;
    let mut norm2 = 0.0;
    for (a, b) in x.iter().zip(y) {
        let e = b - a;
        max_abs = max_abs.max(e.abs());
        err2 += e * e;
        norm2 += a * a;
    }
    let rel = if norm2 > 0.0 {
        (err2 / norm2).sqrt()
    } else {
        0.0
    };
    (max_abs, rel)
}

/// `y_v(θ) = −e^{jvθ}·H_v(2θ)` from the coefficient-form transfer function
/// of the `PaperMinus` filter; reduces to `P_v(cos θ)`.
pub fn auxiliary_function(filter: &FilterBank, theta: f64) -> Complex64 {
    let sign = match filter.sign() {
        SignConvention::PaperMinus => -1.0,
        SignConvention::Suppressed => 1.0,
    };
    let v = filter.v() as f64;
    Complex64::from_polar(sign, v * theta) * transfer(filter.h(), 2.0 * theta)
}

/// Max over `theta_grid` of `|y'' + cot θ·y' + v(v+1)·y|` with central
/// differences of step `step`, where `y` is the real part of
/// [`auxiliary_function`].
pub fn ode_residual(order: LegendreOrder, theta_grid: &[f64], step: f64) -> Result<f64> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::DomainError(format!(
            "step must be positive, got {step}"
        )));
    }
    if let Some(bad) = theta_grid
        .iter()
        .find(|&&t| !(t - step > 0.0 && t + step < PI))
    {
        return Err(Error::DomainError(format!(
            "θ = {bad} with step {step} leaves the open interval (0, π)"
        )));
    }
    let filter = FilterBank::new(order, SignConvention::PaperMinus)?;
    let y = |t: f64| auxiliary_function(&filter, t).re;
    let v = order.v() as f64;
    let lambda = v * (v + 1.0);
    Ok(theta_grid
        .iter()
        .map(|&t| {
            let (ym, y0, yp) = (y(t - step), y(t), y(t + step));
            let d2 = (yp - 2.0 * y0 + ym) / (step * step);
            let d1 = (yp - ym) / (2.0 * step);
            (d2 + d1 / t.tan() + lambda * y0).abs()
        })
        .fold(0.0, f64::max))
}

/// Observed orders `log2(r(h)/r(h/2))` over `halvings` successive halvings
/// of the step.
pub fn ode_convergence_orders(
    order: LegendreOrder,
    theta_grid: &[f64],
    step: f64,
    halvings: usize,
) -> Result<Vec<f64>> {
    let residuals = (0..=halvings)
        .map(|i| ode_residual(order, theta_grid, step / 2f64.powi(i as i32)))
        .collect::<Result<Vec<_>>>()?;
    Ok(residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

//! Scaling and wavelet functions on dyadic grids.
//!
//! All constructions share one two-scale rule,
//! `u(t) = Σ_k c_k w(2t − k)` with `c_k = √2·h_k` (or `√2·g_k`), applied to
//! functions sampled at `t = i/2^J` on `[0, v]`. The cascade iterates it from
//! the unit box; [`exact_dyadic_values`] iterates it from the exact integer
//! values of the fixed point, which makes every dyadic sample exact.

use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::filterbank::FilterBank;
use crate::legendre::LegendreOrder;

/// Cascade iteration limit.
pub const MAX_CASCADE_ITERATIONS: usize = 24;
/// Largest grid the cascade will allocate.
pub const MAX_GRID_POINTS: usize = 1 << 28;
/// Finest level produced by the exact-refinement oracle.
pub const MAX_EXACT_LEVEL: usize = 20;

const EIGEN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    Scaling,
    Wavelet,
    /// Wavelet-packet function `W_n`.
    Packet(usize),
}

/// Samples of a function at `t = i/2^level`, `i = 0..=v·2^level`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicGridFunction {
    pub order: LegendreOrder,
    pub level: usize,
    pub values: Vec<f64>,
    pub kind: FunctionKind,
    pub iterations: usize,
}

impl DyadicGridFunction {
    pub fn step(&self) -> f64 {
        2f64.powi(-(self.level as i32))
    }

    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &y)| (self.t(i), y))
    }

    /// Integral of the piecewise-constant function that takes value
    /// `values[i]` on `[i/2^J, (i+1)/2^J)`.
    ///
    /// Cascade iterates seeded with the box are exactly such step functions,
    /// so this is their true mass.
    pub fn integral(&self) -> f64 {
        let n = self.values.len().saturating_sub(1);
        self.values[..n].iter().sum::<f64>() * self.step()
    }

    /// Trapezoidal rule over the samples.
    pub fn trapezoid(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let ends = 0.5 * (self.values[0] + self.values[n - 1]);
        (self.values[1..n - 1].iter().sum::<f64>() + ends) * self.step()
    }

    /// Values on the coarser grid `2^−level`.
    pub fn restrict(&self, level: usize) -> Vec<f64> {
        assert!(level <= self.level, "cannot restrict to a finer grid");
        let stride = 1usize << (self.level - level);
        self.values.iter().step_by(stride).copied().collect()
    }

    /// CSV with header `t,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,value")?;
        for (t, y) in self.points() {
            writeln!(out, "{t:?},{y:?}")?;
        }
        Ok(())
    }
}

fn grid_len(v: usize, level: usize) -> Result<usize> {
    let intervals = (v as u128).checked_shl(level as u32).unwrap_or(u128::MAX);
    (intervals < MAX_GRID_POINTS as u128)
        .then_some(intervals as usize + 1)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "grid for v={v} at level {level} exceeds {MAX_GRID_POINTS} points"
            ))
        })
}

/// Two-scale masks `√2·h` and `√2·g`, built from the exact taps with the
/// global sign chosen so the low-pass mask sums to +2.
pub(crate) fn masks(filter: &FilterBank) -> (Vec<f64>, Vec<f64>) {
    let lo: Vec<f64> = filter
        .h_exact()
        .iter()
        .map(|a| 2.0 * a.abs().to_f64())
        .collect();
    let hi = crate::filterbank::highpass_coeffs(&lo);
    (lo, hi)
}

/// One refinement step: from samples on grid `j` to samples on grid `j+1`
/// of `u(t) = Σ c_k w(2t − k)`.
fn refine(mask: &[f64], coarse: &[f64], v: usize, level: usize) -> Vec<f64> {
    let stride = 1usize << level;
    let fine_len = v * (stride << 1) + 1;
    let last = v * stride;
    (0..fine_len)
        .map(|m| {
            mask.iter()
                .enumerate()
                .filter_map(|(k, c)| {
                    let idx = m.checked_sub(k * stride)?;
                    (idx <= last).then(|| c * coarse[idx])
                })
                .sum()
        })
        .collect()
}

/// `u(t) = Σ c_k w(2t − k)` sampled on the same grid as `w`.
pub(crate) fn two_scale_same_grid(mask: &[f64], w: &[f64], v: usize, level: usize) -> Vec<f64> {
    let stride = 1usize << level;
    let last = v * stride;
    (0..=last)
        .map(|m| {
            mask.iter()
                .enumerate()
                .filter_map(|(k, c)| {
                    let idx = (2 * m).checked_sub(k * stride)?;
                    (idx <= last).then(|| c * w[idx])
                })
                .sum()
        })
        .collect()
}

fn box_seed(v: usize) -> Vec<f64> {
    let mut seed = vec![0.0; v + 1];
    seed[0] = 1.0;
    seed
}

/// Cascade iterates `φ_0 = box[0,1)`, `φ_1`, …, `φ_iterations`; iterate `j`
/// lives on grid `2^−j`.
pub fn cascade_iterates(filter: &FilterBank, iterations: usize) -> Result<Vec<Vec<f64>>> {
    check_iterations(filter.v(), iterations)?;
    let (lo, _) = masks(filter);
    let v = filter.v();
    let mut iterates = vec![box_seed(v)];
    for j in 0..iterations {
        let next = refine(&lo, &iterates[j], v, j);
        iterates.push(next);
    }
    Ok(iterates)
}

fn check_iterations(v: usize, iterations: usize) -> Result<()> {
    if iterations == 0 {
        return Err(Error::LengthError(
            "cascade needs at least one iteration".into(),
        ));
    }
    if iterations > MAX_CASCADE_ITERATIONS {
        return Err(Error::ResourceLimit(format!(
            "{iterations} cascade iterations requested, limit is {MAX_CASCADE_ITERATIONS}"
        )));
    }
    grid_len(v, iterations).map(|_| ())
}

pub fn cascade_scaling(filter: &FilterBank, iterations: usize) -> Result<DyadicGridFunction> {
    check_iterations(filter.v(), iterations)?;
    let (lo, _) = masks(filter);
    let v = filter.v();
    let mut values = box_seed(v);
    for j in 0..iterations {
        values = refine(&lo, &values, v, j);
    }
    Ok(DyadicGridFunction {
        order: filter.order(),
        level: iterations,
        values,
        kind: FunctionKind::Scaling,
        iterations,
    })
}

/// `ψ(t) = Σ √2·g_k φ(2t − k)` on the grid of `phi`.
pub fn cascade_wavelet(
    filter: &FilterBank,
    phi: &DyadicGridFunction,
) -> Result<DyadicGridFunction> {
    if phi.kind != FunctionKind::Scaling {
        return Err(Error::ShapeMismatch(
            "wavelet needs a scaling function".into(),
        ));
    }
    if phi.level == 0 {
        return Err(Error::ShapeMismatch(
            "scaling function must be at level >= 1".into(),
        ));
    }
    if phi.order != filter.order() {
        return Err(Error::ShapeMismatch(format!(
            "scaling function is {}, filter is {}",
            phi.order,
            filter.order()
        )));
    }
    let (_, hi) = masks(filter);
    Ok(DyadicGridFunction {
        values: two_scale_same_grid(&hi, &phi.values, filter.v(), phi.level),
        kind: FunctionKind::Wavelet,
        ..phi.clone()
    })
}

/// Exact integer values `φ(0..=v)` of the refinable function, normalised to
/// unit sum.
pub fn integer_values(filter: &FilterBank) -> Result<Vec<f64>> {
    let v = filter.v();
    if v == 1 {
        return Ok(box_seed(1));
    }
    let (lo, _) = masks(filter);
    let interior = v - 1;
    // M[i][j] = c_{2i−j} over the interior nodes 1..v−1.
    let m = DMatrix::from_fn(interior, interior, |r, c| {
        let k = 2 * (r as i64 + 1) - (c as i64 + 1);
        if (0..=v as i64).contains(&k) {
            lo[k as usize]
        } else {
            0.0
        }
    });

    let closest = m
        .complex_eigenvalues()
        .iter()
        .map(|z| (z - 1.0).norm())
        .fold(f64::INFINITY, f64::min);
    if closest > EIGEN_TOLERANCE {
        return Err(Error::EigenFailure {
            tolerance: EIGEN_TOLERANCE,
            closest,
        });
    }

    // (M − I)x = 0 with the last equation swapped for Σx = 1.
    let mut system = m - DMatrix::identity(interior, interior);
    let mut rhs = nalgebra::DVector::zeros(interior);
    system.row_mut(interior - 1).fill(1.0);
    rhs[interior - 1] = 1.0;
    let x = system.lu().solve(&rhs).ok_or(Error::EigenFailure {
        tolerance: EIGEN_TOLERANCE,
        closest,
    })?;

    let mut values = vec![0.0; v + 1];
    values[1..v].copy_from_slice(x.as_slice());
    Ok(values)
}

/// Scaling function sampled exactly (up to rounding) on grid `2^−level`.
pub fn exact_dyadic_values(filter: &FilterBank, level: usize) -> Result<DyadicGridFunction> {
    if level > MAX_EXACT_LEVEL {
        return Err(Error::ResourceLimit(format!(
            "exact refinement level {level} exceeds {MAX_EXACT_LEVEL}"
        )));
    }
    let v = filter.v();
    grid_len(v, level)?;
    let (lo, _) = masks(filter);
    let mut values = integer_values(filter)?;
    for j in 0..level {
        values = refine(&lo, &values, v, j);
    }
    Ok(DyadicGridFunction {
        order: filter.order(),
        level,
        values,
        kind: FunctionKind::Scaling,
        iterations: 0,
    })
}

/// Sup-norm distance between cascade iterate `j` and the exact values on
/// grid `2^−j`, for `j = 1..=max_iterations`.
pub fn convergence_profile(filter: &FilterBank, max_iterations: usize) -> Result<Vec<f64>> {
    if max_iterations < 2 {
        return Err(Error::LengthError(
            "convergence profile needs at least 2 iterations".into(),
        ));
    }
    let exact = exact_dyadic_values(filter, max_iterations)?;
    let iterates = cascade_iterates(filter, max_iterations)?;
    Ok((1..=max_iterations)
        .map(|j| sup_distance(&iterates[j], &exact.restrict(j)))
        .collect())
}

/// `sup |φ(t) − Σ c_k φ(2t − k)|` over the grid one level coarser than `phi`.
pub fn two_scale_residual(filter: &FilterBank, phi: &DyadicGridFunction) -> f64 {
    assert!(phi.level >= 2, "two-scale residual needs level >= 2");
    let (lo, _) = masks(filter);
    let v = filter.v();
    let coarse = phi.restrict(phi.level - 1);
    let quarter = phi.restrict(phi.level - 2);
    let refined = refine(&lo, &quarter, v, phi.level - 2);
    sup_distance(&coarse, &refined)
}

pub(crate) fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

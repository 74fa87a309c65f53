//! Library results checked against independently coded references: the
//! Rodrigues formula, explicit transform matrices, a sum/difference Haar
//! butterfly and a naive double-sum 2D transform.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use legwave::analysis::{operator_deviation, roundtrip_error, Lcg};
use legwave::cascade::{cascade_iterates, convergence_profile, exact_dyadic_values};
use legwave::filterbank::{freq_response, uniform_grid};
use legwave::legendre::{eval_legendre, trig_expansion_coeffs};
use legwave::transform::{dwt1d, dwt2d, idwt1d, idwt2d, wp_decompose, Boundary};
use legwave::{Dyadic, FilterBank, LegendreOrder};
use nalgebra::{DMatrix, DVector};

const P: Boundary = Boundary::Periodic;

fn bank(v: i64) -> FilterBank {
    FilterBank::with_degree(v).unwrap()
}

fn random(len: usize, seed: u64) -> Vec<f64> {
    Lcg::new(seed).signal(len)
}

// ---------------------------------------------------------------- Legendre

/// `P_n(x) = 1/(2^n n!) dⁿ/dxⁿ (x² − 1)ⁿ` with the derivative taken
/// term by term on the binomial expansion.
fn rodrigues(n: u32, x: f64) -> f64 {
    let fact = |m: u32| (1..=m as i128).product::<i128>();
    let binom = |n: u32, k: u32| fact(n) / (fact(k) * fact(n - k));
    let mut acc = 0.0;
    for k in 0..=n {
        let power = 2 * k;
        if power < n {
            continue;
        }
        let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
        let falling = fact(power) / fact(power - n);
        let coeff = sign * binom(n, k) * falling;
        acc += coeff as f64 * x.powi((power - n) as i32);
    }
    acc / (2f64.powi(n as i32) * fact(n) as f64)
}

#[test]
fn recurrence_matches_rodrigues() {
    for n in 0..=6 {
        for x in uniform_grid(-1.0, 1.0, 201) {
            let r = rodrigues(n, x);
            assert!(
                (eval_legendre(n as usize, x) - r).abs() < 1e-13,
                "n={n} x={x}"
            );
        }
    }
    assert!((rodrigues(2, 0.5) + 0.125).abs() < 1e-15);
}

#[test]
fn filter_taps_follow_the_two_sided_average_form() {
    // h_k/√2 = (a_k + a_{v−k})/2
    for v in (1..=15).step_by(2) {
        let a = trig_expansion_coeffs(v).unwrap().exact();
        let f = bank(v as i64);
        for k in 0..=v {
            let expected = (a[k] + a[v - k]) * Dyadic::new(1, 1);
            assert_eq!(f.h_exact()[k], expected, "v={v} k={k}");
        }
    }
}

#[test]
fn legendre_has_n_sign_changes() {
    for n in 1..=15usize {
        let grid = uniform_grid(-1.0, 1.0, 20_001);
        let values: Vec<f64> = grid[1..grid.len() - 1]
            .iter()
            .map(|&x| eval_legendre(n, x))
            .collect();
        let changes = values.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
            + values.iter().filter(|&&y| y == 0.0).count();
        assert_eq!(changes, n, "n={n}");
    }
}

// --------------------------------------------------------------- transform

fn analysis_matrix(taps: &[f64], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n / 2, n);
    for i in 0..n / 2 {
        for (k, &t) in taps.iter().enumerate() {
            m[(i, (2 * i + k) % n)] += t;
        }
    }
    m
}

struct MatrixOracle {
    /// Operators producing approx then details (finest first).
    approx: DMatrix<f64>,
    details: Vec<DMatrix<f64>>,
}

impl MatrixOracle {
    fn new(f: &FilterBank, n: usize, levels: usize) -> Self {
        let mut chain = DMatrix::identity(n, n);
        let mut details = Vec::new();
        let mut len = n;
        for _ in 0..levels {
            details.push(analysis_matrix(f.g(), len) * &chain);
            chain = analysis_matrix(f.h(), len) * &chain;
            len /= 2;
        }
        MatrixOracle {
            approx: chain,
            details,
        }
    }

    fn stacked(&self) -> DMatrix<f64> {
        let mut rows: Vec<DMatrix<f64>> = vec![self.approx.clone()];
        rows.extend(self.details.iter().cloned());
        let n = self.approx.ncols();
        let total: usize = rows.iter().map(|m| m.nrows()).sum();
        let mut out = DMatrix::zeros(total, n);
        let mut r = 0;
        for m in rows {
            out.rows_mut(r, m.nrows()).copy_from(&m);
            r += m.nrows();
        }
        out
    }

    /// Synthesis operator = transpose of the stacked analysis operator.
    fn roundtrip(&self) -> DMatrix<f64> {
        let a = self.stacked();
        a.transpose() * a
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn dwt_matches_explicit_matrices() {
    for v in [1, 3, 5] {
        let f = bank(v);
        for n in [4usize, 8, 16] {
            for levels in 1..=2 {
                let oracle = MatrixOracle::new(&f, n, levels);
                let x = random(n, (v as u64) * 100 + n as u64 + levels as u64);
                let d = dwt1d(&x, &f, levels, P).unwrap();
                let xv = DVector::from_vec(x.clone());
                assert!(close(&d.approx, (&oracle.approx * &xv).as_slice(), 1e-12));
                for (got, m) in d.details.iter().zip(&oracle.details) {
                    assert!(close(got, (m * &xv).as_slice(), 1e-12));
                }
                let back = idwt1d(&d, &f).unwrap();
                let want = oracle.roundtrip() * &xv;
                assert!(
                    close(&back, want.as_slice(), 1e-12),
                    "v={v} n={n} L={levels}"
                );
            }
        }
    }
}

#[test]
fn cubic_roundtrip_equals_sixteen_point_operator() {
    let f = bank(3);
    let op = MatrixOracle::new(&f, 16, 1).roundtrip();
    let x = random(16, 42);
    let back = idwt1d(&dwt1d(&x, &f, 1, P).unwrap(), &f).unwrap();
    assert!(close(&back, (&op * DVector::from_vec(x)).as_slice(), 1e-12));
}

/// `S·A − I` for `legd2`, 16 samples, one level. The matrix oracle gives
/// entries 17/16 on the diagonal and 15/32 two places off it.
const LEGD2_OPERATOR_DEVIATION_16: f64 = 15.0 / 32.0;

#[test]
fn operator_deviation_regression() {
    let f = bank(3);
    let oracle = (MatrixOracle::new(&f, 16, 1).roundtrip() - DMatrix::identity(16, 16)).amax();
    assert!((oracle - LEGD2_OPERATOR_DEVIATION_16).abs() < 1e-10);
    let lib = operator_deviation(&f, 16, 1).unwrap();
    assert!((lib - oracle).abs() < 1e-10);
    let report = roundtrip_error(16, 1, f.order(), 4, 9).unwrap();
    assert!((report.operator_deviation.unwrap() - oracle).abs() < 1e-10);
}

#[test]
fn roundtrip_error_respects_the_operator_bound() {
    for v in [3, 5, 7] {
        for (len, levels) in [(8, 1), (16, 2), (32, 3)] {
            let o = LegendreOrder::new(v).unwrap();
            let r = roundtrip_error(len, levels, o, 16, 5).unwrap();
            let bound = r.operator_deviation.unwrap() * 1.0 * len as f64;
            assert!(r.max_abs_error <= bound, "v={v} len={len}");
            assert!(r.max_abs_error > 0.0);
        }
    }
}

fn haar_step(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let a = x.chunks(2).map(|p| (p[0] + p[1]) * FRAC_1_SQRT_2).collect();
    let d = x.chunks(2).map(|p| (p[0] - p[1]) * FRAC_1_SQRT_2).collect();
    (a, d)
}

#[test]
fn haar_1d_matches_butterfly() {
    let f = bank(1);
    let x = random(64, 3);
    let d = dwt1d(&x, &f, 3, P).unwrap();
    let mut approx = x.clone();
    for level in 0..3 {
        let (a, det) = haar_step(&approx);
        assert!(close(&d.details[level], &det, 1e-12));
        approx = a;
    }
    assert!(close(&d.approx, &approx, 1e-12));
    assert!(close(&idwt1d(&d, &f).unwrap(), &x, 1e-12));
}

#[test]
fn haar_packets_match_butterfly() {
    let f = bank(1);
    let x = random(64, 4);
    let tree = wp_decompose(&x, &f, 3, P).unwrap();
    let mut level = vec![x.clone()];
    for d in 1..=3 {
        level = level
            .iter()
            .flat_map(|node| {
                let (a, det) = haar_step(node);
                [a, det]
            })
            .collect();
        for (n, node) in level.iter().enumerate() {
            assert!(close(tree.node(d, n).unwrap(), node, 1e-12));
        }
    }
    assert_eq!(tree.leaves().len(), 8);
    assert!(tree.leaves().iter().all(|l| l.len() == 8));
    let energy: f64 = tree.leaves().iter().flatten().map(|c| c * c).sum();
    let signal: f64 = x.iter().map(|c| c * c).sum();
    assert!((energy - signal).abs() < 1e-12);
}

#[test]
fn cubic_packet_energy_matches_matrix_product() {
    let f = bank(3);
    let n = 16;
    let x = random(n, 8);
    let tree = wp_decompose(&x, &f, 3, P).unwrap();
    // Leaf (3, m) applies the filters picked by the bits of m, coarse last.
    let xv = DVector::from_vec(x.clone());
    let mut gram = DMatrix::zeros(n, n);
    for m in 0..8usize {
        let mut op = DMatrix::identity(n, n);
        let mut len = n;
        for d in (0..3).rev() {
            let taps = if (m >> d) & 1 == 0 { f.h() } else { f.g() };
            op = analysis_matrix(taps, len) * op;
            len /= 2;
        }
        let leaf = &op * &xv;
        assert!(
            close(tree.node(3, m).unwrap(), leaf.as_slice(), 1e-12),
            "leaf {m}"
        );
        gram += op.transpose() * op;
    }
    let energy: f64 = tree.leaves().iter().flatten().map(|c| c * c).sum();
    let oracle = (xv.transpose() * gram * &xv)[(0, 0)];
    assert!((energy - oracle).abs() < 1e-12);
    let signal: f64 = x.iter().map(|c| c * c).sum();
    assert!((energy - signal).abs() > 1e-3);
}

/// Naive separable transform written as double sums.
fn naive_2d(x: &DMatrix<f64>, row_taps: &[f64], col_taps: &[f64]) -> DMatrix<f64> {
    let (r, c) = x.shape();
    DMatrix::from_fn(r / 2, c / 2, |i, j| {
        let mut acc = 0.0;
        for (l, cl) in col_taps.iter().enumerate() {
            for (k, rk) in row_taps.iter().enumerate() {
                acc += cl * rk * x[((2 * i + l) % r, (2 * j + k) % c)];
            }
        }
        acc
    })
}

#[test]
fn dwt2d_matches_naive_double_sums() {
    for v in [1, 3, 5] {
        let f = bank(v);
        let x = DMatrix::from_vec(8, 8, random(64, v as u64));
        let s = dwt2d(&x, &f, 1, P).unwrap();
        let (h, g) = (f.h(), f.g());
        let b = &s.details[0];
        assert!((s.ll.clone() - naive_2d(&x, h, h)).amax() < 1e-12);
        assert!((b.lh.clone() - naive_2d(&x, h, g)).amax() < 1e-12);
        assert!((b.hl.clone() - naive_2d(&x, g, h)).amax() < 1e-12);
        assert!((b.hh.clone() - naive_2d(&x, g, g)).amax() < 1e-12);
    }
}

#[test]
fn haar_2d_round_trip() {
    let f = bank(1);
    let x = DMatrix::from_vec(32, 32, random(1024, 11));
    let s = dwt2d(&x, &f, 3, P).unwrap();
    assert!((idwt2d(&s, &f).unwrap() - x).amax() <= 1e-12);
}

#[test]
fn haar_2d_matches_butterfly() {
    let f = bank(1);
    let x = DMatrix::from_vec(8, 8, random(64, 12));
    let s = dwt2d(&x, &f, 1, P).unwrap();
    // rows first, then columns
    let mut rows_lo = DMatrix::zeros(8, 4);
    let mut rows_hi = DMatrix::zeros(8, 4);
    for i in 0..8 {
        let row: Vec<f64> = x.row(i).iter().copied().collect();
        let (a, d) = haar_step(&row);
        for j in 0..4 {
            rows_lo[(i, j)] = a[j];
            rows_hi[(i, j)] = d[j];
        }
    }
    let cols = |m: &DMatrix<f64>| {
        let mut lo = DMatrix::zeros(4, 4);
        let mut hi = DMatrix::zeros(4, 4);
        for j in 0..4 {
            let col: Vec<f64> = m.column(j).iter().copied().collect();
            let (a, d) = haar_step(&col);
            for i in 0..4 {
                lo[(i, j)] = a[i];
                hi[(i, j)] = d[i];
            }
        }
        (lo, hi)
    };
    let (ll, lh) = cols(&rows_lo);
    let (hl, hh) = cols(&rows_hi);
    let b = &s.details[0];
    assert!((s.ll.clone() - ll).amax() < 1e-12);
    assert!((b.lh.clone() - lh).amax() < 1e-12);
    assert!((b.hl.clone() - hl).amax() < 1e-12);
    assert!((b.hh.clone() - hh).amax() < 1e-12);
}

#[test]
fn cubic_2d_round_trip_is_the_tensor_square() {
    let f = bank(3);
    for n in [8usize, 64] {
        let r = MatrixOracle::new(&f, n, 1).roundtrip();
        let x = DMatrix::from_vec(n, n, random(n * n, n as u64));
        let back = idwt2d(&dwt2d(&x, &f, 1, P).unwrap(), &f).unwrap();
        let want = &r * &x * r.transpose();
        assert!((back - want).amax() < 1e-11, "n={n}");
    }
}

// ----------------------------------------------------------------- cascade

#[test]
fn cubic_profile_is_the_box_corner_decay() {
    // The box seed puts φ_j(0) = c_0^j while φ(0) = 0, with c_0 = 5/8 for
    // legd2; that corner dominates the sup-norm gap.
    let d = convergence_profile(&bank(3), 10).unwrap();
    for (j, dj) in d.iter().enumerate() {
        let corner = (5.0f64 / 8.0).powi(j as i32 + 1);
        assert!((dj - corner).abs() < 1e-12, "j={} {dj} vs {corner}", j + 1);
    }
}

#[test]
fn cascade_iterates_conserve_mass() {
    for v in (1..=15).step_by(2) {
        let f = bank(v);
        let iterates = cascade_iterates(&f, 10).unwrap();
        for (j, it) in iterates.iter().enumerate() {
            let n = it.len() - 1;
            let mass = it[..n].iter().sum::<f64>() / 2f64.powi(j as i32);
            assert!((mass - 1.0).abs() < 1e-8, "v={v} j={j}");
        }
    }
}

#[test]
fn exact_values_are_symmetric_and_sum_to_grid_mass() {
    for v in [3, 5, 7] {
        let e = exact_dyadic_values(&bank(v), 6).unwrap();
        let n = e.values.len();
        for i in 0..n {
            assert!((e.values[i] - e.values[n - 1 - i]).abs() < 1e-12);
        }
        assert!((e.integral() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn coefficient_response_matches_polynomial_on_dense_grid() {
    let grid = uniform_grid(-PI, PI, 4096);
    for v in (1..=15).step_by(2) {
        let r = freq_response(bank(v as i64).h(), &grid);
        for (w, z) in grid.iter().zip(&r.values) {
            let p = eval_legendre(v, (w / 2.0).cos()).abs();
            assert!((z.norm() - p).abs() < 1e-12);
        }
    }
}

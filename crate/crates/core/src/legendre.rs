//! Legendre polynomials: three-term recurrence evaluation and the exact
//! cosine-series expansion `P_n(cos θ) = Σ a_m cos((n − 2m)θ)` whose
//! coefficients generate every filter in this crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`trig_expansion_coeffs`].
pub const MAX_TRIG_DEGREE: usize = 30;

/// Exact rational with a power-of-two denominator, `num / 2^den_pow2`.
///
/// Always stored in lowest terms (odd numerator, or zero with exponent 0),
/// so structural equality is value equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    num: i128,
    den_pow2: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic {
        num: 0,
        den_pow2: 0,
    };
    pub const ONE: Dyadic = Dyadic {
        num: 1,
        den_pow2: 0,
    };

    pub fn new(num: i128, den_pow2: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let shift = num.trailing_zeros().min(den_pow2);
        Dyadic {
            num: num >> shift,
            den_pow2: den_pow2 - shift,
        }
    }

    pub fn from_int(n: i128) -> Self {
        Self::new(n, 0)
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den_pow2(&self) -> u32 {
        self.den_pow2
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(self) -> Self {
        Dyadic {
            num: self.num.abs(),
            ..self
        }
    }

    /// Nearest `f64`; exact whenever the numerator fits in 53 bits.
    pub fn to_f64(self) -> f64 {
        self.num as f64 * 2f64.powi(-(self.den_pow2 as i32))
    }

    fn aligned(self, other: Self) -> (i128, i128, u32) {
        let den = self.den_pow2.max(other.den_pow2);
        let lift = |d: Dyadic| {
            d.num
                .checked_mul(1i128 << (den - d.den_pow2))
                .expect("dyadic numerator overflow")
        };
        (lift(self), lift(other), den)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, den) = self.aligned(rhs);
        Dyadic::new(a.checked_add(b).expect("dyadic numerator overflow"), den)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            ..self
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(
            self.num
                .checked_mul(rhs.num)
                .expect("dyadic numerator overflow"),
            self.den_pow2 + rhs.den_pow2,
        )
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_pow2 == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.den_pow2)
        }
    }
}

/// Odd polynomial degree `v` of a Legendre filter together with its family
/// index `N`, related by `2N = v + 1` (`legdN`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LegendreOrder {
    v: usize,
}

impl LegendreOrder {
    pub fn new(v: i64) -> Result<Self> {
        if v < 1 || v % 2 == 0 {
            return Err(Error::InvalidOrder(v));
        }
        Ok(LegendreOrder { v: v as usize })
    }

    /// Order of the `legdN` wavelet, `v = 2N − 1`.
    pub fn from_family_index(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidOrder(2 * n - 1));
        }
        Self::new(2 * n - 1)
    }

    /// Polynomial degree (also the filter support width).
    pub fn v(&self) -> usize {
        self.v
    }

    /// Family index `N`.
    pub fn family_index(&self) -> usize {
        self.v.div_ceil(2)
    }

    pub fn name(&self) -> String {
        format!("legd{}", self.family_index())
    }
}

impl fmt::Display for LegendreOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (v={})", self.name(), self.v)
    }
}

/// `P_n(x)` by the three-term recurrence.
pub fn eval_legendre(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// Exact coefficients of `P_n(cos θ) = Σ_m a_m cos((n − 2m)θ)`, with
/// `a_m = C(2m, m)·C(2n − 2m, n − m) / 4^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigCoeffs {
    n: usize,
    numerators: Vec<i128>,
}

impl TrigCoeffs {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Numerators over the common denominator `4^n`.
    pub fn numerators(&self) -> &[i128] {
        &self.numerators
    }

    /// Exponent of the common denominator, `4^n = 2^(2n)`.
    pub fn den_pow2(&self) -> u32 {
        2 * self.n as u32
    }

    pub fn get(&self, m: usize) -> Dyadic {
        Dyadic::new(self.numerators[m], self.den_pow2())
    }

    pub fn exact(&self) -> Vec<Dyadic> {
        (0..=self.n).map(|m| self.get(m)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.exact().into_iter().map(Dyadic::to_f64).collect()
    }
}

pub(crate) fn central_binomial(m: usize) -> i128 {
    // C(2m, m) built incrementally; each partial product is itself a binomial.
    let mut c: i128 = 1;
    for i in 0..m as i128 {
        c = c * (2 * i + 1) * (2 * i + 2) / ((i + 1) * (i + 1));
    }
    c
}

pub fn trig_expansion_coeffs(n: usize) -> Result<TrigCoeffs> {
    if n > MAX_TRIG_DEGREE {
        return Err(Error::OverflowRisk {
            requested: n,
            limit: MAX_TRIG_DEGREE,
        });
    }
    let numerators = (0..=n)
        .map(|m| central_binomial(m) * central_binomial(n - m))
        .collect();
    Ok(TrigCoeffs { n, numerators })
}

/// Evaluates the cosine series at any real `theta`; agrees with
/// `eval_legendre(n, theta.cos())` on `[0, π]`.
pub fn eval_via_trig(coeffs: &TrigCoeffs, theta: f64) -> f64 {
    let n = coeffs.n as i64;
    coeffs
        .to_f64()
        .iter()
        .enumerate()
        .map(|(m, a)| a * ((n - 2 * m as i64) as f64 * theta).cos())
        .sum()
}

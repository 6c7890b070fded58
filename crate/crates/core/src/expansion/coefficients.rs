//! The rooted-hypergraph coefficient majorant `ā_n` and its generating
//! function `w = c z (1 + w)^p` with `c = 2‖K‖M^p`.
//!
//! Writing `ā_n = γ_n cⁿ`, the recursion only involves the rational
//! coefficients `γ_n`, so they are computed exactly with `c` kept symbolic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::rational_to_f64;
use crate::numfmt;

/// Largest table length accepted.
pub const COEFFICIENT_GUARD: usize = 200;

fn binomial_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `γ_1..γ_{n_max}` from the recursion with equality,
/// `γ_n = Σ_{k=0}^p C(p,k) Σ_{n_1+..+n_k = n-1} γ_{n_1}⋯γ_{n_k}`.
pub fn gamma_recursion(p: usize, n_max: usize) -> Result<Vec<BigRational>> {
    if p == 0 {
        return invalid("motif edge count p must be at least 1");
    }
    if n_max > COEFFICIENT_GUARD {
        return Err(Error::GuardExceeded { what: "coefficient table length", requested: n_max, limit: COEFFICIENT_GUARD });
    }
    let zero = BigRational::zero();
    // powers[k][j] = [z^j] (Σ γ_i z^i)^k
    let mut powers = vec![vec![zero.clone(); n_max]; p + 1];
    if n_max > 0 {
        powers[0][0] = BigRational::one();
    }
    let binoms: Vec<BigRational> = (0..=p).map(|k| BigRational::from_integer(binomial_big(p, k))).collect();
    let mut gammas: Vec<BigRational> = vec![zero.clone()];
    for n in 1..=n_max {
        let j = n - 1;
        for k in 1..=p {
            let mut acc = zero.clone();
            for i in 1..=j {
                if !powers[k - 1][j - i].is_zero() {
                    acc += &gammas[i] * &powers[k - 1][j - i];
                }
            }
            powers[k][j] = acc;
        }
        let gamma = (0..=p).fold(zero.clone(), |acc, k| acc + &binoms[k] * &powers[k][j]);
        gammas.push(gamma);
    }
    gammas.remove(0);
    Ok(gammas)
}

/// Whether `W(u) = Σ γ_n uⁿ` satisfies `W = u (1 + W)^p` through `u^{n}`
/// for `n = len(gammas)`, in exact arithmetic.
pub fn series_satisfies_identity(p: usize, gammas: &[BigRational]) -> bool {
    let len = gammas.len() + 1;
    // series indexed by power of u, truncated at len
    let mut one_plus_w = vec![BigRational::zero(); len];
    one_plus_w[0] = BigRational::one();
    for (i, g) in gammas.iter().enumerate() {
        one_plus_w[i + 1] = g.clone();
    }
    let mut power = vec![BigRational::zero(); len];
    power[0] = BigRational::one();
    for _ in 0..p {
        let mut next = vec![BigRational::zero(); len];
        for (i, a) in power.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in one_plus_w.iter().enumerate().take(len - i) {
                next[i + j] += a * b;
            }
        }
        power = next;
    }
    // [u^n] of u (1+W)^p is [u^{n-1}] (1+W)^p
    gammas.iter().enumerate().all(|(i, g)| *g == power[i])
}

/// `ā_n = γ_n cⁿ` with `c = 2‖K‖M^p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub p: usize,
    #[serde(with = "numfmt::f64_17")]
    pub norm: f64,
    #[serde(rename = "M", with = "numfmt::f64_17")]
    pub m_base: f64,
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    pub gammas: Vec<BigRational>,
}

fn ser_rationals<S: serde::Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

fn de_rationals<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
    let strings = Vec::<String>::deserialize(d)?;
    strings
        .iter()
        .map(|s| s.parse::<BigRational>().map_err(serde::de::Error::custom))
        .collect()
}

/// The table `ā_1..ā_{n_max}`.
pub fn abar_recursion(p: usize, norm: f64, m_base: f64, n_max: usize) -> Result<CoefficientTable> {
    CoefficientTable::new(p, norm, m_base, n_max)
}

impl CoefficientTable {
    pub fn new(p: usize, norm: f64, m_base: f64, n_max: usize) -> Result<Self> {
        if !(norm.is_finite() && norm >= 0.0) {
            return invalid(format!("norm must be finite and nonnegative, got {norm}"));
        }
        if !(m_base.is_finite() && m_base > 1.0) {
            return invalid(format!("M must be finite and > 1, got {m_base}"));
        }
        Ok(CoefficientTable { p, norm, m_base, gammas: gamma_recursion(p, n_max)? })
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// `c = 2‖K‖M^p`.
    pub fn c(&self) -> f64 {
        2.0 * self.norm * self.m_base.powi(self.p as i32)
    }

    /// `γ_n`, 1-based.
    pub fn gamma(&self, n: usize) -> &BigRational {
        &self.gammas[n - 1]
    }

    /// `ā_n` as a float, 1-based.
    pub fn abar(&self, n: usize) -> f64 {
        let c = self.c();
        if c == 0.0 {
            return 0.0;
        }
        (rational_to_f64(self.gamma(n)).ln() + n as f64 * c.ln()).exp()
    }

    pub fn generating_function_check(&self) -> bool {
        series_satisfies_identity(self.p, &self.gammas)
    }

    /// `ā_n ≤ (2‖K‖(Mp)^p)ⁿ (p−1)^{−(1+(p−1)n)}` after cancelling `cⁿ`:
    /// `γ_n (p−1)^{1+(p−1)n} ≤ p^{pn}`, exactly.
    pub fn bound_holds_exactly(&self, n: usize) -> bool {
        if self.p < 2 {
            return false;
        }
        let p = BigInt::from(self.p);
        let lhs = self.gamma(n) * BigRational::from_integer(Pow::pow(&(&p - 1u32), 1 + (self.p - 1) * n));
        lhs <= BigRational::from_integer(Pow::pow(&p, self.p * n))
    }
}

/// Geometric majorant of `ā_n` and its tails.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    p: usize,
    ratio: f64,
}

/// Lemma-style radius and tail for `p ≥ 2`, `‖K‖ ≥ 0`, `M > 1`.
pub fn radius_and_tail(p: usize, norm: f64, m_base: f64) -> Result<TailBound> {
    TailBound::new(p, norm, m_base)
}

impl TailBound {
    pub fn new(p: usize, norm: f64, m_base: f64) -> Result<Self> {
        if p < 2 {
            return Err(Error::Unsupported(format!("tail bound needs p >= 2, got p = {p}")));
        }
        if !(norm.is_finite() && norm >= 0.0) {
            return invalid(format!("norm must be finite and nonnegative, got {norm}"));
        }
        if !(m_base.is_finite() && m_base > 1.0) {
            return invalid(format!("M must be finite and > 1, got {m_base}"));
        }
        let pf = p as f64;
        let ratio = 2.0 * norm * (m_base * pf).powi(p as i32) / (pf - 1.0).powi(p as i32 - 1);
        Ok(TailBound { p, ratio })
    }

    /// `r = 2‖K‖(Mp)^p / (p−1)^{p−1}`; the majorant is `rⁿ/(p−1)`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Radius of convergence in `z` of `Σ ā_n zⁿ`, i.e. `1/r`.
    pub fn radius(&self) -> f64 {
        if self.ratio == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.ratio
        }
    }

    pub fn converges(&self) -> bool {
        self.ratio < 1.0
    }

    pub fn coefficient_bound(&self, n: usize) -> f64 {
        self.ratio.powi(n as i32) / (self.p as f64 - 1.0)
    }

    /// `Σ_{n > n0} rⁿ/(p−1)`, or `+∞` when `r ≥ 1`.
    pub fn tail(&self, n0: usize) -> f64 {
        if !self.converges() {
            return f64::INFINITY;
        }
        self.ratio.powi(n0 as i32 + 1) / ((self.p as f64 - 1.0) * (1.0 - self.ratio))
    }
}

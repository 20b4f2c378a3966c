//! Shifted Jacobi polynomials `Q_m^{(α,β)}(t) = P_m^{(α,β)}(2t-1)` on `(0,1)`
//! and the normalized Jacobi functions
//! `J_m^{(α,β)}(t) = k(α,β,m) (1-t)^{α/2} t^{β/2} Q_m^{(α,β)}(t)`.
//!
//! Polynomials are kept in the monomial basis with double-double
//! coefficients. That form feeds the exact Beta-moment integrator directly;
//! the extra precision absorbs the sign cancellation of the explicit sum.

use crate::dd::Dd;
use crate::special_fn::log_gamma;
use crate::{Error, Result};

/// Highest supported polynomial degree.
pub const MAX_DEGREE: usize = 64;

/// The triple `(α, β, m)` indexing `Q_m^{(α,β)}` and `J_m^{(α,β)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
    pub m: usize,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64, m: usize) -> Result<Self> {
        if !(alpha > -1.0) || !(beta > -1.0) {
            return Err(Error::Domain(format!(
                "Jacobi parameters need alpha, beta > -1, got ({alpha}, {beta})"
            )));
        }
        Ok(JacobiParams { alpha, beta, m })
    }

    /// `β` as a nonnegative integer, when it is one.
    fn integer_beta(&self) -> Option<u32> {
        (self.beta >= 0.0 && self.beta.fract() == 0.0 && self.beta < 1e6).then_some(self.beta as u32)
    }
}

/// Monomial coefficients in `t`; index `k` is the coefficient of `t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    coeffs: Vec<Dd>,
}

impl PolyCoeffs {
    pub fn from_dd(mut coeffs: Vec<Dd>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Dd::ZERO);
        }
        PolyCoeffs { coeffs }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        Self::from_dd(coeffs.iter().copied().map(Dd::from).collect())
    }

    pub fn constant(c: f64) -> Self {
        Self::from_f64(&[c])
    }

    pub fn as_dd(&self) -> &[Dd] {
        &self.coeffs
    }

    /// Coefficients rounded to `f64`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Formal degree (length minus one; trailing zeros are not trimmed).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation carried out in double-double.
    pub fn eval_dd(&self, t: Dd) -> Dd {
        self.coeffs.iter().rev().fold(Dd::ZERO, |acc, &c| acc * t + c)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_dd(Dd::from(t)).to_f64()
    }

    /// Coefficient convolution.
    pub fn mul(&self, other: &PolyCoeffs) -> PolyCoeffs {
        let mut out = vec![Dd::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyCoeffs { coeffs: out }
    }

    pub fn add(&self, other: &PolyCoeffs) -> PolyCoeffs {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Dd], i: usize| v.get(i).copied().unwrap_or(Dd::ZERO);
        PolyCoeffs {
            coeffs: (0..len).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> PolyCoeffs {
        PolyCoeffs { coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// Value at `t = 1`, i.e. the sum of the coefficients.
    pub fn sum(&self) -> Dd {
        self.coeffs.iter().copied().sum()
    }
}

/// `C(x + k, k)`-style product `Π_{i=1}^{k} (base + i) / i` in double-double.
fn rising_binomial(base: f64, k: usize) -> Dd {
    let mut acc = Dd::ONE;
    for i in 1..=k {
        acc = acc * (Dd::from(base) + i as f64) / i as f64;
    }
    acc
}

/// Coefficients of `Q_m^{(α,β)}` from the explicit sum
/// `Σ_k C(α+β+m+k, k) C(β+m, m-k) (-1)^{m-k} t^k`.
pub fn q_coeffs(p: &JacobiParams) -> Result<PolyCoeffs> {
    let m = p.m;
    if m > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree: m, max: MAX_DEGREE });
    }
    let ab = p.alpha + p.beta;
    let coeffs = (0..=m)
        .map(|k| {
            // C(α+β+m+k, k) = Π_{i=1}^{k} (α+β+m+i)/i
            let first = rising_binomial(ab + m as f64, k);
            // C(β+m, m-k) = Π_{i=1}^{m-k} (β+k+i)/i
            let second = rising_binomial(p.beta + k as f64, m - k);
            let c = first * second;
            if (m - k) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    Ok(PolyCoeffs::from_dd(coeffs))
}

/// `Q_m^{(α,β)}(t)` for `t ∈ [0, 1]`.
pub fn q_eval(p: &JacobiParams, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("Q_m is evaluated on [0, 1], got t = {t}")));
    }
    Ok(q_coeffs(p)?.eval(t))
}

/// `k(α,β,m)²` in double-double.
///
/// For integer `β` the ratio of Gamma values collapses to
/// `Π_{i=1}^{β} (m+α+i)/(m+i)`; otherwise the Gamma form is used.
pub(crate) fn norm_coeff_sq(p: &JacobiParams) -> Dd {
    let m = p.m as f64;
    let lead = Dd::from(2.0 * m + p.alpha + p.beta + 1.0);
    match p.integer_beta() {
        Some(b) => {
            let mut acc = lead;
            for i in 1..=b {
                let i = i as f64;
                acc = acc * (Dd::from(m + p.alpha) + i) / (m + i);
            }
            acc
        }
        None => Dd::from(jac_norm_coeff_gamma(p).powi(2)),
    }
}

/// Normalizing coefficient `k(α,β,m)` that makes `J_m^{(α,β)}` orthonormal
/// on `(0,1)`.
pub fn jac_norm_coeff(p: &JacobiParams) -> f64 {
    norm_coeff_sq(p).sqrt().to_f64()
}

/// `k(α,β,m)` from the Gamma-function definition
/// `sqrt((2m+α+β+1) Γ(m+α+β+1) m! / (Γ(m+α+1) Γ(m+β+1)))`.
pub fn jac_norm_coeff_gamma(p: &JacobiParams) -> f64 {
    let m = p.m as f64;
    let (a, b) = (p.alpha, p.beta);
    // Arguments are positive because α, β > -1.
    let lg = |x: f64| log_gamma(x).expect("positive Gamma argument");
    let ln = lg(m + a + b + 1.0) + lg(m + 1.0) - lg(m + a + 1.0) - lg(m + b + 1.0);
    ((2.0 * m + a + b + 1.0) * ln.exp()).sqrt()
}

/// `k(α,β,m)` through binomials, valid for integer `β ≥ 0`:
/// `sqrt((2m+α+β+1) C(m+α+β, β) / C(m+β, β))`.
///
/// The upper index `m+α+β` (rather than `α+β+1`) is what the Gamma form
/// reduces to; the two only coincide at `m = 1` or `β = 0`.
pub fn jac_norm_coeff_binomial(alpha: f64, beta: u32, m: usize) -> f64 {
    let b = beta as usize;
    let num = rising_binomial(m as f64 + alpha, b);
    let den = rising_binomial(m as f64, b);
    let lead = 2.0 * m as f64 + alpha + beta as f64 + 1.0;
    (num / den * lead).sqrt().to_f64()
}

/// `J_m^{(α,β)}(t)`.
pub fn jac_fn_eval(p: &JacobiParams, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("J_m is evaluated on [0, 1], got t = {t}")));
    }
    if t == 0.0 && p.beta < 0.0 {
        return Err(Error::Domain("J_m is singular at t = 0 for beta < 0".into()));
    }
    if t == 1.0 && p.alpha < 0.0 {
        return Err(Error::Domain("J_m is singular at t = 1 for alpha < 0".into()));
    }
    let q = q_coeffs(p)?.eval(t);
    let weight = (1.0 - t).powf(p.alpha / 2.0) * t.powf(p.beta / 2.0);
    Ok(jac_norm_coeff(p) * weight * q)
}

/// Upper bound `(2m+α+β+1)^{m+1+(α+1)/2} x^{β/2}` for
/// `sup_{0≤t≤x} |J_m^{(α,β)}(t)|`, proven for `α > 0` only.
pub fn jac_sup_bound(p: &JacobiParams, x: f64) -> Result<f64> {
    if !(p.alpha > 0.0) {
        return Err(Error::Unsupported(format!(
            "sup-bound is unproven for alpha <= 0 (alpha = {})",
            p.alpha
        )));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("sup-bound needs 0 < x < 1, got {x}")));
    }
    let m = p.m as f64;
    let base = 2.0 * m + p.alpha + p.beta + 1.0;
    let expo = m + 1.0 + (p.alpha + 1.0) / 2.0;
    Ok((expo * base.ln() + 0.5 * p.beta * x.ln()).exp())
}

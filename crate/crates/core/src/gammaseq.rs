//! The matrices `γ_{n,α}(a)_ξ` and truncated matrix sequences.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::integration::BlockBasis;
use crate::symbols::SymbolSpec;
use crate::{block_order, Error, Result};

/// Dense complex matrix used for every block.
pub type CMatrix = DMatrix<Complex64>;

/// Default truncation `Ξ_max`.
pub const DEFAULT_XI_MAX: usize = 64;

const POWER_MAX_ITER: usize = 500;
const POWER_TOL: f64 = 1e-10;

/// The block of a sequence at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    pub xi: i64,
    pub entries: CMatrix,
}

impl GammaMatrix {
    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries == self.entries.transpose()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }
}

/// A truncated sequence `(A_ξ)` for `ξ = -n+1 ..= Ξ_max`, with an optional
/// scalar limit.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeq {
    pub n: usize,
    pub alpha: f64,
    pub xi_max: usize,
    pub mats: Vec<GammaMatrix>,
    pub scalar_limit: Option<Complex64>,
    pub symbol: Option<SymbolSpec>,
}

fn check_frequency(n: usize, xi: i64) -> Result<usize> {
    block_order(n, xi).ok_or(Error::FrequencyOutOfRange { xi, n })
}

impl MatrixSeq {
    /// Builds a sequence block by block from `f(ξ, order)`.
    pub fn from_fn<F>(n: usize, alpha: f64, xi_max: usize, limit: Option<Complex64>, f: F) -> Result<Self>
    where
        F: Fn(i64, usize) -> Result<CMatrix> + Sync,
    {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let xi_min = 1 - n as i64;
        let mats = (xi_min..=xi_max as i64)
            .into_par_iter()
            .map(|xi| {
                let d = check_frequency(n, xi)?;
                let entries = f(xi, d)?;
                if entries.nrows() != d || entries.ncols() != d {
                    return Err(Error::DimensionMismatch { expected: d, got: entries.nrows() });
                }
                Ok(GammaMatrix { xi, entries })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixSeq { n, alpha, xi_max, mats, scalar_limit: limit, symbol: None })
    }

    pub fn xi_min(&self) -> i64 {
        1 - self.n as i64
    }

    /// Block at frequency `ξ`.
    pub fn block(&self, xi: i64) -> Result<&CMatrix> {
        check_frequency(self.n, xi)?;
        if xi > self.xi_max as i64 {
            return Err(Error::InsufficientTruncation {
                xi,
                needed: xi.unsigned_abs() as usize,
                xi_max: self.xi_max,
            });
        }
        Ok(&self.mats[(xi - self.xi_min()) as usize].entries)
    }

    fn zip_with(&self, other: &MatrixSeq, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<MatrixSeq> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let xi_max = self.xi_max.min(other.xi_max);
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .take_while(|(a, _)| a.xi <= xi_max as i64)
            .map(|(a, b)| GammaMatrix { xi: a.xi, entries: f(&a.entries, &b.entries) })
            .collect();
        Ok(MatrixSeq { n: self.n, alpha: self.alpha, xi_max, mats, scalar_limit: None, symbol: None })
    }

    /// Blockwise sum; limits add.
    pub fn add(&self, other: &MatrixSeq) -> Result<MatrixSeq> {
        let mut out = self.zip_with(other, |a, b| a + b)?;
        out.scalar_limit = self.scalar_limit.zip(other.scalar_limit).map(|(x, y)| x + y);
        Ok(out)
    }

    /// Blockwise product; limits multiply.
    pub fn mul(&self, other: &MatrixSeq) -> Result<MatrixSeq> {
        let mut out = self.zip_with(other, |a, b| a * b)?;
        out.scalar_limit = self.scalar_limit.zip(other.scalar_limit).map(|(x, y)| x * y);
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> MatrixSeq {
        MatrixSeq {
            mats: self
                .mats
                .iter()
                .map(|m| GammaMatrix { xi: m.xi, entries: &m.entries * c })
                .collect(),
            scalar_limit: self.scalar_limit.map(|w| w * c),
            symbol: None,
            ..self.clone()
        }
    }

    /// `max_ξ ‖A_ξ‖` over the truncation (spectral norms).
    pub fn sup_norm(&self) -> f64 {
        self.mats.iter().map(|m| spectral_norm(&m.entries)).fold(0.0, f64::max)
    }

    /// Heuristic scalar-limit estimate: mean diagonal entry at `Ξ_max`.
    pub fn estimate_limit_heuristic(&self) -> Complex64 {
        let last = &self.mats[self.mats.len() - 1].entries;
        last.diagonal().sum() / last.nrows() as f64
    }

    /// Structural checks for membership in the limit algebra: block orders
    /// follow `min(n+ξ, n)`, entries are finite, and the limit is present.
    pub fn check_invariants(&self) -> Result<()> {
        let expected = (self.xi_max as i64 - self.xi_min() + 1) as usize;
        if self.mats.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: self.mats.len() });
        }
        for (i, m) in self.mats.iter().enumerate() {
            let xi = self.xi_min() + i as i64;
            let d = check_frequency(self.n, xi)?;
            if m.xi != xi || m.entries.nrows() != d || m.entries.ncols() != d {
                return Err(Error::DimensionMismatch { expected: d, got: m.entries.nrows() });
            }
            if m.entries.iter().any(|z| !z.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite entry at xi = {xi}")));
            }
        }
        if self.scalar_limit.is_none() {
            return Err(Error::MissingLimit);
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SeqWire::from(self)).expect("sequence serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: SeqWire = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad sequence JSON: {e}")))?;
        wire.try_into()
    }

    /// CSV of a single frequency with header `j,k,value`. Complex entries are
    /// written as `re+imi`.
    pub fn to_csv(&self, xi: i64) -> Result<String> {
        let m = self.block(xi)?;
        let mut out = String::from("j,k,value\n");
        for j in 0..m.nrows() {
            for k in 0..m.ncols() {
                let z = m[(j, k)];
                if z.im == 0.0 {
                    out.push_str(&format!("{j},{k},{:e}\n", z.re));
                } else {
                    out.push_str(&format!("{j},{k},{:e}{:+e}i\n", z.re, z.im));
                }
            }
        }
        Ok(out)
    }
}

/// `γ_{n,α}(a)_ξ`.
pub fn gamma_matrix(a: &SymbolSpec, n: usize, alpha: f64, xi: i64) -> Result<GammaMatrix> {
    let d = check_frequency(n, xi)?;
    Ok(GammaMatrix { xi, entries: gamma_block(a, alpha, xi, d)? })
}

fn gamma_block(a: &SymbolSpec, alpha: f64, xi: i64, d: usize) -> Result<CMatrix> {
    let basis = BlockBasis::new(alpha, xi.unsigned_abs() as usize, d)?;
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        for k in j..d {
            let (v, _) = basis.entry(a, j, k)?;
            m[(j, k)] = v;
            m[(k, j)] = v;
        }
    }
    Ok(m)
}

/// `γ_{n,α}(a)` truncated at `Ξ_max`. Blocks are computed in parallel and
/// stored in ascending `ξ`.
pub fn gamma_sequence(a: &SymbolSpec, n: usize, alpha: f64, xi_max: usize) -> Result<MatrixSeq> {
    let limit = a.boundary_limit(alpha)?;
    let mut seq = MatrixSeq::from_fn(n, alpha, xi_max, limit, |xi, d| gamma_block(a, alpha, xi, d))?;
    seq.symbol = Some(a.clone());
    Ok(seq)
}

/// Whether `A_ξ` (`ξ < 0`) equals the leading `(n+ξ)`-block of `A_{|ξ|}`
/// to `1e-12`.
pub fn negative_submatrix_check(seq: &MatrixSeq, xi: i64) -> Result<bool> {
    if xi >= 0 {
        return Err(Error::InvalidArgument(format!("expected a negative frequency, got {xi}")));
    }
    let pos = -xi;
    if pos as usize > seq.xi_max {
        return Err(Error::InsufficientTruncation { xi, needed: pos as usize, xi_max: seq.xi_max });
    }
    let neg = seq.block(xi)?;
    let full = seq.block(pos)?;
    let d = neg.nrows();
    let lead = full.view((0, 0), (d, d));
    Ok(neg.iter().zip(lead.iter()).all(|(a, b)| (a - b).norm() <= 1e-12))
}

/// `‖A_ξ - ωI‖` for `ξ ≥ 0`.
pub fn tail_deviation(seq: &MatrixSeq, xi: i64) -> Result<f64> {
    let w = seq.scalar_limit.ok_or(Error::MissingLimit)?;
    if xi < 0 {
        return Err(Error::InvalidArgument(format!("tail deviation needs xi >= 0, got {xi}")));
    }
    let m = seq.block(xi)?;
    let shifted = m - CMatrix::identity(m.nrows(), m.ncols()) * w;
    Ok(spectral_norm(&shifted))
}

/// Upper bound for [`tail_deviation`] at `ξ ≥ 0` from splitting `[0, 1)` at
/// `x`: `n·max_{m<n} jac_sup_bound(α, ξ, m; x)·(1 + sup|a|) + sup_{t≥x}|a - ω|`.
/// Needs `α > 0`.
pub fn tail_bound(n: usize, alpha: f64, xi: i64, x: f64, sup_a: f64, sup_tail: f64) -> Result<f64> {
    if xi < 0 {
        return Err(Error::InvalidArgument(format!("tail bound needs xi >= 0, got {xi}")));
    }
    let mut worst: f64 = 0.0;
    for m in 0..n {
        let p = crate::jacobi::JacobiParams::new(alpha, xi as f64, m)?;
        worst = worst.max(crate::jacobi::jac_sup_bound(&p, x)?);
    }
    Ok(n as f64 * worst * (1.0 + sup_a) + sup_tail)
}

/// Largest singular value by power iteration on `AᴴA`.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let n = a.ncols();
    if n == 0 {
        return 0.0;
    }
    let max_abs = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_abs == 0.0 {
        return 0.0;
    }
    // Rescaling keeps tiny blocks (deep in a convergent tail) away from
    // underflow in AᴴA.
    let a = a / Complex64::new(max_abs, 0.0);
    let ata = a.adjoint() * &a;
    // Deterministic start with no special alignment to any basis vector.
    let mut v = nalgebra::DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.37 * i as f64, 0.11 * i as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let w = &ata * &v;
        let norm = w.norm();
        if norm == 0.0 {
            break;
        }
        let next = norm;
        v = w / Complex64::new(norm, 0.0);
        let done = (next - lambda).abs() <= POWER_TOL * next;
        lambda = next;
        if done {
            break;
        }
    }
    lambda.sqrt() * max_abs
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[derive(Serialize, Deserialize)]
struct SeqWire {
    n: usize,
    alpha: f64,
    xi_min: i64,
    xi_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symbol: Option<SymbolSpec>,
    matrices: Vec<BlockWire>,
    scalar_limit: Option<ScalarWire>,
}

#[derive(Serialize, Deserialize)]
struct BlockWire {
    xi: i64,
    rows: Vec<Vec<ScalarWire>>,
}

/// A real number, or `[re, im]`.
#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(untagged)]
enum ScalarWire {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Complex64> for ScalarWire {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 && !z.im.is_sign_negative() {
            ScalarWire::Real(z.re)
        } else {
            ScalarWire::Complex([z.re, z.im])
        }
    }
}

impl From<ScalarWire> for Complex64 {
    fn from(s: ScalarWire) -> Self {
        match s {
            ScalarWire::Real(re) => Complex64::new(re, 0.0),
            ScalarWire::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<&MatrixSeq> for SeqWire {
    fn from(s: &MatrixSeq) -> Self {
        SeqWire {
            n: s.n,
            alpha: s.alpha,
            xi_min: s.xi_min(),
            xi_max: s.xi_max,
            symbol: s.symbol.clone(),
            matrices: s
                .mats
                .iter()
                .map(|m| BlockWire {
                    xi: m.xi,
                    rows: m
                        .entries
                        .row_iter()
                        .map(|r| r.iter().map(|&z| z.into()).collect())
                        .collect(),
                })
                .collect(),
            scalar_limit: s.scalar_limit.map(Into::into),
        }
    }
}

impl TryFrom<SeqWire> for MatrixSeq {
    type Error = Error;

    fn try_from(w: SeqWire) -> Result<Self> {
        if w.n == 0 || w.xi_min != 1 - w.n as i64 {
            return Err(Error::InvalidArgument(format!("xi_min must be 1 - n, got {}", w.xi_min)));
        }
        let mats = w
            .matrices
            .into_iter()
            .map(|b| {
                let d = b.rows.len();
                if b.rows.iter().any(|r| r.len() != d) {
                    return Err(Error::InvalidArgument(format!("block {} is not square", b.xi)));
                }
                let entries = CMatrix::from_fn(d, d, |j, k| b.rows[j][k].into());
                Ok(GammaMatrix { xi: b.xi, entries })
            })
            .collect::<Result<Vec<_>>>()?;
        let seq = MatrixSeq {
            n: w.n,
            alpha: w.alpha,
            xi_max: w.xi_max,
            mats,
            scalar_limit: w.scalar_limit.map(Into::into),
            symbol: w.symbol,
        };
        let expected = (seq.xi_max as i64 - seq.xi_min() + 1) as usize;
        if seq.mats.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: seq.mats.len() });
        }
        for (i, m) in seq.mats.iter().enumerate() {
            let xi = seq.xi_min() + i as i64;
            let d = check_frequency(seq.n, xi)?;
            if m.xi != xi || m.order() != d {
                return Err(Error::DimensionMismatch { expected: d, got: m.order() });
            }
        }
        Ok(seq)
    }
}

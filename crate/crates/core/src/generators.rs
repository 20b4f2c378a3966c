//! Antitriangular matrices, matrix units rebuilt from antitriangular
//! generators, and symbolic separating sequences built from `γ(g_k)`.
//!
//! Generators `G_0, …, G_{n-1}` of order `n` qualify when `G_{n-1}` is a
//! nonzero multiple of `E_{n-1,n-1}`, `(G_p)_{n-1,p} ≠ 0` and
//! `(G_p)_{n-1,k} = 0` for `k < p`. Then
//! `E_{n-1,p} = G_{n-1} Σ_{j≥p} ν_{p,j} G_j` and
//! `E_{p,q} = (Σ_j conj(ν_{p,j}) G_jᴴ) G_{n-1}ᴴ G_{n-1} (Σ_k ν_{q,k} G_k)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gammaseq::{gamma_matrix, gamma_sequence, CMatrix, MatrixSeq};
use crate::symbols::make_gp;
use crate::{block_order, Error, Result};

/// Zero / nonzero thresholds, relative to a scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub zero: f64,
    pub nonzero: f64,
    /// Fixed scale; when absent the max |entry| of the matrix (or row) under
    /// test is used, or 1 if that is zero.
    pub scale: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { zero: 1e-10, nonzero: 1e-8, scale: None }
    }
}

impl Tolerances {
    pub fn with_scale(self, scale: f64) -> Self {
        Tolerances { scale: Some(scale), ..self }
    }

    fn scale_for<'a>(&self, values: impl Iterator<Item = &'a Complex64>) -> f64 {
        self.scale.unwrap_or_else(|| {
            let m = values.map(|z| z.norm()).fold(0.0, f64::max);
            if m > 0.0 {
                m
            } else {
                1.0
            }
        })
    }
}

/// Outcome of testing whether a matrix is `p`-antitriangular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntitriangularReport {
    pub p: i64,
    /// Max |entry| with `j+k < p` (0 if there are none).
    pub below_max: f64,
    /// Min |entry| with `j+k = p` (`+∞` if the antidiagonal is empty).
    pub anti_min: f64,
    pub scale: f64,
    pub holds: bool,
    /// `p > 2·order - 2`: the definition then forces the zero matrix.
    pub forces_zero: bool,
}

pub fn antitriangular_report(m: &CMatrix, p: i64, tol: &Tolerances) -> AntitriangularReport {
    let d = m.nrows() as i64;
    let scale = tol.scale_for(m.iter());
    let mut below_max: f64 = 0.0;
    let mut anti_min = f64::INFINITY;
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            let s = (j + k) as i64;
            let a = m[(j, k)].norm();
            if s < p {
                below_max = below_max.max(a);
            } else if s == p {
                anti_min = anti_min.min(a);
            }
        }
    }
    let holds = below_max < tol.zero * scale && anti_min > tol.nonzero * scale;
    AntitriangularReport { p, below_max, anti_min, scale, holds, forces_zero: p > 2 * d - 2 }
}

/// Whether the zero lemma predicts `γ(g_p)_ξ = 0`: `p - |ξ| > 2d - 2`.
pub fn zero_lemma_applies(n: usize, xi: i64, p: usize) -> bool {
    match block_order(n, xi) {
        Some(d) => p as i64 - xi.abs() > 2 * d as i64 - 2,
        None => false,
    }
}

/// The coefficients `ν_{p,j}`, `0 ≤ p ≤ j < n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuTable {
    n: usize,
    nu: Vec<Vec<Complex64>>,
}

impl NuTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `ν_{p,j}`; zero for `j < p`.
    pub fn get(&self, p: usize, j: usize) -> Complex64 {
        self.nu[p][j]
    }

    pub fn is_real(&self) -> bool {
        self.nu.iter().flatten().all(|z| z.im == 0.0)
    }
}

fn check_generators(g: &[CMatrix], tol: &Tolerances) -> Result<usize> {
    let n = g.len();
    if n == 0 {
        return Err(Error::GeneratorPrecondition("no generators given".into()));
    }
    for (i, m) in g.iter().enumerate() {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::GeneratorPrecondition(format!(
                "G_{i} is {}x{}, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let last = &g[n - 1];
    let scale = tol.scale_for(last.iter());
    let corner = last[(n - 1, n - 1)].norm();
    if !(corner > tol.nonzero * scale) {
        return Err(Error::GeneratorPrecondition(format!(
            "G_{} has (G)_{{{},{}}} = {corner:e}, expected nonzero",
            n - 1,
            n - 1,
            n - 1
        )));
    }
    for j in 0..n {
        for k in 0..n {
            if (j, k) != (n - 1, n - 1) && last[(j, k)].norm() >= tol.zero * scale {
                return Err(Error::GeneratorPrecondition(format!(
                    "G_{} is not a multiple of E_{{{},{}}}: entry ({j},{k}) = {:e}",
                    n - 1,
                    n - 1,
                    n - 1,
                    last[(j, k)].norm()
                )));
            }
        }
    }
    for (p, m) in g.iter().enumerate().take(n - 1) {
        let row = m.row(n - 1);
        let scale = tol.scale_for(row.iter());
        let lead = m[(n - 1, p)].norm();
        if !(lead > tol.nonzero * scale) {
            return Err(Error::GeneratorPrecondition(format!(
                "(G_{p})_{{{},{p}}} = {lead:e}, expected nonzero",
                n - 1
            )));
        }
        for k in 0..p {
            if m[(n - 1, k)].norm() >= tol.zero * scale {
                return Err(Error::GeneratorPrecondition(format!(
                    "(G_{p})_{{{},{k}}} = {:e}, expected zero",
                    n - 1,
                    m[(n - 1, k)].norm()
                )));
            }
        }
    }
    Ok(n)
}

/// The `ν` recursion, run in descending `p`.
pub fn nu_table(g: &[CMatrix], tol: &Tolerances) -> Result<NuTable> {
    let n = check_generators(g, tol)?;
    let last = n - 1;
    let corner = g[last][(last, last)];
    let mut nu = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    nu[last][last] = (corner * corner).inv();
    for p in (0..last).rev() {
        let lead = g[p][(last, p)];
        nu[p][p] = (lead * corner).inv();
        for j in p + 1..n {
            let s: Complex64 = (p + 1..=j).map(|q| nu[q][j] * g[p][(last, q)]).sum();
            nu[p][j] = -s / lead;
        }
    }
    Ok(NuTable { n, nu })
}

fn real_symmetric(g: &[CMatrix]) -> bool {
    g.iter().all(|m| m.iter().all(|z| z.im == 0.0) && *m == m.transpose())
}

/// `E_{p,q}` rebuilt from generators and their `ν` table.
pub fn matrix_unit(g: &[CMatrix], nu: &NuTable, p: usize, q: usize) -> Result<CMatrix> {
    let n = nu.n();
    if g.len() != n || p >= n || q >= n {
        return Err(Error::InvalidArgument(format!("matrix unit ({p},{q}) out of range for n = {n}")));
    }
    let combo = |r: usize, conj: bool| -> CMatrix {
        (r..n).fold(CMatrix::zeros(n, n), |acc, j| {
            let c = nu.get(r, j);
            if conj {
                acc + g[j].adjoint() * c.conj()
            } else {
                acc + &g[j] * c
            }
        })
    };
    let last = &g[n - 1];
    let middle = if real_symmetric(g) { last * last } else { last.adjoint() * last };
    Ok(combo(p, true) * middle * combo(q, false))
}

/// `E_{p,q}` of order `n`.
pub fn unit(n: usize, p: usize, q: usize) -> CMatrix {
    let mut e = CMatrix::zeros(n, n);
    e[(p, q)] = Complex64::new(1.0, 0.0);
    e
}

/// Pseudorandom generators with the required structure: `G_p` is
/// `(n-1+p)`-antitriangular with entries uniform in `[-1, 1]`; antidiagonal
/// entries are kept at magnitude at least `1/4`.
pub fn random_antitriangular_generators(n: usize, seed: u64) -> Vec<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|p| {
            let anti = n - 1 + p;
            let mut m = CMatrix::zeros(n, n);
            for j in 0..n {
                for k in 0..n {
                    let v = match (j + k).cmp(&anti) {
                        std::cmp::Ordering::Less => 0.0,
                        std::cmp::Ordering::Equal => {
                            let mag = rng.gen_range(0.25..=1.0);
                            if rng.gen_bool(0.5) {
                                mag
                            } else {
                                -mag
                            }
                        }
                        std::cmp::Ordering::Greater => rng.gen_range(-1.0..=1.0),
                    };
                    m[(j, k)] = Complex64::new(v, 0.0);
                }
            }
            m
        })
        .collect()
}

/// `X = (Σ c_k A_k) · A_mid² · (Σ c'_k A_k)` with `A_k = γ(g_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationPlan {
    pub left: Vec<(f64, usize)>,
    pub middle: usize,
    pub right: Vec<(f64, usize)>,
    pub n: usize,
    pub alpha: f64,
}

impl SeparationPlan {
    fn symbol_indices(&self) -> Vec<usize> {
        let mut ks: Vec<usize> =
            self.left.iter().chain(&self.right).map(|&(_, k)| k).chain([self.middle]).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    fn combine(&self, blocks: &BTreeMap<usize, CMatrix>) -> CMatrix {
        let d = blocks[&self.middle].nrows();
        let sum = |terms: &[(f64, usize)]| {
            terms
                .iter()
                .fold(CMatrix::zeros(d, d), |acc, &(c, k)| acc + &blocks[&k] * Complex64::new(c, 0.0))
        };
        let mid = &blocks[&self.middle];
        sum(&self.left) * mid * mid * sum(&self.right)
    }

    /// The block `X_ξ`.
    pub fn evaluate_at(&self, xi: i64) -> Result<CMatrix> {
        let blocks = self
            .symbol_indices()
            .into_iter()
            .map(|k| Ok((k, gamma_matrix(&make_gp(k, self.alpha)?, self.n, self.alpha, xi)?.entries)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(self.combine(&blocks))
    }

    /// The whole sequence `X`, truncated at `Ξ_max`.
    pub fn evaluate(&self, xi_max: usize) -> Result<MatrixSeq> {
        let seqs = self
            .symbol_indices()
            .into_par_iter()
            .map(|k| Ok((k, gamma_sequence(&make_gp(k, self.alpha)?, self.n, self.alpha, xi_max)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let limit_of = |terms: &[(f64, usize)]| -> Option<Complex64> {
            terms.iter().map(|&(c, k)| seqs[&k].scalar_limit.map(|w| w * c)).sum()
        };
        let limit = match (limit_of(&self.left), seqs[&self.middle].scalar_limit, limit_of(&self.right)) {
            (Some(l), Some(m), Some(r)) => Some(l * m * m * r),
            _ => None,
        };
        let first = &seqs[&self.middle];
        MatrixSeq::from_fn(self.n, self.alpha, xi_max, limit, |xi, _| {
            let idx = (xi - first.xi_min()) as usize;
            let blocks = seqs.iter().map(|(&k, s)| (k, s.mats[idx].entries.clone())).collect();
            Ok(self.combine(&blocks))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad plan JSON: {e}")))
    }
}

fn real_nu(nu: &NuTable, p: usize, j: usize) -> f64 {
    // Real symmetric generators give real coefficients.
    nu.get(p, j).re
}

fn plan_from_generators(
    n: usize,
    alpha: f64,
    at: i64,
    indices: &[usize],
    p: usize,
    q: usize,
    tol: &Tolerances,
) -> Result<SeparationPlan> {
    let g = indices
        .iter()
        .map(|&k| Ok(gamma_matrix(&make_gp(k, alpha)?, n, alpha, at)?.entries))
        .collect::<Result<Vec<_>>>()?;
    let nu = nu_table(&g, tol)?;
    let d = indices.len();
    let combo = |r: usize| (r..d).map(|j| (real_nu(&nu, r, j), indices[j])).collect();
    Ok(SeparationPlan { left: combo(p), middle: indices[d - 1], right: combo(q), n, alpha })
}

/// Plan with `X_ξ = E_{p,q}`, from the generators `γ(g_{d-1+|ξ|+j})_ξ`.
pub fn same_frequency_plan(n: usize, alpha: f64, xi: i64, p: usize, q: usize, tol: &Tolerances) -> Result<SeparationPlan> {
    let d = block_order(n, xi).ok_or(Error::FrequencyOutOfRange { xi, n })?;
    if p >= d || q >= d {
        return Err(Error::InvalidArgument(format!("indices ({p},{q}) out of range for order {d}")));
    }
    let base = d - 1 + xi.unsigned_abs() as usize;
    let indices: Vec<usize> = (0..d).map(|j| base + j).collect();
    plan_from_generators(n, alpha, xi, &indices, p, q, tol)
}

/// Which of the four frequency-pair constructions applies to `ξ < η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossCase {
    /// `0 ≤ ξ < η`.
    BothNonnegative,
    /// `ξ < η < 0`.
    BothNegative,
    /// `-η ≤ ξ < 0`.
    WithinMirror,
    /// `ξ < -η ≤ 0`.
    BeyondMirror,
}

pub fn cross_case(xi: i64, eta: i64) -> Result<CrossCase> {
    if xi >= eta {
        return Err(Error::InvalidArgument(format!("cross-frequency plan needs xi < eta, got {xi} >= {eta}")));
    }
    Ok(if xi >= 0 {
        CrossCase::BothNonnegative
    } else if eta < 0 {
        CrossCase::BothNegative
    } else if xi >= -eta {
        CrossCase::WithinMirror
    } else {
        CrossCase::BeyondMirror
    })
}

/// Plan with `X_η = E_{p,p}` and `X_ξ = 0` for `ξ < η`.
///
/// For `ξ < η < 0` the generators are `γ(g_{n-1+j})_η`, `j < n+η`; otherwise
/// `γ(g_{n-1+η+j})_η`, `j < n`. In both cases the middle factor is
/// `g_{2n-2+η}`, whose block at `ξ` vanishes by the zero lemma.
pub fn cross_frequency_plan(n: usize, alpha: f64, xi: i64, eta: i64, p: usize, tol: &Tolerances) -> Result<SeparationPlan> {
    let case = cross_case(xi, eta)?;
    block_order(n, xi).ok_or(Error::FrequencyOutOfRange { xi, n })?;
    let d = block_order(n, eta).ok_or(Error::FrequencyOutOfRange { xi: eta, n })?;
    if p >= d {
        return Err(Error::InvalidArgument(format!("index {p} out of range for order {d}")));
    }
    let base = match case {
        CrossCase::BothNegative => n - 1,
        _ => n - 1 + eta as usize,
    };
    let indices: Vec<usize> = (0..d).map(|j| base + j).collect();
    plan_from_generators(n, alpha, eta, &indices, p, p, tol)
}

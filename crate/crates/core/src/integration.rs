//! Entry integrals
//! `β_{a,α,ξ,j,k} = k_j k_k ∫_0^1 a(√t) Q_j Q_k (1-t)^α t^{|ξ|} dt`
//! with `Q = Q^{(α,|ξ|)}` and `k = k(α,|ξ|,·)`.
//!
//! Closed-form symbols are integrated exactly: the polynomial product is
//! expanded and summed against Beta moments. Sampled symbols go through the
//! composite Gauss–Legendre rule.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;

use crate::dd::Dd;
use crate::jacobi::{norm_coeff_sq, q_coeffs, JacobiParams, PolyCoeffs};
use crate::quadrature::{gauss_legendre_composite, panel_edges};
use crate::special_fn::{beta, reg_incomplete_beta};
use crate::symbols::SymbolSpec;
use crate::{Error, Result};

/// Largest total monomial degree `k + |ξ|` accepted by the moment cache.
pub const MAX_MOMENT_DEGREE: usize = 192;

/// Radial panels used for sampled symbols.
pub const SAMPLED_PANELS: usize = 256;

/// Key of the moment `∫_0^1 t^k (1-t)^α t^{|ξ|} dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentKey {
    k: usize,
    alpha: f64,
    xi_abs: usize,
}

impl MomentKey {
    pub fn new(k: usize, alpha: f64, xi_abs: usize) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::Domain(format!("moments need alpha > -1, got {alpha}")));
        }
        if k + xi_abs > MAX_MOMENT_DEGREE {
            return Err(Error::UnsupportedDegree { degree: k + xi_abs, max: MAX_MOMENT_DEGREE });
        }
        Ok(MomentKey { k, alpha, xi_abs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn xi_abs(&self) -> usize {
        self.xi_abs
    }

    fn degree(&self) -> usize {
        self.k + self.xi_abs
    }
}

type MomentTable = HashMap<u64, &'static [Dd]>;

fn moment_cache() -> &'static RwLock<MomentTable> {
    static CACHE: OnceLock<RwLock<MomentTable>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `m_N = ∫_0^1 t^N (1-t)^α dt` for `N = 0..=192`, in double-double.
///
/// `m_0 = 1/(α+1)` and `m_N = m_{N-1} · N/(N+α+1)`. Tables are built once per
/// bit pattern of `α` and leaked, so repeated lookups are bitwise identical.
fn moment_table(alpha: f64) -> &'static [Dd] {
    let key = alpha.to_bits();
    if let Some(t) = moment_cache().read().expect("moment cache poisoned").get(&key) {
        return t;
    }
    let mut table = Vec::with_capacity(MAX_MOMENT_DEGREE + 1);
    let mut m = Dd::ONE / (Dd::from(alpha) + 1.0);
    table.push(m);
    for n in 1..=MAX_MOMENT_DEGREE {
        let nf = n as f64;
        m = m * nf / (Dd::from(alpha) + (nf + 1.0));
        table.push(m);
    }
    let mut cache = moment_cache().write().expect("moment cache poisoned");
    cache.entry(key).or_insert_with(|| Box::leak(table.into_boxed_slice()))
}

/// `B(|ξ|+k+1, α+1)`, from the cached recurrence.
pub fn moment(key: &MomentKey) -> f64 {
    moment_table(key.alpha)[key.degree()].to_f64()
}

/// `∫_0^x t^{|ξ|+k} (1-t)^α dt = B(|ξ|+k+1, α+1) · I_x(|ξ|+k+1, α+1)`.
pub fn truncated_moment(key: &MomentKey, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("truncated moment needs 0 <= x <= 1, got {x}")));
    }
    if x == 1.0 {
        return Ok(moment(key));
    }
    let p = key.degree() as f64 + 1.0;
    let q = key.alpha + 1.0;
    Ok(beta(p, q)? * reg_incomplete_beta(x, p, q)?)
}

/// How an entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryStatus {
    /// Exact Beta moments.
    Exact,
    /// Composite quadrature on sampled data.
    Quadrature,
    /// Quadrature with an integrable endpoint singularity (`α < 0`); accuracy
    /// is degraded.
    EndpointSingularity,
}

/// Per-frequency data shared by all entries of one block.
pub(crate) struct BlockBasis {
    alpha: f64,
    xi_abs: usize,
    polys: Vec<PolyCoeffs>,
    norms_sq: Vec<Dd>,
}

impl BlockBasis {
    pub(crate) fn new(alpha: f64, xi_abs: usize, order: usize) -> Result<Self> {
        let mut polys = Vec::with_capacity(order);
        let mut norms_sq = Vec::with_capacity(order);
        for m in 0..order {
            let p = JacobiParams::new(alpha, xi_abs as f64, m)?;
            polys.push(q_coeffs(&p)?);
            norms_sq.push(norm_coeff_sq(&p));
        }
        Ok(BlockBasis { alpha, xi_abs, polys, norms_sq })
    }

    /// `β_{a,α,ξ,j,k}`; symmetric in `(j, k)` by construction.
    pub(crate) fn entry(&self, a: &SymbolSpec, j: usize, k: usize) -> Result<(Complex64, EntryStatus)> {
        let (j, k) = (j.min(k), j.max(k));
        let norm = (self.norms_sq[j] * self.norms_sq[k]).sqrt();
        match a.polynomial_part(self.alpha)? {
            Some((poly, scale, x)) => {
                let integrand = self.polys[j].mul(&self.polys[k]).mul(&poly);
                let total = self.sum_moments(&integrand, x)?;
                Ok((scale * (norm * total).to_f64(), EntryStatus::Exact))
            }
            None => {
                let v = self.quadrature_entry(a, j, k)?;
                let status = if self.alpha < 0.0 {
                    log::warn!("sampled symbol with alpha < 0: endpoint singularity degrades accuracy");
                    EntryStatus::EndpointSingularity
                } else {
                    EntryStatus::Quadrature
                };
                Ok((v * norm.to_f64(), status))
            }
        }
    }

    fn sum_moments(&self, poly: &PolyCoeffs, x: f64) -> Result<Dd> {
        let coeffs = poly.as_dd();
        if self.xi_abs + coeffs.len() - 1 > MAX_MOMENT_DEGREE {
            return Err(Error::UnsupportedDegree {
                degree: self.xi_abs + coeffs.len() - 1,
                max: MAX_MOMENT_DEGREE,
            });
        }
        if x >= 1.0 {
            let table = moment_table(self.alpha);
            Ok(coeffs.iter().enumerate().map(|(i, &c)| c * table[self.xi_abs + i]).sum())
        } else {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let key = MomentKey::new(i, self.alpha, self.xi_abs)?;
                    Ok(c * truncated_moment(&key, x)?)
                })
                .sum::<Result<Dd>>()
        }
    }

    fn quadrature_entry(&self, a: &SymbolSpec, j: usize, k: usize) -> Result<Complex64> {
        let edges = panel_edges(0.0, 1.0, SAMPLED_PANELS, &a.breakpoints());
        let (qj, qk) = (&self.polys[j], &self.polys[k]);
        let (alpha, xi) = (self.alpha, self.xi_abs as i32);
        let weight = move |t: f64| qj.eval(t) * qk.eval(t) * (1.0 - t).powf(alpha) * t.powi(xi);
        // Nodes are interior, so eval_at_t cannot fail.
        let part = |f: fn(Complex64) -> f64| {
            gauss_legendre_composite(
                |t| weight(t) * f(a.eval_at_t(t, alpha).unwrap_or_default()),
                &edges,
            )
        };
        Ok(Complex64::new(part(|v| v.re), part(|v| v.im)))
    }
}

/// `β_{a,α,ξ,j,k}`.
pub fn beta_entry(a: &SymbolSpec, alpha: f64, xi: i64, j: usize, k: usize) -> Result<Complex64> {
    Ok(beta_entry_with_status(a, alpha, xi, j, k)?.0)
}

/// [`beta_entry`] together with how it was computed.
pub fn beta_entry_with_status(
    a: &SymbolSpec,
    alpha: f64,
    xi: i64,
    j: usize,
    k: usize,
) -> Result<(Complex64, EntryStatus)> {
    let basis = BlockBasis::new(alpha, xi.unsigned_abs() as usize, j.max(k) + 1)?;
    basis.entry(a, j, k)
}

/// `∫_0^1 Q_p Q_q (1-t)^α t^β dt` for integer `β ≥ 0`, from exact moments.
pub fn weighted_inner_product(alpha: f64, beta: usize, p: usize, q: usize) -> Result<f64> {
    let qp = q_coeffs(&JacobiParams::new(alpha, beta as f64, p)?)?;
    let qq = q_coeffs(&JacobiParams::new(alpha, beta as f64, q)?)?;
    let basis = BlockBasis { alpha, xi_abs: beta, polys: Vec::new(), norms_sq: Vec::new() };
    Ok(basis.sum_moments(&qp.mul(&qq), 1.0)?.to_f64())
}

/// `∫_0^1 Q_m^{(α,ξ)}(t) f(t) (1-t)^α t^ξ dt` for a polynomial `f`.
pub fn integrate_against_q(alpha: f64, xi: usize, m: usize, f: &PolyCoeffs) -> Result<f64> {
    let q = q_coeffs(&JacobiParams::new(alpha, xi as f64, m)?)?;
    let basis = BlockBasis { alpha, xi_abs: xi, polys: Vec::new(), norms_sq: Vec::new() };
    Ok(basis.sum_moments(&q.mul(f), 1.0)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::make_gp;

    fn key(k: usize, a: f64, x: usize) -> MomentKey {
        MomentKey::new(k, a, x).unwrap()
    }

    #[test]
    fn moment_examples() {
        assert!((moment(&key(0, 0.0, 0)) - 1.0).abs() < 1e-16);
        assert!((moment(&key(0, 0.0, 1)) - 0.5).abs() < 1e-16);
        assert!((moment(&key(1, 1.0, 0)) - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn moment_matches_log_gamma_route() {
        for &a in &[-0.5, 0.0, 0.5, 2.5, 9.0] {
            for n in [0, 3, 17, 60, 150] {
                let m = moment(&key(n, a, 0));
                let b = beta(n as f64 + 1.0, a + 1.0).unwrap();
                assert!((m - b).abs() <= 1e-12 * b, "alpha {a}, n {n}");
            }
        }
    }

    #[test]
    fn moment_key_guard() {
        assert!(MomentKey::new(100, 0.0, 92).is_ok());
        assert!(matches!(MomentKey::new(100, 0.0, 93), Err(Error::UnsupportedDegree { .. })));
        assert!(MomentKey::new(0, -1.0, 0).is_err());
    }

    #[test]
    fn truncated_moment_examples() {
        let k = key(0, 0.0, 1);
        assert_eq!(truncated_moment(&k, 1.0).unwrap(), moment(&k));
        assert_eq!(truncated_moment(&k, 0.0).unwrap(), 0.0);
        assert!((truncated_moment(&k, 0.25).unwrap() - 1.0 / 32.0).abs() < 1e-15);
        assert!(truncated_moment(&k, 1.5).is_err());
    }

    #[test]
    fn entry_examples() {
        let one = SymbolSpec::constant(1.0);
        for j in 0..4 {
            for k in 0..4 {
                let v = beta_entry(&one, 0.5, 2, j, k).unwrap();
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((v.re - want).abs() < 1e-14 && v.im == 0.0);
            }
        }
        let g1 = make_gp(1, 0.0).unwrap();
        let v = beta_entry(&g1, 0.0, 0, 0, 1).unwrap();
        assert!((v.re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let ind = SymbolSpec::indicator(0.5).unwrap();
        let v = beta_entry(&ind, 0.0, 1, 0, 0).unwrap();
        assert!((v.re - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn complex_constant_scales_identity() {
        let c = SymbolSpec::Const(Complex64::new(0.5, -2.0));
        let v = beta_entry(&c, 1.0, -1, 1, 1).unwrap();
        assert!((v - Complex64::new(0.5, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn sampled_path_agrees_with_exact() {
        let p = SymbolSpec::poly_t(&[0.2, -1.0, 3.0, -0.7]).unwrap();
        let s = p.resample(1.0, 2048).unwrap();
        for (xi, j, k) in [(0, 0, 0), (1, 0, 2), (3, 1, 1), (-2, 1, 0)] {
            let exact = beta_entry(&p, 1.0, xi, j, k).unwrap();
            let (quad, status) = beta_entry_with_status(&s, 1.0, xi, j, k).unwrap();
            assert_eq!(status, EntryStatus::Quadrature);
            assert!((exact - quad).norm() < 1e-6, "{exact} vs {quad}");
        }
    }

    #[test]
    fn sampled_with_negative_alpha_is_flagged() {
        let s = SymbolSpec::sampled(vec![(0.0, Complex64::new(1.0, 0.0))], None).unwrap();
        let (_, status) = beta_entry_with_status(&s, -0.5, 0, 0, 0).unwrap();
        assert_eq!(status, EntryStatus::EndpointSingularity);
    }

    #[test]
    fn entries_are_symmetric_bitwise() {
        let p = SymbolSpec::poly_t(&[0.1, 0.7, -2.0]).unwrap();
        let ind = SymbolSpec::indicator(0.6).unwrap();
        for a in [&p, &ind] {
            for (j, k) in [(0, 3), (1, 2), (2, 4)] {
                assert_eq!(beta_entry(a, 0.5, 3, j, k).unwrap(), beta_entry(a, 0.5, 3, k, j).unwrap());
            }
        }
    }

    #[test]
    fn integer_beta_moment_identity() {
        // ∫ Q_m^{(α,ξ)} t^m (1-t)^α t^ξ dt = B(ξ+m+1, α+m+1)
        for &a in &[0.0, 1.0, 2.5] {
            for xi in 0..5 {
                for m in 0..6 {
                    let mut c = vec![0.0; m + 1];
                    c[m] = 1.0;
                    let got = integrate_against_q(a, xi, m, &PolyCoeffs::from_f64(&c)).unwrap();
                    let want = beta((xi + m) as f64 + 1.0, a + m as f64 + 1.0).unwrap();
                    assert!((got - want).abs() <= 1e-10 * want);
                }
            }
        }
    }
}

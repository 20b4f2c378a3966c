//! Brute-force 2D quadrature on the unit disk, used to cross-check the
//! β entries.
//!
//! The disk polynomials
//! `b_{p,q}(re^{iθ}) = k(α,|p-q|,min{p,q})/√(α+1) · r^{|p-q|} e^{i(p-q)θ} Q_{min{p,q}}^{(α,|p-q|)}(r²)`
//! are an orthonormal basis of `L²(D, μ_α)` with
//! `dμ_α = (α+1)/π (1-|z|²)^α dA`. Nothing here touches the moment tables:
//! `Q` comes from the three-term recurrence, the norm constant from
//! log-gamma, and the integral from a tensor grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::jacobi::{jac_norm_coeff_gamma, JacobiParams};
use crate::quadrature::{gauss_legendre_nodes, pairwise_sum, panel_edges};
use crate::symbols::SymbolSpec;
use crate::{Error, Result};

/// `z = r e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    r: f64,
    theta: f64,
}

impl DiskPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!("disk point needs 0 <= r < 1, got {r}")));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("angle must be finite, got {theta}")));
        }
        Ok(DiskPoint { r, theta: theta.rem_euclid(2.0 * PI) })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Geometric refinement of the panel next to `t = 1`, where `(1-t)^α` is not
/// smooth for non-integer `α`.
const GRADING_RATIO: f64 = 0.7;
const GRADING_LEVELS: i32 = 130;

/// Panel edges in `s = 1 - t`, graded geometrically toward `s = 0`.
fn radial_edges(panels: usize, breakpoints: &[f64]) -> Vec<f64> {
    let flipped: Vec<f64> = breakpoints.iter().map(|b| 1.0 - b).collect();
    let mut edges = panel_edges(0.0, 1.0, panels, &flipped);
    let h = edges[1];
    edges.extend((1..=GRADING_LEVELS).map(|k| h * GRADING_RATIO.powi(k)));
    edges.sort_by(f64::total_cmp);
    edges
}

/// Quadrature grid for [`toeplitz_entry_2d`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadGrid {
    pub radial_panels: usize,
    pub angular_nodes: usize,
}

impl QuadGrid {
    pub const DEFAULT_RADIAL_PANELS: usize = 256;

    /// Smallest alias-free angular grid for the given index pairs.
    pub fn for_indices(row: (usize, usize), col: (usize, usize)) -> Self {
        QuadGrid {
            radial_panels: Self::DEFAULT_RADIAL_PANELS,
            angular_nodes: row.0.abs_diff(row.1) + col.0.abs_diff(col.1) + 2,
        }
    }
}

/// `P_m^{(a,b)}(2t-1)` by the classical recurrence.
fn jacobi_recurrence(a: f64, b: f64, m: usize, t: f64) -> f64 {
    let x = 2.0 * t - 1.0;
    let mut p0 = 1.0;
    if m == 0 {
        return p0;
    }
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=m {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let lhs = 2.0 * k * (k + a + b) * (c - 2.0);
        let p2 = ((c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p1
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0)
            / lhs;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn radial_part(p: usize, q: usize, alpha: f64, t: f64) -> Result<f64> {
    let beta = p.abs_diff(q);
    let m = p.min(q);
    let k = jac_norm_coeff_gamma(&JacobiParams::new(alpha, beta as f64, m)?);
    Ok(k / (alpha + 1.0).sqrt() * t.powf(beta as f64 / 2.0) * jacobi_recurrence(alpha, beta as f64, m, t))
}

fn angular_part(p: usize, q: usize, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, (p as f64 - q as f64) * theta)
}

/// `b_{p,q}^{(α)}(z)`.
pub fn disk_poly(p: usize, q: usize, alpha: f64, pt: &DiskPoint) -> Result<Complex64> {
    Ok(angular_part(p, q, pt.theta) * radial_part(p, q, alpha, pt.r * pt.r)?)
}

/// `b_{p,q}^{(α)}(z)` through the Jacobi function:
/// `J_{min}^{(α,|p-q|)}(r²) e^{i(p-q)θ} (1-r²)^{-α/2} / √(α+1)`.
pub fn disk_poly_via_jac(p: usize, q: usize, alpha: f64, pt: &DiskPoint) -> Result<Complex64> {
    let t = pt.r * pt.r;
    let params = JacobiParams::new(alpha, p.abs_diff(q) as f64, p.min(q))?;
    let j = crate::jacobi::jac_fn_eval(&params, t)?;
    Ok(angular_part(p, q, pt.theta) * j * (1.0 - t).powf(-alpha / 2.0) / (alpha + 1.0).sqrt())
}

/// Index pair `(max{j+ξ, j}, max{j-ξ, j})` of the `j`-th basis function at
/// frequency `ξ`.
pub fn basis_index(xi: i64, j: usize) -> (usize, usize) {
    let j = j as i64;
    ((j + xi).max(j) as usize, (j - xi).max(j) as usize)
}

/// `⟨ã b_{p2,q2}, b_{p,q}⟩` in `L²(D, μ_α)` by tensor quadrature: a uniform
/// angular grid times composite Gauss–Legendre in `t = r²`, where
/// `dμ_α = (α+1)(1-t)^α dt dθ/2π`. The radial rule runs in `s = 1 - t` so
/// the weight `s^α` is exact near the boundary, and the panel there is graded
/// geometrically.
pub fn toeplitz_entry_2d(
    a: &SymbolSpec,
    alpha: f64,
    row: (usize, usize),
    col: (usize, usize),
    grid: QuadGrid,
) -> Result<Complex64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("alpha must exceed -1, got {alpha}")));
    }
    let required = row.0.abs_diff(row.1) + col.0.abs_diff(col.1) + 2;
    if grid.angular_nodes < required {
        return Err(Error::Aliasing { required, got: grid.angular_nodes });
    }
    let nodes = gauss_legendre_nodes(&radial_edges(grid.radial_panels, &a.breakpoints()));
    let thetas: Vec<f64> =
        (0..grid.angular_nodes).map(|i| 2.0 * PI * i as f64 / grid.angular_nodes as f64).collect();
    let terms: Vec<Complex64> = nodes
        .par_iter()
        .map(|&(s, w)| -> Result<Complex64> {
            // Nodes this close to the boundary round to t = 1.
            let t = (1.0 - s).min(1.0 - f64::EPSILON / 2.0);
            let symbol = a.eval_at_t(t, alpha)?;
            let radial = radial_part(col.0, col.1, alpha, t)? * radial_part(row.0, row.1, alpha, t)?;
            let (re, im): (Vec<f64>, Vec<f64>) = thetas
                .iter()
                .map(|&th| {
                    let z = angular_part(col.0, col.1, th) * angular_part(row.0, row.1, th).conj();
                    (z.re, z.im)
                })
                .unzip();
            let ang = Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) / grid.angular_nodes as f64;
            Ok(symbol * ang * (w * radial * (alpha + 1.0) * s.powf(alpha)))
        })
        .collect::<Result<_>>()?;
    let re: Vec<f64> = terms.iter().map(|z| z.re).collect();
    let im: Vec<f64> = terms.iter().map(|z| z.im).collect();
    Ok(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)))
}

/// [`toeplitz_entry_2d`] on the `(j, k)` pair of frequency `ξ`, with the
/// default grid.
pub fn oracle_beta_entry(a: &SymbolSpec, alpha: f64, xi: i64, j: usize, k: usize) -> Result<Complex64> {
    let row = basis_index(xi, j);
    let col = basis_index(xi, k);
    toeplitz_entry_2d(a, alpha, row, col, QuadGrid::for_indices(row, col))
}

//! Radial generating symbols, stored in the variable `t = r²`.
//!
//! A symbol `a` on `[0, 1)` is represented by the function `t ↦ a(√t)`, which
//! is the form that enters every entry integral.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::jacobi::{q_coeffs, JacobiParams, PolyCoeffs, MAX_DEGREE};
use crate::{Error, Result};

/// A radial symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolWire", into = "SymbolWire")]
pub enum SymbolSpec {
    /// The constant function.
    Const(Complex64),
    /// `1_{[0,s)}` in `r`, i.e. `1_{[0,s²)}` in `t`.
    Indicator { s: f64 },
    /// `a(√t) = Σ c_k t^k`.
    PolyT(PolyCoeffs),
    /// `g_{p,α}(r) = Q_p^{(α,0)}(r²)`; `α` is supplied at evaluation time.
    JacobiG { p: usize },
    /// Linear interpolation through `(t, value)` pairs.
    Sampled { points: Vec<(f64, Complex64)>, limit: Option<Complex64> },
}

/// `g_{p,α}` expanded to a `PolyT` (in `t` the substitution `r²` is the
/// identity, so the coefficients are those of `Q_p^{(α,0)}`).
pub fn make_gp(p: usize, alpha: f64) -> Result<SymbolSpec> {
    Ok(SymbolSpec::PolyT(q_coeffs(&JacobiParams::new(alpha, 0.0, p)?)?))
}

impl SymbolSpec {
    pub fn constant(value: f64) -> Self {
        SymbolSpec::Const(Complex64::new(value, 0.0))
    }

    pub fn indicator(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidArgument(format!("indicator needs 0 < s < 1, got {s}")));
        }
        Ok(SymbolSpec::Indicator { s })
    }

    pub fn poly_t(coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::UnsupportedDegree { degree: coeffs.len() - 1, max: MAX_DEGREE });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("poly_t coefficients must be finite".into()));
        }
        Ok(SymbolSpec::PolyT(PolyCoeffs::from_f64(coeffs)))
    }

    pub fn jacobi_g(p: usize) -> Result<Self> {
        if p > MAX_DEGREE {
            return Err(Error::UnsupportedDegree { degree: p, max: MAX_DEGREE });
        }
        Ok(SymbolSpec::JacobiG { p })
    }

    pub fn sampled(points: Vec<(f64, Complex64)>, limit: Option<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("sampled symbol needs at least one point".into()));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidArgument(
                    "sampled t-values must be strictly increasing".into(),
                ));
            }
        }
        if !(points[0].0 >= 0.0 && points[points.len() - 1].0 < 1.0) {
            return Err(Error::InvalidArgument("sampled t-values must lie in [0, 1)".into()));
        }
        if points.iter().any(|(_, v)| !v.is_finite()) || limit.is_some_and(|l| !l.is_finite()) {
            return Err(Error::InvalidArgument("sampled values must be finite".into()));
        }
        Ok(SymbolSpec::Sampled { points, limit })
    }

    /// Wraps an already built symbol's values on a uniform grid of `count`
    /// points in `[0, 1)` as a `Sampled` symbol.
    pub fn resample(&self, alpha: f64, count: usize) -> Result<Self> {
        let count = count.max(2);
        let points = (0..count)
            .map(|i| {
                let t = i as f64 / count as f64;
                Ok((t, self.eval_at_t(t, alpha)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::sampled(points, self.boundary_limit(alpha)?)
    }

    /// `Some((poly, scale, x))` when `a(√t) = scale · poly(t) · 1_{[0,x)}(t)`
    /// on `[0, 1)`; `None` for sampled data.
    pub fn polynomial_part(&self, alpha: f64) -> Result<Option<(PolyCoeffs, Complex64, f64)>> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            SymbolSpec::Const(v) => Some((PolyCoeffs::constant(1.0), *v, 1.0)),
            SymbolSpec::Indicator { s } => Some((PolyCoeffs::constant(1.0), one, s * s)),
            SymbolSpec::PolyT(c) => Some((c.clone(), one, 1.0)),
            SymbolSpec::JacobiG { p } => {
                Some((q_coeffs(&JacobiParams::new(alpha, 0.0, *p)?)?, one, 1.0))
            }
            SymbolSpec::Sampled { .. } => None,
        })
    }

    /// `a(√t)` for `t ∈ [0, 1)`.
    pub fn eval_at_t(&self, t: f64, alpha: f64) -> Result<Complex64> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::Domain(format!("symbols are evaluated on [0, 1), got t = {t}")));
        }
        Ok(match self {
            SymbolSpec::Const(v) => *v,
            SymbolSpec::Indicator { s } => Complex64::new(if t < s * s { 1.0 } else { 0.0 }, 0.0),
            SymbolSpec::PolyT(c) => Complex64::new(c.eval(t), 0.0),
            SymbolSpec::JacobiG { p } => {
                Complex64::new(q_coeffs(&JacobiParams::new(alpha, 0.0, *p)?)?.eval(t), 0.0)
            }
            SymbolSpec::Sampled { points, limit } => interpolate(points, *limit, t),
        })
    }

    /// The boundary value `ω = lim_{r→1} a(r)`, when it is known.
    pub fn boundary_limit(&self, alpha: f64) -> Result<Option<Complex64>> {
        Ok(match self {
            SymbolSpec::Const(v) => Some(*v),
            SymbolSpec::Indicator { .. } => Some(Complex64::new(0.0, 0.0)),
            SymbolSpec::PolyT(c) => Some(Complex64::new(c.sum().to_f64(), 0.0)),
            SymbolSpec::JacobiG { p } => {
                let c = q_coeffs(&JacobiParams::new(alpha, 0.0, *p)?)?;
                Some(Complex64::new(c.sum().to_f64(), 0.0))
            }
            SymbolSpec::Sampled { limit, .. } => *limit,
        })
    }

    /// Upper bound for `sup_{0≤t<1} |a(√t)|`.
    ///
    /// Exact for constants, indicators, `g_p` and sampled data. For `PolyT`
    /// it is the maximum over a 16385-point grid plus half a grid step times
    /// a bound on the derivative.
    pub fn sup_abs(&self, alpha: f64) -> Result<f64> {
        Ok(match self {
            SymbolSpec::Const(v) => v.norm(),
            SymbolSpec::Indicator { .. } => 1.0,
            // max |P_p^{(α,0)}| on [-1,1] is C(p + max(α,0), p).
            SymbolSpec::JacobiG { p } => {
                let q = alpha.max(0.0);
                (1..=*p).map(|i| (q + i as f64) / i as f64).product()
            }
            SymbolSpec::PolyT(c) => poly_sup_bound(c),
            SymbolSpec::Sampled { points, limit } => points
                .iter()
                .map(|(_, v)| v.norm())
                .chain(limit.map(|l| l.norm()))
                .fold(0.0, f64::max),
        })
    }

    /// Points of `[0, 1)` (in `t`) where the symbol may be non-smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            SymbolSpec::Indicator { s } => vec![s * s],
            SymbolSpec::Sampled { points, .. } => points.iter().map(|p| p.0).collect(),
            _ => Vec::new(),
        }
    }

    /// True when every value of the symbol is real.
    pub fn is_real(&self) -> bool {
        match self {
            SymbolSpec::Const(v) => v.im == 0.0,
            SymbolSpec::Sampled { points, limit } => {
                points.iter().all(|(_, v)| v.im == 0.0) && limit.is_none_or(|l| l.im == 0.0)
            }
            _ => true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad symbol JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbol serialization cannot fail")
    }
}

fn poly_sup_bound(c: &PolyCoeffs) -> f64 {
    const GRID: usize = 16_384;
    let coeffs = c.to_f64();
    let grid_max = (0..=GRID)
        .map(|i| c.eval(i as f64 / GRID as f64).abs())
        .fold(0.0, f64::max);
    let deriv_bound: f64 = coeffs.iter().enumerate().map(|(k, a)| k as f64 * a.abs()).sum();
    grid_max + 0.5 * deriv_bound / GRID as f64
}

fn interpolate(points: &[(f64, Complex64)], limit: Option<Complex64>, t: f64) -> Complex64 {
    let first = points[0];
    if t <= first.0 {
        return first.1;
    }
    let idx = points.partition_point(|p| p.0 <= t);
    let (lo, hi) = match points.get(idx) {
        Some(&hi) => (points[idx - 1], hi),
        None => {
            let last = points[points.len() - 1];
            match limit {
                Some(l) => (last, (1.0, l)),
                None => return last.1,
            }
        }
    };
    let w = (t - lo.0) / (hi.0 - lo.0);
    lo.1 * (1.0 - w) + hi.1 * w
}

/// JSON scalar: a bare number, or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Scalar(Complex64);

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            self.0.re.serialize(s)
        } else {
            [self.0.re, self.0.im].serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Real(f64),
            Pair([f64; 2]),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Real(re) => Scalar(Complex64::new(re, 0.0)),
            Raw::Pair([re, im]) => Scalar(Complex64::new(re, im)),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SymbolWire {
    Const {
        value: Scalar,
    },
    Indicator {
        s: f64,
    },
    PolyT {
        coeffs: Vec<f64>,
    },
    JacobiG {
        p: usize,
    },
    Sampled {
        points: Vec<(f64, Scalar)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit: Option<Scalar>,
    },
}

impl TryFrom<SymbolWire> for SymbolSpec {
    type Error = Error;

    fn try_from(w: SymbolWire) -> Result<Self> {
        match w {
            SymbolWire::Const { value } => Ok(SymbolSpec::Const(value.0)),
            SymbolWire::Indicator { s } => SymbolSpec::indicator(s),
            SymbolWire::PolyT { coeffs } => SymbolSpec::poly_t(&coeffs),
            SymbolWire::JacobiG { p } => SymbolSpec::jacobi_g(p),
            SymbolWire::Sampled { points, limit } => SymbolSpec::sampled(
                points.into_iter().map(|(t, v)| (t, v.0)).collect(),
                limit.map(|l| l.0),
            ),
        }
    }
}

impl From<SymbolSpec> for SymbolWire {
    fn from(s: SymbolSpec) -> Self {
        match s {
            SymbolSpec::Const(v) => SymbolWire::Const { value: Scalar(v) },
            SymbolSpec::Indicator { s } => SymbolWire::Indicator { s },
            SymbolSpec::PolyT(c) => SymbolWire::PolyT { coeffs: c.to_f64() },
            SymbolSpec::JacobiG { p } => SymbolWire::JacobiG { p },
            SymbolSpec::Sampled { points, limit } => SymbolWire::Sampled {
                points: points.into_iter().map(|(t, v)| (t, Scalar(v))).collect(),
                limit: limit.map(Scalar),
            },
        }
    }
}

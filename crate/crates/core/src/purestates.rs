//! Pure states `σ_{ξ,u}(A) = ⟨A_ξ u, u⟩` and `σ_∞(A) = ω` on matrix
//! sequences, and constructive separation of pairs of them.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::gammaseq::{gamma_sequence, CMatrix, MatrixSeq};
use crate::generators::{cross_frequency_plan, same_frequency_plan, SeparationPlan, Tolerances};
use crate::integration::beta_entry;
use crate::jacobi::{jac_fn_eval, JacobiParams};
use crate::symbols::SymbolSpec;
use crate::{block_order, Error, Result};

/// Minimum gap reported as a successful separation.
pub const SEPARATION_GAP: f64 = 1e-8;

const UNIT_TOL: f64 = 1e-12;
const INDEP_TOL: f64 = 1e-10;

/// A pure state of the limit algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum PureStateId {
    Finite { xi: i64, u: Vec<Complex64> },
    Infinity,
}

impl PureStateId {
    /// `σ_{ξ,u}`; `u` must have unit norm.
    pub fn finite(xi: i64, u: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&u);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidArgument(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(PureStateId::Finite { xi, u })
    }

    /// `σ_{ξ,u/‖u‖}`.
    pub fn finite_normalized(xi: i64, u: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&u);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("state vector must be nonzero and finite".into()));
        }
        Ok(PureStateId::Finite { xi, u: u.into_iter().map(|z| z / norm).collect() })
    }

    /// `σ_{ξ,e_j}` for a block of order `d`.
    pub fn basis(xi: i64, d: usize, j: usize) -> Self {
        let mut u = vec![Complex64::new(0.0, 0.0); d];
        u[j] = Complex64::new(1.0, 0.0);
        PureStateId::Finite { xi, u }
    }

    /// Checks the vector dimension against `min(n+ξ, n)`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if let PureStateId::Finite { xi, u } = self {
            let d = block_order(n, *xi).ok_or(Error::FrequencyOutOfRange { xi: *xi, n })?;
            if u.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: u.len() });
            }
        }
        Ok(())
    }

    /// Equality as functionals: same frequency and vectors equal up to a
    /// unimodular factor.
    pub fn same_state(&self, other: &PureStateId) -> bool {
        match (self, other) {
            (PureStateId::Infinity, PureStateId::Infinity) => true,
            (PureStateId::Finite { xi: a, u }, PureStateId::Finite { xi: b, u: v }) => {
                a == b && u.len() == v.len() && proportional(u, v)
            }
            _ => false,
        }
    }
}

fn vec_norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn proportional(u: &[Complex64], v: &[Complex64]) -> bool {
    (0..u.len()).all(|j| (j + 1..u.len()).all(|k| (u[j] * v[k] - u[k] * v[j]).norm() <= INDEP_TOL))
}

impl fmt::Display for PureStateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PureStateId::Infinity => write!(f, "inf"),
            PureStateId::Finite { xi, u } => {
                let parts: Vec<String> = u
                    .iter()
                    .map(|z| if z.im == 0.0 { format!("{}", z.re) } else { format!("{}{:+}i", z.re, z.im) })
                    .collect();
                write!(f, "{xi}:{}", parts.join(","))
            }
        }
    }
}

/// Parses `inf` or `<xi>:<c0>,<c1>,…` with components such as `0.5`,
/// `-1e-3`, `0.5-0.5i`, `2i`. The vector is normalized.
impl FromStr for PureStateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(PureStateId::Infinity);
        }
        let (xi, vec) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("state '{s}' is not 'inf' or '<xi>:<vector>'")))?;
        let xi: i64 = xi
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad frequency '{xi}'")))?;
        let u = vec.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
        PureStateId::finite_normalized(xi, u)
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidArgument(format!("bad complex number '{text}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not an exponent sign or the leading one.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => {
            let re: f64 = body[..i].parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[i..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn quadratic_form(m: &CMatrix, u: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..u.len() {
        for k in 0..u.len() {
            acc += u[j].conj() * m[(j, k)] * u[k];
        }
    }
    acc
}

/// `σ(A)`.
pub fn eval_state(s: &PureStateId, a: &MatrixSeq) -> Result<Complex64> {
    match s {
        PureStateId::Infinity => a.scalar_limit.ok_or(Error::MissingLimit),
        PureStateId::Finite { xi, u } => {
            let m = a.block(*xi)?;
            if m.nrows() != u.len() {
                return Err(Error::DimensionMismatch { expected: m.nrows(), got: u.len() });
            }
            Ok(quadratic_form(m, u))
        }
    }
}

/// `∫_0^1 a(√t) |F_{α,ξ,u}(t)|² dt`, expanded as `Σ conj(u_j) u_k β_{a,α,ξ,j,k}`.
pub fn eval_state_integral(xi: i64, u: &[Complex64], a: &SymbolSpec, n: usize, alpha: f64) -> Result<Complex64> {
    let d = block_order(n, xi).ok_or(Error::FrequencyOutOfRange { xi, n })?;
    if u.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: u.len() });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..d {
        for k in 0..d {
            acc += u[j].conj() * beta_entry(a, alpha, xi, j, k)? * u[k];
        }
    }
    Ok(acc)
}

/// `F_{α,ξ,u}(t) = Σ_k u_k J_k^{(α,|ξ|)}(t)`.
pub fn state_profile(xi: i64, u: &[Complex64], alpha: f64, t: f64) -> Result<Complex64> {
    let beta = xi.unsigned_abs() as f64;
    u.iter()
        .enumerate()
        .map(|(k, &c)| Ok(c * jac_fn_eval(&JacobiParams::new(alpha, beta, k)?, t)?))
        .sum()
}

/// Indices `(p, q)` with `u_p conj(u_q) ≠ v_p conj(v_q)`.
pub fn witness_indices(u: &[Complex64], v: &[Complex64]) -> Result<(usize, usize)> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), got: v.len() });
    }
    if proportional(u, v) {
        return Err(Error::NotSeparable("state vectors are proportional".into()));
    }
    let p = u
        .iter()
        .position(|z| z.norm() > INDEP_TOL)
        .ok_or_else(|| Error::InvalidArgument("zero state vector".into()))?;
    if (v[p].norm() - u[p].norm()).abs() > INDEP_TOL {
        return Ok((p, p));
    }
    let tau = v[p] / u[p];
    let q = (0..u.len())
        .find(|&q| (v[q] - tau * u[q]).norm() > INDEP_TOL)
        .ok_or_else(|| Error::NotSeparable("state vectors are proportional".into()))?;
    Ok((p, q))
}

/// The separating element behind a [`Separation`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `γ(a)` for a single symbol.
    Symbol { symbol: SymbolSpec },
    /// `Σ c_i X_i` where `X_i` evaluates a plan; coefficients as `[re, im]`.
    Plans { terms: Vec<([f64; 2], SeparationPlan)> },
}

/// A witness sequence and the two state values on it.
#[derive(Debug, Clone)]
pub struct Separation {
    pub witness: Witness,
    pub sequence: MatrixSeq,
    pub values: (Complex64, Complex64),
}

impl Separation {
    pub fn gap(&self) -> f64 {
        (self.values.0 - self.values.1).norm()
    }

    pub fn separates(&self) -> bool {
        self.gap() > SEPARATION_GAP
    }
}

/// The vector `[√((α+3)/(2(α+2))), √((α+1)/(2(α+2))), 0, …]`.
fn coincidence_vector(n: usize, alpha: f64) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = Complex64::new(((alpha + 3.0) / (2.0 * (alpha + 2.0))).sqrt(), 0.0);
    u[1] = Complex64::new(((alpha + 1.0) / (2.0 * (alpha + 2.0))).sqrt(), 0.0);
    u
}

/// `(σ_{0,u}, σ_{2,e_0})`, which agree on every `γ(a)`.
pub fn coincidence_pair(n: usize, alpha: f64) -> Result<(PureStateId, PureStateId)> {
    if n < 2 {
        return Err(Error::Unsupported("the coincidence pair needs n >= 2".into()));
    }
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("alpha must exceed -1, got {alpha}")));
    }
    Ok((
        PureStateId::Finite { xi: 0, u: coincidence_vector(n, alpha) },
        PureStateId::basis(2, n, 0),
    ))
}

/// `(σ_{-η,e_0}, σ_{η,e_0})` for `1 ≤ η ≤ n-1`; `γ(a)_{-η}` is the leading
/// block of `γ(a)_η`.
pub fn mirror_coincidence_pair(n: usize, eta: i64) -> Result<(PureStateId, PureStateId)> {
    if !(1..n as i64).contains(&eta) {
        return Err(Error::Unsupported(format!("mirror pair needs 1 <= eta <= n-1, got eta = {eta}, n = {n}")));
    }
    let d = n - eta as usize;
    Ok((PureStateId::basis(-eta, d, 0), PureStateId::basis(eta, n, 0)))
}

/// Whether `{s1, s2}` is one of the two documented coincidence families
/// (up to order and unimodular phase).
pub fn is_documented_coincidence(s1: &PureStateId, s2: &PureStateId, n: usize, alpha: f64) -> bool {
    let matches = |a: &PureStateId, b: &PureStateId, (x, y): (PureStateId, PureStateId)| {
        (a.same_state(&x) && b.same_state(&y)) || (a.same_state(&y) && b.same_state(&x))
    };
    if let Ok(pair) = coincidence_pair(n, alpha) {
        if matches(s1, s2, pair) {
            return true;
        }
    }
    (1..n as i64).any(|eta| mirror_coincidence_pair(n, eta).is_ok_and(|pair| matches(s1, s2, pair)))
}

/// `X` with `X_2 = I_n` and every other block zero; limit 0.
pub fn closure_gap_witness(n: usize, alpha: f64, xi_max: usize) -> Result<MatrixSeq> {
    if n < 2 {
        return Err(Error::Unsupported("the closure-gap witness needs n >= 2".into()));
    }
    if xi_max < 2 {
        return Err(Error::InsufficientTruncation { xi: 2, needed: 2, xi_max });
    }
    MatrixSeq::from_fn(n, alpha, xi_max, Some(Complex64::new(0.0, 0.0)), |xi, d| {
        Ok(if xi == 2 { CMatrix::identity(d, d) } else { CMatrix::zeros(d, d) })
    })
}

/// Separates two pure states, refusing pairs that coincide on every `γ(a)`
/// (the documented families) and identical states.
pub fn separate(s1: &PureStateId, s2: &PureStateId, n: usize, alpha: f64, tol: &Tolerances) -> Result<Separation> {
    s1.validate(n)?;
    s2.validate(n)?;
    if s1.same_state(s2) {
        return Err(Error::NotSeparable("the two states are identical".into()));
    }
    if is_documented_coincidence(s1, s2, n, alpha) {
        return Err(Error::NotSeparable(format!(
            "{s1} and {s2} agree on every gamma(a) (documented coincidence family)"
        )));
    }
    construct_separation(s1, s2, n, alpha, tol)
}

/// Builds a separating element for any two distinct pure states, using
/// products of `γ(g_k)`. Unlike [`separate`] it does not refuse the
/// coincidence families: those are separated by products, not by single
/// `γ(a)`.
pub fn construct_separation(
    s1: &PureStateId,
    s2: &PureStateId,
    n: usize,
    alpha: f64,
    tol: &Tolerances,
) -> Result<Separation> {
    s1.validate(n)?;
    s2.validate(n)?;
    use PureStateId::{Finite, Infinity};
    let (witness, sequence) = match (s1, s2) {
        (Infinity, Infinity) => return Err(Error::NotSeparable("the two states are identical".into())),
        (Infinity, Finite { xi, .. }) | (Finite { xi, .. }, Infinity) => {
            let symbol = SymbolSpec::indicator(0.5)?;
            let seq = gamma_sequence(&symbol, n, alpha, (*xi).max(0) as usize)?;
            (Witness::Symbol { symbol }, seq)
        }
        (Finite { xi: a, .. }, Finite { xi: b, .. }) if a != b => cross_witness(s1, s2, n, alpha, tol)?,
        (Finite { xi, u }, Finite { u: v, .. }) => same_frequency_witness(*xi, u, v, n, alpha, tol)?,
    };
    let values = (eval_state(s1, &sequence)?, eval_state(s2, &sequence)?);
    Ok(Separation { witness, sequence, values })
}

fn cross_witness(
    s1: &PureStateId,
    s2: &PureStateId,
    n: usize,
    alpha: f64,
    tol: &Tolerances,
) -> Result<(Witness, MatrixSeq)> {
    let (PureStateId::Finite { xi: a, u: ua }, PureStateId::Finite { xi: b, u: ub }) = (s1, s2) else {
        unreachable!("cross_witness is only called on finite states");
    };
    let (xi, eta, v) = if a < b { (*a, *b, ub) } else { (*b, *a, ua) };
    // argmax |v_j|, ties to the smallest index.
    let p = (0..v.len()).fold(0, |best, j| if v[j].norm() > v[best].norm() { j } else { best });
    let plan = cross_frequency_plan(n, alpha, xi, eta, p, tol)?;
    let seq = plan.evaluate(eta.max(0) as usize)?;
    Ok((Witness::Plans { terms: vec![([1.0, 0.0], plan)] }, seq))
}

fn same_frequency_witness(
    xi: i64,
    u: &[Complex64],
    v: &[Complex64],
    n: usize,
    alpha: f64,
    tol: &Tolerances,
) -> Result<(Witness, MatrixSeq)> {
    let (p, q) = witness_indices(u, v)?;
    let xi_max = xi.max(0) as usize;
    if p == q {
        let plan = same_frequency_plan(n, alpha, xi, p, p, tol)?;
        let seq = plan.evaluate(xi_max)?;
        return Ok((Witness::Plans { terms: vec![([1.0, 0.0], plan)] }, seq));
    }
    let pq = same_frequency_plan(n, alpha, xi, p, q, tol)?;
    let qp = same_frequency_plan(n, alpha, xi, q, p, tol)?;
    let x_pq = pq.evaluate(xi_max)?;
    let x_qp = qp.evaluate(xi_max)?;
    let i = Complex64::new(0.0, 1.0);
    // Hermitian combinations E_pq + E_qp and i(E_pq - E_qp); keep the one
    // with the larger gap.
    let candidates = [
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        (i, -i),
    ];
    let mut best: Option<(f64, Witness, MatrixSeq)> = None;
    for (c1, c2) in candidates {
        let seq = x_pq.scale(c1).add(&x_qp.scale(c2))?;
        let gap = (quadratic_form(seq.block(xi)?, u) - quadratic_form(seq.block(xi)?, v)).norm();
        if best.as_ref().is_none_or(|(g, _, _)| gap > *g) {
            let witness = Witness::Plans {
                terms: vec![([c1.re, c1.im], pq.clone()), ([c2.re, c2.im], qp.clone())],
            };
            best = Some((gap, witness, seq));
        }
    }
    let (_, witness, seq) = best.expect("two candidates were evaluated");
    Ok((witness, seq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn h() -> f64 {
        std::f64::consts::FRAC_1_SQRT_2
    }

    #[test]
    fn parse_states() {
        assert_eq!("inf".parse::<PureStateId>().unwrap(), PureStateId::Infinity);
        let s: PureStateId = "2:1,0".parse().unwrap();
        assert_eq!(s, PureStateId::basis(2, 2, 0));
        let s: PureStateId = "-1:1,1".parse().unwrap();
        let PureStateId::Finite { xi, u } = s else { panic!() };
        assert_eq!(xi, -1);
        assert!((u[0].re - h()).abs() < 1e-15);
        assert!("x:1".parse::<PureStateId>().is_err());
        assert!("0:0,0".parse::<PureStateId>().is_err());
        assert!("0".parse::<PureStateId>().is_err());
    }

    #[test]
    fn parse_complex_forms() {
        let c = |a, b| Complex64::new(a, b);
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), c(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), c(0.5, 0.25));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), c(1e-3, -20.0));
        assert_eq!(parse_complex("-1e-3").unwrap(), c(-1e-3, 0.0));
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn display_round_trip() {
        let s = PureStateId::Finite { xi: -1, u: vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8)] };
        assert_eq!(s.to_string().parse::<PureStateId>().unwrap(), s);
    }

    #[test]
    fn witness_index_examples() {
        let e0 = [re(1.0), re(0.0)];
        let e1 = [re(0.0), re(1.0)];
        assert_eq!(witness_indices(&e0, &e1).unwrap(), (0, 0));
        let plus = [re(h()), re(h())];
        let minus = [re(h()), re(-h())];
        assert_eq!(witness_indices(&plus, &minus).unwrap(), (0, 1));
        assert_eq!(witness_indices(&e0, &plus).unwrap(), (0, 0));
        let phase = [Complex64::new(0.0, h()), Complex64::new(0.0, h())];
        assert!(matches!(witness_indices(&plus, &phase), Err(Error::NotSeparable(_))));
    }

    #[test]
    fn state_values() {
        let c = gamma_sequence(&SymbolSpec::constant(3.0), 2, 0.0, 2).unwrap();
        let s: PureStateId = "1:0.3,0.4i".parse().unwrap();
        assert!((eval_state(&s, &c).unwrap() - re(3.0)).norm() < 1e-13);
        let ind = gamma_sequence(&SymbolSpec::indicator(0.5).unwrap(), 1, 0.0, 2).unwrap();
        assert_eq!(eval_state(&PureStateId::Infinity, &ind).unwrap(), re(0.0));
        let s = PureStateId::basis(1, 1, 0);
        assert!((eval_state(&s, &ind).unwrap() - re(1.0 / 16.0)).norm() < 1e-16);
    }

    #[test]
    fn integral_examples() {
        let u = [re(1.0), re(0.0), re(0.0)];
        let ind = SymbolSpec::indicator(0.5).unwrap();
        let v = eval_state_integral(2, &u, &ind, 3, 0.0).unwrap();
        assert!((v - re(1.0 / 64.0)).norm() < 1e-16);
        let w = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let one = eval_state_integral(-1, &w, &SymbolSpec::constant(1.0), 3, 1.0).unwrap();
        assert!((one - re(1.0)).norm() < 1e-14);
    }

    #[test]
    fn profiles_coincide_pointwise() {
        for &alpha in &[0.0, 0.5, 2.5] {
            let (PureStateId::Finite { u, .. }, PureStateId::Finite { u: v, .. }) = coincidence_pair(2, alpha).unwrap()
            else {
                panic!()
            };
            for i in 0..=50 {
                let t = i as f64 / 50.0 * 0.999;
                let f = state_profile(0, &u, alpha, t).unwrap();
                let g = state_profile(2, &v, alpha, t).unwrap();
                assert!((f - g).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coincidence_pair_shape() {
        let (s1, s2) = coincidence_pair(3, 0.0).unwrap();
        let PureStateId::Finite { xi, u } = &s1 else { panic!() };
        assert_eq!(*xi, 0);
        assert!((u[0].re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((u[1].re - 0.5).abs() < 1e-15);
        assert_eq!(s2, PureStateId::basis(2, 3, 0));
        assert!(matches!(coincidence_pair(1, 0.0), Err(Error::Unsupported(_))));
        let ind = gamma_sequence(&SymbolSpec::indicator(0.5).unwrap(), 3, 0.0, 2).unwrap();
        let a = eval_state(&s1, &ind).unwrap();
        let b = eval_state(&s2, &ind).unwrap();
        assert!((a - re(1.0 / 64.0)).norm() < 1e-12 && (b - re(1.0 / 64.0)).norm() < 1e-12);
    }

    #[test]
    fn documented_families_are_refused() {
        let tol = Tolerances::default();
        let (s1, s2) = coincidence_pair(2, 1.0).unwrap();
        assert!(matches!(separate(&s1, &s2, 2, 1.0, &tol), Err(Error::NotSeparable(_))));
        assert!(matches!(separate(&s2, &s1, 2, 1.0, &tol), Err(Error::NotSeparable(_))));
        let (m1, m2) = mirror_coincidence_pair(3, 2).unwrap();
        assert!(matches!(separate(&m1, &m2, 3, 0.0, &tol), Err(Error::NotSeparable(_))));
        let phased = PureStateId::Finite { xi: -2, u: vec![Complex64::new(0.0, -1.0)] };
        assert!(matches!(separate(&phased, &m2, 3, 0.0, &tol), Err(Error::NotSeparable(_))));
        let err = separate(&s1, &s1, 2, 1.0, &tol).unwrap_err();
        assert!(err.to_string().starts_with("not separable by construction"));
    }

    #[test]
    fn coincidence_pair_is_separated_by_products() {
        let (s1, s2) = coincidence_pair(2, 0.0).unwrap();
        let sep = construct_separation(&s1, &s2, 2, 0.0, &Tolerances::default()).unwrap();
        assert!(sep.separates());
    }

    #[test]
    fn separation_examples() {
        let tol = Tolerances::default();
        let sep = separate(&PureStateId::basis(0, 2, 0), &PureStateId::basis(0, 2, 1), 2, 0.0, &tol).unwrap();
        assert!((sep.values.0 - re(1.0)).norm() < 1e-8 && sep.values.1.norm() < 1e-8);

        let sep = separate(&PureStateId::Infinity, &PureStateId::basis(2, 3, 0), 3, 0.0, &tol).unwrap();
        assert_eq!(sep.values.0, re(0.0));
        assert!((sep.values.1 - re(1.0 / 64.0)).norm() < 1e-15);

        let u: PureStateId = "0:0.3,0.9".parse().unwrap();
        let sep = separate(&u, &PureStateId::basis(2, 2, 0), 2, 0.0, &tol).unwrap();
        assert!(sep.values.0.norm() < 1e-8 && (sep.values.1 - re(1.0)).norm() < 1e-8);
    }

    #[test]
    fn complex_off_diagonal_witness() {
        let tol = Tolerances::default();
        let u: PureStateId = "1:1,i".parse().unwrap();
        let v: PureStateId = "1:1,-i".parse().unwrap();
        let sep = separate(&u, &v, 2, 0.5, &tol).unwrap();
        assert!((sep.gap() - 2.0).abs() < 1e-8, "gap {}", sep.gap());
        assert!(sep.values.0.im.abs() < 1e-10);
    }

    #[test]
    fn closure_gap_values() {
        let (s1, s2) = coincidence_pair(3, 0.5).unwrap();
        let x = closure_gap_witness(3, 0.5, 4).unwrap();
        assert!(x.check_invariants().is_ok());
        assert_eq!(eval_state(&s1, &x).unwrap(), re(0.0));
        assert_eq!(eval_state(&s2, &x).unwrap(), re(1.0));
    }
}

//! The invariant suite run by `polyberg verify`.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bergman_oracle::oracle_beta_entry;
use crate::gammaseq::{
    gamma_matrix, gamma_sequence, min_eigenvalue, negative_submatrix_check, spectral_norm, tail_bound,
    tail_deviation, MatrixSeq,
};
use crate::generators::{
    antitriangular_report, matrix_unit, nu_table, random_antitriangular_generators, unit, zero_lemma_applies,
    Tolerances,
};
use crate::integration::{integrate_against_q, weighted_inner_product};
use crate::jacobi::{jac_fn_eval, jac_sup_bound, JacobiParams, PolyCoeffs};
use crate::purestates::{
    closure_gap_witness, coincidence_pair, eval_state, is_documented_coincidence, separate, PureStateId,
};
use crate::special_fn::{beta, binom_bound_holds, log_gamma, wendel_bound_holds};
use crate::symbols::{make_gp, SymbolSpec};
use crate::{block_order, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub alphas: Vec<f64>,
    pub n_max: usize,
    pub xi_max: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            alphas: vec![0.0, 0.5, 1.0, 2.5],
            n_max: 4,
            xi_max: 16,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// No check failed (skips are allowed).
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(f, "{:<width$}  {}  {}", c.name, c.status, c.detail)?;
        }
        Ok(())
    }
}

/// Worst error against a threshold, or a count of pass/fail cases.
struct Tally {
    worst: f64,
    cases: usize,
    limit: f64,
    boolean: bool,
    first_bad: Option<String>,
}

impl Tally {
    fn new(limit: f64) -> Self {
        Tally { worst: 0.0, cases: 0, limit, boolean: false, first_bad: None }
    }

    fn flags() -> Self {
        Tally { boolean: true, ..Tally::new(0.5) }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { 1.0 }, what);
    }

    fn record(&mut self, err: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        if err.is_nan() || err > self.worst {
            self.worst = if err.is_nan() { f64::INFINITY } else { err };
        }
        if !(err < self.limit) && self.first_bad.is_none() {
            self.first_bad = Some(what());
        }
    }

    fn finish(self, name: &str) -> CheckResult {
        let status = if self.first_bad.is_none() { CheckStatus::Pass } else { CheckStatus::Fail };
        let mut detail = if self.boolean {
            format!("{} cases", self.cases)
        } else {
            format!("worst {:.2e} (limit {:.0e}) over {} cases", self.worst, self.limit, self.cases)
        };
        if let Some(bad) = self.first_bad {
            detail.push_str(&format!("; first failure: {bad}"));
        }
        CheckResult { name: name.into(), status, detail }
    }
}

fn skipped(name: &str, why: &str) -> CheckResult {
    CheckResult { name: name.into(), status: CheckStatus::Skipped, detail: why.into() }
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> SymbolSpec {
    let deg = rng.gen_range(0..=max_degree);
    let c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    SymbolSpec::PolyT(PolyCoeffs::from_f64(&c))
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn max_abs_diff(a: &crate::CMatrix, b: &crate::CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn check_special_fn(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = None;
    for _ in 0..1000 {
        let z = rng.gen_range(1e-3..=100.0);
        let a = rng.gen_range(1e-3..=10.0);
        let k = rng.gen_range(0..=30u32);
        if !wendel_bound_holds(z, a)? || !binom_bound_holds(z, k)? {
            bad = Some(format!("z = {z}, a = {a}, k = {k}"));
            break;
        }
    }
    Ok(match bad {
        None => CheckResult { name: "gamma inequalities".into(), status: CheckStatus::Pass, detail: "1000 random points".into() },
        Some(b) => CheckResult { name: "gamma inequalities".into(), status: CheckStatus::Fail, detail: b },
    })
}

/// `1/k(α,β,m)²` from log-gamma.
fn closed_form_norm(alpha: f64, beta: f64, m: usize) -> Result<f64> {
    let m = m as f64;
    let ln = log_gamma(m + alpha + 1.0)? + log_gamma(m + beta + 1.0)?
        - log_gamma(m + alpha + beta + 1.0)?
        - log_gamma(m + 1.0)?;
    Ok(ln.exp() / (2.0 * m + alpha + beta + 1.0))
}

fn check_orthogonality(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut t = Tally::new(1e-10);
    for &alpha in &cfg.alphas {
        for b in 0..=6usize {
            for p in 0..=7 {
                for q in 0..=7 {
                    let got = weighted_inner_product(alpha, b, p, q)?;
                    let want = if p == q { closed_form_norm(alpha, b as f64, p)? } else { 0.0 };
                    t.record((got - want).abs(), || format!("alpha {alpha}, beta {b}, ({p},{q})"));
                }
            }
        }
    }
    Ok(t.finish("jacobi orthogonality"))
}

fn check_moment_identity(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut t = Tally::new(1e-10);
    for &alpha in &cfg.alphas {
        for xi in 0..=6usize {
            for m in 0..=7 {
                let mut c = vec![0.0; m + 1];
                c[m] = 1.0;
                let got = integrate_against_q(alpha, xi, m, &PolyCoeffs::from_f64(&c))?;
                let want = beta((xi + m) as f64 + 1.0, alpha + m as f64 + 1.0)?;
                t.record((got - want).abs() / want, || format!("alpha {alpha}, xi {xi}, m {m}"));
            }
        }
    }
    Ok(t.finish("beta-moment identity"))
}

fn check_sup_bound(cfg: &VerifyConfig, alpha: f64) -> Result<CheckResult> {
    let name = format!("sup-bound dominance (alpha {alpha})");
    if alpha <= 0.0 {
        return Ok(skipped(&name, "unproven for α ≤ 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5u64);
    let mut t = Tally::new(1.0 + 1e-12);
    for _ in 0..10 {
        let beta = rng.gen_range(0..=40) as f64;
        let m = rng.gen_range(0..=5);
        let x = rng.gen_range(0.05..0.95);
        let p = JacobiParams::new(alpha, beta, m)?;
        let bound = jac_sup_bound(&p, x)?;
        let grid = 2000;
        let mut scan: f64 = 0.0;
        for i in 0..=grid {
            scan = scan.max(jac_fn_eval(&p, x * i as f64 / grid as f64)?.abs());
        }
        t.record(scan / bound, || format!("beta {beta}, m {m}, x {x}"));
    }
    Ok(t.finish(&name))
}

fn check_gamma_laws(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9u64);
    let mut ident = Tally::new(1e-12);
    let mut linear = Tally::new(1e-12);
    let mut symmetric = Tally::flags();
    let mut psd = Tally::new(1e-10);
    let mut normb = Tally::new(1e-9);
    let mut negsub = Tally::flags();
    for &alpha in &cfg.alphas {
        for n in 1..=cfg.n_max {
            let one = gamma_sequence(&SymbolSpec::constant(1.0), n, alpha, cfg.xi_max)?;
            for m in &one.mats {
                let d = m.order();
                ident.record(max_abs_diff(&m.entries, &crate::CMatrix::identity(d, d)), || {
                    format!("alpha {alpha}, n {n}, xi {}", m.xi)
                });
            }
            let a = random_poly(&mut rng, 6);
            let b = random_poly(&mut rng, 6);
            let (ca, cb) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let combo = match (&a, &b) {
                (SymbolSpec::PolyT(pa), SymbolSpec::PolyT(pb)) => {
                    SymbolSpec::PolyT(pa.scale(ca).add(&pb.scale(cb)))
                }
                _ => unreachable!(),
            };
            let ga = gamma_sequence(&a, n, alpha, cfg.xi_max)?;
            let gb = gamma_sequence(&b, n, alpha, cfg.xi_max)?;
            let gc = gamma_sequence(&combo, n, alpha, cfg.xi_max)?;
            let lin = ga.scale(Complex64::new(ca, 0.0)).add(&gb.scale(Complex64::new(cb, 0.0)))?;
            for (x, y) in lin.mats.iter().zip(&gc.mats) {
                linear.record(max_abs_diff(&x.entries, &y.entries), || format!("alpha {alpha}, n {n}, xi {}", x.xi));
            }
            let nonneg = [
                SymbolSpec::indicator(0.5)?,
                SymbolSpec::indicator(0.3)?,
                SymbolSpec::poly_t(&[0.09, -0.6, 1.0])?,
            ];
            let mut seqs: Vec<(SymbolSpec, MatrixSeq)> = Vec::new();
            for s in nonneg.into_iter().chain([a.clone(), make_gp(3, alpha)?]) {
                let seq = gamma_sequence(&s, n, alpha, cfg.xi_max)?;
                seqs.push((s, seq));
            }
            for (k, (s, seq)) in seqs.iter().enumerate() {
                let sup = s.sup_abs(alpha)?;
                for m in &seq.mats {
                    symmetric.check(m.entries == m.entries.transpose(), || format!("alpha {alpha}, n {n}, xi {}", m.xi));
                    if k < 3 {
                        let ev = min_eigenvalue(&m.entries);
                        psd.record(-ev, || format!("alpha {alpha}, n {n}, xi {}: {ev:e}", m.xi));
                    }
                    let norm = spectral_norm(&m.entries);
                    normb.record(norm - sup, || format!("alpha {alpha}, n {n}, xi {}: {norm} > {sup}", m.xi));
                }
                for xi in seq.xi_min()..0 {
                    let ok = negative_submatrix_check(seq, xi)?;
                    negsub.check(ok, || format!("alpha {alpha}, n {n}, xi {xi}"));
                }
            }
        }
    }
    Ok(vec![
        ident.finish("gamma(1) = identity"),
        linear.finish("gamma linearity"),
        symmetric.finish("gamma symmetry (exact)"),
        psd.finish("gamma positivity"),
        normb.finish("gamma norm bound"),
        negsub.finish("negative-frequency submatrix"),
    ])
}

fn check_antitriangular(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let tol = cfg.tolerances;
    let mut below = Tally::new(tol.zero);
    let mut anti = Tally::flags();
    let mut zero = Tally::new(tol.zero);
    for &alpha in &cfg.alphas {
        for n in 1..=cfg.n_max {
            for xi in (1 - n as i64)..=6 {
                let d = block_order(n, xi).expect("xi in range");
                let xa = xi.unsigned_abs() as usize;
                for p in 0..=(2 * n - 2 + xa + 2) {
                    let g = make_gp(p, alpha)?;
                    let m = gamma_matrix(&g, n, alpha, xi)?.entries;
                    let shift = p as i64 - xa as i64;
                    let sup = g.sup_abs(alpha)?;
                    if zero_lemma_applies(n, xi, p) {
                        let mx = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
                        zero.record(mx / sup, || format!("alpha {alpha}, n {n}, xi {xi}, p {p}"));
                    } else if p <= 2 * n - 2 + xa {
                        let r = antitriangular_report(&m, shift, &tol);
                        below.record(r.below_max / r.scale, || format!("alpha {alpha}, n {n}, xi {xi}, p {p}"));
                        let anti_ok = shift < 0 || shift > 2 * d as i64 - 2 || r.anti_min > tol.nonzero * r.scale;
                        anti.check(anti_ok, || {
                            format!("alpha {alpha}, n {n}, xi {xi}, p {p}: antidiagonal min {:e}", r.anti_min)
                        });
                    }
                }
            }
        }
    }
    Ok(vec![below.finish("antitriangular: zero part"), anti.finish("antidiagonal nonzero"), zero.finish("zero lemma")])
}

fn check_matrix_units(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut t = Tally::new(1e-8);
    for n in 2..=cfg.n_max.max(2) + 1 {
        for s in 0..20u64 {
            let seed = cfg.seed.wrapping_mul(1000).wrapping_add(s);
            let g = random_antitriangular_generators(n, seed);
            let nu = nu_table(&g, &cfg.tolerances)?;
            for p in 0..n {
                for q in 0..n {
                    let e = matrix_unit(&g, &nu, p, q)?;
                    t.record(max_abs_diff(&e, &unit(n, p, q)), || format!("n {n}, seed {seed}, ({p},{q})"));
                }
            }
        }
    }
    Ok(t.finish("matrix-unit reconstruction"))
}

fn check_convergence(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    const XI: i64 = 60;
    let mut dev = Tally::new(1e-6);
    let mut dom = Tally::new(1.0 + 1e-12);
    let mut dom_cases = 0;
    for &alpha in &cfg.alphas {
        for s in [0.3, 0.5] {
            let a = SymbolSpec::indicator(s)?;
            for n in 1..=cfg.n_max {
                let seq = gamma_sequence(&a, n, alpha, XI as usize)?;
                for xi in [XI / 2, XI] {
                    let d = tail_deviation(&seq, xi)?;
                    if xi == XI {
                        dev.record(d, || format!("alpha {alpha}, s {s}, n {n}: {d:e}"));
                    }
                    if alpha > 0.0 {
                        let b = tail_bound(n, alpha, xi, s * s, 1.0, 0.0)?;
                        dom.record(d / b, || format!("alpha {alpha}, s {s}, n {n}, xi {xi}"));
                        dom_cases += 1;
                    }
                }
            }
        }
    }
    let dominance = if dom_cases == 0 {
        skipped("tail bound dominance", "unproven for α ≤ 0")
    } else {
        dom.finish("tail bound dominance")
    };
    Ok(vec![dev.finish("scalar-limit convergence"), dominance])
}

fn check_states(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x17u64);
    let mut coin = Tally::new(1e-10);
    let mut closure = Tally::new(1e-12);
    for &alpha in &cfg.alphas {
        for n in 2..=cfg.n_max.max(2) {
            let (s1, s2) = coincidence_pair(n, alpha)?;
            let mut symbols = vec![SymbolSpec::indicator(0.3)?, SymbolSpec::indicator(0.5)?];
            symbols.extend((0..3).map(|_| random_poly(&mut rng, 6)));
            for p in 0..=6 {
                symbols.push(make_gp(p, alpha)?);
            }
            for a in &symbols {
                let seq = gamma_sequence(a, n, alpha, 2)?;
                let gap = (eval_state(&s1, &seq)? - eval_state(&s2, &seq)?).norm();
                coin.record(gap, || format!("alpha {alpha}, n {n}, symbol {}", a.to_json()));
            }
            let w = closure_gap_witness(n, alpha, 4)?;
            w.check_invariants()?;
            let v = (eval_state(&s1, &w)?, eval_state(&s2, &w)?);
            let err = (v.0 - Complex64::new(0.0, 0.0)).norm().max((v.1 - Complex64::new(1.0, 0.0)).norm());
            closure.record(err, || format!("alpha {alpha}, n {n}: {v:?}"));
        }
    }

    let mut sep = Tally::flags();
    let mut separated = 0usize;
    let mut refused = 0usize;
    for &alpha in &cfg.alphas {
        for n in 2..=cfg.n_max.clamp(2, 3) {
            let draw = |rng: &mut ChaCha8Rng| -> PureStateId {
                if rng.gen_bool(0.1) {
                    return PureStateId::Infinity;
                }
                let xi = rng.gen_range(1 - n as i64..=6);
                let d = block_order(n, xi).expect("xi in range");
                PureStateId::Finite { xi, u: random_unit(rng, d) }
            };
            for _ in 0..10 {
                let (s1, s2) = (draw(&mut rng), draw(&mut rng));
                let expect_refusal = s1.same_state(&s2) || is_documented_coincidence(&s1, &s2, n, alpha);
                let ok = match separate(&s1, &s2, n, alpha, &cfg.tolerances) {
                    Ok(s) => {
                        separated += 1;
                        !expect_refusal && s.separates()
                    }
                    Err(Error::NotSeparable(_)) => {
                        refused += 1;
                        expect_refusal
                    }
                    Err(_) => false,
                };
                sep.check(ok, || format!("alpha {alpha}, n {n}: {s1} vs {s2}"));
            }
        }
    }
    let mut s = sep.finish("pure-state separation");
    if s.status == CheckStatus::Pass {
        s.detail = format!("{separated} separated, {refused} refused as documented");
    }
    Ok(vec![coin.finish("coincidence family"), closure.finish("closure-gap witness"), s])
}

fn check_oracle(cfg: &VerifyConfig) -> Result<CheckResult> {
    const NAME: &str = "disk quadrature oracle";
    let mut t = Tally::new(1e-6);
    for &alpha in &cfg.alphas {
        let symbols = [SymbolSpec::indicator(0.5)?, make_gp(2, alpha)?];
        for n in 1..=cfg.n_max.min(2) {
            for xi in (1 - n as i64)..=2 {
                let d = block_order(n, xi).expect("xi in range");
                for a in &symbols {
                    for j in 0..d {
                        for k in 0..d {
                            let want = crate::integration::beta_entry(a, alpha, xi, j, k)?;
                            let got = oracle_beta_entry(a, alpha, xi, j, k)?;
                            t.record((got - want).norm(), || format!("alpha {alpha}, n {n}, xi {xi}, ({j},{k})"));
                        }
                    }
                }
            }
        }
    }
    Ok(t.finish(NAME))
}

fn check_round_trip(cfg: &VerifyConfig) -> Result<CheckResult> {
    let alpha = cfg.alphas.first().copied().unwrap_or(0.0);
    let seq = gamma_sequence(&SymbolSpec::indicator(0.5)?, cfg.n_max.max(1), alpha, cfg.xi_max)?;
    let back = MatrixSeq::from_json(&seq.to_json())?;
    let ok = back.mats == seq.mats && back.scalar_limit == seq.scalar_limit;
    Ok(CheckResult {
        name: "JSON round trip".into(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: format!("{} blocks", seq.mats.len()),
    })
}

fn guard(name: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult { name: name.into(), status: CheckStatus::Fail, detail: e.to_string() })
}

fn guard_many(name: &str, r: Result<Vec<CheckResult>>) -> Vec<CheckResult> {
    r.unwrap_or_else(|e| vec![CheckResult { name: name.into(), status: CheckStatus::Fail, detail: e.to_string() }])
}

/// Runs every check. Errors inside a check are reported as failures.
pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if cfg.xi_max < 2 {
        return Err(Error::InvalidArgument("xi_max must be at least 2".into()));
    }
    if let Some(a) = cfg.alphas.iter().find(|a| !(**a > -1.0)) {
        return Err(Error::Domain(format!("alpha must exceed -1, got {a}")));
    }
    if cfg.alphas.is_empty() {
        return Err(Error::InvalidArgument("no alpha values given".into()));
    }
    let mut checks = vec![
        guard("gamma inequalities", check_special_fn(cfg)),
        guard("jacobi orthogonality", check_orthogonality(cfg)),
        guard("beta-moment identity", check_moment_identity(cfg)),
    ];
    for &alpha in &cfg.alphas {
        checks.push(guard("sup-bound dominance", check_sup_bound(cfg, alpha)));
    }
    checks.extend(guard_many("gamma laws", check_gamma_laws(cfg)));
    checks.extend(guard_many("antitriangularity", check_antitriangular(cfg)));
    checks.push(guard("matrix-unit reconstruction", check_matrix_units(cfg)));
    checks.extend(guard_many("convergence", check_convergence(cfg)));
    checks.extend(guard_many("pure states", check_states(cfg)));
    checks.push(guard("disk quadrature oracle", check_oracle(cfg)));
    checks.push(guard("JSON round trip", check_round_trip(cfg)));
    Ok(VerifyReport { checks })
}

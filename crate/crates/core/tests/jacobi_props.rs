use polyberg::integration::{integrate_against_q, weighted_inner_product};
use polyberg::jacobi::{jac_fn_eval, jac_norm_coeff, jac_sup_bound, q_eval, JacobiParams};
use polyberg::quadrature::{gauss_legendre_composite, panel_edges};
use polyberg::special_fn::{beta, log_gamma, reg_incomplete_beta};
use polyberg::symbols::make_gp;
use polyberg::PolyCoeffs;
use proptest::prelude::*;

const ALPHAS: [f64; 4] = [0.0, 0.5, 1.0, 2.5];

fn norm_sq_closed_form(alpha: f64, beta: f64, p: usize) -> f64 {
    let p = p as f64;
    let ln = log_gamma(p + alpha + 1.0).unwrap() + log_gamma(p + beta + 1.0).unwrap()
        - log_gamma(p + alpha + beta + 1.0).unwrap()
        - log_gamma(p + 1.0).unwrap();
    ln.exp() / (2.0 * p + alpha + beta + 1.0)
}

fn monomial(d: usize) -> PolyCoeffs {
    let mut c = vec![0.0; d + 1];
    c[d] = 1.0;
    PolyCoeffs::from_f64(&c)
}

#[test]
fn weighted_orthogonality_grid() {
    for alpha in ALPHAS {
        for b in 0..=6 {
            for p in 0..=7 {
                for q in 0..=7 {
                    let got = weighted_inner_product(alpha, b, p, q).unwrap();
                    let want = if p == q { norm_sq_closed_form(alpha, b as f64, p) } else { 0.0 };
                    assert!((got - want).abs() < 1e-10, "alpha {alpha} beta {b} ({p},{q}): {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn lower_degree_monomials_vanish() {
    for alpha in ALPHAS {
        for b in 0..=6 {
            for m in 0..=7 {
                for d in 0..=m {
                    let v = integrate_against_q(alpha, b, m, &monomial(d)).unwrap();
                    if d < m {
                        assert!(v.abs() < 1e-10, "alpha {alpha} beta {b} m {m} d {d}: {v}");
                    } else {
                        let scale = beta((b + m) as f64 + 1.0, alpha + m as f64 + 1.0).unwrap();
                        assert!(v.abs() / scale > 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn moment_identity_grid() {
    for alpha in ALPHAS {
        for xi in 0..=6 {
            for m in 0..=7 {
                let got = integrate_against_q(alpha, xi, m, &monomial(m)).unwrap();
                let want = beta((xi + m) as f64 + 1.0, alpha + m as f64 + 1.0).unwrap();
                assert!((got - want).abs() <= 1e-10 * want, "alpha {alpha} xi {xi} m {m}");
            }
        }
    }
}

/// `∫_0^1 J_p J_q dt` by quadrature in `u` with `t = 1 - u²`, which keeps the
/// integrand smooth at `t = 1` for the tested α.
fn unweighted_inner_product(alpha: f64, beta: f64, p: usize, q: usize) -> f64 {
    let jp = JacobiParams::new(alpha, beta, p).unwrap();
    let jq = JacobiParams::new(alpha, beta, q).unwrap();
    let f = |u: f64| {
        let t = 1.0 - u * u;
        2.0 * u * jac_fn_eval(&jp, t).unwrap() * jac_fn_eval(&jq, t).unwrap()
    };
    gauss_legendre_composite(f, &panel_edges(0.0, 1.0, 128, &[]))
}

#[test]
fn jacobi_functions_are_orthonormal_without_weight() {
    for alpha in ALPHAS {
        for b in [0.0, 1.0, 2.0, 5.0] {
            for p in 0..=5 {
                for q in 0..=5 {
                    let got = unweighted_inner_product(alpha, b, p, q);
                    let want = if p == q { 1.0 } else { 0.0 };
                    assert!((got - want).abs() < 1e-10, "alpha {alpha} beta {b} ({p},{q}): {got}");
                }
            }
        }
    }
}

#[test]
fn gp_matches_q_with_beta_zero() {
    for alpha in ALPHAS {
        for p in 0..=6 {
            let g = make_gp(p, alpha).unwrap();
            let params = JacobiParams::new(alpha, 0.0, p).unwrap();
            for i in 0..100 {
                let t = i as f64 / 100.0;
                let a = g.eval_at_t(t, alpha).unwrap().re;
                let b = q_eval(&params, t).unwrap();
                assert!((a - b).abs() < 1e-14 * b.abs().max(1.0), "alpha {alpha} p {p} t {t}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn sup_bound_dominates_grid_scan(
        alpha in 0.01f64..4.0,
        beta in 0u32..=40,
        m in 0usize..=5,
        x in 0.01f64..0.99,
    ) {
        let p = JacobiParams::new(alpha, beta as f64, m).unwrap();
        let bound = jac_sup_bound(&p, x).unwrap();
        let grid = 10_000;
        let scan = (0..=grid)
            .map(|i| jac_fn_eval(&p, x * i as f64 / grid as f64).unwrap().abs())
            .fold(0.0, f64::max);
        prop_assert!(scan <= bound, "scan {} bound {}", scan, bound);
    }

    #[test]
    fn beta_is_symmetric(x in 0.01f64..50.0, y in 0.01f64..50.0) {
        let a = beta(x, y).unwrap();
        let b = beta(y, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn incomplete_beta_is_monotone(x1 in 0.0f64..1.0, x2 in 0.0f64..1.0, p in 0.1f64..20.0, q in 0.1f64..20.0) {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let a = reg_incomplete_beta(lo, p, q).unwrap();
        let b = reg_incomplete_beta(hi, p, q).unwrap();
        prop_assert!(a <= b + 1e-14);
    }

    #[test]
    fn norm_constant_positive(alpha in -0.99f64..5.0, beta in -0.99f64..5.0, m in 0usize..20) {
        let k = jac_norm_coeff(&JacobiParams::new(alpha, beta, m).unwrap());
        prop_assert!(k.is_finite() && k > 0.0);
    }
}

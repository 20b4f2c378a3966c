use polyberg::gammaseq::{
    gamma_sequence, min_eigenvalue, negative_submatrix_check, spectral_norm, tail_bound, tail_deviation,
};
use polyberg::integration::{beta_entry, beta_entry_with_status, EntryStatus};
use polyberg::symbols::make_gp;
use polyberg::{gamma_matrix, CMatrix, Complex64, MatrixSeq, PolyCoeffs, SymbolSpec};
use proptest::prelude::*;

const ALPHAS: [f64; 4] = [0.0, 0.5, 1.0, 2.5];

fn poly(c: &[f64]) -> SymbolSpec {
    SymbolSpec::PolyT(PolyCoeffs::from_f64(c))
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..=7)
}

#[test]
fn constant_one_gives_kronecker_delta() {
    let one = SymbolSpec::constant(1.0);
    for alpha in ALPHAS {
        for xi in -8i64..=8 {
            for j in 0..=5 {
                for k in 0..=5 {
                    let v = beta_entry(&one, alpha, xi, j, k).unwrap();
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((v - Complex64::new(want, 0.0)).norm() < 1e-12, "alpha {alpha} xi {xi} ({j},{k})");
                }
            }
        }
    }
}

#[test]
fn entries_are_symmetric_bitwise() {
    let symbols = [
        SymbolSpec::indicator(0.4).unwrap(),
        poly(&[0.3, -1.2, 0.7, 2.0]),
        make_gp(4, 1.0).unwrap(),
        SymbolSpec::constant(1.0).resample(0.5, 300).unwrap(),
    ];
    for a in &symbols {
        for xi in -3i64..=5 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_eq!(beta_entry(a, 0.5, xi, j, k).unwrap(), beta_entry(a, 0.5, xi, k, j).unwrap());
                }
            }
        }
    }
}

#[test]
fn sampled_path_agrees_with_exact_path() {
    let symbols = [
        poly(&[0.2, 1.0, -3.0, 2.0]),
        poly(&[1.0, -0.5, 0.25, 0.0, 0.0, -1.0, 0.6]),
        poly(&[-0.9, 0.8, 0.7, -0.6, 0.5, -0.4, 0.3]),
    ];
    for alpha in [0.0, 1.0, 2.5] {
        for a in &symbols {
            let s = a.resample(alpha, 2048).unwrap();
            for xi in [-2i64, 0, 3, 8] {
                for j in 0..3 {
                    for k in 0..3 {
                        let (exact, st) = beta_entry_with_status(a, alpha, xi, j, k).unwrap();
                        let (quad, sq) = beta_entry_with_status(&s, alpha, xi, j, k).unwrap();
                        assert_eq!(st, EntryStatus::Exact);
                        assert_eq!(sq, EntryStatus::Quadrature);
                        assert!((exact - quad).norm() < 1e-6, "alpha {alpha} xi {xi} ({j},{k})");
                    }
                }
            }
        }
    }
}

#[test]
fn polynomial_symbols_approach_their_limit() {
    let a = poly(&[0.5, -2.0, 1.0, 3.0]);
    let w = a.boundary_limit(0.0).unwrap().unwrap();
    let mut prev = f64::INFINITY;
    for k in 1..=6 {
        let t = 1.0 - 10f64.powi(-k);
        let d = (a.eval_at_t(t, 0.0).unwrap() - w).norm();
        assert!(d < prev && d < 10.0 * 10f64.powi(-k), "k {k}: {d}");
        prev = d;
    }
}

#[test]
fn real_symbols_give_real_symmetric_blocks() {
    for alpha in ALPHAS {
        for n in 1..=4 {
            for a in [SymbolSpec::indicator(0.6).unwrap(), make_gp(5, alpha).unwrap(), poly(&[1.0, -1.0, 0.5])] {
                let seq = gamma_sequence(&a, n, alpha, 16).unwrap();
                for m in &seq.mats {
                    assert!(m.is_real() && m.is_symmetric(), "alpha {alpha} n {n} xi {}", m.xi);
                }
            }
        }
    }
}

#[test]
fn norm_bound_and_positivity() {
    let nonneg = [
        SymbolSpec::indicator(0.3).unwrap(),
        SymbolSpec::indicator(0.75).unwrap(),
        poly(&[0.09, -0.6, 1.0]),
        poly(&[0.0, 0.0, 1.0, -1.0]),
    ];
    for alpha in ALPHAS {
        for n in 1..=4 {
            for a in nonneg.iter().chain([&make_gp(4, alpha).unwrap(), &poly(&[-1.0, 3.0, -2.5])]) {
                let sup = a.sup_abs(alpha).unwrap();
                let seq = gamma_sequence(a, n, alpha, 16).unwrap();
                for m in &seq.mats {
                    assert!(spectral_norm(&m.entries) <= sup + 1e-9, "alpha {alpha} n {n} xi {}", m.xi);
                }
            }
            for a in &nonneg {
                let seq = gamma_sequence(a, n, alpha, 16).unwrap();
                for m in &seq.mats {
                    assert!(min_eigenvalue(&m.entries) >= -1e-10, "alpha {alpha} n {n} xi {}", m.xi);
                }
            }
        }
    }
}

#[test]
fn negative_blocks_are_leading_submatrices() {
    for alpha in ALPHAS {
        for n in 2..=4 {
            for a in [SymbolSpec::indicator(0.5).unwrap(), make_gp(3, alpha).unwrap(), poly(&[0.1, 0.7, -0.4])] {
                let seq = gamma_sequence(&a, n, alpha, n).unwrap();
                for xi in seq.xi_min()..0 {
                    assert!(negative_submatrix_check(&seq, xi).unwrap(), "alpha {alpha} n {n} xi {xi}");
                }
            }
        }
    }
}

#[test]
fn tail_deviation_is_dominated_by_split_bound() {
    for alpha in [1.0, 2.5] {
        for s in [0.3, 0.5, 0.9] {
            let a = SymbolSpec::indicator(s).unwrap();
            for n in 1..=4 {
                let seq = gamma_sequence(&a, n, alpha, 60).unwrap();
                for xi in [10i64, 30, 60] {
                    let d = tail_deviation(&seq, xi).unwrap();
                    let b = tail_bound(n, alpha, xi, s * s, 1.0, 0.0).unwrap();
                    assert!(d <= b, "alpha {alpha} s {s} n {n} xi {xi}: {d} > {b}");
                }
            }
        }
    }
}

#[test]
fn json_round_trip_is_bitwise() {
    let seq = gamma_sequence(&SymbolSpec::indicator(0.37).unwrap(), 3, 2.5, 12).unwrap();
    let back = MatrixSeq::from_json(&seq.to_json()).unwrap();
    assert_eq!(back.mats, seq.mats);
    assert_eq!(back.scalar_limit, seq.scalar_limit);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn entries_are_linear(
        ca in coeffs(),
        cb in coeffs(),
        lambda in -3.0f64..3.0,
        alpha in prop::sample::select(ALPHAS.to_vec()),
        xi in -3i64..=8,
        j in 0usize..4,
        k in 0usize..4,
    ) {
        let pa = PolyCoeffs::from_f64(&ca);
        let pb = PolyCoeffs::from_f64(&cb);
        let a = SymbolSpec::PolyT(pa.clone());
        let b = SymbolSpec::PolyT(pb.clone());
        let sum = SymbolSpec::PolyT(pa.add(&pb));
        let scaled = SymbolSpec::PolyT(pa.scale(lambda));
        let ea = beta_entry(&a, alpha, xi, j, k).unwrap();
        let eb = beta_entry(&b, alpha, xi, j, k).unwrap();
        prop_assert!((beta_entry(&sum, alpha, xi, j, k).unwrap() - ea - eb).norm() < 1e-13);
        prop_assert!((beta_entry(&scaled, alpha, xi, j, k).unwrap() - ea * lambda).norm() < 1e-13);
    }

    #[test]
    fn gamma_matrix_is_linear(
        ca in coeffs(),
        cb in coeffs(),
        alpha in prop::sample::select(ALPHAS.to_vec()),
        n in 1usize..=4,
        xi in 0i64..=12,
    ) {
        let pa = PolyCoeffs::from_f64(&ca);
        let pb = PolyCoeffs::from_f64(&cb);
        let ga = gamma_matrix(&SymbolSpec::PolyT(pa.clone()), n, alpha, xi).unwrap().entries;
        let gb = gamma_matrix(&SymbolSpec::PolyT(pb.clone()), n, alpha, xi).unwrap().entries;
        let gs = gamma_matrix(&SymbolSpec::PolyT(pa.add(&pb)), n, alpha, xi).unwrap().entries;
        prop_assert!(max_diff(&gs, &(ga + gb)) < 1e-12);
    }
}

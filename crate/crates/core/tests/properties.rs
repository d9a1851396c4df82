use proptest::prelude::*;

use psi_mellin::fd::derivative;
use psi_mellin::funcspace::d_psi_omega;
use psi_mellin::mellinops::{check_identity, Identity, IdentityParams};
use psi_mellin::prelude::*;
use psi_mellin::quad::integrate_finite;
use psi_mellin::special::gamma_ratio;

const FUNCTIONS: [&str; 3] = ["exp(-x)", "(1+x)^(-2)", "x*exp(-x)"];
const PSIS: [&str; 3] = ["x", "ln(1+x)", "x + x^2/2"];
const WEIGHTS: [&str; 3] = ["1", "1+x", "exp(-x/2)"];

/// Smooth expressions without poles on (0, ∞).
fn smooth_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("x".to_string()), (0.5f64..3.0).prop_map(|c| format!("{c:.3}"))];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} / (2 + sin({b})))")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("exp(-({a})^2)")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("ln(1 + ({a})^2)")),
            inner.prop_map(|a| format!("({a})^3")),
        ]
    })
}

fn suite_triple() -> impl Strategy<Value = (Expr, AdmissiblePsi, Weight)> {
    (0..3usize, 0..3usize, 0..3usize).prop_map(|(i, j, k)| {
        (
            parse_expr(FUNCTIONS[i]).unwrap(),
            AdmissiblePsi::parse(PSIS[j]).unwrap(),
            Weight::parse(WEIGHTS[k]).unwrap(),
        )
    })
}

fn complex(max: f64) -> impl Strategy<Value = Complex64> {
    (-max..max, -max..max).prop_map(|(re, im)| c64(re, im))
}

fn near_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-3 && (z.re - z.re.round()).abs() < 1e-3
}

fn tol() -> Tolerance {
    Tolerance::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symbolic_derivative_matches_differences(src in smooth_expr(), x in 0.2f64..3.0) {
        let f = parse_expr(&src).unwrap();
        let df = f.derivative().unwrap();
        let exact = df.eval(x).unwrap();
        let fd = derivative(|t| f.eval(t), x, 0.05).unwrap();
        let scale = 1.0 + exact.abs() + f.eval(x).unwrap().abs();
        prop_assert!((exact - fd).abs() < 1e-6 * scale, "{src}: {exact} vs {fd}");
    }

    #[test]
    fn printed_expressions_parse_back(src in smooth_expr(), x in 0.2f64..3.0) {
        let f = parse_expr(&src).unwrap();
        let g = parse_expr(&f.to_string()).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(f.eval(x).unwrap().to_bits(), g.eval(x).unwrap().to_bits());
    }

    #[test]
    fn gamma_recurrence(z in complex(20.0)) {
        prop_assume!(z.norm() <= 20.0 && !near_integer(z) && !near_integer(z + 1.0));
        let g = gamma_complex(z).unwrap();
        let g1 = gamma_complex(z + 1.0).unwrap();
        prop_assume!(g.is_finite() && g1.is_finite() && g.norm() > 1e-280);
        prop_assert!((g1 - z * g).norm() / g1.norm() < 1e-11, "{z}");
    }

    #[test]
    fn gamma_reflection(z in complex(6.0)) {
        prop_assume!(!near_integer(z));
        let lhs = gamma_complex(z).unwrap() * gamma_complex(c64(1.0, 0.0) - z).unwrap()
            * (z * std::f64::consts::PI).sin() / std::f64::consts::PI;
        prop_assert!((lhs - 1.0).norm() < 1e-10, "{z}: {lhs}");
    }

    #[test]
    fn gamma_ratio_reciprocity(a in complex(8.0), b in complex(8.0)) {
        let ab = gamma_ratio(a, b).finite();
        let ba = gamma_ratio(b, a).finite();
        if let (Some(ab), Some(ba)) = (ab, ba) {
            prop_assume!(ab.norm() > 1e-200 && ba.norm() > 1e-200);
            prop_assert!((ab * ba - 1.0).norm() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn quadrature_is_linear(re in -5.0f64..5.0, im in -5.0f64..5.0, src in smooth_expr()) {
        let f = parse_expr(&src).unwrap();
        let c = c64(re, im);
        let one = integrate_finite(|t| Ok(c64(f.eval(t)?, 0.0)), 0.1, 2.0, &tol()).unwrap();
        let scaled = integrate_finite(|t| Ok(c * f.eval(t)?), 0.1, 2.0, &tol()).unwrap();
        prop_assert!((scaled.value - c * one.value).norm() <= 1e-12 * (c * one.value).norm() + 1e-300);
    }

    #[test]
    fn quadrature_is_additive(src in smooth_expr(), m in 0.3f64..1.8) {
        let f = parse_expr(&src).unwrap();
        let g = |t: f64| Ok(c64(f.eval(t)?, 0.0));
        let whole = integrate_finite(g, 0.1, 2.0, &tol()).unwrap();
        let left = integrate_finite(g, 0.1, m, &tol()).unwrap();
        let right = integrate_finite(g, m, 2.0, &tol()).unwrap();
        let budget = whole.err_abs + left.err_abs + right.err_abs + 1e-13 * (1.0 + whole.value.norm());
        prop_assert!((left.value + right.value - whole.value).norm() <= budget);
    }

    #[test]
    fn psi_inverse_round_trip(j in 0..3usize, x in 1e-4f64..50.0) {
        let psi = AdmissiblePsi::parse(PSIS[j]).unwrap();
        let back = psi.inverse(psi.eval(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() < 1e-12 * x.max(1.0));
    }

    #[test]
    fn derivative_operator_is_conjugated((f, psi, omega) in suite_triple(), x in 0.2f64..3.0) {
        let direct = d_psi_omega(&f, &psi, &omega, 1, x).unwrap();
        // M_ω⁻¹ Q_ψ d/du Q_ψ⁻¹ M_ω f
        let phi = |u: f64| {
            let t = psi.inverse(u)?;
            Ok(omega.eval(t)? * f.eval(t)?)
        };
        let u = psi.eval(x).unwrap();
        let conj = derivative(phi, u, 0.05 * u.min(1.0)).unwrap() / omega.eval(x).unwrap();
        prop_assert!((direct - conj).abs() < 1e-7 * direct.abs().max(1e-3), "{direct} vs {conj}");
    }

    #[test]
    fn integer_order_collapse((f, psi, omega) in suite_triple(), x in 0.2f64..3.0) {
        let one = c64(1.0, 0.0);
        let ri = rl_integral(&f, &psi, &omega, one, 0.0, x, &tol()).unwrap().value.re;
        let plain = integrate_finite(
            |t| Ok(c64(omega.eval(t)? * f.eval(t)? * psi.prime(t)?, 0.0)), 0.0, x, &tol(),
        ).unwrap().value.re / omega.eval(x).unwrap();
        prop_assert!((ri - plain).abs() < 1e-6 * plain.abs().max(1e-6));
        let d = d_psi_omega(&f, &psi, &omega, 1, x).unwrap();
        let rd = rl_derivative(&f, &psi, &omega, one, 0.0, x, &tol()).unwrap().value.re;
        let cap = caputo_derivative(&f, &psi, &omega, one, 0.0, x, &tol()).unwrap().value.re;
        prop_assert!((rd - d).abs() < 1e-6 * d.abs().max(1e-3), "{rd} vs {d}");
        prop_assert!((cap - d).abs() < 1e-6 * d.abs().max(1e-3), "{cap} vs {d}");
    }

    #[test]
    fn hilfer_endpoints((f, psi, omega) in suite_triple(), x in 0.3f64..2.5, alpha in 0.2f64..0.9) {
        let a = c64(alpha, 0.0);
        let h0 = hilfer_derivative(&f, &psi, &omega, a, 0.0, 0.0, x, &tol()).unwrap().value;
        let h1 = hilfer_derivative(&f, &psi, &omega, a, 1.0, 0.0, x, &tol()).unwrap().value;
        let rl = rl_derivative(&f, &psi, &omega, a, 0.0, x, &tol()).unwrap().value;
        let cap = caputo_derivative(&f, &psi, &omega, a, 0.0, x, &tol()).unwrap().value;
        prop_assert!((h0 - rl).norm() < 1e-4 * rl.norm().max(1e-3));
        prop_assert!((h1 - cap).norm() < 1e-4 * cap.norm().max(1e-3));
    }

    #[test]
    fn transform_is_linear((f, psi, omega) in suite_triple(), c in complex(4.0), t in -3.0f64..3.0) {
        let p = c64(0.3, t);
        let base = mellin_forward(&f, &psi, &omega, p, Method::Direct, &tol()).unwrap().value;
        let scaled_f = move |x: f64| Ok(c * f.eval(x)?);
        let scaled = psi_mellin::transforms::mellin_of(&scaled_f, &psi, &omega, p, Method::Direct, &tol())
            .unwrap()
            .value;
        prop_assert!((scaled - c * base).norm() <= 1e-12 * (c * base).norm() + 1e-300);
    }

    #[test]
    fn direct_matches_conjugated((f, psi, omega) in suite_triple(), re in 0.05f64..0.45, im in -3.0f64..3.0) {
        let p = c64(re, im);
        let d = mellin_forward(&f, &psi, &omega, p, Method::Direct, &tol()).unwrap();
        let q = mellin_forward(&f, &psi, &omega, p, Method::Conjugated, &tol()).unwrap();
        let bound = 1e-8f64.max(10.0 * (d.err_abs + q.err_abs));
        prop_assert!((d.value - q.value).norm() < bound * d.value.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn shifting_rule((f, psi, omega) in suite_triple(), a in prop_oneof![
        Just(c64(0.5, 0.0)), Just(c64(1.0, 0.0)), Just(c64(2.0, 1.0))
    ]) {
        let params = IdentityParams { shift: a, ..Default::default() };
        let r = check_identity(Identity::Shifting, &f, &psi, &omega, c64(0.3, 0.2), &params, &tol()).unwrap();
        prop_assert!(r.rel_diff < 1e-9, "{r:?}");
    }

    #[test]
    fn convolution_commutes((f, psi, omega) in suite_triple(), x in 0.2f64..3.0) {
        let g = parse_expr("x*exp(-2*x)").unwrap();
        let fg = convolve(&f, &g, &psi, &omega, x, &tol()).unwrap().value;
        let gf = convolve(&g, &f, &psi, &omega, x, &tol()).unwrap().value;
        prop_assert!((fg - gf).norm() < 1e-8 * fg.norm().max(1e-12));
    }

    #[test]
    fn semigroup((f, psi, omega) in suite_triple(), a in 0.2f64..0.9, b in 0.2f64..0.9, x in 0.3f64..2.0) {
        let inner = |t: f64| Ok(rl_integral(&f, &psi, &omega, c64(b, 0.0), 0.0, t, &tol())?.value);
        let two = rl_integral(&inner, &psi, &omega, c64(a, 0.0), 0.0, x, &tol()).unwrap().value;
        let one = rl_integral(&f, &psi, &omega, c64(a + b, 0.0), 0.0, x, &tol()).unwrap().value;
        prop_assert!((two - one).norm() < 1e-5 * one.norm());
    }
}

/// Reported errors bound the true error on closed-form fixtures.
#[test]
fn error_estimates_are_honest() {
    let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());
    let mut cases = 0;
    let mut honest = 0;
    let mut check = |got: &QuadResult, want: Complex64| {
        cases += 1;
        if (got.value - want).norm() <= 10.0 * got.err_abs {
            honest += 1;
        }
    };
    let ex = parse_expr("exp(-x)").unwrap();
    let xe = parse_expr("x*exp(-x)").unwrap();
    let rat = parse_expr("(1+x)^(-2)").unwrap();
    for k in 0..20 {
        let p = c64(0.3 + 0.2 * k as f64, 0.5 * (k % 5) as f64);
        check(&mellin_forward(&ex, &id, &unit, p, Method::Direct, &tol()).unwrap(), gamma_complex(p).unwrap());
        check(&mellin_forward(&xe, &id, &unit, p, Method::Direct, &tol()).unwrap(), gamma_complex(p + 1.0).unwrap());
        if p.re < 1.9 {
            let want = psi_mellin::special::beta(p, c64(2.0, 0.0) - p).unwrap();
            check(&mellin_forward(&rat, &id, &unit, p, Method::Direct, &tol()).unwrap(), want);
        }
    }
    assert!(honest as f64 >= 0.95 * cases as f64, "{honest} of {cases}");
}

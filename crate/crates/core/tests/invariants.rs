use hhfejer_core::catalog::{fejer_chain, fejer_frac_chain, hh_chain, hh_frac_chain};
use hhfejer_core::convexity::check_harmonically_convex;
use hhfejer_core::expr::{BinOp, Func};
use hhfejer_core::harmonic::lemma1_sides;
use hhfejer_core::oracle::midpoint;
use hhfejer_core::quad::{frac_left, gamma, integrate};
use hhfejer_core::{parse, EvalError, Expr, FracOrder, Grid3, Interval, Tolerance};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::new(1e-12, 1e-10).unwrap()
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
}

fn interval() -> impl Strategy<Value = Interval> {
    (0.1f64..5.0, 1.01f64..20.0).prop_map(|(a, r)| Interval::new(a, a * r).unwrap())
}

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::var()),
        (-5.0f64..5.0).prop_map(|c| Expr::constant((c * 1000.0).round() / 1000.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)])
                .prop_map(|(l, r, op)| Expr::binary(op, l, r)),
            (inner.clone(), 0u8..4).prop_map(|(b, n)| Expr::binary(BinOp::Pow, b, Expr::constant(n as f64))),
            (inner.clone(), prop_oneof![Just(Func::Exp), Just(Func::Sin), Just(Func::Cos)])
                .prop_map(|(e, f)| Expr::call(f, e)),
            inner.prop_map(Expr::neg),
        ]
    })
}

// increasing convex functions on (0, inf), all harmonically convex there
fn hconvex() -> impl Strategy<Value = Expr> {
    (0.0f64..2.0, 0.0f64..2.0, 0.01f64..1.0, 0.5f64..4.0).prop_map(|(c1, c2, c3, s)| {
        parse(&format!("{c1:.3}*x + {c2:.3}*x^2 + {c3:.3}*exp(x/{s:.3}) + 1")).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_expressions_reparse_to_the_same_function(e in expr_tree(), x in 0.1f64..10.0) {
        let back = parse(&e.to_string()).unwrap();
        match (e.eval(x), back.eval(x)) {
            (Ok(u), Ok(v)) => prop_assert!(u == v || (u.is_nan() && v.is_nan()) || close(u, v, 1e-12), "{e}: {u} vs {v}"),
            (Err(_), Err(_)) => {}
            (u, v) => prop_assert!(false, "{e}: {u:?} vs {v:?}"),
        }
    }

    #[test]
    fn reflection_is_an_involution(iv in interval(), s in 0.0f64..=1.0) {
        let x = iv.a() + s * (iv.b() - iv.a());
        let back = iv.reflect(iv.reflect(x).unwrap()).unwrap();
        prop_assert!(close(back, x, 1e-12));
    }

    #[test]
    fn paths_meet_at_h_and_reflect_into_each_other(iv in interval(), t in 0.0f64..=1.0) {
        let fr = iv.frame();
        let h = iv.harmonic_mean();
        prop_assert!(close(fr.lower_path(0.0).unwrap(), h, 1e-14));
        prop_assert!(close(fr.upper_path(0.0).unwrap(), h, 1e-14));
        prop_assert!(close(fr.lower_path(1.0).unwrap(), iv.a(), 1e-14));
        prop_assert!(close(fr.upper_path(1.0).unwrap(), iv.b(), 1e-14));
        let l = fr.lower_path(t).unwrap();
        prop_assert!(close(iv.reflect(l).unwrap(), fr.upper_path(t).unwrap(), 1e-12));
    }

    #[test]
    fn lemma_one_holds(a in 0.001f64..100.0, d in 0.0f64..100.0, theta in 0.01f64..=1.0) {
        let (lhs, rhs) = lemma1_sides(a, a + d, theta).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn dual_derivative_matches_central_difference(e in hconvex(), x in 0.2f64..5.0) {
        let h = 1e-5 * x;
        let fd = (e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h);
        prop_assert!(close(e.deriv(x).unwrap(), fd, 1e-6));
    }

    #[test]
    fn refining_the_grid_never_hides_a_violation(c in -2.0f64..2.0, p in -3i32..4) {
        let f = parse(&format!("{c:.3}*x^{p} + sin(3*x)")).unwrap();
        let iv = Interval::new(0.5, 3.0).unwrap();
        let g = Grid3::new(9, 9, 5).unwrap();
        let coarse = check_harmonically_convex(&f, iv, g, 1.0).unwrap();
        let fine = check_harmonically_convex(&f, iv, g.refined(), 1.0).unwrap();
        prop_assert!(fine.max_violation >= coarse.max_violation);
    }

    #[test]
    fn hh_chain_is_ordered_and_homogeneous(f in hconvex(), iv in interval(), k in 0.1f64..10.0) {
        let r = hh_chain(&f, iv, tol()).unwrap();
        let m = r.mid.unwrap();
        prop_assert!(r.lhs <= m + r.quad_error_budget && m <= r.rhs + r.quad_error_budget);
        let scaled = f.scaled(k);
        let rk = hh_chain(&scaled, iv, tol()).unwrap();
        prop_assert!(close(rk.mid.unwrap(), k * m, 1e-9));
        prop_assert!(close(rk.lhs, k * r.lhs, 1e-12));
    }

    #[test]
    fn oracle_agrees_with_adaptive_quadrature(f in hconvex(), iv in interval()) {
        let engine = integrate(&f, iv.a(), iv.b(), tol()).unwrap().value;
        let oracle = midpoint(&f, iv.a(), iv.b(), 200_000).unwrap().value;
        prop_assert!(close(engine, oracle, 1e-8), "{engine} vs {oracle}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_kernel_closed_form(alpha in 0.05f64..4.0, a in 0.0f64..2.0, len in 0.1f64..3.0) {
        let one = |_: f64| -> Result<f64, EvalError> { Ok(1.0) };
        let x = a + len;
        let r = frac_left(&one, a, FracOrder::new(alpha).unwrap(), x, tol()).unwrap();
        let exact = len.powf(alpha) / gamma(alpha + 1.0).unwrap();
        prop_assert!(close(r.value, exact, 1e-8), "{} vs {exact}", r.value);
    }

    #[test]
    fn order_one_is_the_plain_integral(f in hconvex(), a in 0.1f64..2.0, len in 0.1f64..3.0) {
        let x = a + len;
        let frac = frac_left(&f, a, FracOrder::new(1.0).unwrap(), x, tol()).unwrap().value;
        let plain = integrate(&f, a, x, tol()).unwrap().value;
        prop_assert!(close(frac, plain, 1e-9));
    }

    #[test]
    fn orders_compose(alpha in 0.2f64..1.5, beta in 0.2f64..1.5) {
        // J^alpha J^beta f = J^(alpha+beta) f, for f = x^2 from 0
        let t = tol();
        let sq = |x: f64| -> Result<f64, EvalError> { Ok(x * x) };
        let inner = |y: f64| -> Result<f64, EvalError> {
            if y <= 0.0 {
                return Ok(0.0);
            }
            Ok(frac_left(&sq, 0.0, FracOrder::new(beta).unwrap(), y, t).map_err(|_| EvalError::NonFinite { x: y })?.value)
        };
        let nested = frac_left(&inner, 0.0, FracOrder::new(alpha).unwrap(), 1.5, t).unwrap().value;
        let direct = frac_left(&sq, 0.0, FracOrder::new(alpha + beta).unwrap(), 1.5, t).unwrap().value;
        prop_assert!(close(nested, direct, 1e-7), "{nested} vs {direct}");
    }

    #[test]
    fn fractional_chains_reduce_at_order_one(f in hconvex(), iv in interval()) {
        let one = FracOrder::new(1.0).unwrap();
        let hh = hh_chain(&f, iv, tol()).unwrap();
        let hf = hh_frac_chain(&f, iv, one, tol()).unwrap();
        prop_assert!(close(hf.mid.unwrap(), hh.mid.unwrap(), 1e-8));
        let g = parse("1").unwrap();
        let fj = fejer_chain(&f, &g, iv, tol()).unwrap();
        let ff = fejer_frac_chain(&f, &g, iv, one, tol()).unwrap();
        prop_assert!(close(ff.mid.unwrap(), 2.0 * fj.mid.unwrap(), 1e-8));
        prop_assert!(close(ff.rhs, 2.0 * fj.rhs, 1e-8));
    }
}

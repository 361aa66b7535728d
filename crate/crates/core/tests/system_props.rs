use chebsys::system::eval_span;
use chebsys::{FunctionSystem, Interval, SpanElement};
use proptest::collection::vec;
use proptest::prelude::*;

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

/// Four-function representatives of every built-in family.
fn family(index: usize) -> FunctionSystem {
    match index {
        0 => FunctionSystem::monomial(4, iv(-1.0, 1.0)),
        1 => FunctionSystem::muntz(vec![0.0, 0.5, 1.5, 2.5], iv(0.2, 1.2)),
        2 => FunctionSystem::cauchy(vec![0.5, 1.0, 2.0, 4.0], iv(0.0, 1.0)),
        3 => FunctionSystem::gauss(vec![-0.5, 0.0, 0.5, 1.0], iv(-1.0, 1.0)),
        _ => FunctionSystem::green_unit(vec![0.2, 0.4, 0.6, 0.8], iv(0.0, 1.0)),
    }
    .unwrap()
}

fn max_order(sys: &FunctionSystem) -> usize {
    sys.smoothness().min(3)
}

fn point_in(sys: &FunctionSystem, u: f64, margin: f64) -> f64 {
    let d = sys.domain();
    d.a() + margin + u * (d.width() - 2.0 * margin)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn span_evaluation_is_linear(
        index in 0usize..5,
        c1 in vec(-2.0f64..2.0, 4),
        c2 in vec(-2.0f64..2.0, 4),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
        u in 0.0f64..1.0,
        order in 0usize..3,
    ) {
        let sys = family(index);
        let d = order.min(max_order(&sys));
        let t = point_in(&sys, u, 0.0);
        let combo: Vec<f64> = c1.iter().zip(&c2).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = eval_span(&SpanElement::new(sys.clone(), combo).unwrap(), t, d).unwrap();
        let p = eval_span(&SpanElement::new(sys.clone(), c1).unwrap(), t, d).unwrap();
        let q = eval_span(&SpanElement::new(sys.clone(), c2).unwrap(), t, d).unwrap();
        let rhs = alpha * p + beta * q;
        let scale = (0..4).map(|j| sys.eval(j, t, d).unwrap().abs()).sum::<f64>() * 12.0 + 1.0;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn derivatives_match_central_differences(
        index in 0usize..5,
        j in 0usize..4,
        u in 0.0f64..1.0,
        order in 0usize..3,
    ) {
        let sys = family(index);
        prop_assume!(order < max_order(&sys));
        let h = 1e-5;
        let t = point_in(&sys, u, 2.0 * h);
        prop_assume!(sys.kinks().iter().all(|s| (t - s).abs() > 1e-3));
        let fd = (sys.eval(j, t + h, order).unwrap() - sys.eval(j, t - h, order).unwrap()) / (2.0 * h);
        let exact = sys.eval(j, t, order + 1).unwrap();
        // the natural size of this derivative over the domain
        let scale = sys
            .domain()
            .grid(41)
            .into_iter()
            .filter(|x| sys.kinks().iter().all(|s| (x - s).abs() > 1e-3))
            .map(|x| sys.eval(j, x, order + 1).unwrap().abs())
            .fold(exact.abs(), f64::max);
        prop_assert!(
            (fd - exact).abs() <= 1e-5 * scale.max(f64::MIN_POSITIVE),
            "family {index}, j {j}, order {order}, t {t}: fd {fd} vs {exact}"
        );
    }
}

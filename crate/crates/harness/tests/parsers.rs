use bq_harness::config::{parse_config, parse_entries, InitialData};
use bq_harness::expr::parse_expr;
use proptest::prelude::*;

/// Random expression text together with its value at `x`, built from the
/// grammar bottom-up so the value comes from Rust arithmetic directly.
fn expr_with_value(x: f64) -> impl Strategy<Value = (String, f64)> {
    let leaf = prop_oneof![
        (0u32..100).prop_map(|n| (format!("{n}"), n as f64)),
        (1u32..100).prop_map(|n| (format!("{}.25", n), n as f64 + 0.25)),
        Just(("x".to_string(), x)),
        Just(("pi".to_string(), std::f64::consts::PI)),
    ];
    leaf.prop_recursive(5, 40, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|((a, va), (b, vb))| (format!("({a} + {b})"), va + vb)),
            (inner.clone(), inner.clone()).prop_map(|((a, va), (b, vb))| (format!("({a} - {b})"), va - vb)),
            (inner.clone(), inner.clone()).prop_map(|((a, va), (b, vb))| (format!("({a})*({b})"), va * vb)),
            (inner.clone(), inner.clone()).prop_map(|((a, va), (b, vb))| (format!("({a})/({b})"), va / vb)),
            inner.clone().prop_map(|(a, va)| (format!("-({a})"), -va)),
            inner.clone().prop_map(|(a, va)| (format!("sin({a})"), va.sin())),
            inner.clone().prop_map(|(a, va)| (format!("cos({a})"), va.cos())),
            inner.clone().prop_map(|(a, va)| (format!("exp(-({a})^2)"), (-(va.powf(2.0))).exp())),
            inner.prop_map(|(a, va)| (format!("sqrt(({a})^2)"), va.powf(2.0).sqrt())),
        ]
    })
}

fn same(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || a == b
}

proptest! {
    #[test]
    fn expressions_evaluate_like_rust(
        (x, text, expected) in (-5.0f64..5.0)
            .prop_flat_map(|x| expr_with_value(x).prop_map(move |(t, v)| (x, t, v)))
    ) {
        let got = parse_expr(&text).unwrap().eval(x);
        prop_assert!(same(got, expected), "{text}: {got} vs {expected}");
    }

    #[test]
    fn expression_parser_never_panics(s in "[-+*/^()x0-9a-z. ]{0,60}") {
        let _ = parse_expr(&s);
    }

    #[test]
    fn config_parser_never_panics(s in "(([a-z]{1,8}\\.[a-zA-Z_]{1,8}|[#= ]) ?=? ?[-a-z0-9.,()*^ ]{0,20}\n){0,12}") {
        let _ = parse_config(&s);
        let _ = parse_entries(&s);
    }

    #[test]
    fn config_numbers_round_trip(l in 1.0f64..1e4, k in 4u32..14, times in prop::collection::vec(0.01f64..10.0, 1..6)) {
        let mut acc = 0.0;
        let times: Vec<f64> = times.iter().map(|d| { acc += d; acc }).collect();
        let list = times.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>().join(", ");
        let text = format!(
            "run.system = mb\ninitial.a = 0\ninitial.b = x\ngrid.L = {l:?}\ngrid.N = {}\noutput.times = {list}\n",
            1usize << k
        );
        let c = parse_config(&text).unwrap();
        prop_assert_eq!(c.grid.half_length(), l);
        prop_assert_eq!(c.grid.len(), 1usize << k);
        prop_assert_eq!(c.times, times);
        let is_expr = matches!(c.initial, InitialData::Expressions { .. });
        prop_assert!(is_expr);
    }

    #[test]
    fn shuffled_times_are_rejected(mut times in prop::collection::vec(0.1f64..100.0, 2..6)) {
        times.sort_by(f64::total_cmp);
        times.reverse();
        prop_assume!(times.windows(2).all(|w| w[0] > w[1]));
        let list = times.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>().join(",");
        let text = format!("run.system = gb\ninitial.builtin = zero\noutput.times = {list}\n");
        let e = parse_config(&text).unwrap_err();
        prop_assert_eq!(e.line, 3);
    }
}

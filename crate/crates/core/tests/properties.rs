use lottie_forge::easing::{easing_slope, eval_easing, solve_u, EasingCurve, SOLVE_TOLERANCE};
use lottie_forge::metrics::{compare, flatten_value, unflatten};
use lottie_forge::model::{canonical_equal, serialize, to_value};
use lottie_forge::num::{eq_sig, round_sig};
use lottie_forge::optimizer::{max_sampling_error, optimize, sampling_tolerance, OptimizeConfig};
use lottie_forge::svg_bridge::{consistency_report, convert};
use lottie_forge::synth::{generate, SynthConfig};
use lottie_forge::tokenizer::{detokenize, parse_text, render_text, tokenize, tokenize_with, EncodeOptions};
use proptest::prelude::*;
use serde_json::{Map, Value};

fn config() -> impl Strategy<Value = SynthConfig> {
    (any::<bool>(), any::<bool>(), any::<bool>(), 1usize..6, 0.0..1.0f64).prop_map(
        |(verbose, integer_times, full_precision, max_layers, animated_probability)| SynthConfig {
            verbose,
            integer_times,
            decimals: if full_precision { None } else { Some(3) },
            max_layers,
            animated_probability,
            ..SynthConfig::default()
        },
    )
}

fn curve() -> impl Strategy<Value = EasingCurve> {
    (0.0..=1.0f64, -3.0..3.0f64, 0.0..=1.0f64, -3.0..3.0f64).prop_map(|(a, b, c, d)| EasingCurve::new(a, b, c, d))
}

fn json() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        (-1e6..1e6f64).prop_map(|x| serde_json::json!(x)),
        any::<i32>().prop_map(|x| serde_json::json!(x)),
        "[a-z .]{0,6}".prop_map(Value::String),
    ];
    leaf.prop_recursive(4, 48, 6, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..5).prop_map(Value::Array),
            prop::collection::vec(("[a-z.\\[\\]\" ]{0,4}", inner), 0..5)
                .prop_map(|entries| Value::Object(entries.into_iter().collect::<Map<_, _>>())),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tokenize_roundtrip(seed in any::<u64>(), cfg in config(), quantize in any::<bool>()) {
        let doc = generate(seed, &cfg);
        let tokens = tokenize(&doc, quantize).unwrap();
        let back = detokenize(&tokens).unwrap();
        if quantize {
            // Quantized streams are lossless at the canonical 4 digits.
            prop_assert!(canonical_equal(&back, &doc));
        } else {
            prop_assert!(canonical_equal(&back, &doc));
            prop_assert_eq!(to_value(&back), to_value(&detokenize(&tokenize(&back, false).unwrap()).unwrap()));
        }
    }

    #[test]
    fn token_text_roundtrip(seed in any::<u64>(), cfg in config()) {
        let tokens = tokenize_with(&generate(seed, &cfg), EncodeOptions::default()).unwrap();
        prop_assert_eq!(parse_text(&render_text(&tokens)).unwrap(), tokens);
    }

    #[test]
    fn optimizer_preserves_samples(seed in any::<u64>(), cfg in config(), digits in 3u32..7) {
        let doc = generate(seed, &SynthConfig { expressions: false, ..cfg });
        let opt = OptimizeConfig { significant_digits: digits, ..OptimizeConfig::default() };
        let optimized = optimize(&doc, &opt);
        prop_assert!(serialize(&optimized).len() <= serialize(&doc).len());
        prop_assert!(max_sampling_error(&doc, &optimized).unwrap() <= sampling_tolerance(digits));
        prop_assert_eq!(to_value(&optimize(&optimized, &opt)), to_value(&optimized));
    }

    #[test]
    fn key_f1_is_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let cfg = SynthConfig::default();
        let fa = flatten_value(&to_value(&generate(a, &cfg)));
        let fb = flatten_value(&to_value(&generate(b, &cfg)));
        let (ab, ba) = (compare(&fa, &fb), compare(&fb, &fa));
        prop_assert_eq!(ab.key_f1, ba.key_f1);
        prop_assert!((0.0..=1.0).contains(&ab.key_f1));
        prop_assert!((0.0..=1.0).contains(&ab.json_struct_sim));
        prop_assert_eq!(compare(&fa, &fa).json_struct_sim, 1.0);
    }

    #[test]
    fn flatten_unflatten(value in json()) {
        prop_assert_eq!(unflatten(&flatten_value(&value)).unwrap(), value);
    }

    #[test]
    fn solver_inverts_time_curve(c in curve(), t in 0.0..=1.0f64) {
        let u = solve_u(&c, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&u));
        prop_assert!((c.x(u) - t).abs() < SOLVE_TOLERANCE);
    }

    #[test]
    fn easing_endpoints_fixed(c in curve()) {
        prop_assert_eq!(eval_easing(&c, 0.0).unwrap(), 0.0);
        prop_assert_eq!(eval_easing(&c, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn slope_matches_finite_difference(c in curve(), t in 0.05..0.95f64) {
        let h = 1e-6;
        let numeric = (eval_easing(&c, t + h).unwrap() - eval_easing(&c, t - h).unwrap()) / (2.0 * h);
        let analytic = easing_slope(&c, t).unwrap();
        // Steep spots near vertical tangents are ill-conditioned for differencing.
        prop_assume!(analytic.abs() < 1e3);
        prop_assert!((numeric - analytic).abs() <= 1e-4 * analytic.abs().max(1.0), "{} vs {}", numeric, analytic);
    }

    #[test]
    fn round_sig_is_idempotent(x in -1e9..1e9f64, digits in 1u32..10) {
        let r = round_sig(x, digits);
        prop_assert_eq!(round_sig(r, digits), r);
        prop_assert!(eq_sig(x, r, digits));
    }

    #[test]
    fn svg_rects_stay_in_place(x in 0.0..80.0f64, y in 0.0..80.0f64, w in 1.0..20.0f64, h in 1.0..20.0f64,
                               angle in -180.0..180.0f64) {
        let svg = format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100"><rect x="{x}" y="{y}" width="{w}" height="{h}" transform="rotate({angle} 50 50)"/><circle cx="{y}" cy="{x}" r="{w}"/></svg>"#
        );
        let doc = convert(&svg).unwrap();
        prop_assert!(consistency_report(&svg, &doc).unwrap().consistent());
    }
}

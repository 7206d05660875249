use dhlab_cli::commands::{compute, parse_input, parse_report};
use dhlab_cli::document::ReportDocument;
use dhlab_cli::Options;
use proptest::prelude::*;
use serde_json::{json, Value};

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_u64() || n.is_i64(),
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

fn symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-6i64..=6, n * (n + 1) / 2).prop_map(move |upper| {
        let mut m = vec![vec![0; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m[i][j] = upper[k];
                m[j][i] = upper[k];
                k += 1;
            }
        }
        m
    })
}

fn check(input: Value) -> Option<ReportDocument> {
    let doc = parse_input(&input.to_string()).unwrap();
    let body = compute(&doc, &Options::default()).ok()?;
    let report = ReportDocument::new(body);
    let text = report.to_json();
    let parsed: Value = serde_json::from_str(&text).unwrap();
    assert!(no_floats(&parsed), "float in {text}");
    assert_eq!(parse_report(&text).unwrap(), report);
    assert_eq!(report.to_json(), text);
    Some(report)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_reports_round_trip(m in (1usize..=5).prop_flat_map(symmetric)) {
        check(json!({"version": "1", "kind": "form", "payload": {"entries": m}}));
    }

    #[test]
    fn counterexample_reports_round_trip(
        (m, w) in (3usize..=5).prop_flat_map(|n| (symmetric(n), prop::collection::vec(-3i64..=3, n)))
    ) {
        check(json!({"version": "1", "kind": "counterexample", "payload": {"form": m, "omega0": w}}));
    }

    #[test]
    fn dh_reports_round_trip(
        coeffs in prop::collection::vec(prop::collection::vec(-4i64..=4, 1..4), 1..4),
        offset in 1i64..20,
    ) {
        // Shift each piece up so it stays positive on [k, k+1].
        let pieces: Vec<Value> = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut c = c.clone();
                c[0] += offset + c.iter().skip(1).map(|x| x.abs() * (k as i64 + 1).pow(3)).sum::<i64>();
                json!({"interval": [k, k + 1], "density": c})
            })
            .collect();
        let walls: Vec<i64> = (1..pieces.len() as i64).collect();
        check(json!({"version": "1", "kind": "dh_profile", "payload": {"pieces": pieces, "walls": walls}}));
    }

    #[test]
    fn hl_reports_round_trip(
        (m, w) in (1usize..=4).prop_flat_map(|n| (symmetric(n), prop::collection::vec(-3i64..=3, n))),
        eps in prop::option::of(1i64..5),
    ) {
        let mut payload = json!({"ring": {"b1": 0, "form": m}, "omega0": w, "bound": 50});
        if let Some(e) = eps {
            payload["epsilon"] = json!(format!("1/{e}"));
        }
        check(json!({"version": "1", "kind": "hl_data", "payload": payload}));
    }
}

#[test]
fn shipped_examples_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let report = check(serde_json::from_str(&text).unwrap()).expect("example computes");
        assert_eq!(report.version, "1");
        count += 1;
    }
    assert!(count >= 6);
}

#[test]
fn rationals_accept_integers_and_strings() {
    let doc = |w: &str, e: &str| {
        format!(r#"{{"version":"1","kind":"hl_data","payload":{{"ring":{{"b1":0,"form":[[1,0],[0,-1]]}},"omega0":{w},"epsilon":{e}}}}}"#)
    };
    let a = parse_input(&doc(r#"[2,"1/2"]"#, r#""1/3""#)).unwrap();
    let b = parse_input(&doc(r#"["4/2","2/4"]"#, r#""2/6""#)).unwrap();
    assert_eq!(compute(&a, &Options::default()).unwrap(), compute(&b, &Options::default()).unwrap());
    let c = parse_input(&doc("[1,0]", "1")).unwrap();
    let d = parse_input(&doc("[1,0]", r#""3/3""#)).unwrap();
    assert_eq!(compute(&c, &Options::default()).unwrap(), compute(&d, &Options::default()).unwrap());
    for bad in [doc("[0.5,0]", "1"), doc("[1,0]", r#""1/0""#)] {
        let parsed = parse_input(&bad).unwrap();
        assert!(compute(&parsed, &Options::default()).is_err());
    }
}

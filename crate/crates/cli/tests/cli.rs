use std::path::Path;
use std::process::{Command, Output};

fn modlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modlat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|c| if c.is_empty() { None } else { Some(c.parse().unwrap()) }).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<Option<f64>>], name: &str) -> Vec<Option<f64>> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i]).collect()
}

#[test]
fn exponent_csv_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    stdout(&modlat(&["exponents", "--snr-db", "10", "--grid", "0:C:41", "--out", out.to_str().unwrap()]));
    let (header, rows) = read_csv(&out);
    assert_eq!(&header[..3], ["rate_nats", "rate_bits", "rate_over_C"]);
    assert_eq!(header.len(), 3 + 2 * 5);
    assert_eq!(rows.len(), 41);
    for r in &rows {
        assert_eq!(r.len(), header.len());
    }
    for name in ["E_sp", "E_r", "E_awgn", "E_modlambda"] {
        let col: Vec<f64> = column(&header, &rows, name).into_iter().map(Option::unwrap).collect();
        assert!(col.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{name} not monotone");
        assert_eq!(*col.last().unwrap(), 0.0, "{name} at capacity");
    }
    let rate = column(&header, &rows, "rate_nats");
    let ex = column(&header, &rows, "E_x");
    let rcrit = 0.856_854_795_874_037_3;
    let rx = 0.557_490_421_111_698_2;
    for ((r, a), (m, x)) in rate
        .iter()
        .zip(column(&header, &rows, "E_awgn"))
        .zip(column(&header, &rows, "E_modlambda").into_iter().zip(&ex))
    {
        let (r, a, m) = (r.unwrap(), a.unwrap(), m.unwrap());
        if r > rcrit {
            assert!((a - m).abs() < 1e-9, "R={r}: {a} vs {m}");
        } else {
            assert!(m <= a + 1e-12);
        }
        assert_eq!(x.is_some(), r <= rx, "E_x cell at R={r}");
    }
}

#[test]
fn exponent_csv_reproduces_exactly() {
    let a = stdout(&modlat(&["exponents", "--snr", "3", "--grid", "0:1:7", "--units", "bits"]));
    let b = stdout(&modlat(&["exponents", "--snr", "3", "--grid", "0:1:7", "--units", "bits"]));
    assert_eq!(a, b);
    let bits: Vec<f64> = a.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!((bits[6] - 1.0).abs() < 1e-12);
}

#[test]
fn two_point_grid() {
    let text = stdout(&modlat(&["exponents", "--snr-db", "0", "--grid", "0:C:2", "--curves", "E_sp,E_awgn"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "rate_nats,rate_bits,rate_over_C,E_sp,E_awgn,E_over_snr_sp,E_over_snr_awgn");
    assert!(lines[2].ends_with(",1,0,0,0,0"), "{}", lines[2]);
}

#[test]
fn bad_grid_is_a_usage_error() {
    for grid in ["0:C:1", "0.5:0.2:10", "0:9:10", "x:C:3"] {
        let o = modlat(&["exponents", "--snr-db", "10", "--grid", grid]);
        assert_eq!(o.status.code(), Some(2), "grid {grid}");
    }
}

#[test]
fn geometry_regimes() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&modlat(&["geometry", "--snr-db", "10", "--rate-nats", "0.01"]))).unwrap();
    assert_eq!(v["typical_event"]["regime"], "expurgated");
    assert_eq!(v["exponents"]["e_awgn"]["regime"], "expurgated");
    assert_eq!(v["exponents"]["e_modlambda"]["regime"], "expurgated");
    assert_eq!(v["k_alpha_star"]["branch"], "minimum-distance");
    assert!(v["k_zeta"].is_f64());

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&modlat(&["geometry", "--snr-db", "10", "--rate-nats", "1.0"]))).unwrap();
    assert_eq!(v["k_alpha_star"]["branch"], "above-critical");
    assert!(v["k_zeta"].is_null());
    let f = |p: &str| v.pointer(p).unwrap().as_f64().unwrap();
    assert!((f("/exponents/e_awgn/value") - f("/exponents/e_modlambda/value")).abs() < 1e-9);
    assert!((f("/alpha_awgn") - f("/modlambda/alpha")).abs() < 1e-12);
    assert!((f("/theta") - f("/modlambda/theta")).abs() < 1e-12);
    assert!((f("/typical_event/d") - std::f64::consts::SQRT_2 * (-1.0f64).exp()).abs() < 1e-12);
}

#[test]
fn geometry_rejects_rates_above_capacity() {
    assert_eq!(modlat(&["geometry", "--snr-db", "10", "--rate-bits", "3"]).status.code(), Some(2));
}

#[test]
fn lattice_figures_for_z4() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&modlat(&["lattice", "--lattice", "z4", "--samples", "40000"]))).unwrap();
    assert_eq!(v["dimension"], 4);
    assert!((v["nsm"].as_f64().unwrap() - 1.0 / 12.0).abs() < 5.0 * v["nsm_stderr"].as_f64().unwrap());
    assert_eq!(modlat(&["lattice", "--lattice", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"n":8,"spec":{"snr":4.0},"rate":0.3,"ensemble":{"kind":"spherical-expurgated","d_min":0.6},"decoder":"ml","trials":2000,"seed":5}"#,
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        stdout(&modlat(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]));
        std::fs::read(out).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["trials"], 2000);
}

#[test]
fn simulate_from_flags_matches_config() {
    let flags = stdout(&modlat(&[
        "simulate", "--n", "6", "--snr", "4", "--rate-nats", "0.3", "--trials", "500", "--seed", "9",
    ]));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let v: serde_json::Value = serde_json::from_str(&flags).unwrap();
    std::fs::write(&cfg, v["config"].to_string()).unwrap();
    assert_eq!(flags, stdout(&modlat(&["simulate", "--config", cfg.to_str().unwrap()])));
}

#[test]
fn malformed_config_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"n":8,"spec":{"snr":4.0},"rate":0.3,"ensemble":{"kind":"spherical"},"decoder":"ml","trials":"x","seed":1}"#, "trials"),
        (r#"{"n":8,"spec":{"snr":4.0},"rate":0.3,"ensemble":{"kind":"spherical"},"decoder":"ml","trials":0,"seed":1}"#, "trials"),
        (r#"{"n":8,"spec":{"snr":4.0},"rate":0.3,"ensemble":{"kind":"spherical"},"decoder":"ml","trials":10}"#, "seed"),
        (r#"{"n":8,"spec":{"snr":4.0},"rate":0.3,"ensemble":{"kind":"spherical"},"decoder":"ml","trials":10,"seed":1,"alpha":2.0}"#, "alpha"),
    ];
    for (i, (text, field)) in cases.iter().enumerate() {
        let cfg = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&cfg, text).unwrap();
        let o = modlat(&["simulate", "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(field), "{field} missing from: {err}");
    }
}

#[test]
fn missing_required_flag_exits_2() {
    assert_eq!(modlat(&["exponents"]).status.code(), Some(2));
    assert_eq!(modlat(&["simulate", "--snr", "4"]).status.code(), Some(2));
}

#[test]
fn validate_fast_passes() {
    let o = modlat(&["validate", "fast"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("PASS ")));
    assert!(!text.lines().any(|l| l.starts_with("FAIL ")), "{text}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&modlat(&["validate", "fast", "--json"]))).unwrap();
    assert!(v.as_array().unwrap().iter().all(|l| l["status"] != "fail"));
}

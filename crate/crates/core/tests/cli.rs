use univalent::cli::{parse_p_grid, run, EXIT_CONFIG, EXIT_NOT_MEMBER, EXIT_OK, EXIT_VIOLATION};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("univalent").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn column(csv: &str, row_kind: &str, n: &str, col: usize) -> f64 {
    csv.lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[0] == row_kind && f[1] == n)
        .unwrap_or_else(|| panic!("no row {row_kind},{n}"))[col]
        .parse()
        .unwrap()
}

#[test]
fn coeffs_for_near_pi_theta_has_g_residue() {
    let (code, out, _) = invoke(&["coeffs", "--family", "co", "--p", "0.5", "--theta", "3.14159", "--order", "10"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next().unwrap(), "kind,n,re,im,modulus");
    let am1 = column(&out, "laurent_a", "-1", 2);
    assert!((am1 + 1.0 / 3.0).abs() < 1e-6, "{am1}");
    assert_eq!(out.lines().filter(|l| l.starts_with("laurent_a")).count(), 12);
    assert_eq!(out.lines().filter(|l| l.starts_with("taylor_A")).count(), 10);
}

#[test]
fn sigma_coeffs_start_with_the_pinned_value() {
    let (code, out, _) = invoke(&["coeffs", "--family", "sigma", "--p", "0.4", "--w0", "auto-lower", "--order", "6"]);
    assert_eq!(code, EXIT_OK);
    let second = out.lines().nth(1).unwrap();
    assert!(second.starts_with("omega_at_0,0,"));
    assert!((column(&out, "omega_at_0", "0", 2) - 1.0).abs() < 1e-12);
    let (_, out, _) = invoke(&["coeffs", "--family", "sigma", "--p", "0.4", "--w0", "auto-upper", "--order", "6"]);
    assert!((column(&out, "omega_at_0", "0", 2) + 1.0).abs() < 1e-12);
}

#[test]
fn missing_or_invalid_configuration_exits_2() {
    let (code, _, err) = invoke(&["coeffs", "--family", "co", "--theta", "1.0"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("--p"));
    assert_eq!(invoke(&["coeffs", "--p", "1.5", "--theta", "0"]).0, EXIT_CONFIG);
    assert_eq!(invoke(&["coeffs", "--p", "0.5"]).0, EXIT_CONFIG);
    assert_eq!(invoke(&["coeffs", "--family", "sigma", "--p", "0.5", "--w0", "5,5"]).0, EXIT_CONFIG);
    assert_eq!(invoke(&["coeffs", "--p", "0.5", "--generator", "{nope"]).0, EXIT_CONFIG);
    assert_eq!(invoke(&["probe", "--ineq", "bogus", "--p", "0.5"]).0, EXIT_CONFIG);
    assert_eq!(invoke(&["sweep", "--ineq", "thm1", "--p-grid", "0.5:0.1:0.1"]).0, EXIT_CONFIG);
    assert_eq!(invoke(&[]).0, EXIT_CONFIG);
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);
}

#[test]
fn verify_ftheta_passes_and_marks_theorem_a_sharp() {
    let (code, out, _) = invoke(&["verify", "--family", "co", "--p", "0.3", "--theta", "0.7", "--order", "12"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let theorem_a: Vec<_> = rows.iter().filter(|r| r[0] == "theorem_a").collect();
    assert_eq!(theorem_a.len(), 9);
    assert!(theorem_a.iter().all(|r| r[7] == "true"));
}

#[test]
fn historical_disk_fails_on_the_counterexample() {
    let args = [
        "verify",
        "--family",
        "sigma",
        "--p",
        "0.4",
        "--w0",
        "auto-counter",
        "--closed-form-g",
        "--include-deprecated",
    ];
    let (code, out, _) = invoke(&args);
    assert_eq!(code, EXIT_VIOLATION);
    for line in out.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let margin: f64 = f[3].parse().unwrap();
        if f[0] == "livingston_original" {
            assert!(margin < 0.0);
        } else {
            assert!(margin >= -1e-8, "{line}");
        }
    }
    let (code, _, _) = invoke(&args[..args.len() - 1]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn require_member_rejects_corrupted_generator() {
    let generator = r#"{"variant":"blaschke","zeros":[],"factor":[1.0,0.0],"scale":1.5}"#;
    let (code, _, err) = invoke(&["verify", "--p", "0.5", "--generator", generator, "--require-member"]);
    assert_eq!(code, EXIT_NOT_MEMBER);
    assert!(err.contains("membership"));
    let (code, _, _) = invoke(&["coeffs", "--p", "0.5", "--generator", generator, "--require-member"]);
    assert_eq!(code, EXIT_NOT_MEMBER);
}

#[test]
fn json_and_csv_carry_identical_numbers() {
    let base = ["verify", "--family", "co", "--p", "0.45", "--theta", "2.0", "--order", "10"];
    let (_, csv, _) = invoke(&base);
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let (_, json, _) = invoke(&json_args);
    let reports: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), reports.len());
    for (row, rep) in rows.iter().zip(&reports) {
        assert_eq!(row[0], rep["id"].as_str().unwrap());
        for (col, key) in [(1, "lhs"), (2, "rhs"), (3, "margin"), (4, "p")] {
            assert_eq!(row[col].parse::<f64>().unwrap(), rep[key].as_f64().unwrap(), "{row:?} {key}");
        }
        assert_eq!(row[6], rep["validity"].as_str().unwrap());
    }
}

#[test]
fn probes_reach_the_bound() {
    let (code, out, _) = invoke(&["probe", "--ineq", "thm1", "--p", "0.5", "--seed", "7"]);
    assert_eq!(code, EXIT_OK);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert!(row[4].parse::<f64>().unwrap() < 1e-3);
    let (_, out, _) = invoke(&["probe", "--ineq", "theoremA", "--p", "0.3", "--n", "4", "--family", "const"]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "4");
    assert!(row[4].parse::<f64>().unwrap().abs() < 1e-9);
}

#[test]
fn sweep_is_reproducible_and_ordered() {
    let args = ["sweep", "--ineq", "thm1", "--p-grid", "0.1:0.95:0.05", "--seed", "7", "--budget", "300"];
    let (code, first, _) = invoke(&args);
    assert_eq!(code, EXIT_OK);
    let (_, second, _) = invoke(&args);
    assert_eq!(first, second);
    assert_eq!(first.lines().next().unwrap(), "p,n,lhs,rhs,margin,validity,evals,converged");
    let ps: Vec<f64> = first.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ps.len(), 18);
    assert!(ps.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(parse_p_grid("0.1:0.95:0.05").unwrap().len(), 18);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.json");
    let (code, out, _) = invoke(&[
        "region",
        "--p",
        "0.5",
        "--n",
        "3",
        "--samples",
        "100",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let stats: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(stats["max_distance"].as_f64().unwrap() <= stats["radius"].as_f64().unwrap() + 1e-8);
    assert_eq!(stats["points"].as_array().unwrap().len(), 100);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use codebounds::schrijver::build_schrijver;
use codebounds::sdp::sdpa::parse_sdpa;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_codebounds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn validator() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/run_report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::draft202012::new(&schema).expect("schema compiles")
}

fn check_report(path: &Path) -> Value {
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let v = validator();
    let errors: Vec<String> = v.iter_errors(&report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{}: {errors:?}\n{report:#}", path.display());
    let bounds = report["bounds"].as_array().unwrap();
    assert!(!bounds.is_empty());
    for b in bounds {
        assert!(b["method"].is_string() && b["tolerance"].is_number(), "{b}");
    }
    report
}

/// Delsarte LP for binary codes of length `n`, minimum distance `d`, by
/// enumerating every vertex of the feasible polytope in floating point.
fn delsarte_by_vertices(n: usize, d: usize) -> f64 {
    let kraw = |k: usize, x: usize| -> f64 {
        let binom = |a: i64, b: i64| -> f64 {
            if b < 0 || b > a {
                return 0.0;
            }
            (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64)
        };
        (0..=k as i64).map(|i| (-1f64).powi(i as i32) * binom(x as i64, i) * binom((n - x) as i64, k as i64 - i)).sum()
    };
    let vars: Vec<usize> = (d..=n).collect();
    let m = vars.len();
    // rows a·x >= b
    let mut rows: Vec<(Vec<f64>, f64)> = (1..=n).map(|k| (vars.iter().map(|&x| kraw(k, x)).collect(), -kraw(k, 0))).collect();
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        rows.push((e, 0.0));
    }
    let mut best = f64::NEG_INFINITY;
    let mut pick = vec![0usize; m];
    fn combos(start: usize, depth: usize, total: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if depth == pick.len() {
            f(pick);
            return;
        }
        for i in start..total {
            pick[depth] = i;
            combos(i + 1, depth + 1, total, pick, f);
        }
    }
    combos(0, 0, rows.len(), &mut pick, &mut |sel: &[usize]| {
        let mut a: Vec<Vec<f64>> = sel.iter().map(|&r| {
            let mut v = rows[r].0.clone();
            v.push(rows[r].1);
            v
        }).collect();
        for c in 0..m {
            let Some(p) = (c..m).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else { return };
            if a[p][c].abs() < 1e-9 {
                return;
            }
            a.swap(c, p);
            for r in 0..m {
                if r != c {
                    let f = a[r][c] / a[c][c];
                    for k in c..=m {
                        a[r][k] -= f * a[c][k];
                    }
                }
            }
        }
        let x: Vec<f64> = (0..m).map(|i| a[i][m] / a[i][i]).collect();
        if rows.iter().all(|(row, b)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() >= b - 1e-9) {
            best = best.max(1.0 + x.iter().sum::<f64>());
        }
    });
    best
}

#[test]
fn krawtchouk_evaluation() {
    // K_2(1) for n = 4: C(3,2) - C(1,1)C(3,1) = 0
    let o = run(&["poly", "krawtchouk", "--n", "4", "--q", "2", "--k", "2", "--eval", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0\n");
    let o = run(&["poly", "krawtchouk", "--n", "4", "--q", "2", "--k", "2", "--coeffs"]);
    // K_2(x) = 2x^2 - 8x + 6
    assert_eq!(stdout(&o), "6 -8 2\n");
    let o = run(&["poly", "gegenbauer", "--n", "3", "--k", "2", "--eval", "1/2"]);
    assert_eq!(stdout(&o), "-1/8\n");
    let o = run(&["poly", "qhahn", "--n", "4", "--q", "1", "--i", "2", "--j", "2", "--k", "0", "--eval", "1"]);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        &["poly", "krawtchouk", "--n", "4", "--q", "2", "--k", "9"][..],
        &["poly", "hahn", "--n", "6", "--k", "1"],
        &["poly", "qhahn", "--n", "4", "--q", "6", "--i", "1", "--j", "2", "--k", "1"],
        &["bound", "lp", "hamming", "--n", "0", "--delta", "3"],
        &["bound", "lp", "sphere", "--n", "8", "--max-cos", "1/0"],
        &["theta", "cycle", "--q", "2"],
        &["nonsense"],
        &["verify", "cert", "/nonexistent/cert.json"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn hamming_lp_report_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let cert = dir.path().join("cert.json");
    let o = run(&[
        "bound", "lp", "hamming", "--n", "5", "--delta", "3",
        "--json", json.to_str().unwrap(), "--cert", cert.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let oracle = delsarte_by_vertices(5, 3);
    assert!((oracle - 4.0).abs() < 1e-9, "{oracle}");
    assert!(stdout(&o).contains("bound = 4\n"));
    let report = check_report(&json);
    assert_eq!(report["bounds"][0]["value"], "4");
    assert_eq!(report["bounds"][0]["method"], "lp");
    assert_eq!(report["certificate"], cert.to_str().unwrap());

    let v = run(&["verify", "cert", cert.to_str().unwrap()]);
    assert!(v.status.success());
    assert_eq!(stdout(&v), "VALID bound=4\n");
}

#[test]
fn lp_bounds_match_vertex_enumeration() {
    for (n, d) in [(6, 3), (7, 3), (8, 4), (9, 4)] {
        let dir = tempfile::tempdir().unwrap();
        let json = dir.path().join("r.json");
        let o = run(&["bound", "lp", "hamming", "--n", &n.to_string(), "--delta", &d.to_string(), "--json", json.to_str().unwrap()]);
        assert!(o.status.success());
        let report = check_report(&json);
        let got = report["bounds"][0]["approx"].as_f64().unwrap();
        let oracle = delsarte_by_vertices(n, d);
        assert!((got - oracle).abs() < 1e-7, "n={n} d={d}: {got} vs {oracle}");
    }
}

#[test]
fn every_bound_report_validates() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["bound", "lp", "johnson", "--n", "10", "--w", "4", "--delta", "4"],
        vec!["bound", "lp", "sphere", "--n", "8", "--max-cos", "1/2", "--degree", "6"],
        vec!["bound", "lp", "hamming", "--n", "4", "--q", "3", "--delta", "3"],
        vec!["bound", "lp", "hamming", "--n", "3", "--delta", "5"],
        vec!["bound", "sdp", "schrijver", "--n", "6", "--delta", "3"],
        vec!["bound", "sdp", "schrijver", "--n", "5", "--delta", "4", "--tol", "1e-7"],
        vec!["theta", "cycle", "--q", "7"],
        vec!["theta", "code", "--n", "7", "--delta", "3", "--variant", "theta-prime"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let json = dir.path().join(format!("r{i}.json"));
        let mut full = args.clone();
        full.extend(["--json", json.to_str().unwrap()]);
        let o = run(&full);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let report = check_report(&json);
        assert_eq!(report["command"][0], args[0]);
    }
    let johnson: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r0.json")).unwrap()).unwrap();
    assert_eq!(johnson["bounds"][0]["value"], "30");
}

#[test]
fn schrijver_cli_bound_sits_between_lp_and_truth() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("s.json");
    let cert = dir.path().join("s_cert.json");
    let o = run(&[
        "bound", "sdp", "schrijver", "--n", "6", "--delta", "3",
        "--json", json.to_str().unwrap(), "--cert", cert.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = check_report(&json);
    let sdp = report["bounds"][0]["approx"].as_f64().unwrap();
    let lp = report["bounds"][2]["approx"].as_f64().unwrap();
    let floored: f64 = report["bounds"][0]["floored"].as_str().unwrap().parse().unwrap();
    // A(6,3) = 8
    assert!(sdp >= 8.0 && floored <= lp + 1e-5, "{sdp} vs lp {lp}");
    assert_eq!(report["bounds"][0]["floored"], "8");
    let v = run(&["verify", "cert", cert.to_str().unwrap()]);
    assert!(v.status.success());
    assert!(stdout(&v).starts_with("VALID bound="));
}

#[test]
fn emit_sdpa_is_stable_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dat-s");
    let b = dir.path().join("b.dat-s");
    for p in [&a, &b] {
        let o = run(&["bound", "sdp", "schrijver", "--n", "6", "--delta", "3", "--emit-sdpa", p.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(!stdout(&o).contains("bound ="), "emit-sdpa must not solve");
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let parsed = parse_sdpa(&text).unwrap();
    let mut expect = build_schrijver(6, 3).unwrap().problem.to_f64();
    expect.maximize = false;
    expect.offset = 0.0;
    expect.canonicalize();
    let mut got = parsed;
    got.canonicalize();
    assert_eq!(got, expect);
}

#[test]
fn theta_commands() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c5.txt");
    std::fs::write(&graph, "# pentagon\n5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n").unwrap();
    let json = dir.path().join("t.json");
    let o = run(&["theta", "graph", graph.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = check_report(&json);
    let theta = report["bounds"][0]["approx"].as_f64().unwrap();
    assert!((theta - 5f64.sqrt()).abs() < 1e-6, "{theta}");
    assert!(stdout(&o).contains("alpha = 2"));

    std::fs::write(&graph, "3 1\n0 7\n").unwrap();
    assert_eq!(run(&["theta", "graph", graph.to_str().unwrap()]).status.code(), Some(1));

    let o = run(&["theta", "cycle", "--q", "6"]);
    assert!(stdout(&o).contains("closed form = 3\n"), "{}", stdout(&o));

    // Hamming(7, 3): the symmetrized θ′ is the Delsarte bound 16
    let o = run(&["theta", "code", "--n", "7", "--delta", "3", "--variant", "theta-prime"]);
    assert!(stdout(&o).contains("theta-prime (symmetrized) = 16\n"), "{}", stdout(&o));
}

#[test]
fn verify_golden_certificates() {
    let e8 = workspace().join("certs/e8_kissing.json");
    let o = run(&["verify", "cert", e8.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VALID bound=240\n");

    let pentagon = workspace().join("certs/pentagon_theta.json");
    let o = run(&["verify", "cert", pentagon.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VALID bound=559017/250000\n");
}

#[test]
fn corrupted_and_malformed_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(workspace().join("certs/e8_kissing.json")).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, text.replace("\"832/231\"", "\"832/230\"")).unwrap();
    let o = run(&["verify", "cert", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("INVALID"));

    std::fs::write(&bad, text.replace("\"claimed_bound\": \"240\"", "\"claimed_bound\": \"239\"")).unwrap();
    assert_eq!(run(&["verify", "cert", bad.to_str().unwrap()]).status.code(), Some(3));

    std::fs::write(&bad, &text[..text.len() / 2]).unwrap();
    let o = run(&["verify", "cert", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn reproduce_kissing8_is_fast_and_exact() {
    let start = Instant::now();
    let o = run(&["reproduce", "kissing8"]);
    assert!(start.elapsed() < Duration::from_secs(5));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "bound = 240"), "{out}");
    assert!(out.contains("1, 16/7, 200/63, 832/231, 1216/429, 5120/3003, 2560/4641"));
}

#[test]
fn other_recipes_succeed() {
    let o = run(&["reproduce", "pentagon"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("dual certificate: VALID"));
    let o = run(&["reproduce", "mcwilliams-demo"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("identity holds").count(), 3);
}

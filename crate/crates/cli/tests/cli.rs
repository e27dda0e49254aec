use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dsg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = dsg(args);
    assert!(
        out.status.success(),
        "dsg {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn planted(dir: &Path, n: usize, k: usize, seed: u64) -> (PathBuf, f64) {
    let p = dir.join(format!("planted-{n}-{seed}.el"));
    ok(&[
        "gen",
        "planted",
        "--n",
        &n.to_string(),
        "--k",
        &k.to_string(),
        "--pin",
        "0.85",
        "--pout",
        "0.01",
        "--seed",
        &seed.to_string(),
        "--out",
        s(&p),
    ]);
    let text = std::fs::read_to_string(&p).unwrap();
    let density = text
        .lines()
        .find_map(|l| l.strip_prefix("# block density "))
        .and_then(|l| l.split(" = ").nth(1))
        .unwrap()
        .parse()
        .unwrap();
    (p, density)
}

fn rows(path: &Path) -> (Vec<String>, Vec<HashMap<String, String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let comments = text
        .lines()
        .filter(|l| l.starts_with('#'))
        .map(str::to_string)
        .collect();
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rd.headers().unwrap().clone();
    let rows = rd
        .records()
        .map(|r| {
            let r = r.unwrap();
            headers
                .iter()
                .zip(r.iter())
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect()
        })
        .collect();
    (comments, rows)
}

fn num(row: &HashMap<String, String>, col: &str) -> f64 {
    row[col].parse().unwrap()
}

#[test]
fn planted_generation_then_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let (g, block) = planted(dir.path(), 200, 30, 1);
    let out = dir.path().join("oracle.csv");
    ok(&["--algo", "oracle", "--input", s(&g), "--out", s(&out)]);
    let (comments, r) = rows(&out);
    assert_eq!(r.len(), 1);
    assert!(comments[0].contains("NON-PRIVATE EVALUATION"));
    let lam = num(&r[0], "lambda_star");
    assert!(lam >= block - 1e-12, "{lam} < {block}");
    assert_eq!(num(&r[0], "noisy_density"), lam);
}

#[test]
fn ledp_trials_are_reproducible_with_constant_budget() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = planted(dir.path(), 40, 10, 2);
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&[
            "--algo",
            "ledp",
            "--input",
            s(&g),
            "--eps",
            "4",
            "--delta",
            "1e-6",
            "--trials",
            "20",
            "--seed",
            "7",
            "--out",
            s(&out),
        ]);
        rows(&out)
    };
    let (comments, a) = run("a.csv");
    assert!(comments.is_empty());
    assert_eq!(a.len(), 20);
    assert!(!a[0].contains_key("true_density"));
    assert!(!a[0].contains_key("lambda_star"));
    for col in ["zcdp_total", "eps_at_delta", "params", "rounds"] {
        assert!(a.iter().all(|r| r[col] == a[0][col]), "{col} varies");
    }
    // The calibration converts to eps^2/(16 ln(1/delta)) + eps/2 <= eps.
    let eps_at = num(&a[0], "eps_at_delta");
    let want = 16.0 / (16.0 * 1e6f64.ln()) + 2.0;
    assert!((eps_at - want).abs() < 1e-9, "{eps_at} vs {want}");
    let (_, b) = run("b.csv");
    for (x, y) in a.iter().zip(&b) {
        for col in ["noisy_density", "trial_seed", "set_size"] {
            assert_eq!(x[col], y[col]);
        }
    }
    let seeds: std::collections::HashSet<_> = a.iter().map(|r| &r["trial_seed"]).collect();
    assert_eq!(seeds.len(), 20);
}

#[test]
fn every_algorithm_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = planted(dir.path(), 30, 8, 3);
    let w = dir.path().join("w.el");
    ok(&[
        "gen",
        "weighted",
        "--n",
        "20",
        "--p",
        "0.3",
        "--seed",
        "4",
        "--out",
        s(&w),
    ]);
    let d = dir.path().join("d.el");
    ok(&[
        "gen",
        "directed",
        "--n",
        "20",
        "--s",
        "4",
        "--t",
        "5",
        "--seed",
        "5",
        "--out",
        s(&d),
    ]);
    for (algo, input) in [
        ("ledp", &g),
        ("centralized", &g),
        ("pure", &g),
        ("value", &g),
        ("weighted", &w),
        ("directed", &d),
    ] {
        let out = dir.path().join(format!("{algo}.csv"));
        ok(&[
            "--algo",
            algo,
            "--input",
            s(input),
            "--eps",
            "2",
            "--trials",
            "2",
            "--reveal-truth",
            "--out",
            s(&out),
        ]);
        let (comments, r) = rows(&out);
        assert_eq!(r.len(), 2, "{algo}");
        assert!(comments[0].contains("NON-PRIVATE"));
        assert!(num(&r[0], "zcdp_total") > 0.0, "{algo}");
        assert!(num(&r[0], "eps_at_delta") > 0.0, "{algo}");
        assert!(r[0]["true_density"].parse::<f64>().is_ok(), "{algo}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = planted(dir.path(), 20, 5, 6);
    let code = |args: &[&str]| dsg(args).status.code().unwrap();
    assert_eq!(code(&["--algo", "magic", "--input", s(&g)]), 2);
    assert_eq!(code(&["--algo", "ledp"]), 2);
    assert_eq!(
        code(&["--algo", "ledp", "--input", s(&g), "--trials", "0"]),
        2
    );
    let bad = dir.path().join("bad.el");
    std::fs::write(&bad, "0 1\n1 1\n").unwrap();
    assert_eq!(code(&["--algo", "ledp", "--input", s(&bad)]), 3);
    assert_eq!(code(&["--algo", "ledp", "--input", "/nonexistent/g.el"]), 3);
    // eps must stay below 8 ln(1/delta) = 8 ln 10 ≈ 18.4 for the local variant.
    assert_eq!(
        code(&[
            "--algo",
            "ledp",
            "--input",
            s(&g),
            "--eps",
            "20",
            "--delta",
            "0.1"
        ]),
        4
    );
    assert_eq!(code(&["--algo", "pure", "--input", s(&g), "--eps", "0"]), 4);
    assert_eq!(
        code(&["--algo", "ledp", "--input", s(&g), "--delta", "2"]),
        4
    );
}

#[test]
fn transcript_ledger_and_json_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = planted(dir.path(), 24, 6, 8);
    let (t, l, out) = (
        dir.path().join("t.jsonl"),
        dir.path().join("l.json"),
        dir.path().join("r.json"),
    );
    ok(&[
        "--algo",
        "ledp",
        "--input",
        s(&g),
        "--eps",
        "3",
        "--format",
        "json",
        "--transcript",
        s(&t),
        "--ledger",
        s(&l),
        "--out",
        s(&out),
    ]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["non_private_evaluation"], false);
    let row = &doc["rows"][0];
    assert!(row.get("true_density").is_none());
    let transcript = dsg_core::ledp::Transcript::read_jsonl(std::io::BufReader::new(
        std::fs::File::open(&t).unwrap(),
    ))
    .unwrap();
    assert_eq!(
        transcript.rounds(),
        row["rounds"].as_u64().unwrap() as usize
    );
    let ledger: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&l).unwrap()).unwrap();
    let total = ledger["zcdp_total"].as_f64().unwrap();
    assert!((total - row["zcdp_total"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = planted(dir.path(), 20, 5, 9);
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "# defaults\nalgo = ledp\ninput = {}\neps = 2\nT = 17\ntrials = 3\n",
            s(&g)
        ),
    )
    .unwrap();
    let out = dir.path().join("r.csv");
    ok(&["--config", s(&cfg), "--eps", "5", "--out", s(&out)]);
    let (_, r) = rows(&out);
    assert_eq!(r.len(), 3);
    assert_eq!(num(&r[0], "eps"), 5.0);
    assert!(r[0]["params"].contains("T=17"));
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(dsg(&["--config", s(&bad)]).status.code(), Some(2));
}

#[test]
fn zero_noise_runs_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = planted(dir.path(), 12, 5, 10);
    let out = dir.path().join("z.csv");
    ok(&[
        "--algo",
        "ledp",
        "--input",
        s(&g),
        "--zero-noise",
        "--reveal-truth",
        "--out",
        s(&out),
    ]);
    let (_, r) = rows(&out);
    assert!(r[0]["params"].contains("zero_noise"));
    assert_eq!(r[0]["zcdp_total"], "");
    assert_eq!(r[0]["eps_at_delta"], "");
    let d = num(&r[0], "true_density");
    let lam = num(&r[0], "lambda_star");
    assert!(d >= 0.95 * lam, "{d} vs {lam}");
}

#[test]
fn summarize_groups_and_checks_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let (g, block) = planted(dir.path(), 30, 10, 11);
    let out = dir.path().join("r.csv");
    ok(&[
        "--algo",
        "ledp",
        "--input",
        s(&g),
        "--eps",
        "4",
        "--trials",
        "4",
        "--reveal-truth",
        "--out",
        s(&out),
    ]);
    let summary = dir.path().join("s.csv");
    let o = ok(&[
        "summarize",
        s(&out),
        "--reference",
        &block.to_string(),
        "--out",
        s(&summary),
    ]);
    let (_, r) = rows(&summary);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["algo"], "ledp");
    assert_eq!(r[0]["rows"], "4");
    assert!(["PASS", "FAIL"].contains(&r[0]["verdict"].as_str()));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ledp"));
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "algo,n,eps,delta,noisy_density\n").unwrap();
    assert_eq!(dsg(&["summarize", s(&empty)]).status.code(), Some(3));
}

#[test]
fn oracle_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = planted(dir.path(), 30, 8, 12);
    let cache = dir.path().join("cache.json");
    for _ in 0..2 {
        ok(&[
            "--algo",
            "oracle",
            "--input",
            s(&g),
            "--oracle-cache",
            s(&cache),
        ]);
    }
    let c: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(c.as_object().unwrap().len(), 1);
}

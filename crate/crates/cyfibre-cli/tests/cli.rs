use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyfibre")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("cyfibre-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

// (6k)! / ((3k)! (2k)! k!) via the ratio 12 (6k - 1)(6k - 5) / k^2
fn mori(k: u128) -> u128 {
    (1..=k).fold(1, |a, j| a * 12 * (6 * j - 1) * (6 * j - 5) / (j * j))
}

#[test]
fn periods_json_row() {
    let o = run(&["periods", "--preset", "main4", "--d1", "10", "--d2", "2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut row = vec![String::new(); 11];
    for t in v["pi0"]["terms"].as_array().unwrap() {
        if t[1] == 0 {
            row[t[0].as_u64().unwrap() as usize] = t[2].as_str().unwrap().to_string();
        }
    }
    let want: Vec<String> = (0..=10).map(|k| mori(k).to_string()).collect();
    assert_eq!(row, want);
    assert_eq!(v["slices"].as_array().unwrap().len(), 3);
}

#[test]
fn slice_constant_two() {
    let o = run(&["periods", "--preset", "main4", "--d1", "12", "--d2", "2", "--slice-constants", "2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["slices"][0]["c0"], "1/16");
    assert_eq!(v["slices"][0]["ct1"], "0");
}

#[test]
fn usage_errors() {
    let o = run(&["periods", "--preset", "nope"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown preset"));
    assert_eq!(code(&run(&["gw", "--d1", "0"])), 2);
    assert_eq!(code(&run(&["gw", "--preset", "g0_2_n4"])), 2);
    assert_eq!(code(&run(&["periods", "--format", "csv"])), 2);
    assert_eq!(code(&run(&["periods", "--preset", "main4", "--n", "3"])), 2);
    assert_eq!(code(&run(&["bogus"])), 2);
}

#[test]
fn inline_parameters() {
    let o = run(&["periods", "--n", "3", "--a0", "64", "--a1", "3/4", "--a2", "1/4", "--d1", "6", "--d2", "1", "--format", "text"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    // 64^k (3/4)_k (1/4)_k / k!^2 = (4k)! / (2k)! / k!^2
    assert!(stdout(&o).contains("Pi0(z1, 0) = 1, 12, 420, 18480, 900900, 46558512, 2498640144"));
}

#[test]
fn gw_gamma1_column() {
    let o = run(&["gw", "--preset", "main4", "--d1", "5", "--d2", "1", "--gamma", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "d1\\d2,0,1");
    let col: Vec<&str> = lines[1..7].iter().map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(col, ["-20", "7680", "-1800000", "278394880", "623056099920", "97531011394560"]);
    assert!(lines[1].starts_with("0,classical,"));
}

#[test]
fn gw_gamma2_seed_row() {
    let o = run(&["gw", "--d1", "4", "--d2", "1", "--gamma", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e = v["entries"].as_array().unwrap();
    for d in 1..=4u64 {
        let x = e.iter().find(|x| x["d1"] == d && x["d2"] == 0).unwrap();
        assert_eq!(x["n"], (960 * d).to_string());
    }
    assert!(v["seed"].as_str().unwrap().contains("12 + 4 E4"));
}

#[test]
fn verify_passes_on_main() {
    let o = run(&["verify", "--d1", "8", "--d2", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains(", 0 failed"));
    assert!(stdout(&o).contains("PASS three-point identities"));
}

#[test]
fn verify_row_limits() {
    let o = run(&["verify", "--preset", "row1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check"] == "row1 z1-limit matches printed" && c["status"] == "PASS"));
}

#[test]
fn verify_detects_perturbation() {
    let o = run(&["verify", "--d1", "6", "--d2", "3", "--perturb", "2,0,1"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("FAIL")).unwrap();
    // W^(2,2) hatted by z1^2 z2^2 has no pole left, so z2 in its numerator enters at degree 1
    assert!(line.contains("first residual at total degree 1"), "{line}");
}

#[test]
fn fit_c2222_first_order() {
    let o = run(&["fit", "--source", "c2222", "--part", "1", "--d1", "12", "--max-e2", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("/eta^48 * (-185/9*E4*E6^3 - 175/9*E4^4*E6)"));
}

#[test]
fn fit_input_file() {
    // E4^3 = 1 + 720 q + 179280 q^2 + ...
    let e4: Vec<i64> = {
        let s3 = |n: i64| (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum::<i64>();
        std::iter::once(1).chain((1..=8).map(|n| 240 * s3(n))).collect()
    };
    let mut cube = vec![0i64; 9];
    for (i, a) in e4.iter().enumerate() {
        for (j, b) in e4.iter().enumerate() {
            for (k, c) in e4.iter().enumerate() {
                if i + j + k <= 8 {
                    cube[i + j + k] += a * b * c;
                }
            }
        }
    }
    let terms: Vec<(i64, String)> = cube.iter().enumerate().map(|(e, c)| (e as i64, c.to_string())).collect();
    let path = tmp("e4cubed.json");
    let j = serde_json::json!({ "weight": "Mixed", "base_den": 1, "min_exp": 0, "cap": 8, "terms": terms });
    std::fs::write(&path, j.to_string()).unwrap();
    let o = run(&["fit", "--input", path.to_str().unwrap(), "--weight", "12", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t = v["terms"].as_array().unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0]["monomial"], "E4^3");
    assert_eq!(t[0]["coeff"], "1");

    let short = tmp("short.json");
    std::fs::write(&short, serde_json::json!({ "weight": "Mixed", "base_den": 1, "min_exp": 0, "cap": 1, "terms": [[0, "1"], [1, "720"]] }).to_string()).unwrap();
    let o = run(&["fit", "--input", short.to_str().unwrap(), "--weight", "12"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("underdetermined"));
}

#[test]
fn config_file_and_determinism() {
    let cfg = tmp("run.json");
    std::fs::write(&cfg, r#"{"preset": "main4", "d1": 4, "d2": 1, "gamma": 2, "format": "csv"}"#).unwrap();
    let a = tmp("a.csv");
    let b = tmp("b.csv");
    assert_eq!(code(&run(&["gw", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["gw", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap()])), 0);
    let sa = std::fs::read(&a).unwrap();
    assert_eq!(sa, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(sa).unwrap().contains("1,960,5760"));
    // flags override the file
    let o = run(&["gw", "--config", cfg.to_str().unwrap(), "--gamma", "1"]);
    assert!(stdout(&o).contains("1,0,7680"));
}

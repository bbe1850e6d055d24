use std::process::{Command, Output};

use hardimer::asymptotics::{growth_curve, lyapunov_estimate, xi_spectrum};
use hardimer::transfer::{z_partial, TransferParams, ZnOptions};
use hardimer::EvalPoint;
use num_rational::BigRational;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardimer"))
        .args(args)
        .env_remove("HARDIMER_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn pretty<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).unwrap() + "\n"
}

#[test]
fn count_and_census() {
    assert_eq!(stdout(&["count", "brrb"]), "3\n");
    assert_eq!(stdout(&["count", "bbrr"]), "4\n");
    assert_eq!(stdout(&["census", "bb"]), "1 + b3\n");
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["census", "rbrrbrbbrbrb", "--json"])).unwrap();
    let hit = json
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["i"] == 2 && e["j"] == 1 && e["k"] == 3)
        .expect("monomial b3^2 r3 y^3");
    assert!(hit["m"].as_str().unwrap().parse::<u64>().unwrap() >= 1);
}

#[test]
fn coefficients_and_dump() {
    assert_eq!(stdout(&["coeff", "bb"]), "1 + b3\n");
    assert_eq!(stdout(&["coeff", "rb", "--rep", "sb"]), "0\n");
    let rep: serde_json::Value = serde_json::from_str(&stdout(&["coeff", "--dump-rep"])).unwrap();
    assert_eq!(rep["dim"], 38);
    assert_eq!(rep["mat_b"].as_array().unwrap().len(), 38);
    assert_eq!(rep["gamma"].as_array().unwrap().len(), 38);
}

#[test]
fn series_modes_agree() {
    let a = stdout(&["series", "--mode", "recursive", "--len", "6"]);
    let b = stdout(&["series", "--mode", "rational", "--len", "6"]);
    assert_eq!(a, b);
    let sb: serde_json::Value = serde_json::from_str(&stdout(&[
        "series", "--mode", "rational", "--len", "2", "--which", "sb",
    ]))
    .unwrap();
    assert_eq!(sb["max_len"], 2);
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--max-len", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.contains("PASS")));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["count", "brxb"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'x'"));
    for args in [
        vec!["zn", "--n", "3", "--u", "abc", "--v", "0", "--w", "0"],
        vec!["spectrum", "--tol", "small"],
        vec!["frobnicate"],
        vec!["count", "brrb", "--bogus"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_one() {
    let out = run(&[
        "zn", "--n", "2", "--u", "1", "--v", "0", "--w", "0", "--exact",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bb"));
    assert_eq!(run(&["spectrum", "--tol", "0"]).status.code(), Some(1));
    let skipped = stdout(&[
        "zn",
        "--n",
        "2",
        "--u",
        "1",
        "--v",
        "0",
        "--w",
        "0",
        "--exact",
        "--skip-singular",
    ]);
    assert!(skipped.contains("\"bb\""));
}

#[test]
fn adapters_are_byte_identical() {
    assert_eq!(
        stdout(&["lyapunov", "--n", "500", "--trials", "8", "--seed", "7"]),
        pretty(&lyapunov_estimate(500, 8, 7, None).unwrap())
    );
    assert_eq!(
        stdout(&["spectrum", "--tol", "1e-10"]),
        pretty(&xi_spectrum(1e-10).unwrap())
    );

    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let params = TransferParams {
        at: EvalPoint::new(q(3, 10), q(-1, 5), q(1, 2)),
        gamma_damp: 0.0,
        n_max: 6,
    };
    assert_eq!(
        stdout(&["zn", "--n", "6", "--u", "0.3", "--v", "-1/5", "--w", "0.5", "--exact"]),
        pretty(&z_partial(&params, &ZnOptions::default()).unwrap())
    );
    let fparams = TransferParams {
        at: EvalPoint::new(0.3, 0.2, 0.5),
        gamma_damp: 1.5,
        n_max: 5,
    };
    assert_eq!(
        stdout(&["zn", "--n", "5", "--u", "0.3", "--v", "0.2", "--w", "0.5", "--gamma", "1.5"]),
        pretty(&z_partial(&fparams, &ZnOptions::default()).unwrap())
    );
}

#[test]
fn csv_outputs() {
    let text = stdout(&["growthcurve", "--nmax", "100", "--step", "25"]);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["n", "mean_growth"]);
    let expected = growth_curve(100, 25).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), expected.len());
    for (r, (n, g)) in rows.iter().zip(expected) {
        assert_eq!(r[0].parse::<usize>().unwrap(), n);
        assert_eq!(r[1].parse::<f64>().unwrap(), g);
    }
    assert!(!text.contains('\r'));
    assert_eq!(
        stdout(&["growthcurve", "--nmax", "3", "--step", "5"]),
        "n,mean_growth\n"
    );

    let z = stdout(&[
        "zpartial", "--gamma", "1.0", "--nmax", "3", "--u", "0", "--v", "0", "--w", "0",
    ]);
    let lines: Vec<&str> = z.lines().collect();
    assert_eq!(lines[0], "n,Z_n,partial_sum");
    assert!(lines[3].starts_with("3,8.0000000000000000e0,"));
}

#[test]
fn output_file_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let args = ["zn", "--n", "10", "--u", "0.3", "--v", "0.2", "--w", "0.5"];
    let direct = stdout(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(stdout(&with_file), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);

    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    assert_eq!(stdout(&one), direct);
    let env = Command::new(env!("CARGO_BIN_EXE_hardimer"))
        .args(args)
        .env("HARDIMER_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), direct);
}

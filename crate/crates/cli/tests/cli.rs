mod common;

use common::{data, simgroup, write};
use tempfile::tempdir;

#[test]
fn decompose_two_tone() {
    let dir = tempdir().unwrap();
    let out = simgroup(["--out".as_ref(), dir.path().as_os_str(), "decompose".as_ref(), data("two_tone.csv").as_os_str()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("2 IMFs\n"), "{}", out.stdout);
    let csv = std::fs::read_to_string(dir.path().join("components.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("imf_1,imf_2,residual"));
    assert_eq!(csv.lines().count(), 513);
    let stats: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("decomposition.json")).unwrap()).unwrap();
    assert_eq!(stats["imf_count"], 2);
    assert!(stats["max_reconstruction_error"].as_f64().unwrap() < 1e-9);
}

#[test]
fn decompose_monotone() {
    let dir = tempdir().unwrap();
    let out = simgroup(["--out".as_ref(), dir.path().as_os_str(), "decompose".as_ref(), data("monotone.csv").as_os_str()]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "0 IMFs, residual only");
    let csv = std::fs::read_to_string(dir.path().join("components.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("residual"));
}

#[test]
fn degenerate_eemd_matches_emd_bytes() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    let input = data("composite.csv");
    let emd = simgroup(["--out".as_ref(), a.path().as_os_str(), "decompose".as_ref(), input.as_os_str()]);
    let eemd = simgroup([
        "--out".as_ref(),
        b.path().as_os_str(),
        "decompose".as_ref(),
        input.as_os_str(),
        "--method".as_ref(),
        "eemd".as_ref(),
        "--noise".as_ref(),
        "0".as_ref(),
        "--ensemble".as_ref(),
        "1".as_ref(),
    ]);
    assert_eq!((emd.code, eemd.code), (0, 0));
    assert_eq!(
        std::fs::read(a.path().join("components.csv")).unwrap(),
        std::fs::read(b.path().join("components.csv")).unwrap()
    );
}

#[test]
fn dtw_examples() {
    let dir = tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "1\n2\n3\n");
    let b = write(dir.path(), "b.csv", "1\n3\n");
    let same = simgroup(["dtw".as_ref(), a.as_os_str(), a.as_os_str()]);
    assert_eq!(same.stdout, "0\n");
    let diff = simgroup(["dtw".as_ref(), a.as_os_str(), b.as_os_str()]);
    assert_eq!(diff.stdout, "1\n");
    let path = simgroup(["dtw".as_ref(), a.as_os_str(), a.as_os_str(), "--path".as_ref()]);
    assert_eq!(path.stdout, "0\n(1,1)\n(2,2)\n(3,3)\n");
    let weighted = simgroup(["dtw".as_ref(), a.as_os_str(), b.as_os_str(), "--weight".as_ref(), "2.5".as_ref()]);
    assert_eq!(weighted.stdout, "2.5\n");
}

#[test]
fn dtw_reads_named_columns() {
    let dir = tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "t,v\n1,0\n2,0\n3,1\n4,0\n");
    let b = write(dir.path(), "b.csv", "t,v\n1,0\n2,1\n3,0\n4,0\n");
    let out = simgroup(["dtw".as_ref(), a.as_os_str(), b.as_os_str(), "--column".as_ref(), "v".as_ref()]);
    assert_eq!(out.stdout, "0\n");
}

#[test]
fn predict_annual_fixture() {
    let dir = tempdir().unwrap();
    let out = simgroup([
        "--out".as_ref(),
        dir.path().as_os_str(),
        "predict".as_ref(),
        data("pct_predict.json").as_os_str(),
        "--dump-groups".as_ref(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let csv = std::fs::read_to_string(dir.path().join("forecast.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 11);
    assert!(rows[1].starts_with("2017,"));
    assert!(rows[10].starts_with("2026,"));
    let groups: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("groups.json")).unwrap()).unwrap();
    let steps = &groups[0]["components"][0]["steps"];
    assert_eq!(steps.as_array().unwrap().len(), 10);
    assert!(!steps[0]["members"].as_array().unwrap().is_empty());
    let forecast: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("forecast.json")).unwrap()).unwrap();
    assert!(forecast["forecasts"][0]["result"]["per_component"][0].get("groups").is_none());
}

#[test]
fn predict_traffic_fixture_with_horizon_flag() {
    let dir = tempdir().unwrap();
    let out = simgroup([
        "--out".as_ref(),
        dir.path().as_os_str(),
        "predict".as_ref(),
        data("vtf_predict.json").as_os_str(),
        "--horizon".as_ref(),
        "3".as_ref(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let csv = std::fs::read_to_string(dir.path().join("forecast.csv")).unwrap();
    assert_eq!(
        csv.lines().map(|l| l.split(',').next().unwrap()).collect::<Vec<_>>(),
        ["time", "121", "122", "123"]
    );
    assert!(!dir.path().join("groups.json").exists());
}

fn config(dir: &std::path::Path, frameworks: &str, extra: &str) -> std::path::PathBuf {
    let dataset = data("composite.csv");
    let doc = format!(
        r#"{{"schema_version":1,"dataset":{{"path":{:?},"column":"value"}},"frameworks":[{frameworks}]{extra}}}"#,
        dataset.to_str().unwrap()
    );
    write(dir, "config.json", &doc)
}

#[test]
fn inconsistent_split_is_a_config_error() {
    let dir = tempdir().unwrap();
    let cfg = config(dir.path(), r#"{"variant":"EMD_DTW_NN","split":[9,9]}"#, "");
    let out = simgroup(["--out".as_ref(), dir.path().as_os_str(), "predict".as_ref(), cfg.as_os_str()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("P + Q must equal N + 1"), "{}", out.stderr);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempdir().unwrap();
    let cfg = config(dir.path(), r#"{"variant":"NN"}"#, r#","window":3"#);
    let out = simgroup(["predict".as_ref(), cfg.as_os_str()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("unknown field"), "{}", out.stderr);
    let cfg = write(dir.path(), "v2.json", r#"{"schema_version":2,"dataset":{"path":"x.csv"},"frameworks":[{"variant":"NN"}]}"#);
    assert_eq!(simgroup(["predict".as_ref(), cfg.as_os_str()]).code, 1);
}

#[test]
fn diverging_training_is_a_numeric_failure() {
    let dir = tempdir().unwrap();
    let cfg = config(dir.path(), r#"{"variant":"NN","predictor":{"kind":"BPNN","learning_rate":1e200}}"#, "");
    let out = simgroup(["--out".as_ref(), dir.path().as_os_str(), "predict".as_ref(), cfg.as_os_str()]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert!(out.stderr.contains("non-finite training loss"));
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "value\n1\n2\nx\n");
    let out = simgroup(["dtw".as_ref(), bad.as_os_str(), bad.as_os_str()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("row 4"), "{}", out.stderr);
    let missing = dir.path().join("missing.csv");
    assert_eq!(simgroup(["decompose".as_ref(), missing.as_os_str()]).code, 2);
    let short = write(dir.path(), "short.csv", "1\n2\n");
    assert_eq!(simgroup(["--out".as_ref(), dir.path().as_os_str(), "decompose".as_ref(), short.as_os_str()]).code, 2);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(simgroup(["frobnicate"]).code, 1);
    assert_eq!(simgroup(["dtw"]).code, 1);
    assert_eq!(simgroup(["--threads", "0", "gradcheck"]).code, 1);
    assert_eq!(simgroup(["--help"]).code, 0);
}

#[test]
fn benchmark_writes_table_and_ranking() {
    let dir = tempdir().unwrap();
    let frameworks = ["NN", "EMD_NN", "EMD_DTW_NN", "EEMD_DTW_NN"]
        .iter()
        .map(|v| format!(r#"{{"variant":"{v}","predictor":{{"kind":"GRNN"}},"eemd":{{"ensemble_size":4}}}}"#))
        .collect::<Vec<_>>()
        .join(",");
    let cfg = config(dir.path(), &frameworks, r#","holdout":136,"seed":3"#);
    let out = simgroup([
        "--out".as_ref(),
        dir.path().as_os_str(),
        "benchmark".as_ref(),
        cfg.as_os_str(),
        "--runs".as_ref(),
        "2".as_ref(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), 5);
    let csv = std::fs::read_to_string(dir.path().join("benchmark.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.starts_with("framework,predictor,137_mean,137_std,"));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("benchmark.json")).unwrap()).unwrap();
    assert_eq!(json["seeds"].as_array().unwrap().len(), 2);
    assert_eq!(json["reports"][0]["runs"].as_array().unwrap().len(), 2);

    let one = config(dir.path(), r#"{"variant":"NN"}"#, r#","holdout":136"#);
    assert_eq!(simgroup(["benchmark".as_ref(), one.as_os_str()]).code, 1);
}

#[test]
fn gradcheck_passes() {
    let out = simgroup(["gradcheck", "--trials", "3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().filter(|l| l.ends_with(": ok")).count(), 3);
    assert_eq!(simgroup(["gradcheck", "--tolerance", "0"]).code, 3);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn btchar(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btchar")).args(args).current_dir(dir).env_remove("BTCHAR_FGL_CACHE").output().unwrap()
}

fn scenario(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name).to_string_lossy().into_owned()
}

#[test]
fn ball_of_radius_two_over_q3() {
    let tmp = tempfile::tempdir().unwrap();
    let out =
        stdout(&btchar(&["building-ball", "--scenario", &corpus("building_ball_n2_p3.json"), "--format", "csv"], tmp.path()));
    assert_eq!(out, "dim,count\n0,17\n1,16\n");
    let json: Value = serde_json::from_str(&stdout(&btchar(
        &["building-ball", "--scenario", &corpus("building_ball_n2_p3.json"), "--radius", "1"],
        tmp.path(),
    )))
    .unwrap();
    assert_eq!(json["results"][0]["counts"], serde_json::json!([5, 4]));
}

#[test]
fn table_of_gl2_f3_has_eight_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = stdout(&btchar(&["fgl-table", "--scenario", &corpus("fgl_table_gl2_3.json"), "--format", "csv"], tmp.path()));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "label,degree,cuspidal,generic,values");
    assert_eq!(rows.len(), 9);
    assert_eq!(rows.iter().filter(|r| r.contains(",true,true,")).count(), 3);
}

#[test]
fn empty_gamma_list_gives_a_valid_report() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = scenario(
        tmp.path(),
        "empty.json",
        r#"{"field":{"p":2},"spec":{"n":2,"e":1,"rho0":"chi0"},"gammas":[],"run":{"command":"char-eval","radius":3}}"#,
    );
    let json: Value =
        serde_json::from_str(&stdout(&btchar(&["char-eval", "--scenario", sc.to_str().unwrap()], tmp.path()))).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["results"], serde_json::json!([]));
    let csv = stdout(&btchar(&["char-eval", "--scenario", sc.to_str().unwrap(), "--format", "csv"], tmp.path()));
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn batch_gives_one_row_per_element_and_route() {
    let tmp = tempfile::tempdir().unwrap();
    // x² + x + 1 scaled by powers of 2 and conjugated by upper unipotents
    let gammas: Vec<String> = (0..10)
        .map(|i| {
            let (s, t) = (1i64 << (i % 3), i as i64 % 4);
            // [[1,t],[0,1]]·[[0,-1],[1,-1]]·[[1,-t],[0,1]]
            let m = [[t, -1 - t * t - t], [1, -1 - t]];
            format!(r#"{{"label":"g{i}","matrix":[[{},{}],[{},{}]]}}"#, s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1])
        })
        .collect();
    let body = format!(
        r#"{{"field":{{"p":2}},"spec":{{"n":2,"e":1,"rho0":"chi0"}},"gammas":[{}],"run":{{"command":"char-eval","radius":4}}}}"#,
        gammas.join(",")
    );
    let sc = scenario(tmp.path(), "batch.json", &body);
    let csv = stdout(&btchar(&["char-eval", "--scenario", sc.to_str().unwrap(), "--format", "csv"], tmp.path()));
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 10 * 4);
    for i in 0..10 {
        let mine: Vec<&&str> = rows.iter().filter(|r| r.starts_with(&format!("g{i},"))).collect();
        assert_eq!(mine.len(), 4);
        assert!(mine.iter().all(|r| r.contains(",ok,")), "{mine:?}");
    }
}

#[test]
fn unknown_keys_are_schema_errors() {
    let tmp = tempfile::tempdir().unwrap();
    for body in [
        r#"{"field":{"p":3},"run":{"command":"fgl-table","n":2,"bogus":1}}"#,
        r#"{"field":{"p":3,"prime":3},"run":{"command":"fgl-table","n":2}}"#,
        r#"{"field":{"p":6},"run":{"command":"fgl-table","n":2}}"#,
        r#"{"field":{"p":3},"run":{"command":"char-eval","n":2}}"#,
    ] {
        let sc = scenario(tmp.path(), "bad.json", body);
        let o = btchar(&["fgl-table", "--scenario", sc.to_str().unwrap()], tmp.path());
        assert_eq!(o.status.code(), Some(2), "{body}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn budgets_are_enforced() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = scenario(tmp.path(), "big.json", r#"{"field":{"p":3},"run":{"command":"fgl-table","n":3}}"#);
    assert_eq!(btchar(&["fgl-table", "--scenario", sc.to_str().unwrap()], tmp.path()).status.code(), Some(3));
    let small = corpus("fgl_table_gl2_3.json");
    assert_eq!(btchar(&["fgl-table", "--scenario", &small, "--budget", "10"], tmp.path()).status.code(), Some(3));
    let sc = scenario(
        tmp.path(),
        "ball.json",
        r#"{"field":{"p":3},"run":{"command":"building-ball","n":2,"radius":3,"ball_budget":5}}"#,
    );
    assert_eq!(btchar(&["building-ball", "--scenario", sc.to_str().unwrap()], tmp.path()).status.code(), Some(3));
}

#[test]
fn tight_truncation_fails_without_partial_files() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = scenario(
        tmp.path(),
        "far.json",
        r#"{"field":{"p":2},"spec":{"n":2,"e":1,"rho0":"chi0"},
            "gammas":[{"label":"far","matrix":[[0,-32],["1/32",-1]]}],
            "run":{"command":"char-eval","radius":3,"output":{"json":"out/far.json","csv":"out/far.csv"}}}"#,
    );
    let o = btchar(&["char-eval", "--scenario", sc.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("raise --radius"));
    assert!(!tmp.path().join("out/far.json").exists() && !tmp.path().join("out/far.csv").exists());
    let o = btchar(&["char-eval", "--scenario", sc.to_str().unwrap(), "--radius", "8"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/far.json")).unwrap()).unwrap();
    assert_eq!(written["results"][0]["agreed"]["decimal"], "1.000000");
}

#[test]
fn command_must_match_the_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let o = btchar(&["char-eval", "--scenario", &corpus("fgl_table_gl2_2.json")], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let o = btchar(&["run", "--scenario", &corpus("fgl_table_gl2_2.json"), "--format", "csv"], tmp.path());
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn reports_are_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = corpus("char_eval_supercuspidal_n2_p3.json");
    let a = tmp.path().join("a.json");
    let b = tmp.path().join("b.json");
    for out in [&a, &b] {
        let o = btchar(&["char-eval", "--scenario", &sc, "--output", out.to_str().unwrap()], tmp.path());
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "parameters", "results", "scenario", "schema_version"]);
}

#[test]
fn tables_are_cached_in_the_configured_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = tmp.path().join("cache");
    let o = Command::new(env!("CARGO_BIN_EXE_btchar"))
        .args(["fgl-table", "--scenario", &corpus("fgl_table_gl2_3.json")])
        .env("BTCHAR_FGL_CACHE", &cache)
        .output()
        .unwrap();
    let first = stdout(&o);
    assert!(cache.join("gl_2_3.json").exists());
    let o =
        btchar(&["fgl-table", "--scenario", &corpus("fgl_table_gl2_3.json"), "--cache-dir", cache.to_str().unwrap()], tmp.path());
    assert_eq!(stdout(&o), first);
}

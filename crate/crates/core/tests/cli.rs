use std::fs;
use std::process::{Command, Output};

fn rcms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcms"))
        .args(args)
        .env_remove("RCMS_CHECKPOINT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn count_sixth_order() {
    let o = rcms(&["count", "--order", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "N=1047649905\nclasses=2804\n");
}

#[test]
fn graphs_first_order() {
    let o = rcms(&["graphs", "--order", "1"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "order,graph_id,canonical_adjacency,M_T,M_K,s,connected\n1,0,4,24,3,8,true\n"
    );
}

#[test]
fn graphs_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let o = rcms(&[
        "graphs",
        "--order",
        "3",
        "--connected-only",
        "--format",
        "json",
        "--dot",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["graphs"].as_array().unwrap().len(), 4);
    let mut names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, vec!["g3_0.dot", "g3_1.dot", "g3_2.dot", "g3_3.dot"]);
    let dot = fs::read_to_string(dir.path().join("g3_0.dot")).unwrap();
    assert!(dot.starts_with("graph g3_0 {"));
    assert_eq!(dot.matches(" -- ").count(), 6);
}

#[test]
fn verify_third_order_with_oracle() {
    let o = rcms(&["verify", "--order", "3", "--oracle"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["order"], 3);
}

#[test]
fn oracle_refused_beyond_limit() {
    let o = rcms(&["verify", "--order", "5", "--oracle"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pairings"));
    let o = rcms(&["verify", "--order", "6", "--oracle", "--slow-oracle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_formats() {
    let o = rcms(&["enumerate", "--order", "2", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "index,matrix,orbit_size,mult_factor\n0,4 0;0 4,2,1\n1,3 1;1 3,2,16\n2,2 2;2 2,1,36\n"
    );
    let o = rcms(&["enumerate", "--order", "3", "--margin", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["margin"], 2);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn checkpoint_directory_and_version() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_rcms"))
        .args(["enumerate", "--order", "3"])
        .env("RCMS_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let path = dir.path().join("rcms-m3-d4.ckpt");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("rcms-checkpoint version="));
    fs::write(
        &path,
        text.replacen(env!("CARGO_PKG_VERSION"), "0.0.0-other", 1),
    )
    .unwrap();
    let o = rcms(&[
        "enumerate",
        "--order",
        "3",
        "--checkpoint",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("version"), "{}", stderr(&o));
}

#[test]
fn decompose_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    fs::write(&a, "# first\n4 4\n2 1 1 0\n0 0 2 2\n0 2 0 2\n2 1 1 0\n").unwrap();
    fs::write(&b, "4 4\n2 1 1 0\n0 1 1 2\n0 2 2 0\n2 0 0 2\n").unwrap();
    let o = rcms(&[
        "decompose",
        "--matrix",
        a.to_str().unwrap(),
        "--matrix",
        b.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = &v["matrices"][0]["decompositions"];
    assert_eq!(first.as_array().unwrap().len(), 1);
    assert_eq!(first[0]["terms"].as_array().unwrap().len(), 4);
    assert_eq!(v["pairs"][0]["verdict"], "inconclusive");
    assert_eq!(v["pairs"][0]["equivalent"], false);
}

#[test]
fn decompose_by_class() {
    let o = rcms(&["decompose", "--order", "3", "--class", "0", "--class", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matrices"].as_array().unwrap().len(), 2);
    let o = rcms(&["decompose", "--order", "3", "--class", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "3 4\n4 0 0\n\n0 4 x\n0 0 4\n").unwrap();
    let o = rcms(&["decompose", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn verify_is_deterministic_across_threads() {
    let a = rcms(&["--threads", "1", "verify", "--order", "3"]);
    let b = rcms(&["--threads", "3", "verify", "--order", "3"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

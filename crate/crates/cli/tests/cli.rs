use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn zncx(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zncx"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("zncx runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn intro(n: usize) -> String {
    let mut gens: Vec<String> = (1..=n).map(|i| format!("\"g{i}\"")).collect();
    let mut rels = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            gens.push(format!("\"h{i}_{j}\""));
            rels.push(format!("[[\"g{i}\",1],[\"g{j}\",1],[\"h{i}_{j}\",1]]"));
            rels.push(format!("[[\"g{j}\",1],[\"g{i}\",1],[\"h{i}_{j}\",1]]"));
        }
    }
    format!(
        "{{\"generators\":[{}],\"relations\":[{}]}}",
        gens.join(","),
        rels.join(",")
    )
}

#[test]
fn upper_bound_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = zncx(&["build-x", "--m", "7", "-o", "x7.scx", "--artifacts", "art"], d);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));
    for f in ["W.scx", "W.labels", "pair.txt", "spurs.txt", "X.scx"] {
        assert!(d.join("art").join(f).exists(), "{f}");
    }
    assert_eq!(
        fs::read_to_string(d.join("x7.scx")).unwrap(),
        fs::read_to_string(d.join("art/X.scx")).unwrap()
    );

    let o = zncx(&["verify", "x7.scx", "--expect-rank", "7"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H0 = Z, H1 = Z^7, H2 = Z^21"));
    let o = zncx(&["verify", "x7.scx", "--expect-rank", "6"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("expected Z^6"));

    let o = zncx(&["extract", "x7.scx", "--basepoint", "0", "-o", "x7.json"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("|S| = 280, |R| = 294"));
    let o = zncx(&["reduce", "x7.json", "--passes", "minimize,sparse", "-o", "r.json"], d);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(d.join("r.json").exists());
}

#[test]
fn small_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = zncx(&["build-w", "--n", "3", "-o", "w3.scx"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(d.join("w3.scx.labels").exists());
    let o = zncx(&["homology", "w3.scx", "--dim", "2"], d);
    assert_eq!(stdout(&o).trim(), "H0 = Z, H1 = Z^3, H2 = Z^3");

    let o = zncx(&["orth", "--size", "8", "-o", "pair.txt"], d);
    assert_eq!(o.status.code(), Some(0));
    let o = zncx(&["orth", "--size", "6", "-o", "pair.txt"], d);
    assert_eq!(o.status.code(), Some(2));

    let o = zncx(&["bounds", "--n", "10"], d);
    assert!(stdout(&o).contains("C(k,3) >= C(n,2): smallest k = 8"));
    // identical inputs give identical bytes
    assert_eq!(stdout(&zncx(&["bounds", "--n", "10"], d)), stdout(&o));
}

#[test]
fn pipeline_and_sg() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("i4.json"), intro(4)).unwrap();
    let o = zncx(&["pipeline", "i4.json"], d);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("k = |S| = 10, c = 24, lambda = ck/n = 60"));
    let o = zncx(&["pipeline", "i4.json", "--c", "1/10"], d);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    fs::write(d.join("t.json"), r#"{"generators":["g"],"relations":[[["g",2]]]}"#).unwrap();
    let o = zncx(&["pipeline", "t.json"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("abelianize"));

    // a 3x3 grid: every point sees the others on special lines
    let grid: Vec<String> = (0..3).flat_map(|x| (0..3).map(move |y| format!("[{x},{y}]"))).collect();
    fs::write(
        d.join("grid.json"),
        format!("{{\"dimension\":2,\"points\":[{}]}}", grid.join(",")),
    )
    .unwrap();
    let o = zncx(&["sg-check", "grid.json", "--delta", "1/2"], d);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = zncx(&["sg-check", "grid.json", "--delta", "1"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("points below the threshold"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(zncx(&["build-x", "--m", "5", "-o", "x.scx"], d).status.code(), Some(2));
    assert_eq!(zncx(&["verify", "missing.scx"], d).status.code(), Some(2));
    assert_eq!(zncx(&["bounds"], d).status.code(), Some(2));
    fs::write(d.join("bad.json"), "{").unwrap();
    assert_eq!(zncx(&["pipeline", "bad.json"], d).status.code(), Some(2));
    fs::write(d.join("p.json"), r#"{"dimension":2,"points":[[1,2]]}"#).unwrap();
    assert_eq!(zncx(&["sg-check", "p.json", "--delta", "x"], d).status.code(), Some(2));
}

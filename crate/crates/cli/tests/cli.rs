use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const CAP3: &str = "((1,1,2),(1,2,3),(1,2,3),(1,2,3))";

fn eii(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eii"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eii-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn info_prints_parameters() {
    let o = eii(&["--capability", CAP3, "--n", "7", "info"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("[84, 62, 4]\n"), "{text}");
    assert!(text.contains("layers: 3"));
    assert!(text.contains(&format!("capability: {CAP3}")));
}

#[test]
fn encode_then_decode_restores_erased_symbols() {
    let data = scratch("data.txt", &vec!["5"; 62].join(" "));
    let enc = eii(&[
        "--capability",
        CAP3,
        "--n",
        "7",
        "encode",
        "--data",
        data.to_str().unwrap(),
    ]);
    assert!(
        enc.status.success(),
        "{}",
        String::from_utf8_lossy(&enc.stderr)
    );
    let codeword = stdout(&enc);
    let word = scratch("word.txt", &codeword);
    let w = word.to_str().unwrap();

    let echo = eii(&["--capability", CAP3, "--n", "7", "decode", "--word", w]);
    assert_eq!(echo.status.code(), Some(0));
    assert_eq!(stdout(&echo), codeword);

    for mode in ["alg", "pcheck", "hybrid"] {
        let o = eii(&[
            "--capability",
            CAP3,
            "--n",
            "7",
            "decode",
            "--word",
            w,
            "--erasures",
            "0,1,9,30,83",
            "--mode",
            mode,
        ]);
        assert_eq!(o.status.code(), Some(0), "{mode}");
        assert_eq!(stdout(&o), codeword, "{mode}");
    }

    let all: Vec<String> = (0..40).map(|i| i.to_string()).collect();
    let o = eii(&[
        "--capability",
        CAP3,
        "--n",
        "7",
        "decode",
        "--word",
        w,
        "--erasures",
        &all.join(","),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(eii(&["info"]).status.code(), Some(1));
    assert_eq!(
        eii(&["--spec", "/nonexistent/spec.json", "info"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(eii(&["bogus-command"]).status.code(), Some(1));
    let o = eii(&["--capability", "((1,2),(2,1))", "--n", "2", "info"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = scratch("bad.json", "{\"field\": ");
    assert_eq!(
        eii(&["--spec", bad.to_str().unwrap(), "info"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spec_file_matches_capability_string() {
    let o = eii(&[
        "--capability",
        "(1,1,1,1,1,2,2,2,2,3,3,3)",
        "--n",
        "7",
        "info",
    ]);
    let text = stdout(&o);
    let digest = text
        .lines()
        .find(|l| l.starts_with("digest:"))
        .unwrap()
        .to_string();
    let spec = scratch(
        "spec.json",
        r#"{"field":{"w":4},"code":{"node":{"s":[5,4,3,0],"children":[
            {"leaf":{"n":7,"u":1}},{"leaf":{"n":7,"u":2}},{"leaf":{"n":7,"u":3}}]}}}"#,
    );
    let o = eii(&["--spec", spec.to_str().unwrap(), "info"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains(&digest));
}

#[test]
fn pcheck_csv_has_header() {
    let o = eii(&["--capability", CAP3, "--n", "7", "pcheck", "--reduce"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("# gf=2^3 rows=22 cols=84"));
    assert_eq!(text.lines().count(), 23);
}

#[test]
fn density_line() {
    let o = eii(&["--capability", CAP3, "--n", "7", "density"]);
    assert!(stdout(&o).starts_with("density: 0.3636"), "{}", stdout(&o));
}

#[test]
fn anetf_is_deterministic_across_threads() {
    let run = |threads: &str| {
        stdout(&eii(&[
            "--capability",
            CAP3,
            "--n",
            "7",
            "anetf",
            "--trials",
            "3000",
            "--seed",
            "11",
            "--threads",
            threads,
            "--json",
        ]))
    };
    let one = run("1");
    assert!(one.contains("\"mean\""));
    assert_eq!(one, run("4"));
}

#[test]
fn brute_force_distance_on_a_tiny_code() {
    let spec = scratch(
        "tiny.json",
        r#"{"field":{"w":2},"code":{"node":{"s":[1,1],"children":[{"leaf":{"n":3,"u":1}}]}}}"#,
    );
    let o = eii(&["--spec", spec.to_str().unwrap(), "mindist-brute"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains('4'));
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn quadrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadrep"))
        .args(args)
        .output()
        .expect("spawn quadrep")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bound_text() {
    let o = quadrep(&[
        "bound",
        "--theorem",
        "th1.1",
        "--a",
        "5",
        "--b",
        "1",
        "--format",
        "text",
    ]);
    assert!(o.status.success());
    assert!(
        stdout(&o).starts_with("1443 + 91*sqrt(246) ≈ 2870.279; least n = 2871"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn witness_round_trips_through_check() {
    let o = quadrep(&["witness", "--a", "5", "--b", "1", "--n", "5742"]);
    assert!(o.status.success());
    let json = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n"], 5742);

    let mut child = Command::new(env!("CARGO_BIN_EXE_quadrep"))
        .args(["check", "--stdin"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(json.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("ok: 5742"));
}

#[test]
fn tampered_witness_fails_check() {
    let o = quadrep(&["witness", "--a", "5", "--b", "1", "--n", "5742"]);
    let json = stdout(&o).replacen("5742", "5743", 1);
    let mut child = Command::new(env!("CARGO_BIN_EXE_quadrep"))
        .args(["check", "--stdin"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(json.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exceptions_of_heptagonal_type_form() {
    let o = quadrep(&[
        "exceptions",
        "--a",
        "7",
        "--b",
        "1",
        "--halved",
        "--domain",
        "z",
        "--limit",
        "20000",
        "--format",
        "text",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{1, 2, 5}\n");
}

#[test]
fn problem_file() {
    let dir = std::env::temp_dir().join(format!("quadrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.toml");
    let term = "[[terms]]\na = 7\nb = 1\ncoeff = 1\nhalved = true\ndomain = \"z\"\n";
    std::fs::write(&path, term.repeat(4)).unwrap();
    let o = quadrep(&[
        "exceptions",
        "--problem",
        path.to_str().unwrap(),
        "--limit",
        "5000",
        "--format",
        "text",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "{1, 2, 5}\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sieve_dump_has_header() {
    let path = std::env::temp_dir().join(format!("quadrep-dump-{}.qrs", std::process::id()));
    let o = quadrep(&[
        "sieve",
        "--a",
        "3",
        "--b",
        "1",
        "--halved",
        "--limit",
        "1000",
        "--dump",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], b"QRS1");
    assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 1000);
    std::fs::remove_file(&path).ok();
}

#[test]
fn count_r4() {
    // sums of four squares: r_4(5) = 48 over Z
    let o = quadrep(&[
        "count", "--a", "1", "--b", "0", "--domain", "z", "--n", "5", "--format", "text",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "48\n");
}

#[test]
fn verify_output_is_thread_independent() {
    let args = |t: &'static str| ["--threads", t, "verify", "--no-timing", "--format", "csv"];
    let one = quadrep(&args("1"));
    let many = quadrep(&args("4"));
    // the known refutation makes the run exit 1
    assert_eq!(one.status.code(), Some(1));
    assert_eq!(one.stdout, many.stdout);
    assert!(stdout(&one).contains("T_5_2_not_div_4,refuted"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        quadrep(&["verify", "--claim", "S_7_1"]).status.code(),
        Some(0)
    );
    assert_eq!(
        quadrep(&["verify", "--claim", "T_5_2_not_div_4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        quadrep(&["verify", "--claim", "no_such_claim"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        quadrep(&["verify", "--claim", "S_7_1", "--limit", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        quadrep(&["bound", "--theorem", "th1.1", "--a", "0", "--b", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(quadrep(&["frobnicate"]).status.code(), Some(2));
}

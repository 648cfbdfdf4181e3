use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const THETA3: &str = "2 3\n0 1\n0 1\n0 1\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgeadm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, spec: &str, name: &str) -> PathBuf {
    let out = run(&["gen", "--spec", spec]);
    assert_eq!(code(&out), 0);
    write(dir, name, &stdout(&out))
}

/// Every variant of `text` with one numeric or speed token changed.
fn mutations(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    for (i, line) in lines.iter().enumerate() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        for (j, tok) in tokens.iter().enumerate() {
            let changed = if let Some(v) = tok.strip_prefix("speed=") {
                Some(format!("speed={}", if v == "inf" { "1" } else { "inf" }))
            } else if let Some(v) = tok.strip_prefix("k=") {
                Some(format!("k={}", v.parse::<usize>().unwrap() + 1))
            } else {
                tok.parse::<usize>().ok().map(|v| (v + 1).to_string())
            };
            if let Some(c) = changed {
                let mut t = tokens.clone();
                t[j] = &c;
                let mut ls: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
                ls[i] = t.join(" ");
                out.push(ls.join("\n") + "\n");
            }
        }
    }
    out
}

#[test]
fn theta_degeneracy_prints_delta() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "theta3.g", THETA3);
    let out = run(&["degeneracy", "--speed", "inf", s(&g)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("delta=3\n"));
    assert!(text.contains("layout speed=inf k=3"));
    assert!(text.contains("hideout speed=inf k=3"));
}

#[test]
fn emitted_certificates_verify_and_mutations_are_rejected() {
    let dir = TempDir::new().unwrap();
    let graphs = [
        write(&dir, "theta3.g", THETA3),
        write(&dir, "k4.g", K4),
        gen(&dir, "random:n=6,m=10:42", "r.g"),
    ];
    for g in &graphs {
        for speed in ["2", "3", "inf"] {
            let (l, h) = (dir.path().join("L.cert"), dir.path().join("H.cert"));
            let out = run(&["degeneracy", "--speed", speed, s(g), "--layout-out", s(&l), "--hideout-out", s(&h)]);
            assert_eq!(code(&out), 0);
            let delta: String = stdout(&out).lines().next().unwrap()["delta=".len()..].to_string();
            let layout = std::fs::read_to_string(&l).unwrap();
            let base = ["verify", "--speed", speed, "--k", &delta, s(g)];
            let mut args = base.to_vec();
            args.extend(["--layout", s(&l)]);
            assert_eq!(code(&run(&args)), 0, "{layout}");
            for m in mutations(&layout) {
                let p = write(&dir, "M.cert", &m);
                let mut args = base.to_vec();
                args.extend(["--layout", s(&p)]);
                assert_eq!(code(&run(&args)), 1, "accepted mutated layout\n{m}");
            }
            if h.exists() {
                let hide = std::fs::read_to_string(&h).unwrap();
                let base = ["verify", "--speed", speed, "--k", &delta, "--maximal", s(g)];
                let mut args = base.to_vec();
                args.extend(["--hideout", s(&h)]);
                assert_eq!(code(&run(&args)), 0, "{hide}");
                for m in mutations(&hide) {
                    let p = write(&dir, "M.cert", &m);
                    let mut args = base.to_vec();
                    args.extend(["--hideout", s(&p)]);
                    assert_eq!(code(&run(&args)), 1, "accepted mutated hide-out\n{m}");
                }
                std::fs::remove_file(&h).unwrap();
            }
        }
    }
}

#[test]
fn k4_has_no_adhesion_two_partition() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.g", K4);
    let out = run(&["decompose", "--k", "2", s(&g)]);
    assert_eq!(code(&out), 1);
    let w = write(&dir, "W.txt", &stdout(&out));
    assert!(stdout(&out).starts_with("witness "));
    assert_eq!(code(&run(&["verify", "--witness", s(&w), "--k", "2", s(&g)])), 0);
    assert_eq!(code(&run(&["verify", "--witness", s(&w), "--k", "3", s(&g)])), 1);
    assert_eq!(code(&run(&["immersion", "--k", "2", s(&g)])), 1);
    assert_eq!(code(&run(&["immersion", "--k", "3", s(&g)])), 0);
}

#[test]
fn decompose_compose_round_trip() {
    let dir = TempDir::new().unwrap();
    for seed in 0..8 {
        for k in [2, 3] {
            let g = gen(&dir, &format!("edgesum:k={k},parts=3,n=11:{seed}"), "g.g");
            let out = run(&["decompose", "--k", &k.to_string(), s(&g)]);
            assert_eq!(code(&out), 0);
            let p = write(&dir, "P.txt", &stdout(&out));
            assert_eq!(code(&run(&["verify", "--partition", s(&p), "--k", &k.to_string(), s(&g)])), 0);
            let out = run(&["compose", "--partition", s(&p), s(&g)]);
            assert_eq!(code(&out), 0);
            assert!(stdout(&out).ends_with("# isomorphic to input: true\n"));
        }
    }
}

#[test]
fn exit_codes_for_usage_and_budget() {
    let dir = TempDir::new().unwrap();
    let k7 = {
        let mut t = String::from("7 21\n");
        for u in 0..7 {
            for v in u + 1..7 {
                t.push_str(&format!("{u} {v}\n"));
            }
        }
        write(&dir, "k7.g", &t)
    };
    assert_eq!(code(&run(&["degeneracy", "--speed", "3", "--node-budget", "0", s(&k7)])), 3);
    let bad = write(&dir, "bad.g", "3 2\n0 1\n");
    assert_eq!(code(&run(&["degeneracy", "--speed", "inf", s(&bad)])), 2);
    let lp = write(&dir, "loop.g", "2 1\n1 1\n");
    assert_eq!(code(&run(&["degeneracy", "--speed", "inf", s(&lp)])), 2);
    assert_eq!(code(&run(&["degeneracy", "--speed", "0", s(&k7)])), 2);
    assert_eq!(code(&run(&["degeneracy", s(&k7)])), 2);
    assert_eq!(code(&run(&["gen", "--spec", "random:n=6,m=10"])), 2);
    assert_eq!(code(&run(&["gen"])), 2);
    assert_eq!(code(&run(&["degeneracy", "--speed", "inf", "/nonexistent.g"])), 2);
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&run(&["gen", "--spec", "bounded:n=8,m=12,d=3:7"]));
    let b = stdout(&run(&["gen", "--spec", "bounded:n=8,m=12,d=3:7"]));
    assert_eq!(a, b);
    assert!(a.starts_with("# bounded:n=8,m=12,d=3:7\n8 "));
}

#[test]
fn json_lines_records_parse() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.g", K4);
    let out = run(&["degeneracy", "--speed", "2", "--format", "json-lines", s(&g)]);
    let records: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0]["delta"], 3);
    assert_eq!(records[1]["record"], "layout");
    assert_eq!(records[2]["record"], "hideout");
}

#[test]
fn play_traces() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.g", K4);
    let out = run(&["play", "--speed", "inf", s(&g)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("outcome: captured@"), "{text}");
    for line in text.lines().filter(|l| l.starts_with("round ")) {
        assert!(line.contains(": blocked=[") && line.contains("] robber="), "{line}");
    }
    let out = run(&["play", "--speed", "inf", "--budget", "2", s(&g)]);
    assert_eq!(stdout(&out).lines().last().unwrap(), "outcome: evaded@40");
}

#[test]
fn gadget_output_and_check() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "edge.g", "2 1\n0 1\n");
    let out = run(&["gadget", "--a", "0", "--b", "1", "--k", "1", "--speed", "3", s(&g)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("23 "));
    assert!(text.contains("# role 0 a\n"));
    let gadget = write(&dir, "gadget.g", &text);
    assert_eq!(code(&run(&["degeneracy", "--speed", "3", s(&gadget)])), 0);
    let out = run(&["gadget", "--a", "0", "--b", "1", "--k", "1", "--speed", "3", "--check", s(&g)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("equivalence=holds"));
}

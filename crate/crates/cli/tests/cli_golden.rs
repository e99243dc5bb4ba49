//! Byte-level CLI contract: frozen text and JSON outputs, exit codes,
//! determinism across runs, file input.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rjsj"));
    cmd.args(args).env_remove("JSJ_MAX_STABILIZER_LEN");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn rjsj");
    (
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
        out.status.code().expect("exit code"),
    )
}

#[test]
fn cut_text_golden() {
    let (stdout, stderr, code) = run(&["cut", "--rank", "2", "--words", "ab,ABab", "ab"]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert_eq!(
        stdout,
        "cut point, 2 components\ncomponent 0: monodromy 1\ncomponent 1: monodromy 1\n"
    );
}

#[test]
fn wh_text_and_dot_golden() {
    let (stdout, _, code) = run(&["wh", "--rank", "2", "--words", "b,baa"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "vertices: 4\nedges: 4\nconnected: yes\ncut vertices: none\ncircle: yes\n"
    );
    let (dot, _, code) = run(&["wh", "--rank", "2", "--words", "b,baa", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph wh {"), "{dot}");
    assert!(dot.trim_end().ends_with('}'), "{dot}");
}

#[test]
fn min_text_golden() {
    let (stdout, _, code) = run(&["min", "--rank", "2", "--words", "abAB,ba"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "words: abAB, b\ntotal length: 5\nmoves: 1\n");
}

#[test]
fn scan_text_golden() {
    let (stdout, _, code) =
        run(&["scan", "--rank", "2", "--words", "b,baa,a", "--max-len", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "scanned up to length 3: 2 candidates, incomplete\n\
         a  cut point  2 components  [selected]\n\
         aaB  cut pair  2 components  [crossed]\n\
         selected: 1\n"
    );
}

#[test]
fn jsj_text_golden() {
    let (stdout, _, code) =
        run(&["jsj", "--rank", "2", "--words", "b,baa,a", "--max-len", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "outcome: decomposition\n\
         certified: no (scan length 3)\n\
         cyclic vertices:\n\
        \x20 v0: a (marked)\n\
         pieces:\n\
        \x20 v1: surface  basis: b, aa  induced: a, ab, b\n\
         edges:\n\
        \x20 v0 -- v1  degree 2  image b\n"
    );
}

#[test]
fn jsj_json_golden() {
    let (stdout, _, code) = run(&[
        "jsj", "--rank", "2", "--words", "b,baa,a", "--max-len", "3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    let expected = serde_json::json!({
        "rank": 2,
        "outcome": "decomposition",
        "certified": false,
        "scan_length": 3,
        "vertices": [
            {"id": 0, "kind": "cyclic", "root": "a", "marked": true},
            {"id": 1, "kind": "piece", "basis": ["b", "aa"],
             "induced": ["a", "ab", "b"], "class": "surface"}
        ],
        "edges": [
            {"cyclic": 0, "noncyclic": 1, "degree": 2, "image": "b"}
        ],
    });
    assert_eq!(v, expected);
}

#[test]
fn jsj_dot_golden() {
    let (stdout, _, code) = run(&[
        "jsj", "--rank", "2", "--words", "AAABaab", "--max-len", "4", "--format", "dot",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "graph jsj {\n\
        \x20 v0 [shape=ellipse, label=\"a\"];\n\
        \x20 v1 [shape=box, label=\"surface: aaa, Baab\"];\n\
        \x20 v0 -- v1 [label=\"2: b\"];\n\
        \x20 v0 -- v1 [label=\"3: a\"];\n\
         }\n"
    );
}

#[test]
fn geom_text_golden() {
    let (stdout, _, code) = run(&["geom", "--rank", "2", "--words", "abAB"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "geometric\nfactor 1: abAB  (embeds)\n  a: orientable\n  b: orientable\n"
    );
    let (stdout, _, _) = run(&["geom", "--rank", "2", "--words", "AAABab"]);
    assert_eq!(
        stdout,
        "not geometric\nfactor 1: aaaBAb  (no consistent embedding)\n"
    );
}

#[test]
fn vgeom_text_golden() {
    let (stdout, _, code) =
        run(&["vgeom", "--rank", "2", "--words", "AABAbaBab", "--max-len", "8"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "virtually geometric\n\
         outcome: decomposition, uncertified (scan length 8)\n\
         geometric: no\n\
         piece v1: geometric\n\
         assembly: 1 obstruction\n\
        \x20 cyclic vertex a: attachments mix annulus and Möbius neighborhoods\n"
    );
}

#[test]
fn lift_text_golden() {
    let (stdout, _, code) = run(&[
        "lift", "--rank", "2", "--words", "AABAbaBab", "--subgroup", "aa,b,abA",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "index: 2\ngenerators: aa, b, abA\nAABAbaBab^2 @ e -> ABAcaBcACbCab\n"
    );
}

#[test]
fn verify_text_golden() {
    let (stdout, _, code) =
        run(&["verify", "--rank", "2", "--words", "b,baa,a", "--max-len", "3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "outcome: decomposition\nverification: pass\n");
}

#[test]
fn byte_identical_across_runs() {
    let args =
        ["jsj", "--rank", "5", "--words", "a,c,d,e,Ac,dcDC,dcDCabABE", "--max-len", "5"];
    let first = run(&args);
    for _ in 0..2 {
        assert_eq!(run(&args), first);
    }
    let jargs = [
        "jsj", "--rank", "2", "--words", "AABAbaBab", "--max-len", "8", "--format", "json",
    ];
    let jfirst = run(&jargs);
    assert_eq!(run(&jargs), jfirst);
    assert_eq!(jfirst.2, 0);
}

#[test]
fn file_input_equivalent_to_words() {
    let path = std::env::temp_dir().join("rjsj_golden_words.txt");
    std::fs::write(&path, "# pants multiword\nb\nbaa, a\n").unwrap();
    let from_file = run(&["jsj", "--rank", "2", "--file", path.to_str().unwrap(), "--max-len", "3"]);
    let from_words = run(&["jsj", "--rank", "2", "--words", "b,baa,a", "--max-len", "3"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(from_file, from_words);
}

#[test]
fn exit_codes() {
    // 2: free splitting, factors on stdout
    let (stdout, _, code) = run(&["jsj", "--rank", "2", "--words", "a,b"]);
    assert_eq!(code, 2);
    assert!(stdout.contains("free splitting"), "{stdout}");
    assert!(stdout.contains('\u{2217}'), "factors listed: {stdout}");

    // 3: parse errors, bad invocations, analysis preconditions
    assert_eq!(run(&["jsj", "--rank", "2", "--words", "xyz"]).2, 3);
    assert_eq!(run(&["jsj", "--rank", "1", "--words", "a"]).2, 3);
    assert_eq!(run(&["jsj", "--rank", "2"]).2, 3); // neither --words nor --file
    assert_eq!(run(&["jsj", "--rank", "2", "--words", "ab", "--no-such-flag"]).2, 3);
    assert_eq!(
        run(&["lift", "--rank", "2", "--words", "abAB", "--subgroup", "aa,b"]).2,
        3,
        "infinite index is an input error"
    );
    let (_, stderr, code) =
        run(&["jsj", "--rank", "2", "--words", "ab,ABab", "--certified"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("16385"), "certified gate names the bound: {stderr}");

    // 4: exhausted internal search caps
    let (_, stderr, code) = run_env(
        &["jsj", "--rank", "2", "--words", "b,baa,a", "--max-len", "3"],
        &[("JSJ_MAX_STABILIZER_LEN", "0")],
    );
    assert_eq!(code, 4);
    assert!(stderr.contains("stabilizer"), "{stderr}");

    // 0: negative analytic verdicts are still successes
    assert_eq!(run(&["geom", "--rank", "2", "--words", "AAABab"]).2, 0);

    // help is not an error
    assert_eq!(run(&["--help"]).2, 0);
}

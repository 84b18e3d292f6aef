use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn figures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../figures")
}

fn panto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_panto")).args(args).env_remove("PANTO_STEP_CAP").output().unwrap()
}

fn fig(name: &str) -> String {
    figures().join(name).to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_reproduces_every_figure() {
    for name in ["fig1", "fig5a", "fig5b", "fig5c", "fig5d", "fig5e", "fig6", "fig7", "fig8", "fig9", "fig10"] {
        let o = panto(&["run", &fig(&format!("{name}_before.pt")), &fig(&format!("{name}_edit.ps"))]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), fs::read_to_string(fig(&format!("{name}_after.pt"))).unwrap(), "{name}");
    }
}

#[test]
fn run_trace_matches_the_walkthrough_golden() {
    let args = ["run", "--trace", &fig("walkthrough_before.pt"), &fig("walkthrough_edit.ps")];
    let o = panto(&args);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out, fs::read_to_string(fig("walkthrough.trace")).unwrap());
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    let rules: Vec<String> = lines[..5]
        .iter()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["rule"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(rules, ["PropagateUp", "PropagateDown", "PropagateVarDown1", "InsertAppUp", "IdentityUp"]);
    assert_eq!(lines[5], "(app (lam x (-> Bool Int) (app (var x) (hole Bool))) (lam y Bool (lit 10)))");
    assert_eq!(format!("{}\n", lines[5]), fs::read_to_string(fig("walkthrough_after.pt")).unwrap());
    assert_eq!(panto(&args).stdout, o.stdout);
}

#[test]
fn seeded_scheduler_reaches_the_same_program() {
    let plain = panto(&["run", &fig("fig7_before.pt"), &fig("fig7_edit.ps")]);
    for seed in ["1", "2", "3"] {
        let o = panto(&["run", "--scheduler", &format!("seed={seed}"), &fig("fig7_before.pt"), &fig("fig7_edit.ps")]);
        assert!(o.status.success());
        assert_eq!(o.stdout, plain.stdout);
    }
    let o = panto(&["run", "--scheduler", "random", &fig("fig7_before.pt"), &fig("fig7_edit.ps")]);
    assert!(!o.status.success());
}

#[test]
fn run_reports_the_final_type_change() {
    let dir = tempfile::tempdir().unwrap();
    let program = dir.path().join("p.pt");
    let script = dir.path().join("e.ps");
    fs::write(&program, "(lam n Int (var n))").unwrap();
    fs::write(&script, "(insert () (lam x Bool _))").unwrap();
    let o = panto(&["run", program.to_str().unwrap(), script.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o),
        "(lam x Bool (lam n Int (var n)))\nfinalTypeChange (+ (-> Bool _) (congr -> (congr Int) (congr Int)))\n"
    );
}

#[test]
fn exit_codes_distinguish_rejected_edits_from_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let good = write("good.pt", "(lam x Int (hole Int))");
    let cases = [
        (good.clone(), write("a.ps", "(fill (0) (var x))"), 0),
        (good.clone(), write("b.ps", "(fill (0) (true))"), 1),
        (good.clone(), write("c.ps", "(fill (7) (var x))"), 1),
        (good.clone(), write("d.ps", "(fill (0) (var x)"), 2),
        (good.clone(), write("e.ps", "(frob (0))"), 2),
        (write("bad.pt", "(app (lit 1) (lit 2))"), write("f.ps", ""), 2),
        (write("junk.pt", "(lam x"), write("g.ps", ""), 2),
        (good.clone(), dir.path().join("missing.ps").to_str().unwrap().to_string(), 2),
    ];
    for (program, script, code) in cases {
        let o = panto(&["run", &program, &script]);
        assert_eq!(o.status.code(), Some(code), "{script}: {}", String::from_utf8_lossy(&o.stderr));
        if code != 0 {
            assert!(o.stdout.is_empty());
            assert!(String::from_utf8_lossy(&o.stderr).starts_with("panto: "));
        }
    }
}

#[test]
fn step_cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_panto"))
        .args(["run", &fig("walkthrough_before.pt"), &fig("walkthrough_edit.ps")])
        .env("PANTO_STEP_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step cap of 2 exceeded"));
}

#[test]
fn check_prints_the_type() {
    let o = panto(&["check", &fig("fig2_examples.pt")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "(-> (List Int) (-> (List Int) (List Int)))\n");
    let o = panto(&["check", &fig("fig9_after.pt")]);
    assert!(o.status.success());
    let o = panto(&["check", &fig("fig1_edit.ps")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.pt");
    let o = panto(&["run", &fig("fig6_before.pt"), &fig("fig6_edit.ps"), "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(out).unwrap(), fs::read_to_string(fig("fig6_after.pt")).unwrap());
}

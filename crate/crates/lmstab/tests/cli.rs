//! End-to-end tests of the command-line surface: flags, exit codes, file
//! formats, and byte-level determinism of reports.

use std::process::{Command, Output};

fn lmstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn certify_d1_is_stable_with_r1() {
    let out = lmstab(&["certify", "--n", "2", "--d", "1", "--l", "1", "--r", "2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("status Stable"));
    assert!(text.contains("certificate R1_CyclicD1"));
    assert!(text.contains("slope -1/2"));
}

#[test]
fn construct_is_deterministic() {
    let args = ["construct", "--n", "2", "--d", "2", "--l", "1", "--r", "2", "--seed", "7"];
    let a = lmstab(&args);
    let b = lmstab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout_of(&a), stdout_of(&b));
    assert!(stdout_of(&a).contains("rank 2"));
}

#[test]
fn timing_goes_to_stderr_not_stdout() {
    let out = lmstab(&["construct", "--n", "2", "--d", "1", "--l", "1", "--r", "2", "--seed", "3"]);
    assert!(!stdout_of(&out).contains("elapsed"));
    assert!(stderr_of(&out).contains("elapsed"));
}

#[test]
fn invalid_r_is_refused_naming_the_bound() {
    let out = lmstab(&["pullback", "--n", "2", "--dmap", "2", "--m", "1", "--r", "3", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(20));
    let err = stderr_of(&out);
    assert!(err.contains("C(N-1+m, m) = 2"), "stderr: {err}");
}

#[test]
fn sampling_error_exit_code() {
    let out = lmstab(&["certify", "--n", "2", "--d", "1", "--l", "1", "--r", "9", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(20));
    assert!(stderr_of(&out).contains("exceeds dim"));
}

#[test]
fn undetermined_exit_code() {
    let out = lmstab(&["certify", "--n", "2", "--d", "3", "--l", "2", "--r", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(10));
    assert!(stdout_of(&out).contains("status Undetermined"));
}

#[test]
fn not_semistable_with_both_rules() {
    let out = lmstab(&["certify", "--n", "2", "--d", "3", "--l", "1", "--r", "2", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("status NotSemistable"));
    assert!(text.contains("certificate R3_Destabilizer"));
    assert!(text.contains("certificate R2_OkonekRank2"));
    assert!(text.contains("mu_witness -1"));
    assert!(text.contains("mu_kernel -3/2"));
}

#[test]
fn kernel_bundle_commands() {
    let out = lmstab(&["kernel-bundle", "--n", "2", "--d", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("status Stable"));

    let out = lmstab(&["kernel-bundle", "--n", "2", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("rank 5"));
    assert!(text.contains("c1 -2"));
    assert!(text.contains("status Semistable"));
}

#[test]
fn pullback_command_semistable() {
    let out = lmstab(&["pullback", "--n", "2", "--dmap", "2", "--m", "1", "--r", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("certificate R4_Pullback"));
    assert!(text.contains("tag pullback dmap=2 m=1"));
}

#[test]
fn probe_line_records_splitting() {
    let out = lmstab(&[
        "probe-line", "--n", "2", "--d", "3", "--l", "1", "--r", "2", "--seed", "5", "--trials", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("generic [-1, -2]"), "report: {text}");
    assert!(text.contains("torsion-length 0"));
}

#[test]
fn instance_file_roundtrip_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("inst.txt");
    let inst = inst_path.to_str().unwrap();
    let out = lmstab(&[
        "construct", "--n", "2", "--d", "2", "--l", "1", "--r", "2", "--seed", "11",
        "--save-instance", inst,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let saved = std::fs::read_to_string(&inst_path).unwrap();
    assert!(saved.starts_with("lm-instance v1\n"));

    let out = lmstab(&["certify", "--instance", inst, "--reverify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("status Semistable"));
    assert!(text.contains("reverify"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn gens_file_flow() {
    let dir = tempfile::tempdir().unwrap();
    let gens_path = dir.path().join("g.txt");
    std::fs::write(&gens_path, "# explicit data\nf x0\ng x1\ng x2\n").unwrap();
    let out = lmstab(&[
        "construct", "--n", "2", "--d", "1", "--l", "1", "--r", "2",
        "--gens-file", gens_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("rank 2"));
    assert!(text.contains("c1 -1"));
}

#[test]
fn rational_field_supported() {
    let out = lmstab(&[
        "certify", "--field", "rational", "--n", "2", "--d", "1", "--l", "1", "--r", "2",
        "--seed", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("field rational"));
    assert!(text.contains("status Stable"));
}

#[test]
fn batch_summary_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("rows.txt");
    std::fs::write(
        &manifest,
        "# four stability regimes\n\
         lm n=2 d=1 l=1 r=2 seed=11\n\
         lm n=2 d=2 l=1 r=2 seed=11\n\
         lm n=2 d=3 l=1 r=2 seed=11\n\
         pullback n=2 dmap=2 m=1 r=2 seed=3\n",
    )
    .unwrap();
    let args = ["batch", "--manifest", manifest.to_str().unwrap(), "--jobs", "2"];
    let a = lmstab(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout_of(&a);
    assert!(text.contains("row-0 lm n=2 d=1 l=1 r=2 seed=11 status=Stable"));
    assert!(text.contains("row-1 lm n=2 d=2 l=1 r=2 seed=11 status=Semistable"));
    assert!(text.contains("row-2 lm n=2 d=3 l=1 r=2 seed=11 status=NotSemistable"));
    assert!(text.contains("row-3 pullback n=2 dmap=2 m=1 r=2 seed=3 status="));
    // identical configs give identical bytes, independent of the pool size
    let b = lmstab(&["batch", "--manifest", manifest.to_str().unwrap(), "--jobs", "1"]);
    assert_eq!(stdout_of(&a), stdout_of(&b));
}

#[test]
fn empty_manifest_is_ok() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("empty.txt");
    std::fs::write(&manifest, "# nothing\n").unwrap();
    let out = lmstab(&["batch", "--manifest", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("counts \n") || stdout_of(&out).contains("summary"));
}

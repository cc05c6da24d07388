mod common;

use common::{cases, crate_root, expected_stdout, run_binary};

#[test]
fn golden_outputs_match() {
    let mut failures = Vec::new();
    for case in cases() {
        let run = run_binary(&case.args, 2, &crate_root());
        if run.code != case.code {
            failures.push(format!("{}: exit {} (expected {})", case.name, run.code, case.code));
        }
        if run.stdout != expected_stdout(&case) {
            failures.push(format!("{}: stdout differs", case.name));
        }
        let err_lines = String::from_utf8_lossy(&run.stderr).lines().count();
        if case.code == 2 && err_lines != 1 {
            failures.push(format!("{}: {err_lines} diagnostic lines", case.name));
        }
        if case.code != 2 && err_lines != 0 {
            failures.push(format!("{}: unexpected stderr", case.name));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn in_process_run_agrees_with_binary() {
    for case in cases().into_iter().filter(|c| !c.args.iter().any(|a| a.starts_with("tests/"))) {
        let out = coreg::cli::run(std::iter::once("coreg".to_string()).chain(case.args.iter().cloned()));
        assert_eq!(out.code, case.code, "{}", case.name);
        assert_eq!(out.stdout.as_bytes(), expected_stdout(&case).as_slice(), "{}", case.name);
    }
}

#[test]
fn every_subcommand_has_help() {
    let subcommands = [
        "plus", "dset", "ddset", "mem", "lct0", "lct1", "p1-oracle", "acc-above", "accum", "dualcx", "toric-lct",
        "lemma-check",
    ];
    for sub in subcommands {
        let out = coreg::cli::run(["coreg", sub, "--help"]);
        assert_eq!(out.code, 0, "{sub}");
        let about = out.stdout.lines().next().unwrap_or_default();
        assert!(about.len() > 20, "{sub}: `{about}`");
    }
}

#[test]
fn unknown_flags_are_errors() {
    let out = coreg::cli::run(["coreg", "plus", "--I", "1/2", "--verbose"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_is_one_line_error() {
    let out = coreg::cli::run(["coreg", "dualcx", "/nonexistent/strata.txt"]);
    assert_eq!(out.code, 2);
    assert_eq!(out.stderr.lines().count(), 1);
}

#[test]
fn malformed_strata_rejected() {
    let dir = std::env::temp_dir().join(format!("coreg-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.strata");
    std::fs::write(&path, "dim 2\ndivisors 2\nstratum 1,2 1\nstratum 1,3 1\n").unwrap();
    let out = coreg::cli::run(["coreg".to_string(), "dualcx".to_string(), path.display().to_string()]);
    assert_eq!(out.code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

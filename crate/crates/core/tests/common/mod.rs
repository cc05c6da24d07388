#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: String,
    pub code: i32,
    pub args: Vec<String>,
}

pub fn crate_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    crate_root().join("tests").join("golden")
}

/// Rows of `tests/golden/cases.txt`: name, expected exit code, arguments.
pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut cols = l.split('\t');
            let name = cols.next().expect("name").to_string();
            let code = cols.next().expect("exit code").parse().expect("numeric exit code");
            let args = cols.next().expect("arguments").split_whitespace().map(String::from).collect();
            Case { name, code, args }
        })
        .collect()
}

pub fn expected_stdout(case: &Case) -> Vec<u8> {
    std::fs::read(golden_dir().join(format!("{}.out", case.name))).expect("golden output")
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

/// Runs the built binary from the crate root with a fixed rayon pool size.
pub fn run_binary(args: &[String], threads: usize, cwd: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_coreg"))
        .args(args)
        .current_dir(cwd)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn coreg");
    Run { code: out.status.code().unwrap_or(-1), stdout: out.stdout, stderr: out.stderr }
}

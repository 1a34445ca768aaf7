#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

pub const GOLDEN: &str = "[model]\nomega0 = 1.0\nmodes = [{ omega = 1.0, c = 0.1 }]\n";
pub const DECOUPLED: &str = "[model]\nomega0 = 1.0\nmodes = [{ omega = 2.0, c = 0.0 }]\n";
pub const OVER_COUPLED: &str = "[model]\nomega0 = 1.0\nmodes = [{ omega = 1.0, c = 1.5 }]\n";
pub const THREE_MODES: &str = "[model]\nomega0 = 1.3\nhbar = 0.5\nmodes = [\n  { omega = 0.7, c = 0.2 },\n  { omega = 2.1, c = -0.4 },\n  { omega = 1.0, c = 0.05 },\n]\n";

pub struct Workspace {
    dir: TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Self { dir: TempDir::new().unwrap() }
    }

    pub fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

pub fn run(command: &str, config: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coupled-modes"))
        .arg(command)
        .arg("--config")
        .arg(config)
        .args(extra)
        .output()
        .unwrap()
}

pub fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV body, split into fields.
pub fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

pub fn num(field: &str) -> f64 {
    field.parse().unwrap()
}

#![allow(dead_code)]

pub mod reference_tm;

use std::path::PathBuf;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn machine_text(name: &str) -> String {
    std::fs::read_to_string(crate_dir().join("machines").join(name)).unwrap()
}

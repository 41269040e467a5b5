#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use lottie_forge::model::{parse, Document};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Every `*.json` under `dir`, sorted by name, as `(name, text)`.
pub fn read_dir(dir: &str) -> Vec<(String, String)> {
    let mut files: Vec<PathBuf> = fs::read_dir(fixtures().join(dir))
        .unwrap_or_else(|e| panic!("fixtures/{dir}: {e}"))
        .map(|entry| entry.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&p).unwrap())
        })
        .collect()
}

pub struct Fixture {
    pub name: String,
    pub text: String,
    pub doc: Document,
}

pub fn corpus() -> Vec<Fixture> {
    read_dir("corpus")
        .into_iter()
        .map(|(name, text)| {
            let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            Fixture { name, text, doc }
        })
        .collect()
}

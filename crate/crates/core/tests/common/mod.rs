#![allow(dead_code)]

use rotsys::{parse_rotation, PartialRotation, RotationFile, RotationSystem};

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn full(name: &str) -> RotationSystem {
    match parse_rotation(&fixture_text(name)).unwrap() {
        RotationFile::Full(rs) => rs,
        RotationFile::Partial(_) => panic!("{name} is partial"),
    }
}

pub fn partial(name: &str) -> PartialRotation {
    match parse_rotation(&fixture_text(name)).unwrap() {
        RotationFile::Partial(p) => p,
        RotationFile::Full(_) => panic!("{name} is complete"),
    }
}

// Every runnable example, driven through its `run` entry point.

#[path = "../examples/hadamard_emergence.rs"]
mod hadamard_emergence;

#[path = "../examples/law_suite.rs"]
mod law_suite;

#[path = "../examples/amalgam_normalize.rs"]
mod amalgam_normalize;

#[path = "../examples/simon.rs"]
mod simon;

#[path = "../examples/grover.rs"]
mod grover;

#[path = "../examples/measurement.rs"]
mod measurement;

#[path = "../examples/controlled_s.rs"]
mod controlled_s;

#[path = "../examples/source_files.rs"]
mod source_files;

#[test]
fn hadamard_emergence_runs() {
    hadamard_emergence::run().unwrap();
}

#[test]
fn law_suite_runs() {
    law_suite::run().unwrap();
}

#[test]
fn amalgam_normalize_runs() {
    amalgam_normalize::run().unwrap();
}

#[test]
fn simon_runs() {
    simon::run().unwrap();
}

#[test]
fn grover_runs() {
    grover::run().unwrap();
}

#[test]
fn measurement_runs() {
    measurement::run().unwrap();
}

#[test]
fn controlled_s_runs() {
    controlled_s::run().unwrap();
}

#[test]
fn source_files_runs() {
    source_files::run().unwrap();
}

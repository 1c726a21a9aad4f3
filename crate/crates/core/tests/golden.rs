use std::fs;
use std::path::Path;

use qpi::corpus;
use qpi::linalg::CMatrix;
use qpi::qpi::eval_qpi;
use qpi::unitary::Phi;
use serde::Deserialize;

#[derive(Deserialize)]
struct Golden {
    name: String,
    domain: String,
    matrix: CMatrix,
}

#[test]
fn corpus_gates_match_golden_matrices() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let g: Golden = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let p = corpus::lookup(&g.name).unwrap_or_else(|| panic!("{} not in corpus", g.name));
        assert_eq!(p.domain.to_string(), g.domain, "{}", g.name);
        let d = p.term.as_pure().unwrap();
        let m = eval_qpi(Phi::QUANTUM, d, &p.domain).unwrap();
        let c = m.approx_eq(&g.matrix, 1e-12);
        assert!(c.equal, "{}: off by {}", g.name, c.max_diff);
        seen += 1;
    }
    assert_eq!(seen, 9);
}

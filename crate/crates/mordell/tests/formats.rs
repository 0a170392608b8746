use std::path::{Path, PathBuf};

use mordell::formats::{
    construct_from_input, lattice_from_file, lattice_to_file, matrix_file, read_json, ConstructInput, LatticeFile,
};
use mordell_core::exactmath::{q, QMatrix};
use mordell_core::orbits::all_closed_orbits;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn file(json: &str) -> LatticeFile {
    serde_json::from_str(json).unwrap()
}

#[test]
fn written_lattice_reads_back_with_its_origin() {
    let desc: ConstructInput = read_json(&data("qsqrt2_twice.json")).unwrap();
    let l = construct_from_input(&desc).unwrap();
    let text = serde_json::to_string(&lattice_to_file(&l)).unwrap();
    let back = lattice_from_file(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.approx(), l.approx());
    assert!(back.is_unimodular());
    // the origin survives, so the symbolic classification still runs
    let closed = all_closed_orbits(&back).unwrap();
    assert_eq!(closed.len(), all_closed_orbits(&l).unwrap().len());
}

#[test]
fn rational_strings_are_exact() {
    let l = lattice_from_file(&file(r#"{ "matrix": [["3/4", "-2"], ["0", " 1/3 "]] }"#)).unwrap();
    assert!(!l.is_numeric());
    assert_eq!(l.covolume().describe(), "1/4");
    let m = QMatrix::from_rows(vec![vec![q(3, 4), q(-2, 1)], vec![q(0, 1), q(1, 3)]]);
    let again = lattice_from_file(&matrix_file(&m)).unwrap();
    assert_eq!(again.approx(), l.approx());
}

#[test]
fn json_numbers_mark_the_lattice_numeric() {
    let l = lattice_from_file(&file(r#"{ "matrix": [[0.5, "0"], [0, 2]] }"#)).unwrap();
    assert!(l.is_numeric());
    assert!(l.is_unimodular());
    // 0.1 is kept as its binary value, not as 1/10
    let l = lattice_from_file(&file(r#"{ "matrix": [[0.1, 0], [0, 10]] }"#)).unwrap();
    assert!(!l.is_unimodular());
}

#[test]
fn field_rows_with_scale() {
    // the √2 lattice written by hand: rows per embedding, scale 8^(-1/4)
    let json = r#"{ "rows": [
        { "field": { "minpoly": ["-2", "0", "1"], "embedding": 0 },
          "scale": { "base": "1/8", "index": 4 }, "entries": [["1"], ["0", "1"]] },
        { "field": { "minpoly": ["-2", "0", "1"], "embedding": 1 },
          "scale": { "base": "1/8", "index": 4 }, "entries": [["1"], ["0", "1"]] }
    ] }"#;
    let l = lattice_from_file(&file(json)).unwrap();
    assert!(l.is_unimodular());
    let c = 8f64.powf(-0.25);
    assert!((l.approx()[0][1] + 2f64.sqrt() * c).abs() < 1e-12);
    assert!((l.approx()[1][1] - 2f64.sqrt() * c).abs() < 1e-12);
}

#[test]
fn malformed_files_are_rejected() {
    let bad = [
        r#"{}"#,
        r#"{ "matrix": [["1", "0"]] }"#,
        r#"{ "matrix": [] }"#,
        r#"{ "matrix": [["1", "x"], ["0", "1"]] }"#,
        r#"{ "matrix": [[true, "0"], ["0", "1"]] }"#,
        r#"{ "matrix": [["1"]], "rows": [{ "entries": [["1"]] }] }"#,
        r#"{ "rows": [{ "field": { "minpoly": ["-2", "0", "1"], "embedding": 2 }, "entries": [["1"]] }] }"#,
        r#"{ "rows": [{ "entries": [["1", "2"]] }] }"#,
        r#"{ "rows": [{ "entries": [["1"], ["0"]] }] }"#,
        r#"{ "matrix": [["1", "2"], ["2", "4"]] }"#,
    ];
    for json in bad {
        assert!(lattice_from_file(&file(json)).is_err(), "{json}");
    }
}

#[test]
fn construct_checks_element_shapes() {
    let desc = |basis: &str| -> ConstructInput {
        serde_json::from_str(&format!(r#"{{ "algebra": {{ "components": [["-2", "0", "1"]] }}, "basis": {basis} }}"#))
            .unwrap()
    };
    assert!(construct_from_input(&desc(r#"[[["1"]], [["0", "1"]]]"#)).is_ok());
    assert!(construct_from_input(&desc(r#"[[["1", "0", "0"]], [["0", "1"]]]"#)).is_err());
    assert!(construct_from_input(&desc(r#"[[["1"], ["1"]], [["0", "1"]]]"#)).is_err());
    assert!(construct_from_input(&desc(r#"[[["1"]]]"#)).is_err());
}

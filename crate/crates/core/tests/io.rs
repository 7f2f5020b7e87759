use std::path::PathBuf;

use paperfold::io::{self, Document, IoError};
use paperfold::{analysis, presets};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn data_files_load() {
    for name in ["sq2.json", "torus.json"] {
        let Document::Scheme(f) = io::read_document(&data(name)).unwrap() else {
            panic!("{name} should be a scheme");
        };
        assert!(f.to_scheme().unwrap().is_full());
    }
    for name in ["canon1.json", "canon2.json", "singular1.json", "canon1_two_anchors.json"] {
        let Document::Pattern(f) = io::read_document(&data(name)).unwrap() else {
            panic!("{name} should be a pattern");
        };
        assert!(f.to_infinite_scheme().unwrap().truncate(3).unwrap().is_plain());
    }
    let Document::Scheme(f) = io::read_document(&data("not_full.json")).unwrap() else {
        panic!("not_full.json should be a scheme");
    };
    assert!(f.to_scheme().is_err());
    assert!(f.to_partial_scheme().is_ok());
}

#[test]
fn files_match_presets() {
    let sq2 = io::parse_scheme(&std::fs::read_to_string(data("sq2.json")).unwrap()).unwrap();
    assert_eq!(sq2.pairings(), presets::sq2().pairings());
    let c1 = io::parse_pattern(&std::fs::read_to_string(data("canon1.json")).unwrap()).unwrap();
    for n in 1..=4 {
        let (a, b) = (c1.truncate(n).unwrap(), presets::canon1().truncate(n).unwrap());
        assert_eq!(analysis::total_abs_curvature(&a), analysis::total_abs_curvature(&b));
    }
}

#[test]
fn round_trips() {
    for s in [presets::sq2(), presets::torus(), presets::singular1().truncate(3).unwrap()] {
        let back = io::parse_scheme(&io::scheme_to_json(&s)).unwrap();
        assert_eq!(back.pairings(), s.pairings());
        assert_eq!(back.polygon(), s.polygon());
    }
    for inf in [presets::canon1(), presets::canon1_two_anchors()] {
        let back = io::parse_pattern(&io::pattern_to_json(&inf)).unwrap();
        assert_eq!(back.patterns(), inf.patterns());
        assert_eq!(back.truncate(2).unwrap().pairings(), inf.truncate(2).unwrap().pairings());
    }
}

#[test]
fn bad_input_is_reported() {
    assert!(matches!(io::parse_document("{"), Err(IoError::Parse(_))));
    let future = r#"{"version": 9, "polygon": [[0,0],[1,0],[0,1]], "pairings": []}"#;
    assert!(matches!(io::parse_scheme(future), Err(IoError::UnsupportedVersion(9))));
    let extra = r#"{"polygon": [[0,0],[1,0],[0,1]], "pairings": [], "colour": 1}"#;
    assert!(io::parse_document(extra).is_err());
    let bowtie = r#"{"polygon": [[0,0],[1,1],[1,0],[0,1]], "pairings": []}"#;
    assert!(matches!(io::parse_scheme(bowtie), Err(IoError::Geometry(_))));
    assert!(matches!(io::read_document(&data("missing.json")), Err(IoError::Read { .. })));
}

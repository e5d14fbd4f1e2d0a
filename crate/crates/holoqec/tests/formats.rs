//! Golden-file and format-level integration checks for the text formats.

use holoqec::code::{build_code, export_code, import_code, CodeBundle};
use holoqec::pauli::{SeedCode, SeedKind};
use holoqec::tiling::{build_tiling, export_tiling, import_tiling};

#[test]
fn heptagon_r1_export_matches_golden_transcription() {
    let bundle = CodeBundle::build(SeedKind::Steane, 1).unwrap();
    let mut text = Vec::new();
    export_code(&bundle.code, &mut text).unwrap();
    let golden = include_str!("golden/steane_r1.txt");
    assert_eq!(String::from_utf8(text).unwrap(), golden);
}

#[test]
fn code_roundtrip_through_files_preserves_decoding_inputs() {
    let bundle = CodeBundle::build(SeedKind::FiveQubit, 2).unwrap();
    let mut text = Vec::new();
    export_code(&bundle.code, &mut text).unwrap();
    let back = import_code(&text[..]).unwrap();
    assert_eq!(back.generators, bundle.code.generators);
    assert_eq!(back.logicals, bundle.code.logicals);
    assert_eq!(back.seed_kind, bundle.code.seed_kind);
    assert_eq!(back.radius, bundle.code.radius);
    // The reconstructed tiling regenerates the same code.
    let tiling = build_tiling(back.seed_kind.n_sides(), back.radius).unwrap();
    let rebuilt = build_code(&tiling, &SeedCode::of(back.seed_kind)).unwrap();
    assert_eq!(rebuilt.generators, back.generators);
}

#[test]
fn tiling_export_golden_shape() {
    let tiling = build_tiling(7, 2).unwrap();
    let mut text = Vec::new();
    export_tiling(&tiling, &mut text).unwrap();
    let text = String::from_utf8(text).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tiling n=7 R=2 tiles=8");
    // Central tile: all legs consumed by the seven children.
    assert_eq!(
        lines.next().unwrap(),
        "0 0 0 t1:0 t2:0 t3:0 t4:0 t5:0 t6:0 t7:0"
    );
    // First child: input from the centre, six boundary legs.
    assert_eq!(lines.next().unwrap(), "1 1 1 t0:0 B0 B1 B2 B3 B4 B5");
    let back = import_tiling(text.as_bytes()).unwrap();
    assert_eq!(back.boundary.len(), 42);
}

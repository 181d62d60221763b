use tropsing::io::{load_support, load_supports, IoError};
use tropsing::lattice::SupportSet;
use tropsing::ultratrop::lift_with_unit;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn fixtures_are_the_unit_lifts() {
    let a1 = load_support(&fixture("unit_lift_a1.json")).unwrap();
    let a2 = load_support(&fixture("unit_lift_a2.json")).unwrap();
    assert_eq!(a1, lift_with_unit(&SupportSet::from_ints(&[0, 2]).unwrap(), 0));
    assert_eq!(a2, lift_with_unit(&SupportSet::from_ints(&[0, 3]).unwrap(), 1));
}

#[test]
fn duplicate_point_file_is_rejected() {
    let err = load_supports(&fixture("duplicate.json")).unwrap_err();
    assert!(matches!(err, IoError::DuplicatePoint { ref point, .. } if point == &vec![0, 0, 0]), "{err}");
}

#[test]
fn missing_file_falls_back_to_inline_parsing() {
    assert!(matches!(load_supports("no/such/file.json"), Err(IoError::SchemaError { .. })));
}

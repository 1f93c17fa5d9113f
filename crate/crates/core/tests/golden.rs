use std::path::PathBuf;

use r2c::experiments::{run_scenario, write_csv, Scenario};

// Set UPDATE_GOLDEN=1 to rewrite the checked-in files.
fn check(sc: &Scenario) {
    let rows = run_scenario(sc, 0).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let got = String::from_utf8(buf).unwrap();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{}.csv", sc.name));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(got, want, "{} drifted", path.display());
}

#[test]
fn fig8_is_stable() {
    check(&Scenario::builtin("fig8").unwrap());
}

#[test]
fn small_round_is_stable() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/tiny-r2c.toml");
    check(&Scenario::load(path.to_str().unwrap()).unwrap());
}

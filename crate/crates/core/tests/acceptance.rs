//! Every acceptance criterion at its stated tolerance, run in sequence so
//! runtimes are measured without contention. One line per criterion.

use r2c::selftest::{run_criterion, CRITERIA};

#[test]
fn acceptance_matrix() {
    let mut failed = Vec::new();
    for (id, ..) in CRITERIA {
        let r = run_criterion(id, 0);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

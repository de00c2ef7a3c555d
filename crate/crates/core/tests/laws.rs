use freer_testkit::laws::{
    all_freer_laws, backend_laws, LawReport, INPUTS_PER_PROGRAM, PROGRAMS_PER_LAW,
};
use freer_testkit::rng;

fn assert_all(reports: &[LawReport]) {
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn freer_families_satisfy_their_laws() {
    let reports = all_freer_laws(&mut rng(1));
    assert_all(&reports);
    assert!(reports.len() >= 12, "only {} laws checked", reports.len());
    for r in &reports {
        assert!(
            r.samples >= PROGRAMS_PER_LAW * INPUTS_PER_PROGRAM / 2,
            "{} had {} samples",
            r.law,
            r.samples
        );
    }
}

#[test]
fn laws_hold_across_seeds() {
    for seed in 2..6 {
        assert_all(&all_freer_laws(&mut rng(seed)));
    }
}

#[test]
fn backends_satisfy_their_laws() {
    for seed in 0..3 {
        assert_all(&backend_laws(&mut rng(seed)));
    }
}

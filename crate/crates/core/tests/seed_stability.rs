//! Published expectations of fast-tier scenarios must not depend on the
//! seed: every one is re-run under seeds 1 to 5.

use arr_core::scenarios::{ordered_parallel, run, Outcome};
use arr_core::{registry, Overrides, Tier};

fn threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[test]
fn fast_scenarios_pass_under_five_seeds() {
    let runs: Vec<_> = registry()
        .iter()
        .filter(|s| s.tier == Tier::Fast && !s.disabled)
        .flat_map(|s| (1..=5u64).map(move |seed| (s, seed)))
        .collect();
    assert!(runs.len() >= 100);
    let reports = ordered_parallel(
        &runs,
        threads(),
        |(sc, seed)| {
            run(
                sc,
                &Overrides {
                    seed: Some(*seed),
                    ..Default::default()
                },
            )
            .unwrap()
        },
        |_, _| {},
    );
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.outcome() != Outcome::Pass)
        .map(|r| format!("{:?}: {}\n{r}", r.outcome(), r.reproduction()))
        .collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn other_characteristics_agree_on_pencils() {
    for (name, p) in [
        ("pencil-ci-3-1", 101),
        ("star-config-3-2", 7919),
        ("plane-pencil-4", 0),
    ] {
        let o = Overrides {
            characteristic: Some(p),
            ..Default::default()
        };
        let r = arr_core::run_scenario(name, &o).unwrap();
        assert_eq!(r.outcome(), Outcome::Pass, "{r}");
    }
}

use std::time::Duration;

use splitauth_core::{
    format_design, parse_design, search, verify_splitting_design, DesignParams, Error, Restarts,
    SearchConfig, SearchStatus,
};

fn params(t: u64, v: u64, c: u64, u: u64) -> DesignParams {
    DesignParams::new(t, v, c, u, 1).unwrap()
}

#[test]
fn finds_nine_point_splitting_bibd() {
    let out = search(&params(2, 9, 2, 2), &SearchConfig::default()).unwrap();
    assert_eq!(out.status, SearchStatus::Found);
    let d = out.design.unwrap();
    assert_eq!(d.b(), 9);
    assert!(verify_splitting_design(&d, 2, 1).unwrap().passed);
    assert_eq!(d.canonicalize(), d);
}

#[test]
fn finds_ten_point_three_design() {
    let out = search(&params(3, 10, 2, 3), &SearchConfig::default()).unwrap();
    assert_eq!(out.status, SearchStatus::Found, "{:?}", out.stats);
    let d = out.design.unwrap();
    assert_eq!(d.b(), 15);
    assert!(verify_splitting_design(&d, 3, 1).unwrap().passed);
    // the emitted file parses back into the same design
    let back = parse_design(&format_design(&d, 3, 1)).unwrap();
    assert_eq!(back.design, d);
}

#[test]
fn infeasible_parameters_short_circuit() {
    let out = search(&params(2, 10, 2, 2), &SearchConfig::default()).unwrap();
    assert_eq!(out.status, SearchStatus::PrunedInfeasible);
    assert!(out.design.is_none());
    assert_eq!(out.stats.nodes, 0);
    let declared = params(2, 9, 2, 2).with_blocks(8).unwrap();
    assert_eq!(
        search(&declared, &SearchConfig::default()).unwrap().status,
        SearchStatus::PrunedInfeasible
    );
    let lambda2 = DesignParams::new(2, 9, 2, 2, 2).unwrap();
    assert!(matches!(
        search(&lambda2, &SearchConfig::default()),
        Err(Error::Unsupported(_))
    ));
}

// Admissible (b = 3, r = 2) but no such design exists; an unrestricted
// exact-cover enumeration over all 1260 blocks agrees.
#[test]
fn nonexistent_design_is_exhausted() {
    for symmetry_breaking in [true, false] {
        let cfg = SearchConfig {
            symmetry_breaking,
            ..Default::default()
        };
        let out = search(&params(2, 9, 2, 3), &cfg).unwrap();
        assert_eq!(out.status, SearchStatus::Exhausted);
        assert_eq!(out.blocks, Some(3));
        assert!(out.design.is_none());
    }
}

#[test]
fn same_config_same_outcome() {
    let cfg = SearchConfig {
        seed: Some(7),
        ..Default::default()
    };
    let a = search(&params(3, 10, 2, 3), &cfg).unwrap();
    let b = search(&params(3, 10, 2, 3), &cfg).unwrap();
    assert_eq!(a.status, SearchStatus::Found);
    assert_eq!(a.design, b.design);
    assert_eq!(
        (a.stats.nodes, a.stats.backtracks),
        (b.stats.nodes, b.stats.backtracks)
    );
}

#[test]
fn restarts_and_limits() {
    let cfg = SearchConfig {
        seed: Some(3),
        restarts: Restarts::Geometric {
            initial_nodes: 50,
            factor: 2,
        },
        ..Default::default()
    };
    let out = search(&params(3, 10, 2, 3), &cfg).unwrap();
    assert_eq!(out.status, SearchStatus::Found);
    assert!(
        verify_splitting_design(out.design.as_ref().unwrap(), 3, 1)
            .unwrap()
            .passed
    );

    let tiny = SearchConfig {
        node_limit: 5,
        ..Default::default()
    };
    let out = search(&params(3, 10, 2, 3), &tiny).unwrap();
    assert_eq!(out.status, SearchStatus::Timeout);
    assert!(out.design.is_none());

    let short = SearchConfig {
        time_limit: Duration::from_nanos(1),
        ..Default::default()
    };
    assert!(search(&params(2, 9, 2, 2), &short).is_ok());
}

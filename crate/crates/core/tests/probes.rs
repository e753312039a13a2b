use seqnorm::norm::{Lp, Sup, L1};
use seqnorm::probes::{
    boyd_estimate, c0_failure_witness, inequality_suite, strict_convexity_probe, two_r_probe,
    ScenarioKind, SuiteConfig, TwoRSettings, Verdict, SUITES,
};
use seqnorm::{parse_space, NormDescriptor};

#[test]
fn boyd_index_of_lp_is_exact() {
    for p in [1.0, 1.5, 2.0, 3.0] {
        let est = boyd_estimate(&Lp::new(p).unwrap(), 16, 8, 50, 0).unwrap();
        for row in &est.rows {
            // rows are upward-rounded, so never below p
            assert!(
                row.ratio >= p && row.ratio - p <= 1e-12 * p,
                "p={p} m={}: {}",
                row.m,
                row.ratio
            );
        }
        assert_eq!(est.p_estimate, p);
    }
    assert_eq!(boyd_estimate(&L1, 16, 8, 50, 0).unwrap().p_estimate, 1.0);
    assert_eq!(
        boyd_estimate(&Sup, 16, 8, 50, 0).unwrap().p_estimate,
        f64::INFINITY
    );
}

#[test]
fn sup_fails_two_r_on_the_witness() {
    let report = two_r_probe(&Sup, &c0_failure_witness(), &TwoRSettings::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Fail);
    assert_eq!(report.details["defect"], 0.0);
    assert_eq!(report.details["diameter"], 1.0);
}

#[test]
fn l2_passes_two_r_on_random_scenarios() {
    let cfg = SuiteConfig {
        samples: 1000,
        scenario: Some(ScenarioKind::RandomCauchy),
        ..SuiteConfig::default()
    };
    let l2 = NormDescriptor::lp(2.0).unwrap();
    let report = inequality_suite("two-r", &l2, &cfg).unwrap();
    assert_eq!(report.verdict, Verdict::Pass, "{}", report.to_json());
    let unit = inequality_suite(
        "two-r",
        &l2,
        &SuiteConfig {
            scenario: Some(ScenarioKind::RandomUnit),
            ..cfg
        },
    )
    .unwrap();
    assert_ne!(unit.verdict, Verdict::Fail, "{}", unit.to_json());
}

#[test]
fn strict_convexity_separates_sup_from_l2() {
    assert_eq!(
        strict_convexity_probe(&Sup, 10_000, 0).unwrap().verdict,
        Verdict::Fail
    );
    for text in ["lp(2)", "dayAug(lp(2))"] {
        let report = strict_convexity_probe(&parse_space(text).unwrap(), 10_000, 0).unwrap();
        assert_eq!(
            report.verdict,
            Verdict::Pass,
            "{text}: {}",
            report.to_json()
        );
    }
}

#[test]
fn suites_pass_where_the_inequalities_hold() {
    let cfg = SuiteConfig {
        samples: 300,
        ..SuiteConfig::default()
    };
    let runs = [
        ("norm-axioms", "sym2R(lp(2))"),
        ("hat-subadditive", "lp(2)"),
        ("hat-bounded", "lp(1.5)"),
        ("hat-bounded", "lp(4)"),
        ("hat-lipschitz", "lp(2)"),
        ("hat-lower", "day"),
        ("hat-lower", "lp(3)"),
        ("hat-tail-lower", "lp(2)"),
        ("davis-sandwich", "davis(sup, l1, 2)"),
        ("shifted-bounds", "day"),
        ("shifted-bounds", "scBase(lp(2))"),
    ];
    for (suite, space) in runs {
        let report = inequality_suite(suite, &parse_space(space).unwrap(), &cfg).unwrap();
        assert_eq!(
            report.verdict,
            Verdict::Pass,
            "{suite} on {space}: {}",
            report.to_json()
        );
    }
    assert_eq!(SUITES.len(), 10);
}

#[test]
fn reports_are_deterministic() {
    let cfg = SuiteConfig {
        samples: 200,
        seed: 9,
        ..SuiteConfig::default()
    };
    let space = parse_space("dayAug(lp(3))").unwrap();
    let a = inequality_suite("norm-axioms", &space, &cfg)
        .unwrap()
        .to_json();
    let b = inequality_suite("norm-axioms", &space, &cfg)
        .unwrap()
        .to_json();
    assert_eq!(a, b);
}

#[test]
fn wrong_space_is_an_error() {
    let cfg = SuiteConfig::default();
    assert!(inequality_suite("hat-bounded", &NormDescriptor::Day, &cfg).is_err());
    assert!(inequality_suite("davis-sandwich", &NormDescriptor::Day, &cfg).is_err());
    assert!(inequality_suite("no-such-suite", &NormDescriptor::Day, &cfg).is_err());
}

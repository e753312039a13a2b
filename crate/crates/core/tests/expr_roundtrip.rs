use proptest::prelude::*;
use seqnorm::{parse_space, NormDescriptor};

fn descriptor() -> impl Strategy<Value = NormDescriptor> {
    let leaf = prop_oneof![
        (1.0f64..20.0).prop_map(|p| NormDescriptor::lp(p).unwrap()),
        Just(NormDescriptor::lp(2.0).unwrap()),
        Just(NormDescriptor::Sup),
        Just(NormDescriptor::L1),
        Just(NormDescriptor::Day),
        Just(NormDescriptor::Lorentz),
        Just(NormDescriptor::Tsirelson),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(NormDescriptor::day_aug),
            inner.clone().prop_map(NormDescriptor::sc_base),
            inner.clone().prop_map(NormDescriptor::sym2r),
            (inner.clone(), inner.clone(), 1e-3f64..1e3)
                .prop_map(|(e, f, m)| NormDescriptor::davis(e, f, m).unwrap()),
            (inner.clone(), inner.clone(), inner).prop_map(|(e, f, x)| NormDescriptor::y(e, f, x)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(d in descriptor()) {
        let text = d.to_string();
        prop_assert_eq!(parse_space(&text).unwrap(), d.clone());
        let spaced = text.replace(',', " , ").replace('(', " ( ");
        prop_assert_eq!(parse_space(&spaced).unwrap(), d);
    }

    #[test]
    fn json_wire_format_round_trips(d in descriptor()) {
        let json = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(serde_json::from_str::<NormDescriptor>(&json).unwrap(), d);
    }
}

#[test]
fn parameter_ranges_are_enforced() {
    for bad in [
        "lp(0.5)",
        "lp(0)",
        "lp(-2)",
        "davis(sup, l1, 0)",
        "davis(sup, l1, -1)",
        "lp(inf)",
        "lp(NaN)",
    ] {
        assert!(parse_space(bad).is_err(), "{bad}");
    }
    for bad in [
        "",
        "lp",
        "lp()",
        "dayAug()",
        "dayAug(sup",
        "Y(sup, l1, day)",
        "sym2r(lp(2))",
        "sup sup",
        "davis(sup, l1, 2,)",
    ] {
        assert!(parse_space(bad).is_err(), "{bad}");
    }
}

use proptest::prelude::*;
use tessera_core::instances::terrain_10x7;
use tessera_core::{CellIndex, Error, Instance, Tessellation};

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..8, 1usize..8)
        .prop_filter("two cells", |(m, n)| m * n >= 2)
        .prop_flat_map(|(m, n)| {
            let weights = prop::collection::vec(
                prop_oneof![
                    Just(0.0),
                    Just(1.0),
                    0.0f64..1e6,
                    (1u32..1000).prop_map(f64::from)
                ],
                m * n,
            );
            let cell = move || (1..=m, 1..=n).prop_map(|(x, y)| CellIndex::new(x, y));
            (weights, cell(), cell())
                .prop_filter("distinct", |(_, s, g)| s != g)
                .prop_map(move |(w, s, g)| {
                    Instance::new(Tessellation::new(m, n, w).unwrap(), s, g).unwrap()
                })
        })
}

proptest! {
    #[test]
    fn wrp_round_trip(inst in instance()) {
        prop_assert_eq!(Instance::parse(&inst.to_wrp()).unwrap(), inst.clone());
        prop_assert_eq!(Instance::parse(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn dropping_a_weight_is_rejected(inst in instance()) {
        let text = inst.to_wrp();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let row = &mut lines[1];
        let cut = row.rfind(' ').unwrap_or(0);
        row.truncate(cut);
        prop_assert!(Instance::parse(&lines.join("\n")).is_err());
    }
}

#[test]
fn malformed_files_are_rejected() {
    let good = "2 1\n1 2\ns 1 1 g 2 1\n";
    assert!(Instance::parse(good).is_ok());
    for bad in [
        "",
        "2\n1 2\ns 1 1 g 2 1\n",
        "2 1\n1 x\ns 1 1 g 2 1\n",
        "2 1\n1 -2\ns 1 1 g 2 1\n",
        "2 1\n1 NaN\ns 1 1 g 2 1\n",
        "2 1\n1 inf\ns 1 1 g 2 1\n",
        "2 1\n1 2 3\ns 1 1 g 2 1\n",
        "2 1\n1 2\ns 1 1 g 3 1\n",
        "2 1\n1 2\ns 1 1 g 1 1\n",
        "2 1\n1 2\ns 0 1 g 2 1\n",
        "2 1\n1 2\ng 1 1 s 2 1\n",
        "2 1\n1 2\ns 1 1 g 2 1\nextra\n",
        "0 1\n\ns 1 1 g 1 1\n",
    ] {
        assert!(Instance::parse(bad).is_err(), "accepted {bad:?}");
    }
}

#[test]
fn errors_carry_line_numbers() {
    match Instance::parse("2 2\n1 1\n1 oops\ns 1 1 g 2 2\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn terrain_survives_round_trip() {
    let t = terrain_10x7();
    let text = t.to_wrp();
    assert!(text.starts_with("10 7\n1 100 100 1 1 1 1 100 1 1\n"));
    assert_eq!(Instance::parse(&text).unwrap(), t);
}

use proptest::prelude::*;
use ringwalk::report::Report;

fn field() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-z0-9/\\\\\t\n\r .=-]{0,12}").unwrap()
}

fn report() -> impl Strategy<Value = Report> {
    (
        field(),
        prop::collection::vec((field(), field()), 0..4),
        prop::collection::vec(field(), 0..3),
        prop::collection::vec((field(), 0usize..4, 0usize..4), 0..3),
        prop::collection::vec((field(), any::<bool>(), field()), 0..4),
    )
        .prop_flat_map(|(cmd, meta, notices, shapes, checks)| {
            let tables: Vec<_> = shapes
                .into_iter()
                .map(|(name, cols, rows)| {
                    (Just(name), prop::collection::vec(field(), cols), prop::collection::vec(prop::collection::vec(field(), cols), rows))
                })
                .collect();
            (Just(cmd), Just(meta), Just(notices), tables, Just(checks))
        })
        .prop_map(|(cmd, meta, notices, tables, checks)| {
            let mut r = Report::new(&cmd);
            for (k, v) in meta {
                r.meta(&k, v);
            }
            for n in notices {
                r.notice(n);
            }
            for (name, cols, rows) in tables {
                let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
                r.table(&name, &cols).rows = rows;
            }
            for (n, p, d) in checks {
                r.check(&n, p, d);
            }
            r
        })
}

proptest! {
    #[test]
    fn text_round_trips(r in report()) {
        let text = r.to_text();
        prop_assert_eq!(text.lines().count(), 3 + r.meta.len() + r.notices.len() + r.tables.iter().map(|t| 1 + t.rows.len()).sum::<usize>() + r.checks.len());
        prop_assert_eq!(Report::from_text(&text).unwrap(), r);
    }

    #[test]
    fn json_round_trips(r in report()) {
        prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}

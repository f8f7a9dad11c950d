//! Every checked-in fuzz seed is a valid input for its target.

use std::fs;
use std::path::PathBuf;

use ncchrom::{parse_graph, LabeledDiagram, NCExpr, SetPartition};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let s = fs::read_to_string(&p).unwrap();
            (p, s)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn seeds_parse() {
    for (p, s) in seeds("set_partition") {
        s.parse::<SetPartition>().unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("graph_spec") {
        parse_graph(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("diagram_text") {
        s.parse::<LabeledDiagram>().unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("diagram_json") {
        LabeledDiagram::from_json(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
    for (p, s) in seeds("ncexpr_json") {
        NCExpr::from_json(&s).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

mod mutations {
    use super::*;
    use proptest::prelude::*;

    fn mutated(target: &'static str) -> impl Strategy<Value = String> {
        let base: Vec<String> = seeds(target).into_iter().map(|(_, s)| s).collect();
        (proptest::sample::select(base), any::<usize>(), "[ -~]{0,4}", 0usize..3).prop_map(|(s, at, ins, del)| {
            let mut b: Vec<char> = s.chars().collect();
            let at = at % (b.len() + 1);
            let end = (at + del).min(b.len());
            b.splice(at..end, ins.chars());
            b.into_iter().collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn partition_text(s in prop_oneof![mutated("set_partition"), ".{0,16}"]) {
            if let Ok(p) = s.parse::<SetPartition>() {
                prop_assert_eq!(p.to_string().parse::<SetPartition>().unwrap(), p);
            }
        }

        #[test]
        fn graph_text(s in prop_oneof![mutated("graph_spec"), ".{0,16}"]) {
            if let Ok(g) = parse_graph(&s) {
                prop_assert_eq!(parse_graph(&g.to_spec()).unwrap(), g);
            }
        }

        #[test]
        fn diagram_text(s in prop_oneof![mutated("diagram_text"), ".{0,24}"]) {
            if let Ok(d) = s.parse::<LabeledDiagram>() {
                prop_assert_eq!(d.to_string().parse::<LabeledDiagram>().unwrap(), d.clone());
                let _ = ncchrom::diagrams::classify_case(&d);
            }
        }

        #[test]
        fn diagram_json(s in mutated("diagram_json")) {
            if let Ok(d) = LabeledDiagram::from_json(&s) {
                prop_assert_eq!(LabeledDiagram::from_json(&d.to_json()).unwrap(), d);
            }
        }

        #[test]
        fn ncexpr_json(s in mutated("ncexpr_json")) {
            if let Ok(x) = NCExpr::from_json(&s) {
                prop_assert_eq!(NCExpr::from_json(&x.to_json()).unwrap(), x);
            }
        }
    }
}

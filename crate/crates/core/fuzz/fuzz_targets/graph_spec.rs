#![no_main]

use libfuzzer_sys::fuzz_target;
use ncchrom::parse_graph;

fuzz_target!(|s: &str| {
    if let Ok(g) = parse_graph(s) {
        // the normalized form must describe the same edge set
        let back = parse_graph(&g.to_spec()).expect("to_spec reparses");
        assert_eq!(back, g);
    }
});

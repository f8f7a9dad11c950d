#![no_main]

use libfuzzer_sys::fuzz_target;
use ncchrom::LabeledDiagram;

fuzz_target!(|s: &str| {
    if let Ok(d) = LabeledDiagram::from_json(s) {
        assert_eq!(LabeledDiagram::from_json(&d.to_json()).expect("round trip"), d);
    }
});

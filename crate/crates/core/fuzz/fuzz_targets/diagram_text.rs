#![no_main]

use libfuzzer_sys::fuzz_target;
use ncchrom::LabeledDiagram;

fuzz_target!(|s: &str| {
    if let Ok(d) = s.parse::<LabeledDiagram>() {
        let back: LabeledDiagram = d.to_string().parse().expect("printed diagram reparses");
        assert_eq!(back, d);
        let _ = d.decompose();
        let _ = ncchrom::diagrams::classify_case(&d);
    }
});

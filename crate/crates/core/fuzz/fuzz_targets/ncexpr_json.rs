#![no_main]

use libfuzzer_sys::fuzz_target;
use ncchrom::NCExpr;

fuzz_target!(|s: &str| {
    if let Ok(x) = NCExpr::from_json(s) {
        assert_eq!(NCExpr::from_json(&x.to_json()).expect("round trip"), x);
        if x.n() <= 6 {
            let _ = x.e_to_p();
        }
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use ncchrom::SetPartition;

fuzz_target!(|s: &str| {
    if let Ok(p) = s.parse::<SetPartition>() {
        let back: SetPartition = p.to_string().parse().expect("printed partition reparses");
        assert_eq!(back, p);
        let _ = p.class_key();
    }
});

#![no_main]
use libfuzzer_sys::fuzz_target;

use hsrl::hierarchy::{parse_membership, write_membership};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(map) = parse_membership(text) {
        let mut out = Vec::new();
        write_membership(&map, &mut out).unwrap();
        assert_eq!(parse_membership(std::str::from_utf8(&out).unwrap()).unwrap(), map);
    }
});

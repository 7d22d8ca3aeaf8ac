#![no_main]
use libfuzzer_sys::fuzz_target;

use hsrl::graph::{load_edge_list, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = load_edge_list(text, 1.0) else {
        return;
    };
    assert!(g.total_weight().map_or(true, f64::is_finite));

    // Labeled output must load back to the same shape.
    let mut out = Vec::new();
    write_edge_list(&g, &mut out, true).unwrap();
    let again = load_edge_list(std::str::from_utf8(&out).unwrap(), 1.0).unwrap();
    assert_eq!(again.edge_count(), g.edge_count());
});

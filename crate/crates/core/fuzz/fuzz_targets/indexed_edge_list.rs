#![no_main]
use libfuzzer_sys::fuzz_target;

use hsrl::graph::{parse_indexed_edge_list, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_indexed_edge_list(text) {
        let mut out = Vec::new();
        write_edge_list(&g, &mut out, false).unwrap();
        let again = parse_indexed_edge_list(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(again.node_count(), g.node_count());
        assert_eq!(again.edge_count(), g.edge_count());
    }
});

#![no_main]
use libfuzzer_sys::fuzz_target;

use hsrl::EmbeddingMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((labels, z)) = EmbeddingMatrix::read_text(text) {
        assert_eq!(labels.len(), z.rows());
        assert!(z.is_finite());
        assert_eq!(z.as_slice().len(), z.rows() * z.dim());
    }
});

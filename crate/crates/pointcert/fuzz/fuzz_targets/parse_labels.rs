#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(entries) = pointcert::pointcloud::parse_labels(data) {
        for (path, _label) in &entries {
            assert!(!path.is_empty());
        }
    }
});

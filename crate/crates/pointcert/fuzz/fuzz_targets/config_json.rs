#![no_main]

use libfuzzer_sys::fuzz_target;

use pointcert::harness::{EvalConfig, TrainSpec};

fuzz_target!(|data: &[u8]| {
    if let Ok(config) = EvalConfig::from_json(data) {
        // anything that deserialized must also satisfy the validator
        assert!(config.validate().is_ok());
        assert!(config.k >= 1);
        assert!(!config.attacks.is_empty());
    }
    let _ = TrainSpec::from_json(data);
});

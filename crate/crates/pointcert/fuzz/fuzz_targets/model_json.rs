#![no_main]

use libfuzzer_sys::fuzz_target;

use pointcert::classifier::{CentroidModel, Classifier};
use pointcert::pointcloud::{Point, PointCloud};

// Untrusted model documents must either be rejected or produce a model that
// classifies without panicking.
fuzz_target!(|data: &[u8]| {
    if let Ok(model) = CentroidModel::from_json(data) {
        assert!(model.num_classes >= 2);
        if model.descriptor_len == 11 {
            let cloud = PointCloud::new(vec![
                Point::new(&[0.0, 0.0, 0.0]).unwrap(),
                Point::new(&[1.0, 2.0, 3.0]).unwrap(),
            ])
            .unwrap();
            let label = model.classify(&cloud).unwrap();
            assert!(label < model.num_classes);
        }
    }
});

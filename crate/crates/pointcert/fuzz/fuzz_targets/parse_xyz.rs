#![no_main]

use libfuzzer_sys::fuzz_target;

// The XYZ parser must never panic and never build an invalid cloud: on
// success the result is a nonempty deduplicated set of finite points of the
// requested dimension, and serialization round-trips the exact point set.
fuzz_target!(|data: &[u8]| {
    for dim in [1usize, 3, 6] {
        if let Ok(parsed) = pointcert::pointcloud::parse_xyz(data, dim) {
            let cloud = &parsed.cloud;
            assert!(cloud.len() >= 1);
            assert!(cloud.points().iter().all(|p| p.dim() == dim));
            assert!(cloud
                .points()
                .iter()
                .all(|p| p.coords().iter().all(|c| c.is_finite())));
            let again = pointcert::pointcloud::parse_xyz(cloud.to_xyz().as_bytes(), dim)
                .expect("serialized cloud reparses");
            assert_eq!(&again.cloud, cloud);
            assert_eq!(again.duplicates_dropped, 0);
        }
    }
});

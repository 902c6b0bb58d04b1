#![no_main]

use libfuzzer_sys::fuzz_target;
use valuations_cli::scene::parse_scene_str;

// Parsing either fails with a typed error or yields a scene whose bodies all live in its dimension.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(scene) = parse_scene_str(text) {
        for body in scene.bodies.values() {
            assert_eq!(body.ambient_dim(), scene.dimension);
        }
        let _ = valuations_cli::probe_family("scene", &scene);
    }
});

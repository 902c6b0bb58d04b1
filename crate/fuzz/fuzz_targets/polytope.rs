#![no_main]

use libfuzzer_sys::fuzz_target;
use valuations::{Polytope, PolytopeRecord};

// A decoded polytope contains its input points, reserializes to itself and has nonnegative volume.
fuzz_target!(|data: &[u8]| {
    let Ok(rec) = serde_json::from_slice::<PolytopeRecord>(data) else { return };
    if rec.vertices.len() > 16 || rec.vertices.iter().any(|v| v.len() > 4) {
        return;
    }
    let Ok(p) = serde_json::from_slice::<Polytope>(data) else { return };
    for v in &rec.vertices {
        assert!(p.contains(v));
    }
    let again: Polytope = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(again.vertices(), p.vertices());
    assert!(!p.volume().is_negative());
});

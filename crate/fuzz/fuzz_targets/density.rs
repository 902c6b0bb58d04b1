#![no_main]

use libfuzzer_sys::fuzz_target;
use valuations::{DensityRecord, PolyDensity};

// Records that decode into a density survive an encode/decode round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(rec) = serde_json::from_slice::<DensityRecord>(data) else { return };
    let Some(n) = rec.monomials.first().map(|m| m.exponents.len()) else { return };
    if let Ok(d) = PolyDensity::from_record(n, &rec) {
        assert_eq!(PolyDensity::from_record(n, &d.to_record()).unwrap(), d);
    }
});

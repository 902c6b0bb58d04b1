#![no_main]

use libfuzzer_sys::fuzz_target;
use valuations::Rational;

// Accepted text renders canonically and reparses to the same value.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = text.parse::<Rational>() {
        assert_eq!(q.to_string().parse::<Rational>().unwrap(), q);
    }
});

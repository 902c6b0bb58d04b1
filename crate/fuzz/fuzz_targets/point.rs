#![no_main]

use libfuzzer_sys::fuzz_target;
use valuations_cli::parse_point;

// A parsed point has exactly the requested number of coordinates.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let n = usize::from(n % 6);
    if let Ok(p) = parse_point(text, n) {
        assert_eq!(p.len(), n);
    }
});

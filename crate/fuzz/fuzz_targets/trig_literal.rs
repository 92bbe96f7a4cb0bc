#![no_main]

use hscale::torus::TrigPoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(u) = TrigPoly::from_json(text) {
        let back = TrigPoly::from_json(&u.to_json()).expect("emitted literal re-parses");
        assert_eq!(u, back);
    }
});

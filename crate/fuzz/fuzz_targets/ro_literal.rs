#![no_main]

use hscale::rofunc::RoFunction;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(phi) = RoFunction::from_json(text) {
        let emitted = phi.to_json().expect("parsed weights have a literal");
        let back = RoFunction::from_json(&emitted).expect("emitted literal re-parses");
        assert_eq!(phi, back);
        let _ = phi.ln_at_log(3.0);
    }
});

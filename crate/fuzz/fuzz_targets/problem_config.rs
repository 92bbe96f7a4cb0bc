#![no_main]

use hscale_cli::{Overrides, ProblemConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ProblemConfig::from_json_str(text, &Overrides::default()) {
        let emitted = serde_json::to_string(&cfg).expect("configs serialize");
        let back = ProblemConfig::from_json_str(&emitted, &Overrides::default()).expect("emitted config re-parses");
        assert_eq!(cfg, back);
    }
});

#![no_main]

use hscale::operators::MatrixDiffOp;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = MatrixDiffOp::from_json(text) {
        let back = MatrixDiffOp::from_literal(&a.to_literal(), Some(a.dim())).expect("emitted literal re-parses");
        assert_eq!(a, back);
        let _ = a.adjoint();
    }
});

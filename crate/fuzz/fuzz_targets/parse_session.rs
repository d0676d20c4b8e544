#![no_main]

use libfuzzer_sys::fuzz_target;
use regtensor::report::render_json;
use regtensor::session::{parse_session, run_session};

// Sessions come from untrusted files: parsing must surface diagnostics and
// never panic; parsed sessions must run and render without panicking, and
// rendering must be deterministic.
fuzz_target!(|data: &[u8]| {
    let src = match std::str::from_utf8(data) {
        Ok(s) => s,
        Err(_) => return,
    };
    if let Ok(session) = parse_session(src) {
        let report = run_session(&session);
        let a = render_json(&report);
        let b = render_json(&run_session(&session));
        assert_eq!(a, b, "structured output must be deterministic");
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use regtensor::poly::parse::{parse_ratfunc, parse_ratfunc_free};
use regtensor::scalar::PrimeBase;
use std::sync::Arc;

// The expression grammar must reject garbage with an error, never a panic,
// and accepted expressions must round-trip through their printed form.
fuzz_target!(|data: &[u8]| {
    let src = match std::str::from_utf8(data) {
        Ok(s) => s,
        Err(_) => return,
    };
    let vars = Arc::new(vec!["x".to_string(), "y".to_string(), "z".to_string()]);
    for base in [PrimeBase::Rational, PrimeBase::Prime(2), PrimeBase::Prime(5)] {
        if let Ok(v) = parse_ratfunc(src, base, vars.clone()) {
            let printed = format!("{v}");
            let again = parse_ratfunc(&printed, base, vars.clone())
                .expect("printed form must re-parse");
            assert_eq!(again, v, "round trip through display");
        }
    }
    let _ = parse_ratfunc_free(src, PrimeBase::Prime(3));
});

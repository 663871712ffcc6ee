#![no_main]

use gsa_pce_cli::report::parse_report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = parse_report(text) {
        let again = parse_report(&report.to_json()).expect("re-parse");
        // NaN never reaches the document, so equality is structural.
        assert_eq!(again.to_json(), report.to_json());
    }
});

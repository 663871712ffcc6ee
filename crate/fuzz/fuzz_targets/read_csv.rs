#![no_main]

use gsa_pce_core::dataset::{read_csv, CsvSelection};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(ds) = read_csv(data, &CsvSelection::output("Y")) else {
        return;
    };
    assert!(ds.output().iter().all(|v| v.is_finite()));
    assert!(ds.inputs().iter().all(|v| v.is_finite()));

    // Whatever parses must survive a write and re-read unchanged.
    let mut buf = Vec::new();
    ds.write_csv(&mut buf).expect("write");
    let again = read_csv(buf.as_slice(), &CsvSelection::output(ds.output_name())).expect("re-read");
    assert_eq!(again.column_names(), ds.column_names());
    assert_eq!(again.output(), ds.output());
    assert_eq!(again.inputs(), ds.inputs());
});

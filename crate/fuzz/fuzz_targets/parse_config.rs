#![no_main]

use gsa_pce_cli::config::{parse_config_text, AnalysisConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(lines) = parse_config_text(text) else {
        return;
    };
    for (line, key, _) in &lines {
        assert!(*line >= 1);
        assert!(!key.is_empty());
    }
    if let Ok(cfg) = AnalysisConfig::from_sources(Some(text), &[]) {
        assert!(cfg.degree >= 1);
        let _ = cfg.analysis_options();
    }
});

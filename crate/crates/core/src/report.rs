//! Provenance shared by all reports.

use std::sync::OnceLock;

use sha2::{Digest, Sha256};

const SOURCES: &[&str] = &[
    include_str!("lib.rs"),
    include_str!("certified.rs"),
    include_str!("combinatorics.rs"),
    include_str!("cw.rs"),
    include_str!("error.rs"),
    include_str!("exact_bounds/mod.rs"),
    include_str!("exact_bounds/scan.rs"),
    include_str!("gf2.rs"),
    include_str!("hypergraph.rs"),
    include_str!("report.rs"),
    include_str!("sampling.rs"),
    include_str!("spectral.rs"),
    include_str!("suites.rs"),
];

/// First 16 hex digits of a SHA-256 over the library sources.
pub fn code_version() -> &'static str {
    static VERSION: OnceLock<String> = OnceLock::new();
    VERSION.get_or_init(|| {
        let mut h = Sha256::new();
        for s in SOURCES {
            h.update((s.len() as u64).to_le_bytes());
            h.update(s.as_bytes());
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_is_stable_hex() {
        let v = code_version();
        assert_eq!(v.len(), 16);
        assert!(v.chars().all(|c| c.is_ascii_hexdigit()));
        assert_eq!(v, code_version());
    }
}

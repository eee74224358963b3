//! Scenario files shipped with the binary.

use std::path::Path;

pub const BUNDLED: &[(&str, &str)] = &[
    ("adjoint-a2", include_str!("../fixtures/adjoint-a2.json")),
    ("adjoint-c2", include_str!("../fixtures/adjoint-c2.json")),
    ("adjoint-g2", include_str!("../fixtures/adjoint-g2.json")),
    ("grassmannian-a3-p2", include_str!("../fixtures/grassmannian-a3-p2.json")),
    ("segre-1-1", include_str!("../fixtures/segre-1-1.json")),
    ("segre-2-2", include_str!("../fixtures/segre-2-2.json")),
    ("veronese-a1", include_str!("../fixtures/veronese-a1.json")),
];

/// Reads `arg` from disk if it exists, else looks it up among the bundled
/// fixtures by name (with or without `.json`).
pub fn load(arg: &str) -> Option<String> {
    if Path::new(arg).is_file() {
        return std::fs::read_to_string(arg).ok();
    }
    let stem = Path::new(arg).file_stem()?.to_str()?;
    BUNDLED.iter().find(|(name, _)| *name == stem).map(|(_, body)| body.to_string())
}

//! Benchmark corpus cache: well-known text files are looked up in a local
//! directory and validated by exact size, never downloaded.

use anyhow::{bail, Result};
use std::path::PathBuf;

/// Files the benchmark docs refer to, with their exact sizes.
pub const KNOWN_CORPORA: [(&str, u64); 2] =
    [("bible.txt", 4_047_392), ("world192.txt", 2_473_400)];

/// `WLZ_CORPUS_DIR` if set, else `~/.cache/wlz-corpus`.
pub fn corpus_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("WLZ_CORPUS_DIR") {
        return PathBuf::from(dir);
    }
    let home = std::env::var("HOME").unwrap_or_else(|_| ".".into());
    PathBuf::from(home).join(".cache").join("wlz-corpus")
}

/// Report cache state for every known corpus file; error if any is absent
/// or has the wrong size, naming the exact path where it must be placed.
pub fn verify() -> Result<()> {
    let dir = corpus_dir();
    let mut missing = Vec::new();
    for (name, size) in KNOWN_CORPORA {
        let path = dir.join(name);
        match std::fs::metadata(&path) {
            Ok(m) if m.len() == size => println!("ok      {} ({} bytes)", path.display(), size),
            Ok(m) => {
                println!("resize  {} ({} bytes, expected {})", path.display(), m.len(), size);
                missing.push((name, size, path));
            }
            Err(_) => {
                println!("absent  {} (expected {} bytes)", path.display(), size);
                missing.push((name, size, path));
            }
        }
    }
    if !missing.is_empty() {
        let lines: Vec<String> = missing
            .iter()
            .map(|(name, size, path)| format!("  {name}: place {size} bytes at {}", path.display()))
            .collect();
        bail!(
            "corpus cache incomplete; obtain the files and drop them in place \
             (override the directory with WLZ_CORPUS_DIR):\n{}",
            lines.join("\n")
        );
    }
    Ok(())
}

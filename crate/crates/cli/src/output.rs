//! Atomic file output.
//!
//! Every command computes its outputs in memory first, then writes them
//! through a two-phase stage-and-rename so a failing run leaves no partial
//! files behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Stages every file, then renames them all into place.
pub fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)
            .with_context(|| format!("staging in {}", dir.display()))?;
        tmp.write_all(bytes)
            .with_context(|| format!("writing staged {}", path.display()))?;
        staged.push((tmp, path.clone()));
    }
    for (tmp, path) in staged {
        tmp.persist(&path)
            .with_context(|| format!("replacing {}", path.display()))?;
    }
    Ok(())
}

/// Sibling manifest path for a file output: `<name>.manifest.json`.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    name.push_str(".manifest.json");
    out.with_file_name(name)
}

//! Run manifests: every command records its parameters, the tool
//! version, and a SHA-256 checksum of each produced artifact, so a run
//! can be replayed and compared byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use zrp_core::Error;

#[derive(Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<OutputRecord>,
}

#[derive(Serialize)]
pub struct OutputRecord {
    /// File path, or "-" for stdout.
    pub path: String,
    pub sha256: String,
}

fn checksum(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes).map_err(|e| Error::domain(format!("writing {}: {e}", path.display())))
}

/// Prints `body` to stdout or writes it to `out`, writes any extra
/// artifacts, and serializes the manifest: to `<out>.manifest.json`
/// when writing files, to stderr otherwise.
pub fn emit(
    subcommand: &str,
    parameters: serde_json::Value,
    seed: Option<u64>,
    body: &str,
    out: Option<&Path>,
    extra: &[(PathBuf, Vec<u8>)],
) -> Result<(), Error> {
    let mut outputs = Vec::new();
    match out {
        Some(path) => {
            write_file(path, body.as_bytes())?;
            outputs.push(OutputRecord {
                path: path.display().to_string(),
                sha256: checksum(body.as_bytes()),
            });
        }
        None => {
            println!("{body}");
            outputs.push(OutputRecord {
                path: "-".to_string(),
                sha256: checksum(body.as_bytes()),
            });
        }
    }
    for (path, bytes) in extra {
        write_file(path, bytes)?;
        outputs.push(OutputRecord {
            path: path.display().to_string(),
            sha256: checksum(bytes),
        });
    }
    let manifest = RunManifest {
        subcommand: subcommand.to_string(),
        parameters,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs,
    };
    let text = serde_json::to_string_pretty(&manifest).unwrap();
    match out {
        Some(path) => {
            let mut manifest_path = path.as_os_str().to_owned();
            manifest_path.push(".manifest.json");
            write_file(Path::new(&manifest_path), text.as_bytes())
        }
        None => {
            eprintln!("{text}");
            Ok(())
        }
    }
}

//! Input digests and the one-line JSON verdict format.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use projent::io::read_text;
use projent::Result;

use crate::Cli;

/// Reads input files and hashes their contents in order.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = read_text(path)?;
        self.absorb(text.as_bytes());
        Ok(text)
    }

    /// Hashes a value that stands in for a file, such as a command-line set.
    pub fn absorb(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn digest(&self) -> String {
        hex::encode(self.hasher.clone().finalize())
    }
}

pub struct Emitter {
    tol: f64,
    seed: u64,
    quiet: bool,
}

impl Emitter {
    pub fn new(cli: &Cli) -> Self {
        Emitter {
            tol: cli.tol,
            seed: cli.seed,
            quiet: cli.json,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Writes one JSON object with sorted keys to stdout.
    pub fn line(&self, value: &Value) {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{value}");
    }

    pub fn verdict(&self, command: &str, inputs: &Inputs, verdict: &str, payload: Value) {
        self.line(&json!({
            "command": command,
            "inputs": inputs.digest(),
            "verdict": verdict,
            "payload": payload,
            "seed": self.seed,
            "tol": self.tol,
        }));
    }

    /// A human-readable line on stderr unless `--json` was given.
    pub fn summary(&self, text: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", text.as_ref());
        }
    }
}

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use morphgen::manifest::RunManifest;
use morphgen::ParadigmLexicon;

/// A UTF-8 text input with the name it is recorded under.
pub struct Input {
    pub name: String,
    pub text: String,
}

impl Input {
    pub fn lines(&self) -> Vec<&str> {
        self.text.lines().collect()
    }
}

fn decode(name: &str, bytes: Vec<u8>) -> Result<String> {
    String::from_utf8(bytes).map_err(|e| {
        let at = e.utf8_error().valid_up_to();
        anyhow!("{name}: invalid UTF-8 at byte {at}")
    })
}

/// Reads a file, or standard input for `None` and `-`.
pub fn read_input(path: Option<&Path>, manifest: &mut RunManifest, role: &str) -> Result<Input> {
    let (name, bytes) = match path {
        Some(p) if p != Path::new("-") => {
            let bytes = fs::read(p).with_context(|| format!("reading {}", p.display()))?;
            (p.display().to_string(), bytes)
        }
        _ => {
            let mut bytes = Vec::new();
            std::io::stdin()
                .read_to_end(&mut bytes)
                .context("reading standard input")?;
            ("<stdin>".to_owned(), bytes)
        }
    };
    manifest.add_input(role, &bytes);
    let text = decode(&name, bytes)?;
    Ok(Input { name, text })
}

pub fn read_required(path: &Path, manifest: &mut RunManifest, role: &str) -> Result<Input> {
    read_input(Some(path), manifest, role)
}

pub fn load_lexicon(path: &Path, manifest: &mut RunManifest) -> Result<ParadigmLexicon> {
    let input = read_required(path, manifest, "lexicon")?;
    ParadigmLexicon::parse(&input.text).with_context(|| format!("loading lexicon {}", input.name))
}

pub fn join_lines<S: AsRef<str>>(lines: &[S]) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(line.as_ref());
        out.push('\n');
    }
    out
}

/// Writes to a file, or to standard output for `None` and `-`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).context("writing standard output")?;
            out.flush().context("writing standard output")
        }
    }
}

/// Where the manifest of a run goes: the explicit path, or next to the
/// main output file. Runs that only write to standard output put it on
/// standard error.
pub fn emit_manifest(manifest: &RunManifest, explicit: Option<&Path>, output: Option<&Path>) -> Result<()> {
    let text = manifest.to_text();
    let target: Option<PathBuf> = match (explicit, output) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(out)) if out != Path::new("-") => {
            let mut name = out.as_os_str().to_owned();
            name.push(".manifest");
            Some(PathBuf::from(name))
        }
        _ => None,
    };
    match target {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

//! Line-oriented file formats: code specs (JSON), word files and matrix dumps.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use aglist::gf::{Fe, Field};
use aglist::gsdecoder::CodeConfig;

/// Canonical text of a code spec. Reading it back and writing again gives
/// the same bytes.
pub fn code_spec_text(cfg: &CodeConfig) -> Result<String> {
    Ok(serde_json::to_string_pretty(cfg)? + "\n")
}

pub fn read_code_spec(path: &Path) -> Result<CodeConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing code spec {}", path.display()))
}

/// One word per line, `len` space-separated canonical integers. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_words(text: &str, field: &Field, len: usize) -> Result<Vec<Vec<Fe>>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word = line
            .split_whitespace()
            .map(|tok| {
                let v: u64 = tok.parse().with_context(|| format!("line {}: bad integer {tok:?}", lineno + 1))?;
                field.elem(v).with_context(|| format!("line {}", lineno + 1))
            })
            .collect::<Result<Vec<Fe>>>()?;
        if word.len() != len {
            bail!("line {}: expected {len} values, found {}", lineno + 1, word.len());
        }
        out.push(word);
    }
    Ok(out)
}

pub fn read_words(path: &Path, field: &Field, len: usize) -> Result<Vec<Vec<Fe>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_words(&text, field, len).with_context(|| format!("in {}", path.display()))
}

pub fn format_word(w: &[Fe]) -> String {
    w.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn words_text(words: &[Vec<Fe>]) -> String {
    words.iter().map(|w| format_word(w) + "\n").collect()
}

/// Writes to `path`, or to stdout when it is `None` or `-`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Integer list such as `0..11` (inclusive), `0..=11`, `1,4,7` or `0..3,9`.
pub fn parse_int_list(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().parse()?);
            if a > b {
                bail!("empty range {part}");
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().with_context(|| format!("bad integer {part:?}"))?);
        }
    }
    if out.is_empty() {
        bail!("empty list");
    }
    Ok(out)
}

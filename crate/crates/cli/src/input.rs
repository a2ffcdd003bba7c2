use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use vecflow::flows::VectorFlow;
use vecflow::io::{parse_graph, parse_graph6_lines};
use vecflow::json::{CoverJson, FlowJson};
use vecflow::Multigraph;

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn is_edge_list(bytes: &[u8]) -> bool {
    matches!(
        bytes.iter().find(|b| !b.is_ascii_whitespace()),
        Some(b'0'..=b'9' | b'#')
    )
}

/// One graph; graph6 input must hold exactly one non-empty line.
pub fn read_graph(path: &Path) -> Result<Multigraph> {
    let bytes = read_bytes(path)?;
    if is_edge_list(&bytes) {
        return parse_graph(&bytes).with_context(|| format!("parsing {}", path.display()));
    }
    let mut graphs =
        parse_graph6_lines(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    match graphs.len() {
        1 => Ok(graphs.pop().expect("one graph")),
        0 => bail!("{}: no graph found", path.display()),
        n => bail!("{}: expected one graph, found {n}; use batch", path.display()),
    }
}

pub fn read_flow(path: &Path, g: &Multigraph) -> Result<VectorFlow> {
    let j: FlowJson = read_field(path, "flow")?;
    j.to_flow(g).with_context(|| format!("flow in {}", path.display()))
}

pub fn read_cover(path: &Path) -> Result<CoverJson> {
    read_field(path, "cover")
}

/// Accepts either the bare object or any command output that carries it under `key`.
fn read_field<T: serde::de::DeserializeOwned>(path: &Path, key: &str) -> Result<T> {
    let bytes = read_bytes(path)?;
    let mut v: serde_json::Value =
        serde_json::from_slice(&bytes).with_context(|| format!("{key} JSON in {}", path.display()))?;
    if let Some(inner) = v.get_mut(key).filter(|x| x.is_object()) {
        v = inner.take();
    }
    serde_json::from_value(v).with_context(|| format!("{key} JSON in {}", path.display()))
}

pub type BatchItem = (String, std::result::Result<Multigraph, String>);

fn file_items(path: &Path, out: &mut Vec<BatchItem>) -> Result<()> {
    let bytes = read_bytes(path)?;
    let name = path.display().to_string();
    if is_edge_list(&bytes) {
        out.push((name, parse_graph(&bytes).map_err(|e| e.to_string())));
        return Ok(());
    }
    for (i, line) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if line.iter().all(|b| b.is_ascii_whitespace()) {
            continue;
        }
        let parsed = parse_graph6_lines(line)
            .map_err(|e| e.to_string())
            .and_then(|mut gs| gs.pop().ok_or_else(|| "empty line".to_string()));
        out.push((format!("{name}:{}", i + 1), parsed));
    }
    Ok(())
}

/// Graphs from a directory (every regular file, sorted by name) or a single file.
pub fn read_batch(source: &Path) -> Result<Vec<BatchItem>> {
    let mut out = Vec::new();
    if source.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(source)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for f in files {
            file_items(&f, &mut out)?;
        }
    } else {
        file_items(source, &mut out)?;
    }
    Ok(out)
}

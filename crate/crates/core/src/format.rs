//! Text instance format.
//!
//! ```text
//! SETCOVER 1
//! m=<int> n=<int>
//! ELT
//! <set-id>: <element-id> ...        (m lines, oracle order)
//! SET                                (optional)
//! <element-id>: <set-id> ...        (n lines, oracle order)
//! META key=value                     (optional, any number)
//! ```
//!
//! Without a `SET` section the per-element lists are derived ascending.
//! Writing a parsed file reproduces it byte for byte.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::system::{ElemId, SetId, SetSystem, SystemError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duality violation: {0}")]
    Duality(#[from] SystemError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub system: SetSystem,
    /// Whether the `SET` table is written out. Always true for generated
    /// instances, whose list orders may differ from the derived default.
    pub set_section: bool,
    pub meta: Vec<(String, String)>,
}

impl InstanceFile {
    pub fn new(system: SetSystem) -> Self {
        InstanceFile {
            system,
            set_section: true,
            meta: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let sys = &self.system;
        let mut out = String::with_capacity(16 * sys.incidences() + 64);
        out.push_str("SETCOVER 1\n");
        out.push_str(&format!("m={} n={}\n", sys.m(), sys.n()));
        out.push_str("ELT\n");
        for s in sys.set_ids() {
            push_row(&mut out, s.0, sys.elements(s).iter().map(|e| e.0));
        }
        if self.set_section {
            out.push_str("SET\n");
            for e in sys.elem_ids() {
                push_row(&mut out, e.0, sys.sets_containing(e).iter().map(|s| s.0));
            }
        }
        for (k, v) in &self.meta {
            out.push_str(&format!("META {k}={v}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let err = |line: usize, msg: &str| FormatError::Parse {
            line,
            msg: msg.to_string(),
        };

        let (ln, header) = lines.next().ok_or_else(|| err(1, "empty file"))?;
        if header != "SETCOVER 1" {
            return Err(err(ln, "expected `SETCOVER 1`"));
        }
        let (ln, dims) = lines.next().ok_or_else(|| err(2, "missing dimensions"))?;
        let (m, n) = parse_dims(dims).ok_or_else(|| err(ln, "expected `m=<int> n=<int>`"))?;
        let (ln, tag) = lines.next().ok_or_else(|| err(3, "missing ELT section"))?;
        if tag != "ELT" {
            return Err(err(ln, "expected `ELT`"));
        }

        let mut elt_of = Vec::with_capacity(m);
        for i in 1..=m {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| err(ln + i, "ELT section ended early"))?;
            let ids = parse_row(line, i).map_err(|msg| err(ln, &msg))?;
            elt_of.push(ids.into_iter().map(ElemId).collect::<Vec<_>>());
        }

        let mut set_of = None;
        if let Some(&(ln, "SET")) = lines.peek() {
            lines.next();
            let mut rows = Vec::with_capacity(n);
            for j in 1..=n {
                let (ln, line) = lines
                    .next()
                    .ok_or_else(|| err(ln + j, "SET section ended early"))?;
                let ids = parse_row(line, j).map_err(|msg| err(ln, &msg))?;
                rows.push(ids.into_iter().map(SetId).collect::<Vec<_>>());
            }
            set_of = Some(rows);
        }

        let mut meta = Vec::new();
        for (ln, line) in lines {
            let rest = line
                .strip_prefix("META ")
                .ok_or_else(|| err(ln, "expected `META key=value`"))?;
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| err(ln, "META line lacks `=`"))?;
            meta.push((k.to_string(), v.to_string()));
        }

        let set_section = set_of.is_some();
        let system = match set_of {
            Some(set_of) => SetSystem::from_tables(m, n, elt_of, set_of)?,
            None => SetSystem::from_elt_of(n, elt_of)?,
        };
        Ok(InstanceFile {
            system,
            set_section,
            meta,
        })
    }
}

fn push_row(out: &mut String, id: u32, items: impl Iterator<Item = u32>) {
    out.push_str(&id.to_string());
    out.push(':');
    for x in items {
        out.push(' ');
        out.push_str(&x.to_string());
    }
    out.push('\n');
}

fn parse_dims(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split(' ');
    let m = it.next()?.strip_prefix("m=")?.parse().ok()?;
    let n = it.next()?.strip_prefix("n=")?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((m, n))
}

fn parse_row(line: &str, expected_id: usize) -> Result<Vec<u32>, String> {
    let (id, rest) = line
        .split_once(':')
        .ok_or_else(|| format!("expected `{expected_id}: ...`"))?;
    let id: usize = id.parse().map_err(|_| format!("bad row id `{id}`"))?;
    if id != expected_id {
        return Err(format!("expected row {expected_id}, found {id}"));
    }
    rest.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad id `{t}`")))
        .collect()
}

pub fn read_instance(path: &Path) -> Result<InstanceFile, FormatError> {
    let text = fs::read_to_string(path)?;
    InstanceFile::parse(&text)
}

pub fn write_instance(file: &InstanceFile, path: &Path) -> Result<(), FormatError> {
    fs::write(path, file.to_text())?;
    Ok(())
}

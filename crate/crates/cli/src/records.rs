//! JSON Lines record formats.
//!
//! * ces:  `{"probs": [...]}` with optional `"labels"` (must match the set order)
//! * des:  `{"valence": v, "arousal": a}`
//! * ddes: `{"height": h, "width": w, "data": [...]}`
//!
//! Any record may carry an `"id"`, which is echoed on output.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use ddes_core::format::sig9_vec;
use ddes_core::io::{decode_binary, is_binary_grid, GridJson};
use ddes_core::{CategoricalState, EmotionSet, EmotionState, Kind, VAPoint};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct Record {
    pub line: usize,
    pub id: Option<Value>,
    pub state: EmotionState,
}

#[derive(Deserialize)]
struct CesIn {
    probs: Vec<f64>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

/// A missing input is a configuration problem; any other read failure is data.
pub fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| {
        let msg = format!("cannot read {}: {e}", path.display());
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::Config(msg)
        } else {
            CliError::Data(msg)
        }
    })
}

pub fn load_set(path: &Path) -> CliResult<Arc<EmotionSet>> {
    EmotionSet::load(path)
        .map(Arc::new)
        .map_err(|e| CliError::Config(format!("emotion set {}: {e}", path.display())))
}

fn parse_state(value: Value, kind: Kind, set: Option<&Arc<EmotionSet>>) -> CliResult<EmotionState> {
    Ok(match kind {
        Kind::Ces => {
            let set = set.ok_or_else(|| {
                CliError::Config("categorical input needs its emotion set".into())
            })?;
            let rec: CesIn = serde_json::from_value(value)?;
            if let Some(labels) = rec.labels {
                if !labels.iter().map(String::as_str).eq(set.labels()) {
                    return Err(CliError::Data(format!(
                        "labels do not match emotion set {:?}",
                        set.name()
                    )));
                }
            }
            CategoricalState::from_weights(set.clone(), &rec.probs)?.into()
        }
        Kind::Des => serde_json::from_value::<VAPoint>(value)?.into(),
        Kind::Ddes => {
            let g: GridJson = serde_json::from_value(value)?;
            EmotionState::Density(g.try_into()?)
        }
    })
}

/// Parses a whole input. For ddes, a binary grid file yields one record;
/// anything not starting with `{` is treated as (possibly corrupt) binary.
/// The first bad line aborts with its line number.
pub fn parse_records(
    bytes: &[u8],
    kind: Kind,
    set: Option<&Arc<EmotionSet>>,
) -> CliResult<Vec<Record>> {
    let looks_binary = bytes
        .iter()
        .find(|b| !b.is_ascii_whitespace())
        .is_some_and(|&b| b != b'{');
    if kind == Kind::Ddes && (is_binary_grid(bytes) || looks_binary) {
        let grid = decode_binary(bytes)?;
        return Ok(vec![Record {
            line: 1,
            id: None,
            state: grid.into(),
        }]);
    }
    if kind == Kind::Ces && set.is_none() {
        return Err(CliError::Config(
            "categorical input needs its emotion set".into(),
        ));
    }
    let text = std::str::from_utf8(bytes)
        .map_err(|_| CliError::Data("input is not UTF-8 JSON Lines".into()))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = n + 1;
        let mut value: Value =
            serde_json::from_str(line).map_err(|e| CliError::at_line(line_no, e))?;
        let id = value.as_object_mut().and_then(|o| o.remove("id"));
        let state = parse_state(value, kind, set).map_err(|e| match e {
            CliError::Data(m) => CliError::at_line(line_no, m),
            other => other,
        })?;
        out.push(Record {
            line: line_no,
            id,
            state,
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct CesOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<&'a Value>,
    set: &'a str,
    labels: Vec<&'a str>,
    #[serde(serialize_with = "sig9_vec")]
    probs: &'a [f64],
}

#[derive(Serialize)]
struct DesOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<&'a Value>,
    #[serde(serialize_with = "ddes_core::format::sig9")]
    valence: f64,
    #[serde(serialize_with = "ddes_core::format::sig9")]
    arousal: f64,
}

#[derive(Serialize)]
struct DdesOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<&'a Value>,
    #[serde(flatten)]
    grid: GridJson,
}

pub fn state_to_json(state: &EmotionState, id: Option<&Value>) -> CliResult<String> {
    Ok(match state {
        EmotionState::Categorical(c) => serde_json::to_string(&CesOut {
            id,
            set: c.set().name(),
            labels: c.set().labels().collect(),
            probs: c.probs(),
        })?,
        EmotionState::Dimensional(p) => serde_json::to_string(&DesOut {
            id,
            valence: p.valence(),
            arousal: p.arousal(),
        })?,
        EmotionState::Density(g) => serde_json::to_string(&DdesOut {
            id,
            grid: GridJson::from(g),
        })?,
    })
}

/// Writes to a file, or stdout when no path is given.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, bytes)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn jsonl(lines: &[String]) -> Vec<u8> {
    let mut s = String::new();
    for l in lines {
        s.push_str(l);
        s.push('\n');
    }
    s.into_bytes()
}

//! The JSON diagram file format.
//!
//! A file is either a bare PD code, `[[1,4,2,5],[3,6,4,1],[5,2,6,3]]`, or an
//! object
//!
//! ```json
//! {
//!   "name": "trefoil",
//!   "pd": [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]],
//!   "signs": [-1, -1, -1],
//!   "regions": [{"crossings": [0, 1, 2], "strands": 2, "half_twists": 3}]
//! }
//! ```
//!
//! where only `pd` is required. Region crossing ids are 0-based positions
//! in `pd`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::diagram::{Diagram, DiagramError};
use crate::twist::RegionAnnotation;

const KEYS: [&str; 4] = ["name", "pd", "signs", "regions"];
const REGION_KEYS: [&str; 3] = ["crossings", "strands", "half_twists"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject unknown keys instead of warning about them.
    pub strict: bool,
    pub require_connected: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            strict: true,
            require_connected: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInput {
    pub diagram: Diagram,
    pub annotations: Vec<RegionAnnotation>,
    pub warnings: Vec<String>,
}

/// Parses a diagram file with default options, ignoring annotations.
pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    parse_input(text, &ParseOptions::default()).map(|p| p.diagram)
}

pub fn parse_input(text: &str, options: &ParseOptions) -> Result<ParsedInput, DiagramError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DiagramError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut warnings = Vec::new();
    let (name, pd, signs, regions) = match &value {
        Value::Array(_) => (None, &value, None, None),
        Value::Object(obj) => {
            for key in obj.keys() {
                if !KEYS.contains(&key.as_str()) {
                    unknown_key(key, options, &mut warnings)?;
                }
            }
            let name = match obj.get("name") {
                None | Some(Value::Null) => None,
                Some(Value::String(s)) => Some(s.clone()),
                Some(_) => return Err(schema("`name` must be a string")),
            };
            let pd = obj.get("pd").ok_or_else(|| schema("missing key `pd`"))?;
            (name, pd, obj.get("signs"), obj.get("regions"))
        }
        _ => return Err(schema("expected a PD code or an object with key `pd`")),
    };
    let pd = pd_rows(pd)?;
    let signs = match signs {
        None | Some(Value::Null) => None,
        Some(v) => Some(int_list(v, "signs")?),
    };
    let diagram = Diagram::from_pd(name, &pd, signs.as_deref())?;
    if options.require_connected {
        diagram.require_connected()?;
    }
    let annotations = match regions {
        None | Some(Value::Null) => Vec::new(),
        Some(v) => region_list(v, options, &mut warnings)?,
    };
    Ok(ParsedInput {
        diagram,
        annotations,
        warnings,
    })
}

fn schema(msg: impl Into<String>) -> DiagramError {
    DiagramError::Schema(msg.into())
}

fn unknown_key(
    key: &str,
    options: &ParseOptions,
    warnings: &mut Vec<String>,
) -> Result<(), DiagramError> {
    if options.strict {
        Err(DiagramError::UnknownKey(key.to_owned()))
    } else {
        warnings.push(format!("ignoring unknown key `{key}`"));
        Ok(())
    }
}

fn pd_rows(v: &Value) -> Result<Vec<Vec<i64>>, DiagramError> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema("`pd` must be a list of crossings"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| int_list(row, &format!("pd[{i}]")))
        .collect()
}

fn int_list(v: &Value, what: &str) -> Result<Vec<i64>, DiagramError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(format!("`{what}` must be a list of integers")))?;
    items
        .iter()
        .map(|x| {
            x.as_i64()
                .ok_or_else(|| schema(format!("`{what}` must contain only integers, found {x}")))
        })
        .collect()
}

fn count(obj: &Map<String, Value>, key: &str, at: &str) -> Result<usize, DiagramError> {
    let v = obj
        .get(key)
        .ok_or_else(|| schema(format!("{at}: missing key `{key}`")))?;
    v.as_u64().map(|n| n as usize).ok_or_else(|| {
        schema(format!(
            "{at}: `{key}` must be a non-negative integer, found {v}"
        ))
    })
}

fn region_list(
    v: &Value,
    options: &ParseOptions,
    warnings: &mut Vec<String>,
) -> Result<Vec<RegionAnnotation>, DiagramError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema("`regions` must be a list"))?;
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let at = format!("regions[{i}]");
        let obj = item
            .as_object()
            .ok_or_else(|| schema(format!("{at} must be an object")))?;
        for key in obj.keys() {
            if !REGION_KEYS.contains(&key.as_str()) {
                unknown_key(&format!("{at}.{key}"), options, warnings)?;
            }
        }
        let ids = int_list(
            obj.get("crossings")
                .ok_or_else(|| schema(format!("{at}: missing key `crossings`")))?,
            &format!("{at}.crossings"),
        )?;
        let mut crossing_ids = BTreeSet::new();
        for id in ids {
            if id < 0 {
                return Err(schema(format!("{at}.crossings: negative crossing id {id}")));
            }
            if !crossing_ids.insert(id as usize) {
                return Err(schema(format!(
                    "{at}.crossings: crossing {id} listed twice"
                )));
            }
        }
        out.push(RegionAnnotation {
            crossing_ids,
            strand_count: count(obj, "strands", &at)?,
            declared_half_twists: count(obj, "half_twists", &at)?,
        });
    }
    Ok(out)
}

/// Writes a diagram, with signs and annotations, in the input format.
pub fn to_json(d: &Diagram, annotations: &[RegionAnnotation]) -> String {
    let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(", ");
    let mut out = String::from("{\n");
    if let Some(name) = d.name() {
        let _ = writeln!(out, "  \"name\": {},", Value::String(name.to_owned()));
    }
    out.push_str("  \"pd\": [");
    let rows: Vec<String> = d
        .crossings()
        .iter()
        .map(|c| format!("    [{}]", join(&mut c.arcs.iter().map(u32::to_string))))
        .collect();
    if !rows.is_empty() {
        let _ = write!(out, "\n{}\n  ", rows.join(",\n"));
    }
    out.push_str("],\n");
    let _ = write!(
        out,
        "  \"signs\": [{}]",
        join(&mut d.signs().iter().map(|s| s.value().to_string()))
    );
    if !annotations.is_empty() {
        out.push_str(",\n  \"regions\": [\n");
        let regions: Vec<String> = annotations
            .iter()
            .map(|a| {
                format!(
                    "    {{\"crossings\": [{}], \"strands\": {}, \"half_twists\": {}}}",
                    join(&mut a.crossing_ids.iter().map(usize::to_string)),
                    a.strand_count,
                    a.declared_half_twists
                )
            })
            .collect();
        let _ = write!(out, "{}\n  ]", regions.join(",\n"));
    }
    out.push_str("\n}\n");
    out
}

//! Reading and writing the dimer JSON format.
//!
//! ```text
//! {
//!   "name": "c3",
//!   "nodes": [{"id": 0, "color": "black", "position": [0.3, 0.3]}, ...],
//!   "edges": [{"id": 0, "black": 0, "white": 1, "offset": [0, 0]}, ...],
//!   "rotations": {"0": [0, 1, 2], ...}
//! }
//! ```
//!
//! `offset` is the copy of the white endpoint minus the copy of the black
//! endpoint; rotations list incident edge ids counterclockwise. Schema errors
//! carry a JSON pointer to the offending value.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{Map, Value};

use crate::dimer::{Color, DimerModel, Edge, Node};
use crate::error::{Error, Result};
use crate::lattice::V2;

pub fn parse_dimer(bytes: &[u8]) -> Result<DimerModel> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::input("", format!("not UTF-8: {e}")))?;
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::input("", format!("JSON syntax error at line {} column {}: {e}", e.line(), e.column())))?;
    let top = object(&v, "")?;
    check_keys(top, "", &["name", "nodes", "edges", "rotations"], &["name", "nodes", "edges", "rotations"])?;
    let name = top["name"].as_str().ok_or_else(|| Error::input("/name", "expected a string"))?.to_string();

    let nodes = array(&top["nodes"], "/nodes")?
        .iter()
        .enumerate()
        .map(|(k, n)| parse_node(n, &format!("/nodes/{k}")))
        .collect::<Result<Vec<_>>>()?;
    let edges = array(&top["edges"], "/edges")?
        .iter()
        .enumerate()
        .map(|(k, e)| parse_edge(e, &format!("/edges/{k}")))
        .collect::<Result<Vec<_>>>()?;
    let mut rotations = BTreeMap::new();
    for (key, list) in object(&top["rotations"], "/rotations")? {
        let ptr = format!("/rotations/{}", escape_pointer(key));
        let id: u32 = key.parse().map_err(|_| Error::input(&ptr, "rotation key must be a node id"))?;
        let ids = array(list, &ptr)?
            .iter()
            .enumerate()
            .map(|(k, x)| uint(x, &format!("{ptr}/{k}")))
            .collect::<Result<Vec<_>>>()?;
        if rotations.insert(id, ids).is_some() {
            return Err(Error::input(ptr, "duplicate rotation key"));
        }
    }
    Ok(DimerModel { name, nodes, edges, rotations })
}

fn parse_node(v: &Value, ptr: &str) -> Result<Node> {
    let o = object(v, ptr)?;
    check_keys(o, ptr, &["id", "color", "position"], &["id", "color"])?;
    let id = uint(&o["id"], &format!("{ptr}/id"))?;
    let color = match o["color"].as_str() {
        Some("black") => Color::Black,
        Some("white") => Color::White,
        _ => return Err(Error::input(format!("{ptr}/color"), "expected \"black\" or \"white\"")),
    };
    let position = match o.get("position") {
        None => None,
        Some(p) => {
            let pp = format!("{ptr}/position");
            let a = array(p, &pp)?;
            if a.len() != 2 {
                return Err(Error::input(pp, "expected two numbers"));
            }
            let x = a[0].as_f64().ok_or_else(|| Error::input(format!("{pp}/0"), "expected a number"))?;
            let y = a[1].as_f64().ok_or_else(|| Error::input(format!("{pp}/1"), "expected a number"))?;
            Some([x, y])
        }
    };
    Ok(Node { id, color, position })
}

fn parse_edge(v: &Value, ptr: &str) -> Result<Edge> {
    let o = object(v, ptr)?;
    check_keys(o, ptr, &["id", "black", "white", "offset"], &["id", "black", "white", "offset"])?;
    let op = format!("{ptr}/offset");
    let a = array(&o["offset"], &op)?;
    if a.len() != 2 {
        return Err(Error::input(op, "expected two integers"));
    }
    let x = a[0].as_i64().ok_or_else(|| Error::input(format!("{op}/0"), "expected an integer"))?;
    let y = a[1].as_i64().ok_or_else(|| Error::input(format!("{op}/1"), "expected an integer"))?;
    Ok(Edge {
        id: uint(&o["id"], &format!("{ptr}/id"))?,
        black: uint(&o["black"], &format!("{ptr}/black"))?,
        white: uint(&o["white"], &format!("{ptr}/white"))?,
        offset: V2(x, y),
    })
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::input(ptr, "expected an object"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::input(ptr, "expected an array"))
}

fn uint(v: &Value, ptr: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::input(ptr, "expected a non-negative integer id"))
}

fn check_keys(o: &Map<String, Value>, ptr: &str, allowed: &[&str], required: &[&str]) -> Result<()> {
    for k in o.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::input(format!("{ptr}/{}", escape_pointer(k)), "unknown key"));
        }
    }
    for k in required {
        if !o.contains_key(*k) {
            return Err(Error::input(format!("{ptr}/{k}"), "missing required key"));
        }
    }
    Ok(())
}

fn escape_pointer(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

/// Canonical text: one node, edge or rotation per line, ids ascending.
pub fn serialize_dimer(model: &DimerModel) -> String {
    let mut nodes = model.nodes.clone();
    nodes.sort_by_key(|n| n.id);
    let mut edges = model.edges.clone();
    edges.sort_by_key(|e| e.id);
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"name\": {},", js(&model.name));
    out.push_str("  \"nodes\": [\n");
    for (i, n) in nodes.iter().enumerate() {
        let color = match n.color {
            Color::Black => "black",
            Color::White => "white",
        };
        let _ = write!(out, "    {{\"id\": {}, \"color\": \"{color}\"", n.id);
        if let Some([x, y]) = n.position {
            let _ = write!(out, ", \"position\": [{}, {}]", js(&x), js(&y));
        }
        out.push('}');
        out.push_str(if i + 1 < nodes.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ],\n  \"edges\": [\n");
    for (i, e) in edges.iter().enumerate() {
        let _ = write!(
            out,
            "    {{\"id\": {}, \"black\": {}, \"white\": {}, \"offset\": [{}, {}]}}",
            e.id, e.black, e.white, e.offset.0, e.offset.1
        );
        out.push_str(if i + 1 < edges.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ],\n  \"rotations\": {\n");
    let n = model.rotations.len();
    for (i, (id, list)) in model.rotations.iter().enumerate() {
        let items: Vec<String> = list.iter().map(|x| x.to_string()).collect();
        let _ = write!(out, "    \"{id}\": [{}]", items.join(", "));
        out.push_str(if i + 1 < n { ",\n" } else { "\n" });
    }
    out.push_str("  }\n}\n");
    out
}

fn js<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("scalar serializes")
}

pub fn read_dimer(path: &std::path::Path) -> Result<DimerModel> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::input(path.display().to_string(), format!("cannot read file: {e}")))?;
    parse_dimer(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C3: &str = r#"{
  "name": "c3",
  "nodes": [
    {"id": 0, "color": "black", "position": [0.25, 0.5]},
    {"id": 1, "color": "white"}
  ],
  "edges": [
    {"id": 0, "black": 0, "white": 1, "offset": [0, 0]},
    {"id": 1, "black": 0, "white": 1, "offset": [1, 1]},
    {"id": 2, "black": 0, "white": 1, "offset": [0, 1]}
  ],
  "rotations": {
    "0": [0, 1, 2],
    "1": [0, 1, 2]
  }
}
"#;

    #[test]
    fn canonical_round_trip() {
        let m = parse_dimer(C3.as_bytes()).unwrap();
        assert_eq!(serialize_dimer(&m), C3);
    }

    #[test]
    fn pointer_for_bad_offset() {
        let bad = C3.replace("\"offset\": [1, 1]", "\"offset\": [1, \"x\"]");
        let err = parse_dimer(bad.as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "input error at /edges/1/offset/1: expected an integer");
    }

    #[test]
    fn pointer_for_bad_color_and_missing_key() {
        let bad = C3.replace("\"color\": \"white\"", "\"color\": \"red\"");
        let err = parse_dimer(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("/nodes/1/color"));
        let bad = C3.replace("\"name\": \"c3\",", "");
        let err = parse_dimer(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("/name"));
    }

    #[test]
    fn syntax_error_is_input_error() {
        assert!(parse_dimer(b"{").unwrap_err().is_input());
    }
}

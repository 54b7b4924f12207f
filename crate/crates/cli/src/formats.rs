//! Instance file formats.
//!
//! Graph files: one edge per line, `<u> <v> [w]` (weight defaults to 1),
//! `node <u>` declares an isolated vertex, `#` starts a comment. Vertex
//! order is first appearance.
//!
//! Coverage files: `<set> : <item> <item> ...` plus optional
//! `weight <item> <w>` lines.
//!
//! Modular files: `<element> [w]` per line (weights may be negative).
//!
//! Graphic-matroid files: `<element> <u> <v>` maps every ground element to
//! an edge of an auxiliary graph.

use submod_core::setfn::{CoverageFamily, Graph};

use crate::error::CliError;

#[derive(Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph, CliError> {
    let mut graph = Graph::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            ["node", v] => {
                graph.add_vertex(v);
            }
            ["node", ..] => {
                return Err(CliError::Parse {
                    line: line_no,
                    msg: "a node line is `node <label>`".into(),
                })
            }
            [u, v] => add_edge(&mut graph, u, v, 1.0, line_no, &mut warnings)?,
            [u, v, w] => {
                let weight: f64 = w.parse().map_err(|_| CliError::Parse {
                    line: line_no,
                    msg: format!("bad weight {w:?}"),
                })?;
                add_edge(&mut graph, u, v, weight, line_no, &mut warnings)?;
            }
            _ => {
                return Err(CliError::Parse {
                    line: line_no,
                    msg: "an edge line is `<u> <v> [w]`".into(),
                })
            }
        }
    }
    Ok(ParsedGraph { graph, warnings })
}

fn add_edge(
    graph: &mut Graph,
    u: &str,
    v: &str,
    w: f64,
    line_no: usize,
    warnings: &mut Vec<String>,
) -> Result<(), CliError> {
    if w < 0.0 {
        return Err(CliError::Input(format!(
            "line {line_no}: negative edge weight {w}"
        )));
    }
    if u == v {
        warnings.push(format!("line {line_no}: self-loop at {u:?} ignored"));
    }
    graph
        .add_edge(u, v, w)
        .map_err(|e| CliError::Input(format!("line {line_no}: {e}")))
}

pub fn parse_coverage(text: &str) -> Result<CoverageFamily, CliError> {
    let mut family = CoverageFamily::new();
    let mut weight_lines: Vec<(usize, String, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "weight" {
            if tokens.len() != 3 {
                return Err(CliError::Parse {
                    line: line_no,
                    msg: "a weight line is `weight <item> <w>`".into(),
                });
            }
            let w: f64 = tokens[2].parse().map_err(|_| CliError::Parse {
                line: line_no,
                msg: format!("bad weight {:?}", tokens[2]),
            })?;
            if w < 0.0 {
                return Err(CliError::Input(format!(
                    "line {line_no}: negative item weight {w}"
                )));
            }
            weight_lines.push((line_no, tokens[1].to_string(), w));
            continue;
        }
        let Some((label_part, items_part)) = line.split_once(':') else {
            return Err(CliError::Parse {
                line: line_no,
                msg: "a set line is `<set> : <item> ...`".into(),
            });
        };
        let label = label_part.trim();
        if label.is_empty() || label.split_whitespace().count() != 1 {
            return Err(CliError::Parse {
                line: line_no,
                msg: "set label must be a single token".into(),
            });
        }
        let items: Vec<&str> = items_part.split_whitespace().collect();
        family
            .add_set(label, items)
            .map_err(|e| CliError::Parse { line: line_no, msg: e.to_string() })?;
    }
    for (line_no, item, w) in weight_lines {
        family
            .set_weight(&item, w)
            .map_err(|e| CliError::Input(format!("line {line_no}: {e}")))?;
    }
    Ok(family)
}

pub fn parse_modular(text: &str) -> Result<Vec<(String, f64)>, CliError> {
    let mut pairs: Vec<(String, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (label, weight) = match tokens.as_slice() {
            [] => continue,
            [l] => (l.to_string(), 1.0),
            [l, w] => (
                l.to_string(),
                w.parse().map_err(|_| CliError::Parse {
                    line: line_no,
                    msg: format!("bad weight {w:?}"),
                })?,
            ),
            _ => {
                return Err(CliError::Parse {
                    line: line_no,
                    msg: "a modular line is `<element> [w]`".into(),
                })
            }
        };
        if pairs.iter().any(|(l, _)| *l == label) {
            return Err(CliError::Parse {
                line: line_no,
                msg: format!("duplicate element {label:?}"),
            });
        }
        pairs.push((label, weight));
    }
    Ok(pairs)
}

/// Graphic-matroid description: `(element label, u, v)` triples.
pub fn parse_graphic_matroid(text: &str) -> Result<Vec<(String, String, String)>, CliError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [e, u, v] => rows.push((e.to_string(), u.to_string(), v.to_string())),
            _ => {
                return Err(CliError::Parse {
                    line: line_no,
                    msg: "a graphic matroid line is `<element> <u> <v>`".into(),
                })
            }
        }
    }
    Ok(rows)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Canonical text form of a graph; `parse_graph` of the output reproduces
/// the same instance. Vertices are declared up front so the ground-set
/// order survives the round trip.
#[cfg_attr(not(test), allow(dead_code))]
pub fn serialize_graph(graph: &Graph) -> String {
    let labels = graph.vertex_labels();
    let mut out = String::new();
    for label in labels {
        out.push_str(&format!("node {label}\n"));
    }
    for &(u, v, w) in graph.edges() {
        out.push_str(&format!("{} {} {}\n", labels[u], labels[v], w));
    }
    out
}

/// Canonical text form of a coverage family.
#[cfg_attr(not(test), allow(dead_code))]
pub fn serialize_coverage(family: &CoverageFamily) -> String {
    let mut out = String::new();
    for (label, items) in family.sets() {
        out.push_str(label);
        out.push_str(" :");
        for item in items {
            out.push(' ');
            out.push_str(item);
        }
        out.push('\n');
    }
    for (item, w) in family.weights() {
        out.push_str(&format!("weight {item} {w}\n"));
    }
    out
}

/// Canonical text form of a modular weight list.
#[cfg_attr(not(test), allow(dead_code))]
pub fn serialize_modular(pairs: &[(String, f64)]) -> String {
    pairs
        .iter()
        .map(|(l, w)| format!("{l} {w}\n"))
        .collect()
}

/// FNV-1a 64-bit digest of the raw instance bytes.
pub fn digest(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k3() {
        let parsed = parse_graph("a b\nb c\nc a").unwrap();
        assert_eq!(parsed.graph.vertex_labels(), ["a", "b", "c"]);
        assert_eq!(parsed.graph.edges().len(), 3);
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn parses_comments_weights_and_isolated_nodes() {
        let parsed = parse_graph("a b 2\n# comment\nnode z").unwrap();
        assert_eq!(parsed.graph.vertex_labels(), ["a", "b", "z"]);
        assert_eq!(parsed.graph.edges(), &[(0, 1, 2.0)]);
    }

    #[test]
    fn rejects_negative_weight_with_line() {
        match parse_graph("a b -1") {
            Err(CliError::Input(msg)) => assert!(msg.contains("line 1")),
            other => panic!("expected input error, got {other:?}"),
        }
    }

    #[test]
    fn warns_on_self_loops() {
        let parsed = parse_graph("a a 3\na b 1").unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert_eq!(parsed.graph.edges().len(), 1);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_graph("a b c d"),
            Err(CliError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("lonely"),
            Err(CliError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn parses_coverage_with_weights_and_empty_sets() {
        let fam = parse_coverage("s1 : y1 y2\ns2 : y2 y3\nweight y2 5\ns3 :\n").unwrap();
        assert_eq!(fam.set_labels(), ["s1", "s2", "s3"]);
        let oracle = submod_core::setfn::make_coverage(&fam).unwrap();
        let both = oracle.ground().subset_from_labels(["s1", "s2"]).unwrap();
        assert_eq!(oracle.evaluate(&both).unwrap(), 7.0);
        let empty_set = oracle.ground().subset_from_labels(["s3"]).unwrap();
        assert_eq!(oracle.evaluate(&empty_set).unwrap(), 0.0);
    }

    #[test]
    fn rejects_duplicate_coverage_labels() {
        assert!(matches!(
            parse_coverage("s1 : y1\ns1 : y2"),
            Err(CliError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn parses_modular_files() {
        let pairs = parse_modular("a 1\nb -2\nc 3\nd").unwrap();
        assert_eq!(pairs.len(), 4);
        assert_eq!(pairs[1], ("b".to_string(), -2.0));
        assert_eq!(pairs[3].1, 1.0);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(b"a b\n"), digest(b"a b\n"));
        assert_ne!(digest(b"a b\n"), digest(b"a c\n"));
    }

    #[test]
    fn graph_round_trips_through_text() {
        let parsed = parse_graph("node z\na b 2\nb c\nc a 0.5\n").unwrap();
        let text = serialize_graph(&parsed.graph);
        let again = parse_graph(&text).unwrap();
        assert_eq!(parsed.graph.vertex_labels(), again.graph.vertex_labels());
        assert_eq!(parsed.graph.edges(), again.graph.edges());
        // A second round trip is byte-identical.
        assert_eq!(text, serialize_graph(&again.graph));
    }

    #[test]
    fn coverage_round_trips_through_text() {
        let fam = parse_coverage("s1 : y1 y2\ns2 : y2 y3\nweight y2 5\ns3 :\n").unwrap();
        let text = serialize_coverage(&fam);
        let again = parse_coverage(&text).unwrap();
        assert_eq!(fam.sets(), again.sets());
        assert_eq!(fam.weights(), again.weights());
        assert_eq!(text, serialize_coverage(&again));
    }

    #[test]
    fn modular_round_trips_through_text() {
        let pairs = parse_modular("a 1\nb -2.5\nc 3\n").unwrap();
        let text = serialize_modular(&pairs);
        let again = parse_modular(&text).unwrap();
        assert_eq!(pairs, again);
        assert_eq!(text, serialize_modular(&again));
    }
}

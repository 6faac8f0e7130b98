//! Reader and writer for the standard transportation-network text format:
//! metadata headers, `~` comment lines, then one whitespace-separated record
//! per link. The free-flow time column becomes the edge's base cost
//! coefficient.

use crate::error::{Error, Result};
use crate::games::graph::{Edge, Graph};

fn header_value(line: &str, line_no: usize) -> Result<usize> {
    let after = line
        .split('>')
        .nth(1)
        .ok_or_else(|| Error::Parse { line: line_no, message: "malformed metadata header".into() })?;
    after.trim().parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("expected an integer after the header, got '{}'", after.trim()),
    })
}

/// Parses a network document. Requires the `<NUMBER OF NODES>`,
/// `<NUMBER OF LINKS>` and `<END OF METADATA>` headers, skips `~` comments,
/// and reads `init term capacity length free_flow_time b power speed toll
/// type ;` records with 1-based node ids. Link and node counts are checked
/// against the headers.
pub fn parse_tntp(text: &str) -> Result<Graph> {
    let mut num_nodes: Option<usize> = None;
    let mut num_links: Option<usize> = None;
    let mut in_metadata = true;
    let mut edges: Vec<Edge> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('~') {
            continue;
        }
        if in_metadata {
            if line.starts_with('<') {
                let upper = line.to_ascii_uppercase();
                if upper.starts_with("<NUMBER OF NODES>") {
                    num_nodes = Some(header_value(line, line_no)?);
                } else if upper.starts_with("<NUMBER OF LINKS>") {
                    num_links = Some(header_value(line, line_no)?);
                } else if upper.starts_with("<END OF METADATA>") {
                    in_metadata = false;
                }
                // Other headers (first-through-node, zones, ...) are legal
                // and ignored.
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                message: "expected '<END OF METADATA>' before link records".into(),
            });
        }

        let fields: Vec<&str> = line
            .split_whitespace()
            .take_while(|f| *f != ";")
            .collect();
        if fields.len() < 5 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("link record needs at least 5 fields, got {}", fields.len()),
            });
        }
        let parse_node = |field: &str, what: &str| -> Result<usize> {
            let id: usize = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("{what} node id '{field}' is not an integer"),
            })?;
            if id == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("{what} node id must be 1-based"),
                });
            }
            Ok(id - 1)
        };
        let from = parse_node(fields[0], "init")?;
        let to = parse_node(fields[1], "term")?;
        let fft: f64 = fields[4].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("free_flow_time '{}' is not a number", fields[4]),
        })?;
        if !(fft.is_finite() && fft > 0.0) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("free_flow_time must be positive, got {fft}"),
            });
        }
        edges.push(Edge { from, to, cost: fft });
    }

    if in_metadata {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "missing '<END OF METADATA>' header".into(),
        });
    }
    let num_nodes = num_nodes.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing '<NUMBER OF NODES>' header".into(),
    })?;
    let num_links = num_links.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing '<NUMBER OF LINKS>' header".into(),
    })?;
    if edges.len() != num_links {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("header declares {num_links} links but {} were parsed", edges.len()),
        });
    }
    let max_node = edges.iter().map(|e| e.from.max(e.to)).max().unwrap_or(0);
    if num_nodes <= max_node {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!(
                "header declares {num_nodes} nodes but a link references node {}",
                max_node + 1
            ),
        });
    }
    Graph::new(num_nodes, edges)
}

/// Writes a graph back in the link-record grammar. Only the parsed fields
/// (endpoints and free-flow time) are meaningful; the remaining columns are
/// written as zeros so that `parse_tntp(serialize_tntp(g))` reproduces `g`.
pub fn serialize_tntp(graph: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("<NUMBER OF NODES> {}\n", graph.num_nodes()));
    out.push_str(&format!("<NUMBER OF LINKS> {}\n", graph.num_edges()));
    out.push_str("<END OF METADATA>\n");
    out.push_str("~ init term capacity length fft b power speed toll type ;\n");
    for e in graph.edges() {
        out.push_str(&format!(
            "{} {} 0 0 {} 0 0 0 0 1 ;\n",
            e.from + 1,
            e.to + 1,
            e.cost
        ));
    }
    out
}

/// Parses a quantities file: whitespace-separated `origin destination
/// quantity` rows with 1-based node ids.
pub fn parse_quantities(text: &str) -> Result<Vec<(usize, usize, f64)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('~') || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 'origin destination quantity', got {} fields", fields.len()),
            });
        }
        let origin: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("origin '{}' is not an integer", fields[0]),
        })?;
        let dest: usize = fields[1].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("destination '{}' is not an integer", fields[1]),
        })?;
        let quantity: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("quantity '{}' is not a number", fields[2]),
        })?;
        if origin == 0 || dest == 0 {
            return Err(Error::Parse { line: line_no, message: "node ids are 1-based".into() });
        }
        if !(quantity.is_finite() && quantity > 0.0) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("quantity must be positive, got {quantity}"),
            });
        }
        out.push((origin - 1, dest - 1, quantity));
    }
    Ok(out)
}

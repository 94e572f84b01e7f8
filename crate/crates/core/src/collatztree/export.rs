//! Deterministic DOT and JSON exports.
//!
//! Output order is fixed by construction (levels ascending, values
//! ascending within a level, window vertices ascending), so equal inputs
//! export byte-equal documents. Tree values are written as decimal strings
//! in JSON: levels deepen exponentially and outgrow fixed-width integers,
//! and several JSON consumers quietly round large numbers. Grid-window
//! values are bounded by construction and stay plain integers.

use serde::Serialize;

use super::hotel::hotel_coord;
use super::{CollatzTree, HotelGraph};

/// DOT digraph of the tree: one node per value with its depth, one edge
/// per parent-child pair.
pub fn tree_dot(tree: &CollatzTree) -> String {
    let mut out = String::from("digraph collatz_tree {\n");
    for level in &tree.levels {
        for v in level {
            out.push_str(&format!("    \"{}\" [depth={}];\n", v, tree.nodes[v].depth));
        }
    }
    for level in &tree.levels {
        for v in level {
            for child in &tree.nodes[v].children {
                out.push_str(&format!("    \"{}\" -> \"{}\";\n", v, child));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct TreeJson {
    max_depth: u64,
    levels: Vec<Vec<String>>,
    edges: Vec<(String, String)>,
}

/// JSON form of the tree: `max_depth`, the levels, and the edge list,
/// values as decimal strings.
pub fn tree_json(tree: &CollatzTree) -> String {
    let mut edges = Vec::new();
    for level in &tree.levels {
        for v in level {
            for child in &tree.nodes[v].children {
                edges.push((v.to_string(), child.to_string()));
            }
        }
    }
    let doc = TreeJson {
        max_depth: tree.max_depth,
        levels: tree
            .levels
            .iter()
            .map(|level| level.iter().map(|v| v.to_string()).collect())
            .collect(),
        edges,
    };
    serde_json::to_string(&doc).expect("tree serialization is infallible")
}

/// DOT digraph of a grid window: one node per value with its room
/// coordinates, one colored edge per in-window move.
pub fn hotel_dot(graph: &HotelGraph) -> String {
    let mut out = String::from("digraph hotel {\n");
    for v in graph.vertices() {
        let coord = hotel_coord(v);
        out.push_str(&format!(
            "    \"{}\" [tower={}, floor={}];\n",
            v, coord.tower, coord.floor
        ));
    }
    for (from, to, color) in graph.edges_within() {
        out.push_str(&format!(
            "    \"{}\" -> \"{}\" [color={}];\n",
            from,
            to,
            color.name()
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct HotelVertexJson {
    n: u64,
    tower: u64,
    floor: u64,
}

#[derive(Serialize)]
struct HotelEdgeJson {
    from: u64,
    to: u64,
    color: &'static str,
}

#[derive(Serialize)]
struct HotelJson {
    max_n: u64,
    vertices: Vec<HotelVertexJson>,
    edges: Vec<HotelEdgeJson>,
}

/// JSON form of a grid window: every vertex with its room, every
/// in-window move with its color.
pub fn hotel_json(graph: &HotelGraph) -> String {
    let vertices = graph
        .vertices()
        .map(|n| {
            let coord = hotel_coord(n);
            HotelVertexJson {
                n,
                tower: coord.tower,
                floor: coord.floor,
            }
        })
        .collect();
    let edges = graph
        .edges_within()
        .into_iter()
        .map(|(from, to, color)| HotelEdgeJson {
            from,
            to,
            color: color.name(),
        })
        .collect();
    let doc = HotelJson {
        max_n: graph.max_n(),
        vertices,
        edges,
    };
    serde_json::to_string(&doc).expect("window serialization is infallible")
}

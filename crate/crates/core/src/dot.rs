//! Graphviz output for defining graphs, balls and avoidant paths.

use std::fmt::Write;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::explorer::Ball;
use crate::presentation::DefiningGraph;
use crate::words::NormalForm;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The defining graph itself.
pub fn graph_dot(g: &DefiningGraph) -> String {
    let mut out = String::from("graph defining {\n");
    for s in g.generators() {
        let _ = writeln!(out, "  {};", quote(g.name(s)));
    }
    for (s, t) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", quote(g.name(s)), quote(g.name(t)));
    }
    out.push_str("}\n");
    out
}

fn label(g: &DefiningGraph, x: &NormalForm) -> String {
    if x.is_identity() {
        "e".to_string()
    } else {
        g.render_nf(x)
    }
}

/// Cayley graph induced on `nodes`, with `path` drawn in red. Path vertices
/// missing from `nodes` are added.
pub fn cayley_dot(g: &DefiningGraph, nodes: &[NormalForm], path: &[NormalForm]) -> String {
    let mut order: Vec<NormalForm> = Vec::new();
    let mut index: FxHashMap<NormalForm, usize> = FxHashMap::default();
    for x in nodes.iter().chain(path) {
        if !index.contains_key(x) {
            index.insert(x.clone(), order.len());
            order.push(x.clone());
        }
    }
    let on_path: FxHashSet<usize> = path.iter().map(|x| index[x]).collect();
    let path_edges: FxHashSet<(usize, usize)> = path
        .windows(2)
        .map(|w| {
            let (i, j) = (index[&w[0]], index[&w[1]]);
            (i.min(j), i.max(j))
        })
        .collect();

    let mut out = String::from("graph cayley {\n  node [shape=point];\n");
    for (i, x) in order.iter().enumerate() {
        let colour = if on_path.contains(&i) {
            ", color=red"
        } else {
            ""
        };
        let _ = writeln!(out, "  n{i} [xlabel={}{colour}];", quote(&label(g, x)));
    }
    for (i, x) in order.iter().enumerate() {
        for s in g.generators() {
            let y = g.mul_gen(x, s);
            let Some(&j) = index.get(&y) else { continue };
            if j <= i {
                continue;
            }
            let colour = if path_edges.contains(&(i, j)) {
                ", color=red, penwidth=2"
            } else {
                ""
            };
            let _ = writeln!(out, "  n{i} -- n{j} [label={}{colour}];", quote(g.name(s)));
        }
    }
    out.push_str("}\n");
    out
}

pub fn ball_dot(g: &DefiningGraph, ball: &Ball) -> String {
    let nodes: Vec<NormalForm> = ball.entries().iter().map(|(x, _)| x.clone()).collect();
    cayley_dot(g, &nodes, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::ball;
    use crate::presentation::build_gamma;

    #[test]
    fn unit_ball_of_square_group() {
        let g = build_gamma(1).unwrap();
        let b = ball(&g, &NormalForm::identity(&g), 1, 100).unwrap();
        let dot = ball_dot(&g, &b);
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert_eq!(dot.matches("xlabel").count(), 5);
        assert_eq!(graph_dot(&g).matches(" -- ").count(), 4);
    }
}

//! Breadth-first search over an annulus of the Cayley graph.
//!
//! Elements are stored as normal-form letter strings translated so that the
//! ball centre is the identity; the height of an element is then its word
//! length. Layers are expanded in ShortLex order so node counts and the
//! returned path are reproducible.

use rustc_hash::FxHashMap;

use crate::presentation::DefiningGraph;
use crate::words::{push_letter, shortlex, Letters};

/// Heights `inner..=ceiling` that the search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Annulus {
    pub inner: usize,
    pub ceiling: usize,
}

impl Annulus {
    #[inline]
    fn admits(&self, height: usize) -> bool {
        height >= self.inner && height <= self.ceiling
    }
}

#[derive(Debug)]
pub(crate) enum Outcome {
    Reached {
        length: u32,
        path: Option<Vec<Letters>>,
    },
    /// Every reachable state was visited without meeting the target.
    Exhausted,
    /// The node cap stopped the search.
    Budget,
}

pub(crate) struct Search<'g> {
    graph: &'g DefiningGraph,
    annulus: Annulus,
    cap_nodes: u64,
    nodes: Vec<Letters>,
    index: FxHashMap<Letters, u32>,
    parent: Vec<u32>,
    depth: Vec<u32>,
}

impl<'g> Search<'g> {
    pub fn new(graph: &'g DefiningGraph, annulus: Annulus, cap_nodes: u64) -> Self {
        Search {
            graph,
            annulus,
            cap_nodes,
            nodes: Vec::new(),
            index: FxHashMap::default(),
            parent: Vec::new(),
            depth: Vec::new(),
        }
    }

    pub fn nodes_explored(&self) -> u64 {
        self.nodes.len() as u64
    }

    fn add(&mut self, letters: Letters, parent: u32, depth: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.index.insert(letters.clone(), id);
        self.nodes.push(letters);
        self.parent.push(parent);
        self.depth.push(depth);
        id
    }

    fn trace(&self, mut id: u32) -> Vec<Letters> {
        let mut path = vec![self.nodes[id as usize].clone()];
        while self.parent[id as usize] != id {
            id = self.parent[id as usize];
            path.push(self.nodes[id as usize].clone());
        }
        path.reverse();
        path
    }

    /// Runs the search from `source`. Stops early when `target` is met; with
    /// no target the whole reachable part of the annulus is labelled.
    pub fn run(&mut self, source: &Letters, target: Option<&Letters>, want_path: bool) -> Outcome {
        debug_assert!(self.annulus.admits(source.len()));
        self.nodes.clear();
        self.index.clear();
        self.parent.clear();
        self.depth.clear();
        if self.cap_nodes == 0 {
            return Outcome::Budget;
        }
        let root = self.add(source.clone(), 0, 0);
        if target == Some(source) {
            let path = want_path.then(|| vec![source.clone()]);
            return Outcome::Reached { length: 0, path };
        }
        let mut frontier = vec![root];
        let mut next = Vec::new();
        let mut dist = 0u32;
        while !frontier.is_empty() {
            frontier.sort_unstable_by(|&a, &b| {
                shortlex(&self.nodes[a as usize], &self.nodes[b as usize])
            });
            for &id in &frontier {
                for s in self.graph.generators() {
                    let mut child = self.nodes[id as usize].clone();
                    push_letter(self.graph, &mut child, s);
                    if !self.annulus.admits(child.len()) || self.index.contains_key(&child) {
                        continue;
                    }
                    if self.nodes.len() as u64 >= self.cap_nodes {
                        return Outcome::Budget;
                    }
                    let hit = target == Some(&child);
                    let cid = self.add(child, id, dist + 1);
                    if hit {
                        let path = want_path.then(|| self.trace(cid));
                        return Outcome::Reached {
                            length: dist + 1,
                            path,
                        };
                    }
                    next.push(cid);
                }
            }
            std::mem::swap(&mut frontier, &mut next);
            next.clear();
            dist += 1;
        }
        Outcome::Exhausted
    }

    /// BFS distance of `x` after a completed or interrupted run.
    pub fn distance_to(&self, x: &Letters) -> Option<u32> {
        self.index.get(x).map(|&id| self.depth[id as usize])
    }
}

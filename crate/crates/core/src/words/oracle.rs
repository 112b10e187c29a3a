//! Word-equality oracles that never consult the normal-form code.
//!
//! Two routes are provided:
//!
//! * [`oracle_equal`] decides a single pair from elementary moves only. Cheap
//!   homomorphic invariants (letter parities and the retractions onto each
//!   infinite dihedral special subgroup) refute most unequal pairs; the rest
//!   are settled by exploring the closure of each word under deletions of
//!   `ss` and swaps of commuting neighbours. By the deletion condition every
//!   word reaches all reduced words of its element this way, so two words are
//!   equal iff their bottom layers meet.
//! * [`MovePartition`] enumerates every word up to a length bound and joins
//!   words connected by a single move (delete/insert `ss`, swap commuting
//!   neighbours) with a union-find, giving the full move-closure classes.

use std::collections::{HashSet, VecDeque};

use super::Word;
use crate::presentation::{DefiningGraph, Gen};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Equal,
    NotEqual,
    /// The state budget ran out before the closure was complete.
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    /// Maximum number of distinct words held by one closure.
    pub max_states: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_states: 1_000_000,
        }
    }
}

fn parity_vector(g: &DefiningGraph, w: &[Gen]) -> Vec<bool> {
    let mut p = vec![false; g.len()];
    for s in w {
        p[s.index()] ^= true;
    }
    p
}

/// Image of `w` under the retraction onto the special subgroup `<s, t>`,
/// freely reduced.
fn dihedral_image(w: &[Gen], s: Gen, t: Gen) -> Vec<Gen> {
    let mut stack: Vec<Gen> = Vec::new();
    for &x in w {
        if x != s && x != t {
            continue;
        }
        if stack.last() == Some(&x) {
            stack.pop();
        } else {
            stack.push(x);
        }
    }
    stack
}

/// Some invariant separates `u` and `v`.
fn refuted(g: &DefiningGraph, u: &[Gen], v: &[Gen]) -> bool {
    if u.len() % 2 != v.len() % 2 || parity_vector(g, u) != parity_vector(g, v) {
        return true;
    }
    let gens: Vec<Gen> = g.generators().collect();
    for (i, &s) in gens.iter().enumerate() {
        for &t in &gens[i + 1..] {
            if !g.commute(s, t) && dihedral_image(u, s, t) != dihedral_image(v, s, t) {
                return true;
            }
        }
    }
    false
}

/// Words of minimal length in the downward move closure of `w`, or `None`
/// when the budget is exceeded.
fn bottom_layer(g: &DefiningGraph, w: &[Gen], budget: OracleBudget) -> Option<HashSet<Vec<Gen>>> {
    let mut seen: HashSet<Vec<Gen>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.to_vec());
    queue.push_back(w.to_vec());
    let mut min_len = w.len();
    while let Some(cur) = queue.pop_front() {
        min_len = min_len.min(cur.len());
        for i in 0..cur.len().saturating_sub(1) {
            let (x, y) = (cur[i], cur[i + 1]);
            let next = if x == y {
                let mut n = cur.clone();
                n.drain(i..i + 2);
                n
            } else if g.commute(x, y) {
                let mut n = cur.clone();
                n.swap(i, i + 1);
                n
            } else {
                continue;
            };
            if seen.insert(next.clone()) {
                if seen.len() > budget.max_states {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(seen.into_iter().filter(|x| x.len() == min_len).collect())
}

/// Decides `u = v` in the group using elementary moves only.
pub fn oracle_equal(g: &DefiningGraph, u: &Word, v: &Word, budget: OracleBudget) -> OracleVerdict {
    if u == v {
        return OracleVerdict::Equal;
    }
    if refuted(g, &u.0, &v.0) {
        return OracleVerdict::NotEqual;
    }
    let (Some(bu), Some(bv)) = (bottom_layer(g, &u.0, budget), bottom_layer(g, &v.0, budget))
    else {
        return OracleVerdict::Inconclusive;
    };
    let same_len = bu.iter().next().map(Vec::len) == bv.iter().next().map(Vec::len);
    if same_len && bu.iter().any(|x| bv.contains(x)) {
        OracleVerdict::Equal
    } else {
        OracleVerdict::NotEqual
    }
}

/// Move-closure classes of all words of length `<= max_len`.
///
/// Words are indexed as base-`k` numerals offset by length, so the whole
/// universe lives in flat arrays.
pub struct MovePartition {
    k: usize,
    max_len: usize,
    offsets: Vec<usize>,
    parent: Vec<u32>,
}

impl MovePartition {
    pub fn build(g: &DefiningGraph, max_len: usize) -> Self {
        let k = g.len();
        let mut offsets = Vec::with_capacity(max_len + 2);
        let mut total = 0usize;
        for l in 0..=max_len {
            offsets.push(total);
            total += k.pow(l as u32);
        }
        offsets.push(total);
        assert!(total < u32::MAX as usize, "word universe too large");
        let mut part = MovePartition {
            k,
            max_len,
            offsets,
            parent: (0..total as u32).collect(),
        };
        let mut word = Vec::with_capacity(max_len);
        for l in 0..=max_len {
            for code in 0..k.pow(l as u32) {
                part.decode_into(l, code, &mut word);
                let me = part.index(&word);
                for i in 0..l.saturating_sub(1) {
                    let (x, y) = (word[i], word[i + 1]);
                    if x == y {
                        // deletion; the reverse edge is the insertion move
                        let shorter: Vec<Gen> = word[..i]
                            .iter()
                            .chain(word[i + 2..].iter())
                            .copied()
                            .collect();
                        let other = part.index(&shorter);
                        part.union(me, other);
                    } else if g.commute(x, y) {
                        word.swap(i, i + 1);
                        let other = part.index(&word);
                        word.swap(i, i + 1);
                        part.union(me, other);
                    }
                }
            }
        }
        part
    }

    fn decode_into(&self, len: usize, mut code: usize, out: &mut Vec<Gen>) {
        out.clear();
        out.resize(len, Gen(0));
        for slot in out.iter_mut().rev() {
            *slot = Gen((code % self.k) as u8);
            code /= self.k;
        }
    }

    fn index(&self, w: &[Gen]) -> u32 {
        let code = w.iter().fold(0usize, |acc, s| acc * self.k + s.index());
        (self.offsets[w.len()] + code) as u32
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    /// Class label of `w`; equal labels mean move-equivalent words.
    pub fn class_of(&mut self, w: &[Gen]) -> u32 {
        assert!(w.len() <= self.max_len);
        let i = self.index(w);
        self.find(i)
    }

    /// Every word of length exactly `len`, in numeral order.
    pub fn words_of_len(&self, len: usize) -> impl Iterator<Item = Vec<Gen>> + '_ {
        (0..self.k.pow(len as u32)).map(move |code| {
            let mut w = Vec::with_capacity(len);
            self.decode_into(len, code, &mut w);
            w
        })
    }
}

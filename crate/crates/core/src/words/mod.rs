//! The word problem: ShortLex normal forms, distances and walls.
//!
//! Normal forms are built one letter at a time by [`push_letter`], which keeps
//! the word equal to the lexicographically least linearisation of its trace.
//! Everything else (products, inverses, distances, wall labels) is a fold of
//! that primitive.

mod oracle;

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::presentation::{DefiningGraph, Gen, GraphError, GraphId};

pub use oracle::{oracle_equal, MovePartition, OracleBudget, OracleVerdict};

/// Inline storage for normal-form letters; searches rarely exceed this.
pub type Letters = SmallVec<[Gen; 32]>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("letter index {0} is not a generator of this graph")]
    UnknownLetter(u8),
    #[error("normal form belongs to a different graph")]
    GraphMismatch,
}

/// A finite sequence of generators over some graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

/// Canonical representative of a group element: the ShortLex-least geodesic
/// word. Ordering is ShortLex (length first, then letters).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    graph: GraphId,
    letters: Letters,
}

impl NormalForm {
    pub fn identity(g: &DefiningGraph) -> Self {
        NormalForm {
            graph: g.id(),
            letters: Letters::new(),
        }
    }

    /// Wraps letters that are already in normal form for `g`.
    pub(crate) fn from_normal_letters(g: &DefiningGraph, letters: Letters) -> Self {
        debug_assert!(is_normal(g, &letters));
        NormalForm {
            graph: g.id(),
            letters,
        }
    }

    pub fn graph_id(&self) -> GraphId {
        self.graph
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    pub fn into_letters(self) -> Letters {
        self.letters
    }

    /// Word length `|x|`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.letters.to_vec())
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.letters, &other.letters).then(self.graph.cmp(&other.graph))
    }
}

/// ShortLex comparison of letter sequences.
pub fn shortlex(a: &[Gen], b: &[Gen]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A wall (hyperplane of the Davis complex), named by its reflection.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WallId {
    pub reflection: NormalForm,
    pub ty: Gen,
}

/// Right-multiplies the normal form `w` by the generator `s` in place.
///
/// Scans back through letters commuting with `s`. Meeting `s` itself cancels
/// it; otherwise `s` is inserted at the first position after the blocking
/// letter where it is smaller than its successor. Returns `true` on
/// cancellation. `O(|w|)`.
#[inline]
pub fn push_letter(g: &DefiningGraph, w: &mut Letters, s: Gen) -> bool {
    let link = g.link_set(s);
    let mut j = w.len();
    while j > 0 && link.contains(w[j - 1]) {
        j -= 1;
    }
    if j > 0 && w[j - 1] == s {
        w.remove(j - 1);
        return true;
    }
    let mut p = j;
    while p < w.len() && w[p] < s {
        p += 1;
    }
    w.insert(p, s);
    false
}

/// True iff `letters` is a geodesic word that is ShortLex-least in its
/// commutation class.
pub fn is_normal(g: &DefiningGraph, letters: &[Gen]) -> bool {
    let mut acc = Letters::new();
    for &s in letters {
        push_letter(g, &mut acc, s);
    }
    acc.as_slice() == letters
}

fn render_letters(g: &DefiningGraph, letters: &[Gen]) -> String {
    let mut out = String::new();
    for (i, &s) in letters.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(g.name(s));
    }
    out
}

impl DefiningGraph {
    /// Parses whitespace-separated generator names.
    pub fn parse_word(&self, text: &str) -> Result<Word, GraphError> {
        text.split_whitespace()
            .map(|n| self.gen(n))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn render(&self, letters: &[Gen]) -> String {
        render_letters(self, letters)
    }

    pub fn render_nf(&self, x: &NormalForm) -> String {
        render_letters(self, x.letters())
    }

    fn check_letters(&self, letters: &[Gen]) -> Result<(), WordError> {
        match letters.iter().find(|s| s.index() >= self.len()) {
            Some(bad) => Err(WordError::UnknownLetter(bad.0)),
            None => Ok(()),
        }
    }

    fn check_nf(&self, x: &NormalForm) -> Result<(), WordError> {
        if x.graph == self.id() {
            Ok(())
        } else {
            Err(WordError::GraphMismatch)
        }
    }

    pub(crate) fn reduce_letters(&self, letters: impl IntoIterator<Item = Gen>) -> Letters {
        let mut acc = Letters::new();
        for s in letters {
            push_letter(self, &mut acc, s);
        }
        acc
    }

    /// Normal form of the element represented by `w`.
    pub fn reduce(&self, w: &Word) -> Result<NormalForm, WordError> {
        self.check_letters(&w.0)?;
        Ok(NormalForm {
            graph: self.id(),
            letters: self.reduce_letters(w.0.iter().copied()),
        })
    }

    /// Normal form of a word given as generator names.
    pub fn reduce_str(&self, text: &str) -> Result<NormalForm, WordError> {
        let w = self.parse_word(text)?;
        self.reduce(&w)
    }

    pub fn is_geodesic_word(&self, w: &Word) -> Result<bool, WordError> {
        Ok(self.reduce(w)?.len() == w.len())
    }

    pub fn multiply(&self, x: &NormalForm, y: &NormalForm) -> Result<NormalForm, WordError> {
        self.check_nf(x)?;
        self.check_nf(y)?;
        let mut acc = x.letters.clone();
        for &s in y.letters.iter() {
            push_letter(self, &mut acc, s);
        }
        Ok(NormalForm {
            graph: self.id(),
            letters: acc,
        })
    }

    /// `x · s` for a single generator.
    pub fn mul_gen(&self, x: &NormalForm, s: Gen) -> NormalForm {
        let mut letters = x.letters.clone();
        push_letter(self, &mut letters, s);
        NormalForm {
            graph: x.graph,
            letters,
        }
    }

    /// Generators are involutions, so the inverse reads the word backwards.
    pub fn inverse(&self, x: &NormalForm) -> NormalForm {
        NormalForm {
            graph: x.graph,
            letters: self.reduce_letters(x.letters.iter().rev().copied()),
        }
    }

    /// Word-metric distance `|x⁻¹ y|`.
    pub fn distance(&self, x: &NormalForm, y: &NormalForm) -> Result<usize, WordError> {
        self.check_nf(x)?;
        self.check_nf(y)?;
        Ok(self.quotient_letters(&x.letters, &y.letters).len())
    }

    /// Normal form of `x⁻¹ y` from raw letters.
    pub(crate) fn quotient_letters(&self, x: &[Gen], y: &[Gen]) -> Letters {
        self.reduce_letters(x.iter().rev().chain(y.iter()).copied())
    }

    /// Wall crossed by the edge from `base` to `base · s`.
    pub fn wall_of_edge(&self, base: &NormalForm, s: Gen) -> WallId {
        let letters = self.reduce_letters(
            base.letters
                .iter()
                .copied()
                .chain(std::iter::once(s))
                .chain(base.letters.iter().rev().copied()),
        );
        WallId {
            reflection: NormalForm {
                graph: base.graph,
                letters,
            },
            ty: s,
        }
    }

    /// Walls crossed, in order, by the path from `start` labelled by `w`.
    pub fn crossing_walls(&self, start: &NormalForm, w: &Word) -> Result<Vec<WallId>, WordError> {
        self.check_nf(start)?;
        self.check_letters(&w.0)?;
        let mut here = start.clone();
        let mut walls = Vec::with_capacity(w.len());
        for &s in &w.0 {
            walls.push(self.wall_of_edge(&here, s));
            push_letter(self, &mut here.letters, s);
        }
        Ok(walls)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.0.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::build_gamma;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn nf(g: &DefiningGraph, s: &str) -> NormalForm {
        g.reduce_str(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let g1 = build_gamma(1).unwrap();
        assert_eq!(g1.render_nf(&nf(&g1, "a_1 a_0 a_1")), "a_0");
        assert_eq!(g1.render_nf(&nf(&g1, "a_1 a_0")), "a_0 a_1");
        assert!(nf(&g1, "").is_identity());
        let g2 = build_gamma(2).unwrap();
        assert_eq!(g2.render_nf(&nf(&g2, "a_2 b_2 a_2 b_2")), "a_2 b_2 a_2 b_2");
    }

    #[test]
    fn shortlex_needs_more_than_block_sorting() {
        // x < y < z with z commuting with both: z y x -> y x z? only y-x blocked
        let g = DefiningGraph::new(["x", "y", "z"], [(0, 2), (1, 2)], crate::FamilyTag::Custom)
            .unwrap();
        assert_eq!(g.render_nf(&nf(&g, "z y x")), "y x z");
    }

    #[test]
    fn geodesic_examples() {
        let g1 = build_gamma(1).unwrap();
        assert!(!g1
            .is_geodesic_word(&g1.parse_word("a_0 a_1 a_0").unwrap())
            .unwrap());
        assert!(g1
            .is_geodesic_word(&g1.parse_word("a_0 b_0 a_0 b_0").unwrap())
            .unwrap());
    }

    #[test]
    fn unknown_letters_are_rejected() {
        let g1 = build_gamma(1).unwrap();
        assert_eq!(
            g1.reduce(&Word(vec![Gen(9)])),
            Err(WordError::UnknownLetter(9))
        );
        assert!(matches!(g1.reduce_str("a_0 q"), Err(WordError::Graph(_))));
    }

    #[test]
    fn product_and_inverse_examples() {
        let g1 = build_gamma(1).unwrap();
        let a0 = nf(&g1, "a_0");
        let a1 = nf(&g1, "a_1");
        assert_eq!(g1.render_nf(&g1.multiply(&a0, &a1).unwrap()), "a_0 a_1");
        assert!(g1.multiply(&a0, &a0).unwrap().is_identity());
        let pal = nf(&g1, "a_0 b_0 a_0");
        assert_eq!(g1.inverse(&pal), pal);
        assert!(g1.inverse(&NormalForm::identity(&g1)).is_identity());
        let g2 = build_gamma(2).unwrap();
        assert_eq!(g2.render_nf(&g2.inverse(&nf(&g2, "a_2 b_2"))), "b_2 a_2");
    }

    #[test]
    fn graph_mismatch_is_a_domain_error() {
        let g1 = build_gamma(1).unwrap();
        let g2 = build_gamma(2).unwrap();
        let x = nf(&g1, "a_0");
        let y = nf(&g2, "a_0");
        assert_eq!(g1.multiply(&x, &y), Err(WordError::GraphMismatch));
        assert_eq!(g2.distance(&x, &y), Err(WordError::GraphMismatch));
    }

    #[test]
    fn distance_examples() {
        let g1 = build_gamma(1).unwrap();
        let e = NormalForm::identity(&g1);
        assert_eq!(g1.distance(&e, &nf(&g1, "a_0 b_0 a_0")).unwrap(), 3);
        assert_eq!(g1.distance(&nf(&g1, "a_0"), &nf(&g1, "b_0")).unwrap(), 2);
        let x = nf(&g1, "a_0 b_0 a_1");
        assert_eq!(g1.distance(&x, &x).unwrap(), 0);
    }

    #[test]
    fn wall_examples() {
        let g1 = build_gamma(1).unwrap();
        let e = NormalForm::identity(&g1);
        let a0 = g1.gen("a_0").unwrap();
        let b0 = g1.gen("b_0").unwrap();
        let w = g1.wall_of_edge(&e, a0);
        assert_eq!(g1.render_nf(&w.reflection), "a_0");
        assert_eq!(g1.wall_of_edge(&nf(&g1, "a_1"), a0), w);
        let w2 = g1.wall_of_edge(&nf(&g1, "a_0"), b0);
        assert_eq!(g1.render_nf(&w2.reflection), "a_0 b_0 a_0");
    }

    #[test]
    fn crossing_wall_examples() {
        let g1 = build_gamma(1).unwrap();
        let e = NormalForm::identity(&g1);
        let walls = g1
            .crossing_walls(&e, &g1.parse_word("a_0 b_0").unwrap())
            .unwrap();
        let names: Vec<String> = walls.iter().map(|w| g1.render_nf(&w.reflection)).collect();
        assert_eq!(names, vec!["a_0", "a_0 b_0 a_0"]);
        let walls = g1
            .crossing_walls(&e, &g1.parse_word("a_0 a_1 a_0").unwrap())
            .unwrap();
        assert_eq!(walls[0], walls[2]);
        assert!(g1.crossing_walls(&e, &Word::default()).unwrap().is_empty());
    }

    #[test]
    fn opposite_square_edges_share_a_wall() {
        let g = build_gamma(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let len = rng.gen_range(0..10);
            let w = Word(
                (0..len)
                    .map(|_| Gen(rng.gen_range(0..g.len()) as u8))
                    .collect(),
            );
            let base = g.reduce(&w).unwrap();
            for s in g.generators() {
                for &t in g.link_set(s).iter().collect::<Vec<_>>().iter() {
                    let moved = g.mul_gen(&base, t);
                    assert_eq!(g.wall_of_edge(&moved, s), g.wall_of_edge(&base, s));
                }
                assert_eq!(g.wall_of_edge(&base, s).reflection.len() % 2, 1);
            }
        }
    }
}

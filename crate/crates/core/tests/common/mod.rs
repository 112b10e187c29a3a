//! Reference implementation that shares nothing with the normal-form code:
//! group elements are integer matrices of the (faithful) Tits representation
//! and searches are plain breadth-first searches over those matrices.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use racgdiv::DefiningGraph;

pub type Mat = Vec<i64>;

pub struct Tits {
    n: usize,
    bilinear: Vec<Vec<i64>>,
    lookup: HashMap<String, usize>,
}

impl Tits {
    pub fn new(g: &DefiningGraph) -> Self {
        let n = g.len();
        let names = g.names();
        let mut bilinear = vec![vec![-1i64; n]; n];
        for s in 0..n {
            bilinear[s][s] = 1;
            for t in 0..n {
                if s != t && g.commutes(&names[s], &names[t]).unwrap() {
                    bilinear[s][t] = 0;
                }
            }
        }
        let lookup = names
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        Tits {
            n,
            bilinear,
            lookup,
        }
    }

    pub fn identity(&self) -> Mat {
        let mut m = vec![0; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = 1;
        }
        m
    }

    /// `M · σ_s`.
    pub fn mul(&self, m: &Mat, s: usize) -> Mat {
        let (n, b) = (self.n, &self.bilinear[s]);
        let mut out = m.clone();
        for row in 0..n {
            let ms = m[row * n + s];
            if ms != 0 {
                for j in 0..n {
                    out[row * n + j] -= 2 * b[j] * ms;
                }
            }
        }
        out
    }

    pub fn word(&self, letters: &[&str]) -> Mat {
        letters
            .iter()
            .fold(self.identity(), |m, x| self.mul(&m, self.lookup[*x]))
    }

    pub fn word_from(&self, start: &Mat, letters: &[&str]) -> Mat {
        letters
            .iter()
            .fold(start.clone(), |m, x| self.mul(&m, self.lookup[*x]))
    }

    /// Distances from `center` for every element within `radius`.
    pub fn ball(&self, center: &Mat, radius: u32) -> HashMap<Mat, u32> {
        let mut dist = HashMap::new();
        dist.insert(center.clone(), 0);
        let mut frontier = vec![center.clone()];
        for d in 1..=radius {
            let mut next = Vec::new();
            for x in &frontier {
                for s in 0..self.n {
                    let y = self.mul(x, s);
                    if !dist.contains_key(&y) {
                        dist.insert(y.clone(), d);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    /// Shortest path from `p` to `q` through elements of `ball` at distance
    /// at least `r` from its centre.
    pub fn avoid(&self, ball: &HashMap<Mat, u32>, r: u32, p: &Mat, q: &Mat) -> Option<u32> {
        if p == q {
            return Some(0);
        }
        let mut seen = HashMap::new();
        seen.insert(p.clone(), 0u32);
        let mut queue = VecDeque::from([p.clone()]);
        while let Some(x) = queue.pop_front() {
            let dx = seen[&x];
            for s in 0..self.n {
                let y = self.mul(&x, s);
                match ball.get(&y) {
                    Some(&d) if d >= r && !seen.contains_key(&y) => {
                        if &y == q {
                            return Some(dx + 1);
                        }
                        seen.insert(y.clone(), dx + 1);
                        queue.push_back(y);
                    }
                    _ => {}
                }
            }
        }
        None
    }

    /// Avoidant distance from `γ(t - r)` to `γ(t + r)` around `γ(t)`, with
    /// the geodesic given by its letters on each side of `γ(0)`.
    pub fn rho(
        &self,
        forward: &[&str],
        backward: &[&str],
        r: u32,
        t: i64,
        cap: u32,
    ) -> Option<u32> {
        let at = |k: i64| {
            let n = k.unsigned_abs() as usize;
            if k >= 0 {
                self.word(&forward[..n])
            } else {
                self.word(&backward[..n])
            }
        };
        let x0 = at(t);
        let ball = self.ball(&x0, cap);
        self.avoid(&ball, r, &at(t - i64::from(r)), &at(t + i64::from(r)))
    }

    /// Maximum finite avoidant distance between points of the sphere `S_r(e)`.
    pub fn gersten(&self, r: u32, cap: u32) -> u32 {
        let ball = self.ball(&self.identity(), cap);
        let sphere: Vec<&Mat> = ball
            .iter()
            .filter(|(_, &d)| d == r)
            .map(|(x, _)| x)
            .collect();
        let mut best = 0;
        for (i, a) in sphere.iter().enumerate() {
            for b in &sphere[i + 1..] {
                if let Some(v) = self.avoid(&ball, r, a, b) {
                    best = best.max(v);
                }
            }
        }
        best
    }
}

/// `n` letters cycling through `word`.
pub fn cycle<'a>(word: &[&'a str], n: usize) -> Vec<&'a str> {
    word.iter().copied().cycle().take(n).collect()
}

//! The explicit words and bi-infinite geodesics used by the experiments.
//!
//! All exponent arithmetic is exact: `t = p/q` is rational and
//! `⌊i^(t-1)⌋` is an integer `q`-th root of `i^(p-q)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use thiserror::Error;

use crate::presentation::{DefiningGraph, Gen, GraphError};
use crate::words::{push_letter, NormalForm, Word, WordError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("unsupported support: {0}")]
    UnsupportedSupport(String),
    #[error("word is not a periodic geodesic: {0}")]
    NotGeodesic(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A rational exponent `t = p/q > 1` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    p: u64,
    q: u64,
}

impl RationalExponent {
    pub fn new(p: u64, q: u64) -> Result<Self, ConstructionError> {
        if q == 0 {
            return Err(ConstructionError::InvalidParameter(
                "zero denominator".into(),
            ));
        }
        let d = p.gcd(&q);
        let (p, q) = (p / d, q / d);
        if p <= q {
            return Err(ConstructionError::InvalidParameter(format!(
                "t = {p}/{q} must exceed 1"
            )));
        }
        Ok(RationalExponent { p, q })
    }

    pub fn numer(self) -> u64 {
        self.p
    }

    pub fn denom(self) -> u64 {
        self.q
    }

    pub fn as_f64(self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalExponent {
    type Err = ConstructionError;

    /// Accepts `p/q` or a bare integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConstructionError::InvalidParameter(format!("cannot parse exponent `{s}`"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        RationalExponent::new(p, q)
    }
}

/// Exact `⌊i^(t-1)⌋` for `i ≥ 1`.
pub fn floor_power(i: u64, t: RationalExponent) -> Result<u64, ConstructionError> {
    if i == 0 {
        return Err(ConstructionError::InvalidParameter(
            "floor_power needs i >= 1".into(),
        ));
    }
    let e = u32::try_from(t.p - t.q).map_err(|_| ConstructionError::Overflow)?;
    let q = u32::try_from(t.q).map_err(|_| ConstructionError::Overflow)?;
    let root = match (i as u128).checked_pow(e) {
        Some(v) => BigUint::from(v.nth_root(q)),
        None => BigUint::from(i).pow(e).nth_root(q),
    };
    u64::try_from(root).map_err(|_| ConstructionError::Overflow)
}

/// `f_t(n) = Σ_{i=1..n} ⌊i^(t-1)⌋`.
pub fn f_t(n: u64, t: RationalExponent) -> Result<u64, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::InvalidParameter(
            "f_t needs n >= 1".into(),
        ));
    }
    (1..=n).try_fold(0u64, |acc, i| {
        acc.checked_add(floor_power(i, t)?)
            .ok_or(ConstructionError::Overflow)
    })
}

struct GammaLetters {
    a_m: Gen,
    b_m: Gen,
    b_2: Gen,
}

fn gamma_letters(g: &DefiningGraph, m: u32) -> Result<GammaLetters, ConstructionError> {
    if m < 3 {
        return Err(ConstructionError::InvalidParameter(format!(
            "gamma geodesic needs m >= 3, got {m}"
        )));
    }
    let letters = GammaLetters {
        a_m: g.gen(&format!("a_{m}"))?,
        b_m: g.gen(&format!("b_{m}"))?,
        b_2: g.gen("b_2")?,
    };
    if g.commute(letters.a_m, letters.b_m) || g.commute(letters.a_m, letters.b_2) {
        return Err(ConstructionError::NotGeodesic(format!(
            "a_{m} commutes with b_{m} or b_2"
        )));
    }
    Ok(letters)
}

/// The block `w_{m,i,t} = (a_m b_m)(a_m b_2)^⌊i^(t-1)⌋`.
pub fn word_w(
    g: &DefiningGraph,
    m: u32,
    i: u64,
    t: RationalExponent,
) -> Result<Word, ConstructionError> {
    if i == 0 {
        return Err(ConstructionError::InvalidParameter(
            "block index starts at 1".into(),
        ));
    }
    let l = gamma_letters(g, m)?;
    let reps = floor_power(i, t)?;
    let mut out = Vec::with_capacity(2 * reps as usize + 2);
    out.extend([l.a_m, l.b_m]);
    for _ in 0..reps {
        out.extend([l.a_m, l.b_2]);
    }
    Ok(Word(out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeodesicKind {
    /// `⋯uuu⋯` through the basepoint.
    Periodic(Vec<Gen>),
    /// `⋯(a_m b_2)(a_m b_2) w_1 w_2 w_3⋯` with `vertex(0) = e`.
    GammaTm { m: u32, t: RationalExponent },
    /// The alternating line `⋯ v u | u v u ⋯` inside the support of a wall
    /// of type `ty`.
    SupportRay { ty: Gen, pair: (Gen, Gen) },
}

/// A unit-speed bi-infinite geodesic with integer-indexed vertices.
///
/// `vertex(n) = base · f_0 ⋯ f_{n-1}` for `n > 0` and
/// `vertex(-n) = base · g_0 ⋯ g_{n-1}` for the backward letters `g_k`.
#[derive(Clone, Debug)]
pub struct GeodesicSpec {
    kind: GeodesicKind,
    base: NormalForm,
    gamma: Option<(Gen, Gen, Gen)>,
}

impl GeodesicSpec {
    pub fn periodic(g: &DefiningGraph, word: &Word) -> Result<Self, ConstructionError> {
        if word.is_empty() {
            return Err(ConstructionError::NotGeodesic("empty period".into()));
        }
        // a repeated letter pair with only commuting letters between them fits
        // inside two periods, so checking `uu` covers the whole line
        let doubled = Word(word.0.iter().chain(word.0.iter()).copied().collect());
        if !g.is_geodesic_word(&doubled)? {
            return Err(ConstructionError::NotGeodesic(g.render(&word.0)));
        }
        Ok(GeodesicSpec {
            kind: GeodesicKind::Periodic(word.0.clone()),
            base: NormalForm::identity(g),
            gamma: None,
        })
    }

    pub fn gamma_tm(
        g: &DefiningGraph,
        m: u32,
        t: RationalExponent,
    ) -> Result<Self, ConstructionError> {
        let l = gamma_letters(g, m)?;
        Ok(GeodesicSpec {
            kind: GeodesicKind::GammaTm { m, t },
            base: NormalForm::identity(g),
            gamma: Some((l.a_m, l.b_m, l.b_2)),
        })
    }

    /// Alternating ray from `base` along the support of the wall of type `ty`,
    /// using the ShortLex-least non-commuting pair `u < v` of `link(ty)` and
    /// starting with `u`.
    pub fn support_ray(
        g: &DefiningGraph,
        ty: Gen,
        base: &NormalForm,
    ) -> Result<Self, ConstructionError> {
        let link: Vec<Gen> = g.link_set(ty).iter().collect();
        let pair = link
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| link[i + 1..].iter().map(move |&v| (u, v)))
            .find(|&(u, v)| !g.commute(u, v))
            .ok_or_else(|| {
                ConstructionError::UnsupportedSupport(format!(
                    "link of {} has no non-commuting pair",
                    g.name(ty)
                ))
            })?;
        Self::support_ray_with_pair(g, ty, pair, base)
    }

    pub fn support_ray_with_pair(
        g: &DefiningGraph,
        ty: Gen,
        pair: (Gen, Gen),
        base: &NormalForm,
    ) -> Result<Self, ConstructionError> {
        let (u, v) = pair;
        if base.graph_id() != g.id() {
            return Err(WordError::GraphMismatch.into());
        }
        if !g.commute(ty, u) || !g.commute(ty, v) {
            return Err(ConstructionError::UnsupportedSupport(format!(
                "{} and {} are not both in the link of {}",
                g.name(u),
                g.name(v),
                g.name(ty)
            )));
        }
        if u == v || g.commute(u, v) {
            return Err(ConstructionError::UnsupportedSupport(
                "support pair must not commute".into(),
            ));
        }
        Ok(GeodesicSpec {
            kind: GeodesicKind::SupportRay { ty, pair: (u, v) },
            base: base.clone(),
            gamma: None,
        })
    }

    pub fn kind(&self) -> &GeodesicKind {
        &self.kind
    }

    /// `vertex(0)`.
    pub fn basepoint(&self) -> &NormalForm {
        &self.base
    }

    /// Letters `f_0 … f_{n-1}` on the positive side.
    pub fn forward_letters(&self, n: usize) -> Vec<Gen> {
        match &self.kind {
            GeodesicKind::Periodic(u) => u.iter().copied().cycle().take(n).collect(),
            GeodesicKind::SupportRay { pair: (u, v), .. } => {
                [*u, *v].into_iter().cycle().take(n).collect()
            }
            GeodesicKind::GammaTm { t, .. } => {
                let (a_m, b_m, b_2) = self.gamma.expect("gamma letters");
                let mut out = Vec::with_capacity(n);
                let mut i = 1u64;
                while out.len() < n {
                    out.extend([a_m, b_m]);
                    let reps = floor_power(i, *t).expect("block length fits in memory");
                    for _ in 0..reps {
                        if out.len() >= n {
                            break;
                        }
                        out.extend([a_m, b_2]);
                    }
                    i += 1;
                }
                out.truncate(n);
                out
            }
        }
    }

    /// Letters `g_0 … g_{n-1}` on the negative side.
    pub fn backward_letters(&self, n: usize) -> Vec<Gen> {
        match &self.kind {
            GeodesicKind::Periodic(u) => u.iter().rev().copied().cycle().take(n).collect(),
            GeodesicKind::SupportRay { pair: (u, v), .. } => {
                [*v, *u].into_iter().cycle().take(n).collect()
            }
            GeodesicKind::GammaTm { .. } => {
                let (a_m, _, b_2) = self.gamma.expect("gamma letters");
                [b_2, a_m].into_iter().cycle().take(n).collect()
            }
        }
    }

    /// Group element at unit-speed parameter `n`.
    pub fn vertex(&self, g: &DefiningGraph, n: i64) -> NormalForm {
        let steps = n.unsigned_abs() as usize;
        let letters = if n >= 0 {
            self.forward_letters(steps)
        } else {
            self.backward_letters(steps)
        };
        let mut acc = self.base.clone().into_letters();
        for s in letters {
            push_letter(g, &mut acc, s);
        }
        NormalForm::from_normal_letters(g, acc)
    }

    /// Vertices at parameters `lo..=hi`, computed incrementally.
    pub fn vertices(&self, g: &DefiningGraph, lo: i64, hi: i64) -> Vec<NormalForm> {
        assert!(lo <= hi);
        let start = self.vertex(g, lo);
        let letters = self.segment_letters(lo, hi);
        let mut out = Vec::with_capacity(letters.len() + 1);
        let mut acc = start.into_letters();
        out.push(NormalForm::from_normal_letters(g, acc.clone()));
        for s in letters {
            push_letter(g, &mut acc, s);
            out.push(NormalForm::from_normal_letters(g, acc.clone()));
        }
        out
    }

    /// Label of the path from `vertex(lo)` to `vertex(hi)`, `lo <= hi`.
    pub fn segment_letters(&self, lo: i64, hi: i64) -> Vec<Gen> {
        assert!(lo <= hi);
        let mut out = Vec::with_capacity((hi - lo) as usize);
        if lo < 0 {
            let back = self.backward_letters(lo.unsigned_abs() as usize);
            let upto = if hi < 0 {
                hi.unsigned_abs() as usize
            } else {
                0
            };
            out.extend(back[upto..].iter().rev());
        }
        if hi > 0 {
            let fwd = self.forward_letters(hi as usize);
            let from = lo.max(0) as usize;
            out.extend(&fwd[from..]);
        }
        out
    }

    /// Stable human-readable label, free of commas so it can sit in a CSV cell.
    pub fn label(&self, g: &DefiningGraph) -> String {
        match &self.kind {
            GeodesicKind::Periodic(u) => format!("periodic({})", g.render(u)),
            GeodesicKind::GammaTm { m, t } => format!("gamma(m={m};t={t})"),
            GeodesicKind::SupportRay { ty, pair: (u, v) } => {
                let base = if self.base.is_identity() {
                    "e".to_string()
                } else {
                    g.render_nf(&self.base)
                };
                format!(
                    "support({};{} {};base={})",
                    g.name(*ty),
                    g.name(*u),
                    g.name(*v),
                    base
                )
            }
        }
    }

    /// The `t` of a gamma geodesic, if any.
    pub fn exponent(&self) -> Option<RationalExponent> {
        match self.kind {
            GeodesicKind::GammaTm { t, .. } => Some(t),
            _ => None,
        }
    }
}

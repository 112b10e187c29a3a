//! Divergence experiments in right-angled Coxeter groups.
//!
//! The crate covers defining graphs and their families, the word problem via
//! ShortLex normal forms, explicit geodesic constructions, avoidant
//! breadth-first search in the Cayley graph and the fitting of growth
//! exponents to the resulting samples.

pub mod analysis;
pub mod constructions;
pub mod dot;
pub mod explorer;
pub mod presentation;
pub mod words;

pub use analysis::{FitReport, SampleRow};
pub use constructions::{GeodesicKind, GeodesicSpec, RationalExponent};
pub use explorer::{AvoidStatus, AvoidantResult, DivergenceSample, RegionMode, SearchCaps};
pub use presentation::{build_gamma, build_omega, DefiningGraph, FamilyTag, Gen, GraphId};
pub use words::{NormalForm, WallId, Word};

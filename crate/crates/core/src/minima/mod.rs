//! Short vectors, successive minima, saturated sublattice search and automorphisms.

pub mod aut;
pub mod enumerate;
mod intdet;
pub mod lll;
pub mod search;

pub use aut::{automorphism_group, is_absolutely_irreducible};
pub use enumerate::{short_vectors, Enumerator, ShortVector, ShortVectorList, Which};
pub use search::{
    canonical_polygon_points, first_degree_z, max_slope, min_slope, successive_minima, successive_minima_sq,
    varsigma_estimate, CanonicalPolygon, PolygonPoint, SlopeCertificate, VarsigmaInterval,
};

/// Caps on enumeration work. Exceeding either one degrades results to lower bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_vectors: usize,
    pub max_subsets: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vectors: 200_000,
            max_subsets: 5_000_000,
        }
    }
}

pub const BUDGET_ENV: &str = "SLOPELAB_BUDGET";

impl Budget {
    /// Reads `SLOPELAB_BUDGET`, falling back to the defaults.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| Self::parse(&s))
            .unwrap_or_default()
    }

    /// Accepts `N` (both caps) or `vectors=N,subsets=M` in any order.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Ok(n) = s.parse::<u64>() {
            return Some(Budget {
                max_vectors: n as usize,
                max_subsets: n,
            });
        }
        let mut b = Budget::default();
        for part in s.split(',') {
            let (k, v) = part.split_once('=')?;
            let v: u64 = v.trim().parse().ok()?;
            match k.trim() {
                "vectors" => b.max_vectors = v as usize,
                "subsets" => b.max_subsets = v,
                _ => return None,
            }
        }
        Some(b)
    }
}

//! Buchberger's algorithm and the ideal operations built on it: membership,
//! radical membership, elimination, saturation and Krull dimension.

mod buchberger;
mod ideal;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use buchberger::{groebner_basis, normal_form, s_polynomial, GroebnerBasis};
pub use ideal::{
    elim_ideal, elim_ideal_by_name, ideal_dimension, ideal_member, is_unit_ideal, radical_member,
    saturate,
};

use crate::error::{Error, Result};
use crate::polycore::{PolyRing, Polynomial};

/// Generators of an ideal; zero generators are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGens {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
}

impl IdealGens {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self> {
        if gens.iter().any(|g| !PolyRing::same(g.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(IdealGens {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        IdealGens {
            ring: ring.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        IdealGens {
            ring: ring.clone(),
            gens: vec![Polynomial::one(ring)],
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The ideal sum `self + other`.
    pub fn sum(&self, other: &IdealGens) -> Result<IdealGens> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        IdealGens::new(&self.ring, gens)
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<IdealGens> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        IdealGens::new(&self.ring, gens)
    }

    /// Moves the generators into a ring containing all our variables.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<IdealGens> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.embed(target))
            .collect::<Result<Vec<_>>>()?;
        IdealGens::new(target, gens)
    }
}

impl fmt::Display for IdealGens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Counters shared by every computation run under one configuration.
#[derive(Debug, Default)]
pub struct GbStats {
    bases: AtomicU64,
    spairs: AtomicU64,
    prefilter_agree: AtomicU64,
    prefilter_disagree: AtomicU64,
    prefilter_skipped: AtomicU64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GbStatsSnapshot {
    pub bases: u64,
    pub spairs: u64,
    pub prefilter_agree: u64,
    pub prefilter_disagree: u64,
    pub prefilter_skipped: u64,
}

impl GbStats {
    pub(crate) fn record_basis(&self) {
        self.bases.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_spair(&self) {
        self.spairs.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_prefilter(&self, agreed: Option<bool>) {
        let c = match agreed {
            Some(true) => &self.prefilter_agree,
            Some(false) => &self.prefilter_disagree,
            None => &self.prefilter_skipped,
        };
        c.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> GbStatsSnapshot {
        GbStatsSnapshot {
            bases: self.bases.load(Ordering::Relaxed),
            spairs: self.spairs.load(Ordering::Relaxed),
            prefilter_agree: self.prefilter_agree.load(Ordering::Relaxed),
            prefilter_disagree: self.prefilter_disagree.load(Ordering::Relaxed),
            prefilter_skipped: self.prefilter_skipped.load(Ordering::Relaxed),
        }
    }
}

pub const DEFAULT_MAX_SPAIRS: u64 = 1_000_000;

/// Resource cap, optional prime-field prefilter for membership tests, and
/// statistics sink.
#[derive(Clone, Debug)]
pub struct GbConfig {
    pub max_spairs: u64,
    /// When set, memberships are also decided modulo this prime. The modular
    /// answer is advisory only: it is recorded in the statistics, never
    /// returned.
    pub prefilter: Option<u32>,
    pub stats: Arc<GbStats>,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_spairs: DEFAULT_MAX_SPAIRS,
            prefilter: None,
            stats: Arc::new(GbStats::default()),
        }
    }
}

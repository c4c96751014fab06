//! Sweeps over family parameter grids that check the spectral and APN
//! statements instance by instance and collect counterexamples.
//!
//! Every family sweep also runs the oracle triangle on each component: the
//! kernel dimension of the derived `(A, B)` system, the plateau level read
//! off the Walsh spectrum, and the linear-space dimension found by direct
//! evaluation must coincide.

mod analysis;
mod enumerative;
mod grids;
mod spectra;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilyParams;
use crate::vbf::{ComponentSelector, TableLimits};

pub use enumerative::{cube_curve_hypothesis, s_set, verify_cube_curve, verify_s_full};
pub use spectra::{
    butterfly_exceptional_offset, carlet11_degenerate_nonlinearity, verify_butterfly, verify_carlet11,
    verify_kernel_wht_agreement, verify_taniguchi_spectrum, verify_zhoupott,
};

/// Identifier of a verifiable statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    TaniguchiSpectrum,
    Carlet11,
    Zhoupott,
    CubeCurve,
    SFull,
    Butterfly,
    KernelWht,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::TaniguchiSpectrum,
        Claim::Carlet11,
        Claim::Zhoupott,
        Claim::CubeCurve,
        Claim::SFull,
        Claim::Butterfly,
        Claim::KernelWht,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Claim::TaniguchiSpectrum => "taniguchi-spectrum",
            Claim::Carlet11 => "carlet11",
            Claim::Zhoupott => "zhoupott",
            Claim::CubeCurve => "cube-curve",
            Claim::SFull => "s-full",
            Claim::Butterfly => "butterfly",
            Claim::KernelWht => "kernel-wht",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown claim {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Confirmed,
    Refuted,
    /// Failures occurred only where the argument's hypothesis does not hold.
    OutOfHypothesis,
}

/// A concrete instance on which a check failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<FamilyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<ComponentSelector>,
    pub reason: String,
}

impl Counterexample {
    pub(crate) fn instance(params: &FamilyParams, reason: impl Into<String>) -> Self {
        Self {
            m: params.field.m(),
            params: Some(params.clone()),
            component: None,
            reason: reason.into(),
        }
    }
}

/// Default number of counterexamples kept per finding; the totals are
/// always exact.
pub const MAX_RECORDED: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub claim: Claim,
    pub grid: String,
    pub seed: u64,
    pub status: Status,
    pub instances: u64,
    pub components: u64,
    pub refutation_count: u64,
    /// Components where kernel dimension, plateau level and linear-space
    /// dimension differ; included in `refutation_count`.
    pub triangle_disagreements: u64,
    pub counterexamples: Vec<Counterexample>,
    pub boundary_count: u64,
    pub boundary_cases: Vec<Counterexample>,
    pub notes: Vec<String>,
}

impl Finding {
    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }
}

/// Injected corruption used to check that the sweeps notice failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Flip output bit `bit` of the table at input `index` (both reduced modulo range).
    FlipTableBit { index: usize, bit: u32 },
    /// Add `delta` to the `X` coefficient of every derived `A`.
    PerturbCoefficient { delta: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub m_min: u32,
    pub m_max: u32,
    pub seed: u64,
    /// Tuples drawn per `(m, family)` when a grid is sampled.
    pub samples: usize,
    /// Grids up to this `m` are enumerated completely.
    pub exhaustive_max_m: u32,
    pub mutation: Option<Mutation>,
    pub limits: TableLimits,
    /// Counterexamples and boundary cases kept per finding.
    pub max_recorded: usize,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            m_min: 2,
            m_max: 4,
            seed: DEFAULT_SEED,
            samples: 200,
            exhaustive_max_m: 4,
            mutation: None,
            limits: TableLimits::default(),
            max_recorded: MAX_RECORDED,
        }
    }
}

impl VerifyConfig {
    pub fn range(m_min: u32, m_max: u32) -> Self {
        Self {
            m_min,
            m_max,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn recording(mut self, max_recorded: usize) -> Self {
        self.max_recorded = max_recorded;
        self
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = Some(mutation);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m_min < 2 || self.m_min > self.m_max {
            return Err(Error::InvalidParameters(format!(
                "m range {}..={} must be non-empty and start at 2 or above",
                self.m_min, self.m_max
            )));
        }
        for m in [self.m_min, self.m_max] {
            crate::gf2m::FieldSpec::new(m)?;
        }
        Ok(())
    }

    fn ms(&self) -> impl Iterator<Item = u32> {
        self.m_min..=self.m_max
    }
}

pub fn verify(claim: Claim, config: &VerifyConfig) -> Result<Finding> {
    match claim {
        Claim::TaniguchiSpectrum => verify_taniguchi_spectrum(config),
        Claim::Carlet11 => verify_carlet11(config),
        Claim::Zhoupott => verify_zhoupott(config),
        Claim::CubeCurve => verify_cube_curve(config),
        Claim::SFull => verify_s_full(config),
        Claim::Butterfly => verify_butterfly(config),
        Claim::KernelWht => verify_kernel_wht_agreement(config),
    }
}

/// Accumulates the pieces of a [`Finding`] in grid order.
pub(crate) struct FindingBuilder {
    claim: Claim,
    grid: String,
    seed: u64,
    max_recorded: usize,
    instances: u64,
    components: u64,
    refutation_count: u64,
    triangle_disagreements: u64,
    counterexamples: Vec<Counterexample>,
    boundary_count: u64,
    boundary_cases: Vec<Counterexample>,
    notes: Vec<String>,
}

impl FindingBuilder {
    pub(crate) fn new(claim: Claim, grid: impl Into<String>, config: &VerifyConfig) -> Self {
        Self {
            claim,
            grid: grid.into(),
            seed: config.seed,
            max_recorded: config.max_recorded,
            instances: 0,
            components: 0,
            refutation_count: 0,
            triangle_disagreements: 0,
            counterexamples: Vec::new(),
            boundary_count: 0,
            boundary_cases: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn instance(&mut self, components: u64) {
        self.instances += 1;
        self.components += components;
    }

    pub(crate) fn refute(&mut self, c: Counterexample) {
        self.refutation_count += 1;
        if self.counterexamples.len() < self.max_recorded {
            self.counterexamples.push(c);
        }
    }

    pub(crate) fn disagreement(&mut self, c: Counterexample) {
        self.triangle_disagreements += 1;
        self.refute(c);
    }

    pub(crate) fn boundary(&mut self, c: Counterexample) {
        self.boundary_count += 1;
        if self.boundary_cases.len() < self.max_recorded {
            self.boundary_cases.push(c);
        }
    }

    /// Routes a failure to the boundary list when the hypothesis does not hold.
    pub(crate) fn fail(&mut self, in_hypothesis: bool, c: Counterexample) {
        if in_hypothesis {
            self.refute(c)
        } else {
            self.boundary(c)
        }
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn finish(self) -> Finding {
        let status = if self.refutation_count > 0 {
            Status::Refuted
        } else if self.boundary_count > 0 {
            Status::OutOfHypothesis
        } else {
            Status::Confirmed
        };
        Finding {
            claim: self.claim,
            grid: self.grid,
            seed: self.seed,
            status,
            instances: self.instances,
            components: self.components,
            refutation_count: self.refutation_count,
            triangle_disagreements: self.triangle_disagreements,
            counterexamples: self.counterexamples,
            boundary_count: self.boundary_count,
            boundary_cases: self.boundary_cases,
            notes: self.notes,
        }
    }
}

//! Mechanized re-derivation of the congruences, vanishing statements and
//! identities behind the rationality results, over swept parameters.
//!
//! Every check returns a [`VerificationReport`] whose residual is the exact
//! surviving polynomial (empty on pass). "Twice a rational element" is not a
//! decidable predicate without base-field data; what is checked is the mod-4
//! identity that the argument reduces it to.

mod checks;
mod report;
mod sweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formal_coeffs::CoeffError;
use crate::quadric_chow::{subquadric_dim, ChowError, MiddleSquare, QuadricRing, SteenrodRule};
use crate::twisted_cycles::TwistedError;

pub use checks::{
    lemma_2_2_pushforward, lemma_2_2_target, verify_chern, verify_coefficient_sum,
    verify_degree_vanishing, verify_lemma_1_3, verify_lemma_2_2, verify_prop_2_1,
    verify_theorem_1_1, verify_theorem_2_4, verify_wu_consistency,
};
pub use report::{
    render_json, render_markdown, CheckKind, ResidualTerm, Status, VerificationReport,
};
pub use sweep::{sweep, SweepConfig, SweepSummary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("side condition failed: {0}")]
    SideCondition(String),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Deliberate breakage used to show that the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mutation {
    /// Complement the parity of `binom(k, a)` in `S^a(h^k)` for `a >= 1`.
    FlippedBinomial,
    /// Build the `B` block of the vanishing lemma from the `h x y` part of the
    /// generic cycle instead of the `l x z` part.
    SwappedKunnethBlock,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct HarnessOptions {
    pub middle_square: MiddleSquare,
    pub mutation: Option<Mutation>,
    /// Seeds the names of the opaque lift-error symbols.
    pub gamma_seed: u64,
}

impl HarnessOptions {
    pub fn with_middle_square(self, middle_square: MiddleSquare) -> Self {
        Self {
            middle_square,
            ..self
        }
    }

    pub fn with_mutation(self, mutation: Option<Mutation>) -> Self {
        Self { mutation, ..self }
    }

    pub fn with_gamma_seed(self, gamma_seed: u64) -> Self {
        Self { gamma_seed, ..self }
    }

    pub(crate) fn steenrod_rule(&self) -> SteenrodRule {
        match self.mutation {
            Some(Mutation::FlippedBinomial) => SteenrodRule::FlippedHyperplaneBinomial,
            _ => SteenrodRule::Standard,
        }
    }

    pub(crate) fn ring(&self, n: u32) -> Result<QuadricRing, ChowError> {
        Ok(QuadricRing::new(n)?.with_middle_square(self.middle_square))
    }
}

/// `(n, m, j)` together with the subquadric data `n = 2^t - 1 + s`, `d = 2^t - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamTuple {
    pub n: u32,
    pub m: u32,
    pub j: u32,
    pub t: u32,
    pub d: u32,
}

impl ParamTuple {
    pub fn new(n: u32, m: u32, j: u32) -> Result<Self, HarnessError> {
        if n == 0 {
            return Err(HarnessError::Precondition("n >= 1".into()));
        }
        if j > m {
            return Err(HarnessError::Precondition(format!(
                "j <= m (got j={j}, m={m}); otherwise S^j(y) = 0"
            )));
        }
        let sub = subquadric_dim(n)?;
        Ok(Self {
            n,
            m,
            j,
            t: sub.t,
            d: sub.d,
        })
    }

    /// `s` in `n = 2^t - 1 + s`.
    pub fn s_remainder(&self) -> u32 {
        self.n - self.d
    }

    /// `m < n/2 + j`
    pub fn theorem_1_1_admissible(&self) -> bool {
        2 * self.m < self.n + 2 * self.j
    }

    /// `m = [(n+1)/2] + j`
    pub fn proposition_2_1_admissible(&self) -> bool {
        self.m == self.n.div_ceil(2) + self.j
    }
}

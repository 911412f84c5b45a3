use serde::{Deserialize, Serialize};

use crate::mass::MassReport;

/// Mass of the forced index set for one constant `K`, up to `depth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcedMass {
    pub depth: u64,
    pub k: u64,
    pub mass: MassReport,
    /// The mass is strictly larger than `k`.
    pub exceeds_k: bool,
}

/// Outcome of a sequence-relation query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EquivVerdict<W> {
    Equivalent {
        k: u64,
        witness: W,
    },
    NotEquivalent {
        /// Forced masses at increasing depths; nondecreasing.
        certificate: Vec<ForcedMass>,
        reason: String,
    },
    Inconclusive {
        depth: u64,
        /// Smallest constant passing every check up to `depth`, if any.
        #[serde(skip_serializing_if = "Option::is_none")]
        smallest_passing_k: Option<u64>,
        note: String,
    },
}

impl<W> EquivVerdict<W> {
    pub fn kind(&self) -> VerdictKind {
        match self {
            EquivVerdict::Equivalent { .. } => VerdictKind::Equivalent,
            EquivVerdict::NotEquivalent { .. } => VerdictKind::NotEquivalent,
            EquivVerdict::Inconclusive { .. } => VerdictKind::Inconclusive,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        self.kind() == VerdictKind::Equivalent
    }

    pub fn constant(&self) -> Option<u64> {
        match self {
            EquivVerdict::Equivalent { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            EquivVerdict::Equivalent { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Equivalent,
    NotEquivalent,
    Inconclusive,
}

/// True when the forced masses never decrease along the certificate.
pub fn certificate_is_monotone(cert: &[ForcedMass]) -> bool {
    cert.windows(2).all(|w| w[0].depth <= w[1].depth && w[0].mass.approx <= w[1].mass.approx)
}

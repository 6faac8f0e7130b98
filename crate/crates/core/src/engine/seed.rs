//! Deterministic, collision-resistant seed derivation: every component of a
//! run draws from its own stream, so adding or removing an agent never
//! perturbs the randomness of the others.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Derives a 32-byte child seed from the master seed, a role label and an
/// index.
pub fn derive_seed(master: u64, role: &str, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update([role.len() as u8]);
    hasher.update(role.as_bytes());
    hasher.update(index.to_le_bytes());
    hasher.finalize().into()
}

/// A deterministic generator for one component of a run.
pub fn derive_rng(master: u64, role: &str, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::from_seed(derive_seed(master, role, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn derivation_is_deterministic() {
        assert_eq!(derive_seed(7, "agent", 3), derive_seed(7, "agent", 3));
    }

    #[test]
    fn roles_and_indices_separate_streams() {
        let mut seen = HashSet::new();
        for master in 0..10u64 {
            for role in ["process", "predictor", "agent"] {
                for index in 0..340u64 {
                    assert!(
                        seen.insert(derive_seed(master, role, index)),
                        "collision at ({master}, {role}, {index})"
                    );
                }
            }
        }
        assert!(seen.len() >= 10_000);
    }

    #[test]
    fn other_agents_streams_are_stable_under_removal() {
        // The stream of agent 1 does not depend on whether agent 3 exists:
        // derivation is per-index, not positional over a live agent list.
        let before = derive_seed(42, "predictor", 1);
        let after = derive_seed(42, "predictor", 1);
        assert_eq!(before, after);
    }
}

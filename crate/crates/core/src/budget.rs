use crate::error::{Error, Result};

/// Desk-scale resource limits. Exceeding one is an error, never a silent
/// truncation.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Cap on the number of atoms in an atom table.
    pub max_atoms: u64,
    /// Cap on the number of terms a term set or universe level may hold.
    pub max_terms: u64,
    /// Cap on the number of substitutions enumerated per open formula.
    pub max_substitutions: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_atoms: 20_000, max_substitutions: 5_000_000, max_terms: 100_000 }
    }
}

impl Budget {
    pub fn check(&self, what: &'static str, need: u64) -> Result<()> {
        let limit = match what {
            "atoms" => self.max_atoms,
            "terms" => self.max_terms,
            "substitutions" => self.max_substitutions,
            _ => u64::MAX,
        };
        if need > limit {
            Err(Error::BudgetExceeded { what, need, limit })
        } else {
            Ok(())
        }
    }
}

/// Hard cap for the exhaustive evaluation search; above this the brute mode
/// refuses to run.
pub const BRUTE_ATOM_CAP: usize = 24;

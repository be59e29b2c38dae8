//! Seeded uniform random 3-SAT instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Clause, Formula, Literal};

/// Each clause draws three distinct variables uniformly and a uniform sign for each.
pub fn generate_random_3sat(n_vars: usize, n_clauses: usize, seed: u64) -> Result<Formula> {
    if n_vars < 3 {
        return Err(Error::InvalidParams(format!(
            "random 3-SAT needs at least 3 variables, got {n_vars}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..n_clauses)
        .map(|_| {
            let lits = sample(&mut rng, n_vars, 3)
                .into_iter()
                .map(|i| Literal::new(i + 1, rng.random::<bool>()))
                .collect();
            Clause::new(lits)
        })
        .collect::<Result<Vec<_>>>()?;
    Formula::new(n_vars, clauses)
}

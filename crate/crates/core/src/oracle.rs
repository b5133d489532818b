//! Exhaustive search over all M-type allocations of a small target.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::Target;
use crate::error::{Error, Result};
use crate::metrics;
use crate::quantize::{MTypeApprox, Method};

/// Largest number of compositions the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Variational distance.
    Vd,
    /// Informational divergence `D(p || t)`.
    Id,
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vd" => Ok(Criterion::Vd),
            "id" => Ok(Criterion::Id),
            _ => Err(Error::InvalidParameter(format!("unknown criterion {s:?}"))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Vd => "vd",
            Criterion::Id => "id",
        })
    }
}

/// `C(m + n - 1, n - 1)`, saturating at `u128::MAX`.
pub fn compositions(m: u64, n: usize) -> u128 {
    if n == 0 {
        return u128::from(m == 0);
    }
    let k = (n - 1) as u128;
    let total = u128::from(m) + k;
    let k = k.min(total - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (total - i) / (i + 1) stays an integer at every step
        acc = match acc.checked_mul(total - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Minimizes `criterion` over every allocation of `m` units to the target's
/// materialized entries. Among equal values the lexicographically largest
/// allocation (most mass on the first entry) wins.
pub fn oracle_min(target: &Target, m: u64, criterion: Criterion) -> Result<(MTypeApprox, f64)> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    let n = target.n();
    let count = compositions(m, n);
    if count > ORACLE_LIMIT {
        return Err(Error::OracleGuard {
            compositions: count,
            limit: ORACLE_LIMIT,
        });
    }

    let objective = |counts: &[u64]| -> Result<f64> {
        match criterion {
            Criterion::Vd => metrics::l1_distance(counts, m, target.probs(), target.tail_mass()),
            Criterion::Id => metrics::kl_divergence(counts, m, target.probs()),
        }
    };

    let mut counts = vec![0u64; n];
    let mut best: Option<(Vec<u64>, f64)> = None;
    search(&mut counts, 0, m, &mut |c| {
        let value = objective(c)?;
        if best.as_ref().is_none_or(|(_, v)| value < *v) {
            best = Some((c.to_vec(), value));
        }
        Ok(())
    })?;

    let (counts, value) = best.expect("at least one composition exists");
    let method = match criterion {
        Criterion::Vd => Method::OracleVd,
        Criterion::Id => Method::OracleId,
    };
    Ok((MTypeApprox::new(m, counts, method)?, value))
}

// Visits compositions in lexicographically decreasing order.
fn search<F>(counts: &mut [u64], slot: usize, remaining: u64, visit: &mut F) -> Result<()>
where
    F: FnMut(&[u64]) -> Result<()>,
{
    if slot + 1 == counts.len() {
        counts[slot] = remaining;
        visit(counts)?;
        counts[slot] = 0;
        return Ok(());
    }
    for c in (0..=remaining).rev() {
        counts[slot] = c;
        search(counts, slot + 1, remaining - c, visit)?;
    }
    counts[slot] = 0;
    Ok(())
}

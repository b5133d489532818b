//! Optimal M-type quantizers.
//!
//! [`quantize_vd`] minimizes the variational distance by flooring `M t_i` and
//! handing the leftover units to the largest rounding errors.
//! [`quantize_id`] minimizes `D(p || t)` by greedily adding one unit at a time
//! wherever the increment cost [`increment_cost`] is smallest. Both break ties
//! toward the smaller index.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distribution::{Target, SUM_TOLERANCE};
use crate::error::{Error, Result};

/// `M t_i` within this distance of an integer is treated as that integer.
pub const SNAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Variational-distance optimal.
    Vd,
    /// Informational-divergence optimal.
    Id,
    OracleVd,
    OracleId,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Vd => "vd",
            Method::Id => "id",
            Method::OracleVd => "oracle_vd",
            Method::OracleId => "oracle_id",
        })
    }
}

/// An M-type distribution `counts[i] / M` over a target's materialized prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MTypeApprox {
    m: u64,
    counts: Vec<u64>,
    method: Method,
}

impl MTypeApprox {
    pub fn new(m: u64, counts: Vec<u64>, method: Method) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroM);
        }
        let total: u64 = counts.iter().sum();
        if total != m {
            return Err(Error::Invariant(format!(
                "counts sum to {total}, expected {m}"
            )));
        }
        Ok(MTypeApprox { m, counts, method })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of indices with a positive count.
    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.m as f64
    }

    pub fn probs(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| self.prob(i)).collect()
    }

    /// Checks the structural guarantees both quantizers give: matching index
    /// space, mass only on positive target entries, and support confined to
    /// the largest entries.
    pub fn check_against(&self, target: &Target) -> Result<()> {
        if self.counts.len() != target.n() {
            return Err(Error::LengthMismatch {
                approx: self.counts.len(),
                target: target.n(),
            });
        }
        if let Some(index) = violates_prefix_support(&self.counts, target.probs()) {
            return Err(Error::Invariant(format!(
                "index {index} gets mass although a larger target entry gets none"
            )));
        }
        if self.support_size() > target.n().min(self.m as usize) {
            return Err(Error::Invariant("support larger than min(n, M)".into()));
        }
        Ok(())
    }
}

/// Returns an index `j` with `counts[j] > 0` while some `i` with
/// `probs[i] > probs[j]` has `counts[i] == 0`.
pub fn violates_prefix_support(counts: &[u64], probs: &[f64]) -> Option<usize> {
    let largest_empty = counts
        .iter()
        .zip(probs)
        .filter(|(&c, _)| c == 0)
        .map(|(_, &p)| p)
        .fold(f64::NEG_INFINITY, f64::max);
    counts
        .iter()
        .zip(probs)
        .position(|(&c, &p)| c > 0 && p < largest_empty)
}

/// Increment cost `k ln k - (k-1) ln(k-1) + ln(1/t_i)` of raising a count from
/// `k - 1` to `k`, in nats, with `0 ln 0 = 0`.
pub fn increment_cost(t_i: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "increment index k must be at least 1".into(),
        ));
    }
    if !(t_i > 0.0 && t_i <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "probability {t_i} not in (0, 1]"
        )));
    }
    Ok(delta(k, (1.0 / t_i).ln()))
}

fn xlnx(k: u64) -> f64 {
    if k <= 1 {
        0.0
    } else {
        let k = k as f64;
        k * k.ln()
    }
}

// Every cost goes through this one expression so that mathematically equal
// costs compare equal.
#[inline]
fn delta(k: u64, ln_inv_t: f64) -> f64 {
    xlnx(k) - xlnx(k - 1) + ln_inv_t
}

/// Variational-distance optimal M-type approximation of `target`.
pub fn quantize_vd(target: &Target, m: u64) -> Result<MTypeApprox> {
    let counts = largest_remainder(target.probs(), m)?;
    MTypeApprox::new(m, counts, Method::Vd)
}

/// Distributes exactly `m` units over a (sub-)probability vector.
///
/// Each entry first receives `floor(m w_i)`; the remaining units go one at a
/// time to the entry with the largest error `w_i - c_i / m`, smallest index
/// first. For a probability vector every entry gets at most one extra unit.
/// For a sub-probability vector the leftover may exceed the length, in which
/// case whole rounds of one unit per entry are handed out first.
pub fn largest_remainder(weights: &[f64], m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    if weights.is_empty() {
        return Err(Error::Empty);
    }
    let mut sum = 0.0;
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::Negative { index, value });
        }
        sum += value;
    }
    if sum > 1.0 + SUM_TOLERANCE {
        return Err(Error::MassExceeded { sum });
    }

    let scale = m as f64;
    let mut counts = Vec::with_capacity(weights.len());
    // fractional parts m w_i - floor(m w_i), i.e. the errors scaled by m
    let mut fracs = Vec::with_capacity(weights.len());
    for &w in weights {
        let mut x = scale * w;
        let nearest = x.round();
        if (x - nearest).abs() <= SNAP_TOLERANCE {
            x = nearest;
        }
        let floor = x.floor();
        counts.push(floor as u64);
        fracs.push(x - floor);
    }

    let assigned: u64 = counts.iter().sum();
    let rest = m.checked_sub(assigned).ok_or_else(|| {
        Error::Invariant(format!("floors assign {assigned} units, more than M = {m}"))
    })?;
    let n = weights.len() as u64;
    let rounds = rest / n;
    let extra = (rest % n) as usize;
    if rounds > 0 {
        counts.iter_mut().for_each(|c| *c += rounds);
    }
    if extra > 0 {
        let by_error =
            |&a: &usize, &b: &usize| -> Ordering { fracs[b].total_cmp(&fracs[a]).then(a.cmp(&b)) };
        let mut order: Vec<usize> = (0..weights.len()).collect();
        if extra < order.len() {
            order.select_nth_unstable_by(extra - 1, by_error);
        }
        for &i in &order[..extra] {
            counts[i] += 1;
        }
    }
    Ok(counts)
}

/// The increment order of the divergence-optimal greedy allocation.
///
/// The first `m` entries of `order` form the optimal m-type allocation for
/// every `m` up to the full length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementTrace {
    /// Number of slots of the allocation (the target's materialized length).
    slots: usize,
    order: Vec<usize>,
    /// Increment cost paid at each step, nats.
    costs: Vec<f64>,
}

impl IncrementTrace {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Total number of steps, i.e. the `M` of the run that produced it.
    pub fn m(&self) -> u64 {
        self.order.len() as u64
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    cost: f64,
    index: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.index.cmp(&other.index))
    }
}

/// Divergence-optimal M-type approximation and its increment trace.
pub fn quantize_id(target: &Target, m: u64) -> Result<(MTypeApprox, IncrementTrace)> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    let probs = target.probs();
    // the optimal support is a prefix of at most m entries
    let candidates = probs.len().min(usize::try_from(m).unwrap_or(usize::MAX));
    let ln_inv: Vec<f64> = probs[..candidates]
        .iter()
        .map(|&t| (1.0 / t).ln())
        .collect();

    let mut counts = vec![0u64; probs.len()];
    let mut heap: BinaryHeap<Reverse<Candidate>> = ln_inv
        .iter()
        .enumerate()
        .map(|(index, &l)| {
            Reverse(Candidate {
                cost: delta(1, l),
                index,
            })
        })
        .collect();
    let steps = usize::try_from(m).map_err(|_| Error::InvalidParameter("M too large".into()))?;
    let mut order = Vec::with_capacity(steps);
    let mut costs = Vec::with_capacity(steps);

    for _ in 0..steps {
        let Reverse(best) = heap.pop().expect("heap holds one entry per candidate");
        let c = &mut counts[best.index];
        *c += 1;
        order.push(best.index);
        costs.push(best.cost);
        heap.push(Reverse(Candidate {
            cost: delta(*c + 1, ln_inv[best.index]),
            index: best.index,
        }));
    }

    let approx = MTypeApprox::new(m, counts, Method::Id)?;
    Ok((
        approx,
        IncrementTrace {
            slots: probs.len(),
            order,
            costs,
        },
    ))
}

/// The optimal m-type allocation read off the first `m` trace steps.
pub fn prefix_allocation(trace: &IncrementTrace, m: u64) -> Result<MTypeApprox> {
    if m == 0 || m > trace.m() {
        return Err(Error::PrefixOutOfRange { m, len: trace.m() });
    }
    let mut counts = vec![0u64; trace.slots];
    for &i in &trace.order[..m as usize] {
        counts[i] += 1;
    }
    MTypeApprox::new(m, counts, Method::Id)
}

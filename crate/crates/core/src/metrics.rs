//! Distances and divergences between an M-type approximation and its target.
//!
//! The approximation is zero beyond the target's materialized prefix, so the
//! target's tail adds `tail_mass` to the L1 distance and to chi-square, adds
//! nothing to `D(p || t)`, and makes `D(t || p)` infinite.
//!
//! All divergences are in nats; [`Base`] converts for display.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::Target;
use crate::error::{Error, Result};
use crate::quantize::MTypeApprox;

/// Logarithm base used when presenting divergences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    #[default]
    Bits,
    Nats,
}

impl Base {
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            Base::Bits => nats / std::f64::consts::LN_2,
            Base::Nats => nats,
        }
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(Base::Bits),
            "nats" => Ok(Base::Nats),
            _ => Err(Error::InvalidParameter(format!("unknown base {s:?}"))),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Bits => "bits",
            Base::Nats => "nats",
        })
    }
}

/// A divergence value, stored in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Divergence {
    nats: f64,
}

impl Divergence {
    pub fn from_nats(nats: f64) -> Self {
        Divergence { nats }
    }

    pub fn nats(self) -> f64 {
        self.nats
    }

    pub fn bits(self) -> f64 {
        Base::Bits.from_nats(self.nats)
    }

    pub fn in_base(self, base: Base) -> f64 {
        base.from_nats(self.nats)
    }

    pub fn is_infinite(self) -> bool {
        self.nats.is_infinite()
    }
}

fn check_len(counts: &[u64], probs: &[f64]) -> Result<()> {
    if counts.len() != probs.len() {
        return Err(Error::LengthMismatch {
            approx: counts.len(),
            target: probs.len(),
        });
    }
    Ok(())
}

fn check_support(counts: &[u64], probs: &[f64]) -> Result<()> {
    check_len(counts, probs)?;
    match counts
        .iter()
        .zip(probs)
        .position(|(&c, &t)| c > 0 && t <= 0.0)
    {
        Some(index) => Err(Error::SupportViolation { index }),
        None => Ok(()),
    }
}

/// `sum_i |t_i - c_i / m| + tail_mass`.
pub fn l1_distance(counts: &[u64], m: u64, probs: &[f64], tail_mass: f64) -> Result<f64> {
    check_len(counts, probs)?;
    let scale = m as f64;
    let body: f64 = counts
        .iter()
        .zip(probs)
        .map(|(&c, &t)| (t - c as f64 / scale).abs())
        .sum();
    Ok(body + tail_mass)
}

/// `sum_{c_i > 0} p_i ln(p_i / t_i)` with `p_i = c_i / m`, nats. Rounding
/// noise below zero is clamped.
pub fn kl_divergence(counts: &[u64], m: u64, probs: &[f64]) -> Result<f64> {
    check_support(counts, probs)?;
    let scale = m as f64;
    let total: f64 = counts
        .iter()
        .zip(probs)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, &t)| {
            let p = c as f64 / scale;
            p * (p / t).ln()
        })
        .sum();
    Ok(total.max(0.0))
}

/// `max_{c_i > 0} p_i / t_i`.
pub fn max_ratio(counts: &[u64], m: u64, probs: &[f64]) -> Result<f64> {
    check_support(counts, probs)?;
    let scale = m as f64;
    Ok(counts
        .iter()
        .zip(probs)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, &t)| c as f64 / scale / t)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Pearson chi-square `sum_i (p_i - t_i)^2 / t_i + tail_mass`.
pub fn chi_square_counts(counts: &[u64], m: u64, probs: &[f64], tail_mass: f64) -> Result<f64> {
    check_support(counts, probs)?;
    let scale = m as f64;
    let body: f64 = counts
        .iter()
        .zip(probs)
        .filter(|(_, &t)| t > 0.0)
        .map(|(&c, &t)| {
            let d = c as f64 / scale - t;
            d * d / t
        })
        .sum();
    Ok(body + tail_mass)
}

/// `(1/2) (r ln r / (r - 1)) l1`, with the `r -> 1` limit `l1 / 2`.
pub fn reverse_pinsker(ratio: f64, l1: f64) -> f64 {
    let factor = if ratio <= 1.0 {
        1.0
    } else {
        let excess = ratio - 1.0;
        ratio * excess.ln_1p() / excess
    };
    0.5 * factor * l1
}

pub fn variational_distance(p: &MTypeApprox, t: &Target) -> Result<f64> {
    l1_distance(p.counts(), p.m(), t.probs(), t.tail_mass())
}

/// `D(p || t)`, expectation under the approximation.
pub fn informational_divergence(p: &MTypeApprox, t: &Target) -> Result<Divergence> {
    kl_divergence(p.counts(), p.m(), t.probs()).map(Divergence::from_nats)
}

/// `D(t || p)`, expectation under the target. Infinite whenever the target
/// has mass where `p` has none, in particular for any nonzero tail.
pub fn reverse_divergence(t: &Target, p: &MTypeApprox) -> Result<Divergence> {
    check_len(p.counts(), t.probs())?;
    if t.tail_mass() > 0.0 {
        return Ok(Divergence::from_nats(f64::INFINITY));
    }
    let scale = p.m() as f64;
    let mut total = 0.0;
    for (&c, &ti) in p.counts().iter().zip(t.probs()) {
        if ti > 0.0 {
            if c == 0 {
                return Ok(Divergence::from_nats(f64::INFINITY));
            }
            total += ti * (ti / (c as f64 / scale)).ln();
        }
    }
    Ok(Divergence::from_nats(total))
}

/// `sqrt(2 D(p || t))`, an upper bound on the variational distance.
pub fn pinsker_floor(p: &MTypeApprox, t: &Target) -> Result<f64> {
    Ok((2.0 * informational_divergence(p, t)?.nats()).sqrt())
}

/// Distribution-dependent upper bound on `D(p || t)` through the largest
/// ratio `r = max p_i / t_i`.
pub fn reverse_pinsker_bound(p: &MTypeApprox, t: &Target) -> Result<f64> {
    let r = max_ratio(p.counts(), p.m(), t.probs())?;
    Ok(reverse_pinsker(r, variational_distance(p, t)?))
}

pub fn chi_square(p: &MTypeApprox, t: &Target) -> Result<f64> {
    chi_square_counts(p.counts(), p.m(), t.probs(), t.tail_mass())
}

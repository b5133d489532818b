//! Target distributions: validation, ordering, named families and tail masses.
//!
//! A [`Target`] always holds its materialized entries in non-increasing order
//! with zero entries removed. Infinite-support families are cut after a prefix
//! whose length depends on the precision `M` they will be quantized at; the
//! mass beyond that prefix is kept as `tail_mass`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `sum(probs) + tail_mass = 1`.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Upper limit on the number of entries a family may materialize.
pub const MAX_MATERIALIZED: usize = 1 << 22;

/// Parametric distribution families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// Caller-supplied finite distribution.
    Explicit { values: Vec<f64> },
    /// `n` equal masses.
    Uniform { n: usize },
    /// `t_i = (1 - ratio) ratio^(i-1)` for `i >= 1`.
    Geometric { ratio: f64 },
    /// `t_i = rho B(i, rho + 1)` for `i >= 1`.
    YuleSimon { rho: f64 },
    /// Geometric masses `2^-i` where block `i` is split into
    /// `2^(2^i - i - 1)` equal entries of `2^(1 - 2^i)`. The
    /// variational-distance-optimal approximation at `M = 2^(2^i - 1)` has a
    /// divergence of exactly one bit for every `i`. `blocks` is the number of
    /// leading blocks that are always materialized in full.
    Adversarial { blocks: u32 },
}

impl FamilyKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilyKind::Explicit { ref values } if values.is_empty() => Err(Error::Empty),
            FamilyKind::Explicit { .. } => Ok(()),
            FamilyKind::Uniform { n: 0 } => Err(Error::InvalidParameter(
                "uniform: n must be at least 1".into(),
            )),
            FamilyKind::Uniform { .. } => Ok(()),
            FamilyKind::Geometric { ratio } if !(ratio > 0.0 && ratio < 1.0) => Err(
                Error::InvalidParameter(format!("geometric: ratio {ratio} not in (0, 1)")),
            ),
            FamilyKind::Geometric { .. } => Ok(()),
            FamilyKind::YuleSimon { rho } if !(rho > 0.0 && rho.is_finite()) => Err(
                Error::InvalidParameter(format!("yule-simon: rho {rho} must be positive")),
            ),
            FamilyKind::YuleSimon { .. } => Ok(()),
            FamilyKind::Adversarial { blocks: 0 } => Err(Error::InvalidParameter(
                "adversarial: block count must be at least 1".into(),
            )),
            FamilyKind::Adversarial { .. } => Ok(()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            FamilyKind::Explicit { .. } | FamilyKind::Uniform { .. }
        )
    }
}

/// Shorthand `name:param`, e.g. `yule-simon:0.2`, `uniform:4`,
/// `geometric:0.5`, `adversarial:3`.
impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((name, param)) => (name.trim(), Some(param.trim())),
            None => (s.trim(), None),
        };
        let bad = |what: &str| Error::InvalidParameter(format!("{name}: cannot parse {what:?}"));
        let real = |p: Option<&str>| -> Result<f64> {
            let p =
                p.ok_or_else(|| Error::InvalidParameter(format!("{name}: missing parameter")))?;
            p.parse::<f64>().map_err(|_| bad(p))
        };
        let kind = match name.to_ascii_lowercase().replace('_', "-").as_str() {
            "uniform" => {
                let p =
                    param.ok_or_else(|| Error::InvalidParameter("uniform: missing n".into()))?;
                FamilyKind::Uniform {
                    n: p.parse().map_err(|_| bad(p))?,
                }
            }
            "geometric" => FamilyKind::Geometric {
                ratio: real(param)?,
            },
            "yule-simon" | "yulesimon" => FamilyKind::YuleSimon { rho: real(param)? },
            "adversarial" | "adversarial-ex9" => {
                let blocks = match param {
                    Some(p) => p.parse().map_err(|_| bad(p))?,
                    None => 1,
                };
                FamilyKind::Adversarial { blocks }
            }
            _ => return Err(Error::InvalidParameter(format!("unknown family {name:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Explicit { values } => write!(f, "explicit[{}]", values.len()),
            FamilyKind::Uniform { n } => write!(f, "uniform:{n}"),
            FamilyKind::Geometric { ratio } => write!(f, "geometric:{ratio}"),
            FamilyKind::YuleSimon { rho } => write!(f, "yule-simon:{rho}"),
            FamilyKind::Adversarial { blocks } => write!(f, "adversarial:{blocks}"),
        }
    }
}

/// How many entries of an infinite family to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// `2 * M_hint` entries. Both quantizers only ever touch indices below
    /// this when the target is ordered.
    TwiceM,
    /// `max(2 * M_hint, len)` entries.
    AtLeast(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub truncation: Truncation,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            truncation: Truncation::TwiceM,
        }
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    fn prefix_len(&self, m_hint: u64) -> Result<usize> {
        let twice = m_hint.saturating_mul(2);
        let len = match self.truncation {
            Truncation::TwiceM => twice,
            Truncation::AtLeast(0) => {
                return Err(Error::InvalidParameter(
                    "truncation length must be at least 1".into(),
                ))
            }
            Truncation::AtLeast(len) => twice.max(len as u64),
        };
        if len > MAX_MATERIALIZED as u64 {
            return Err(Error::TruncationOverflow {
                len: usize::try_from(len).unwrap_or(usize::MAX),
                limit: MAX_MATERIALIZED,
            });
        }
        Ok(len as usize)
    }
}

/// An ordered target distribution, possibly the prefix of an infinite one.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    probs: Vec<f64>,
    tail_mass: f64,
    original_order: Vec<usize>,
    input_len: usize,
    finite: bool,
    family: Option<FamilyKind>,
}

impl Target {
    /// Materialized entries, non-increasing and strictly positive.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Mass beyond the materialized prefix.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `original_order[i]` is the input position of sorted entry `i` (0-based).
    pub fn original_order(&self) -> &[usize] {
        &self.original_order
    }

    /// Number of materialized (positive) entries.
    pub fn n(&self) -> usize {
        self.probs.len()
    }

    /// Length of the caller's input, zeros included.
    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Support size of the full distribution, `None` when infinite.
    pub fn support_size(&self) -> Option<usize> {
        self.finite.then_some(self.probs.len())
    }

    pub fn family(&self) -> Option<&FamilyKind> {
        self.family.as_ref()
    }

    /// Largest entry `t_1`.
    pub fn largest(&self) -> f64 {
        self.probs[0]
    }

    /// Smallest materialized entry.
    pub fn smallest(&self) -> f64 {
        *self.probs.last().expect("target is never empty")
    }

    /// `T_k = sum_{i > k} t_i`, counting the tail beyond the prefix.
    ///
    /// Evaluated as a suffix sum so small tails keep their relative accuracy.
    /// `T_0 = 1` and the result is non-increasing in `k`.
    pub fn tail_mass_at(&self, k: usize) -> Result<f64> {
        if k > self.probs.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.probs.len(),
            });
        }
        if k == 0 {
            return Ok(1.0);
        }
        let suffix = self.probs[k..]
            .iter()
            .rev()
            .fold(self.tail_mass, |acc, &p| acc + p);
        Ok(suffix.min(1.0))
    }

    /// Maps counts over the sorted prefix back onto the caller's index order,
    /// re-inserting zeros for stripped entries.
    pub fn expand_counts(&self, counts: &[u64]) -> Result<Vec<u64>> {
        if counts.len() != self.probs.len() {
            return Err(Error::LengthMismatch {
                approx: counts.len(),
                target: self.probs.len(),
            });
        }
        let mut out = vec![0; self.input_len];
        for (&c, &orig) in counts.iter().zip(&self.original_order) {
            out[orig] = c;
        }
        Ok(out)
    }

    fn check_mass(&self) -> Result<()> {
        let total: f64 = self.probs.iter().sum::<f64>() + self.tail_mass;
        if (total - 1.0).abs() > SUM_TOLERANCE || self.tail_mass < 0.0 {
            return Err(Error::Invariant(format!(
                "materialized mass {total} with tail {} does not sum to 1",
                self.tail_mass
            )));
        }
        Ok(())
    }
}

/// Builds a finite target from raw values.
///
/// Values are sorted in non-increasing order (stable, so equal values keep
/// their input order) and zeros are dropped. With `normalize` off the values
/// must already sum to one within [`SUM_TOLERANCE`].
pub fn make_target(values: &[f64], normalize: bool) -> Result<Target> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::Negative { index, value });
        }
    }
    let sum: f64 = values.iter().sum();
    if sum <= 0.0 {
        return Err(Error::NoMass);
    }
    let scale = if normalize {
        1.0 / sum
    } else if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::NotNormalized {
            sum,
            tolerance: SUM_TOLERANCE,
        });
    } else {
        1.0
    };

    let mut entries: Vec<(f64, usize)> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, &v)| (if normalize { v * scale } else { v }, i))
        .collect();
    entries.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (probs, original_order) = entries.into_iter().unzip();

    Ok(Target {
        probs,
        tail_mass: 0.0,
        original_order,
        input_len: values.len(),
        finite: true,
        family: None,
    })
}

/// Materializes a named family for quantization at precision `m_hint`.
pub fn make_family(spec: &FamilySpec, m_hint: u64) -> Result<Target> {
    if m_hint == 0 {
        return Err(Error::ZeroM);
    }
    spec.kind.validate()?;
    let (probs, tail_mass) = match spec.kind {
        FamilyKind::Explicit { ref values } => {
            let mut target = make_target(values, false)?;
            target.family = Some(spec.kind.clone());
            return Ok(target);
        }
        FamilyKind::Uniform { n } => {
            if n > MAX_MATERIALIZED {
                return Err(Error::TruncationOverflow {
                    len: n,
                    limit: MAX_MATERIALIZED,
                });
            }
            (vec![1.0 / n as f64; n], 0.0)
        }
        FamilyKind::Geometric { ratio } => geometric(ratio, spec.prefix_len(m_hint)?),
        FamilyKind::YuleSimon { rho } => yule_simon(rho, spec.prefix_len(m_hint)?),
        FamilyKind::Adversarial { blocks } => {
            let end = adversarial_block_end(blocks).ok_or(Error::TruncationOverflow {
                len: usize::MAX,
                limit: MAX_MATERIALIZED,
            })?;
            let len = spec.prefix_len(m_hint)?.max(end);
            if len > MAX_MATERIALIZED {
                return Err(Error::TruncationOverflow {
                    len,
                    limit: MAX_MATERIALIZED,
                });
            }
            adversarial(len)
        }
    };
    let target = Target {
        original_order: (0..probs.len()).collect(),
        input_len: probs.len(),
        probs,
        tail_mass,
        finite: spec.kind.is_finite(),
        family: Some(spec.kind.clone()),
    };
    target.check_mass()?;
    Ok(target)
}

fn geometric(ratio: f64, len: usize) -> (Vec<f64>, f64) {
    let head = 1.0 - ratio;
    let probs: Vec<f64> = (0..len)
        .map(|i| head * ratio.powi(i as i32))
        .take_while(|&p| p > 0.0)
        .collect();
    let tail = ratio.powi(probs.len() as i32);
    (probs, tail)
}

// t_k = T_{k-1} rho / (k + rho) and T_k = T_{k-1} k / (k + rho) both follow
// from T_k = k B(k, rho + 1); the pair telescopes so the prefix and the tail
// always add up to one.
fn yule_simon(rho: f64, len: usize) -> (Vec<f64>, f64) {
    let mut tail = 1.0;
    let mut probs = Vec::with_capacity(len);
    for k in 1..=len {
        let k = k as f64;
        probs.push(tail * rho / (k + rho));
        tail *= k / (k + rho);
    }
    (probs, tail)
}

/// Size and entry value of adversarial block `i >= 1`.
fn adversarial_block(i: u32) -> Option<(u64, f64)> {
    let exp = 1u64.checked_shl(i)?;
    let size = 1u64.checked_shl(u32::try_from(exp - u64::from(i) - 1).ok()?)?;
    let value = 2f64.powi(1 - i32::try_from(exp).ok()?);
    Some((size, value))
}

/// One past the last (0-based) index of block `blocks`.
fn adversarial_block_end(blocks: u32) -> Option<usize> {
    let mut end = 0u64;
    for i in 1..=blocks {
        end = end.checked_add(adversarial_block(i)?.0)?;
    }
    usize::try_from(end).ok()
}

fn adversarial(len: usize) -> (Vec<f64>, f64) {
    let mut probs = Vec::with_capacity(len);
    let mut block = 1;
    // mass of blocks strictly after the last complete one
    let mut remaining = 1.0;
    while probs.len() < len {
        let (size, value) = adversarial_block(block).expect("bounded by MAX_MATERIALIZED");
        let take = (size as usize).min(len - probs.len());
        probs.extend(std::iter::repeat_n(value, take));
        remaining -= take as f64 * value;
        block += 1;
    }
    (probs, remaining)
}

/// Parses one probability per line. Blank lines and lines starting with `#`
/// are skipped.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value = line.parse::<f64>().map_err(|_| Error::Parse {
            line: i + 1,
            content: line.to_string(),
        })?;
        values.push(value);
    }
    Ok(values)
}

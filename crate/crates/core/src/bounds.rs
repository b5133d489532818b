//! Closed-form error guarantees for both quantizers and a report that checks
//! achieved errors against every bound whose preconditions hold.
//!
//! Bounds for targets with more entries than `M` depend on the support size
//! `k` of the computed approximation, so they are certificates evaluated after
//! quantization. Divergence-valued bounds are in nats.

use std::f64::consts::{E, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::distribution::{FamilyKind, Target};
use crate::error::{Error, Result};
use crate::metrics::{self, Base};
use crate::quantize::{largest_remainder, MTypeApprox};
use crate::special;

/// Absolute slack allowed when comparing an achieved value with a bound.
pub const BOUND_TOLERANCE: f64 = 1e-12;

/// Entry names used in [`BoundReport`].
pub mod names {
    pub const VD_SIMPLE: &str = "vd_simple";
    pub const VD_FINITE: &str = "vd_finite";
    pub const VD_INFINITE: &str = "vd_infinite";
    pub const VD_INFINITE_LOOSE: &str = "vd_infinite_loose";
    pub const SUBPROB_GENERAL: &str = "subprob_general";
    pub const SUBPROB_LOOSE: &str = "subprob_loose";
    pub const SUBPROB_EQUALITY: &str = "subprob_equality";
    pub const ID_SIMPLE: &str = "id_simple";
    pub const ID_FINITE: &str = "id_finite";
    pub const ID_INFINITE: &str = "id_infinite";
    pub const AUX_VD: &str = "aux_vd";
    pub const AUX_RATIO: &str = "aux_ratio";
    pub const AUX_DIVERGENCE: &str = "aux_divergence";
    pub const PINSKER_VD: &str = "pinsker_vd";
    pub const PINSKER_ID: &str = "pinsker_id";
    pub const REVERSE_PINSKER_VD: &str = "reverse_pinsker_vd";
    pub const REVERSE_PINSKER_ID: &str = "reverse_pinsker_id";
    pub const RENYI2_VD: &str = "renyi2_vd";
    pub const RENYI2_ID: &str = "renyi2_id";
    pub const YULE_SIMON_TAIL: &str = "yule_simon_tail";
    pub const YULE_SIMON_FLOOR: &str = "yule_simon_floor";
}

/// `n / M`: every entry of the distance-optimal output is within `1/M`.
pub fn vd_bound_simple(n: usize, m: u64) -> f64 {
    n as f64 / m as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VdBound {
    pub value: f64,
    /// `2k / M`, reported only when the support exceeds `M`.
    pub loose: Option<f64>,
}

/// Variational-distance guarantee for the distance-optimal output.
///
/// `n` is the target's support size (`None` if infinite). When `n <= M` the
/// bound is `n / (2M)`; otherwise it needs the achieved support size `k` and
/// the tail `T_k`: `(k / 2M) (1 + M T_k / k)^2`.
pub fn vd_bound(
    n: Option<usize>,
    m: u64,
    k: Option<usize>,
    tail_k: Option<f64>,
) -> Result<VdBound> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    let mf = m as f64;
    match n {
        Some(n) if n as u64 <= m => Ok(VdBound {
            value: n as f64 / (2.0 * mf),
            loose: None,
        }),
        _ => {
            let k = k.ok_or(Error::MissingInput("support size k"))?;
            let tail = tail_k.ok_or(Error::MissingInput("tail mass T_k"))?;
            if k == 0 {
                return Err(Error::InvalidParameter(
                    "support size k must be positive".into(),
                ));
            }
            let kf = k as f64;
            let grow = 1.0 + mf * tail / kf;
            Ok(VdBound {
                value: kf / (2.0 * mf) * grow * grow,
                loose: Some(2.0 * kf / mf),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubprobBound {
    /// `k / 2M + M T_k^2 / 2k`.
    pub general: f64,
    /// `T_k`, the exact error whenever `T_k >= k / M`.
    pub equality_case: Option<f64>,
    /// `k / 2M + T_k`.
    pub loose: f64,
}

/// Error guarantee for the distance-optimal quantizer applied to an ordered
/// sub-probability vector of `k <= M` entries and missing mass `T_k`.
pub fn vd_subprob_bound(k: usize, m: u64, tail_k: f64) -> Result<SubprobBound> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    if k == 0 || k as u64 > m {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= M, got k = {k}, M = {m}"
        )));
    }
    if !(0.0..=1.0).contains(&tail_k) {
        return Err(Error::InvalidParameter(format!(
            "tail mass {tail_k} not in [0, 1]"
        )));
    }
    let (kf, mf) = (k as f64, m as f64);
    let base = kf / (2.0 * mf);
    Ok(SubprobBound {
        general: base + mf * tail_k * tail_k / (2.0 * kf),
        equality_case: (tail_k >= kf / mf).then_some(tail_k),
        loose: base + tail_k,
    })
}

/// L1 error of the distance-optimal quantizer applied to the first `k`
/// entries of `target` viewed as a sub-probability vector.
pub fn subprob_prefix_error(target: &Target, k: usize, m: u64) -> Result<f64> {
    if k == 0 || k > target.n() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: target.n(),
        });
    }
    let prefix = &target.probs()[..k];
    let counts = largest_remainder(prefix, m)?;
    metrics::l1_distance(&counts, m, prefix, 0.0)
}

/// `1 / (t_n M)` nats.
pub fn id_bound_simple(t_n: f64, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    if t_n.is_nan() || t_n <= 0.0 {
        return Err(Error::InvalidParameter(
            "smallest probability must be positive".into(),
        ));
    }
    Ok(1.0 / (t_n * m as f64))
}

/// Divergence guarantee for the divergence-optimal output, nats.
///
/// For `n <= M`: `ln(1 + n / (2 t_n M^2))`. Otherwise
/// `(1/2) (r ln r / (r - 1)) (k / 2M + 2 T_k)` with `r = 1 / (1 - T_k) + e / t_1`,
/// where `k` is the achieved support size.
pub fn id_bound(
    n: Option<usize>,
    m: u64,
    k: Option<usize>,
    tail_k: Option<f64>,
    t_n: Option<f64>,
    t_1: f64,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    let mf = m as f64;
    match n {
        Some(n) if n as u64 <= m => {
            let t_n = t_n.ok_or(Error::MissingInput("smallest probability t_n"))?;
            if t_n.is_nan() || t_n <= 0.0 {
                return Err(Error::InvalidParameter(
                    "smallest probability must be positive".into(),
                ));
            }
            Ok((n as f64 / (2.0 * t_n * mf * mf)).ln_1p())
        }
        _ => {
            let k = k.ok_or(Error::MissingInput("support size k"))?;
            let tail = tail_k.ok_or(Error::MissingInput("tail mass T_k"))?;
            if tail.is_nan() || tail >= 1.0 {
                return Err(Error::InvalidParameter(
                    "tail mass T_k must be below 1".into(),
                ));
            }
            let r = 1.0 / (1.0 - tail) + E / t_1;
            Ok(metrics::reverse_pinsker(
                r,
                k as f64 / (2.0 * mf) + 2.0 * tail,
            ))
        }
    }
}

/// `Gamma(rho + 1) / (4 sqrt(2) sqrt(1 + rho))`, the constant in the
/// `K / (M + rho)^rho` lower bound on the Yule-Simon tail.
pub fn yule_simon_constant(rho: f64) -> f64 {
    special::gamma(rho + 1.0) / (4.0 * SQRT_2 * (1.0 + rho).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YuleSimonFloor {
    /// `T_M = M B(M, rho + 1)`.
    pub exact_tail: f64,
    /// `K(rho) / (M + rho)^rho`.
    pub floor: f64,
}

/// Lower limits on the distance-optimal error for a Yule-Simon target: the
/// quantizer never reaches past index `M`, so the error is at least `T_M`.
pub fn yule_simon_vd_floor(rho: f64, m: u64) -> Result<YuleSimonFloor> {
    if m <= 1 {
        return Err(Error::InvalidParameter("M must exceed 1".into()));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "rho {rho} must be positive"
        )));
    }
    let exact_tail = special::yule_simon_tail(rho, m);
    let floor = yule_simon_constant(rho) / (m as f64 + rho).powf(rho);
    if floor > exact_tail {
        return Err(Error::Invariant(format!(
            "floor {floor} exceeds tail {exact_tail}"
        )));
    }
    Ok(YuleSimonFloor { exact_tail, floor })
}

/// Per-entry guarantees: `|t_i - p_i| < 1/M` (distance-optimal output) and
/// `p_i / t_i < e / t_1` (divergence-optimal output).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementwiseCheck {
    pub max_abs_error: f64,
    pub abs_limit: f64,
    pub uniform: bool,
    pub max_ratio: f64,
    pub ratio_limit: f64,
    pub ratio_bounded: bool,
}

/// Evaluates both per-entry guarantees over the materialized prefix.
pub fn check_elementwise(approx: &MTypeApprox, target: &Target) -> Result<ElementwiseCheck> {
    let probs = target.probs();
    if approx.len() != probs.len() {
        return Err(Error::LengthMismatch {
            approx: approx.len(),
            target: probs.len(),
        });
    }
    let max_abs_error = (0..probs.len())
        .map(|i| (probs[i] - approx.prob(i)).abs())
        .fold(0.0, f64::max);
    let max_ratio = metrics::max_ratio(approx.counts(), approx.m(), probs)?;
    let abs_limit = 1.0 / approx.m() as f64;
    let ratio_limit = E / target.largest();
    Ok(ElementwiseCheck {
        max_abs_error,
        abs_limit,
        uniform: max_abs_error < abs_limit,
        max_ratio,
        ratio_limit,
        ratio_bounded: max_ratio < ratio_limit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// achieved <= value
    AtMost,
    /// achieved >= value
    AtLeast,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    /// Probability-scale quantity, independent of the log base.
    Plain,
    /// Divergence, expressed in the report's base.
    Divergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub relation: Relation,
    pub unit: Unit,
    pub applicable: bool,
    pub value: Option<f64>,
    pub achieved: Option<f64>,
    pub satisfied: Option<bool>,
}

impl BoundEntry {
    fn evaluated(name: &str, relation: Relation, unit: Unit, value: f64, achieved: f64) -> Self {
        let satisfied = match relation {
            Relation::AtMost => achieved <= value + BOUND_TOLERANCE,
            Relation::AtLeast => achieved >= value - BOUND_TOLERANCE,
            Relation::Equal => (achieved - value).abs() <= BOUND_TOLERANCE,
        };
        BoundEntry {
            name: name.to_string(),
            relation,
            unit,
            applicable: true,
            value: Some(value),
            achieved: Some(achieved),
            satisfied: Some(satisfied),
        }
    }

    fn not_applicable(name: &str, relation: Relation, unit: Unit) -> Self {
        BoundEntry {
            name: name.to_string(),
            relation,
            unit,
            applicable: false,
            value: None,
            achieved: None,
            satisfied: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSizes {
    pub vd: usize,
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: u64,
    pub base: Base,
    /// L1 error of the distance-optimal output.
    pub achieved_vd: f64,
    /// `D(p || t)` of the divergence-optimal output.
    pub achieved_id: f64,
    pub support_sizes: SupportSizes,
    pub entries: Vec<BoundEntry>,
    pub elementwise_vd: ElementwiseCheck,
    pub elementwise_id: ElementwiseCheck,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Entries whose precondition held but whose check failed.
    pub fn violations(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.satisfied == Some(false))
    }

    pub fn all_satisfied(&self) -> bool {
        self.violations().next().is_none()
    }

    /// Re-expresses divergence-valued numbers in `base`.
    pub fn in_base(&self, base: Base) -> BoundReport {
        let to_nats = match self.base {
            Base::Nats => 1.0,
            Base::Bits => std::f64::consts::LN_2,
        };
        let convert = |x: f64| base.from_nats(x * to_nats);
        let mut out = self.clone();
        out.base = base;
        out.achieved_id = convert(self.achieved_id);
        for entry in out
            .entries
            .iter_mut()
            .filter(|e| e.unit == Unit::Divergence)
        {
            entry.value = entry.value.map(convert);
            entry.achieved = entry.achieved.map(convert);
        }
        out
    }
}

/// Checks the outputs of both quantizers for `target` against every bound.
/// The report is in nats.
pub fn bound_report(target: &Target, vd: &MTypeApprox, id: &MTypeApprox) -> Result<BoundReport> {
    if vd.m() != id.m() {
        return Err(Error::InvalidParameter(
            "approximations use different M".into(),
        ));
    }
    let m = vd.m();
    let mf = m as f64;
    let probs = target.probs();
    let n = target.support_size();
    let within = n.is_some_and(|n| n as u64 <= m);

    let vd_vd = metrics::variational_distance(vd, target)?;
    let vd_id = metrics::variational_distance(id, target)?;
    let d_vd = metrics::informational_divergence(vd, target)?.nats();
    let d_id = metrics::informational_divergence(id, target)?.nats();
    let k_vd = vd.support_size();
    let k_id = id.support_size();
    let tail_vd = target.tail_mass_at(k_vd)?;
    let tail_id = target.tail_mass_at(k_id)?;

    use names::*;
    use Relation::*;
    use Unit::*;
    let mut entries = Vec::new();

    match n {
        Some(n) => entries.push(BoundEntry::evaluated(
            VD_SIMPLE,
            AtMost,
            Plain,
            vd_bound_simple(n, m),
            vd_vd,
        )),
        None => entries.push(BoundEntry::not_applicable(VD_SIMPLE, AtMost, Plain)),
    }
    let vd_guarantee = vd_bound(n, m, Some(k_vd), Some(tail_vd))?;
    if within {
        entries.push(BoundEntry::evaluated(
            VD_FINITE,
            AtMost,
            Plain,
            vd_guarantee.value,
            vd_vd,
        ));
        entries.push(BoundEntry::not_applicable(VD_INFINITE, AtMost, Plain));
        entries.push(BoundEntry::not_applicable(VD_INFINITE_LOOSE, AtMost, Plain));
    } else {
        entries.push(BoundEntry::not_applicable(VD_FINITE, AtMost, Plain));
        entries.push(BoundEntry::evaluated(
            VD_INFINITE,
            AtMost,
            Plain,
            vd_guarantee.value,
            vd_vd,
        ));
        let loose = vd_guarantee.loose.expect("reported above M");
        entries.push(BoundEntry::evaluated(
            VD_INFINITE_LOOSE,
            AtMost,
            Plain,
            loose,
            vd_vd,
        ));
    }

    // the distance-optimal quantizer on the support prefix, as a sub-probability vector
    let sub = vd_subprob_bound(k_vd, m, tail_vd)?;
    let sub_error = subprob_prefix_error(target, k_vd, m)?;
    entries.push(BoundEntry::evaluated(
        SUBPROB_GENERAL,
        AtMost,
        Plain,
        sub.general,
        sub_error,
    ));
    entries.push(BoundEntry::evaluated(
        SUBPROB_LOOSE,
        AtMost,
        Plain,
        sub.loose,
        sub_error,
    ));
    match sub.equality_case {
        Some(tail) => entries.push(BoundEntry::evaluated(
            SUBPROB_EQUALITY,
            Equal,
            Plain,
            tail,
            sub_error,
        )),
        None => entries.push(BoundEntry::not_applicable(SUBPROB_EQUALITY, Equal, Plain)),
    }

    match n {
        Some(_) => entries.push(BoundEntry::evaluated(
            ID_SIMPLE,
            AtMost,
            Divergence,
            id_bound_simple(target.smallest(), m)?,
            d_id,
        )),
        None => entries.push(BoundEntry::not_applicable(ID_SIMPLE, AtMost, Divergence)),
    }
    let id_guarantee = id_bound(
        n,
        m,
        Some(k_id),
        Some(tail_id),
        Some(target.smallest()),
        target.largest(),
    )?;
    if within {
        entries.push(BoundEntry::evaluated(
            ID_FINITE,
            AtMost,
            Divergence,
            id_guarantee,
            d_id,
        ));
        entries.push(BoundEntry::not_applicable(ID_INFINITE, AtMost, Divergence));
    } else {
        entries.push(BoundEntry::not_applicable(ID_FINITE, AtMost, Divergence));
        entries.push(BoundEntry::evaluated(
            ID_INFINITE,
            AtMost,
            Divergence,
            id_guarantee,
            d_id,
        ));
    }

    // auxiliary distribution: the support prefix of the divergence-optimal
    // output, renormalized and quantized for distance
    let keep = 1.0 - tail_id;
    let aux: Vec<f64> = probs[..k_id].iter().map(|&p| p / keep).collect();
    let mut aux_counts = largest_remainder(&aux, m)?;
    aux_counts.resize(probs.len(), 0);
    let aux_vd = metrics::l1_distance(&aux_counts, m, probs, target.tail_mass())?;
    let aux_ratio = metrics::max_ratio(&aux_counts, m, probs)?;
    let aux_d = metrics::kl_divergence(&aux_counts, m, probs)?;
    entries.push(BoundEntry::evaluated(
        AUX_VD,
        AtMost,
        Plain,
        k_id as f64 / (2.0 * mf) + 2.0 * tail_id,
        aux_vd,
    ));
    entries.push(BoundEntry::evaluated(
        AUX_RATIO,
        AtMost,
        Plain,
        1.0 / keep + E / target.largest(),
        aux_ratio,
    ));
    entries.push(BoundEntry::evaluated(
        AUX_DIVERGENCE,
        AtMost,
        Divergence,
        aux_d,
        d_id,
    ));

    entries.push(BoundEntry::evaluated(
        PINSKER_VD,
        AtMost,
        Plain,
        (2.0 * d_vd).sqrt(),
        vd_vd,
    ));
    entries.push(BoundEntry::evaluated(
        PINSKER_ID,
        AtMost,
        Plain,
        (2.0 * d_id).sqrt(),
        vd_id,
    ));
    entries.push(BoundEntry::evaluated(
        REVERSE_PINSKER_VD,
        AtMost,
        Divergence,
        metrics::reverse_pinsker_bound(vd, target)?,
        d_vd,
    ));
    entries.push(BoundEntry::evaluated(
        REVERSE_PINSKER_ID,
        AtMost,
        Divergence,
        metrics::reverse_pinsker_bound(id, target)?,
        d_id,
    ));
    entries.push(BoundEntry::evaluated(
        RENYI2_VD,
        AtMost,
        Divergence,
        metrics::chi_square(vd, target)?.ln_1p(),
        d_vd,
    ));
    entries.push(BoundEntry::evaluated(
        RENYI2_ID,
        AtMost,
        Divergence,
        metrics::chi_square(id, target)?.ln_1p(),
        d_id,
    ));

    match target.family() {
        Some(&FamilyKind::YuleSimon { rho }) if m > 1 => {
            let floor = yule_simon_vd_floor(rho, m)?;
            entries.push(BoundEntry::evaluated(
                YULE_SIMON_TAIL,
                AtLeast,
                Plain,
                floor.exact_tail,
                vd_vd,
            ));
            entries.push(BoundEntry::evaluated(
                YULE_SIMON_FLOOR,
                AtLeast,
                Plain,
                floor.floor,
                vd_vd,
            ));
        }
        _ => {
            entries.push(BoundEntry::not_applicable(YULE_SIMON_TAIL, AtLeast, Plain));
            entries.push(BoundEntry::not_applicable(YULE_SIMON_FLOOR, AtLeast, Plain));
        }
    }

    Ok(BoundReport {
        m,
        base: Base::Nats,
        achieved_vd: vd_vd,
        achieved_id: d_id,
        support_sizes: SupportSizes { vd: k_vd, id: k_id },
        entries,
        elementwise_vd: check_elementwise(vd, target)?,
        elementwise_id: check_elementwise(id, target)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{make_family, make_target, FamilySpec};
    use crate::quantize::{quantize_id, quantize_vd};

    fn report(target: &Target, m: u64) -> BoundReport {
        let vd = quantize_vd(target, m).unwrap();
        let (id, _) = quantize_id(target, m).unwrap();
        bound_report(target, &vd, &id).unwrap()
    }

    #[test]
    fn simple_vd_bound() {
        assert_eq!(vd_bound_simple(4, 256), 1.0 / 64.0);
        assert_eq!(vd_bound_simple(2, 2), 1.0);
        assert_eq!(vd_bound_simple(3, 2), 1.5);
    }

    #[test]
    fn vd_bound_branches() {
        assert_eq!(vd_bound(Some(2), 3, None, None).unwrap().value, 1.0 / 3.0);
        assert_eq!(
            vd_bound(Some(4), 256, None, None).unwrap().value,
            1.0 / 128.0
        );
        let b = vd_bound(None, 5, Some(3), Some(0.2)).unwrap();
        assert!((b.value - 8.0 / 15.0).abs() < 1e-15);
        assert!((b.loose.unwrap() - 1.2).abs() < 1e-15);
        assert!(matches!(
            vd_bound(Some(3), 2, None, Some(0.1)),
            Err(Error::MissingInput(_))
        ));
        assert!(matches!(
            vd_bound(None, 2, Some(1), None),
            Err(Error::MissingInput(_))
        ));
    }

    #[test]
    fn subprob_bound_cases() {
        // T_k = k / M: both cases coincide
        let b = vd_subprob_bound(2, 10, 0.2).unwrap();
        assert!((b.general - 0.2).abs() < 1e-15);
        assert_eq!(b.equality_case, Some(0.2));
        // T_k = 0 with k = n <= M recovers n / 2M
        let b = vd_subprob_bound(4, 8, 0.0).unwrap();
        assert_eq!(b.general, 0.25);
        assert_eq!(b.equality_case, None);
        let b = vd_subprob_bound(3, 5, 0.2).unwrap();
        assert!((b.general - 1.0 / 3.0).abs() < 1e-15);
        assert!(b.general <= b.loose);
        assert!(vd_subprob_bound(6, 5, 0.2).is_err());
    }

    #[test]
    fn subprob_bound_ordering_grid() {
        for m in 1..=40u64 {
            for k in 1..=m as usize {
                for step in 0..=50 {
                    let tail = step as f64 / 50.0;
                    let b = vd_subprob_bound(k, m, tail).unwrap();
                    assert!(tail <= b.general + 1e-15);
                    assert!(tail <= b.loose);
                    if tail <= 2.0 * k as f64 / m as f64 {
                        assert!(b.general <= b.loose + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn id_bound_simple_examples() {
        assert!((id_bound_simple(0.01, 256).unwrap() - 100.0 / 256.0).abs() < 1e-15);
        assert_eq!(id_bound_simple(0.5, 2).unwrap(), 1.0);
        let b = id_bound_simple(0.2, 2).unwrap();
        assert!((b - 2.5).abs() < 1e-15);
        assert!(b >= 1.25f64.ln());
        assert!(id_bound_simple(0.0, 2).is_err());
    }

    #[test]
    fn id_bound_examples() {
        let b = id_bound(Some(4), 256, None, None, Some(0.01), 0.97).unwrap();
        assert!((b - (4.0 / (2.0 * 0.01 * 65536.0f64)).ln_1p()).abs() < 1e-15);
        let b = id_bound(Some(2), 2, None, None, Some(0.5), 0.5).unwrap();
        assert!((b - 1.5f64.ln()).abs() < 1e-15);
        assert!(id_bound(Some(2), 2, None, None, None, 0.5).is_err());
        assert!(id_bound(None, 2, Some(1), Some(1.0), None, 0.5).is_err());
    }

    #[test]
    fn id_bound_yule_simon() {
        let t = make_family(&FamilySpec::new(FamilyKind::YuleSimon { rho: 0.2 }), 100).unwrap();
        assert!((t.largest() - 1.0 / 6.0).abs() < 1e-15);
        let (id, _) = quantize_id(&t, 100).unwrap();
        let k = id.support_size();
        let b = id_bound(
            None,
            100,
            Some(k),
            Some(t.tail_mass_at(k).unwrap()),
            None,
            t.largest(),
        )
        .unwrap();
        let d = metrics::informational_divergence(&id, &t).unwrap().nats();
        assert!(d <= b);
    }

    #[test]
    fn yule_simon_constant_at_one() {
        assert!((yule_simon_constant(1.0) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn yule_simon_floor_sweep() {
        for rho in [0.2, 1.0, 2.0] {
            for m in [2, 10, 100, 10_000] {
                let f = yule_simon_vd_floor(rho, m).unwrap();
                assert!(f.floor <= f.exact_tail, "rho={rho} m={m}");
            }
        }
        let f = yule_simon_vd_floor(0.2, 10_000).unwrap();
        assert!((f.exact_tail - 0.15).abs() < 0.01);
        assert!(yule_simon_vd_floor(0.2, 1).is_err());
    }

    #[test]
    fn elementwise_on_skewed_target() {
        let t = make_target(&[0.97, 0.01, 0.01, 0.01], false).unwrap();
        let vd = quantize_vd(&t, 256).unwrap();
        let (id, _) = quantize_id(&t, 256).unwrap();
        assert!(check_elementwise(&vd, &t).unwrap().uniform);
        let c = check_elementwise(&id, &t).unwrap();
        assert!(!c.uniform);
        assert!((c.max_abs_error - 1.32 / 256.0).abs() < 1e-12);
        assert!(c.ratio_bounded);
    }

    #[test]
    fn elementwise_ratio_unbounded_for_distance_output() {
        // t_1 = 1/M, the rest share (M-1)/M equally over n-1 entries
        let (m, n) = (4u64, 60usize);
        let rest = (m as f64 - 1.0) / ((n as f64 - 1.0) * m as f64);
        let mut values = vec![1.0 / m as f64];
        values.extend(std::iter::repeat_n(rest, n - 1));
        let t = make_target(&values, false).unwrap();
        let vd = quantize_vd(&t, m).unwrap();
        assert_eq!(&vd.counts()[..5], &[1, 1, 1, 1, 0]);
        let c = check_elementwise(&vd, &t).unwrap();
        assert!((c.max_ratio - (n as f64 - 1.0) / (m as f64 - 1.0)).abs() < 1e-12);
        assert!(!c.ratio_bounded);
        let (id, _) = quantize_id(&t, m).unwrap();
        assert!(check_elementwise(&id, &t).unwrap().ratio_bounded);
    }

    #[test]
    fn uniform_tight_case() {
        let t = make_family(&FamilySpec::new(FamilyKind::Uniform { n: 2 }), 3).unwrap();
        let r = report(&t, 3);
        assert_eq!(quantize_vd(&t, 3).unwrap().counts(), &[2, 1]);
        let e = r.entry(names::VD_FINITE).unwrap();
        assert!((e.value.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((e.achieved.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(r.all_satisfied());
    }

    #[test]
    fn branch_selection_above_m() {
        let t = make_target(&[0.5, 0.3, 0.2], false).unwrap();
        let r = report(&t, 2);
        assert!(!r.entry(names::VD_FINITE).unwrap().applicable);
        assert!(r.entry(names::VD_INFINITE).unwrap().applicable);
        assert!(!r.entry(names::ID_FINITE).unwrap().applicable);
        assert!(r.entry(names::ID_INFINITE).unwrap().applicable);
        assert!(r.all_satisfied());
    }

    #[test]
    fn yule_simon_report() {
        let t = make_family(&FamilySpec::new(FamilyKind::YuleSimon { rho: 0.2 }), 50).unwrap();
        let r = report(&t, 50);
        let floor = r.entry(names::YULE_SIMON_FLOOR).unwrap();
        assert!(floor.applicable);
        assert!(floor.value.unwrap() <= r.achieved_vd);
        assert!(r.all_satisfied());
        assert!(!r.entry(names::VD_SIMPLE).unwrap().applicable);
    }

    #[test]
    fn base_conversion_roundtrip() {
        let t = make_target(&[0.6, 0.3, 0.1], false).unwrap();
        let r = report(&t, 7);
        let bits = r.in_base(Base::Bits);
        assert!((bits.achieved_id - r.achieved_id / std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(bits.achieved_vd, r.achieved_vd);
        let back = bits.in_base(Base::Nats);
        assert!((back.achieved_id - r.achieved_id).abs() < 1e-15);
    }
}

use mquant_core::bounds::{BoundReport, ElementwiseCheck};
use mquant_core::{Base, Criterion, Method};
use serde::{Deserialize, Serialize};

use crate::config::MethodChoice;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub source: String,
    pub m: u64,
    pub method: MethodChoice,
    pub base: Base,
    pub normalize: bool,
    /// Entries in the user's input, zeros included.
    pub input_len: usize,
    /// Entries actually handed to the quantizers.
    pub materialized: usize,
    /// Target mass beyond the materialized entries.
    pub tail_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    /// In the user's input order, zeros re-expanded.
    pub counts: Vec<u64>,
    pub support_size: usize,
    pub variational_distance: f64,
    /// `D(p || t)` in the report's base.
    pub divergence: f64,
    /// `D(t || p)`; absent when infinite.
    pub reverse_divergence: Option<f64>,
    pub elementwise: ElementwiseCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReport {
    pub input: InputEcho,
    pub methods: Vec<MethodReport>,
    /// Bounds for both quantizers, whichever methods were requested.
    pub bounds: BoundReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub m: u64,
    pub k_vd: usize,
    pub k_id: usize,
    pub vd_vd: f64,
    pub vd_id: f64,
    pub d_vd: f64,
    pub d_id: f64,
}

pub const SWEEP_HEADER: [&str; 7] = ["M", "k_vd", "k_id", "vd_vd", "vd_id", "D_vd", "D_id"];

impl SweepRow {
    /// Integers as-is, reals with 17 significant digits.
    pub fn record(&self) -> [String; 7] {
        let real = |x: f64| format!("{x:.16e}");
        [
            self.m.to_string(),
            self.k_vd.to_string(),
            self.k_id.to_string(),
            real(self.vd_vd),
            real(self.vd_id),
            real(self.d_vd),
            real(self.d_id),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub criterion: Criterion,
    pub oracle_value: f64,
    pub algorithm_value: f64,
    pub oracle_counts: Vec<u64>,
    pub algorithm_counts: Vec<u64>,
    /// Values agree within 1e-12 (compared in nats).
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub input: InputEcho,
    pub checks: Vec<OracleCheck>,
}

//! Decoding-complexity and equal-latency model.
//!
//! With FFT-based BP over GF(q), the per-symbol cost is O(q) at a variable
//! node and O(qm) = O(q log2 q) at a check node. Treating the window as
//! (d_v, d_c)-regular, the per-window complexity order is
//! `W · c · d_v · (q + qm)` (the lifting factor `M` dropped). Latency is
//! measured in bits, `W_b = W c M m = c M' m`, so a block code matches the
//! window latency when its lifting factor is `M' = W M`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Block-code lifting factor `M' = W M` under the equal-latency condition.
pub fn equal_latency(w: u64, m_lift: u64) -> u64 {
    w * m_lift
}

/// Per-window decoding complexity order `W · c · d_v · (q + q m)`,
/// `q = 2^m`, lifting factor excluded.
pub fn complexity_order(d_v: u64, c: u64, w: u64, m: u32) -> u64 {
    let q = 1u64 << m;
    w * c * d_v * (q + q * m as u64)
}

/// One candidate operating point for the latency/complexity comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub label: String,
    pub d_v: u64,
    pub c: u64,
    pub w: u64,
    pub m: u32,
    /// Located threshold at this point, confirming near-capacity status.
    pub threshold: Option<f64>,
    pub capacity_gap: Option<f64>,
}

/// A ranked comparison row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    /// Latency proxy `W · m` (window length in bits per lifted symbol).
    pub latency_wm: u64,
    pub complexity: u64,
    pub threshold: f64,
    pub capacity_gap: f64,
}

/// Ranks operating points by complexity order (ties keep input order).
/// Every point must carry a threshold result.
pub fn compare_operating_points(points: &[OperatingPoint]) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        let threshold = p
            .threshold
            .ok_or_else(|| Error::MissingThreshold(p.label.clone()))?;
        rows.push(ComparisonRow {
            label: p.label.clone(),
            latency_wm: p.w * p.m as u64,
            complexity: complexity_order(p.d_v, p.c, p.w, p.m),
            threshold,
            capacity_gap: p.capacity_gap.unwrap_or(f64::NAN),
        });
    }
    rows.sort_by_key(|r| r.complexity); // stable sort keeps tie order
    Ok(rows)
}

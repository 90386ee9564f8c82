//! Threshold location by bisection over a monotone success predicate, plus
//! sweep and minimal-window (`W*`) orchestration.
//!
//! On the BEC the threshold is the largest erasure rate at which decoding
//! succeeds; on the AWGN channel the smallest `Eb/N0`. Both engines expose
//! monotone success regions, so bisection from a valid bracket converges to
//! the boundary.

use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use crate::de_bec::{self, DecodeTarget};
use crate::error::{Error, Result};
use crate::exit_awgn::{self, awgn_target, biawgn_capacity, AwgnChannel, McConfig};
use crate::protograph::{resolve, Ensemble};
use crate::subspace::FieldParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    Bec,
    Awgn,
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelFamily::Bec => write!(f, "bec"),
            ChannelFamily::Awgn => write!(f, "awgn"),
        }
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bec" => Ok(ChannelFamily::Bec),
            "awgn" | "biawgnc" => Ok(ChannelFamily::Awgn),
            _ => Err(Error::Config(format!("unknown channel `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// Flooding over the entire parity-check matrix.
    Fs,
    /// Windowed decoding with the given window size (block columns).
    Wd(usize),
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Fs => write!(f, "fs"),
            Schedule::Wd(w) => write!(f, "wd:{w}"),
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        if s == "fs" {
            return Ok(Schedule::Fs);
        }
        if let Some(w) = s.strip_prefix("wd:") {
            let w: usize = w
                .parse()
                .map_err(|_| Error::Config(format!("bad window size in `{s}`")))?;
            return Ok(Schedule::Wd(w));
        }
        Err(Error::Config(format!("unknown schedule `{s}` (expected fs or wd:<W>)")))
    }
}

/// A located threshold with its search diagnostics.
#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub ensemble: String,
    pub m: u32,
    pub channel: ChannelFamily,
    pub schedule: Schedule,
    /// Erasure rate `eps*` (BEC) or `Eb/N0*` in dB (AWGN).
    pub threshold: f64,
    /// Final bracket: (success side, failure side).
    pub bracket: (f64, f64),
    pub evals: u32,
    /// `eps_Sh - eps*` on the BEC; `Eb/N0* - Shannon limit` (dB) on AWGN.
    pub capacity_gap: f64,
    pub seed: Option<u64>,
}

/// Raw bisection outcome.
#[derive(Debug, Clone, Copy)]
pub struct Bisection {
    pub threshold: f64,
    pub bracket: (f64, f64),
    pub evals: u32,
}

/// Narrows the success/failure boundary of a monotone predicate to `tol`.
/// `lo` must succeed and `hi` fail; the endpoints may be in either numeric
/// order (the AWGN search walks downward in dB).
pub fn bisect(
    mut success: impl FnMut(f64) -> bool,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Bisection> {
    let mut evals = 0u32;
    let mut check = |x: f64, s: &mut u32| {
        *s += 1;
        success(x)
    };
    if !check(lo, &mut evals) {
        return Err(Error::BadBracket(format!("predicate fails at lo = {lo}")));
    }
    if check(hi, &mut evals) {
        return Err(Error::BadBracket(format!("predicate succeeds at hi = {hi}")));
    }
    let (mut lo, mut hi) = (lo, hi);
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if check(mid, &mut evals) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bisection { threshold: 0.5 * (lo + hi), bracket: (lo, hi), evals })
}

/// Search configuration shared by single thresholds, sweeps, and `W*`.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// BEC convergence target (`delta`, iteration caps).
    pub bec_target: DecodeTarget,
    /// Bisection tolerance in erasure rate.
    pub bec_tol: f64,
    /// AWGN convergence target (MI gap).
    pub awgn_target: DecodeTarget,
    /// Bisection tolerance in dB.
    pub awgn_tol_db: f64,
    /// Monte-Carlo budget and seed for the EXIT tables.
    pub mc: McConfig,
    /// Use the block design rate `b/c` instead of the terminated rate `R_L`
    /// for `Eb/N0` normalization.
    pub normalize_by_block_rate: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            bec_target: DecodeTarget::default(),
            bec_tol: 1e-4,
            awgn_target: awgn_target(),
            awgn_tol_db: 0.01,
            mc: McConfig::default(),
            normalize_by_block_rate: false,
        }
    }
}

impl SearchOptions {
    fn rate(&self, ens: &Ensemble) -> f64 {
        if self.normalize_by_block_rate {
            match ens {
                Ensemble::Block { matrix, .. } => matrix.design_rate(),
                Ensemble::Coupled { ensemble, .. } => {
                    ensemble.spreading().block_matrix().design_rate()
                }
            }
        } else {
            ens.design_rate()
        }
    }
}

fn require_coupled<'e>(
    ens: &'e Ensemble,
    schedule: Schedule,
) -> Result<Option<&'e crate::protograph::ScEnsemble>> {
    match schedule {
        Schedule::Fs => Ok(None),
        Schedule::Wd(_) => ens
            .coupled()
            .map(Some)
            .ok_or_else(|| Error::Config(format!("{} is a block ensemble; WD needs coupling", ens.name()))),
    }
}

/// Locates the BEC threshold of an ensemble by bisection over `[0, 1]`.
pub fn bec_threshold(
    ens: &Ensemble,
    fp: FieldParam,
    schedule: Schedule,
    opts: &SearchOptions,
) -> Result<ThresholdResult> {
    let sc = require_coupled(ens, schedule)?;
    let target = opts.bec_target;
    let pred = |eps: f64| -> bool {
        match schedule {
            Schedule::Fs => de_bec::evaluate_fs(ens, fp, eps, &target),
            Schedule::Wd(w) => de_bec::evaluate_wd(sc.unwrap(), fp, w, eps, &target),
        }
        .map(|r| r.success)
        .unwrap_or(false)
    };
    let b = bisect(pred, 0.0, 1.0, opts.bec_tol)?;
    Ok(ThresholdResult {
        ensemble: ens.name().to_string(),
        m: fp.m(),
        channel: ChannelFamily::Bec,
        schedule,
        threshold: b.threshold,
        bracket: b.bracket,
        evals: b.evals,
        capacity_gap: (1.0 - ens.design_rate()) - b.threshold,
        seed: None,
    })
}

/// Default AWGN bracket in dB: success end first.
pub const AWGN_BRACKET_DB: (f64, f64) = (12.0, -6.0);

/// Locates the AWGN `Eb/N0` threshold (dB) of an ensemble.
pub fn awgn_threshold(
    ens: &Ensemble,
    fp: FieldParam,
    schedule: Schedule,
    opts: &SearchOptions,
) -> Result<ThresholdResult> {
    let sc = require_coupled(ens, schedule)?;
    let rate = opts.rate(ens);
    let target = opts.awgn_target;
    let mc = opts.mc;
    let pred = |ebn0: f64| -> bool {
        let ch = AwgnChannel::new(ebn0, rate);
        match schedule {
            Schedule::Fs => exit_awgn::evaluate_fs_awgn(ens, fp, &ch, &target, &mc),
            Schedule::Wd(w) => exit_awgn::evaluate_wd_awgn(sc.unwrap(), fp, w, &ch, &target, &mc),
        }
        .map(|r| r.success)
        .unwrap_or(false)
    };
    let b = bisect(pred, AWGN_BRACKET_DB.0, AWGN_BRACKET_DB.1, opts.awgn_tol_db)?;
    Ok(ThresholdResult {
        ensemble: ens.name().to_string(),
        m: fp.m(),
        channel: ChannelFamily::Awgn,
        schedule,
        threshold: b.threshold,
        bracket: b.bracket,
        evals: b.evals,
        capacity_gap: b.threshold - shannon_limit_db(rate),
        seed: Some(mc.seed),
    })
}

/// Locates a threshold for one (ensemble, m, channel, schedule) item.
pub fn locate(
    ens: &Ensemble,
    fp: FieldParam,
    channel: ChannelFamily,
    schedule: Schedule,
    opts: &SearchOptions,
) -> Result<ThresholdResult> {
    match channel {
        ChannelFamily::Bec => bec_threshold(ens, fp, schedule, opts),
        ChannelFamily::Awgn => awgn_threshold(ens, fp, schedule, opts),
    }
}

/// One entry of a sweep request.
#[derive(Debug, Clone)]
pub struct SweepItem {
    /// Catalog name or ensemble file path.
    pub ensemble: String,
    pub m: u32,
    pub channel: ChannelFamily,
    pub schedule: Schedule,
}

/// Computes all requested thresholds independently (in parallel), keeping
/// the input order. Per-item errors are recorded; the sweep continues.
pub fn sweep(items: &[SweepItem], opts: &SearchOptions) -> Vec<Result<ThresholdResult>> {
    items
        .par_iter()
        .map(|item| {
            let ens = resolve(&item.ensemble)?;
            let fp = FieldParam::new(item.m)?;
            locate(&ens, fp, item.channel, item.schedule, opts)
        })
        .collect()
}

/// Outcome of a minimal-window search.
#[derive(Debug, Clone)]
pub struct WStarResult {
    pub w_star: usize,
    /// FS thresholds per requested m.
    pub fs: Vec<ThresholdResult>,
    /// WD thresholds at `W*` per requested m.
    pub wd: Vec<ThresholdResult>,
}

/// Checks the "within `frac` of FS" criterion for one (FS, WD) threshold
/// pair: erasure rates compare directly, `Eb/N0` values in linear SNR.
pub fn within_frac(channel: ChannelFamily, fs: f64, wd: f64, frac: f64) -> bool {
    match channel {
        ChannelFamily::Bec => wd >= (1.0 - frac) * fs,
        ChannelFamily::Awgn => 10f64.powf(wd / 10.0) <= (1.0 + frac) * 10f64.powf(fs / 10.0),
    }
}

/// Finds the smallest window size whose WD threshold is within `frac`
/// (default 0.03) of the FS threshold for every requested `m`. Ascends a
/// window ladder `2..=40` and finally `L + m_s`.
pub fn find_w_star(
    ensemble: &str,
    channel: ChannelFamily,
    ms: &[u32],
    frac: f64,
    opts: &SearchOptions,
) -> Result<WStarResult> {
    let ens = resolve(ensemble)?;
    let sc = ens
        .coupled()
        .ok_or_else(|| Error::Config(format!("{ensemble} is a block ensemble")))?;
    let cap = sc.n_block_rows();
    let fs: Vec<ThresholdResult> = ms
        .par_iter()
        .map(|&m| locate(&ens, FieldParam::new(m)?, channel, Schedule::Fs, opts))
        .collect::<Result<_>>()?;
    let ladder: Vec<usize> = (2..=40.min(cap)).chain((cap > 40).then_some(cap)).collect();
    for w in ladder {
        let wd: Vec<ThresholdResult> = ms
            .par_iter()
            .map(|&m| locate(&ens, FieldParam::new(m)?, channel, Schedule::Wd(w), opts))
            .collect::<Result<_>>()?;
        if fs
            .iter()
            .zip(&wd)
            .all(|(f, d)| within_frac(channel, f.threshold, d.threshold, frac))
        {
            return Ok(WStarResult { w_star: w, fs, wd });
        }
    }
    Err(Error::NotFoundWithinCap(cap))
}

/// `Eb/N0` (dB) at which binary-input AWGN capacity equals `rate`.
pub fn shannon_limit_db(rate: f64) -> f64 {
    let pred = |ebn0: f64| biawgn_capacity(AwgnChannel::new(ebn0, rate).noise_variance()) >= rate;
    // capacity is increasing in SNR; bracket is generous for rates in (0,1)
    let b = bisect(pred, 20.0, -10.0, 1e-4).expect("capacity bracket");
    b.threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protograph::catalog;

    #[test]
    fn bisect_synthetic_step() {
        let b = bisect(|x| x < 1.0 / 3.0, 0.0, 1.0, 1e-4).unwrap();
        assert!((b.threshold - 1.0 / 3.0).abs() < 1e-4);
        // descending orientation
        let b = bisect(|x| x > 2.0, 10.0, 0.0, 1e-4).unwrap();
        assert!((b.threshold - 2.0).abs() < 1e-4);
        assert!(bisect(|x| x < 0.5, 0.8, 1.0, 1e-4).is_err());
    }

    #[test]
    fn bisect_bracket_independence() {
        let f = |x: f64| x < 0.435;
        let a = bisect(f, 0.0, 1.0, 1e-5).unwrap().threshold;
        let b = bisect(f, 0.4, 0.5, 1e-5).unwrap().threshold;
        assert!((a - b).abs() < 2e-5);
    }

    #[test]
    fn binary_block_bec_thresholds() {
        let opts = SearchOptions::default();
        let fp = FieldParam::new(1).unwrap();
        // (2,4): stability bound 1/(d_c - 1) = 1/3
        let r = bec_threshold(&catalog("B24").unwrap(), fp, Schedule::Fs, &opts).unwrap();
        assert!((r.threshold - 1.0 / 3.0).abs() < 1e-3, "got {}", r.threshold);
        // (3,6): scalar DE recursion gives 0.4294
        let r = bec_threshold(&catalog("B36").unwrap(), fp, Schedule::Fs, &opts).unwrap();
        assert!((r.threshold - 0.4294).abs() < 1e-3, "got {}", r.threshold);
        assert!(r.capacity_gap > 0.0);
        assert!((r.bracket.1 - r.bracket.0).abs() <= 1e-4);
    }

    #[test]
    fn shannon_limit_rate_half() {
        let db = shannon_limit_db(0.5);
        assert!((db - 0.187).abs() < 0.01, "got {db}");
    }

    #[test]
    fn schedule_parsing() {
        assert_eq!(Schedule::from_str("fs").unwrap(), Schedule::Fs);
        assert_eq!(Schedule::from_str("wd:7").unwrap(), Schedule::Wd(7));
        assert!(Schedule::from_str("wd:x").is_err());
        assert_eq!(Schedule::Wd(30).to_string(), "wd:30");
    }

    #[test]
    fn sweep_preserves_order_and_records_errors() {
        let opts = SearchOptions::default();
        let items = vec![
            SweepItem {
                ensemble: "B24".into(),
                m: 1,
                channel: ChannelFamily::Bec,
                schedule: Schedule::Fs,
            },
            SweepItem {
                ensemble: "nope".into(),
                m: 1,
                channel: ChannelFamily::Bec,
                schedule: Schedule::Fs,
            },
        ];
        let out = sweep(&items, &opts);
        assert_eq!(out.len(), 2);
        assert!(out[0].is_ok());
        assert!(out[1].is_err());
        assert!(sweep(&[], &opts).is_empty());
    }
}

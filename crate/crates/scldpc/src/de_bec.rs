//! Protograph non-binary density evolution on the binary erasure channel.
//!
//! Messages are distributions over ambiguity-subspace dimensions. Variable
//! nodes intersect ambiguity subspaces (the `V` kernel), check nodes sum
//! them (the `C` kernel). An ensemble decodes at erasure rate `eps` when
//! every variable node's a-posteriori probability of a nonzero ambiguity
//! dimension falls below the target `delta`.
//!
//! Two schedules are provided: flooding over the whole graph
//! ([`evaluate_fs`]) and windowed decoding ([`evaluate_wd`]), where a window
//! of `W` block columns slides along the coupled chain, converging the first
//! block column of each window position before moving on. Messages are
//! carried across window positions (warm start), and the converged outputs
//! of decoded positions stay frozen as incoming messages to later windows.

use crate::error::Result;
use crate::protograph::{Ensemble, ScEnsemble};
use crate::subspace::{build_kernels, channel_distribution, DimDistribution, FieldParam, KernelSet};
use crate::tanner::Tanner;

/// Convergence targets for one evaluation.
#[derive(Debug, Clone, Copy)]
pub struct DecodeTarget {
    /// Residual below which a position counts as recovered.
    pub delta: f64,
    /// Iteration cap per evaluation (per window position under WD).
    pub max_iters: u64,
    /// Early-failure cut: if no residual moves by more than this in one
    /// iteration while the target is unmet, the evaluation has stalled.
    pub stall_tol: f64,
}

impl Default for DecodeTarget {
    fn default() -> Self {
        Self { delta: 1e-6, max_iters: 100_000, stall_tol: 1e-12 }
    }
}

/// Outcome of one evaluation. Failure is a result, not an error.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub success: bool,
    /// Total update iterations spent (summed over window positions for WD).
    pub iters: u64,
    /// Final residual per block column.
    pub residuals: Vec<f64>,
    /// First window position that failed to converge, if any (1-based).
    pub failed_position: Option<usize>,
}

/// Variable-node update: sequential intersection-kernel combination of the
/// channel distribution with the incoming check messages. Order-independent.
pub fn vn_update(
    channel: &DimDistribution,
    incoming: &[DimDistribution],
    kernels: &KernelSet,
) -> DimDistribution {
    let n = kernels.m() as usize + 1;
    let mut acc = channel.probs().to_vec();
    let mut out = vec![0.0; n];
    for msg in incoming {
        kernels.vn_combine_into(&acc, msg.probs(), &mut out);
        std::mem::swap(&mut acc, &mut out);
    }
    DimDistribution::from_raw(acc)
}

/// Check-node update: sequential sum-kernel combination of the incoming
/// variable messages, starting from the zero-space point mass.
pub fn cn_update(incoming: &[DimDistribution], kernels: &KernelSet) -> DimDistribution {
    let m = kernels.m();
    let n = m as usize + 1;
    let mut acc = DimDistribution::point_mass(m, 0).probs().to_vec();
    let mut out = vec![0.0; n];
    for msg in incoming {
        kernels.cn_combine_into(&acc, msg.probs(), &mut out);
        std::mem::swap(&mut acc, &mut out);
    }
    DimDistribution::from_raw(acc)
}

/// Rescales a message to unit mass. Fold arithmetic conserves total mass
/// only to rounding error, and those deficits compound multiplicatively
/// across iterations (every fold multiplies the masses of its inputs), so
/// each outgoing message is renormalized.
fn normalize(msg: &mut [f64]) {
    let s: f64 = msg.iter().sum();
    if s > 0.0 {
        for p in msg.iter_mut() {
            *p /= s;
        }
    }
}

struct BecState<'a> {
    t: &'a Tanner,
    ks: &'a KernelSet,
    n: usize,
    ch: Vec<f64>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    /// A-posteriori residual per variable column.
    residual: Vec<f64>,
    pre: Vec<f64>,
    suf: Vec<f64>,
}

impl<'a> BecState<'a> {
    fn new(t: &'a Tanner, ks: &'a KernelSet, eps: f64) -> Self {
        let m = ks.m();
        let n = m as usize + 1;
        let ch = channel_distribution(FieldParam::new(m).unwrap(), eps).probs().to_vec();
        let n_edges = t.edges.len();
        let mut v2c = vec![0.0; n_edges * n];
        for e in 0..n_edges {
            v2c[e * n..(e + 1) * n].copy_from_slice(&ch);
        }
        // neutral check message: full ambiguity
        let mut c2v = vec![0.0; n_edges * n];
        for e in 0..n_edges {
            c2v[e * n + n - 1] = 1.0;
        }
        let scratch = (t.max_deg + 1) * n;
        BecState {
            t,
            ks,
            n,
            ch,
            v2c,
            c2v,
            residual: vec![1.0; t.n_cols],
            pre: vec![0.0; scratch],
            suf: vec![0.0; scratch],
        }
    }

    fn cn_pass(&mut self, rows: std::ops::Range<usize>) {
        let n = self.n;
        for r in rows {
            let es = &self.t.chk_edges[r];
            let d = es.len();
            // prefix folds: pre[0] = zero-space point mass (sum identity)
            self.pre[..n].fill(0.0);
            self.pre[0] = 1.0;
            for (t, &e) in es.iter().enumerate() {
                let (lo, hi) = self.pre.split_at_mut((t + 1) * n);
                self.ks.cn_combine_into(
                    &lo[t * n..],
                    &self.v2c[e as usize * n..e as usize * n + n],
                    &mut hi[..n],
                );
            }
            // suffix folds
            self.suf[d * n..(d + 1) * n].fill(0.0);
            self.suf[d * n] = 1.0;
            for t in (0..d).rev() {
                let e = es[t] as usize;
                let (lo, hi) = self.suf.split_at_mut((t + 1) * n);
                self.ks.cn_combine_into(
                    &self.v2c[e * n..e * n + n],
                    &hi[..n],
                    &mut lo[t * n..t * n + n],
                );
            }
            for (t, &e) in es.iter().enumerate() {
                let e = e as usize;
                self.ks.cn_combine_into(
                    &self.pre[t * n..t * n + n],
                    &self.suf[(t + 1) * n..(t + 2) * n],
                    &mut self.c2v[e * n..e * n + n],
                );
                normalize(&mut self.c2v[e * n..e * n + n]);
            }
        }
    }

    /// Updates v2c messages and a-posteriori residuals for the given
    /// columns; returns the largest residual change seen.
    fn vn_pass(&mut self, cols: std::ops::Range<usize>) -> f64 {
        let n = self.n;
        let mut max_change = 0.0f64;
        for v in cols {
            let es = &self.t.var_edges[v];
            let d = es.len();
            self.pre[..n].copy_from_slice(&self.ch);
            for (t, &e) in es.iter().enumerate() {
                let (lo, hi) = self.pre.split_at_mut((t + 1) * n);
                self.ks.vn_combine_into(
                    &lo[t * n..],
                    &self.c2v[e as usize * n..e as usize * n + n],
                    &mut hi[..n],
                );
            }
            self.suf[d * n..(d + 1) * n].fill(0.0);
            self.suf[d * n + n - 1] = 1.0; // full-space point mass (intersection identity)
            for t in (0..d).rev() {
                let e = es[t] as usize;
                let (lo, hi) = self.suf.split_at_mut((t + 1) * n);
                self.ks.vn_combine_into(
                    &self.c2v[e * n..e * n + n],
                    &hi[..n],
                    &mut lo[t * n..t * n + n],
                );
            }
            for (t, &e) in es.iter().enumerate() {
                let e = e as usize;
                self.ks.vn_combine_into(
                    &self.pre[t * n..t * n + n],
                    &self.suf[(t + 1) * n..(t + 2) * n],
                    &mut self.v2c[e * n..e * n + n],
                );
                normalize(&mut self.v2c[e * n..e * n + n]);
            }
            // A-posteriori residual: normalized mass on nonzero ambiguity
            // dimensions, summed directly to avoid cancellation against the
            // dominant zero-dimension component.
            let apost = &self.pre[d * n..(d + 1) * n];
            let tail: f64 = apost[1..].iter().sum();
            let res = tail / (apost[0] + tail);
            max_change = max_change.max((res - self.residual[v]).abs());
            self.residual[v] = res;
        }
        max_change
    }

    fn max_residual(&self, cols: std::ops::Range<usize>) -> f64 {
        self.residual[cols].iter().cloned().fold(0.0, f64::max)
    }

    fn block_residuals(&self) -> Vec<f64> {
        (0..self.t.n_block_cols())
            .map(|b| self.max_residual(b * self.t.c..(b + 1) * self.t.c))
            .collect()
    }
}

/// Flooding-schedule evaluation over the entire base matrix (block or
/// coupled).
pub fn evaluate_fs(
    ens: &Ensemble,
    fp: FieldParam,
    eps: f64,
    target: &DecodeTarget,
) -> Result<EvalResult> {
    let ks = build_kernels(fp)?;
    let tanner = Tanner::new(ens.full_matrix(), ens.c());
    let mut st = BecState::new(&tanner, &ks, eps);
    for iter in 1..=target.max_iters {
        st.cn_pass(0..tanner.n_rows);
        let change = st.vn_pass(0..tanner.n_cols);
        let max_res = st.max_residual(0..tanner.n_cols);
        if max_res < target.delta {
            return Ok(EvalResult {
                success: true,
                iters: iter,
                residuals: st.block_residuals(),
                failed_position: None,
            });
        }
        if change < target.stall_tol {
            return Ok(EvalResult {
                success: false,
                iters: iter,
                residuals: st.block_residuals(),
                failed_position: None,
            });
        }
    }
    Ok(EvalResult {
        success: false,
        iters: target.max_iters,
        residuals: st.block_residuals(),
        failed_position: None,
    })
}

/// Windowed-decoding evaluation over a coupled ensemble. For each position
/// `t = 1..=L` the window covers block rows and columns `t..t+W-1` (clipped
/// at the chain end); iterations run until the target block column `t`
/// converges, then the window slides by one block column.
pub fn evaluate_wd(
    ens: &ScEnsemble,
    fp: FieldParam,
    w: usize,
    eps: f64,
    target: &DecodeTarget,
) -> Result<EvalResult> {
    ens.window_at(w, 1)?; // validates W
    let ks = build_kernels(fp)?;
    let tanner = Tanner::new(ens.coupled_matrix(), ens.c());
    let mut st = BecState::new(&tanner, &ks, eps);
    let l = ens.termination_length();
    let (c, cb) = (ens.c(), ens.cb());
    let n_block_rows = ens.n_block_rows();
    let mut total_iters = 0u64;
    for t in 1..=l {
        let rows = (t - 1) * cb..(t - 1 + w).min(n_block_rows) * cb;
        let cols = (t - 1) * c..(t - 1 + w).min(l) * c;
        let tgt = (t - 1) * c..t * c;
        let mut converged = false;
        for _ in 0..target.max_iters {
            total_iters += 1;
            st.cn_pass(rows.clone());
            let change = st.vn_pass(cols.clone());
            if st.max_residual(tgt.clone()) < target.delta {
                converged = true;
                break;
            }
            if change < target.stall_tol {
                break;
            }
        }
        if !converged {
            return Ok(EvalResult {
                success: false,
                iters: total_iters,
                residuals: st.block_residuals(),
                failed_position: Some(t),
            });
        }
    }
    Ok(EvalResult {
        success: true,
        iters: total_iters,
        residuals: st.block_residuals(),
        failed_position: None,
    })
}

/// Runs exactly `iters` flooding iterations and reports the per-column
/// a-posteriori residuals after each; used to cross-check trajectories
/// against independent references.
pub fn fs_residual_trace(
    ens: &Ensemble,
    fp: FieldParam,
    eps: f64,
    iters: u64,
) -> Result<Vec<Vec<f64>>> {
    let ks = build_kernels(fp)?;
    let tanner = Tanner::new(ens.full_matrix(), ens.c());
    let mut st = BecState::new(&tanner, &ks, eps);
    let mut trace = Vec::new();
    for _ in 0..iters {
        st.cn_pass(0..tanner.n_rows);
        st.vn_pass(0..tanner.n_cols);
        trace.push(st.residual.clone());
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protograph::{catalog, catalog_with_l};

    fn fp(m: u32) -> FieldParam {
        FieldParam::new(m).unwrap()
    }

    #[test]
    fn vn_cn_trivial_cases() {
        let ks = build_kernels(fp(3)).unwrap();
        let ch = channel_distribution(fp(3), 0.4);

        // no incoming messages: channel unchanged / zero-space point mass
        let out = vn_update(&ch, &[], &ks);
        assert_eq!(out.probs(), ch.probs());
        let out = cn_update(&[], &ks);
        assert_eq!(out.probs(), DimDistribution::point_mass(3, 0).probs());

        // a known symbol stays known through a variable node
        let known = DimDistribution::point_mass(3, 0);
        let out = vn_update(&ch, &[known.clone(), ch.clone()], &ks);
        assert!((out.probs()[0] - 1.0).abs() < 1e-12);

        // total ambiguity propagates through a check node
        let full = DimDistribution::point_mass(3, 3);
        let out = cn_update(&[ch.clone(), full], &ks);
        assert!((out.probs()[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn update_order_independence() {
        let ks = build_kernels(fp(3)).unwrap();
        let msgs: Vec<DimDistribution> = [0.2, 0.5, 0.8, 0.35]
            .iter()
            .map(|&e| channel_distribution(fp(3), e))
            .collect();
        let ch = channel_distribution(fp(3), 0.6);
        let base_v = vn_update(&ch, &msgs, &ks);
        let base_c = cn_update(&msgs, &ks);
        // compare against a few permutations
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]] {
            let permuted: Vec<DimDistribution> = perm.iter().map(|&i| msgs[i].clone()).collect();
            let v = vn_update(&ch, &permuted, &ks);
            let c = cn_update(&permuted, &ks);
            for k in 0..=3 {
                assert!((v.probs()[k] - base_v.probs()[k]).abs() < 1e-12);
                assert!((c.probs()[k] - base_c.probs()[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn binary_updates_match_scalar_bec_rules() {
        // m = 1: VN multiplies erasure probabilities, CN combines as
        // 1 - prod(1 - x)
        let ks = build_kernels(fp(1)).unwrap();
        let xs = [0.3, 0.7, 0.45];
        let msgs: Vec<DimDistribution> =
            xs.iter().map(|&e| channel_distribution(fp(1), e)).collect();
        let ch = channel_distribution(fp(1), 0.5);
        let v = vn_update(&ch, &msgs, &ks);
        let expect: f64 = 0.5 * xs.iter().product::<f64>();
        assert!((v.probs()[1] - expect).abs() < 1e-14);
        let c = cn_update(&msgs, &ks);
        let expect = 1.0 - xs.iter().map(|x| 1.0 - x).product::<f64>();
        assert!((c.probs()[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn fs_boundary_erasure_rates() {
        let ens = catalog("B36").unwrap();
        let r = evaluate_fs(&ens, fp(2), 0.0, &DecodeTarget::default()).unwrap();
        assert!(r.success);
        assert_eq!(r.iters, 1);
        assert!(r.residuals.iter().all(|&x| x == 0.0));

        let r = evaluate_fs(&ens, fp(2), 1.0, &DecodeTarget::default()).unwrap();
        assert!(!r.success);
    }

    #[test]
    fn fs_binary_36_brackets_threshold() {
        // scalar (3,6) BEC threshold is about 0.4294
        let ens = catalog("B36").unwrap();
        let t = DecodeTarget::default();
        assert!(evaluate_fs(&ens, fp(1), 0.42, &t).unwrap().success);
        assert!(!evaluate_fs(&ens, fp(1), 0.44, &t).unwrap().success);
    }

    #[test]
    fn fs_binary_matches_scalar_protograph_de() {
        // independent scalar recursion for the [3 3] protograph: both edge
        // classes behave identically, x_{l+1} = eps * (1 - (1-x_l)^5)^2
        let ens = catalog("B36").unwrap();
        for eps in [0.3, 0.42, 0.44] {
            let trace = fs_residual_trace(&ens, fp(1), eps, 40).unwrap();
            let mut x = eps;
            for row in &trace {
                let y = 1.0 - (1.0 - x).powi(5);
                x = eps * y * y;
                // a-posteriori residual after this iteration
                let apost = eps * y * y * y;
                for &r in row {
                    assert!((r - apost).abs() < 1e-9, "eps={eps}: {r} vs {apost}");
                }
            }
        }
    }

    #[test]
    fn fs_residuals_monotone_in_iterations() {
        let ens = catalog_with_l("C36ms1", 20).unwrap();
        let trace = fs_residual_trace(&ens, fp(2), 0.45, 60).unwrap();
        for w in trace.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                assert!(b <= &(a + 1e-12));
            }
        }
    }

    #[test]
    fn wd_trivial_and_full_window() {
        let ens = catalog_with_l("C36ms1", 30).unwrap();
        let sc = ens.coupled().unwrap();
        let t = DecodeTarget::default();

        let r = evaluate_wd(sc, fp(2), 7, 0.0, &t).unwrap();
        assert!(r.success);
        assert_eq!(r.iters, 30); // one iteration per window position

        // the full-size window succeeds wherever flooding does
        let eps = 0.45;
        let full = evaluate_wd(sc, fp(2), sc.n_block_rows(), eps, &t).unwrap();
        let fs = evaluate_fs(&ens, fp(2), eps, &t).unwrap();
        assert_eq!(full.success, fs.success);
        assert!(full.success);
        for (a, b) in full.residuals.iter().zip(&fs.residuals) {
            assert!((a - b).abs() < 1e-6 || (a < &1e-6 && b < &1e-6));
        }
    }

    #[test]
    fn wd_failure_records_position() {
        let ens = catalog_with_l("C36ms1", 30).unwrap();
        let sc = ens.coupled().unwrap();
        let r = evaluate_wd(sc, fp(1), 3, 0.6, &DecodeTarget::default()).unwrap();
        assert!(!r.success);
        assert!(r.failed_position.is_some());
    }

    #[test]
    fn channel_monotonicity_grid() {
        let ens = catalog_with_l("C36ms2", 20).unwrap();
        let sc = ens.coupled().unwrap();
        let t = DecodeTarget::default();
        let mut last_fs = true;
        let mut last_wd = true;
        for eps in [0.1, 0.3, 0.45, 0.55, 0.7] {
            let fs = evaluate_fs(&ens, fp(2), eps, &t).unwrap().success;
            let wd = evaluate_wd(sc, fp(2), 10, eps, &t).unwrap().success;
            assert!(!(fs && !last_fs), "FS success region not an interval");
            assert!(!(wd && !last_wd), "WD success region not an interval");
            last_fs = fs;
            last_wd = wd;
        }
    }
}


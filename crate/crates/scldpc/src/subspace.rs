//! GF(2^m) combinatorics for erasure-channel density evolution.
//!
//! The density-evolution message is the distribution of the dimension of the
//! decoder's ambiguity subspace of GF(2)^m. Under the uniformity assumption
//! (conditioned on dimension, the ambiguity subspace is uniform among
//! subspaces of that dimension, justified by random nonzero edge labels),
//! the variable-node operation is a subspace intersection and the check-node
//! operation a subspace sum. This module provides the exact
//! dimension-transition kernels for both, plus an exhaustive enumeration
//! oracle over all subspace pairs that certifies the closed forms for
//! `m <= 4`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Extension degree of the field, `q = 2^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParam {
    m: u32,
}

impl FieldParam {
    pub fn new(m: u32) -> Result<Self> {
        if m < 1 || m > 20 {
            return Err(Error::OutOfRange {
                what: "extension degree",
                detail: format!("m = {m}, supported 1 <= m <= 20"),
            });
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        1u64 << self.m
    }
}

/// Number of k-dimensional subspaces of GF(2)^m, computed exactly.
pub fn gaussian_binomial(m: u32, k: u32) -> Result<BigUint> {
    if k > m {
        return Err(Error::OutOfRange {
            what: "subspace dimension",
            detail: format!("k = {k} > m = {m}"),
        });
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= (BigUint::one() << (m - i)) - BigUint::one();
        den *= (BigUint::one() << (k - i)) - BigUint::one();
    }
    Ok(num / den)
}

fn gb_f64(m: u32, k: u32) -> f64 {
    gaussian_binomial(m, k)
        .expect("k <= m")
        .to_f64()
        .expect("gaussian binomial fits f64 for m <= 20")
}

/// A probability distribution over ambiguity-subspace dimensions `0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimDistribution {
    p: Vec<f64>,
}

impl DimDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::OutOfRange {
                what: "dimension distribution",
                detail: "entries must be non-negative".into(),
            });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange {
                what: "dimension distribution",
                detail: format!("mass sums to {sum}"),
            });
        }
        Ok(Self { p })
    }

    /// Wraps an already-normalized probability vector produced by kernel
    /// arithmetic.
    pub(crate) fn from_raw(p: Vec<f64>) -> Self {
        Self { p }
    }

    /// Point mass at dimension `k`.
    pub fn point_mass(m: u32, k: u32) -> Self {
        let mut p = vec![0.0; m as usize + 1];
        p[k as usize] = 1.0;
        Self { p }
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn m(&self) -> u32 {
        (self.p.len() - 1) as u32
    }

    /// Probability of a nonzero ambiguity dimension.
    pub fn residual(&self) -> f64 {
        1.0 - self.p[0]
    }
}

/// Distribution of the dimension spanned by the erased bit positions of a
/// symbol whose m-bit binary image crosses a BEC with erasure rate `eps`:
/// binomial over the bit positions.
pub fn channel_distribution(fp: FieldParam, eps: f64) -> DimDistribution {
    let m = fp.m();
    let mut p = vec![0.0; m as usize + 1];
    let mut binom = 1.0f64;
    for k in 0..=m {
        if k > 0 {
            binom *= (m - k + 1) as f64 / k as f64;
        }
        p[k as usize] = binom * eps.powi(k as i32) * (1.0 - eps).powi((m - k) as i32);
    }
    DimDistribution { p }
}

/// Dimension-transition tables for a given `m`: `v(i,j,·)` is the
/// distribution of `dim(U ∩ V)` and `c(i,j,·)` of `dim(U + V)` for
/// independent uniform subspaces of dimensions `i` and `j`.
#[derive(Debug, Clone)]
pub struct KernelSet {
    m: u32,
    v: Vec<f64>,
    c: Vec<f64>,
}

impl KernelSet {
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.m as usize + 1;
        (i * n + j) * n + k
    }

    /// P(dim(U ∩ V) = k | dim U = i, dim V = j).
    pub fn v(&self, i: usize, j: usize, k: usize) -> f64 {
        self.v[self.idx(i, j, k)]
    }

    /// P(dim(U + V) = k | dim U = i, dim V = j).
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[self.idx(i, j, k)]
    }

    /// Pushes two dimension distributions through the intersection kernel
    /// (variable-node combination). `out` must hold `m + 1` entries.
    pub fn vn_combine_into(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        self.combine_into(&self.v, a, b, out);
    }

    /// Pushes two dimension distributions through the sum kernel
    /// (check-node combination).
    pub fn cn_combine_into(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        self.combine_into(&self.c, a, b, out);
    }

    fn combine_into(&self, table: &[f64], a: &[f64], b: &[f64], out: &mut [f64]) {
        let n = self.m as usize + 1;
        out.fill(0.0);
        for i in 0..n {
            let ai = a[i];
            if ai == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = ai * b[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += w * table[base + k];
                }
            }
        }
    }
}

/// Closed-form kernel tables for `1 <= m <= 10`, built from exact Gaussian
/// binomials. For a fixed i-dimensional U, the number of j-dimensional V
/// with `dim(U ∩ V) = k` is `gb(i,k) · gb(m-i, j-k) · 2^{(i-k)(j-k)}`, and
/// `dim(U + V) = i + j - dim(U ∩ V)`.
pub fn build_kernels(fp: FieldParam) -> Result<Arc<KernelSet>> {
    let m = fp.m();
    if m > 10 {
        return Err(Error::OutOfRange {
            what: "extension degree",
            detail: format!("kernels supported for m <= 10, got {m}"),
        });
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<KernelSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ks) = cache.lock().unwrap().get(&m) {
        return Ok(ks.clone());
    }

    let n = m as usize + 1;
    let mut v = vec![0.0; n * n * n];
    let mut c = vec![0.0; n * n * n];
    for i in 0..=m {
        for j in 0..=m {
            let den = gb_f64(m, j);
            let k_lo = (i + j).saturating_sub(m);
            let k_hi = i.min(j);
            for k in k_lo..=k_hi {
                let count = gaussian_binomial(i, k).unwrap()
                    * gaussian_binomial(m - i, j - k).unwrap()
                    * (BigUint::one() << ((i - k) * (j - k)));
                let p = count.to_f64().unwrap() / den;
                let (i, j, k) = (i as usize, j as usize, k as usize);
                v[(i * n + j) * n + k] = p;
                // dim(U + V) = i + j - dim(U ∩ V)
                c[(i * n + j) * n + (i + j - k)] = p;
            }
        }
    }
    let ks = Arc::new(KernelSet { m, v, c });
    cache.lock().unwrap().insert(m, ks.clone());
    Ok(ks)
}

/// Lists every subspace of GF(2)^m as a membership bitmask over the `2^m`
/// vectors (bit `x` set iff vector `x` lies in the subspace).
pub fn enumerate_subspaces(m: u32) -> Vec<u32> {
    let q = 1usize << m;
    let zero = 1u32; // only the zero vector
    let mut seen = std::collections::HashSet::new();
    seen.insert(zero);
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        for x in 1..q as u32 {
            if s & (1 << x) != 0 {
                continue;
            }
            let ext = span_extend(s, x, q);
            if seen.insert(ext) {
                frontier.push(ext);
            }
        }
    }
    let mut all: Vec<u32> = seen.into_iter().collect();
    all.sort_unstable();
    all
}

/// Span of a subspace mask and one extra vector.
fn span_extend(s: u32, x: u32, q: usize) -> u32 {
    let mut ext = s;
    for a in 0..q as u32 {
        if s & (1 << a) != 0 {
            ext |= 1 << (a ^ x);
        }
    }
    ext
}

fn mask_dim(s: u32) -> u32 {
    s.count_ones().trailing_zeros()
}

/// Exhaustive-enumeration oracle: tabulates the exact frequencies of
/// `dim(U ∩ V)` and `dim(U + V)` over all ordered pairs of subspaces, with
/// `U` uniform among i-dimensional and `V` among j-dimensional subspaces.
/// Ground truth for [`build_kernels`]; feasible for `m <= 4`.
pub fn enumerate_kernels_oracle(fp: FieldParam) -> Result<KernelSet> {
    let m = fp.m();
    if m > 4 {
        return Err(Error::TooLarge(m));
    }
    let q = 1usize << m;
    let subs = enumerate_subspaces(m);
    let n = m as usize + 1;
    let mut v_counts = vec![0u64; n * n * n];
    let mut c_counts = vec![0u64; n * n * n];
    let mut per_dim = vec![0u64; n];
    for &s in &subs {
        per_dim[mask_dim(s) as usize] += 1;
    }
    for &u in &subs {
        let i = mask_dim(u) as usize;
        for &w in &subs {
            let j = mask_dim(w) as usize;
            let inter = mask_dim(u & w) as usize;
            // sum subspace: all pairwise XORs of members
            let mut sum = 0u32;
            for a in 0..q as u32 {
                if u & (1 << a) == 0 {
                    continue;
                }
                for b in 0..q as u32 {
                    if w & (1 << b) != 0 {
                        sum |= 1 << (a ^ b);
                    }
                }
            }
            let s_dim = mask_dim(sum) as usize;
            v_counts[(i * n + j) * n + inter] += 1;
            c_counts[(i * n + j) * n + s_dim] += 1;
        }
    }
    let mut v = vec![0.0; n * n * n];
    let mut c = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let pairs = (per_dim[i] * per_dim[j]) as f64;
            for k in 0..n {
                v[(i * n + j) * n + k] = v_counts[(i * n + j) * n + k] as f64 / pairs;
                c[(i * n + j) * n + k] = c_counts[(i * n + j) * n + k] as f64 / pairs;
            }
        }
    }
    Ok(KernelSet { m, v, c })
}

/// Serializes the kernel tables of a given `m` as JSON for cross-checking.
pub fn dump_kernels_json(ks: &KernelSet) -> serde_json::Value {
    let n = ks.m as usize + 1;
    let table = |t: &dyn Fn(usize, usize, usize) -> f64| -> Vec<Vec<Vec<f64>>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| t(i, j, k)).collect()).collect())
            .collect()
    };
    serde_json::json!({
        "m": ks.m,
        "q": 1u64 << ks.m,
        "vn_intersection": table(&|i, j, k| ks.v(i, j, k)),
        "cn_sum": table(&|i, j, k| ks.c(i, j, k)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(5, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(gaussian_binomial(2, 1).unwrap(), BigUint::from(3u32));
        // frozen from the enumeration below: 2-dim subspaces of GF(2)^4
        assert_eq!(gaussian_binomial(4, 2).unwrap(), BigUint::from(35u32));
        assert!(gaussian_binomial(3, 4).is_err());
    }

    #[test]
    fn gaussian_binomial_matches_enumeration() {
        for m in 1..=4u32 {
            let subs = enumerate_subspaces(m);
            for k in 0..=m {
                let count = subs.iter().filter(|&&s| mask_dim(s) == k).count();
                assert_eq!(gaussian_binomial(m, k).unwrap(), BigUint::from(count));
            }
        }
    }

    #[test]
    fn gaussian_binomial_symmetry() {
        for m in 0..=10u32 {
            for k in 0..=m {
                assert_eq!(
                    gaussian_binomial(m, k).unwrap(),
                    gaussian_binomial(m, m - k).unwrap()
                );
            }
        }
    }

    #[test]
    fn kernels_match_oracle_small_m() {
        for m in 1..=4u32 {
            let fp = FieldParam::new(m).unwrap();
            let closed = build_kernels(fp).unwrap();
            let oracle = enumerate_kernels_oracle(fp).unwrap();
            let n = m as usize + 1;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        assert!(
                            (closed.v(i, j, k) - oracle.v(i, j, k)).abs() <= 1e-12,
                            "V mismatch m={m} ({i},{j},{k})"
                        );
                        assert!(
                            (closed.c(i, j, k) - oracle.c(i, j, k)).abs() <= 1e-12,
                            "C mismatch m={m} ({i},{j},{k})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_line_fractions() {
        // three lines in GF(2)^2: intersections of two uniform lines
        let ks = enumerate_kernels_oracle(FieldParam::new(2).unwrap()).unwrap();
        assert!((ks.v(1, 1, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((ks.v(1, 1, 0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((ks.c(1, 1, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((ks.c(1, 1, 2) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_identities_and_supports() {
        for m in 1..=8u32 {
            let ks = build_kernels(FieldParam::new(m).unwrap()).unwrap();
            let n = m as usize + 1;
            for j in 0..n {
                // intersecting with the full space or summing with the zero
                // space leaves the dimension unchanged
                assert_eq!(ks.v(m as usize, j, j), 1.0);
                assert_eq!(ks.c(0, j, j), 1.0);
            }
            for i in 0..n {
                for j in 0..n {
                    let mut vs = 0.0;
                    let mut cs = 0.0;
                    for k in 0..n {
                        vs += ks.v(i, j, k);
                        cs += ks.c(i, j, k);
                        let v_in = k >= (i + j).saturating_sub(m as usize) && k <= i.min(j);
                        let c_in = k >= i.max(j) && k <= (i + j).min(m as usize);
                        if !v_in {
                            assert_eq!(ks.v(i, j, k), 0.0);
                        }
                        if !c_in {
                            assert_eq!(ks.c(i, j, k), 0.0);
                        }
                    }
                    assert!((vs - 1.0).abs() < 1e-12);
                    assert!((cs - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn binary_case_reduces_to_bec_rules() {
        let ks = build_kernels(FieldParam::new(1).unwrap()).unwrap();
        assert_eq!(ks.v(1, 1, 1), 1.0);
        assert_eq!(ks.v(1, 0, 0), 1.0);
        assert_eq!(ks.v(0, 1, 0), 1.0);
        assert_eq!(ks.c(1, 1, 1), 1.0);
        assert_eq!(ks.c(1, 0, 1), 1.0);
    }

    #[test]
    fn channel_distribution_examples() {
        let d = channel_distribution(FieldParam::new(1).unwrap(), 0.3);
        assert!((d.probs()[0] - 0.7).abs() < 1e-15);
        assert!((d.probs()[1] - 0.3).abs() < 1e-15);

        let d = channel_distribution(FieldParam::new(2).unwrap(), 0.5);
        assert_eq!(d.probs(), &[0.25, 0.5, 0.25]);

        let d = channel_distribution(FieldParam::new(5).unwrap(), 0.0);
        assert_eq!(d.probs()[0], 1.0);
        assert_eq!(d.residual(), 0.0);
    }

    fn dominates(a: &[f64], b: &[f64]) -> bool {
        // a has more mass on high dimensions than b (stochastic dominance)
        let mut ta = 0.0;
        let mut tb = 0.0;
        for k in (0..a.len()).rev() {
            ta += a[k];
            tb += b[k];
            if ta < tb - 1e-12 {
                return false;
            }
        }
        true
    }

    #[test]
    fn kernels_preserve_stochastic_dominance() {
        // degradation monotonicity on a small grid of distributions, m <= 3
        for m in 1..=3u32 {
            let fp = FieldParam::new(m).unwrap();
            let ks = build_kernels(fp).unwrap();
            let grid: Vec<DimDistribution> = [0.0, 0.3, 0.7, 1.0]
                .iter()
                .map(|&e| channel_distribution(fp, e))
                .collect();
            let n = m as usize + 1;
            let mut out_a = vec![0.0; n];
            let mut out_b = vec![0.0; n];
            for a in &grid {
                for b in &grid {
                    if !dominates(a.probs(), b.probs()) {
                        continue;
                    }
                    for third in &grid {
                        ks.vn_combine_into(a.probs(), third.probs(), &mut out_a);
                        ks.vn_combine_into(b.probs(), third.probs(), &mut out_b);
                        assert!(dominates(&out_a, &out_b));
                        ks.cn_combine_into(a.probs(), third.probs(), &mut out_a);
                        ks.cn_combine_into(b.probs(), third.probs(), &mut out_b);
                        assert!(dominates(&out_a, &out_b));
                    }
                }
            }
        }
    }
}

//! Builds the GF(2^m) subspace combining kernels and certifies them against
//! the exhaustive subspace-enumeration oracle for small m.
//!
//! Run with: cargo run --release --example kernels

use scldpc::subspace::{
    build_kernels, channel_distribution, enumerate_kernels_oracle, gaussian_binomial, FieldParam,
};

fn main() {
    println!("Gaussian binomials [m choose k]_2 for m = 4:");
    for k in 0..=4 {
        print!("  {}", gaussian_binomial(4, k).unwrap());
    }
    println!();

    // Exhaustive certification: every closed-form kernel entry equals the
    // count obtained by enumerating all subspace pairs.
    for m in 1..=4 {
        let fp = FieldParam::new(m).unwrap();
        let ks = build_kernels(fp).unwrap();
        let oracle = enumerate_kernels_oracle(fp).unwrap();
        let n = m as usize + 1;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst
                        .max((ks.v(i, j, k) - oracle.v(i, j, k)).abs())
                        .max((ks.c(i, j, k) - oracle.c(i, j, k)).abs());
                }
            }
        }
        println!("m={m}: closed form vs enumeration, max |diff| = {worst:.2e}");
    }

    // The channel distribution is binomial over erased bit dimensions.
    let ch = channel_distribution(FieldParam::new(3).unwrap(), 0.3);
    println!("channel m=3 eps=0.3: {:?}", ch.probs());

    // Intersecting a uniformly-drawn line with a fixed line of GF(2^2):
    // of the 3 lines, 1 matches (intersection the line itself) and 2 meet
    // only in the zero space.
    let ks = build_kernels(FieldParam::new(2).unwrap()).unwrap();
    println!("V[1][1][.] over GF(4): {:?}", [ks.v(1, 1, 0), ks.v(1, 1, 1)]);
}

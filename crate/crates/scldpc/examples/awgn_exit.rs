//! EXIT analysis on the BIAWGN channel: the Monte-Carlo mutual-information
//! table, the channel MI, and a located Eb/N0 threshold with its gap to
//! the Shannon limit.
//!
//! Run with: cargo run --release --example awgn_exit

use scldpc::exit_awgn::{biawgn_capacity, channel_mi, mi_table, AwgnChannel, McConfig};
use scldpc::protograph::resolve;
use scldpc::subspace::FieldParam;
use scldpc::threshold::{locate, shannon_limit_db, ChannelFamily, Schedule, SearchOptions};

fn main() {
    // J_m maps the Gaussian-model parameter sigma^2 to symbol MI; it is
    // built once per (m, samples, seed) and cached.
    let t = mi_table(FieldParam::new(2).unwrap(), 100_000, 1).unwrap();
    println!("J_2 table (100k samples, seed 1):");
    for s2 in [0.1, 1.0, 4.0, 16.0, 64.0] {
        println!("  J_2({s2:5}) = {:.6}", t.j(s2));
    }

    // Channel MI at the rate-1/2 Shannon limit is exactly the rate.
    let ch = AwgnChannel::new(0.187, 0.5);
    println!(
        "\nm=1 channel MI at 0.187 dB: {:.4} (binary-input capacity {:.4})",
        channel_mi(FieldParam::new(1).unwrap(), &ch, 200_000, 1),
        biawgn_capacity(ch.noise_variance())
    );

    let mut opts = SearchOptions::default();
    opts.mc = McConfig { samples: 500_000, seed: 1 };
    let ens = resolve("B36").unwrap();
    let res =
        locate(&ens, FieldParam::new(1).unwrap(), ChannelFamily::Awgn, Schedule::Fs, &opts)
            .unwrap();
    println!(
        "\nB36 m=1 EXIT threshold: {:.3} dB  (Shannon limit {:.3} dB, gap {:.3} dB)",
        res.threshold,
        shannon_limit_db(ens.design_rate()),
        res.capacity_gap
    );
}

//! Minimal-window search: the smallest W whose windowed-decoding threshold
//! stays within 3% of flooding for every requested field size.
//!
//! Run with: cargo run --release --example wstar_search
//! (a few minutes on one core; W climbs a ladder of full searches)

use scldpc::threshold::{find_w_star, ChannelFamily, SearchOptions};

fn main() {
    let opts = SearchOptions::default();
    let res = find_w_star("C36ms1", ChannelFamily::Bec, &[1, 2, 3], 0.03, &opts).unwrap();
    println!("C36ms1, BEC, m in 1..3: W* = {}", res.w_star);
    for (fs, wd) in res.fs.iter().zip(&res.wd) {
        println!(
            "  m={}: FS {:.6}  WD(W={}) {:.6}  ({:+.3}%)",
            fs.m,
            fs.threshold,
            res.w_star,
            wd.threshold,
            100.0 * (wd.threshold / fs.threshold - 1.0)
        );
    }
}

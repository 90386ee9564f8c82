//! Windowed decoding on the BEC: threshold vs window size for C36ms1, and
//! the per-position failure bookkeeping of an undersized window.
//!
//! Run with: cargo run --release --example windowed_decoding

use scldpc::de_bec::{evaluate_wd, DecodeTarget};
use scldpc::protograph::resolve;
use scldpc::subspace::FieldParam;
use scldpc::threshold::{locate, within_frac, ChannelFamily, Schedule, SearchOptions};

fn main() {
    let opts = SearchOptions::default();
    let ens = resolve("C36ms1").unwrap();
    let fp = FieldParam::new(2).unwrap();

    let fs = locate(&ens, fp, ChannelFamily::Bec, Schedule::Fs, &opts).unwrap();
    println!("C36ms1 m=2  FS threshold {:.6}", fs.threshold);
    for w in [2usize, 3, 5, 7, 10] {
        let wd = locate(&ens, fp, ChannelFamily::Bec, Schedule::Wd(w), &opts).unwrap();
        let ok = within_frac(ChannelFamily::Bec, fs.threshold, wd.threshold, 0.03);
        println!(
            "          W={w:2} threshold {:.6}  ({:+.3}% vs FS){}",
            wd.threshold,
            100.0 * (wd.threshold / fs.threshold - 1.0),
            if ok { "  within 3%" } else { "" }
        );
    }

    // Running one evaluation above the W=2 threshold shows where the
    // window schedule gives up: the first position whose residual cannot
    // reach the target before the window must slide.
    let sc = ens.coupled().unwrap();
    let r = evaluate_wd(sc, fp, 2, 0.45, &DecodeTarget::default()).unwrap();
    println!(
        "\nW=2 at eps=0.45: success={} first failed position {:?} after {} iterations",
        r.success, r.failed_position, r.iters
    );
}

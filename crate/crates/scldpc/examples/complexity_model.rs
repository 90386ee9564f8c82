//! Equal-latency complexity model: per-window decoding cost W c d_v (q+qm)
//! and the ranking of near-capacity operating points.
//!
//! Run with: cargo run --release --example complexity_model

use scldpc::complexity::{
    compare_operating_points, complexity_order, equal_latency, OperatingPoint,
};

fn point(label: &str, d_v: u64, c: u64, w: u64, m: u32, thr: f64, gap: f64) -> OperatingPoint {
    OperatingPoint {
        label: label.into(),
        d_v,
        c,
        w,
        m,
        threshold: Some(thr),
        capacity_gap: Some(gap),
    }
}

fn main() {
    println!("order(d_v=3, c=2, W=7,  m=5) = {}", complexity_order(3, 2, 7, 5));
    println!("order(d_v=3, c=2, W=101,m=5) = {}", complexity_order(3, 2, 101, 5));
    println!(
        "FS (W = L + m_s = 101) costs {:.1}x a W=10 window at equal (d_v, c, m)",
        complexity_order(3, 2, 101, 5) as f64 / complexity_order(3, 2, 10, 5) as f64
    );
    println!("equal-latency block lifting for W=10, M=1000: M' = {}", equal_latency(10, 1000));

    // Near-capacity WD operating points of the three coupled ensembles
    // (thresholds from the BEC sweep; capacity gap vs 1 - R_L).
    let points = vec![
        point("C36ms1 W=7  m=5", 3, 2, 7, 5, 0.5043, 0.0057),
        point("C36ms2 W=10 m=5", 3, 2, 10, 5, 0.5028, 0.0072),
        point("C24    W=30 m=5", 2, 2, 30, 5, 0.4872, 0.0178),
    ];
    println!("\nlabel                 Wm   complexity");
    for row in compare_operating_points(&points).unwrap() {
        println!("{:20} {:4}   {:8}", row.label, row.latency_wm, row.complexity);
    }
    println!("\nThe (3,6) ms=1 chain wins on both latency (Wm) and complexity.");
}

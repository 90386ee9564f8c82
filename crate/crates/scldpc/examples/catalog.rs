//! Walks the built-in ensemble catalog: base matrices, edge spreadings,
//! design rates, and the sliding window views of a coupled chain.
//!
//! Run with: cargo run --release --example catalog

use scldpc::protograph::{catalog, catalog_with_l, Ensemble};

fn main() {
    for name in ["B24", "B36", "C24", "C36ms1", "C36ms2"] {
        let ens = catalog(name).unwrap();
        let m = ens.full_matrix();
        println!(
            "{name:8} {}x{} blocks  c={} c-b={}  rate {:.4}",
            m.rows(),
            m.cols(),
            ens.c(),
            ens.cb(),
            ens.design_rate()
        );
        if let Ensemble::Block { matrix, .. } = &ens {
            println!("         rows: {:?}", matrix.entries());
        }
        if let Some(sc) = ens.coupled() {
            let comps: Vec<_> =
                sc.spreading().components().iter().map(|b| b.entries().to_vec()).collect();
            println!("         memory {}  components {:?}", sc.memory(), comps);
        }
    }

    // Rate loss vanishes as the chain grows.
    println!("\nC36ms2 design rate by termination length:");
    for l in [10usize, 30, 100, 300, 1000] {
        let ens = catalog_with_l("C36ms2", l).unwrap();
        println!("  L={l:5}  R_L = {:.6}", ens.design_rate());
    }

    // A window of W block columns spans W(c-b) x Wc base-matrix entries,
    // clipped at the end of the chain.
    let ens = catalog("C36ms1").unwrap();
    let sc = ens.coupled().unwrap();
    println!("\nC36ms1 window views (W=4):");
    for t in [1usize, 50, 99, 100] {
        let w = sc.window_at(4, t).unwrap();
        println!(
            "  t={t:3}  rows {:?}  cols {:?}  ({}x{} entries)",
            w.row_blocks(),
            w.col_blocks(),
            w.matrix().rows(),
            w.matrix().cols()
        );
    }
}

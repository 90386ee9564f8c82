//! Edge-instance Tanner graph shared by the two evaluation engines.
//!
//! A base-matrix entry of `e` produces `e` edge instances with independent
//! messages; the extrinsic rule excludes only the instance being updated.

use crate::protograph::BaseMatrix;

pub(crate) struct Tanner {
    pub n_rows: usize,
    pub n_cols: usize,
    /// (check row, variable column) per edge instance.
    pub edges: Vec<(u32, u32)>,
    pub var_edges: Vec<Vec<u32>>,
    pub chk_edges: Vec<Vec<u32>>,
    /// Variable columns per block column.
    pub c: usize,
    pub max_deg: usize,
}

impl Tanner {
    /// Expands a base matrix into edge instances. `c` gives the
    /// block-column granularity (for a block ensemble the whole matrix is
    /// one block).
    pub fn new(bm: &BaseMatrix, c: usize) -> Self {
        let n_rows = bm.rows();
        let n_cols = bm.cols();
        let mut edges = Vec::new();
        let mut var_edges = vec![Vec::new(); n_cols];
        let mut chk_edges = vec![Vec::new(); n_rows];
        for r in 0..n_rows {
            for col in 0..n_cols {
                for _ in 0..bm.entry(r, col) {
                    let e = edges.len() as u32;
                    edges.push((r as u32, col as u32));
                    var_edges[col].push(e);
                    chk_edges[r].push(e);
                }
            }
        }
        let max_deg = var_edges
            .iter()
            .map(Vec::len)
            .chain(chk_edges.iter().map(Vec::len))
            .max()
            .unwrap_or(0);
        Tanner { n_rows, n_cols, edges, var_edges, chk_edges, c, max_deg }
    }

    pub fn n_block_cols(&self) -> usize {
        self.n_cols / self.c
    }
}

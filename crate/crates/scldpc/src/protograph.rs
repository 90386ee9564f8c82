//! Block and spatially-coupled protographs.
//!
//! A protograph with `c - b` check nodes and `c` variable nodes is stored as
//! a base matrix of non-negative edge multiplicities. Spatial coupling
//! spreads a block base matrix into `m_s + 1` component matrices and tiles
//! them along a diagonal band of `L` block columns. Entries greater than one
//! are kept as multiplicities; the evaluation engines create one message
//! instance per edge.

use serde::Deserialize;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Non-negative integer base matrix; rows are check nodes, columns are
/// variable nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMatrix {
    entries: Vec<Vec<u32>>,
}

impl BaseMatrix {
    /// Validates and wraps a grid of edge multiplicities. Every row and
    /// every column must touch at least one edge, and there must be fewer
    /// checks than variables (`c > b >= 0`).
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self> {
        let rows = entries.len();
        if rows == 0 {
            return Err(Error::ShapeMismatch("base matrix has no rows".into()));
        }
        let cols = entries[0].len();
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged base matrix".into()));
        }
        if cols < rows {
            return Err(Error::ShapeMismatch(format!(
                "need c > b >= 0, got {rows} checks and {cols} variables"
            )));
        }
        if entries.iter().any(|r| r.iter().all(|&e| e == 0)) {
            return Err(Error::ShapeMismatch("all-zero check row".into()));
        }
        for j in 0..cols {
            if entries.iter().all(|r| r[j] == 0) {
                return Err(Error::ShapeMismatch(format!("all-zero variable column {j}")));
            }
        }
        Ok(Self { entries })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, r: usize, c: usize) -> u32 {
        self.entries[r][c]
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    pub fn col_sum(&self, c: usize) -> u32 {
        self.entries.iter().map(|r| r[c]).sum()
    }

    pub fn row_sum(&self, r: usize) -> u32 {
        self.entries[r].iter().sum()
    }

    /// Block design rate `R = b / c`.
    pub fn design_rate(&self) -> f64 {
        let c = self.cols() as f64;
        let b = (self.cols() - self.rows()) as f64;
        b / c
    }
}

impl fmt::Display for BaseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// An edge spreading of a block base matrix into `m_s + 1` components
/// summing entrywise to the source matrix.
#[derive(Debug, Clone)]
pub struct EdgeSpreading {
    components: Vec<BaseMatrix>,
}

impl EdgeSpreading {
    pub fn components(&self) -> &[BaseMatrix] {
        &self.components
    }

    /// Memory size `m_s` (number of components minus one).
    pub fn memory(&self) -> usize {
        self.components.len() - 1
    }

    pub fn rows(&self) -> usize {
        self.components[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.components[0].cols()
    }

    /// Reconstitutes the block base matrix as the entrywise sum.
    pub fn block_matrix(&self) -> BaseMatrix {
        let rows = self.rows();
        let cols = self.cols();
        let entries = (0..rows)
            .map(|r| {
                (0..cols)
                    .map(|c| self.components.iter().map(|b| b.entry(r, c)).sum())
                    .collect()
            })
            .collect();
        // sum of valid components keeps every row/column populated
        BaseMatrix::new(entries).expect("component sum is a valid base matrix")
    }
}

/// Validates that `components` spread the edges of `block`: same shapes,
/// `m_s >= 1`, and an entrywise sum equal to `block`.
pub fn spread_edges(block: &BaseMatrix, components: Vec<BaseMatrix>) -> Result<EdgeSpreading> {
    if components.len() < 2 {
        return Err(Error::OutOfRange {
            what: "memory size",
            detail: "need at least two component matrices (m_s >= 1)".into(),
        });
    }
    for comp in &components {
        if comp.rows() != block.rows() || comp.cols() != block.cols() {
            return Err(Error::ShapeMismatch(format!(
                "component is {}x{}, block is {}x{}",
                comp.rows(),
                comp.cols(),
                block.rows(),
                block.cols()
            )));
        }
    }
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let sum: u32 = components.iter().map(|b| b.entry(r, c)).sum();
            if sum != block.entry(r, c) {
                return Err(Error::SumMismatch);
            }
        }
    }
    Ok(EdgeSpreading { components })
}

/// A terminated spatially-coupled ensemble: an edge spreading tiled over
/// `L` block columns, with the coupled base matrix materialized.
#[derive(Debug, Clone)]
pub struct ScEnsemble {
    spreading: EdgeSpreading,
    l: usize,
    coupled: BaseMatrix,
}

/// Builds the coupled base matrix by placing component `B_i` at block
/// (row `t + i`, column `t`) for each of the `L` block columns.
pub fn couple(spreading: EdgeSpreading, l: usize) -> Result<ScEnsemble> {
    if l < 1 {
        return Err(Error::OutOfRange {
            what: "termination length",
            detail: format!("L = {l}, need L >= 1"),
        });
    }
    let cb = spreading.rows();
    let c = spreading.cols();
    let ms = spreading.memory();
    let n_rows = cb * (l + ms);
    let n_cols = c * l;
    let mut entries = vec![vec![0u32; n_cols]; n_rows];
    for t in 0..l {
        for (i, comp) in spreading.components().iter().enumerate() {
            for r in 0..cb {
                for cc in 0..c {
                    entries[(t + i) * cb + r][t * c + cc] += comp.entry(r, cc);
                }
            }
        }
    }
    let coupled = BaseMatrix::new(entries)?;
    Ok(ScEnsemble { spreading, l, coupled })
}

impl ScEnsemble {
    pub fn spreading(&self) -> &EdgeSpreading {
        &self.spreading
    }

    pub fn termination_length(&self) -> usize {
        self.l
    }

    pub fn memory(&self) -> usize {
        self.spreading.memory()
    }

    /// Variable nodes per block column.
    pub fn c(&self) -> usize {
        self.spreading.cols()
    }

    /// Check nodes per block row.
    pub fn cb(&self) -> usize {
        self.spreading.rows()
    }

    /// Number of block rows, `L + m_s`.
    pub fn n_block_rows(&self) -> usize {
        self.l + self.memory()
    }

    pub fn coupled_matrix(&self) -> &BaseMatrix {
        &self.coupled
    }

    /// Terminated design rate `R_L = 1 - (c-b)(L+m_s) / (cL)`.
    pub fn design_rate(&self) -> f64 {
        let cb = self.cb() as f64;
        let c = self.c() as f64;
        let l = self.l as f64;
        let ms = self.memory() as f64;
        1.0 - cb * (l + ms) / (c * l)
    }

    /// Sub-matrix of the coupled base matrix covered by a decoding window of
    /// `W` block columns anchored at block column `t` (1-based, `1 <= t <= L`).
    /// Windows reaching past the end of the chain are truncated.
    pub fn window_at(&self, w: usize, t: usize) -> Result<WindowView> {
        if w < 1 || w > self.n_block_rows() {
            return Err(Error::OutOfRange {
                what: "window size",
                detail: format!("W = {w}, need 1 <= W <= {}", self.n_block_rows()),
            });
        }
        if t < 1 || t > self.l {
            return Err(Error::OutOfRange {
                what: "window position",
                detail: format!("t = {t}, need 1 <= t <= {}", self.l),
            });
        }
        let row_blocks = (t - 1)..(t - 1 + w).min(self.n_block_rows());
        let col_blocks = (t - 1)..(t - 1 + w).min(self.l);
        let cb = self.cb();
        let c = self.c();
        let entries = (row_blocks.start * cb..row_blocks.end * cb)
            .map(|r| {
                (col_blocks.start * c..col_blocks.end * c)
                    .map(|cc| self.coupled.entry(r, cc))
                    .collect()
            })
            .collect();
        Ok(WindowView {
            w,
            t,
            row_blocks,
            col_blocks,
            matrix: BaseMatrix { entries },
        })
    }
}

/// A window sub-view of a coupled base matrix: up to `W(c-b)` rows by `Wc`
/// columns, clipped at the end of the chain.
#[derive(Debug, Clone)]
pub struct WindowView {
    w: usize,
    t: usize,
    row_blocks: std::ops::Range<usize>,
    col_blocks: std::ops::Range<usize>,
    matrix: BaseMatrix,
}

impl WindowView {
    pub fn window_size(&self) -> usize {
        self.w
    }

    pub fn position(&self) -> usize {
        self.t
    }

    /// Covered block rows (0-based, half-open).
    pub fn row_blocks(&self) -> std::ops::Range<usize> {
        self.row_blocks.clone()
    }

    /// Covered block columns (0-based, half-open).
    pub fn col_blocks(&self) -> std::ops::Range<usize> {
        self.col_blocks.clone()
    }

    pub fn matrix(&self) -> &BaseMatrix {
        &self.matrix
    }
}

/// A block or coupled ensemble, as handed to the evaluation engines.
#[derive(Debug, Clone)]
pub enum Ensemble {
    Block { name: String, matrix: BaseMatrix },
    Coupled { name: String, ensemble: ScEnsemble },
}

impl Ensemble {
    pub fn name(&self) -> &str {
        match self {
            Ensemble::Block { name, .. } => name,
            Ensemble::Coupled { name, .. } => name,
        }
    }

    /// The full base matrix decoded by the flooding schedule.
    pub fn full_matrix(&self) -> &BaseMatrix {
        match self {
            Ensemble::Block { matrix, .. } => matrix,
            Ensemble::Coupled { ensemble, .. } => ensemble.coupled_matrix(),
        }
    }

    /// Variable nodes per block column.
    pub fn c(&self) -> usize {
        match self {
            Ensemble::Block { matrix, .. } => matrix.cols(),
            Ensemble::Coupled { ensemble, .. } => ensemble.c(),
        }
    }

    /// Check nodes per block row.
    pub fn cb(&self) -> usize {
        match self {
            Ensemble::Block { matrix, .. } => matrix.rows(),
            Ensemble::Coupled { ensemble, .. } => ensemble.cb(),
        }
    }

    /// Design rate: `b/c` for a block ensemble, `R_L` for a coupled one.
    pub fn design_rate(&self) -> f64 {
        match self {
            Ensemble::Block { matrix, .. } => matrix.design_rate(),
            Ensemble::Coupled { ensemble, .. } => ensemble.design_rate(),
        }
    }

    pub fn coupled(&self) -> Option<&ScEnsemble> {
        match self {
            Ensemble::Block { .. } => None,
            Ensemble::Coupled { ensemble, .. } => Some(ensemble),
        }
    }
}

/// Default termination length for the catalog's coupled ensembles.
pub const DEFAULT_L: usize = 100;

/// The named ensembles: the (2,4) and (3,6) groups.
///
/// - `B24`: block `[2 2]`
/// - `C24`: `B_0 = B_1 = [1 1]`, `L = 100`
/// - `B36`: block `[3 3]`
/// - `C36ms1`: `B_0 = [2 1]`, `B_1 = [1 2]`, `L = 100`
/// - `C36ms2`: `B_0 = B_1 = B_2 = [1 1]`, `L = 100`
pub fn catalog(name: &str) -> Result<Ensemble> {
    catalog_with_l(name, DEFAULT_L)
}

/// Same as [`catalog`] with an explicit termination length for the coupled
/// variants.
pub fn catalog_with_l(name: &str, l: usize) -> Result<Ensemble> {
    let bm = |rows: &[&[u32]]| -> BaseMatrix {
        BaseMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).expect("catalog matrix")
    };
    let coupled = |name: &str, comps: &[&[&[u32]]]| -> Result<Ensemble> {
        let comps: Vec<BaseMatrix> = comps.iter().map(|c| bm(c)).collect();
        let block = EdgeSpreading { components: comps.clone() }.block_matrix();
        let spreading = spread_edges(&block, comps)?;
        Ok(Ensemble::Coupled {
            name: name.into(),
            ensemble: couple(spreading, l)?,
        })
    };
    match name.to_ascii_lowercase().as_str() {
        "b24" => Ok(Ensemble::Block { name: "B24".into(), matrix: bm(&[&[2, 2]]) }),
        "b36" => Ok(Ensemble::Block { name: "B36".into(), matrix: bm(&[&[3, 3]]) }),
        "c24" => coupled("C24", &[&[&[1, 1]], &[&[1, 1]]]),
        "c36ms1" => coupled("C36ms1", &[&[&[2, 1]], &[&[1, 2]]]),
        "c36ms2" => coupled("C36ms2", &[&[&[1, 1]], &[&[1, 1]], &[&[1, 1]]]),
        _ => Err(Error::UnknownEnsemble(name.into())),
    }
}

#[derive(Deserialize)]
struct EnsembleFile {
    components: Vec<Vec<Vec<u32>>>,
    #[serde(default)]
    #[serde(rename = "L")]
    l: Option<usize>,
}

/// Loads an ensemble from the structured-text format
/// `{ "components": [[[...]]], "L": int }`. A single component with `L`
/// omitted denotes an uncoupled block ensemble.
pub fn from_file(path: &Path) -> Result<Ensemble> {
    let text = std::fs::read_to_string(path)?;
    let file: EnsembleFile = serde_json::from_str(&text)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "file".into());
    let comps: Result<Vec<BaseMatrix>> = file.components.into_iter().map(BaseMatrix::new).collect();
    let comps = comps?;
    match (comps.len(), file.l) {
        (0, _) => Err(Error::Config("ensemble file has no components".into())),
        (1, None) => Ok(Ensemble::Block { name, matrix: comps.into_iter().next().unwrap() }),
        (_, None) => Err(Error::Config(
            "coupled ensemble file must specify a termination length L".into(),
        )),
        (_, Some(l)) => {
            let block = EdgeSpreading { components: comps.clone() }.block_matrix();
            let spreading = spread_edges(&block, comps)?;
            Ok(Ensemble::Coupled { name, ensemble: couple(spreading, l)? })
        }
    }
}

/// Resolves a catalog name or a path to an ensemble file.
pub fn resolve(spec: &str) -> Result<Ensemble> {
    match catalog(spec) {
        Ok(e) => Ok(e),
        Err(Error::UnknownEnsemble(_)) if Path::new(spec).exists() => from_file(Path::new(spec)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(rows: &[&[u32]]) -> BaseMatrix {
        BaseMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn spreading_accepts_valid_and_rejects_mismatch() {
        let b24 = bm(&[&[2, 2]]);
        let s = spread_edges(&b24, vec![bm(&[&[1, 1]]), bm(&[&[1, 1]])]).unwrap();
        assert_eq!(s.memory(), 1);

        let b36 = bm(&[&[3, 3]]);
        let s = spread_edges(&b36, vec![bm(&[&[2, 1]]), bm(&[&[1, 2]])]).unwrap();
        assert_eq!(s.memory(), 1);

        let err = spread_edges(&b36, vec![bm(&[&[1, 1]]), bm(&[&[1, 1]])]).unwrap_err();
        assert!(matches!(err, Error::SumMismatch));

        let err = spread_edges(&b36, vec![bm(&[&[3, 3]])]).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { .. }));
    }

    #[test]
    fn coupled_shapes() {
        let e = catalog_with_l("C24", 3).unwrap();
        let m = e.full_matrix();
        assert_eq!((m.rows(), m.cols()), (4, 6));

        let e = catalog_with_l("C36ms2", 100).unwrap();
        let m = e.full_matrix();
        assert_eq!((m.rows(), m.cols()), (102, 200));

        // L = 1 degenerates to the stacked component matrices
        let e = catalog_with_l("C36ms1", 1).unwrap();
        let m = e.full_matrix();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m.entries(), &[vec![2, 1], vec![1, 2]]);
    }

    #[test]
    fn coupled_degree_structure() {
        // column sums = d_v everywhere; row sums = d_c except at the chain ends
        let e = catalog("C36ms2").unwrap();
        let sc = e.coupled().unwrap();
        let m = sc.coupled_matrix();
        for c in 0..m.cols() {
            assert_eq!(m.col_sum(c), 3);
        }
        let ms = sc.memory();
        for r in 0..m.rows() {
            let block_row = r / sc.cb();
            if block_row >= ms && block_row < sc.n_block_rows() - ms {
                assert_eq!(m.row_sum(r), 6);
            } else {
                assert!(m.row_sum(r) < 6);
            }
        }
    }

    #[test]
    fn design_rates() {
        let e = catalog_with_l("C24", 100).unwrap();
        assert!((e.design_rate() - 0.495).abs() < 1e-12);
        let e = catalog_with_l("C36ms2", 100).unwrap();
        assert!((e.design_rate() - 0.49).abs() < 1e-12);
        // increasing in L, approaching b/c
        let mut last = 0.0;
        for l in [10, 50, 100, 1000, 5000] {
            let r = catalog_with_l("C24", l).unwrap().design_rate();
            assert!(r > last);
            last = r;
        }
        assert!((last - 0.5).abs() < 1e-3);
    }

    #[test]
    fn window_views() {
        let e = catalog("C24").unwrap();
        let sc = e.coupled().unwrap();
        let w = sc.window_at(30, 1).unwrap();
        assert_eq!((w.matrix().rows(), w.matrix().cols()), (30, 60));

        // truncation at the end of the chain
        let e = catalog("C36ms1").unwrap();
        let sc = e.coupled().unwrap();
        let w = sc.window_at(7, 95).unwrap();
        assert_eq!(w.col_blocks(), 94..100);
        assert_eq!(w.row_blocks(), 94..101);

        // the full-size window equals the entire coupled matrix
        let full = sc.window_at(sc.n_block_rows(), 1).unwrap();
        assert_eq!(full.matrix(), sc.coupled_matrix());

        assert!(sc.window_at(0, 1).is_err());
        assert!(sc.window_at(7, 101).is_err());
    }

    #[test]
    fn catalog_definitions() {
        let e = catalog("C36ms1").unwrap();
        let sc = e.coupled().unwrap();
        assert_eq!(sc.termination_length(), 100);
        assert_eq!(sc.spreading().components()[0].entries(), &[vec![2, 1]]);
        assert_eq!(sc.spreading().components()[1].entries(), &[vec![1, 2]]);

        let e = catalog("B24").unwrap();
        assert_eq!(e.full_matrix().entries(), &[vec![2, 2]]);

        let e = catalog("C36ms2").unwrap();
        assert_eq!(e.coupled().unwrap().memory(), 2);

        assert!(catalog("nope").is_err());
    }

    #[test]
    fn file_roundtrip() {
        let dir = std::env::temp_dir();
        let path = dir.join("scldpc_test_ensemble.json");
        std::fs::write(&path, r#"{ "components": [[[2,1]],[[1,2]]], "L": 20 }"#).unwrap();
        let e = from_file(&path).unwrap();
        let sc = e.coupled().unwrap();
        assert_eq!(sc.termination_length(), 20);
        assert_eq!(sc.memory(), 1);

        std::fs::write(&path, r#"{ "components": [[[3,3]]] }"#).unwrap();
        let e = from_file(&path).unwrap();
        assert!(e.coupled().is_none());
        std::fs::remove_file(&path).ok();
    }
}

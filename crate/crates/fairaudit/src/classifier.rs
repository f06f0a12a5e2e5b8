//! Classifiers expressible over a representation: binary labelings of cells.

use crate::domain::Label;
use crate::partition::CellPartition;

/// A binary labeling of the cells of a [`CellPartition`], i.e. any decision
/// rule expressible over the representation that induced the partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Classifier {
    labels: Vec<Label>,
}

impl Classifier {
    pub fn new(labels: Vec<Label>) -> Classifier {
        debug_assert!(labels.iter().all(|&l| l <= 1));
        Classifier { labels }
    }

    pub fn constant(cell_count: usize, label: Label) -> Classifier {
        Classifier { labels: vec![label; cell_count] }
    }

    /// The labeling encoded by `mask`: bit `i` is the label of cell `i`.
    /// Ascending masks enumerate labelings in the canonical witness order,
    /// so the first labeling found with some property is the canonical one.
    pub fn from_mask(cell_count: usize, mask: u64) -> Classifier {
        let labels = (0..cell_count).map(|ci| ((mask >> ci) & 1) as Label).collect();
        Classifier { labels }
    }

    /// Inverse of [`Classifier::from_mask`].
    pub fn mask(&self) -> u64 {
        self.labels
            .iter()
            .enumerate()
            .fold(0u64, |m, (ci, &l)| m | ((l as u64) << ci))
    }

    pub fn cell_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, cell: usize) -> Label {
        self.labels[cell]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// The flipped classifier 1-h.
    pub fn complement(&self) -> Classifier {
        Classifier { labels: self.labels.iter().map(|&l| 1 - l).collect() }
    }

    pub fn is_constant(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] == w[1])
    }

    /// Expand to per-instance labels.
    pub fn instance_labels(&self, cells: &CellPartition) -> Vec<Label> {
        let n: usize = cells.cells().iter().map(Vec::len).sum();
        (0..n).map(|i| self.labels[cells.cell_of(i)]).collect()
    }

    /// Lift an instance labeling that is constant on every cell; `None` if
    /// some cell is mixed.
    pub fn from_instance_labels(cells: &CellPartition, labels: &[Label]) -> Option<Classifier> {
        let mut out = Vec::with_capacity(cells.len());
        for cell in cells.cells() {
            let first = labels[cell[0]];
            if cell.iter().any(|&i| labels[i] != first) {
                return None;
            }
            out.push(first);
        }
        Some(Classifier { labels: out })
    }
}

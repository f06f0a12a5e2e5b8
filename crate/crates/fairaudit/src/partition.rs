//! Features, feature sets and the cell partitions they induce.
//!
//! Two instances share a cell exactly when every feature of the set agrees
//! on them. Cells are kept in a canonical order (sorted by their
//! lexicographically smallest member id, members sorted the same way) so
//! that every witness the crate reports is deterministic.

use std::collections::HashMap;

use crate::domain::Domain;
use crate::error::{Error, Result};

/// A named finite-valued feature, total over the domain it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    name: String,
    values: Vec<String>,
}

impl Feature {
    pub fn new(name: String, values: Vec<String>) -> Feature {
        Feature { name, values }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> &str {
        &self.values[i]
    }

    /// Distinct values in lexicographic order.
    pub fn value_set(&self) -> Vec<&str> {
        let mut vs: Vec<&str> = self.values.iter().map(String::as_str).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Indices of instances mapped to `value`.
    pub fn preimage(&self, value: &str) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] == value).collect()
    }

    fn check_domain(&self, domain: &Domain) -> Result<()> {
        if self.values.len() < domain.len() {
            return Err(Error::MissingFeatureValue {
                feature: self.name.clone(),
                id: domain.id(self.values.len()).to_string(),
            });
        }
        if self.values.len() > domain.len() {
            return Err(Error::Document(format!(
                "feature {:?} has {} values for a domain of {}",
                self.name,
                self.values.len(),
                domain.len()
            )));
        }
        Ok(())
    }
}

/// An ordered list of features with unique names. May be empty, in which
/// case it induces the single cell X.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureSet {
    features: Vec<Feature>,
}

impl FeatureSet {
    pub fn new(features: Vec<Feature>) -> Result<FeatureSet> {
        let mut seen = HashMap::new();
        for f in &features {
            if seen.insert(f.name().to_string(), ()).is_some() {
                return Err(Error::Document(format!("duplicate feature name {:?}", f.name())));
            }
        }
        Ok(FeatureSet { features })
    }

    pub fn empty() -> FeatureSet {
        FeatureSet { features: Vec::new() }
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn names(&self) -> Vec<&str> {
        self.features.iter().map(Feature::name).collect()
    }

    /// Set union with a single feature. Re-adding a feature that is already
    /// present (same name, same values) leaves the set unchanged.
    pub fn union(&self, f: &Feature) -> Result<FeatureSet> {
        if let Some(existing) = self.features.iter().find(|g| g.name() == f.name()) {
            if existing == f {
                return Ok(self.clone());
            }
            return Err(Error::Document(format!(
                "feature name {:?} present with different values",
                f.name()
            )));
        }
        let mut features = self.features.clone();
        features.push(f.clone());
        Ok(FeatureSet { features })
    }
}

/// A partition of the instance set into nonempty cells, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl CellPartition {
    /// Validate and canonicalize an explicit list of cells.
    pub fn from_cells(domain: &Domain, cells: Vec<Vec<usize>>) -> Result<CellPartition> {
        let n = domain.len();
        let mut cell_of = vec![usize::MAX; n];
        for (ci, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::Document("empty cell".into()));
            }
            for &i in cell {
                if i >= n {
                    return Err(Error::Document(format!("instance index {i} out of range")));
                }
                if cell_of[i] != usize::MAX {
                    return Err(Error::Document(format!(
                        "instance {:?} appears in two cells",
                        domain.id(i)
                    )));
                }
                cell_of[i] = ci;
            }
        }
        if let Some(i) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Document(format!(
                "instance {:?} is not covered by any cell",
                domain.id(i)
            )));
        }
        Ok(Self::canonicalize(domain, cells))
    }

    /// The trivial partition with a single cell (empty feature set).
    pub fn single_cell(domain: &Domain) -> CellPartition {
        Self::canonicalize(domain, vec![(0..domain.len()).collect()])
    }

    fn canonicalize(domain: &Domain, mut cells: Vec<Vec<usize>>) -> CellPartition {
        for cell in &mut cells {
            cell.sort_by(|&a, &b| domain.id(a).cmp(domain.id(b)));
        }
        cells.sort_by(|a, b| domain.id(a[0]).cmp(domain.id(b[0])));
        let mut cell_of = vec![0usize; domain.len()];
        for (ci, cell) in cells.iter().enumerate() {
            for &i in cell {
                cell_of[i] = ci;
            }
        }
        CellPartition { cells, cell_of }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, ci: usize) -> &[usize] {
        &self.cells[ci]
    }

    /// Cell index of an instance.
    pub fn cell_of(&self, i: usize) -> usize {
        self.cell_of[i]
    }

    /// Cells as sorted id lists, for reports and assertions.
    pub fn id_cells(&self, domain: &Domain) -> Vec<Vec<String>> {
        self.cells
            .iter()
            .map(|cell| cell.iter().map(|&i| domain.id(i).to_string()).collect())
            .collect()
    }

    /// Whether every cell of `self` lies inside a single cell of `coarser`.
    pub fn refines(&self, coarser: &CellPartition) -> bool {
        self.cells
            .iter()
            .all(|cell| cell.iter().all(|&i| coarser.cell_of[i] == coarser.cell_of[cell[0]]))
    }
}

/// Partition the domain by joint feature values.
pub fn induce_cells(domain: &Domain, fs: &FeatureSet) -> Result<CellPartition> {
    for f in fs.features() {
        f.check_domain(domain)?;
    }
    let mut groups: HashMap<Vec<&str>, Vec<usize>> = HashMap::new();
    for i in 0..domain.len() {
        let key: Vec<&str> = fs.features().iter().map(|f| f.value(i)).collect();
        groups.entry(key).or_default().push(i);
    }
    Ok(CellPartition::canonicalize(domain, groups.into_values().collect()))
}

/// All partitions of `{0, .., n-1}` as instance-to-cell assignment vectors
/// in restricted-growth form. Exhaustive verifiers iterate these.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    fn recurse(assignment: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if pos == assignment.len() {
            out.push(assignment.clone());
            return;
        }
        for cell in 0..=max_used + 1 {
            assignment[pos] = cell;
            recurse(assignment, pos + 1, max_used.max(cell), out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    assignment[0] = 0;
    recurse(&mut assignment, 1, 0, &mut out);
    out
}

/// Build a [`CellPartition`] from an assignment vector.
pub fn partition_from_assignment(domain: &Domain, assignment: &[usize]) -> CellPartition {
    let cells_count = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let mut cells = vec![Vec::new(); cells_count];
    for (i, &c) in assignment.iter().enumerate() {
        cells[c].push(i);
    }
    CellPartition::from_cells(domain, cells).expect("assignment vectors cover the domain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::parse_domain;

    const EIGHT: &str = r#"{
        "instances": [
            {"id":"x1","group":"A","weight":"1/8"},
            {"id":"x2","group":"A","weight":"1/8"},
            {"id":"x3","group":"D","weight":"1/8"},
            {"id":"x4","group":"D","weight":"1/8"},
            {"id":"x5","group":"A","weight":"1/8"},
            {"id":"x6","group":"A","weight":"1/8"},
            {"id":"x7","group":"D","weight":"1/8"},
            {"id":"x8","group":"D","weight":"1/8"}
        ],
        "tasks": {"t":{"x1":1,"x2":1,"x3":1,"x4":1,"x5":0,"x6":0,"x7":0,"x8":0}},
        "features": {
            "f1": {"x1":"1","x2":"0","x3":"1","x4":"0","x5":"1","x6":"0","x7":"1","x8":"0"},
            "f2": {"x1":"1","x2":"0","x3":"0","x4":"1","x5":"1","x6":"0","x7":"0","x8":"1"}
        }
    }"#;

    fn eight() -> crate::domain::Document {
        parse_domain(EIGHT).unwrap()
    }

    #[test]
    fn induces_the_four_paired_cells() {
        let doc = eight();
        let fs = FeatureSet::new(vec![
            doc.feature("f1").unwrap().clone(),
            doc.feature("f2").unwrap().clone(),
        ])
        .unwrap();
        let cells = induce_cells(&doc.domain, &fs).unwrap();
        assert_eq!(
            cells.id_cells(&doc.domain),
            vec![
                vec!["x1".to_string(), "x5".to_string()],
                vec!["x2".to_string(), "x6".to_string()],
                vec!["x3".to_string(), "x7".to_string()],
                vec!["x4".to_string(), "x8".to_string()],
            ]
        );
    }

    #[test]
    fn empty_feature_set_gives_single_cell() {
        let doc = eight();
        let cells = induce_cells(&doc.domain, &FeatureSet::empty()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells.cell(0).len(), 8);
    }

    #[test]
    fn refinement_and_reordering_invariance() {
        let doc = eight();
        let f1 = doc.feature("f1").unwrap().clone();
        let f2 = doc.feature("f2").unwrap().clone();
        let fwd = induce_cells(&doc.domain, &FeatureSet::new(vec![f1.clone(), f2.clone()]).unwrap())
            .unwrap();
        let rev =
            induce_cells(&doc.domain, &FeatureSet::new(vec![f2.clone(), f1.clone()]).unwrap())
                .unwrap();
        assert_eq!(fwd, rev);
        let coarse = induce_cells(&doc.domain, &FeatureSet::new(vec![f1]).unwrap()).unwrap();
        assert!(fwd.refines(&coarse));
        assert!(!coarse.refines(&fwd));
    }

    #[test]
    fn constant_feature_changes_nothing() {
        let doc = eight();
        let f1 = doc.feature("f1").unwrap().clone();
        let base = FeatureSet::new(vec![f1]).unwrap();
        let constant = Feature::new("c".into(), vec!["k".into(); doc.domain.len()]);
        let with = base.union(&constant).unwrap();
        assert_eq!(
            induce_cells(&doc.domain, &base).unwrap(),
            induce_cells(&doc.domain, &with).unwrap()
        );
    }

    #[test]
    fn feature_must_be_total_over_the_domain() {
        let doc = eight();
        let short = Feature::new("s".into(), vec!["0".into(); 5]);
        let err = induce_cells(&doc.domain, &FeatureSet::new(vec![short]).unwrap()).unwrap_err();
        assert!(
            matches!(err, crate::error::Error::MissingFeatureValue { .. }),
            "{err}"
        );
    }

    #[test]
    fn partition_validation() {
        let doc = eight();
        let err = CellPartition::from_cells(&doc.domain, vec![vec![0, 1], vec![1, 2]]).unwrap_err();
        assert!(err.to_string().contains("two cells"), "{err}");
        let err = CellPartition::from_cells(&doc.domain, vec![vec![0, 1]]).unwrap_err();
        assert!(err.to_string().contains("not covered"), "{err}");
    }

    #[test]
    fn set_partition_counts_match_bell_numbers() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(5).len(), 52);
        assert_eq!(set_partitions(6).len(), 203);
    }
}

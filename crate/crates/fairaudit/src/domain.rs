//! The finite probabilistic universe: instances, groups, tasks and exact
//! probability weights.
//!
//! A [`Domain`] is immutable after construction and every operation on it is
//! a pure function, so values can be shared freely across threads.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::partition::{CellPartition, Feature};
use crate::rational::{parse_rational, ratio_string, Rat};

/// Binary protected attribute. `A` is the advantaged group, `D` the
/// disadvantaged one; all computations are symmetric in the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    A,
    D,
}

impl Group {
    pub fn other(self) -> Group {
        match self {
            Group::A => Group::D,
            Group::D => Group::A,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::A => "A",
            Group::D => "D",
        }
    }
}

/// Ground-truth label. Only 0 and 1 are ever stored.
pub type Label = u8;

/// One of the four group-by-label slices of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrant {
    pub group: Group,
    pub label: Label,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant { group: Group::A, label: 0 },
        Quadrant { group: Group::A, label: 1 },
        Quadrant { group: Group::D, label: 0 },
        Quadrant { group: Group::D, label: 1 },
    ];
}

/// A cell score: probability-weighted fraction of label-1 instances.
///
/// Zero-mass cells score 0 with the flag set; they never contribute to any
/// unfairness or loss quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Score {
    pub value: Rat,
    pub zero_mass: bool,
}

/// Finite instance set with group membership, per-task labels and exact
/// probability weights summing to one.
#[derive(Debug, Clone)]
pub struct Domain {
    ids: Vec<String>,
    groups: Vec<Group>,
    weights: Vec<Rat>,
    tasks: BTreeMap<String, Vec<Label>>,
    id_index: HashMap<String, usize>,
}

impl Domain {
    /// Build and validate a domain from aligned columns.
    pub fn new(
        instances: Vec<(String, Group)>,
        weights: Vec<Rat>,
        tasks: BTreeMap<String, Vec<Label>>,
    ) -> Result<Domain> {
        let n = instances.len();
        if weights.len() != n {
            return Err(Error::Document(format!(
                "{} weights for {} instances",
                weights.len(),
                n
            )));
        }
        let mut id_index = HashMap::with_capacity(n);
        for (i, (id, _)) in instances.iter().enumerate() {
            if id_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        for ((id, _), w) in instances.iter().zip(&weights) {
            if w.is_negative() {
                return Err(Error::NegativeWeight {
                    id: id.clone(),
                    weight: ratio_string(w),
                });
            }
        }
        let total: Rat = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::WeightSum { got: ratio_string(&total) });
        }
        for (name, labels) in &tasks {
            if labels.len() != n {
                return Err(Error::Document(format!(
                    "task {name:?} labels {} instances, domain has {n}",
                    labels.len()
                )));
            }
            if let Some(bad) = labels.iter().find(|l| **l > 1) {
                return Err(Error::BadLabel {
                    task: name.clone(),
                    id: String::new(),
                    value: *bad as u64,
                });
            }
        }
        let (ids, groups) = instances.into_iter().unzip();
        Ok(Domain { ids, groups, weights, tasks, id_index })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).copied()
    }

    pub fn group(&self, i: usize) -> Group {
        self.groups[i]
    }

    pub fn weight(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn task_names(&self) -> impl Iterator<Item = &str> {
        self.tasks.keys().map(String::as_str)
    }

    pub fn task(&self, name: &str) -> Result<&[Label]> {
        self.tasks
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownTask(name.to_string()))
    }

    /// Same instances and tasks under a different weight vector.
    pub fn with_weights(&self, weights: Vec<Rat>) -> Result<Domain> {
        Domain::new(
            self.ids.iter().cloned().zip(self.groups.iter().copied()).collect(),
            weights,
            self.tasks.clone(),
        )
    }

    /// Same instances and weights with an extra task labeling.
    pub fn with_task(&self, name: &str, labels: Vec<Label>) -> Result<Domain> {
        let mut tasks = self.tasks.clone();
        tasks.insert(name.to_string(), labels);
        Domain::new(
            self.ids.iter().cloned().zip(self.groups.iter().copied()).collect(),
            self.weights.clone(),
            tasks,
        )
    }

    /// Total probability mass of a group.
    pub fn group_mass(&self, g: Group) -> Rat {
        self.groups
            .iter()
            .zip(&self.weights)
            .filter(|(gg, _)| **gg == g)
            .map(|(_, w)| w)
            .sum()
    }

    /// Instance indices lying in a quadrant, weight-0 instances included.
    pub fn quadrant_members(&self, task: &str, q: Quadrant) -> Result<Vec<usize>> {
        let labels = self.task(task)?;
        Ok((0..self.len())
            .filter(|&i| self.groups[i] == q.group && labels[i] == q.label)
            .collect())
    }

    /// P(X_{g,l}): the probability mass of a quadrant.
    pub fn quadrant_mass(&self, task: &str, q: Quadrant) -> Result<Rat> {
        let labels = self.task(task)?;
        Ok((0..self.len())
            .filter(|&i| self.groups[i] == q.group && labels[i] == q.label)
            .map(|i| &self.weights[i])
            .sum())
    }

    /// Ground-truth score of a cell: the P-weighted fraction of label-1
    /// instances among its members.
    pub fn score(&self, task: &str, cell: &[usize]) -> Result<Score> {
        if cell.is_empty() {
            return Err(Error::Precondition("score of an empty cell".into()));
        }
        let labels = self.task(task)?;
        let mass: Rat = cell.iter().map(|&i| &self.weights[i]).sum();
        if mass.is_zero() {
            return Ok(Score { value: Rat::zero(), zero_mass: true });
        }
        let positive: Rat = cell
            .iter()
            .filter(|&&i| labels[i] == 1)
            .map(|&i| &self.weights[i])
            .sum();
        Ok(Score { value: positive / mass, zero_mass: false })
    }
}

// --- document parsing ------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRepr {
    instances: Vec<InstanceRepr>,
    tasks: BTreeMap<String, BTreeMap<String, u64>>,
    #[serde(default)]
    features: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    partitions: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    notes: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRepr {
    id: String,
    group: String,
    weight: String,
}

/// A parsed and validated input document: the domain plus the named
/// features, named cell partitions and free-form fixture notes it carries.
#[derive(Debug, Clone)]
pub struct Document {
    pub domain: Domain,
    pub features: BTreeMap<String, Feature>,
    pub partitions: BTreeMap<String, CellPartition>,
    pub notes: Vec<String>,
}

impl Document {
    pub fn feature(&self, name: &str) -> Result<&Feature> {
        self.features
            .get(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn partition(&self, name: &str) -> Result<&CellPartition> {
        self.partitions
            .get(name)
            .ok_or_else(|| Error::UnknownPartition(name.to_string()))
    }
}

/// Parse a UTF-8 JSON document into a validated [`Document`].
pub fn parse_domain(text: &str) -> Result<Document> {
    let repr: DocumentRepr =
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;

    let mut instances = Vec::with_capacity(repr.instances.len());
    let mut weights = Vec::with_capacity(repr.instances.len());
    for inst in &repr.instances {
        let group = match inst.group.as_str() {
            "A" => Group::A,
            "D" => Group::D,
            other => {
                return Err(Error::Document(format!(
                    "instance {:?} has group {other:?}, expected \"A\" or \"D\"",
                    inst.id
                )))
            }
        };
        instances.push((inst.id.clone(), group));
        weights.push(parse_rational(&inst.weight)?);
    }

    // Resolve per-id maps against the instance list before Domain validation
    // so unknown/missing ids are reported by name.
    let id_set: HashMap<&str, usize> = instances
        .iter()
        .enumerate()
        .map(|(i, (id, _))| (id.as_str(), i))
        .collect();
    if id_set.len() != instances.len() {
        let mut seen = HashSet::new();
        for (id, _) in &instances {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
    }

    let mut tasks = BTreeMap::new();
    for (name, map) in &repr.tasks {
        let mut labels = vec![0u8; instances.len()];
        let mut covered = vec![false; instances.len()];
        for (id, value) in map {
            let &i = id_set.get(id.as_str()).ok_or_else(|| Error::UnknownLabelId {
                task: name.clone(),
                id: id.clone(),
            })?;
            if *value > 1 {
                return Err(Error::BadLabel {
                    task: name.clone(),
                    id: id.clone(),
                    value: *value,
                });
            }
            labels[i] = *value as Label;
            covered[i] = true;
        }
        if let Some(missing) = covered.iter().position(|c| !c) {
            return Err(Error::MissingLabel {
                task: name.clone(),
                id: instances[missing].0.clone(),
            });
        }
        tasks.insert(name.clone(), labels);
    }

    let domain = Domain::new(instances, weights, tasks)?;

    let mut features = BTreeMap::new();
    for (name, map) in &repr.features {
        let mut values = vec![String::new(); domain.len()];
        let mut covered = vec![false; domain.len()];
        for (id, value) in map {
            let i = domain.index_of(id).ok_or_else(|| Error::UnknownFeatureId {
                feature: name.clone(),
                id: id.clone(),
            })?;
            values[i] = value.clone();
            covered[i] = true;
        }
        if let Some(missing) = covered.iter().position(|c| !c) {
            return Err(Error::MissingFeatureValue {
                feature: name.clone(),
                id: domain.id(missing).to_string(),
            });
        }
        features.insert(name.clone(), Feature::new(name.clone(), values));
    }

    let mut partitions = BTreeMap::new();
    for (name, cells) in &repr.partitions {
        let mut index_cells = Vec::with_capacity(cells.len());
        for cell in cells {
            let mut members = Vec::with_capacity(cell.len());
            for id in cell {
                let i = domain.index_of(id).ok_or_else(|| Error::BadPartition {
                    name: name.clone(),
                    reason: format!("unknown instance {id:?}"),
                })?;
                members.push(i);
            }
            index_cells.push(members);
        }
        let partition = CellPartition::from_cells(&domain, index_cells)
            .map_err(|e| Error::BadPartition { name: name.clone(), reason: e.to_string() })?;
        partitions.insert(name.clone(), partition);
    }

    Ok(Document { domain, features, partitions, notes: repr.notes })
}

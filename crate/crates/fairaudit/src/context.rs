//! Context-dependence of single features: non-triviality predicates,
//! generic feature/distribution pairs, and the constructive generation of
//! feature-set contexts in which adding the same feature raises or lowers
//! accuracy-driven unfairness.

use num_traits::Zero;

use crate::audit::{
    accuracy_driven_unfairness, adversarial_unfairness, fairness_enabling, AccuracyAudit,
    ZeroMassCells, DEFAULT_CELL_BOUND, DEFAULT_MINIMIZER_CAP,
};
use crate::domain::{Domain, Group, Label, Quadrant};
use crate::error::{Error, Result};
use crate::metrics::Notion;
use crate::partition::{induce_cells, Feature, FeatureSet};
use crate::rational::{rat, Rat};

/// Default bound on the instance count for the generic-witness search.
pub const DEFAULT_GENERIC_SEARCH_BOUND: usize = 16;

/// Witness sets and parameters of a generic feature/distribution pair.
/// `l2` and `g2` are the complements of `l1` and `g1`.
#[derive(Debug, Clone)]
pub struct GenericWitness {
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub c3: Vec<usize>,
    pub y1: String,
    pub y2: String,
    pub y3: String,
    pub l1: Label,
    pub g1: Group,
}

/// The two constructed contexts for a feature, with the four audit values.
#[derive(Debug, Clone)]
pub struct ContextPair {
    /// Adding the feature raises accuracy-driven unfairness here.
    pub fs_increasing: FeatureSet,
    /// Adding the feature lowers accuracy-driven unfairness here.
    pub fs_decreasing: FeatureSet,
    pub increasing_without: Rat,
    pub increasing_with: Rat,
    pub decreasing_without: Rat,
    pub decreasing_with: Rat,
}

/// Direction of a feature's effect on an audited quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeletionDirection {
    Increase,
    Decrease,
    Neutral,
}

impl DeletionDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            DeletionDirection::Increase => "increase",
            DeletionDirection::Decrease => "decrease",
            DeletionDirection::Neutral => "neutral",
        }
    }
}

/// Value of a deletion-effect audit: a rational for adversarial and
/// accuracy-driven objectives, a verdict for fairness-enabling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditValue {
    Unfairness(Rat),
    Enabled(bool),
}

#[derive(Debug, Clone)]
pub struct DeletionEffect {
    pub without: AuditValue,
    pub with_feature: AuditValue,
    pub direction: DeletionDirection,
}

fn quadrant_of(domain: &Domain, labels: &[Label], i: usize) -> Quadrant {
    Quadrant { group: domain.group(i), label: labels[i] }
}

/// Non-committing test: two distinct values whose preimages each meet all
/// four quadrants, set-theoretically. Value pairs are scanned in descending
/// lexicographic order, so a binary 0/1 feature reports the witness (1, 0).
pub fn is_non_committing(
    f: &Feature,
    domain: &Domain,
    task: &str,
) -> Result<Option<(String, String)>> {
    let labels = domain.task(task)?;
    let values = f.value_set();
    let hits_all = |value: &str| {
        Quadrant::ALL.iter().all(|q| {
            (0..domain.len())
                .any(|i| f.value(i) == value && quadrant_of(domain, labels, i) == *q)
        })
    };
    let full: Vec<&str> = values.iter().copied().filter(|v| hits_all(v)).collect();
    for y1 in full.iter().rev() {
        for y2 in full.iter().rev() {
            if y1 != y2 {
                return Ok(Some((y1.to_string(), y2.to_string())));
            }
        }
    }
    Ok(None)
}

/// A (value, group, label) combination with too few instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KAnonymityViolation {
    pub value: String,
    pub group: Group,
    pub label: Label,
    pub count: usize,
}

/// k-anonymity test: every (value, group, label) combination holds either
/// no instances or at least k. Returns the first violating combination in
/// (value, group, label) order together with its count.
pub fn is_k_anonymous(
    f: &Feature,
    domain: &Domain,
    task: &str,
    k: usize,
) -> Result<(bool, Option<KAnonymityViolation>)> {
    if k < 1 {
        return Err(Error::Precondition("k-anonymity requires k >= 1".into()));
    }
    let labels = domain.task(task)?;
    for value in f.value_set() {
        for group in [Group::A, Group::D] {
            for label in [0u8, 1u8] {
                let count = (0..domain.len())
                    .filter(|&i| {
                        f.value(i) == value && domain.group(i) == group && labels[i] == label
                    })
                    .count();
                if count > 0 && count < k {
                    let violation = KAnonymityViolation {
                        value: value.to_string(),
                        group,
                        label,
                        count,
                    };
                    return Ok((false, Some(violation)));
                }
            }
        }
    }
    Ok((true, None))
}

/// Zero-mass conditioning events rate as zero, matching the crate-wide
/// convention for rates over empty slices.
fn rate(numerator: &Rat, denominator: &Rat) -> Rat {
    if denominator.is_zero() {
        Rat::zero()
    } else {
        numerator / denominator
    }
}

struct GenericContext<'a> {
    domain: &'a Domain,
    labels: &'a [Label],
}

impl GenericContext<'_> {
    fn mass(&self, set: &[usize]) -> Rat {
        set.iter().map(|&i| self.domain.weight(i)).sum()
    }

    fn mass_in_quadrant(&self, set: &[usize], q: Quadrant) -> Rat {
        set.iter()
            .filter(|&&i| quadrant_of(self.domain, self.labels, i) == q)
            .map(|&i| self.domain.weight(i))
            .sum()
    }

    fn mass_with_label(&self, set: &[usize], label: Label) -> Rat {
        set.iter()
            .filter(|&&i| self.labels[i] == label)
            .map(|&i| self.domain.weight(i))
            .sum()
    }

    fn quadrant_mass(&self, q: Quadrant) -> Rat {
        (0..self.domain.len())
            .filter(|&i| quadrant_of(self.domain, self.labels, i) == q)
            .map(|i| self.domain.weight(i))
            .sum()
    }
}

/// Evaluate the six generic-pair conditions for a witness, exactly.
pub fn generic_conditions(
    f: &Feature,
    domain: &Domain,
    task: &str,
    w: &GenericWitness,
) -> Result<[bool; 6]> {
    let labels = domain.task(task)?;
    let ctx = GenericContext { domain, labels };
    let l2 = 1 - w.l1;
    let g2 = w.g1.other();
    let in_preimage = |set: &[usize], value: &str| set.iter().all(|&i| f.value(i) == value);

    let c1_mass = ctx.mass(&w.c1);
    let c2_mass = ctx.mass(&w.c2);
    let cond1 = c1_mass > c2_mass;
    let cond2 = w.y1 != w.y2 && in_preimage(&w.c1, &w.y1) && in_preimage(&w.c2, &w.y2);
    let cond3 = w.c1.iter().all(|&i| labels[i] == w.l1)
        && w
            .c2
            .iter()
            .all(|&i| quadrant_of(domain, labels, i) == Quadrant { group: w.g1, label: l2 });
    let cond4 = in_preimage(&w.c3, &w.y3);
    let cond5 = ctx.mass_with_label(&w.c3, w.l1) >= ctx.mass_with_label(&w.c3, l2);

    let q_g2_l2 = Quadrant { group: g2, label: l2 };
    let q_g1_l2 = Quadrant { group: w.g1, label: l2 };
    let mut c2_union_c3 = w.c2.clone();
    for &i in &w.c3 {
        if !c2_union_c3.contains(&i) {
            c2_union_c3.push(i);
        }
    }
    let lhs = rate(&ctx.mass_in_quadrant(&w.c3, q_g2_l2), &ctx.quadrant_mass(q_g2_l2));
    let rhs = rate(&ctx.mass_in_quadrant(&c2_union_c3, q_g1_l2), &ctx.quadrant_mass(q_g1_l2));
    let cond6 = lhs >= rhs;

    Ok([cond1, cond2, cond3, cond4, cond5, cond6])
}

/// Whether a witness satisfies all six conditions.
pub fn is_generic(f: &Feature, domain: &Domain, task: &str, w: &GenericWitness) -> Result<bool> {
    Ok(generic_conditions(f, domain, task, w)?.iter().all(|c| *c))
}

/// Deterministic search for a generic witness: (l1, G1) pairs in the fixed
/// order (1,A),(1,D),(0,A),(0,D); values in lexicographic order; candidate
/// sets grown smallest-first (singletons in id order, then the full
/// available set). C3 is drawn from outside C1 and C2. Every returned
/// witness is re-verified against all six conditions.
pub fn generic_witness(
    f: &Feature,
    domain: &Domain,
    task: &str,
    size_bound: usize,
) -> Result<Option<GenericWitness>> {
    if domain.len() > size_bound {
        return Err(Error::SizeBoundExceeded { instances: domain.len(), bound: size_bound });
    }
    let labels = domain.task(task)?;
    let values = f.value_set();

    let by_id = |mut set: Vec<usize>| {
        set.sort_by(|&a, &b| domain.id(a).cmp(domain.id(b)));
        set
    };
    let candidates = |available: &[usize]| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> =
            available.iter().map(|&i| vec![i]).collect();
        if available.len() > 1 {
            out.push(available.to_vec());
        }
        out
    };

    for (l1, g1) in [(1u8, Group::A), (1, Group::D), (0, Group::A), (0, Group::D)] {
        let l2 = 1 - l1;
        for &y1 in &values {
            let c1_base = by_id(
                f.preimage(y1).into_iter().filter(|&i| labels[i] == l1).collect(),
            );
            if c1_base.is_empty() {
                continue;
            }
            for &y2 in &values {
                if y2 == y1 {
                    continue;
                }
                let c2_base = by_id(
                    f.preimage(y2)
                        .into_iter()
                        .filter(|&i| domain.group(i) == g1 && labels[i] == l2)
                        .collect(),
                );
                if c2_base.is_empty() {
                    continue;
                }
                for c1 in candidates(&c1_base) {
                    for c2 in candidates(&c2_base) {
                        for &y3 in &values {
                            let available = by_id(
                                f.preimage(y3)
                                    .into_iter()
                                    .filter(|i| !c1.contains(i) && !c2.contains(i))
                                    .collect(),
                            );
                            if available.is_empty() {
                                continue;
                            }
                            let g2 = g1.other();
                            let focused: Vec<usize> = available
                                .iter()
                                .copied()
                                .filter(|&i| {
                                    labels[i] == l1
                                        || (domain.group(i) == g2 && labels[i] == l2)
                                })
                                .collect();
                            let mut c3_candidates = vec![available.clone()];
                            if !focused.is_empty() && focused != available {
                                c3_candidates.push(focused);
                            }
                            for c3 in c3_candidates {
                                let witness = GenericWitness {
                                    c1: c1.clone(),
                                    c2: c2.clone(),
                                    c3,
                                    y1: y1.to_string(),
                                    y2: y2.to_string(),
                                    y3: y3.to_string(),
                                    l1,
                                    g1,
                                };
                                if is_generic(f, domain, task, &witness)? {
                                    return Ok(Some(witness));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Carve witness sets from a non-committing feature and assign the fixed
/// weight schedule 1/5, 1/10, 3/10, 1/5, 1/5 to C1, C2, C3's l1 part,
/// C3's (G2,l2) part and C4, uniformly within each set and zero elsewhere.
/// Returns the new weight vector and the witness, re-verified.
pub fn construct_generic_distribution(
    f: &Feature,
    domain: &Domain,
    task: &str,
) -> Result<(Vec<Rat>, GenericWitness)> {
    let labels = domain.task(task)?;
    if is_non_committing(f, domain, task)?.is_none() {
        return Err(Error::Precondition(format!(
            "feature {:?} is not non-committing for the task",
            f.name()
        )));
    }
    let by_id = |mut set: Vec<usize>| {
        set.sort_by(|&a, &b| domain.id(a).cmp(domain.id(b)));
        set
    };
    let values = f.value_set();
    for &y1 in &values {
        for &y2 in &values {
            if y1 == y2 {
                continue;
            }
            // C2 and C4 split the (y2, A, 0) slice, which must hold at
            // least two instances.
            let slice = by_id(
                f.preimage(y2)
                    .into_iter()
                    .filter(|&i| domain.group(i) == Group::A && labels[i] == 0)
                    .collect(),
            );
            if slice.len() < 2 {
                continue;
            }
            let c2 = vec![slice[0]];
            let c4: Vec<usize> = slice[1..].to_vec();

            // C1 is one positive instance of the y1 slice; C3 takes one
            // remaining instance per quadrant and must reach label 1 and
            // the (D, 0) quadrant.
            let positives = by_id(
                f.preimage(y1).into_iter().filter(|&i| labels[i] == 1).collect(),
            );
            let Some(&c1_pick) = positives.first() else { continue };
            let c1 = vec![c1_pick];
            let mut c3 = Vec::new();
            for q in [
                Quadrant { group: Group::A, label: 1 },
                Quadrant { group: Group::D, label: 1 },
                Quadrant { group: Group::A, label: 0 },
                Quadrant { group: Group::D, label: 0 },
            ] {
                let pick = by_id(
                    f.preimage(y1)
                        .into_iter()
                        .filter(|&i| i != c1_pick && quadrant_of(domain, labels, i) == q)
                        .collect(),
                );
                if let Some(&i) = pick.first() {
                    c3.push(i);
                }
            }
            let c3 = by_id(c3);
            let has_positive = c3.iter().any(|&i| labels[i] == 1);
            let has_d0 = c3
                .iter()
                .any(|&i| domain.group(i) == Group::D && labels[i] == 0);
            if !has_positive || !has_d0 {
                continue;
            }

            let mut weights = vec![Rat::zero(); domain.len()];
            let spread = |weights: &mut Vec<Rat>, set: &[usize], total: Rat| {
                for &i in set {
                    weights[i] = &total / Rat::from_integer((set.len() as i64).into());
                }
            };
            let c3_pos: Vec<usize> =
                c3.iter().copied().filter(|&i| labels[i] == 1).collect();
            let c3_d0: Vec<usize> = c3
                .iter()
                .copied()
                .filter(|&i| domain.group(i) == Group::D && labels[i] == 0)
                .collect();
            spread(&mut weights, &c1, rat(1, 5));
            spread(&mut weights, &c2, rat(1, 10));
            spread(&mut weights, &c3_pos, rat(3, 10));
            spread(&mut weights, &c3_d0, rat(1, 5));
            spread(&mut weights, &c4, rat(1, 5));

            let witness = GenericWitness {
                c1,
                c2,
                c3,
                y1: y1.to_string(),
                y2: y2.to_string(),
                y3: y1.to_string(),
                l1: 1,
                g1: Group::A,
            };
            let reweighted = domain.with_weights(weights.clone())?;
            let conditions = generic_conditions(f, &reweighted, task, &witness)?;
            if let Some(failed) = conditions.iter().position(|c| !c) {
                return Err(Error::InternalInvariant(format!(
                    "constructed distribution fails generic condition {}",
                    failed + 1
                )));
            }
            return Ok((weights, witness));
        }
    }
    Err(Error::Precondition(format!(
        "feature {:?}: no value pair admits the witness carve; non-committing \
         2-anonymous features always do",
        f.name()
    )))
}

fn synthetic_name(base: &str, taken: &str) -> String {
    if base == taken {
        format!("{base}_ctx")
    } else {
        base.to_string()
    }
}

fn run_accuracy(domain: &Domain, task: &str, fs: &FeatureSet) -> Result<AccuracyAudit> {
    let cells = induce_cells(domain, fs)?;
    accuracy_driven_unfairness(
        domain,
        task,
        &cells,
        &rat(1, 2),
        Notion::Eo,
        ZeroMassCells::BothLabels,
        DEFAULT_MINIMIZER_CAP,
    )
}

/// Build the two context feature sets for a generic pair: one where the
/// merged cell C1+C2 is the only impurity (adding f then separates it and
/// removes all unfairness), and one that additionally keeps C3 merged
/// (adding f separates C1+C2 but not C3, concentrating the remaining error
/// on one group). Asserts both strict audit inequalities before returning.
pub fn construct_context_featuresets(
    f: &Feature,
    domain: &Domain,
    task: &str,
    weights: &[Rat],
    witness: &GenericWitness,
) -> Result<ContextPair> {
    let reweighted = domain.with_weights(weights.to_vec())?;
    let labels = reweighted.task(task)?.to_vec();
    let conditions = generic_conditions(f, &reweighted, task, witness)?;
    if let Some(failed) = conditions.iter().position(|c| !c) {
        return Err(Error::Precondition(format!(
            "witness fails generic condition {}",
            failed + 1
        )));
    }
    let ctx = GenericContext { domain: &reweighted, labels: &labels };
    if ctx.mass(&witness.c2).is_zero() {
        return Err(Error::Precondition("witness set C2 carries no mass".into()));
    }
    if ctx.mass_with_label(&witness.c3, witness.l1)
        <= ctx.mass_with_label(&witness.c3, 1 - witness.l1)
    {
        return Err(Error::Precondition(
            "witness set C3 needs a strict majority of the C1 label".into(),
        ));
    }
    if witness.c3.iter().any(|i| witness.c1.contains(i) || witness.c2.contains(i)) {
        return Err(Error::Precondition("witness set C3 overlaps C1 or C2".into()));
    }

    let merged: Vec<bool> = {
        let mut m = vec![false; domain.len()];
        for &i in witness.c1.iter().chain(&witness.c2) {
            m[i] = true;
        }
        m
    };
    let kept: Vec<bool> = {
        let mut m = vec![false; domain.len()];
        for &i in &witness.c3 {
            m[i] = true;
        }
        m
    };
    let label_token = |i: usize| if labels[i] == 1 { "t1" } else { "t0" };

    let dec_name = synthetic_name("ctx_base", f.name());
    let dec_feature = Feature::new(
        dec_name,
        (0..domain.len())
            .map(|i| if merged[i] { "merged".to_string() } else { label_token(i).to_string() })
            .collect(),
    );
    let inc_name = synthetic_name("ctx_keep", f.name());
    let inc_feature = Feature::new(
        inc_name,
        (0..domain.len())
            .map(|i| {
                if merged[i] {
                    "merged".to_string()
                } else if kept[i] {
                    "kept".to_string()
                } else {
                    label_token(i).to_string()
                }
            })
            .collect(),
    );

    let fs_decreasing = FeatureSet::new(vec![dec_feature])?;
    let fs_increasing = FeatureSet::new(vec![inc_feature])?;
    let decreasing_without = run_accuracy(&reweighted, task, &fs_decreasing)?.value;
    let decreasing_with = run_accuracy(&reweighted, task, &fs_decreasing.union(f)?)?.value;
    let increasing_without = run_accuracy(&reweighted, task, &fs_increasing)?.value;
    let increasing_with = run_accuracy(&reweighted, task, &fs_increasing.union(f)?)?.value;

    if decreasing_with >= decreasing_without {
        return Err(Error::InternalInvariant(format!(
            "adding the feature did not lower accuracy-driven unfairness: {decreasing_without} -> {decreasing_with}"
        )));
    }
    if increasing_with <= increasing_without {
        return Err(Error::InternalInvariant(format!(
            "adding the feature did not raise accuracy-driven unfairness: {increasing_without} -> {increasing_with}"
        )));
    }
    Ok(ContextPair {
        fs_increasing,
        fs_decreasing,
        increasing_without,
        increasing_with,
        decreasing_without,
        decreasing_with,
    })
}

/// Audit parameters shared by the deletion-effect report.
#[derive(Debug, Clone)]
pub struct DeletionParams {
    pub notion: Notion,
    pub alpha: Rat,
    pub epsilon: Rat,
    pub eta: Rat,
    pub cell_bound: usize,
    pub minimizer_cap: usize,
}

impl Default for DeletionParams {
    fn default() -> Self {
        DeletionParams {
            notion: Notion::Eo,
            alpha: rat(1, 2),
            epsilon: rat(0, 1),
            eta: rat(0, 1),
            cell_bound: DEFAULT_CELL_BOUND,
            minimizer_cap: DEFAULT_MINIMIZER_CAP,
        }
    }
}

/// Compare an audit of a feature set with and without one extra feature.
pub fn deletion_effect(
    domain: &Domain,
    task: &str,
    fs: &FeatureSet,
    f: &Feature,
    objective: crate::audit::Objective,
    params: &DeletionParams,
) -> Result<DeletionEffect> {
    use crate::audit::Objective;
    let without_cells = induce_cells(domain, fs)?;
    let with_cells = induce_cells(domain, &fs.union(f)?)?;
    let eval = |cells: &crate::partition::CellPartition| -> Result<AuditValue> {
        Ok(match objective {
            Objective::Adversarial => AuditValue::Unfairness(
                adversarial_unfairness(domain, task, cells, params.notion)?.value,
            ),
            Objective::AccuracyDriven => AuditValue::Unfairness(
                accuracy_driven_unfairness(
                    domain,
                    task,
                    cells,
                    &params.alpha,
                    params.notion,
                    ZeroMassCells::BothLabels,
                    params.minimizer_cap,
                )?
                .value,
            ),
            Objective::FairnessEnabling => AuditValue::Enabled(
                fairness_enabling(
                    domain,
                    task,
                    cells,
                    &params.epsilon,
                    &params.eta,
                    &params.alpha,
                    params.notion,
                    params.cell_bound,
                )?
                .enabled,
            ),
        })
    };
    let without = eval(&without_cells)?;
    let with_feature = eval(&with_cells)?;
    let direction = match (&without, &with_feature) {
        (AuditValue::Unfairness(a), AuditValue::Unfairness(b)) => match b.cmp(a) {
            std::cmp::Ordering::Greater => DeletionDirection::Increase,
            std::cmp::Ordering::Less => DeletionDirection::Decrease,
            std::cmp::Ordering::Equal => DeletionDirection::Neutral,
        },
        (AuditValue::Enabled(a), AuditValue::Enabled(b)) => match (a, b) {
            (false, true) => DeletionDirection::Increase,
            (true, false) => DeletionDirection::Decrease,
            _ => DeletionDirection::Neutral,
        },
        _ => unreachable!("objectives evaluate to one value kind"),
    };
    Ok(DeletionEffect { without, with_feature, direction })
}

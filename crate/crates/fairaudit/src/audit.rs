//! Representation audits under the three agent objectives: adversarial
//! unfairness, accuracy-driven unfairness, and fairness-enabling queries,
//! plus the exhaustive-enumeration oracle and the loss/unfairness frontier.
//!
//! Adversarial unfairness is computed exactly without enumeration. For DP
//! the per-cell contribution to the positive-rate gap is linear, so the
//! maximum is the positive part of the contribution sum. For EO the maximum
//! of 1/2(|dFNR| + |dFPR|) equals the maximum over the four sign patterns of
//! a per-cell-separable linear form. The oracle recomputes the same contract
//! by enumerating every labeling and scoring it with the definitional rate
//! formulas; tests quantify agreement of the two routes.

use num_traits::{One, Signed, Zero};

use crate::classifier::Classifier;
use crate::domain::{Domain, Group, Quadrant};
use crate::error::{Error, Result};
use crate::metrics::{check_alpha, eo_value, GroupRates, Notion, Rate};
use crate::partition::CellPartition;
use crate::rational::Rat;

/// Default bound on cell counts for exhaustive enumeration.
pub const DEFAULT_CELL_BOUND: usize = 22;

/// Default cap on the size of an explicitly materialized minimizer set.
pub const DEFAULT_MINIMIZER_CAP: usize = 1 << 16;

/// Agent objectives a representation can be audited under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Adversarial,
    AccuracyDriven,
    FairnessEnabling,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Adversarial => "adversarial",
            Objective::AccuracyDriven => "accuracy",
            Objective::FairnessEnabling => "enabling",
        }
    }
}

/// How zero-mass cells participate in minimizer sets. They never affect a
/// loss or unfairness value either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroMassCells {
    /// Zero-mass cells take both labels in the minimizer set.
    #[default]
    BothLabels,
    /// Pin zero-mass cells to label 0 to shrink enumeration.
    PinZero,
}

/// Which positive-labeling rule a threshold classifier uses.
///
/// Minimizing the weighted loss labels a cell 1 exactly when its score
/// exceeds `1 - alpha`; the score-threshold rule labels it 1 when the score
/// exceeds `alpha`. The two agree at `alpha = 1/2`. Loss minimization is the
/// default everywhere; the score rule is exposed for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdRule {
    #[default]
    LossMinimizing,
    ScoreThreshold,
}

/// Result of an adversarial audit: the exact maximum and the canonically
/// first maximizing witness.
#[derive(Debug, Clone)]
pub struct AdversarialAudit {
    pub notion: Notion,
    pub value: Rat,
    pub witness: Classifier,
}

/// Result of an accuracy-driven audit.
#[derive(Debug, Clone)]
pub struct AccuracyAudit {
    pub notion: Notion,
    pub value: Rat,
    /// Canonically first loss minimizer attaining `value`.
    pub witness: Classifier,
    pub min_loss: Rat,
    pub minimizer_count: usize,
}

/// Result of a fairness-enabling query.
#[derive(Debug, Clone)]
pub struct EnablingAudit {
    pub notion: Notion,
    pub enabled: bool,
    /// Canonically first classifier meeting both bounds.
    pub witness: Option<Classifier>,
}

/// A Pareto-minimal (loss, unfairness) point.
#[derive(Debug, Clone)]
pub struct FrontierPoint {
    pub loss: Rat,
    pub unfairness: Rat,
    pub classifier: Classifier,
}

/// The complete set of weighted-loss minimizers over a representation.
#[derive(Debug, Clone)]
pub struct BayesOptimalSet {
    pub minimizers: Vec<Classifier>,
    pub min_loss: Rat,
    /// Cells whose two labelings tie exactly in loss (zero-mass cells
    /// included under [`ZeroMassCells::BothLabels`]).
    pub tied_cells: Vec<usize>,
}

/// Per-cell mass decomposition shared by every audit in this module.
struct CellTable {
    /// Rate contribution of the cell to FNR_A when labeled 0, etc.
    a1: Vec<Rat>,
    d1: Vec<Rat>,
    a0: Vec<Rat>,
    d0: Vec<Rat>,
    /// Probability mass of label-1 / label-0 instances in the cell.
    m1: Vec<Rat>,
    m0: Vec<Rat>,
}

impl CellTable {
    fn new(domain: &Domain, task: &str, cells: &CellPartition) -> Result<CellTable> {
        let labels = domain.task(task)?;
        let mass = |g, l| domain.quadrant_mass(task, Quadrant { group: g, label: l });
        let (ma1, ma0, md1, md0) =
            (mass(Group::A, 1)?, mass(Group::A, 0)?, mass(Group::D, 1)?, mass(Group::D, 0)?);
        let k = cells.len();
        let mut table = CellTable {
            a1: vec![Rat::zero(); k],
            d1: vec![Rat::zero(); k],
            a0: vec![Rat::zero(); k],
            d0: vec![Rat::zero(); k],
            m1: vec![Rat::zero(); k],
            m0: vec![Rat::zero(); k],
        };
        for (ci, cell) in cells.cells().iter().enumerate() {
            for &i in cell {
                let w = domain.weight(i);
                match (domain.group(i), labels[i]) {
                    (Group::A, 1) => table.a1[ci] += w,
                    (Group::A, 0) => table.a0[ci] += w,
                    (Group::D, 1) => table.d1[ci] += w,
                    (Group::D, 0) => table.d0[ci] += w,
                    _ => unreachable!("labels are validated to 0/1"),
                }
                if labels[i] == 1 {
                    table.m1[ci] += w;
                } else {
                    table.m0[ci] += w;
                }
            }
        }
        let normalize = |col: &mut Vec<Rat>, mass: &Rat| {
            for v in col.iter_mut() {
                if mass.is_zero() {
                    *v = Rat::zero();
                } else {
                    *v /= mass;
                }
            }
        };
        normalize(&mut table.a1, &ma1);
        normalize(&mut table.a0, &ma0);
        normalize(&mut table.d1, &md1);
        normalize(&mut table.d0, &md0);
        Ok(table)
    }

    fn len(&self) -> usize {
        self.m1.len()
    }

    /// Definitional EO rates of a labeling: rates accumulate cell by cell.
    fn rates_of(&self, h: &Classifier) -> GroupRates {
        let mut fnr_a = Rat::zero();
        let mut fnr_d = Rat::zero();
        let mut fpr_a = Rat::zero();
        let mut fpr_d = Rat::zero();
        for ci in 0..self.len() {
            if h.label(ci) == 0 {
                fnr_a += &self.a1[ci];
                fnr_d += &self.d1[ci];
            } else {
                fpr_a += &self.a0[ci];
                fpr_d += &self.d0[ci];
            }
        }
        // zero_mass flags are not tracked here; callers needing them go
        // through metrics::group_rates.
        GroupRates {
            fpr_a: Rate { value: fpr_a, zero_mass: false },
            fpr_d: Rate { value: fpr_d, zero_mass: false },
            fnr_a: Rate { value: fnr_a, zero_mass: false },
            fnr_d: Rate { value: fnr_d, zero_mass: false },
        }
    }

    fn eo_of(&self, h: &Classifier) -> Rat {
        eo_value(&self.rates_of(h))
    }

    fn loss_of(&self, h: &Classifier, alpha: &Rat) -> Rat {
        let mut loss = Rat::zero();
        let beta = Rat::one() - alpha;
        for ci in 0..self.len() {
            if h.label(ci) == 0 {
                loss += alpha * &self.m1[ci];
            } else {
                loss += &beta * &self.m0[ci];
            }
        }
        loss
    }
}

/// Per-cell contribution to P(h=1|A) - P(h=1|D); requires both groups to
/// carry positive mass.
fn dp_deltas(domain: &Domain, cells: &CellPartition) -> Result<Vec<Rat>> {
    let mass_a = domain.group_mass(Group::A);
    let mass_d = domain.group_mass(Group::D);
    if mass_a.is_zero() {
        return Err(Error::EmptyGroup(Group::A));
    }
    if mass_d.is_zero() {
        return Err(Error::EmptyGroup(Group::D));
    }
    let mut deltas = vec![Rat::zero(); cells.len()];
    for (ci, cell) in cells.cells().iter().enumerate() {
        for &i in cell {
            match domain.group(i) {
                Group::A => deltas[ci] += domain.weight(i) / &mass_a,
                Group::D => deltas[ci] -= domain.weight(i) / &mass_d,
            }
        }
    }
    Ok(deltas)
}

fn dp_of_deltas(deltas: &[Rat], h: &Classifier) -> Rat {
    let mut sum = Rat::zero();
    for (ci, d) in deltas.iter().enumerate() {
        if h.label(ci) == 1 {
            sum += d;
        }
    }
    sum.abs()
}

const SIGN_PATTERNS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

fn signed(v: Rat, s: i8) -> Rat {
    if s >= 0 {
        v
    } else {
        -v
    }
}

/// Greatest EO value attainable when some cell labels are pinned.
fn eo_max_with_fixed(table: &CellTable, fixed: &[Option<u8>]) -> Rat {
    let mut best: Option<Rat> = None;
    for (s1, s2) in SIGN_PATTERNS {
        let mut total = Rat::zero();
        for ci in 0..table.len() {
            let payoff0 = signed(&table.a1[ci] - &table.d1[ci], s1);
            let payoff1 = signed(&table.a0[ci] - &table.d0[ci], s2);
            total += match fixed[ci] {
                Some(0) => payoff0,
                Some(_) => payoff1,
                None => payoff0.max(payoff1),
            };
        }
        if best.as_ref().is_none_or(|b| &total > b) {
            best = Some(total);
        }
    }
    best.expect("four sign patterns") / Rat::from_integer(2.into())
}

/// Exact maximum unfairness over every classifier expressible over the
/// representation, with the canonically first maximizing witness (the one
/// of smallest mask).
pub fn adversarial_unfairness(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    notion: Notion,
) -> Result<AdversarialAudit> {
    match notion {
        Notion::Eo => {
            let table = CellTable::new(domain, task, cells)?;
            let mut fixed: Vec<Option<u8>> = vec![None; table.len()];
            let value = eo_max_with_fixed(&table, &fixed);
            // minimize the witness mask: settle high cells first, prefer 0
            for ci in (0..table.len()).rev() {
                fixed[ci] = Some(0);
                if eo_max_with_fixed(&table, &fixed) != value {
                    fixed[ci] = Some(1);
                }
            }
            let labels = fixed.into_iter().map(|l| l.unwrap()).collect();
            Ok(AdversarialAudit { notion, value, witness: Classifier::new(labels) })
        }
        Notion::Dp => {
            domain.task(task)?;
            let deltas = dp_deltas(domain, cells)?;
            let positive: Rat = deltas.iter().filter(|d| d.is_positive()).cloned().sum();
            let negative: Rat = -deltas.iter().filter(|d| d.is_negative()).cloned().sum::<Rat>();
            let value = positive.clone().max(negative.clone());
            let pos_witness =
                Classifier::new(deltas.iter().map(|d| u8::from(d.is_positive())).collect());
            let neg_witness =
                Classifier::new(deltas.iter().map(|d| u8::from(d.is_negative())).collect());
            let witness = match (positive == value, negative == value) {
                (true, true) => {
                    if pos_witness.mask() <= neg_witness.mask() {
                        pos_witness
                    } else {
                        neg_witness
                    }
                }
                (true, false) => pos_witness,
                (false, true) => neg_witness,
                (false, false) => unreachable!("max is attained by one side"),
            };
            Ok(AdversarialAudit { notion, value, witness })
        }
        Notion::Prp => Err(Error::Precondition(
            "adversarial audits take notion dp or eo; prp feasibility is a separate operation"
                .into(),
        )),
    }
}

/// Whether every expressible classifier is EO-fair, decided per cell: the
/// maximum is zero exactly when each cell contributes equal conditional
/// rates to both groups on both label sides.
pub fn adversarial_eo_is_zero(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
) -> Result<bool> {
    let table = CellTable::new(domain, task, cells)?;
    Ok((0..table.len())
        .all(|ci| table.a1[ci] == table.d1[ci] && table.a0[ci] == table.d0[ci]))
}

/// Same contract as [`adversarial_unfairness`], via exhaustive enumeration
/// of all cell labelings. Ties break to the canonically first labeling
/// (ascending mask order).
pub fn adversarial_unfairness_oracle(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    notion: Notion,
    cell_bound: usize,
) -> Result<AdversarialAudit> {
    let bound = cell_bound.min(62);
    if cells.len() > bound {
        return Err(Error::CellBoundExceeded { cells: cells.len(), bound });
    }
    let table = CellTable::new(domain, task, cells)?;
    let deltas = match notion {
        Notion::Dp => {
            domain.task(task)?;
            Some(dp_deltas(domain, cells)?)
        }
        Notion::Eo => None,
        Notion::Prp => {
            return Err(Error::Precondition("oracle audits take notion dp or eo".into()))
        }
    };
    let mut best: Option<(Rat, Classifier)> = None;
    for mask in 0u64..(1u64 << cells.len()) {
        let h = Classifier::from_mask(cells.len(), mask);
        let value = match &deltas {
            Some(d) => dp_of_deltas(d, &h),
            None => table.eo_of(&h),
        };
        if best.as_ref().is_none_or(|(b, _)| &value > b) {
            best = Some((value, h));
        }
    }
    let (value, witness) = best.expect("at least the all-zero labeling");
    Ok(AdversarialAudit { notion, value, witness })
}

/// The complete set of minimizers of the alpha-weighted loss over the
/// representation, in ascending mask order.
pub fn bayes_optimal_set(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    alpha: &Rat,
    zero_mass: ZeroMassCells,
    cap: usize,
) -> Result<BayesOptimalSet> {
    check_alpha(alpha)?;
    let table = CellTable::new(domain, task, cells)?;
    let beta = Rat::one() - alpha;
    let mut fixed: Vec<Option<u8>> = Vec::with_capacity(table.len());
    let mut tied_cells = Vec::new();
    let mut min_loss = Rat::zero();
    for ci in 0..table.len() {
        let cost1 = &beta * &table.m0[ci];
        let cost0 = alpha * &table.m1[ci];
        let zero_mass_cell = table.m0[ci].is_zero() && table.m1[ci].is_zero();
        if cost1 < cost0 {
            fixed.push(Some(1));
            min_loss += cost1;
        } else if cost0 < cost1 {
            fixed.push(Some(0));
            min_loss += cost0;
        } else if zero_mass_cell && zero_mass == ZeroMassCells::PinZero {
            fixed.push(Some(0));
        } else {
            fixed.push(None);
            tied_cells.push(ci);
            min_loss += cost0;
        }
    }
    if tied_cells.len() >= usize::BITS as usize
        || (1usize << tied_cells.len()) > cap
    {
        return Err(Error::MinimizerCapExceeded { cap });
    }
    let mut minimizers = Vec::with_capacity(1 << tied_cells.len());
    for mask in 0u64..(1u64 << tied_cells.len()) {
        let mut labels: Vec<u8> = Vec::with_capacity(table.len());
        let mut t = 0usize;
        for f in &fixed {
            match f {
                Some(l) => labels.push(*l),
                None => {
                    labels.push(((mask >> t) & 1) as u8);
                    t += 1;
                }
            }
        }
        minimizers.push(Classifier::new(labels));
    }
    Ok(BayesOptimalSet { minimizers, min_loss, tied_cells })
}

/// A single threshold classifier under the chosen rule. Ties under the
/// loss-minimizing rule resolve to label 0 (the canonically first
/// minimizer).
pub fn bayes_threshold_classifier(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    alpha: &Rat,
    rule: ThresholdRule,
) -> Result<Classifier> {
    check_alpha(alpha)?;
    match rule {
        ThresholdRule::LossMinimizing => {
            let table = CellTable::new(domain, task, cells)?;
            let beta = Rat::one() - alpha;
            let labels = (0..table.len())
                .map(|ci| {
                    let cost1 = &beta * &table.m0[ci];
                    let cost0 = alpha * &table.m1[ci];
                    u8::from(cost1 < cost0)
                })
                .collect();
            Ok(Classifier::new(labels))
        }
        ThresholdRule::ScoreThreshold => {
            let mut labels = Vec::with_capacity(cells.len());
            for cell in cells.cells() {
                let score = domain.score(task, cell)?;
                labels.push(u8::from(&score.value > alpha));
            }
            Ok(Classifier::new(labels))
        }
    }
}

fn unfairness_of(
    table: &CellTable,
    deltas: Option<&[Rat]>,
    h: &Classifier,
    notion: Notion,
) -> Rat {
    match notion {
        Notion::Eo => table.eo_of(h),
        Notion::Dp => dp_of_deltas(deltas.expect("dp deltas prepared"), h),
        Notion::Prp => unreachable!("prp has no scalar unfairness"),
    }
}

/// Maximum unfairness over the complete loss-minimizer set.
pub fn accuracy_driven_unfairness(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    alpha: &Rat,
    notion: Notion,
    zero_mass: ZeroMassCells,
    cap: usize,
) -> Result<AccuracyAudit> {
    let set = bayes_optimal_set(domain, task, cells, alpha, zero_mass, cap)?;
    let table = CellTable::new(domain, task, cells)?;
    let deltas = match notion {
        Notion::Dp => Some(dp_deltas(domain, cells)?),
        Notion::Eo => None,
        Notion::Prp => {
            return Err(Error::Precondition("accuracy audits take notion dp or eo".into()))
        }
    };
    let mut best: Option<(Rat, Classifier)> = None;
    for h in &set.minimizers {
        let value = unfairness_of(&table, deltas.as_deref(), h, notion);
        if best.as_ref().is_none_or(|(b, _)| &value > b) {
            best = Some((value, h.clone()));
        }
    }
    let (value, witness) = best.expect("minimizer set is never empty");
    Ok(AccuracyAudit {
        notion,
        value,
        witness,
        min_loss: set.min_loss,
        minimizer_count: set.minimizers.len(),
    })
}

/// Whether some expressible classifier has loss at most `epsilon` and
/// unfairness at most `eta`.
#[allow(clippy::too_many_arguments)]
pub fn fairness_enabling(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    epsilon: &Rat,
    eta: &Rat,
    alpha: &Rat,
    notion: Notion,
    cell_bound: usize,
) -> Result<EnablingAudit> {
    check_alpha(alpha)?;
    let bound = cell_bound.min(62);
    if cells.len() > bound {
        return Err(Error::CellBoundExceeded { cells: cells.len(), bound });
    }
    let table = CellTable::new(domain, task, cells)?;
    let deltas = match notion {
        Notion::Dp => Some(dp_deltas(domain, cells)?),
        Notion::Eo => None,
        Notion::Prp => {
            return Err(Error::Precondition("enabling audits take notion dp or eo".into()))
        }
    };
    for mask in 0u64..(1u64 << cells.len()) {
        let h = Classifier::from_mask(cells.len(), mask);
        if &table.loss_of(&h, alpha) <= epsilon
            && &unfairness_of(&table, deltas.as_deref(), &h, notion) <= eta
        {
            return Ok(EnablingAudit { notion, enabled: true, witness: Some(h) });
        }
    }
    Ok(EnablingAudit { notion, enabled: false, witness: None })
}

/// Pareto-minimal (loss, unfairness) pairs over all labelings, sorted by
/// loss ascending. Each point carries the canonically first classifier
/// attaining it.
pub fn frontier(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    alpha: &Rat,
    notion: Notion,
    cell_bound: usize,
) -> Result<Vec<FrontierPoint>> {
    check_alpha(alpha)?;
    let bound = cell_bound.min(62);
    if cells.len() > bound {
        return Err(Error::CellBoundExceeded { cells: cells.len(), bound });
    }
    let table = CellTable::new(domain, task, cells)?;
    let deltas = match notion {
        Notion::Dp => Some(dp_deltas(domain, cells)?),
        Notion::Eo => None,
        Notion::Prp => {
            return Err(Error::Precondition("frontier audits take notion dp or eo".into()))
        }
    };
    let mut points: Vec<FrontierPoint> = Vec::new();
    for mask in 0u64..(1u64 << cells.len()) {
        let h = Classifier::from_mask(cells.len(), mask);
        let loss = table.loss_of(&h, alpha);
        let unfairness = unfairness_of(&table, deltas.as_deref(), &h, notion);
        points.push(FrontierPoint { loss, unfairness, classifier: h });
    }
    points.sort_by(|p, q| {
        (&p.loss, &p.unfairness, p.classifier.mask())
            .cmp(&(&q.loss, &q.unfairness, q.classifier.mask()))
    });
    let mut frontier: Vec<FrontierPoint> = Vec::new();
    for p in points {
        match frontier.last() {
            Some(last) if p.unfairness >= last.unfairness => {}
            _ => frontier.push(p),
        }
    }
    Ok(frontier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::parse_domain;
    use crate::metrics::{dp_unfairness, eo_unfairness, weighted_loss};
    use crate::partition::{induce_cells, FeatureSet};
    use crate::rational::rat;

    const FIX8A: &str = include_str!("../../../fixtures/fix-8a.json");
    const FIX8B: &str = include_str!("../../../fixtures/fix-8b.json");
    const FIX12: &str = include_str!("../../../fixtures/fix-12.json");

    fn cells_of(doc: &crate::domain::Document, names: &[&str]) -> CellPartition {
        let fs = FeatureSet::new(
            names.iter().map(|n| doc.feature(n).unwrap().clone()).collect(),
        )
        .unwrap();
        induce_cells(&doc.domain, &fs).unwrap()
    }

    #[test]
    fn adversarial_deletion_values_on_fix_8a() {
        let doc = parse_domain(FIX8A).unwrap();
        for fs in [&["f1"][..], &["f2"][..]] {
            let cells = cells_of(&doc, fs);
            let audit = adversarial_unfairness(&doc.domain, "t", &cells, Notion::Eo).unwrap();
            assert!(audit.value.is_zero(), "{fs:?}");
        }
        let cells = cells_of(&doc, &["f1", "f2"]);
        let audit = adversarial_unfairness(&doc.domain, "t", &cells, Notion::Eo).unwrap();
        assert_eq!(audit.value, rat(1, 1));
        // the witness attains the value
        let eo = eo_unfairness(&doc.domain, "t", &cells, &audit.witness).unwrap();
        assert_eq!(eo.value, rat(1, 1));
    }

    #[test]
    fn oracle_matches_on_fix_8a_and_returns_the_group_separating_witness() {
        let doc = parse_domain(FIX8A).unwrap();
        let cells = cells_of(&doc, &["f1", "f2"]);
        let oracle =
            adversarial_unfairness_oracle(&doc.domain, "t", &cells, Notion::Eo, DEFAULT_CELL_BOUND)
                .unwrap();
        assert_eq!(oracle.value, rat(1, 1));
        // cells in canonical order are {x1,x5},{x2,x6},{x3,x7},{x4,x8};
        // labeling the first two 1 classifies exactly group A positive.
        assert_eq!(oracle.witness.labels(), &[1, 1, 0, 0]);
        let exact = adversarial_unfairness(&doc.domain, "t", &cells, Notion::Eo).unwrap();
        assert_eq!(exact.value, oracle.value);
        assert_eq!(exact.witness, oracle.witness);
    }

    #[test]
    fn single_cell_representation_is_always_fair() {
        let doc = parse_domain(FIX8A).unwrap();
        let cells = CellPartition::single_cell(&doc.domain);
        for notion in [Notion::Dp, Notion::Eo] {
            let audit = adversarial_unfairness(&doc.domain, "t", &cells, notion).unwrap();
            assert!(audit.value.is_zero());
            assert!(audit.witness.is_constant());
        }
    }

    #[test]
    fn oracle_bound_is_enforced() {
        let doc = parse_domain(FIX8A).unwrap();
        let cells = cells_of(&doc, &["f1", "f2"]);
        let err = adversarial_unfairness_oracle(&doc.domain, "t", &cells, Notion::Eo, 3)
            .unwrap_err();
        assert!(matches!(err, Error::CellBoundExceeded { cells: 4, bound: 3 }));
    }

    #[test]
    fn bayes_set_on_fix_8b_singleton_is_all_four_labelings() {
        let doc = parse_domain(FIX8B).unwrap();
        let cells = cells_of(&doc, &["f1"]);
        let set = bayes_optimal_set(
            &doc.domain,
            "t",
            &cells,
            &rat(1, 2),
            ZeroMassCells::BothLabels,
            DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        assert_eq!(set.minimizers.len(), 4);
        assert_eq!(set.min_loss, rat(1, 4));
        for h in &set.minimizers {
            assert_eq!(
                weighted_loss(&doc.domain, "t", &cells, h, &rat(1, 2)).unwrap(),
                rat(1, 4)
            );
        }
        // no enumerated classifier does better
        for mask in 0..4u64 {
            let h = Classifier::from_mask(2, mask);
            assert!(
                weighted_loss(&doc.domain, "t", &cells, &h, &rat(1, 2)).unwrap() >= rat(1, 4)
            );
        }
    }

    #[test]
    fn zero_mass_cells_take_both_labels_unless_pinned() {
        let doc = parse_domain(
            r#"{"instances":[
                {"id":"a","group":"A","weight":"1/2"},
                {"id":"b","group":"D","weight":"1/2"},
                {"id":"z","group":"A","weight":"0/1"}],
                "tasks":{"t":{"a":1,"b":0,"z":1}}}"#,
        )
        .unwrap();
        let cells =
            CellPartition::from_cells(&doc.domain, vec![vec![0], vec![1], vec![2]]).unwrap();
        let both = bayes_optimal_set(
            &doc.domain, "t", &cells, &rat(1, 2), ZeroMassCells::BothLabels,
            DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        assert_eq!(both.minimizers.len(), 2);
        let pinned = bayes_optimal_set(
            &doc.domain, "t", &cells, &rat(1, 2), ZeroMassCells::PinZero,
            DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        assert_eq!(pinned.minimizers.len(), 1);
        // the zero-mass cell is labeled 0 in the pinned minimizer
        let z_cell = cells.cell_of(doc.domain.index_of("z").unwrap());
        assert_eq!(pinned.minimizers[0].label(z_cell), 0);
        assert_eq!(both.min_loss, pinned.min_loss);
    }

    #[test]
    fn minimizer_cap_is_enforced() {
        // both cells of the fix-8b singleton tie at alpha = 1/2
        let doc = parse_domain(FIX8B).unwrap();
        let cells = cells_of(&doc, &["f1"]);
        let err = bayes_optimal_set(
            &doc.domain, "t", &cells, &rat(1, 2), ZeroMassCells::BothLabels, 2,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MinimizerCapExceeded { cap: 2 }));
    }

    #[test]
    fn homogeneous_cells_are_forced_in_every_minimizer() {
        let doc = parse_domain(FIX8A).unwrap();
        let cells = cells_of(&doc, &["f1", "f2"]);
        let set = bayes_optimal_set(
            &doc.domain,
            "t",
            &cells,
            &rat(1, 3),
            ZeroMassCells::BothLabels,
            DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        // every cell has score 1/2: at alpha=1/3 labeling 1 costs (2/3)m0,
        // labeling 0 costs (1/3)m1 with m0=m1, so 0 wins everywhere.
        assert_eq!(set.minimizers.len(), 1);
        assert_eq!(set.minimizers[0].labels(), &[0, 0, 0, 0]);
    }

    #[test]
    fn worked_example_partition_audits() {
        let doc = parse_domain(FIX12).unwrap();
        let expect = [("F+f", rat(1, 3)), ("F", rat(0, 1)), ("F'+f", rat(0, 1)), ("F'", rat(1, 6))];
        for (name, value) in expect {
            let cells = doc.partition(name).unwrap();
            let audit = accuracy_driven_unfairness(
                &doc.domain,
                "t",
                cells,
                &rat(1, 2),
                Notion::Eo,
                ZeroMassCells::BothLabels,
                DEFAULT_MINIMIZER_CAP,
            )
            .unwrap();
            assert_eq!(audit.value, value, "partition {name}");
        }
    }

    #[test]
    fn unique_minimizer_on_the_crossed_prime_partition() {
        // the partition named F' has a unique loss minimizer misclassifying
        // exactly one instance of mass 1/12
        let doc = parse_domain(FIX12).unwrap();
        let cells = doc.partition("F'").unwrap();
        let set = bayes_optimal_set(
            &doc.domain,
            "t",
            cells,
            &rat(1, 2),
            ZeroMassCells::BothLabels,
            DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        assert_eq!(set.minimizers.len(), 1);
        assert_eq!(set.min_loss, rat(1, 24));
        let h = &set.minimizers[0];
        let truth = doc.domain.task("t").unwrap();
        let pred = h.instance_labels(cells);
        let wrong: Vec<&str> = (0..doc.domain.len())
            .filter(|&i| pred[i] != truth[i])
            .map(|i| doc.domain.id(i))
            .collect();
        assert_eq!(wrong, vec!["x7"]);
    }

    #[test]
    fn preimage_recomputation_of_the_worked_example() {
        // brute-force values from the listed preimages, documented in the
        // fixture notes as diverging from the bound partitions
        let doc = parse_domain(FIX12).unwrap();
        let expect = [
            (vec!["f1", "f2", "f3"], rat(0, 1)),
            (vec!["f1", "f2", "f3", "f"], rat(1, 6)),
            (vec!["fp1", "fp2"], rat(0, 1)),
            (vec!["fp1", "fp2", "f"], rat(1, 3)),
        ];
        for (names, value) in expect {
            let cells = cells_of(&doc, &names.iter().map(|s| &**s).collect::<Vec<_>>());
            let audit = accuracy_driven_unfairness(
                &doc.domain,
                "t",
                &cells,
                &rat(1, 2),
                Notion::Eo,
                ZeroMassCells::BothLabels,
                DEFAULT_MINIMIZER_CAP,
            )
            .unwrap();
            assert_eq!(audit.value, value, "features {names:?}");
        }
    }

    #[test]
    fn threshold_rules_agree_at_one_half() {
        let doc = parse_domain(FIX12).unwrap();
        let cells = cells_of(&doc, &["f1", "f2", "f3", "f"]);
        let a = bayes_threshold_classifier(&doc.domain, "t", &cells, &rat(1, 2), ThresholdRule::LossMinimizing)
            .unwrap();
        let b = bayes_threshold_classifier(&doc.domain, "t", &cells, &rat(1, 2), ThresholdRule::ScoreThreshold)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_rules_differ_away_from_one_half() {
        // a cell of score 2/3: loss minimization at alpha=3/4 labels it 1
        // (threshold 1-alpha = 1/4), the score rule labels it 0 (2/3 < 3/4)
        let doc = parse_domain(FIX12).unwrap();
        let cells = doc.partition("F'").unwrap();
        let a = bayes_threshold_classifier(&doc.domain, "t", cells, &rat(3, 4), ThresholdRule::LossMinimizing)
            .unwrap();
        let b = bayes_threshold_classifier(&doc.domain, "t", cells, &rat(3, 4), ThresholdRule::ScoreThreshold)
            .unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn enabling_on_fix_8b() {
        let doc = parse_domain(FIX8B).unwrap();
        let pair = cells_of(&doc, &["f1", "f2"]);
        for alpha in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            let audit = fairness_enabling(
                &doc.domain,
                "t",
                &pair,
                &rat(0, 1),
                &rat(0, 1),
                &alpha,
                Notion::Eo,
                DEFAULT_CELL_BOUND,
            )
            .unwrap();
            assert!(audit.enabled, "alpha {alpha}");
            let witness = audit.witness.unwrap();
            let truth = doc.domain.task("t").unwrap();
            assert_eq!(witness.instance_labels(&pair), truth);
        }
        // the singleton representation cannot reach loss 1/5
        let single = cells_of(&doc, &["f1"]);
        let audit = fairness_enabling(
            &doc.domain,
            "t",
            &single,
            &rat(1, 5),
            &rat(1, 2),
            &rat(1, 2),
            Notion::Eo,
            DEFAULT_CELL_BOUND,
        )
        .unwrap();
        assert!(!audit.enabled);
        // vacuous bounds always enable
        let audit = fairness_enabling(
            &doc.domain,
            "t",
            &single,
            &rat(1, 1),
            &rat(1, 1),
            &rat(1, 2),
            Notion::Eo,
            DEFAULT_CELL_BOUND,
        )
        .unwrap();
        assert!(audit.enabled);
    }

    #[test]
    fn frontier_contains_the_perfect_point_when_cells_separate_labels() {
        // fix-8b: the pair {f1,f2} induces label-homogeneous cells
        let doc = parse_domain(FIX8B).unwrap();
        let cells = cells_of(&doc, &["f1", "f2"]);
        let points = frontier(&doc.domain, "t", &cells, &rat(1, 2), Notion::Eo, DEFAULT_CELL_BOUND)
            .unwrap();
        assert_eq!(points[0].loss, rat(0, 1));
        assert_eq!(points[0].unfairness, rat(0, 1));
        assert_eq!(points.len(), 1);
        // losses strictly increase, unfairness strictly decreases
        for w in points.windows(2) {
            assert!(w[0].loss < w[1].loss && w[0].unfairness > w[1].unfairness);
        }
    }

    #[test]
    fn frontier_dominates_every_labeling() {
        let doc = parse_domain(FIX12).unwrap();
        let cells = doc.partition("F").unwrap();
        let points =
            frontier(&doc.domain, "t", cells, &rat(1, 2), Notion::Eo, DEFAULT_CELL_BOUND).unwrap();
        for mask in 0u64..(1 << cells.len()) {
            let h = Classifier::from_mask(cells.len(), mask);
            let loss = weighted_loss(&doc.domain, "t", cells, &h, &rat(1, 2)).unwrap();
            let unf = eo_unfairness(&doc.domain, "t", cells, &h).unwrap().value;
            assert!(
                points.iter().any(|p| p.loss <= loss && p.unfairness <= unf),
                "undominated labeling {mask:b}"
            );
        }
    }

    #[test]
    fn dp_adversarial_on_group_separating_cells_is_one() {
        let doc = parse_domain(FIX8A).unwrap();
        let cells = cells_of(&doc, &["f1", "f2"]);
        let audit = adversarial_unfairness(&doc.domain, "t", &cells, Notion::Dp).unwrap();
        assert_eq!(audit.value, rat(1, 1));
        let report = dp_unfairness(&doc.domain, &cells, &audit.witness).unwrap();
        assert_eq!(report.value, rat(1, 1));
    }
}

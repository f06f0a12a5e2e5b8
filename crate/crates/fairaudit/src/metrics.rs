//! Classifier-level fairness and loss quantities: per-group error rates,
//! EO/DP unfairness, predictive rate parity, weighted risk and the
//! equal-success-rates test.
//!
//! Rates over zero-mass quadrants are 0 with a flag set, following the
//! convention that misclassification rates over empty slices vanish. DP is
//! different: a group with no probability mass makes DP undefined and is an
//! error, not a flagged zero.

use num_traits::{One, Signed, Zero};

use crate::classifier::Classifier;
use crate::domain::{Domain, Group, Label, Quadrant};
use crate::error::{Error, Result};
use crate::partition::CellPartition;
use crate::rational::{ratio_string, Rat};

/// Fairness notions the audits understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notion {
    Dp,
    Eo,
    Prp,
}

impl Notion {
    pub fn as_str(self) -> &'static str {
        match self {
            Notion::Dp => "dp",
            Notion::Eo => "eo",
            Notion::Prp => "prp",
        }
    }
}

/// A conditional rate together with a marker for vacuous conditioning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rate {
    pub value: Rat,
    pub zero_mass: bool,
}

impl Rate {
    fn conditional(error_mass: Rat, total_mass: &Rat) -> Rate {
        if total_mass.is_zero() {
            Rate { value: Rat::zero(), zero_mass: true }
        } else {
            Rate { value: error_mass / total_mass, zero_mass: false }
        }
    }
}

/// False positive and false negative rates per group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRates {
    pub fpr_a: Rate,
    pub fpr_d: Rate,
    pub fnr_a: Rate,
    pub fnr_d: Rate,
}

/// EO unfairness with the rates behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EoReport {
    pub value: Rat,
    pub rates: GroupRates,
}

/// DP unfairness with the per-group positive classification rates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpReport {
    pub value: Rat,
    pub pos_rate_a: Rat,
    pub pos_rate_d: Rat,
}

/// P(t=1 | h=v, g) for one prediction value and group; `None` when the
/// conditioning event has zero mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrpSlice {
    pub prediction: Label,
    pub rate_a: Option<Rat>,
    pub rate_d: Option<Rat>,
    /// Whether this slice constrained the verdict (positive mass in both groups).
    pub checked: bool,
}

/// Predictive rate parity verdict plus the conditional label rates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrpReport {
    pub fair: bool,
    pub slices: [PrpSlice; 2],
}

/// The two conditional success rates P(t=1 | g) and their equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessRates {
    pub rate_a: Rat,
    pub rate_d: Rat,
    pub equal: bool,
}

fn check_total(cells: &CellPartition, h: &Classifier) -> Result<()> {
    if h.cell_count() != cells.len() {
        return Err(Error::Precondition(format!(
            "classifier labels {} cells, partition has {}",
            h.cell_count(),
            cells.len()
        )));
    }
    Ok(())
}

/// Exact conditional error rates of an instance labeling against a ground
/// truth labeling.
pub fn group_rates_of_labeling(domain: &Domain, truth: &[Label], pred: &[Label]) -> GroupRates {
    let mut quadrant_mass = [[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]];
    let mut error_mass = [[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]];
    for i in 0..domain.len() {
        let g = match domain.group(i) {
            Group::A => 0,
            Group::D => 1,
        };
        let l = truth[i] as usize;
        quadrant_mass[g][l] += domain.weight(i);
        if pred[i] != truth[i] {
            error_mass[g][l] += domain.weight(i);
        }
    }
    GroupRates {
        fpr_a: Rate::conditional(error_mass[0][0].clone(), &quadrant_mass[0][0]),
        fpr_d: Rate::conditional(error_mass[1][0].clone(), &quadrant_mass[1][0]),
        fnr_a: Rate::conditional(error_mass[0][1].clone(), &quadrant_mass[0][1]),
        fnr_d: Rate::conditional(error_mass[1][1].clone(), &quadrant_mass[1][1]),
    }
}

/// U^EO = 1/2 |FNR_A - FNR_D| + 1/2 |FPR_A - FPR_D|.
pub fn eo_value(rates: &GroupRates) -> Rat {
    let half = Rat::new(1.into(), 2.into());
    let dfnr = (&rates.fnr_a.value - &rates.fnr_d.value).abs();
    let dfpr = (&rates.fpr_a.value - &rates.fpr_d.value).abs();
    &half * dfnr + &half * dfpr
}

/// EO unfairness of an instance labeling against an arbitrary ground truth
/// labeling (used both for cell classifiers and for task-vs-task audits).
pub fn eo_of_labeling(domain: &Domain, truth: &[Label], pred: &[Label]) -> EoReport {
    let rates = group_rates_of_labeling(domain, truth, pred);
    EoReport { value: eo_value(&rates), rates }
}

/// Per-group error rates of a cell classifier.
pub fn group_rates(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    h: &Classifier,
) -> Result<GroupRates> {
    check_total(cells, h)?;
    let truth = domain.task(task)?;
    let pred = h.instance_labels(cells);
    Ok(group_rates_of_labeling(domain, truth, &pred))
}

/// EO unfairness of a cell classifier.
pub fn eo_unfairness(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    h: &Classifier,
) -> Result<EoReport> {
    let rates = group_rates(domain, task, cells, h)?;
    Ok(EoReport { value: eo_value(&rates), rates })
}

/// DP unfairness |P(h=1|A) - P(h=1|D)| of an instance labeling.
pub fn dp_of_labeling(domain: &Domain, pred: &[Label]) -> Result<DpReport> {
    let mass_a = domain.group_mass(Group::A);
    let mass_d = domain.group_mass(Group::D);
    if mass_a.is_zero() {
        return Err(Error::EmptyGroup(Group::A));
    }
    if mass_d.is_zero() {
        return Err(Error::EmptyGroup(Group::D));
    }
    let mut pos_a = Rat::zero();
    let mut pos_d = Rat::zero();
    for i in 0..domain.len() {
        if pred[i] == 1 {
            match domain.group(i) {
                Group::A => pos_a += domain.weight(i),
                Group::D => pos_d += domain.weight(i),
            }
        }
    }
    let pos_rate_a = pos_a / mass_a;
    let pos_rate_d = pos_d / mass_d;
    let value = (&pos_rate_a - &pos_rate_d).abs();
    Ok(DpReport { value, pos_rate_a, pos_rate_d })
}

/// DP unfairness of a cell classifier.
pub fn dp_unfairness(domain: &Domain, cells: &CellPartition, h: &Classifier) -> Result<DpReport> {
    check_total(cells, h)?;
    dp_of_labeling(domain, &h.instance_labels(cells))
}

/// Predictive rate parity: the ground truth is independent of group
/// membership given the prediction. Conditioning slices with zero mass in
/// either group are vacuous and skipped.
pub fn prp_is_fair(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    h: &Classifier,
) -> Result<PrpReport> {
    check_total(cells, h)?;
    let truth = domain.task(task)?;
    let pred = h.instance_labels(cells);
    let mut fair = true;
    let slices = [0u8, 1u8].map(|v| {
        let mut mass = [Rat::zero(), Rat::zero()];
        let mut pos = [Rat::zero(), Rat::zero()];
        for i in 0..domain.len() {
            if pred[i] != v {
                continue;
            }
            let g = match domain.group(i) {
                Group::A => 0,
                Group::D => 1,
            };
            mass[g] += domain.weight(i);
            if truth[i] == 1 {
                pos[g] += domain.weight(i);
            }
        }
        let rate = |g: usize| {
            if mass[g].is_zero() {
                None
            } else {
                Some(&pos[g] / &mass[g])
            }
        };
        let (rate_a, rate_d) = (rate(0), rate(1));
        let checked = rate_a.is_some() && rate_d.is_some();
        if checked && rate_a != rate_d {
            fair = false;
        }
        PrpSlice { prediction: v, rate_a, rate_d, checked }
    });
    Ok(PrpReport { fair, slices })
}

/// L_P^alpha(h) = alpha * (false-negative mass) + (1-alpha) * (false-positive mass).
pub fn weighted_loss(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
    h: &Classifier,
    alpha: &Rat,
) -> Result<Rat> {
    check_alpha(alpha)?;
    check_total(cells, h)?;
    let truth = domain.task(task)?;
    let pred = h.instance_labels(cells);
    Ok(loss_of_labeling(domain, truth, &pred, alpha))
}

pub(crate) fn loss_of_labeling(
    domain: &Domain,
    truth: &[Label],
    pred: &[Label],
    alpha: &Rat,
) -> Rat {
    let mut fn_mass = Rat::zero();
    let mut fp_mass = Rat::zero();
    for i in 0..domain.len() {
        match (pred[i], truth[i]) {
            (0, 1) => fn_mass += domain.weight(i),
            (1, 0) => fp_mass += domain.weight(i),
            _ => {}
        }
    }
    alpha * fn_mass + (Rat::one() - alpha) * fp_mass
}

pub(crate) fn check_alpha(alpha: &Rat) -> Result<()> {
    if !(alpha > &Rat::zero() && alpha < &Rat::one()) {
        return Err(Error::AlphaOutOfRange(ratio_string(alpha)));
    }
    Ok(())
}

/// Whether both groups have the same conditional probability of label 1.
pub fn equal_success_rates(domain: &Domain, task: &str) -> Result<SuccessRates> {
    let truth = domain.task(task)?;
    let mass_a = domain.group_mass(Group::A);
    let mass_d = domain.group_mass(Group::D);
    if mass_a.is_zero() {
        return Err(Error::EmptyGroup(Group::A));
    }
    if mass_d.is_zero() {
        return Err(Error::EmptyGroup(Group::D));
    }
    let mut pos = [Rat::zero(), Rat::zero()];
    for i in 0..domain.len() {
        if truth[i] == 1 {
            match domain.group(i) {
                Group::A => pos[0] += domain.weight(i),
                Group::D => pos[1] += domain.weight(i),
            }
        }
    }
    let rate_a = &pos[0] / mass_a;
    let rate_d = &pos[1] / mass_d;
    let equal = rate_a == rate_d;
    Ok(SuccessRates { rate_a, rate_d, equal })
}

/// Quadrant mass accessor mirroring the definition X_{g,l}.
pub fn quadrant_mass(domain: &Domain, task: &str, q: Quadrant) -> Result<Rat> {
    domain.quadrant_mass(task, q)
}

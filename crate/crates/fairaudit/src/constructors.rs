//! Constructive impossibility machinery: adversarial marginals against DP
//! and EO, the mutual-EO audit, the multi-task certificate and PRP
//! feasibility.
//!
//! The marginal constructors place total mass 1/2 on each of two chosen
//! sets, uniformly within each set; instances outside the chosen sets keep
//! weight 0 but stay in the domain. Every constructed marginal is
//! re-evaluated before it is returned.

use num_traits::Zero;

use crate::audit::adversarial_eo_is_zero;
use crate::domain::{Domain, Group, Label};
use crate::error::{Error, Result};
use crate::metrics::{dp_of_labeling, eo_of_labeling, equal_success_rates, SuccessRates};
use crate::partition::CellPartition;
use crate::rational::{rat, Rat};

/// Which branch of a constructive proof produced a marginal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionCase {
    DpSplit,
    EoCase1,
    EoCase2,
    EoCase3,
}

impl ConstructionCase {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionCase::DpSplit => "dp-split",
            ConstructionCase::EoCase1 => "eo-case1",
            ConstructionCase::EoCase2 => "eo-case2",
            ConstructionCase::EoCase3 => "eo-case3",
        }
    }
}

/// A constructed marginal together with the unfairness it achieves for the
/// target classifier.
#[derive(Debug, Clone)]
pub struct AdversarialMarginal {
    /// New weight per instance, aligned with the domain order.
    pub weights: Vec<Rat>,
    pub target_unfairness: Rat,
    pub achieved_unfairness: Rat,
    pub case: ConstructionCase,
}

impl AdversarialMarginal {
    /// The same domain re-weighted by this marginal.
    pub fn apply(&self, domain: &Domain) -> Result<Domain> {
        domain.with_weights(self.weights.clone())
    }
}

fn is_constant(labels: &[Label]) -> bool {
    labels.windows(2).all(|w| w[0] == w[1])
}

/// Mass 1/2 spread uniformly over each of two disjoint index sets.
fn half_half_weights(n: usize, first: &[usize], second: &[usize]) -> Vec<Rat> {
    let mut weights = vec![Rat::zero(); n];
    for &i in first {
        weights[i] = rat(1, 2 * first.len() as i64);
    }
    for &i in second {
        weights[i] = rat(1, 2 * second.len() as i64);
    }
    weights
}

/// Build a marginal under which the given non-constant classifier has DP
/// unfairness exactly 1: all advantaged mass lands on one predicted label,
/// all disadvantaged mass on the other.
pub fn dp_adversarial_marginal(domain: &Domain, h: &[Label]) -> Result<AdversarialMarginal> {
    if h.len() != domain.len() {
        return Err(Error::Precondition("classifier labeling must cover the domain".into()));
    }
    if is_constant(h) {
        return Err(Error::Precondition("classifier is constant".into()));
    }
    let members = |g: Group, y: Label| -> Vec<usize> {
        (0..domain.len()).filter(|&i| domain.group(i) == g && h[i] == y).collect()
    };
    if members(Group::A, 0).len() + members(Group::A, 1).len() == 0 {
        return Err(Error::Precondition("group A is empty".into()));
    }
    if members(Group::D, 0).len() + members(Group::D, 1).len() == 0 {
        return Err(Error::Precondition("group D is empty".into()));
    }
    for (y1, y2) in [(1u8, 0u8), (0u8, 1u8)] {
        let in_a = members(Group::A, y1);
        let in_d = members(Group::D, y2);
        if in_a.is_empty() || in_d.is_empty() {
            continue;
        }
        let weights = half_half_weights(domain.len(), &in_a, &in_d);
        let reweighted = domain.with_weights(weights.clone())?;
        let achieved = dp_of_labeling(&reweighted, h)?.value;
        if achieved != rat(1, 1) {
            return Err(Error::InternalInvariant(format!(
                "dp split achieved {achieved}, expected 1"
            )));
        }
        return Ok(AdversarialMarginal {
            weights,
            target_unfairness: rat(1, 1),
            achieved_unfairness: achieved,
            case: ConstructionCase::DpSplit,
        });
    }
    Err(Error::InternalInvariant(
        "a non-constant classifier over two nonempty groups always admits a split".into(),
    ))
}

/// Build a marginal under which the classifier `h` has EO unfairness at
/// least 1/2 when `f` is the ground truth. Runs the three-case analysis
/// over the agreement/disagreement sets in a fixed order and returns the
/// first construction that verifies.
pub fn eo_adversarial_marginal(
    domain: &Domain,
    f: &[Label],
    h: &[Label],
) -> Result<AdversarialMarginal> {
    if f.len() != domain.len() || h.len() != domain.len() {
        return Err(Error::Precondition("labelings must cover the domain".into()));
    }
    if is_constant(f) {
        return Err(Error::Precondition("ground truth is constant".into()));
    }
    if is_constant(h) {
        return Err(Error::Precondition("classifier is constant".into()));
    }
    if h == f {
        return Err(Error::Precondition("classifier equals the ground truth".into()));
    }
    if h.iter().zip(f).all(|(a, b)| a != b) {
        return Err(Error::Precondition("classifier equals the flipped ground truth".into()));
    }

    let select = |fv: Label, hv: Label| -> Vec<usize> {
        (0..domain.len()).filter(|&i| f[i] == fv && h[i] == hv).collect()
    };
    let group_part = |set: &[usize], g: Group| -> Vec<usize> {
        set.iter().copied().filter(|&i| domain.group(i) == g).collect()
    };

    let mut candidates: Vec<(Vec<usize>, Vec<usize>, ConstructionCase)> = Vec::new();
    for y in [1u8, 0u8] {
        // B1 disagrees with the truth on label y, B2 agrees on it.
        let b1 = select(y, 1 - y);
        let b2 = select(y, y);
        if b1.is_empty() || b2.is_empty() {
            continue;
        }
        let (b1_a, b1_d) = (group_part(&b1, Group::A), group_part(&b1, Group::D));
        let (b2_a, b2_d) = (group_part(&b2, Group::A), group_part(&b2, Group::D));
        if !b1_a.is_empty() && !b2_d.is_empty() {
            candidates.push((b1_a.clone(), b2_d.clone(), ConstructionCase::EoCase1));
        }
        if !b2_a.is_empty() && !b1_d.is_empty() {
            candidates.push((b2_a.clone(), b1_d.clone(), ConstructionCase::EoCase2));
        }
        // Both B1 and B2 inside one group: put half the mass on that group's
        // disagreement set and half on the other group within a remaining set.
        for (g, b1_g) in [(Group::A, &b1_a), (Group::D, &b1_d)] {
            let missing = g.other();
            if !group_part(&b1, missing).is_empty() || !group_part(&b2, missing).is_empty() {
                continue;
            }
            for b3 in [select(1 - y, y), select(1 - y, 1 - y)] {
                let b3_missing = group_part(&b3, missing);
                if !b3_missing.is_empty() && !b1_g.is_empty() {
                    candidates.push((b3_missing, b1_g.clone(), ConstructionCase::EoCase3));
                }
            }
        }
    }

    for (first, second, case) in candidates {
        let weights = half_half_weights(domain.len(), &first, &second);
        let reweighted = domain.with_weights(weights.clone())?;
        let achieved = eo_of_labeling(&reweighted, f, h).value;
        if achieved >= rat(1, 2) {
            return Ok(AdversarialMarginal {
                weights,
                target_unfairness: rat(1, 2),
                achieved_unfairness: achieved,
                case,
            });
        }
    }
    Err(Error::InternalInvariant(
        "the case analysis always yields a marginal with EO unfairness >= 1/2".into(),
    ))
}

/// The two directional EO values, per-group positive rates and disagreement
/// mass of a pair of labelings.
#[derive(Debug, Clone)]
pub struct MutualEoReport {
    pub eo_f_given_g: Rat,
    pub eo_g_given_f: Rat,
    pub pos_rate_f_a: Rat,
    pub pos_rate_f_d: Rat,
    pub pos_rate_g_a: Rat,
    pub pos_rate_g_d: Rat,
    pub disagreement_mass: Rat,
}

impl MutualEoReport {
    /// Both directions EO-fair with genuine disagreement.
    pub fn mutually_fair_with_disagreement(&self) -> bool {
        self.eo_f_given_g.is_zero()
            && self.eo_g_given_f.is_zero()
            && !self.disagreement_mass.is_zero()
    }

    /// Both functions have group-independent positive rates.
    pub fn equal_positive_rates(&self) -> bool {
        self.pos_rate_f_a == self.pos_rate_f_d && self.pos_rate_g_a == self.pos_rate_g_d
    }
}

/// [`mutual_eo_audit`] with both labelings given as task names.
pub fn mutual_eo_audit_tasks(domain: &Domain, f: &str, g: &str) -> Result<MutualEoReport> {
    let f = domain.task(f)?.to_vec();
    let g = domain.task(g)?.to_vec();
    mutual_eo_audit(domain, &f, &g)
}

/// Audit a pair of labelings for mutual EO fairness: each is scored with
/// the other as the ground truth.
pub fn mutual_eo_audit(domain: &Domain, f: &[Label], g: &[Label]) -> Result<MutualEoReport> {
    let mass_a = domain.group_mass(Group::A);
    let mass_d = domain.group_mass(Group::D);
    if mass_a.is_zero() {
        return Err(Error::EmptyGroup(Group::A));
    }
    if mass_d.is_zero() {
        return Err(Error::EmptyGroup(Group::D));
    }
    let pos_rate = |labels: &[Label], g: Group, mass: &Rat| -> Rat {
        let pos: Rat = (0..domain.len())
            .filter(|&i| domain.group(i) == g && labels[i] == 1)
            .map(|i| domain.weight(i))
            .sum();
        pos / mass
    };
    let disagreement_mass = (0..domain.len())
        .filter(|&i| f[i] != g[i])
        .map(|i| domain.weight(i))
        .sum();
    Ok(MutualEoReport {
        eo_f_given_g: eo_of_labeling(domain, g, f).value,
        eo_g_given_f: eo_of_labeling(domain, f, g).value,
        pos_rate_f_a: pos_rate(f, Group::A, &mass_a),
        pos_rate_f_d: pos_rate(f, Group::D, &mass_d),
        pos_rate_g_a: pos_rate(g, Group::A, &mass_a),
        pos_rate_g_d: pos_rate(g, Group::D, &mass_d),
        disagreement_mass,
    })
}

/// Joint audit of one representation against two tasks sharing the domain's
/// weight vector.
#[derive(Debug, Clone)]
pub struct MultitaskCertificate {
    pub adv_fair_task1: bool,
    pub adv_fair_task2: bool,
    pub perfect_accuracy_both: bool,
    pub tasks_differ_on_support: bool,
    pub equal_success_rates_1: bool,
    pub equal_success_rates_2: bool,
}

/// Zero loss is achievable over the cells exactly when every cell is
/// label-homogeneous across its positive-mass members.
pub fn perfect_accuracy_possible(
    domain: &Domain,
    task: &str,
    cells: &CellPartition,
) -> Result<bool> {
    let labels = domain.task(task)?;
    for cell in cells.cells() {
        let live: Vec<usize> =
            cell.iter().copied().filter(|&i| !domain.weight(i).is_zero()).collect();
        if live.windows(2).any(|w| labels[w[0]] != labels[w[1]]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluate the multi-task criteria for one representation and two tasks.
/// Both tasks live on the same domain, hence share its marginal.
pub fn multitask_certificate(
    domain: &Domain,
    cells: &CellPartition,
    task1: &str,
    task2: &str,
) -> Result<MultitaskCertificate> {
    let t1 = domain.task(task1)?;
    let t2 = domain.task(task2)?;
    let esr1 = equal_success_rates(domain, task1)?;
    let esr2 = equal_success_rates(domain, task2)?;
    let differ_mass: Rat = (0..domain.len())
        .filter(|&i| t1[i] != t2[i])
        .map(|i| domain.weight(i))
        .sum();
    let certificate = MultitaskCertificate {
        adv_fair_task1: adversarial_eo_is_zero(domain, task1, cells)?,
        adv_fair_task2: adversarial_eo_is_zero(domain, task2, cells)?,
        perfect_accuracy_both: perfect_accuracy_possible(domain, task1, cells)?
            && perfect_accuracy_possible(domain, task2, cells)?,
        tasks_differ_on_support: !differ_mass.is_zero(),
        equal_success_rates_1: esr1.equal,
        equal_success_rates_2: esr2.equal,
    };
    if certificate.tasks_differ_on_support
        && (!certificate.equal_success_rates_1 || !certificate.equal_success_rates_2)
        && certificate.adv_fair_task1
        && certificate.adv_fair_task2
        && certificate.perfect_accuracy_both
    {
        return Err(Error::InternalInvariant(
            "adversarial fairness and perfect accuracy for two tasks differing on support \
             require equal success rates for both"
                .into(),
        ));
    }
    Ok(certificate)
}

/// PRP feasibility of a distribution: adversarially PRP-fair representations
/// can exist only when the success rates agree, because the all-one
/// classifier is expressible over every representation.
#[derive(Debug, Clone)]
pub struct PrpFeasibility {
    pub feasible: bool,
    pub rates: SuccessRates,
}

pub fn prp_feasibility(domain: &Domain, task: &str) -> Result<PrpFeasibility> {
    let rates = equal_success_rates(domain, task)?;
    Ok(PrpFeasibility { feasible: rates.equal, rates })
}

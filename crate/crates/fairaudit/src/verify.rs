//! Quantified property verifiers behind the `verify` command and the
//! acceptance suite: exhaustive small-model checks for the two structural
//! theorems and seeded randomized suites for the constructors, the
//! optimizer/oracle agreement, monotonicity and the PRP equivalence.
//!
//! Everything here is deterministic: exhaustive checks scan a fixed grid,
//! randomized checks draw all randomness from an explicit seed.

use std::collections::BTreeMap;



use crate::audit::{
    accuracy_driven_unfairness, adversarial_eo_is_zero, adversarial_unfairness,
    adversarial_unfairness_oracle, fairness_enabling, ZeroMassCells, DEFAULT_CELL_BOUND,
    DEFAULT_MINIMIZER_CAP,
};
use crate::classifier::Classifier;
use crate::constructors::{
    dp_adversarial_marginal, eo_adversarial_marginal, multitask_certificate, mutual_eo_audit,
    perfect_accuracy_possible, prp_feasibility,
};
use crate::context::{
    construct_context_featuresets, construct_generic_distribution, generic_witness, is_generic,
    is_k_anonymous, is_non_committing, DEFAULT_GENERIC_SEARCH_BOUND,
};
use crate::domain::{Document, Domain, Group, Label};
use crate::error::{Error, Result};
use crate::generator::{generate, GeneratorParams, SplitMix64, WeightStyle};
use crate::metrics::{dp_of_labeling, eo_of_labeling, prp_is_fair, Notion};
use crate::partition::{
    induce_cells, partition_from_assignment, set_partitions, CellPartition, Feature, FeatureSet,
};
use crate::rational::{rat, Rat};

/// Outcome of one verification run.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub property: &'static str,
    pub pass: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl VerifyOutcome {
    fn pass(property: &'static str, checked: u64) -> VerifyOutcome {
        VerifyOutcome { property, pass: true, checked, counterexample: None }
    }

    fn fail(property: &'static str, checked: u64, witness: String) -> VerifyOutcome {
        VerifyOutcome { property, pass: false, checked, counterexample: Some(witness) }
    }
}

fn mask_labels(mask: u32, n: usize) -> Vec<Label> {
    (0..n).map(|i| ((mask >> i) & 1) as Label).collect()
}

/// Positive integer compositions of `total` into `parts` summands.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    fn recurse(remaining: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            if remaining >= 1 {
                prefix.push(remaining);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for first in 1..=remaining.saturating_sub(parts as u64 - 1) {
            prefix.push(first);
            recurse(remaining - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(total, parts, &mut Vec::new(), &mut out);
    out
}

fn uniform_domain(n: usize, group_mask: u32, tasks: BTreeMap<String, Vec<Label>>) -> Domain {
    let instances = (0..n)
        .map(|i| {
            let g = if (group_mask >> i) & 1 == 1 { Group::A } else { Group::D };
            (format!("x{:02}", i + 1), g)
        })
        .collect();
    Domain::new(instances, vec![rat(1, n as i64); n], tasks).expect("uniform weights sum to 1")
}

/// Which labeling pairs a structural verifier quantifies over.
///
/// Pairs that disagree almost surely (one labeling is the complement of the
/// other on every positive-mass instance) leave both agreement sets empty;
/// every directional error rate is then 1 in both groups and mutual EO
/// fairness holds vacuously without constraining the positive rates. The
/// equal-rates implication, and with it the multi-task exclusion, is false
/// for exactly that family, so the checks expose it under
/// [`LabelingPairs::All`] and verify the repaired statement under
/// [`LabelingPairs::AgreeingSomewhere`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelingPairs {
    All,
    AgreeingSomewhere,
}

/// Exhaustive check of the mutual-EO lemma: over every domain of at most
/// `max_size` instances with positive weights on the 1/`grid` grid, every
/// group assignment and every labeling pair in scope, mutual EO fairness
/// with disagreement forces equal per-group positive rates for both
/// labelings.
pub fn verify_lemma_mutual_eo(
    max_size: usize,
    grid: u64,
    scope: LabelingPairs,
) -> Result<VerifyOutcome> {
    const NAME: &str = "lemma-mutual-eo";
    if max_size > 30 {
        return Err(Error::SizeBoundExceeded { instances: max_size, bound: 30 });
    }
    let mut checked = 0u64;
    for n in 2..=max_size.min(grid as usize) {
        let weight_vectors = compositions(grid, n);
        for numerators in &weight_vectors {
            let weights: Vec<Rat> =
                numerators.iter().map(|&a| rat(a as i64, grid as i64)).collect();
            for group_mask in 1..((1u32 << n) - 1) {
                let instances = (0..n)
                    .map(|i| {
                        let g = if (group_mask >> i) & 1 == 1 { Group::A } else { Group::D };
                        (format!("x{:02}", i + 1), g)
                    })
                    .collect();
                let domain = Domain::new(instances, weights.clone(), BTreeMap::new())?;
                for f_mask in 0..(1u32 << n) {
                    let f = mask_labels(f_mask, n);
                    for g_mask in 0..(1u32 << n) {
                        // weights are positive, so almost-sure disagreement
                        // is pointwise complementarity
                        if scope == LabelingPairs::AgreeingSomewhere
                            && g_mask == ((1u32 << n) - 1) ^ f_mask
                        {
                            continue;
                        }
                        let g = mask_labels(g_mask, n);
                        checked += 1;
                        let report = mutual_eo_audit(&domain, &f, &g)?;
                        if report.mutually_fair_with_disagreement()
                            && !report.equal_positive_rates()
                        {
                            return Ok(VerifyOutcome::fail(
                                NAME,
                                checked,
                                format!(
                                    "n={n} groups={group_mask:b} weights={numerators:?}/{grid} \
                                     f={f_mask:b} g={g_mask:b}"
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// Integer-arithmetic check that every classifier over the cells is EO-fair
/// under uniform weights: each cell must put equal fractions of both
/// groups' label slices on each side. Cross-validated in a sampled way
/// against the exact-rational path.
fn adv_fair_uniform(cells: &[u32], group_a: u32, task: u32, n: usize) -> bool {
    let full = (1u32 << n) - 1;
    let group_d = full & !group_a;
    for (m, g1, g2) in [(task, group_a, group_d), (full & !task, group_a, group_d)] {
        let size1 = (m & g1).count_ones() as u64;
        let size2 = (m & g2).count_ones() as u64;
        for &cell in cells {
            let c1 = (cell & m & g1).count_ones() as u64;
            let c2 = (cell & m & g2).count_ones() as u64;
            // rates with empty-slice convention: empty slice rates as 0/1
            let (p1, q1) = if size1 > 0 { (c1, size1) } else { (0, 1) };
            let (p2, q2) = if size2 > 0 { (c2, size2) } else { (0, 1) };
            if p1 * q2 != p2 * q1 {
                return false;
            }
        }
    }
    true
}

fn homogeneous_uniform(cells: &[u32], task: u32) -> bool {
    cells.iter().all(|&c| c & task == c || c & task == 0)
}

fn esr_uniform(group_a: u32, task: u32, n: usize) -> bool {
    let full = (1u32 << n) - 1;
    let group_d = full & !group_a;
    let a = group_a.count_ones() as u64;
    let d = group_d.count_ones() as u64;
    let a1 = (group_a & task).count_ones() as u64;
    let d1 = (group_d & task).count_ones() as u64;
    a1 * d == d1 * a
}

/// Exhaustive check of the multi-task impossibility: over every uniform
/// domain of at most `max_size` instances, every group assignment, every
/// cell partition and every pair of differing tasks in scope, a
/// representation that is adversarially EO-fair for both tasks and
/// perfectly accurate for both forces equal success rates for both tasks.
pub fn verify_theorem_multitask(max_size: usize, scope: LabelingPairs) -> Result<VerifyOutcome> {
    const NAME: &str = "theorem-multitask";
    if max_size > 30 {
        return Err(Error::SizeBoundExceeded { instances: max_size, bound: 30 });
    }
    let mut checked = 0u64;
    let mut cross_checks = 0u64;
    for n in 2..=max_size {
        let full = (1u32 << n) - 1;
        let partitions = set_partitions(n);
        let cell_masks: Vec<Vec<u32>> = partitions
            .iter()
            .map(|assignment| {
                let cell_count = assignment.iter().max().unwrap() + 1;
                let mut masks = vec![0u32; cell_count];
                for (i, &c) in assignment.iter().enumerate() {
                    masks[c] |= 1 << i;
                }
                masks
            })
            .collect();
        for group_mask in 1..((1u32 << n) - 1) {
            let esr: Vec<bool> =
                (0..(1u32 << n)).map(|t| esr_uniform(group_mask, t, n)).collect();
            for (pi, cells) in cell_masks.iter().enumerate() {
                let mut qualifying: Vec<u32> = Vec::new();
                for task in 0..(1u32 << n) {
                    checked += 1;
                    let fair = adv_fair_uniform(cells, group_mask, task, n);
                    let homog = homogeneous_uniform(cells, task);
                    // sampled agreement check against the rational path
                    if checked == 1 || checked.is_multiple_of(997) {
                        let mut tasks = BTreeMap::new();
                        tasks.insert("t".to_string(), mask_labels(task, n));
                        let domain = uniform_domain(n, group_mask, tasks);
                        let partition =
                            partition_from_assignment(&domain, &partitions[pi]);
                        assert_eq!(
                            fair,
                            adversarial_eo_is_zero(&domain, "t", &partition)?,
                            "fast path disagrees with the exact audit"
                        );
                        assert_eq!(
                            homog,
                            perfect_accuracy_possible(&domain, "t", &partition)?
                        );
                        cross_checks += 1;
                    }
                    if fair && homog {
                        qualifying.push(task);
                    }
                }
                if qualifying.len() < 2 {
                    continue;
                }
                let mut exercised = false;
                for (ai, &a) in qualifying.iter().enumerate() {
                    for &b in &qualifying[ai + 1..] {
                        if scope == LabelingPairs::AgreeingSomewhere && b == full ^ a {
                            continue;
                        }
                        let violating = !esr[a as usize] || !esr[b as usize];
                        if !violating && exercised {
                            continue;
                        }
                        let mut tasks = BTreeMap::new();
                        tasks.insert("t1".to_string(), mask_labels(a, n));
                        tasks.insert("t2".to_string(), mask_labels(b, n));
                        let domain = uniform_domain(n, group_mask, tasks);
                        let partition = partition_from_assignment(&domain, &partitions[pi]);
                        let cert = multitask_certificate(&domain, &partition, "t1", "t2");
                        if violating {
                            // counterexample: all three criteria hold for a
                            // differing pair without equal success rates;
                            // the certificate's own assertion fires on it
                            let confirmed =
                                matches!(cert, Err(Error::InternalInvariant(_)));
                            return Ok(VerifyOutcome::fail(
                                NAME,
                                checked,
                                format!(
                                    "n={n} groups={group_mask:b} partition={:?} tasks \
                                     {a:b}/{b:b} certificate-confirms={confirmed}",
                                    partitions[pi]
                                ),
                            ));
                        }
                        // equal-success-rate qualifying pair: the
                        // certificate must agree with the scan
                        let cert = cert?;
                        if !(cert.adv_fair_task1
                            && cert.adv_fair_task2
                            && cert.perfect_accuracy_both
                            && cert.equal_success_rates_1
                            && cert.equal_success_rates_2)
                        {
                            return Ok(VerifyOutcome::fail(
                                NAME,
                                checked,
                                format!(
                                    "certificate disagrees with the scan: n={n} \
                                     groups={group_mask:b} partition={:?}",
                                    partitions[pi]
                                ),
                            ));
                        }
                        exercised = true;
                    }
                }
            }
        }
    }
    debug_assert!(max_size < 2 || cross_checks > 0);
    Ok(VerifyOutcome::pass(NAME, checked))
}

fn random_params(rng: &mut SplitMix64, max_size: usize, seed: u64) -> GeneratorParams {
    // labelings are enumerated through u64 masks; 24 instances is already
    // far past anything the seeded suites need
    GeneratorParams {
        seed: seed ^ rng.next_u64(),
        instances: (2, max_size.clamp(2, 24)),
        features: (1, 4),
        alphabet: 2 + rng.below(2),
        weights: if rng.flip() {
            WeightStyle::Uniform
        } else {
            WeightStyle::RandomRational { max_numerator: 6 }
        },
        tasks: 1,
    }
}

fn random_feature_split(doc: &Document, rng: &mut SplitMix64) -> (FeatureSet, Feature) {
    let features: Vec<&Feature> = doc.features.values().collect();
    let extra = features[rng.below(features.len())].clone();
    let subset: Vec<Feature> = features
        .iter()
        .filter(|f| f.name() != extra.name())
        .filter(|_| rng.flip())
        .map(|f| (*f).clone())
        .collect();
    (FeatureSet::new(subset).expect("unique names"), extra)
}

/// Seeded check that adding a feature never lowers adversarial unfairness,
/// for both notions.
pub fn verify_monotonicity_adv(trials: u64, max_size: usize, seed: u64) -> Result<VerifyOutcome> {
    const NAME: &str = "monotonicity-adv";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    for trial in 0..trials {
        let params = random_params(&mut rng, max_size, trial);
        let doc = generate(&params)?;
        let (fs, extra) = random_feature_split(&doc, &mut rng);
        let without = induce_cells(&doc.domain, &fs)?;
        let with = induce_cells(&doc.domain, &fs.union(&extra)?)?;
        for notion in [Notion::Eo, Notion::Dp] {
            checked += 1;
            let a = adversarial_unfairness(&doc.domain, "t", &without, notion)?;
            let b = adversarial_unfairness(&doc.domain, "t", &with, notion)?;
            if a.value > b.value {
                return Ok(VerifyOutcome::fail(
                    NAME,
                    checked,
                    format!("trial {trial} notion {} document:\n{}", notion.as_str(),
                        crate::generator::generate_document(&params)?),
                ));
            }
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// Seeded check that fairness-enabling is preserved when a feature is
/// added, across a grid of (epsilon, eta) bounds.
pub fn verify_monotonicity_enabling(
    trials: u64,
    max_size: usize,
    seed: u64,
) -> Result<VerifyOutcome> {
    const NAME: &str = "monotonicity-enabling";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    let grid = [rat(0, 1), rat(1, 8), rat(1, 4), rat(1, 2), rat(1, 1)];
    let alphas = [rat(1, 4), rat(1, 2), rat(3, 4)];
    for trial in 0..trials {
        let params = random_params(&mut rng, max_size.min(10), trial);
        let doc = generate(&params)?;
        let (fs, extra) = random_feature_split(&doc, &mut rng);
        let without = induce_cells(&doc.domain, &fs)?;
        let with = induce_cells(&doc.domain, &fs.union(&extra)?)?;
        let epsilon = grid[rng.below(grid.len())].clone();
        let eta = grid[rng.below(grid.len())].clone();
        let alpha = alphas[rng.below(alphas.len())].clone();
        checked += 1;
        let small = fairness_enabling(
            &doc.domain, "t", &without, &epsilon, &eta, &alpha, Notion::Eo, DEFAULT_CELL_BOUND,
        )?;
        let large = fairness_enabling(
            &doc.domain, "t", &with, &epsilon, &eta, &alpha, Notion::Eo, DEFAULT_CELL_BOUND,
        )?;
        if small.enabled && !large.enabled {
            return Ok(VerifyOutcome::fail(
                NAME,
                checked,
                format!("trial {trial} eps={epsilon} eta={eta} alpha={alpha} document:\n{}",
                    crate::generator::generate_document(&params)?),
            ));
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// Seeded agreement check between the closed-form adversarial optimizer and
/// the exhaustive oracle, for both notions.
pub fn verify_oracle_equivalence(
    trials: u64,
    max_size: usize,
    seed: u64,
) -> Result<VerifyOutcome> {
    const NAME: &str = "oracle-equivalence";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    for trial in 0..trials {
        let params = random_params(&mut rng, max_size.min(12), trial);
        let doc = generate(&params)?;
        let (fs, extra) = random_feature_split(&doc, &mut rng);
        let fs = if rng.flip() { fs.union(&extra)? } else { fs };
        let cells = induce_cells(&doc.domain, &fs)?;
        for notion in [Notion::Eo, Notion::Dp] {
            checked += 1;
            let exact = adversarial_unfairness(&doc.domain, "t", &cells, notion)?;
            let oracle = adversarial_unfairness_oracle(
                &doc.domain, "t", &cells, notion, DEFAULT_CELL_BOUND,
            )?;
            if exact.value != oracle.value || exact.witness != oracle.witness {
                return Ok(VerifyOutcome::fail(
                    NAME,
                    checked,
                    format!(
                        "trial {trial} notion {}: optimizer {} vs oracle {} document:\n{}",
                        notion.as_str(),
                        exact.value,
                        oracle.value,
                        crate::generator::generate_document(&params)?
                    ),
                ));
            }
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// Seeded check of the PRP equivalence: feasibility is refuted exactly when
/// the all-one classifier is PRP-unfair.
pub fn verify_prp_equivalence(trials: u64, max_size: usize, seed: u64) -> Result<VerifyOutcome> {
    const NAME: &str = "prp-equivalence";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    for trial in 0..trials {
        let params = random_params(&mut rng, max_size, trial);
        let doc = generate(&params)?;
        checked += 1;
        let feas = prp_feasibility(&doc.domain, "t")?;
        let cells = CellPartition::single_cell(&doc.domain);
        let all_one = prp_is_fair(&doc.domain, "t", &cells, &Classifier::constant(1, 1))?;
        if feas.feasible == all_one.fair {
            continue;
        }
        return Ok(VerifyOutcome::fail(
            NAME,
            checked,
            format!(
                "trial {trial}: feasibility {} vs all-one fair {} document:\n{}",
                feas.feasible,
                all_one.fair,
                crate::generator::generate_document(&params)?
            ),
        ));
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// Seeded check that the DP marginal constructor always reaches DP
/// unfairness exactly 1.
pub fn verify_dp_marginal(trials: u64, max_size: usize, seed: u64) -> Result<VerifyOutcome> {
    const NAME: &str = "dp-marginal";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    for trial in 0..trials {
        let params = random_params(&mut rng, max_size, trial);
        let doc = generate(&params)?;
        let n = doc.domain.len();
        // random non-constant labeling
        let h = loop {
            let mask = (rng.next_u64() & ((1u64 << n) - 1)) as u32;
            if mask != 0 && mask != ((1u32 << n) - 1) {
                break mask_labels(mask, n);
            }
        };
        checked += 1;
        let marginal = dp_adversarial_marginal(&doc.domain, &h)?;
        let reweighted = marginal.apply(&doc.domain)?;
        let achieved = dp_of_labeling(&reweighted, &h)?.value;
        if achieved != rat(1, 1) || marginal.achieved_unfairness != rat(1, 1) {
            return Ok(VerifyOutcome::fail(
                NAME,
                checked,
                format!("trial {trial}: achieved {achieved} document:\n{}",
                    crate::generator::generate_document(&params)?),
            ));
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// Seeded check that the EO marginal constructor always reaches EO
/// unfairness at least 1/2.
pub fn verify_eo_marginal(trials: u64, max_size: usize, seed: u64) -> Result<VerifyOutcome> {
    const NAME: &str = "eo-marginal";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    let mut trial = 0u64;
    while checked < trials {
        trial += 1;
        let params = random_params(&mut rng, max_size, trial);
        let doc = generate(&params)?;
        let n = doc.domain.len();
        let full = (1u32 << n) - 1;
        let f_mask = (rng.next_u64() & full as u64) as u32;
        let h_mask = (rng.next_u64() & full as u64) as u32;
        // preconditions: both non-constant, h differs from f and its flip
        if f_mask == 0 || f_mask == full || h_mask == 0 || h_mask == full {
            continue;
        }
        if h_mask == f_mask || h_mask == full & !f_mask {
            continue;
        }
        let f = mask_labels(f_mask, n);
        let h = mask_labels(h_mask, n);
        checked += 1;
        let marginal = eo_adversarial_marginal(&doc.domain, &f, &h)?;
        let reweighted = marginal.apply(&doc.domain)?;
        let achieved = eo_of_labeling(&reweighted, &f, &h).value;
        if achieved < rat(1, 2) {
            return Ok(VerifyOutcome::fail(
                NAME,
                checked,
                format!("trial {trial}: achieved {achieved} document:\n{}",
                    crate::generator::generate_document(&params)?),
            ));
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// Seeded check of the generic-pair pipeline: build a non-committing,
/// 2-anonymous feature, construct the distribution with the fixed weight
/// schedule, re-verify genericity (by search) and confirm both strict
/// context inequalities.
pub fn verify_generic_construction(trials: u64, seed: u64) -> Result<VerifyOutcome> {
    const NAME: &str = "generic-construction";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    for trial in 0..trials {
        let (domain, feature) = non_committing_two_anonymous_instance(&mut rng);
        let nc = is_non_committing(&feature, &domain, "t")?;
        let (anon, _) = is_k_anonymous(&feature, &domain, "t", 2)?;
        if nc.is_none() || !anon {
            return Err(Error::InternalInvariant(format!(
                "constructed instance is not non-committing/2-anonymous (trial {trial})"
            )));
        }
        checked += 1;
        let (weights, witness) = construct_generic_distribution(&feature, &domain, "t")?;
        // the five masses of the schedule
        let labels = domain.task("t")?;
        let mass = |pred: &dyn Fn(usize) -> bool| -> Rat {
            (0..domain.len()).filter(|&i| pred(i)).map(|i| weights[i].clone()).sum()
        };
        let c1 = witness.c1.clone();
        let c2 = witness.c2.clone();
        let c3 = witness.c3.clone();
        let in_c4 = |i: usize| {
            feature.value(i) == witness.y2
                && domain.group(i) == Group::A
                && labels[i] == 0
                && !c2.contains(&i)
        };
        let schedule = [
            (mass(&|i| c1.contains(&i)), rat(1, 5)),
            (mass(&|i| c2.contains(&i)), rat(1, 10)),
            (mass(&|i| c3.contains(&i) && labels[i] == 1), rat(3, 10)),
            (
                mass(&|i| c3.contains(&i) && domain.group(i) == Group::D && labels[i] == 0),
                rat(1, 5),
            ),
            (mass(&in_c4), rat(1, 5)),
        ];
        for (got, want) in &schedule {
            if got != want {
                return Ok(VerifyOutcome::fail(
                    NAME,
                    checked,
                    format!("trial {trial}: schedule mass {got}, expected {want}"),
                ));
            }
        }
        // the sixth condition instantiates with its displayed sides: the
        // whole (D,0) slice sits inside C3 and the (A,0) side is C2 against
        // C2 with C4
        let d0_in_c3 = mass(&|i| c3.contains(&i) && domain.group(i) == Group::D && labels[i] == 0);
        let d0_total = mass(&|i| domain.group(i) == Group::D && labels[i] == 0);
        let a0_in_c2c3 =
            mass(&|i| (c2.contains(&i) || c3.contains(&i)) && domain.group(i) == Group::A && labels[i] == 0);
        let a0_total = mass(&|i| domain.group(i) == Group::A && labels[i] == 0);
        if d0_in_c3 / d0_total != rat(1, 1) || a0_in_c2c3 / a0_total != rat(1, 3) {
            return Ok(VerifyOutcome::fail(
                NAME,
                checked,
                format!("trial {trial}: condition-6 sides are not 1 and 1/3"),
            ));
        }
        let reweighted = domain.with_weights(weights.clone())?;
        let search_bound = reweighted.len().max(DEFAULT_GENERIC_SEARCH_BOUND);
        let found = generic_witness(&feature, &reweighted, "t", search_bound)?;
        match found {
            Some(w) if is_generic(&feature, &reweighted, "t", &w)? => {}
            _ => {
                return Ok(VerifyOutcome::fail(
                    NAME,
                    checked,
                    format!("trial {trial}: witness search failed on a constructed pair"),
                ))
            }
        }
        let pair = construct_context_featuresets(&feature, &domain, "t", &weights, &witness)?;
        if pair.increasing_with <= pair.increasing_without
            || pair.decreasing_with >= pair.decreasing_without
        {
            return Ok(VerifyOutcome::fail(
                NAME,
                checked,
                format!("trial {trial}: context inequalities not strict"),
            ));
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// A domain of 16 to 20 instances with a binary feature that is
/// non-committing and 2-anonymous by construction: two instances in each
/// (value, group, label) combination, plus a few random extras.
pub fn non_committing_two_anonymous_instance(rng: &mut SplitMix64) -> (Domain, Feature) {
    let extras = rng.below(5);
    let n = 16 + extras;
    let mut groups = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for value in 0..2u8 {
        for group in [Group::A, Group::D] {
            for label in 0..2u8 {
                for _ in 0..2 {
                    groups.push(group);
                    labels.push(label);
                    values.push(value.to_string());
                }
            }
        }
    }
    for _ in 0..extras {
        groups.push(if rng.flip() { Group::A } else { Group::D });
        labels.push(rng.below(2) as Label);
        values.push(rng.below(2).to_string());
    }
    // a deterministic shuffle so ids do not encode the quadrant layout
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.below(i + 1));
    }
    let instances: Vec<(String, Group)> = order
        .iter()
        .enumerate()
        .map(|(pos, &src)| (format!("x{:02}", pos + 1), groups[src]))
        .collect();
    let task: Vec<Label> = order.iter().map(|&src| labels[src]).collect();
    let feature_values: Vec<String> = order.iter().map(|&src| values[src].clone()).collect();
    let mut tasks = BTreeMap::new();
    tasks.insert("t".to_string(), task);
    let domain =
        Domain::new(instances, vec![rat(1, n as i64); n], tasks).expect("uniform weights");
    (domain, Feature::new("g".to_string(), feature_values))
}

/// Seeded check that a feature leaving the cells unchanged leaves all three
/// audit values unchanged.
pub fn verify_neutral_extension(trials: u64, seed: u64) -> Result<VerifyOutcome> {
    const NAME: &str = "neutral-extension";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    for trial in 0..trials {
        let params = random_params(&mut rng, 10, trial);
        let doc = generate(&params)?;
        let (fs, _) = random_feature_split(&doc, &mut rng);
        let cells = induce_cells(&doc.domain, &fs)?;
        // three neutral extensions: a constant feature, a copy of an
        // existing feature, the cell-index feature
        let neutral = match trial % 3 {
            0 => Feature::new("n".into(), vec!["k".into(); doc.domain.len()]),
            1 if !fs.features().is_empty() => {
                let base = &fs.features()[rng.below(fs.features().len())];
                Feature::new("n".into(), (0..doc.domain.len()).map(|i| base.value(i).to_string()).collect())
            }
            _ => Feature::new(
                "n".into(),
                (0..doc.domain.len()).map(|i| cells.cell_of(i).to_string()).collect(),
            ),
        };
        let extended = induce_cells(&doc.domain, &fs.union(&neutral)?)?;
        checked += 1;
        if extended != cells {
            return Ok(VerifyOutcome::fail(
                NAME,
                checked,
                format!("trial {trial}: neutral feature changed the partition"),
            ));
        }
        for notion in [Notion::Eo, Notion::Dp] {
            let a = adversarial_unfairness(&doc.domain, "t", &cells, notion)?;
            let b = adversarial_unfairness(&doc.domain, "t", &extended, notion)?;
            if a.value != b.value {
                return Ok(VerifyOutcome::fail(NAME, checked, format!("trial {trial}: adversarial")));
            }
        }
        let alpha = rat(1, 2);
        let a = accuracy_driven_unfairness(
            &doc.domain, "t", &cells, &alpha, Notion::Eo,
            ZeroMassCells::BothLabels, DEFAULT_MINIMIZER_CAP,
        )?;
        let b = accuracy_driven_unfairness(
            &doc.domain, "t", &extended, &alpha, Notion::Eo,
            ZeroMassCells::BothLabels, DEFAULT_MINIMIZER_CAP,
        )?;
        if a.value != b.value || a.min_loss != b.min_loss {
            return Ok(VerifyOutcome::fail(NAME, checked, format!("trial {trial}: accuracy")));
        }
        let (eps, eta) = (rat(1, 4), rat(1, 4));
        let a = fairness_enabling(
            &doc.domain, "t", &cells, &eps, &eta, &alpha, Notion::Eo, DEFAULT_CELL_BOUND,
        )?;
        let b = fairness_enabling(
            &doc.domain, "t", &extended, &eps, &eta, &alpha, Notion::Eo, DEFAULT_CELL_BOUND,
        )?;
        if a.enabled != b.enabled {
            return Ok(VerifyOutcome::fail(NAME, checked, format!("trial {trial}: enabling")));
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

/// On every small domain, a representation expressing any non-constant
/// classifier admits a marginal under which some expressible classifier is
/// maximally DP-unfair.
pub fn verify_dp_split_coverage(trials: u64, max_size: usize, seed: u64) -> Result<VerifyOutcome> {
    const NAME: &str = "dp-split-coverage";
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    let mut trial = 0u64;
    while checked < trials {
        trial += 1;
        let params = random_params(&mut rng, max_size, trial);
        let doc = generate(&params)?;
        let (fs, extra) = random_feature_split(&doc, &mut rng);
        let fs = if rng.flip() { fs.union(&extra)? } else { fs };
        let cells = induce_cells(&doc.domain, &fs)?;
        if cells.len() < 2 {
            continue;
        }
        // the smallest expressible non-constant classifier: label the first
        // cell 1 and the rest 0
        let mut labels = vec![0u8; cells.len()];
        labels[0] = 1;
        let h = Classifier::new(labels).instance_labels(&cells);
        checked += 1;
        let marginal = dp_adversarial_marginal(&doc.domain, &h)?;
        if marginal.achieved_unfairness != rat(1, 1) {
            return Ok(VerifyOutcome::fail(
                NAME,
                checked,
                format!("trial {trial}: achieved {}", marginal.achieved_unfairness),
            ));
        }
    }
    Ok(VerifyOutcome::pass(NAME, checked))
}

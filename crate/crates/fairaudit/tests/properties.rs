//! Property tests over seeded random instances: structural invariants of
//! cell partitions and the algebraic identities of the fairness metrics.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use fairaudit::audit::{
    adversarial_unfairness, bayes_optimal_set, frontier, ZeroMassCells, DEFAULT_CELL_BOUND,
    DEFAULT_MINIMIZER_CAP,
};
use fairaudit::classifier::Classifier;
use fairaudit::domain::{Document, Domain, Group, Quadrant};
use fairaudit::generator::{generate, GeneratorParams, SplitMix64, WeightStyle};
use fairaudit::metrics::{
    dp_unfairness, eo_unfairness, equal_success_rates, prp_is_fair, weighted_loss, Notion,
};
use fairaudit::partition::{induce_cells, CellPartition, Feature, FeatureSet};
use fairaudit::rational::{rat, Rat};

fn seeded_doc(seed: u64, max_instances: usize) -> Document {
    let mut rng = SplitMix64::new(seed);
    let params = GeneratorParams {
        seed: rng.next_u64(),
        instances: (2, max_instances),
        features: (1, 3),
        alphabet: 2 + rng.below(2),
        weights: if rng.flip() {
            WeightStyle::Uniform
        } else {
            WeightStyle::RandomRational { max_numerator: 5 }
        },
        tasks: 1,
    };
    generate(&params).expect("generated documents validate")
}

fn all_features(doc: &Document) -> Vec<Feature> {
    doc.features.values().cloned().collect()
}

fn swap_groups(domain: &Domain) -> Domain {
    let mut tasks = BTreeMap::new();
    for name in domain.task_names() {
        tasks.insert(name.to_string(), domain.task(name).unwrap().to_vec());
    }
    Domain::new(
        (0..domain.len())
            .map(|i| (domain.id(i).to_string(), domain.group(i).other()))
            .collect(),
        domain.weights().to_vec(),
        tasks,
    )
    .unwrap()
}

fn random_classifier(rng: &mut SplitMix64, cells: &CellPartition) -> Classifier {
    Classifier::from_mask(cells.len(), rng.next_u64() & ((1u64 << cells.len()) - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_invariant_under_reorder_and_renaming(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let mut features = all_features(&doc);
        let fwd = induce_cells(&doc.domain, &FeatureSet::new(features.clone()).unwrap()).unwrap();
        features.reverse();
        let rev = induce_cells(&doc.domain, &FeatureSet::new(features.clone()).unwrap()).unwrap();
        prop_assert_eq!(&fwd, &rev);
        // rename all values by an injection
        let renamed: Vec<Feature> = features
            .iter()
            .map(|f| {
                Feature::new(
                    f.name().to_string(),
                    (0..f.len()).map(|i| format!("v{}", f.value(i))).collect(),
                )
            })
            .collect();
        let ren = induce_cells(&doc.domain, &FeatureSet::new(renamed).unwrap()).unwrap();
        prop_assert_eq!(&fwd, &ren);
    }

    #[test]
    fn refinement_by_any_feature(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let features = all_features(&doc);
        let mut rng = SplitMix64::new(seed);
        let base: Vec<Feature> =
            features.iter().filter(|_| rng.flip()).cloned().collect();
        let base_fs = FeatureSet::new(base).unwrap();
        let coarse = induce_cells(&doc.domain, &base_fs).unwrap();
        let extra = features[rng.below(features.len())].clone();
        let fine = induce_cells(&doc.domain, &base_fs.union(&extra).unwrap()).unwrap();
        prop_assert!(fine.refines(&coarse));
    }

    #[test]
    fn quadrants_partition_unity_and_scores_are_probabilities(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let total: Rat = Quadrant::ALL
            .iter()
            .map(|&q| doc.domain.quadrant_mass("t", q).unwrap())
            .sum();
        prop_assert!(total.is_one());
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let truth = doc.domain.task("t").unwrap();
        for cell in cells.cells() {
            let score = doc.domain.score("t", cell).unwrap();
            prop_assert!(score.value >= Rat::zero() && score.value <= Rat::one());
            let homogeneous = cell.windows(2).all(|w| truth[w[0]] == truth[w[1]]);
            if homogeneous && !score.zero_mass {
                prop_assert!(score.value.is_zero() || score.value.is_one());
            }
        }
    }

    #[test]
    fn unfairness_is_invariant_under_group_swap(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let swapped = swap_groups(&doc.domain);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let mut rng = SplitMix64::new(seed ^ 1);
        let h = random_classifier(&mut rng, &cells);
        let eo = eo_unfairness(&doc.domain, "t", &cells, &h).unwrap();
        let eo_swapped = eo_unfairness(&swapped, "t", &cells, &h).unwrap();
        prop_assert_eq!(eo.value, eo_swapped.value);
        let dp = dp_unfairness(&doc.domain, &cells, &h).unwrap();
        let dp_swapped = dp_unfairness(&swapped, &cells, &h).unwrap();
        prop_assert_eq!(dp.value, dp_swapped.value);
    }

    #[test]
    fn eo_of_flipped_classifier_is_unchanged(seed in any::<u64>()) {
        // flipping h sends every rate r over a massive quadrant to 1 - r,
        // so both absolute differences survive; rates over massless
        // quadrants stay pinned at 0 instead, which breaks the symmetry
        // when exactly one quadrant of a label side is massless. The
        // identity is therefore quantified over fully-populated domains.
        let doc = seeded_doc(seed, 10);
        let all_quadrants_massive = Quadrant::ALL
            .iter()
            .all(|&q| !doc.domain.quadrant_mass("t", q).unwrap().is_zero());
        prop_assume!(all_quadrants_massive);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let mut rng = SplitMix64::new(seed ^ 2);
        let h = random_classifier(&mut rng, &cells);
        let eo = eo_unfairness(&doc.domain, "t", &cells, &h).unwrap();
        let flipped = eo_unfairness(&doc.domain, "t", &cells, &h.complement()).unwrap();
        prop_assert_eq!(eo.value, flipped.value);
    }

    #[test]
    fn values_are_bounded_and_truth_is_fair(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let mut rng = SplitMix64::new(seed ^ 3);
        let h = random_classifier(&mut rng, &cells);
        let eo = eo_unfairness(&doc.domain, "t", &cells, &h).unwrap();
        prop_assert!(eo.value >= Rat::zero() && eo.value <= Rat::one());
        let dp = dp_unfairness(&doc.domain, &cells, &h).unwrap();
        prop_assert!(dp.value >= Rat::zero() && dp.value <= Rat::one());
        // constant classifiers are DP-fair
        let constant = Classifier::constant(cells.len(), 1);
        prop_assert!(dp_unfairness(&doc.domain, &cells, &constant).unwrap().value.is_zero());
        // the ground truth, where expressible, is EO-fair
        let truth = doc.domain.task("t").unwrap().to_vec();
        if let Some(exact) = Classifier::from_instance_labels(&cells, &truth) {
            prop_assert!(eo_unfairness(&doc.domain, "t", &cells, &exact).unwrap().value.is_zero());
        }
    }

    #[test]
    fn loss_of_h_and_complement_sum_to_base_rates(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let mut rng = SplitMix64::new(seed ^ 4);
        let h = random_classifier(&mut rng, &cells);
        let alpha = [rat(1, 4), rat(1, 2), rat(2, 3)][rng.below(3)].clone();
        let a = weighted_loss(&doc.domain, "t", &cells, &h, &alpha).unwrap();
        let b = weighted_loss(&doc.domain, "t", &cells, &h.complement(), &alpha).unwrap();
        let positive_mass = doc
            .domain
            .quadrant_mass("t", Quadrant { group: Group::A, label: 1 })
            .unwrap()
            + doc.domain.quadrant_mass("t", Quadrant { group: Group::D, label: 1 }).unwrap();
        let expected = &alpha * &positive_mass + (Rat::one() - &alpha) * (Rat::one() - &positive_mass);
        prop_assert_eq!(a + b, expected);
    }

    #[test]
    fn all_one_prp_fairness_matches_equal_success_rates(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let single = CellPartition::single_cell(&doc.domain);
        let all_one = prp_is_fair(&doc.domain, "t", &single, &Classifier::constant(1, 1)).unwrap();
        let esr = equal_success_rates(&doc.domain, "t").unwrap();
        prop_assert_eq!(all_one.fair, esr.equal);
    }

    #[test]
    fn minimizers_share_the_optimum_and_nothing_beats_it(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 8);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let alpha = rat(1, 2);
        let set = bayes_optimal_set(
            &doc.domain, "t", &cells, &alpha, ZeroMassCells::BothLabels, DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        for h in &set.minimizers {
            prop_assert_eq!(
                weighted_loss(&doc.domain, "t", &cells, h, &alpha).unwrap(),
                set.min_loss.clone()
            );
        }
        for mask in 0u64..(1 << cells.len()) {
            let h = Classifier::from_mask(cells.len(), mask);
            let loss = weighted_loss(&doc.domain, "t", &cells, &h, &alpha).unwrap();
            prop_assert!(loss >= set.min_loss);
            prop_assert_eq!(loss == set.min_loss, set.minimizers.contains(&h));
        }
    }

    #[test]
    fn accuracy_witness_is_a_loss_minimizer_attaining_the_value(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 8);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let alpha = rat(1, 2);
        let audit = fairaudit::audit::accuracy_driven_unfairness(
            &doc.domain, "t", &cells, &alpha, Notion::Eo,
            ZeroMassCells::BothLabels, DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        prop_assert_eq!(
            weighted_loss(&doc.domain, "t", &cells, &audit.witness, &alpha).unwrap(),
            audit.min_loss.clone()
        );
        prop_assert_eq!(
            eo_unfairness(&doc.domain, "t", &cells, &audit.witness).unwrap().value,
            audit.value.clone()
        );
        // no minimizer is more unfair than the reported maximum
        let set = bayes_optimal_set(
            &doc.domain, "t", &cells, &alpha, ZeroMassCells::BothLabels, DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        prop_assert!(set.minimizers.contains(&audit.witness));
        for h in &set.minimizers {
            prop_assert!(
                eo_unfairness(&doc.domain, "t", &cells, h).unwrap().value <= audit.value
            );
        }
    }

    #[test]
    fn accuracy_audit_matches_brute_force(seed in any::<u64>()) {
        // independent route: enumerate every labeling, keep the loss
        // minimizers, take the worst EO among them
        let doc = seeded_doc(seed, 8);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let alpha = rat(1, 2);
        let mut min_loss: Option<Rat> = None;
        let mut minimizers: Vec<Classifier> = Vec::new();
        for mask in 0u64..(1 << cells.len()) {
            let h = Classifier::from_mask(cells.len(), mask);
            let loss = weighted_loss(&doc.domain, "t", &cells, &h, &alpha).unwrap();
            match &min_loss {
                Some(best) if loss > *best => {}
                Some(best) if loss == *best => minimizers.push(h),
                _ => {
                    min_loss = Some(loss);
                    minimizers = vec![h];
                }
            }
        }
        let worst = minimizers
            .iter()
            .map(|h| eo_unfairness(&doc.domain, "t", &cells, h).unwrap().value)
            .max()
            .unwrap();
        let audit = fairaudit::audit::accuracy_driven_unfairness(
            &doc.domain, "t", &cells, &alpha, Notion::Eo,
            ZeroMassCells::BothLabels, DEFAULT_MINIMIZER_CAP,
        )
        .unwrap();
        prop_assert_eq!(&audit.min_loss, min_loss.as_ref().unwrap());
        prop_assert_eq!(audit.minimizer_count, minimizers.len());
        prop_assert_eq!(audit.value, worst);
    }

    #[test]
    fn frontier_points_dominate_every_labeling(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 8);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        let alpha = rat(1, 2);
        let points =
            frontier(&doc.domain, "t", &cells, &alpha, Notion::Eo, DEFAULT_CELL_BOUND).unwrap();
        for mask in 0u64..(1 << cells.len()) {
            let h = Classifier::from_mask(cells.len(), mask);
            let loss = weighted_loss(&doc.domain, "t", &cells, &h, &alpha).unwrap();
            let unf = eo_unfairness(&doc.domain, "t", &cells, &h).unwrap().value;
            prop_assert!(points.iter().any(|p| p.loss <= loss && p.unfairness <= unf));
        }
        // the witnesses attain their coordinates
        for p in &points {
            prop_assert_eq!(
                weighted_loss(&doc.domain, "t", &cells, &p.classifier, &alpha).unwrap(),
                p.loss.clone()
            );
            prop_assert_eq!(
                eo_unfairness(&doc.domain, "t", &cells, &p.classifier).unwrap().value,
                p.unfairness.clone()
            );
        }
    }

    #[test]
    fn adversarial_witnesses_attain_the_maximum(seed in any::<u64>()) {
        let doc = seeded_doc(seed, 10);
        let cells = induce_cells(&doc.domain, &FeatureSet::new(all_features(&doc)).unwrap()).unwrap();
        for notion in [Notion::Eo, Notion::Dp] {
            let audit = adversarial_unfairness(&doc.domain, "t", &cells, notion).unwrap();
            let attained = match notion {
                Notion::Eo => eo_unfairness(&doc.domain, "t", &cells, &audit.witness).unwrap().value,
                Notion::Dp => dp_unfairness(&doc.domain, &cells, &audit.witness).unwrap().value,
                Notion::Prp => unreachable!(),
            };
            prop_assert_eq!(attained, audit.value);
        }
    }
}

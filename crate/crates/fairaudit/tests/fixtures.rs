//! Frozen values for the shipped fixtures: quadrant masses, scores,
//! rate computations and the preimage-induced partitions.

use fairaudit::audit::{
    accuracy_driven_unfairness, ZeroMassCells, DEFAULT_MINIMIZER_CAP,
};
use fairaudit::domain::{parse_domain, Document, Group, Quadrant};
use fairaudit::metrics::{eo_of_labeling, equal_success_rates, Notion};
use fairaudit::partition::{induce_cells, FeatureSet};
use fairaudit::rational::{rat, Rat};

const FIX_12: &str = include_str!("../../../fixtures/fix-12.json");
const FIX_8A: &str = include_str!("../../../fixtures/fix-8a.json");
const FIX_8B: &str = include_str!("../../../fixtures/fix-8b.json");

fn cells_of(doc: &Document, names: &[&str]) -> fairaudit::CellPartition {
    let fs = FeatureSet::new(
        names.iter().map(|n| doc.feature(n).unwrap().clone()).collect(),
    )
    .unwrap();
    induce_cells(&doc.domain, &fs).unwrap()
}

#[test]
fn quadrant_masses() {
    let doc = parse_domain(FIX_8A).unwrap();
    assert_eq!(
        doc.domain.quadrant_mass("t", Quadrant { group: Group::A, label: 1 }).unwrap(),
        rat(2, 8)
    );
    let total: Rat = Quadrant::ALL
        .iter()
        .map(|&q| doc.domain.quadrant_mass("t", q).unwrap())
        .sum();
    assert_eq!(total, rat(1, 1));

    let doc12 = parse_domain(FIX_12).unwrap();
    assert_eq!(
        doc12.domain.quadrant_mass("t", Quadrant { group: Group::D, label: 0 }).unwrap(),
        rat(3, 12)
    );
}

#[test]
fn cell_scores() {
    let doc = parse_domain(FIX_8A).unwrap();
    let idx = |id: &str| doc.domain.index_of(id).unwrap();
    let score = doc.domain.score("t", &[idx("x1"), idx("x5")]).unwrap();
    assert_eq!(score.value, rat(1, 2));
    // label-homogeneous cells score exactly 0 or 1
    let ones = doc.domain.score("t", &[idx("x1"), idx("x2")]).unwrap();
    assert_eq!(ones.value, rat(1, 1));

    let doc12 = parse_domain(FIX_12).unwrap();
    let i = |id: &str| doc12.domain.index_of(id).unwrap();
    let score = doc12.domain.score("t", &[i("x4"), i("x6"), i("x7")]).unwrap();
    assert_eq!(score.value, rat(2, 3));
}

#[test]
fn single_misclassification_costs_one_sixth_of_eo() {
    let doc = parse_domain(FIX_12).unwrap();
    let truth = doc.domain.task("t").unwrap().to_vec();
    let mut pred = truth.clone();
    let x7 = doc.domain.index_of("x7").unwrap();
    pred[x7] = 1 - pred[x7];
    let report = eo_of_labeling(&doc.domain, &truth, &pred);
    assert_eq!(report.value, rat(1, 6));
    assert_eq!(report.rates.fpr_a.value, rat(1, 3));
    assert_eq!(report.rates.fpr_d.value, rat(0, 1));
}

#[test]
fn both_eight_point_fixtures_and_the_twelve_point_one_have_equal_success_rates() {
    for text in [FIX_8A, FIX_8B, FIX_12] {
        let doc = parse_domain(text).unwrap();
        let esr = equal_success_rates(&doc.domain, "t").unwrap();
        assert!(esr.equal);
        assert_eq!(esr.rate_a, rat(1, 2));
    }
}

#[test]
fn perfect_separation_gives_zero_accuracy_driven_unfairness() {
    let doc = parse_domain(FIX_8B).unwrap();
    let cells = cells_of(&doc, &["f1", "f2"]);
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
    assert_eq!(audit.value, rat(0, 1));
    assert_eq!(audit.min_loss, rat(0, 1));
    assert_eq!(audit.minimizer_count, 1);
}

#[test]
fn bound_partition_refinements_match_the_reconciliation_notes() {
    // refining the partition named F by the feature f yields exactly the
    // partition named F+f; on the primed pair the roles are crossed: it is
    // F'+f that refines to F'. Both facts are documented in the fixture.
    let doc = parse_domain(FIX_12).unwrap();
    let f = doc.feature("f").unwrap().clone();
    let refine = |name: &str| {
        let base = doc.partition(name).unwrap();
        let marker = fairaudit::Feature::new(
            "cell".into(),
            (0..doc.domain.len()).map(|i| base.cell_of(i).to_string()).collect(),
        );
        let fs = FeatureSet::new(vec![marker, f.clone()]).unwrap();
        induce_cells(&doc.domain, &fs).unwrap()
    };
    assert_eq!(&refine("F"), doc.partition("F+f").unwrap());
    assert_eq!(&refine("F'+f"), doc.partition("F'").unwrap());
    // and the bound base partitions are exactly the two cell lists the
    // source example prints
    assert!(doc.partition("F+f").unwrap().refines(doc.partition("F").unwrap()));
    assert!(doc.partition("F'").unwrap().refines(doc.partition("F'+f").unwrap()));
}

#[test]
fn preimage_induced_partition_of_the_full_twelve_point_feature_set() {
    // cells computed from the listed preimages; the fixture notes document
    // how these differ from the bound partitions
    let doc = parse_domain(FIX_12).unwrap();
    let cells = cells_of(&doc, &["f1", "f2", "f3", "f"]);
    let mut got: Vec<Vec<String>> = cells.id_cells(&doc.domain);
    for cell in &mut got {
        cell.sort();
    }
    got.sort();
    let mut want = vec![
        vec!["x1".to_string(), "x5".to_string()],
        vec!["x2".to_string(), "x3".to_string()],
        vec!["x12".to_string()],
        vec!["x8".to_string()],
        vec!["x4".to_string(), "x6".to_string(), "x7".to_string()],
        vec!["x10".to_string(), "x9".to_string()],
        vec!["x11".to_string()],
    ];
    for cell in &mut want {
        cell.sort();
    }
    want.sort();
    assert_eq!(got, want);
}

//! Deterministic seeded generation of domain documents.
//!
//! All randomness in the crate flows through [`SplitMix64`] seeded
//! explicitly, so identical parameters always produce byte-identical
//! documents and identical verification runs.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::domain::{parse_domain, Document};
use crate::error::{Error, Result};
use crate::rational::{rat, ratio_string};

/// SplitMix64: small, fast, stable across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Uniform value in the inclusive range.
    pub fn in_range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn flip(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// Weight styles the generator understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightStyle {
    Uniform,
    /// Positive random rationals over a common denominator; each numerator
    /// is drawn from `1..=max_numerator`.
    RandomRational { max_numerator: usize },
}

/// Parameters of one generated instance. Identical parameters yield an
/// identical document.
#[derive(Debug, Clone)]
pub struct GeneratorParams {
    pub seed: u64,
    pub instances: (usize, usize),
    pub features: (usize, usize),
    pub alphabet: usize,
    pub weights: WeightStyle,
    pub tasks: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            seed: 0,
            instances: (8, 8),
            features: (2, 2),
            alphabet: 2,
            weights: WeightStyle::Uniform,
            tasks: 1,
        }
    }
}

#[derive(Serialize)]
struct InstanceOut {
    id: String,
    group: String,
    weight: String,
}

#[derive(Serialize)]
struct DocumentOut {
    instances: Vec<InstanceOut>,
    tasks: BTreeMap<String, BTreeMap<String, u8>>,
    features: BTreeMap<String, BTreeMap<String, String>>,
}

fn check_params(p: &GeneratorParams) -> Result<()> {
    let bad = |msg: String| Err(Error::GeneratorParams(msg));
    if p.instances.0 < 2 || p.instances.0 > p.instances.1 {
        return bad(format!("instance range {:?} (need 2 <= lo <= hi)", p.instances));
    }
    if p.features.0 > p.features.1 {
        return bad(format!("feature range {:?}", p.features));
    }
    if p.alphabet < 1 {
        return bad("alphabet size must be at least 1".into());
    }
    if p.tasks < 1 {
        return bad("at least one task is required".into());
    }
    if let WeightStyle::RandomRational { max_numerator } = p.weights {
        if max_numerator < 1 {
            return bad("max numerator must be at least 1".into());
        }
    }
    Ok(())
}

/// Instance ids use a fixed width so lexicographic and positional order
/// agree, keeping canonical cell order aligned with document order.
fn instance_id(i: usize, n: usize) -> String {
    let width = (n.max(1)).to_string().len();
    format!("x{:0width$}", i + 1)
}

/// Generate a validated document as a JSON string.
pub fn generate_document(params: &GeneratorParams) -> Result<String> {
    check_params(params)?;
    let mut rng = SplitMix64::new(params.seed);
    let n = rng.in_range(params.instances.0, params.instances.1);

    let mut groups: Vec<bool> = (0..n).map(|_| rng.flip()).collect(); // true = A
    if groups.iter().all(|&g| g) {
        let i = rng.below(n);
        groups[i] = false;
    } else if groups.iter().all(|&g| !g) {
        let i = rng.below(n);
        groups[i] = true;
    }

    let weights: Vec<String> = match params.weights {
        WeightStyle::Uniform => (0..n).map(|_| ratio_string(&rat(1, n as i64))).collect(),
        WeightStyle::RandomRational { max_numerator } => {
            let numerators: Vec<i64> =
                (0..n).map(|_| rng.in_range(1, max_numerator) as i64).collect();
            let total: i64 = numerators.iter().sum();
            numerators.iter().map(|&a| ratio_string(&rat(a, total))).collect()
        }
    };

    let ids: Vec<String> = (0..n).map(|i| instance_id(i, n)).collect();
    let instances: Vec<InstanceOut> = (0..n)
        .map(|i| InstanceOut {
            id: ids[i].clone(),
            group: if groups[i] { "A" } else { "D" }.to_string(),
            weight: weights[i].clone(),
        })
        .collect();

    let mut tasks = BTreeMap::new();
    for t in 0..params.tasks {
        let name = if t == 0 { "t".to_string() } else { format!("t{}", t + 1) };
        let labels: BTreeMap<String, u8> =
            ids.iter().map(|id| (id.clone(), rng.below(2) as u8)).collect();
        tasks.insert(name, labels);
    }

    let feature_count = rng.in_range(params.features.0, params.features.1);
    let mut features = BTreeMap::new();
    for k in 0..feature_count {
        let values: BTreeMap<String, String> = ids
            .iter()
            .map(|id| (id.clone(), rng.below(params.alphabet).to_string()))
            .collect();
        features.insert(format!("f{}", k + 1), values);
    }

    let doc = DocumentOut { instances, tasks, features };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serialization");
    text.push('\n');
    Ok(text)
}

/// Generate and parse in one step; the parser re-validates everything the
/// generator promises.
pub fn generate(params: &GeneratorParams) -> Result<Document> {
    parse_domain(&generate_document(params)?)
}

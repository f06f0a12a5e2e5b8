//! Exact-arithmetic group-fairness audits of data representations over
//! finite domains.
//!
//! A domain is a finite instance set with a binary protected attribute,
//! per-task ground-truth labels and exact rational probability weights. A
//! representation is a finite feature set; the classifiers expressible over
//! it are exactly the binary labelings of the cells the features induce.
//! The crate computes, with no floating point anywhere:
//!
//! - classifier-level quantities: per-group error rates, equalized-odds and
//!   demographic-parity unfairness, predictive-rate-parity verdicts,
//!   weighted risk ([`metrics`]);
//! - representation-level audits under adversarial, accuracy-driven and
//!   fairness-enabling objectives, with an independent enumeration oracle
//!   and the loss/unfairness Pareto frontier ([`audit`]);
//! - constructive impossibility witnesses: adversarial marginals against DP
//!   and EO, mutual-EO audits, multi-task certificates and PRP feasibility
//!   ([`constructors`]);
//! - context-dependence of single features: non-triviality predicates,
//!   generic feature/distribution pairs and the two-context construction
//!   showing a feature helping in one feature-set context and hurting in
//!   another ([`context`]);
//! - deterministic instance generation and quantified property
//!   verification ([`generator`], [`verify`]).

// index loops here typically walk several parallel columns at once
#![allow(clippy::needless_range_loop)]

pub mod audit;
pub mod classifier;
pub mod constructors;
pub mod context;
pub mod domain;
pub mod error;
pub mod generator;
pub mod metrics;
pub mod partition;
pub mod rational;
pub mod verify;

pub use classifier::Classifier;
pub use domain::{parse_domain, Document, Domain, Group, Label, Quadrant};
pub use error::{Error, Result};
pub use metrics::Notion;
pub use partition::{induce_cells, CellPartition, Feature, FeatureSet};
pub use rational::{parse_rational, rat, ratio_string, Rat};

//! Canonical sample and classifier grids for the benchmark.

use crate::classifiers::{ClassifierSpec, Penalty};
use crate::sampling::SampleSpec;

/// The full sampling grid: SMOTE over five target sizes crossed with five
/// fraud ratios, plus undersampling over the same five ratios.
pub fn table_sample_grid() -> Vec<SampleSpec> {
    let sizes = [1_000usize, 2_000, 3_000, 5_000, 10_000];
    let ratios = [0.1f64, 0.2, 0.3, 0.4, 0.5];
    let mut grid = Vec::with_capacity(sizes.len() * ratios.len() + ratios.len());
    for &n in &sizes {
        for &r in &ratios {
            grid.push(SampleSpec::smote(n, r));
        }
    }
    for &r in &ratios {
        grid.push(SampleSpec::undersample(r));
    }
    grid
}

/// The classifier tuning grid: both penalties crossed with five
/// regularization strengths for the linear models, and ten ensemble or
/// neighbourhood sizes for the forest and KNN.
pub fn table_classifier_grid() -> Vec<ClassifierSpec> {
    let c_values = [0.5f64, 1.0, 5.0, 10.0, 20.0];
    let counts = [10usize, 20, 30, 40, 50, 60, 70, 80, 90, 100];
    let mut grid = Vec::new();
    for penalty in [Penalty::L1, Penalty::L2] {
        for &c in &c_values {
            grid.push(ClassifierSpec::log(penalty, c));
        }
    }
    for penalty in [Penalty::L1, Penalty::L2] {
        for &c in &c_values {
            grid.push(ClassifierSpec::svc(penalty, c));
        }
    }
    for &t in &counts {
        grid.push(ClassifierSpec::rf(t));
    }
    grid.push(ClassifierSpec::Gnb);
    for &k in &counts {
        grid.push(ClassifierSpec::knn(k));
    }
    grid
}

/// Out-of-the-box parameterizations, used before any tuning pass.
pub fn default_classifiers() -> Vec<ClassifierSpec> {
    vec![
        ClassifierSpec::log(Penalty::L2, 1.0),
        ClassifierSpec::svc(Penalty::L2, 1.0),
        ClassifierSpec::rf(100),
        ClassifierSpec::Gnb,
        ClassifierSpec::knn(5),
    ]
}

/// Tuned parameterizations for the head-to-head benchmark, with the two
/// control models included for contrast.
pub fn tuned_classifiers() -> Vec<ClassifierSpec> {
    vec![
        ClassifierSpec::log(Penalty::L1, 0.5),
        ClassifierSpec::svc(Penalty::L1, 0.5),
        ClassifierSpec::svc(Penalty::L2, 0.5),
        ClassifierSpec::rf(100),
        ClassifierSpec::Gnb,
        ClassifierSpec::knn(10),
    ]
}

/// The three strongest tuned models; the default voting-ensemble members.
pub fn tuned_member_specs() -> Vec<ClassifierSpec> {
    vec![
        ClassifierSpec::rf(100),
        ClassifierSpec::svc(Penalty::L1, 0.5),
        ClassifierSpec::log(Penalty::L1, 0.5),
    ]
}

use std::time::Instant;

use stylometry::cluster::kmeans;
use stylometry::corpus::synth::{gen_synthetic_corpus, SynthConfig};
use stylometry::features::extract_from_text;
use stylometry::learn::cv::cross_validate;
use stylometry::learn::{ModelKind, TrainConfig};
use stylometry::matrix::Matrix;
use stylometry::random::mix_seed;
use stylometry::standardize::Standardizer;

fn dataset(seed: u64, n: usize, rate: f64, coupling: f64) -> (Matrix<f64>, Vec<bool>) {
    let cfg = SynthConfig {
        seed,
        n_authors: n,
        positive_rate: rate,
        style_profiles: 4,
        skill_style_coupling: coupling,
    };
    let synth = gen_synthetic_corpus(&cfg).unwrap();
    let rows: Vec<Vec<f64>> = synth
        .corpus
        .files
        .iter()
        .map(|f| extract_from_text::<f64>(&f.text).unwrap().to_vec())
        .collect();
    let labels: Vec<bool> = synth.ground_truth.iter().map(|g| g.label).collect();
    (Matrix::from_rows(&rows), labels)
}

fn main() {
    // Criterion 4 shape: coupling 0, every model near-chance AUC.
    let (x, y) = dataset(1042, 1000, 0.2, 0.0);
    println!("== coupling 0, n=1000, rate 0.2");
    for (i, kind) in ModelKind::ALL.iter().enumerate() {
        let t = Instant::now();
        let config = TrainConfig::for_kind(*kind, mix_seed(99, i as u64));
        let report = cross_validate(&config, &x, &y, 5, 99).unwrap();
        println!(
            "{:6} auc {:.3} recall {:.3} [{:.1?}]",
            kind.abbrev(),
            report.mean.auc_roc,
            report.mean.recall,
            t.elapsed()
        );
    }
    // per-cluster positive rates
    let (_, xs) = Standardizer::fit_transform(&x);
    let r = kmeans(&xs, 4, 1042, 300).unwrap();
    let global = y.iter().filter(|&&l| l).count() as f64 / y.len() as f64;
    for c in 0..4 {
        let idx: Vec<usize> = (0..y.len()).filter(|&i| r.assignments[i] == c).collect();
        let pos = idx.iter().filter(|&&i| y[i]).count() as f64 / idx.len() as f64;
        println!(
            "cluster {c}: size {} rate {:.3} (global {:.3}, dev {:.3})",
            idx.len(),
            pos,
            global,
            (pos - global).abs()
        );
    }

    // Criterion 5 shape: coupling 0.8, n=1000, rate 0.05.
    let (x, y) = dataset(2042, 1000, 0.05, 0.8);
    println!("== coupling 0.8, n=1000, rate 0.05");
    for (i, kind) in [
        ModelKind::BalancedRandomForest,
        ModelKind::LogisticRegression,
        ModelKind::Dummy,
    ]
    .iter()
    .enumerate()
    {
        let t = Instant::now();
        let config = TrainConfig::for_kind(*kind, mix_seed(7, i as u64));
        let report = cross_validate(&config, &x, &y, 5, 7).unwrap();
        println!(
            "{:6} auc {:.3} recall {:.3} [{:.1?}]",
            kind.abbrev(),
            report.mean.auc_roc,
            report.mean.recall,
            t.elapsed()
        );
    }
}

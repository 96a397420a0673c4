//! `stylometry train`: feature CSV -> cross-validated model reports plus a
//! model-comparison summary sorted by recall.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use stylometry::features::parse_features_csv;
use stylometry::learn::cv::{cross_validate, EvalReport};
use stylometry::learn::{ModelKind, TrainConfig};
use stylometry::random::mix_seed;
use stylometry::Real;

use crate::manifest::RunManifest;
use crate::output::{manifest_path_for, write_all_atomic};
use crate::{CommandError, CommandResult};

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Feature-matrix CSV produced by `extract`
    #[arg(long)]
    pub features: PathBuf,
    /// Comma-separated model kinds (Dummy, LR, SVC, KNN, DT, RF, BRF, RUSAda)
    #[arg(long, default_value = "Dummy,LR,SVC,KNN,DT,RF,BRF,RUSAda")]
    pub models: String,
    #[arg(long = "k-folds", default_value_t = 5)]
    pub k_folds: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output JSON path
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    model: String,
    recall: Real,
    macro_f1: Real,
    auc_roc: Real,
    balanced_accuracy: Real,
}

#[derive(Debug, Serialize)]
struct TrainOutput {
    summary: Vec<SummaryRow>,
    reports: Vec<EvalReport<Real>>,
}

fn parse_models(spec: &str) -> Result<Vec<ModelKind>, CommandError> {
    let mut kinds = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let kind = ModelKind::parse(token)
            .ok_or_else(|| CommandError::Usage(format!("unknown model kind {token:?}")))?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(CommandError::Usage("no models requested".to_string()));
    }
    Ok(kinds)
}

pub fn run(args: &TrainArgs) -> CommandResult {
    let kinds = parse_models(&args.models)?;
    if args.k_folds < 2 {
        return Err(CommandError::Usage(format!(
            "--k-folds must be at least 2, got {}",
            args.k_folds
        )));
    }
    let text = std::fs::read_to_string(&args.features)?;
    let table = parse_features_csv::<Real>(&text)?;
    let positives = table.labels.iter().filter(|&&l| l).count();
    let negatives = table.labels.len() - positives;
    if positives < args.k_folds || negatives < args.k_folds {
        return Err(CommandError::Runtime(anyhow::anyhow!(
            "stratified {}-fold CV needs at least {} samples per class \
             (got {positives} positive, {negatives} negative); lower --k-folds \
             or use a larger selection",
            args.k_folds,
            args.k_folds
        )));
    }

    let mut reports = Vec::with_capacity(kinds.len());
    for (i, kind) in kinds.iter().enumerate() {
        let config = TrainConfig::for_kind(*kind, mix_seed(args.seed, i as u64));
        // All models share the same fold plan for comparability.
        let report = cross_validate(&config, &table.matrix, &table.labels, args.k_folds, args.seed)?;
        reports.push(report);
    }
    let mut summary: Vec<SummaryRow> = reports
        .iter()
        .map(|r| SummaryRow {
            model: r.model.clone(),
            recall: r.mean.recall,
            macro_f1: r.mean.macro_f1,
            auc_roc: r.mean.auc_roc,
            balanced_accuracy: r.mean.balanced_accuracy,
        })
        .collect();
    summary.sort_by(|a, b| {
        b.recall
            .partial_cmp(&a.recall)
            .expect("finite recall")
            .then_with(|| a.model.cmp(&b.model))
    });
    let order: Vec<String> = summary.iter().map(|s| s.model.clone()).collect();
    reports.sort_by_key(|r| order.iter().position(|m| *m == r.model));

    let output = TrainOutput { summary, reports };
    let mut json = serde_json::to_vec_pretty(&output)?;
    json.push(b'\n');

    let mut manifest = RunManifest::new("train", args.seed);
    manifest
        .input("features", args.features.display().to_string())
        .output(args.out.display().to_string())
        .config("models", &args.models)
        .config("k_folds", args.k_folds)
        .config("rows", table.labels.len())
        .config("positives", positives)
        .config("smote_k_neighbors", stylometry::learn::SMOTE_K_NEIGHBORS);

    write_all_atomic(&[
        (args.out.clone(), json),
        (manifest_path_for(&args.out), manifest.to_bytes()),
    ])?;
    Ok(())
}

//! `stylometry extract`: corpus -> feature-matrix CSV.

use std::path::PathBuf;

use clap::Args;
use stylometry::corpus::{label_dataset, load_corpus, Round};
use stylometry::features::{extract_batch, features_csv_to_string, FeatureRow};
use stylometry::Real;

use crate::manifest::RunManifest;
use crate::output::{manifest_path_for, write_all_atomic};
use crate::{CommandError, CommandResult};

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Corpus root: <root>/<year>/<round>/<problem>/<author>.cpp
    #[arg(long)]
    pub corpus: PathBuf,
    /// Manifest CSV: author_id,year,max_round
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub year: i32,
    /// Round token: Q, 1A, 1B, 1C, 2, 3 or F
    #[arg(long)]
    pub round: String,
    #[arg(long)]
    pub problem: String,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn run(args: &ExtractArgs) -> CommandResult {
    let round = Round::parse_token(&args.round)
        .map_err(|_| CommandError::Usage(format!("unknown round token {:?}", args.round)))?;
    let corpus = load_corpus(&args.corpus, &args.manifest)?;
    let batch = extract_batch::<Real>(&corpus, args.year, round, &args.problem)?;
    let dataset = label_dataset(&corpus, args.year, round, &args.problem, &batch.features)?;
    let rows: Vec<FeatureRow<Real>> = dataset
        .rows
        .iter()
        .map(|r| FeatureRow {
            author_id: r.author_id.clone(),
            problem_id: dataset.problem_id.clone(),
            label: r.label,
            features: r.features,
        })
        .collect();
    let csv = features_csv_to_string(&rows);

    let mut manifest = RunManifest::new("extract", args.seed);
    manifest
        .input("corpus", args.corpus.display().to_string())
        .input("manifest", args.manifest.display().to_string())
        .output(args.out.display().to_string())
        .config("year", args.year)
        .config("round", round.token())
        .config("problem", &args.problem)
        .config("rows", rows.len());
    let skipped = corpus.stats.skipped() + batch.skipped_empty;
    if skipped > 0 {
        manifest.warn(format!(
            "skipped {} file(s): {} undecodable/empty at load, {} unknown author, {} empty at extraction",
            skipped,
            corpus.stats.skipped_encoding,
            corpus.stats.skipped_unknown_author,
            batch.skipped_empty
        ));
        eprintln!("warning: skipped {skipped} file(s)");
    }
    write_all_atomic(&[
        (args.out.clone(), csv.into_bytes()),
        (manifest_path_for(&args.out), manifest.to_bytes()),
    ])?;
    Ok(())
}

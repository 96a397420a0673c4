//! `stylometry synth`: seeded synthetic corpus generation.

use std::path::PathBuf;

use clap::Args;
use stylometry::corpus::synth::{
    corpus_relative_path, gen_synthetic_corpus, ground_truth_csv_bytes, manifest_csv_bytes,
    SynthConfig, DEFAULT_POSITIVE_RATE,
};

use crate::manifest::RunManifest;
use crate::output::write_all_atomic;
use crate::{CommandError, CommandResult};

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of authors (one file each)
    #[arg(long)]
    pub n: usize,
    /// Fraction of good authors
    #[arg(long, default_value_t = DEFAULT_POSITIVE_RATE)]
    pub rate: f64,
    /// Number of distinct style profiles
    #[arg(long, default_value_t = 4)]
    pub profiles: usize,
    /// Skill-style coupling in [0, 1]
    #[arg(long, default_value_t = 0.0)]
    pub coupling: f64,
    /// Output directory (becomes a corpus root)
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &SynthArgs) -> CommandResult {
    if !(args.rate > 0.0 && args.rate < 1.0) {
        return Err(CommandError::Usage(format!(
            "--rate must be in (0, 1), got {}",
            args.rate
        )));
    }
    if !(0.0..=1.0).contains(&args.coupling) {
        return Err(CommandError::Usage(format!(
            "--coupling must be in [0, 1], got {}",
            args.coupling
        )));
    }
    if args.profiles == 0 {
        return Err(CommandError::Usage(
            "--profiles must be at least 1".to_string(),
        ));
    }
    if args.n == 0 {
        return Err(CommandError::Usage("--n must be at least 1".to_string()));
    }
    let config = SynthConfig {
        seed: args.seed,
        n_authors: args.n,
        positive_rate: args.rate,
        style_profiles: args.profiles,
        skill_style_coupling: args.coupling,
    };
    let synth = gen_synthetic_corpus(&config)?;

    let mut manifest = RunManifest::new("synth", args.seed);
    manifest
        .config("n", args.n)
        .config("rate", args.rate)
        .config("profiles", args.profiles)
        .config("coupling", args.coupling)
        .config(
            "positives",
            synth.ground_truth.iter().filter(|g| g.label).count(),
        )
        .output(args.out.display().to_string());

    let mut files = Vec::with_capacity(synth.corpus.files.len() + 3);
    for file in &synth.corpus.files {
        files.push((
            args.out.join(corpus_relative_path(file)),
            file.text.clone().into_bytes(),
        ));
    }
    files.push((
        args.out.join("manifest.csv"),
        manifest_csv_bytes(&synth.manifest),
    ));
    files.push((
        args.out.join("ground_truth.csv"),
        ground_truth_csv_bytes(&synth.ground_truth),
    ));
    files.push((args.out.join("run_manifest.json"), manifest.to_bytes()));
    write_all_atomic(&files)?;
    Ok(())
}

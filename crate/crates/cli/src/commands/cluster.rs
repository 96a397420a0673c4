//! `stylometry cluster`: feature CSV -> embedding, dendrogram, partition and
//! feature-importance reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use stylometry::cluster::{cluster_feature_importance, kmeans, suggest_k, tsne_embed, ward_hac};
use stylometry::features::{fmt_sig9, parse_features_csv, FEATURE_NAMES};
use stylometry::standardize::Standardizer;
use stylometry::Real;

use crate::manifest::RunManifest;
use crate::output::write_all_atomic;
use crate::{CommandError, CommandResult};

pub const KMEANS_MAX_ITER: usize = 300;
pub const SUGGEST_K_MIN: usize = 2;
pub const SUGGEST_K_MAX: usize = 10;

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Feature-matrix CSV produced by `extract`
    #[arg(long)]
    pub features: PathBuf,
    /// Cluster count; omitted means estimate from the dendrogram
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 30.0)]
    pub perplexity: f64,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
}

pub fn run(args: &ClusterArgs) -> CommandResult {
    if let Some(k) = args.k {
        if k < 2 {
            return Err(CommandError::Usage(
                "--k must be at least 2 for cluster characterization".to_string(),
            ));
        }
    }
    let text = std::fs::read_to_string(&args.features)?;
    let table = parse_features_csv::<Real>(&text)?;
    let n = table.matrix.rows();
    let (_, xs) = Standardizer::fit_transform(&table.matrix);

    let embedding = tsne_embed(&xs, args.seed, args.perplexity, args.iterations)?;
    if embedding.perplexity_clamped {
        eprintln!(
            "warning: perplexity clamped to {:.3} for {n} rows",
            embedding.perplexity
        );
    }
    let dendrogram = ward_hac(&xs)?;
    let (k, k_estimated, degenerate) = match args.k {
        Some(k) => (k, false, false),
        None => {
            let suggestion = suggest_k(&dendrogram, SUGGEST_K_MIN, SUGGEST_K_MAX);
            if suggestion.degenerate {
                eprintln!(
                    "warning: degenerate merge heights; falling back to k = {}",
                    suggestion.k
                );
            }
            (suggestion.k, true, suggestion.degenerate)
        }
    };
    let clusters = kmeans(&xs, k, args.seed, KMEANS_MAX_ITER)?;
    let names: Vec<&str> = FEATURE_NAMES.to_vec();
    let importance = cluster_feature_importance(&xs, &clusters.assignments, &names, args.seed)?;

    let mut embedding_csv = String::from("author_id,x,y,label,cluster\n");
    for (i, author) in table.author_ids.iter().enumerate() {
        writeln!(
            embedding_csv,
            "{},{},{},{},{}",
            author,
            fmt_sig9(embedding.coords[i][0]),
            fmt_sig9(embedding.coords[i][1]),
            u8::from(table.labels[i]),
            clusters.assignments[i]
        )
        .expect("in-memory write");
    }
    let mut clusters_csv = String::from("author_id,cluster\n");
    for (author, &c) in table.author_ids.iter().zip(&clusters.assignments) {
        writeln!(clusters_csv, "{author},{c}").expect("in-memory write");
    }
    let mut dendrogram_json = serde_json::to_vec_pretty(&dendrogram)?;
    dendrogram_json.push(b'\n');
    let mut importance_json = serde_json::to_vec_pretty(&importance)?;
    importance_json.push(b'\n');

    let mut manifest = RunManifest::new("cluster", args.seed);
    manifest
        .input("features", args.features.display().to_string())
        .config("rows", n)
        .config("k", k)
        .config("k_estimated", k_estimated)
        .config("perplexity", embedding.perplexity)
        .config("perplexity_requested", args.perplexity)
        .config("iterations", args.iterations)
        .config("kmeans_max_iter", KMEANS_MAX_ITER)
        .config("final_kl", embedding.final_kl)
        .config("kmeans_inertia", clusters.inertia);
    if degenerate {
        manifest.warn("degenerate dendrogram heights; k fell back to the minimum");
    }
    if embedding.perplexity_clamped {
        manifest.warn("perplexity clamped to (n - 1) / 3");
    }
    for name in [
        "embedding.csv",
        "dendrogram.json",
        "clusters.csv",
        "importance.json",
        "run_manifest.json",
    ] {
        manifest.output(args.out.join(name).display().to_string());
    }

    write_all_atomic(&[
        (args.out.join("embedding.csv"), embedding_csv.into_bytes()),
        (args.out.join("dendrogram.json"), dendrogram_json),
        (args.out.join("clusters.csv"), clusters_csv.into_bytes()),
        (args.out.join("importance.json"), importance_json),
        (args.out.join("run_manifest.json"), manifest.to_bytes()),
    ])?;
    Ok(())
}

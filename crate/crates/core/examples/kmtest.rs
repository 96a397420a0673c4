use stylometry::cluster::{adjusted_rand_index, cluster_feature_importance, kmeans, suggest_k, ward_hac};
use stylometry::corpus::synth::{gen_synthetic_corpus, SynthConfig};
use stylometry::features::{extract_from_text, FEATURE_NAMES};
use stylometry::matrix::Matrix;
use stylometry::standardize::Standardizer;

fn main() {
    for corpus_seed in [11u64, 42, 7, 3] {
        let cfg = SynthConfig { seed: corpus_seed, n_authors: 400, positive_rate: 0.15, style_profiles: 4, skill_style_coupling: 0.0 };
        let synth = gen_synthetic_corpus(&cfg).unwrap();
        let rows: Vec<Vec<f64>> = synth.corpus.files.iter()
            .map(|f| extract_from_text::<f64>(&f.text).unwrap().to_vec())
            .collect();
        let truth: Vec<usize> = synth.ground_truth.iter().map(|g| g.profile).collect();
        let x = Matrix::from_rows(&rows);
        let (_, xs) = Standardizer::fit_transform(&x);
        let dend = ward_hac(&xs).unwrap();
        let suggestion = suggest_k(&dend, 2, 10);
        let r = kmeans(&xs, 4, corpus_seed, 300).unwrap();
        let ari = adjusted_rand_index(&r.assignments, &truth);
        let names: Vec<&str> = FEATURE_NAMES.to_vec();
        let imp = cluster_feature_importance(&xs, &r.assignments, &names, corpus_seed).unwrap();
        let top: Vec<(String, f64)> = imp.entries.iter().take(4)
            .map(|e| (e.feature.clone(), (e.importance * 1000.0).round() / 1000.0)).collect();
        println!("seed {corpus_seed}: suggest_k {} ARI {ari:.3} top {:?}", suggestion.k, top);
    }
}

//! Scripted experiment recipes. Each emits plot-ready CSVs into the output
//! directory and prints the headline statistic; nothing is plotted here.

use crate::cli::{ExperimentArg, ReproduceArgs};
use crate::config::FileConfig;
use crate::output::CsvBuilder;
use eatsim::embedding::EmbedConfig;
use eatsim::generators::{geometric_multiplex, rewiring_ladder, GeometricParams};
use eatsim::reducibility::{greedy_reduce, Linkage, ReduceOptions, SimilarityMetric};
use eatsim::rng::{derive_u64, Stream};
use eatsim::robustness::{omega_score, AttackParams};
use eatsim::similarity::{embed_all_layers, score_embeddings, similarity_matrix};
use eatsim::stats::{pearson, spearman};
use eatsim::{MultiplexNetwork, Result};
use std::path::Path;

const LADDER_NODES: usize = 1000;
const LADDER_ATTACH: usize = 2;

fn ladder_probs() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

fn ladder(seed: u64) -> Result<MultiplexNetwork> {
    rewiring_ladder(LADDER_NODES, LADDER_ATTACH, &ladder_probs(), seed)
}

pub fn run(args: ReproduceArgs, file: &FileConfig, seed: u64) -> Result<()> {
    std::fs::create_dir_all(&args.output_dir)?;
    let embed = {
        let defaults = crate::cli::EmbedOpts {
            dim: None,
            walks_per_node: None,
            walk_length: None,
            window: None,
            return_bias: None,
            inout_bias: None,
            negative_samples: None,
            epochs: None,
            learning_rate: None,
        };
        super::resolve_embed(&defaults, file, seed)?
    };
    match args.experiment {
        ExperimentArg::Fig2a => fig2a(&args.output_dir, &embed, seed),
        ExperimentArg::Fig2b => fig2b(&args.output_dir, &embed, seed),
        ExperimentArg::Fig3 => fig3(&args.output_dir, &embed, seed),
        ExperimentArg::Fig5 => fig5(&args.output_dir, &embed, seed),
    }
}

/// Similarity of the original layer against each rewired replica; the score
/// should fall as the rewiring probability grows.
fn fig2a(dir: &Path, embed: &EmbedConfig, seed: u64) -> Result<()> {
    let net = ladder(seed)?;
    let embeddings = embed_all_layers(&net, embed)?;
    let probs = ladder_probs();
    let mut csv = CsvBuilder::new(&["p", "eatsim"])?;
    let mut scores = Vec::new();
    for (idx, &p) in probs.iter().enumerate() {
        let s = score_embeddings(&embeddings[0], &embeddings[idx + 1], 0.5)?;
        csv.row(&[p.to_string(), s.eatsim.to_string()])?;
        scores.push(s.eatsim);
    }
    csv.save(&dir.join("rewiring_similarity.csv"))?;
    let rho = spearman(&probs, &scores)?;
    println!(
        "fig2a: 19 rewiring points, spearman(p, eatsim) = {rho:.3} -> {}",
        dir.join("rewiring_similarity.csv").display()
    );
    Ok(())
}

/// Full similarity heatmap over the 20-layer rewiring ladder.
fn fig2b(dir: &Path, embed: &EmbedConfig, seed: u64) -> Result<()> {
    let net = ladder(seed)?;
    let matrix = similarity_matrix(&net, embed, 0.5)?;
    let names = net.layer_names();
    let l = names.len();

    let mut header = vec!["layer"];
    for name in names {
        header.push(name.as_str());
    }
    let mut grid = CsvBuilder::new(&header)?;
    for i in 0..l {
        let mut row = vec![names[i].clone()];
        for j in 0..l {
            row.push(matrix[i][j].eatsim.to_string());
        }
        grid.row(&row)?;
    }
    grid.save(&dir.join("heatmap.csv"))?;

    let mut pairs = CsvBuilder::new(&["layer_i", "layer_j", "ped", "aed", "d", "eatsim"])?;
    for i in 0..l {
        for j in (i + 1)..l {
            let s = &matrix[i][j];
            pairs.row(&[
                names[i].clone(),
                names[j].clone(),
                s.ped.to_string(),
                s.aed.to_string(),
                s.distance.to_string(),
                s.eatsim.to_string(),
            ])?;
        }
    }
    pairs.save(&dir.join("pairs.csv"))?;
    println!(
        "fig2b: {l}x{l} similarity heatmap -> {}",
        dir.join("heatmap.csv").display()
    );
    Ok(())
}

/// Similarity vs robustness across the angular-correlation sweep.
fn fig3(dir: &Path, embed: &EmbedConfig, seed: u64) -> Result<()> {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let seeds_per_point = 5;
    let mut csv = CsvBuilder::new(&["g", "seed", "eatsim", "omega"])?;
    let mut sims = Vec::new();
    let mut omegas = Vec::new();
    for (gi, &g) in grid.iter().enumerate() {
        for si in 0..seeds_per_point {
            let net_seed = derive_u64(seed, Stream::Experiment, &[3, gi as u64, si]);
            let params = GeometricParams::new(2000, 6.0, 2.5, 0.4, g, 1.0);
            let net = geometric_multiplex(&params, net_seed)?.network;
            let s = eatsim::similarity::eatsim(net.layer(0), net.layer(1), embed, 0.5)?;
            let attack = AttackParams {
                seed: derive_u64(seed, Stream::Experiment, &[3, gi as u64, si, 1]),
                ..Default::default()
            };
            let rob = omega_score(&net, &attack)?;
            csv.row(&[
                g.to_string(),
                si.to_string(),
                s.eatsim.to_string(),
                rob.omega.to_string(),
            ])?;
            sims.push(s.eatsim);
            omegas.push(rob.omega);
        }
    }
    csv.save(&dir.join("correlation.csv"))?;
    let r = pearson(&sims, &omegas)?;
    println!(
        "fig3: {} networks, pearson(eatsim, omega) = {r:.3} -> {}",
        sims.len(),
        dir.join("correlation.csv").display()
    );
    Ok(())
}

/// Greedy reduction of the rewiring ladder under both merge metrics.
fn fig5(dir: &Path, embed: &EmbedConfig, seed: u64) -> Result<()> {
    let net = ladder(seed)?;
    let mut first_five = Vec::new();
    for (metric, name) in [
        (SimilarityMetric::Eatsim, "eatsim"),
        (SimilarityMetric::Jsd, "jsd"),
    ] {
        let opts = ReduceOptions {
            metric,
            omega: 0.5,
            embed: embed.clone(),
            linkage: Linkage::Recompute,
        };
        let report = greedy_reduce(&net, &opts)?;
        super::trajectory_csv(&report, &dir.join(format!("trajectory_{name}.csv")))?;
        crate::output::write_atomic(
            &dir.join(format!("dendrogram_{name}.txt")),
            format!("{}\n", report.dendrogram).as_bytes(),
        )?;
        let drop5 = report.q_trajectory[0] - report.q_trajectory[5.min(report.q_trajectory.len() - 1)];
        first_five.push((name, report.optimal_m, drop5));
    }
    for (name, m, drop5) in &first_five {
        println!("fig5: {name} reduction optimal m={m}, q drop over first 5 merges = {drop5:.4}");
    }
    println!("fig5: trajectories and dendrograms -> {}", dir.display());
    Ok(())
}

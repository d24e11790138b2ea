//! Subcommand pipelines. Each one validates its inputs fully, computes, and
//! only then writes artifacts (atomically), so failed runs leave no files.

mod reproduce;

use crate::cli::{
    CandidatesArg, Cli, Command, EmbedArgs, EmbedOpts, GenerateArgs, GenerateModel, LinkageArg,
    MetricArg, ReduceArgs, RobustnessArgs, SimArgs,
};
use crate::config::{pick, FileConfig};
use crate::output::{write_atomic, CsvBuilder};
use eatsim::embedding::{embed_layer, write_embedding, EmbedConfig};
use eatsim::generators::{barabasi_albert, geometric_multiplex, rewiring_ladder, GeometricParams};
use eatsim::io::{load_multiplex, write_multiplex};
use eatsim::reducibility::{greedy_reduce, Linkage, ReduceOptions, ReductionReport, SimilarityMetric};
use eatsim::robustness::{delta_n, omega_score, AttackCandidates, AttackParams, AttackTrace};
use eatsim::similarity::similarity_matrix;
use eatsim::{Error, MultiplexNetwork, Result};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    init_threads(cli.threads, &file)?;
    let seed = pick(cli.seed, file.get("seed")?, 0);
    match cli.command {
        Command::Generate(args) => generate(args, seed),
        Command::Embed(args) => embed(args, &file, seed),
        Command::Sim(args) => sim(args, &file, seed),
        Command::Robustness(args) => robustness(args, &file, seed),
        Command::Reduce(args) => reduce(args, &file, seed),
        Command::Reproduce(args) => reproduce::run(args, &file, seed),
    }
}

fn init_threads(cli_threads: Option<usize>, file: &FileConfig) -> Result<()> {
    let env_threads = match std::env::var("EATSIM_THREADS") {
        Ok(raw) => Some(raw.parse::<usize>().map_err(|_| {
            Error::validation(format!("EATSIM_THREADS has unusable value {raw:?}"))
        })?),
        Err(_) => None,
    };
    if let Some(t) = cli_threads.or(file.get("threads")?).or(env_threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::validation(format!("thread pool setup failed: {e}")))?;
    }
    Ok(())
}

pub(crate) fn resolve_embed(
    opts: &EmbedOpts,
    file: &FileConfig,
    seed: u64,
) -> Result<EmbedConfig> {
    let defaults = EmbedConfig::default();
    let cfg = EmbedConfig {
        dim: pick(opts.dim, file.get("dim")?, defaults.dim),
        walks_per_node: pick(
            opts.walks_per_node,
            file.get("walks_per_node")?,
            defaults.walks_per_node,
        ),
        walk_length: pick(opts.walk_length, file.get("walk_length")?, defaults.walk_length),
        window: pick(opts.window, file.get("window")?, defaults.window),
        p: pick(opts.return_bias, file.get("return_bias")?, defaults.p),
        q: pick(opts.inout_bias, file.get("inout_bias")?, defaults.q),
        negative_samples: pick(
            opts.negative_samples,
            file.get("negative_samples")?,
            defaults.negative_samples,
        ),
        epochs: pick(opts.epochs, file.get("epochs")?, defaults.epochs),
        initial_lr: pick(opts.learning_rate, file.get("learning_rate")?, defaults.initial_lr),
        seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_omega(cli: Option<f64>, file: &FileConfig) -> Result<f64> {
    let omega = pick(cli, file.get("omega")?, 0.5);
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::validation(format!(
            "loss weight omega must lie in [0, 1], got {omega}"
        )));
    }
    Ok(omega)
}

fn save_network(net: &MultiplexNetwork, path: &Path) -> Result<()> {
    let mut bytes = Vec::new();
    write_multiplex(net, &mut bytes)?;
    write_atomic(path, &bytes)
}

fn meta_path(output: &Path) -> PathBuf {
    let mut os = output.as_os_str().to_os_string();
    os.push(".meta");
    PathBuf::from(os)
}

fn generate(args: GenerateArgs, seed: u64) -> Result<()> {
    let (net, mut meta, output) = match args.model {
        GenerateModel::Ba {
            nodes,
            edges_per_node,
            output,
        } => {
            let layer = barabasi_albert(nodes, edges_per_node, seed)?;
            let net = MultiplexNetwork::new(vec![layer])?;
            let meta = format!(
                "model=ba\nnodes={nodes}\nedges_per_node={edges_per_node}\nseed={seed}\n"
            );
            (net, meta, output)
        }
        GenerateModel::Gmm {
            nodes,
            mean_degree,
            gamma,
            temperature,
            angular,
            radial,
            layers,
            output,
        } => {
            let mut params =
                GeometricParams::new(nodes, mean_degree, gamma, temperature, angular, radial);
            params.layers = layers;
            let net = geometric_multiplex(&params, seed)?.network;
            let meta = format!(
                "model=gmm\nnodes={nodes}\nmean_degree={mean_degree}\ngamma={gamma}\n\
                 temperature={temperature}\nangular_correlation={angular}\n\
                 radial_correlation={radial}\nseed={seed}\n"
            );
            (net, meta, output)
        }
        GenerateModel::Ladder {
            nodes,
            edges_per_node,
            probs,
            output,
        } => {
            let probs = parse_probs(probs.as_deref())?;
            let net = rewiring_ladder(nodes, edges_per_node, &probs, seed)?;
            let listed: Vec<String> = probs.iter().map(|p| format!("{p}")).collect();
            let meta = format!(
                "model=ladder\nnodes={nodes}\nedges_per_node={edges_per_node}\n\
                 probs={}\nseed={seed}\n",
                listed.join(",")
            );
            (net, meta, output)
        }
    };
    writeln!(meta, "layers={}", net.layer_count()).unwrap();
    for (i, layer) in net.layers().iter().enumerate() {
        writeln!(meta, "edges_{i}={}", layer.edge_count()).unwrap();
    }
    save_network(&net, &output)?;
    let meta_file = meta_path(&output);
    write_atomic(&meta_file, meta.as_bytes())?;
    println!(
        "generate: wrote {} ({} layers, {} nodes) and {}",
        output.display(),
        net.layer_count(),
        net.node_count(),
        meta_file.display()
    );
    Ok(())
}

fn parse_probs(raw: Option<&str>) -> Result<Vec<f64>> {
    match raw {
        None => Ok((1..=19).map(|i| i as f64 * 0.05).collect()),
        Some(raw) => raw
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::validation(format!("unusable probability {tok:?}")))
            })
            .collect(),
    }
}

fn embed(args: EmbedArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let net = load_multiplex(&args.input)?;
    let cfg = resolve_embed(&args.embed, file, seed)?;
    let embeddings: Result<Vec<_>> = net
        .layers()
        .par_iter()
        .map(|layer| embed_layer(layer, &cfg))
        .collect();
    let embeddings = embeddings?;
    std::fs::create_dir_all(&args.output_dir)?;
    for (i, matrix) in embeddings.iter().enumerate() {
        let mut bytes = Vec::new();
        write_embedding(matrix, &mut bytes)?;
        let path = args.output_dir.join(format!("layer_{i}.emb"));
        write_atomic(&path, &bytes)?;
        println!(
            "embed: layer {i} ({:?}) -> {}",
            net.layer_names()[i],
            path.display()
        );
    }
    println!(
        "embed: {} layers embedded at dim {} -> {}",
        embeddings.len(),
        cfg.dim,
        args.output_dir.display()
    );
    Ok(())
}

fn sim(args: SimArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let net = load_multiplex(&args.input)?;
    let cfg = resolve_embed(&args.embed, file, seed)?;
    let omega = resolve_omega(args.omega, file)?;
    let matrix = similarity_matrix(&net, &cfg, omega)?;
    let names = net.layer_names();
    let l = names.len();

    let mut csv = CsvBuilder::new(&["layer_i", "layer_j", "ped", "aed", "d", "eatsim"])?;
    let mut pairs = 0;
    for i in 0..l {
        for j in (i + 1)..l {
            let s = &matrix[i][j];
            csv.row(&[
                names[i].clone(),
                names[j].clone(),
                s.ped.to_string(),
                s.aed.to_string(),
                s.distance.to_string(),
                s.eatsim.to_string(),
            ])?;
            pairs += 1;
        }
    }
    csv.save(&args.output)?;

    if let Some(grid_path) = &args.grid {
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
        grid.save(grid_path)?;
        println!("sim: similarity grid -> {}", grid_path.display());
    }
    println!(
        "sim: {pairs} layer pairs scored (omega={omega}) -> {}",
        args.output.display()
    );
    Ok(())
}

fn robustness(args: RobustnessArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let net = load_multiplex(&args.input)?;
    let candidates = match args.candidates {
        Some(CandidatesArg::AllSurviving) => AttackCandidates::AllSurviving,
        Some(CandidatesArg::Gmcc) => AttackCandidates::GmccMembers,
        None => match file.get_str("candidates") {
            Some("all-surviving") | None => AttackCandidates::AllSurviving,
            Some("gmcc") => AttackCandidates::GmccMembers,
            Some(other) => {
                return Err(Error::validation(format!(
                    "config key candidates must be all-surviving or gmcc, got {other:?}"
                )))
            }
        },
    };
    let params = AttackParams {
        alpha: pick(args.alpha, file.get("alpha")?, 0.4),
        beta: pick(args.beta, file.get("beta")?, 0.5),
        reshuffle_count: pick(args.reshuffles, file.get("reshuffles")?, 10),
        seed,
        candidates,
    };
    let result = omega_score(&net, &params)?;

    let mut report = String::new();
    writeln!(report, "input={}", args.input.display()).unwrap();
    writeln!(report, "nodes={}", net.node_count()).unwrap();
    writeln!(report, "alpha={}", params.alpha).unwrap();
    writeln!(report, "beta={}", params.beta).unwrap();
    writeln!(report, "reshuffles={}", params.reshuffle_count).unwrap();
    let candidates_name = match params.candidates {
        AttackCandidates::AllSurviving => "all-surviving",
        AttackCandidates::GmccMembers => "gmcc",
    };
    writeln!(report, "candidates={candidates_name}").unwrap();
    writeln!(report, "seed={seed}").unwrap();
    writeln!(report, "initial_gmcc={}", result.trace.initial_gmcc).unwrap();
    writeln!(report, "removals={}", result.trace.removals.len()).unwrap();
    writeln!(report, "delta_n={}", result.delta_n).unwrap();
    writeln!(report, "delta_n_rs={}", result.delta_n_rs).unwrap();
    writeln!(report, "omega={}", result.omega).unwrap();
    for (r, trace) in result.reshuffled_traces.iter().enumerate() {
        let d = delta_n(trace, params.alpha, params.beta)?;
        writeln!(report, "replica_{r}_delta_n={d}").unwrap();
    }
    write_atomic(&args.output, report.as_bytes())?;

    if let Some(dir) = &args.traces_dir {
        save_trace(&result.trace, &dir.join("trace_original.csv"))?;
        for (r, trace) in result.reshuffled_traces.iter().enumerate() {
            save_trace(trace, &dir.join(format!("trace_reshuffle_{r}.csv")))?;
        }
        println!(
            "robustness: {} decay traces -> {}",
            1 + result.reshuffled_traces.len(),
            dir.display()
        );
    }
    println!(
        "robustness: delta_n={} delta_n_rs={:.2} omega={:.4} -> {}",
        result.delta_n,
        result.delta_n_rs,
        result.omega,
        args.output.display()
    );
    Ok(())
}

fn save_trace(trace: &AttackTrace, path: &Path) -> Result<()> {
    let mut csv = CsvBuilder::new(&["step", "removed_node", "gmcc_size"])?;
    for (i, (&node, &size)) in trace
        .removals
        .iter()
        .zip(trace.gmcc_sizes.iter())
        .enumerate()
    {
        csv.row(&[(i + 1).to_string(), node.to_string(), size.to_string()])?;
    }
    csv.save(path)
}

/// Trajectory rows shared by `reduce` and the reduction recipes: one row per
/// group count, with the merge that produced it.
pub(crate) fn trajectory_csv(report: &ReductionReport, path: &Path) -> Result<()> {
    let l = report.layer_names.len();
    let group_label = |members: &[usize]| {
        members
            .iter()
            .map(|&i| report.layer_names[i].as_str())
            .collect::<Vec<_>>()
            .join("+")
    };
    let mut csv = CsvBuilder::new(&["m", "q", "merged_pair", "similarity"])?;
    csv.row(&[
        l.to_string(),
        report.q_trajectory[0].to_string(),
        String::new(),
        String::new(),
    ])?;
    for (k, merge) in report.merges.iter().enumerate() {
        csv.row(&[
            (l - k - 1).to_string(),
            report.q_trajectory[k + 1].to_string(),
            format!("{}|{}", group_label(&merge.left), group_label(&merge.right)),
            merge.score.to_string(),
        ])?;
    }
    csv.save(path)
}

fn reduce(args: ReduceArgs, file: &FileConfig, seed: u64) -> Result<()> {
    let net = load_multiplex(&args.input)?;
    let metric = match args.metric {
        Some(MetricArg::Eatsim) => SimilarityMetric::Eatsim,
        Some(MetricArg::Jsd) => SimilarityMetric::Jsd,
        None => match file.get_str("metric") {
            Some("eatsim") | None => SimilarityMetric::Eatsim,
            Some("jsd") => SimilarityMetric::Jsd,
            Some(other) => {
                return Err(Error::validation(format!(
                    "config key metric must be eatsim or jsd, got {other:?}"
                )))
            }
        },
    };
    let linkage = match args.linkage {
        Some(LinkageArg::Recompute) => Linkage::Recompute,
        Some(LinkageArg::Average) => Linkage::Average,
        None => match file.get_str("linkage") {
            Some("recompute") | None => Linkage::Recompute,
            Some("average") => Linkage::Average,
            Some(other) => {
                return Err(Error::validation(format!(
                    "config key linkage must be recompute or average, got {other:?}"
                )))
            }
        },
    };
    let opts = ReduceOptions {
        metric,
        omega: resolve_omega(args.omega, file)?,
        embed: resolve_embed(&args.embed, file, seed)?,
        linkage,
    };
    let report = greedy_reduce(&net, &opts)?;

    std::fs::create_dir_all(&args.output_dir)?;
    trajectory_csv(&report, &args.output_dir.join("trajectory.csv"))?;
    write_atomic(
        &args.output_dir.join("dendrogram.txt"),
        format!("{}\n", report.dendrogram).as_bytes(),
    )?;

    let mut grouping = String::new();
    writeln!(grouping, "optimal_m={}", report.optimal_m).unwrap();
    writeln!(grouping, "optimal_q={}", report.optimal_q).unwrap();
    writeln!(grouping).unwrap();
    for (gi, members) in report.optimal_grouping().iter().enumerate() {
        let names: Vec<&str> = members
            .iter()
            .map(|&i| report.layer_names[i].as_str())
            .collect();
        writeln!(grouping, "group_{gi}: {}", names.join(", ")).unwrap();
    }
    write_atomic(&args.output_dir.join("grouping.txt"), grouping.as_bytes())?;

    println!(
        "reduce: optimal m={} q={:.4} ({} merges) -> {}",
        report.optimal_m,
        report.optimal_q,
        report.merges.len(),
        args.output_dir.display()
    );
    Ok(())
}

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use hsrl::eval::{
    compression_report, render_table, run_link_prediction, sweep as run_sweep, write_auc_tsv,
    write_compression_tsv, write_significance_tsv, write_sweep_tsv, write_timings_tsv, EvalReport,
    ExperimentConfig, Method, SweepParam,
};
use hsrl::graph::write_dot;
use hsrl::{
    hierarchical_sampling, run_hsrl, EmbeddingMatrix, Graph, Hierarchy, Learner, LearnerConfig,
};
use serde::Serialize;

use crate::{check_paths, Command, CompressArgs, EmbedArgs, EvaluateArgs, LearnerArgs, SweepArgs};

impl LearnerArgs {
    fn resolve(&self, seed: u64) -> Result<(Learner, LearnerConfig)> {
        let learner: Learner = self.learner.parse()?;
        let cfg = LearnerConfig {
            dim: self.dim,
            walks_per_node: self.walks,
            walk_length: self.walk_length,
            window: self.window,
            learning_rate: self.lr,
            negatives: self.negatives,
            p: self.p,
            q: self.q,
            line_order: self.line_order.parse()?,
            line_samples: self.line_samples,
            epochs: self.epochs,
            seed,
        };
        cfg.validate()?;
        Ok((learner, cfg))
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a Command,
    /// Seeds actually used, in run order.
    seeds: Vec<u64>,
}

fn write_manifest(dir: &Path, command: &Command, seeds: Vec<u64>) -> Result<()> {
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        seeds,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(dir.join("manifest.json"), text).context("writing manifest.json")
}

fn load_graph(path: &Path, default_weight: f64) -> Result<Graph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    hsrl::load_edge_list(&text, default_weight).with_context(|| format!("{}", path.display()))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    Ok(BufWriter::new(File::create(&path).with_context(|| {
        format!("cannot create {}", path.display())
    })?))
}

fn write_levels(dir: &Path, h: &Hierarchy, dot: bool) -> Result<()> {
    h.write_to_dir(dir)?;
    let mut out = create(dir, "compression.tsv")?;
    write_compression_tsv(&compression_report(h), &mut out)?;
    out.flush()?;
    if dot {
        for (k, g) in h.graphs().iter().enumerate() {
            let mut out = create(dir, &format!("level{k}.dot"))?;
            write_dot(g, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn write_embedding(
    dir: &Path,
    name: &str,
    z: &EmbeddingMatrix,
    labels: Option<&[String]>,
) -> Result<()> {
    let mut out = create(dir, name)?;
    z.write_text(&mut out, labels)?;
    out.flush()?;
    Ok(())
}

fn check_ratio(ratio: f64) -> Result<()> {
    if !(ratio > 0.0 && ratio < 1.0) {
        bail!("--ratio must lie strictly between 0 and 1, got {ratio}");
    }
    Ok(())
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn compress(a: &CompressArgs, command: &Command) -> Result<()> {
    check_paths(&[&a.graph.input], &a.out.output)?;
    let g = load_graph(&a.graph.input, a.graph.default_weight)?;
    let h = hierarchical_sampling(&g, a.levels, a.out.seed)?;
    write_levels(&a.out.output, &h, a.dot)?;
    write_manifest(&a.out.output, command, vec![a.out.seed])?;
    for level in compression_report(&h) {
        println!(
            "level {}: {} nodes, {} edges",
            level.level, level.nodes, level.edges
        );
    }
    Ok(())
}

pub fn embed(a: &EmbedArgs, command: &Command) -> Result<()> {
    let (learner, cfg) = a.learner.resolve(a.out.seed)?;
    check_paths(&[&a.graph.input], &a.out.output)?;
    let g = load_graph(&a.graph.input, a.graph.default_weight)?;
    let result = run_hsrl(&g, a.levels, &cfg, learner)?;
    let dir = &a.out.output;
    write_levels(dir, &result.hierarchy, a.dot)?;
    for (k, z) in result.per_level.iter().enumerate() {
        let labels = if k == 0 { g.labels() } else { None };
        write_embedding(dir, &format!("level{k}.emb"), z, labels)?;
    }
    write_embedding(dir, "embeddings.emb", &result.embeddings, g.labels())?;
    let levels = result.per_level.len();
    write_manifest(
        dir,
        command,
        (0..levels as u64).map(|k| a.out.seed + k).collect(),
    )?;
    println!(
        "{} nodes, {} levels, dimension {}",
        result.embeddings.rows(),
        result.hierarchy.achieved_levels(),
        result.embeddings.dim()
    );
    Ok(())
}

pub fn evaluate(a: &EvaluateArgs, command: &Command) -> Result<()> {
    let inputs: Vec<&Path> = a.input.iter().map(|p| p.as_path()).collect();
    let (learner, cfg) = a.learner.resolve(a.out.seed)?;
    check_ratio(a.ratio)?;
    check_paths(&inputs, &a.out.output)?;
    let seeds: Vec<u64> = (0..a.reps as u64).map(|r| a.out.seed + r).collect();
    let mut reports: Vec<EvalReport> = Vec::new();
    for path in &inputs {
        let g = load_graph(path, a.default_weight)?;
        let mut exp = ExperimentConfig::paired(dataset_name(path), learner, cfg.clone());
        exp.methods = vec![
            Method::Plain(learner),
            Method::Hierarchical {
                learner,
                levels: a.levels,
            },
        ];
        exp.ratio = a.ratio;
        exp.seeds = seeds.clone();
        exp.report_levels = a.levels;
        let report = run_link_prediction(&g, &exp).with_context(|| path.display().to_string())?;
        reports.push(report);
    }

    let dir = &a.out.output;
    let mut text = render_table(&reports);
    text.push('\n');
    for r in &reports {
        for m in &r.methods {
            let aucs: Vec<String> = m.aucs.iter().map(|x| format!("{x:.4}")).collect();
            text.push_str(&format!(
                "{} {}: {} runs, mean {:.4}: {}\n",
                r.dataset,
                m.name,
                m.aucs.len(),
                m.mean_auc(),
                aucs.join(" ")
            ));
        }
    }
    fs::write(dir.join("report.txt"), &text).context("writing report.txt")?;
    let mut out = create(dir, "aucs.tsv")?;
    write_auc_tsv(&reports, &mut out)?;
    out.flush()?;
    let mut out = create(dir, "significance.tsv")?;
    write_significance_tsv(&reports, &mut out)?;
    out.flush()?;
    let mut out = create(dir, "timings.tsv")?;
    write_timings_tsv(&reports, &mut out)?;
    out.flush()?;
    for r in &reports {
        let name = if reports.len() == 1 {
            "compression.tsv".to_owned()
        } else {
            format!("compression_{}.tsv", r.dataset)
        };
        let mut out = create(dir, &name)?;
        write_compression_tsv(&r.compression, &mut out)?;
        out.flush()?;
    }
    write_manifest(dir, command, seeds)?;
    print!("{text}");
    Ok(())
}

pub fn sweep(a: &SweepArgs, command: &Command) -> Result<()> {
    let param: SweepParam = a.param.parse()?;
    let (learner, cfg) = a.learner.resolve(a.out.seed)?;
    check_ratio(a.ratio)?;
    check_paths(&[&a.graph.input], &a.out.output)?;
    let g = load_graph(&a.graph.input, a.graph.default_weight)?;
    let seeds: Vec<u64> = (0..a.reps as u64).map(|r| a.out.seed + r).collect();
    let mut base = ExperimentConfig::paired(dataset_name(&a.graph.input), learner, cfg);
    base.ratio = a.ratio;
    base.seeds = seeds.clone();
    let points = run_sweep(&g, &base, learner, a.levels, param, &a.values)?;
    let mut out = create(&a.out.output, "sweep.tsv")?;
    write_sweep_tsv(&param.to_string(), &points, &mut out)?;
    out.flush()?;
    write_manifest(&a.out.output, command, seeds)?;
    for p in &points {
        println!(
            "{param}={}: mean AUC {:.4} (sd {:.4})",
            p.value, p.mean_auc, p.std_auc
        );
    }
    Ok(())
}

use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::Duration;

use super::experiment::{mean_std, SweepPoint};
use crate::hierarchy::Hierarchy;

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionLevel {
    pub level: usize,
    pub nodes: usize,
    /// Self-loops count as edges.
    pub edges: usize,
    pub node_ratio: f64,
    pub edge_ratio: f64,
}

/// Node and edge counts of every level relative to level 0.
pub fn compression_report(h: &Hierarchy) -> Vec<CompressionLevel> {
    let base = h.base();
    let (n0, e0) = (base.node_count() as f64, base.edge_count() as f64);
    let ratio = |x: usize, total: f64| if total > 0.0 { x as f64 / total } else { 1.0 };
    h.graphs()
        .iter()
        .enumerate()
        .map(|(level, g)| CompressionLevel {
            level,
            nodes: g.node_count(),
            edges: g.edge_count(),
            node_ratio: ratio(g.node_count(), n0),
            edge_ratio: ratio(g.edge_count(), e0),
        })
        .collect()
}

pub fn write_compression_tsv<W: Write>(levels: &[CompressionLevel], mut out: W) -> io::Result<()> {
    writeln!(out, "level\tnodes\tedges\tnode_ratio\tedge_ratio")?;
    for l in levels {
        writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{:.6}",
            l.level, l.nodes, l.edges, l.node_ratio, l.edge_ratio
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub name: String,
    pub hierarchical: bool,
    pub seeds: Vec<u64>,
    pub aucs: Vec<f64>,
}

impl MethodResult {
    pub fn mean_auc(&self) -> f64 {
        mean_std(&self.aucs).0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Significance {
    pub method: String,
    pub baseline: String,
    pub statistic: f64,
    pub p_value: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub dataset: String,
    pub ratio: f64,
    pub significance_level: f64,
    pub methods: Vec<MethodResult>,
    pub significance: Vec<Significance>,
    pub compression: Vec<CompressionLevel>,
    pub timings: Vec<(String, Duration)>,
}

impl EvalReport {
    fn method(&self, name: &str) -> Option<&MethodResult> {
        self.methods.iter().find(|m| m.name == name)
    }

    fn p_value(&self, a: &str, b: &str) -> Option<f64> {
        self.significance
            .iter()
            .find(|s| (s.method == a && s.baseline == b) || (s.method == b && s.baseline == a))
            .map(|s| s.p_value)
    }

    /// True when `name` has a higher mean AUC than every other method and
    /// each difference is significant.
    pub fn significantly_best(&self, name: &str) -> bool {
        let Some(me) = self.method(name) else {
            return false;
        };
        let others: Vec<&MethodResult> = self.methods.iter().filter(|m| m.name != name).collect();
        !others.is_empty()
            && others.iter().all(|other| {
                me.mean_auc() > other.mean_auc()
                    && self
                        .p_value(name, &other.name)
                        .is_some_and(|p| p < self.significance_level)
            })
    }
}

/// Plain-text table: one row per method, one column per dataset, mean AUC
/// with `†` when the method is significantly better than all its peers.
/// Each hierarchical row is followed by its percentage gain over the plain
/// learner of the same family.
pub fn render_table(reports: &[EvalReport]) -> String {
    let mut out = String::new();
    out.push_str("# AUC of link prediction (mean over repetitions)\n");
    out.push_str("# negatives: uniform non-edges of the full graph, one per held-out edge\n");
    out.push_str("# nodes isolated by the split are scored with their learned vectors\n");
    if let Some(r) = reports.first() {
        let _ = writeln!(
            out,
            "# † = significantly better than every other method (rank-sum test, p < {})",
            r.significance_level
        );
    }

    let mut names: Vec<(String, bool)> = Vec::new();
    for r in reports {
        for m in &r.methods {
            if !names.iter().any(|(n, _)| n == &m.name) {
                names.push((m.name.clone(), m.hierarchical));
            }
        }
    }

    let mut rows: Vec<Vec<String>> = vec![std::iter::once("Algorithm".to_owned())
        .chain(reports.iter().map(|r| r.dataset.clone()))
        .collect()];
    for (name, hierarchical) in &names {
        let mut row = vec![name.clone()];
        for r in reports {
            row.push(match r.method(name) {
                Some(m) => {
                    let dagger = if r.significantly_best(name) {
                        "†"
                    } else {
                        ""
                    };
                    format!("{:.3}{dagger}", m.mean_auc())
                }
                None => "-".to_owned(),
            });
        }
        rows.push(row);

        if *hierarchical {
            if let Some(base) = plain_counterpart(name) {
                let mut gain = vec![format!("Gain of {name} (%)")];
                for r in reports {
                    gain.push(match (r.method(name), r.method(&base)) {
                        (Some(h), Some(b)) if b.mean_auc() > 0.0 => {
                            format!(
                                "{:.1}",
                                100.0 * (h.mean_auc() - b.mean_auc()) / b.mean_auc()
                            )
                        }
                        _ => "-".to_owned(),
                    });
                }
                rows.push(gain);
            }
        }
    }

    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

fn plain_counterpart(hierarchical: &str) -> Option<String> {
    let inner = hierarchical.strip_prefix("HSRL(")?.strip_suffix(')')?;
    Some(
        match inner {
            "DW" => "DeepWalk",
            "N2V" => "node2vec",
            "LINE" => "LINE",
            _ => return None,
        }
        .to_owned(),
    )
}

/// `dataset method rep seed auc`, tab-separated.
pub fn write_auc_tsv<W: Write>(reports: &[EvalReport], mut out: W) -> io::Result<()> {
    writeln!(out, "dataset\tmethod\trep\tseed\tauc")?;
    for r in reports {
        for m in &r.methods {
            for (rep, (seed, auc)) in m.seeds.iter().zip(&m.aucs).enumerate() {
                writeln!(out, "{}\t{}\t{rep}\t{seed}\t{auc:.6}", r.dataset, m.name)?;
            }
        }
    }
    Ok(())
}

pub fn write_significance_tsv<W: Write>(reports: &[EvalReport], mut out: W) -> io::Result<()> {
    writeln!(out, "dataset\tmethod\tbaseline\tU\tp_value\tdegenerate")?;
    for r in reports {
        for s in &r.significance {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.6e}\t{}",
                r.dataset, s.method, s.baseline, s.statistic, s.p_value, s.degenerate
            )?;
        }
    }
    Ok(())
}

pub fn write_timings_tsv<W: Write>(reports: &[EvalReport], mut out: W) -> io::Result<()> {
    writeln!(out, "dataset\tstage\tseconds")?;
    for r in reports {
        for (stage, d) in &r.timings {
            writeln!(out, "{}\t{stage}\t{:.3}", r.dataset, d.as_secs_f64())?;
        }
    }
    Ok(())
}

pub fn write_sweep_tsv<W: Write>(param: &str, points: &[SweepPoint], mut out: W) -> io::Result<()> {
    writeln!(out, "{param}\tmean_auc\tstd_auc\treps")?;
    for p in points {
        writeln!(
            out,
            "{}\t{:.6}\t{:.6}\t{}",
            p.value,
            p.mean_auc,
            p.std_auc,
            p.aucs.len()
        )?;
    }
    Ok(())
}

use std::path::Path;

use anyhow::{anyhow, bail};
use arbor::bratteli::{ergodic_average_point, kset_decay_bound, product_ratio_bound, BratteliDiagram, ClopenSet, FinitePath, LevelPaths};
use clap::{Args, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::report::{write_csv, write_json, Meta, Table};
use crate::subject::{json_arg, load_diagram};

#[derive(Args, Debug)]
pub struct DiagramArgs {
    /// Builtin diagram (odometerD, chain, two_chains) or a diagram JSON file
    #[arg(long, default_value = "odometer2")]
    diagram: String,
    /// Truncation level for builtin diagrams
    #[arg(long, default_value_t = 8)]
    horizon: usize,
    /// Clopen set U: "full", "empty", or JSON edge-index cylinders like [[0],[1,0]] (or @file)
    #[arg(long, default_value = "full")]
    clopen: String,
    /// Level n; defaults to the least level ≥ n_0(U) with every d(v_0,v) ≥ 3 and enough paths
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum BratteliCmd {
    /// Path counts d(v_0,v) and |E(v_0,v:U)| per level and vertex
    Count(DiagramArgs),
    /// Joint inclusion probability of K against the product of single-point probabilities
    Ratio {
        #[command(flatten)]
        d: DiagramArgs,
        /// Number k of evenly spaced level-n paths, or JSON edge-index paths
        #[arg(long, default_value = "1")]
        paths: String,
    },
    /// Proportion of Γ_n moving a point into U
    Ergodic {
        #[command(flatten)]
        d: DiagramArgs,
        /// The point as JSON edge indices; defaults to the first level-n path
        #[arg(long)]
        point: Option<String>,
    },
    /// Exponential decay bound for P(C·g ⊆ U)
    Bound {
        #[command(flatten)]
        d: DiagramArgs,
        #[arg(long, default_value = "1")]
        paths: String,
        /// Level m fully connected to the chosen cylinder level; automatic when absent
        #[arg(long)]
        connect: Option<usize>,
    },
}

fn clopen(b: &BratteliDiagram, raw: &str) -> anyhow::Result<ClopenSet> {
    match raw.trim() {
        "full" => Ok(ClopenSet::full()),
        "empty" => Ok(ClopenSet::empty()),
        s => {
            let cyl: Vec<Vec<usize>> = json_arg(s)?;
            Ok(ClopenSet::new(b, &cyl)?)
        }
    }
}

enum PathsArg {
    Count(usize),
    Explicit(Vec<Vec<usize>>),
}

fn paths_arg(raw: &str) -> anyhow::Result<PathsArg> {
    match raw.trim().parse::<usize>() {
        Ok(k) => Ok(PathsArg::Count(k)),
        Err(_) => Ok(PathsArg::Explicit(json_arg(raw)?)),
    }
}

fn default_level(b: &BratteliDiagram, u: &ClopenSet, min_paths: usize, min_len: usize) -> anyhow::Result<usize> {
    let three = BigUint::from(3u32);
    let start = u.depth().max(min_len).max(1);
    for n in start..=b.horizon() {
        let counts = b.path_count(n)?;
        let total: BigUint = counts.iter().sum();
        if counts.iter().all(|c| *c >= three) && total >= BigUint::from(min_paths) {
            return Ok(n);
        }
    }
    Err(anyhow!("no level up to the horizon {} has every vertex with three paths; pass --level", b.horizon()))
}

fn resolve_paths(b: &BratteliDiagram, n: usize, arg: &PathsArg) -> anyhow::Result<Vec<FinitePath>> {
    match arg {
        PathsArg::Count(k) => {
            let lp = LevelPaths::new(b, n)?;
            if *k > lp.len() {
                bail!("level {n} has only {} paths, {k} requested", lp.len());
            }
            Ok((0..*k).map(|j| lp.path(j * lp.len() / k).clone()).collect())
        }
        PathsArg::Explicit(list) => Ok(list.iter().map(|p| FinitePath::new(b, p.clone())).collect::<Result<_, _>>()?),
    }
}

fn min_len(arg: &PathsArg) -> usize {
    match arg {
        PathsArg::Count(_) => 0,
        PathsArg::Explicit(list) => list.iter().map(Vec::len).min().unwrap_or(0),
    }
}

fn ratio_json(r: &Option<num_rational::BigRational>) -> Value {
    r.as_ref().map_or(Value::Null, |x| Value::String(x.to_string()))
}

fn base_config(d: &DiagramArgs, n: usize, u: &ClopenSet) -> Value {
    json!({ "diagram": d.diagram, "horizon": d.horizon, "clopen": u.to_spec(), "level": n })
}

pub fn run(cmd: BratteliCmd, out: Option<&Path>) -> anyhow::Result<()> {
    match cmd {
        BratteliCmd::Count(d) => {
            let b = load_diagram(&d.diagram, d.horizon)?;
            let u = clopen(&b, &d.clopen)?;
            let top = d.level.unwrap_or(b.horizon());
            b.path_count(top)?;
            let meta = Meta::new("bratteli count", base_config(&d, top, &u), None);
            let mut rows = Vec::new();
            for n in u.depth()..=top {
                let counts = b.path_count(n)?;
                let inside = arbor::bratteli::meeting_counts(&b, n, &u)?;
                for (v, (c, m)) in counts.iter().zip(&inside).enumerate() {
                    rows.push(vec![n.to_string(), v.to_string(), c.to_string(), m.to_string()]);
                }
            }
            write_csv(out, &meta, &Table { columns: vec!["level", "vertex", "paths", "paths_in_u"], rows })
        }
        BratteliCmd::Ratio { d, paths } => {
            let b = load_diagram(&d.diagram, d.horizon)?;
            let u = clopen(&b, &d.clopen)?;
            let arg = paths_arg(&paths)?;
            let k = match &arg {
                PathsArg::Count(k) => *k,
                PathsArg::Explicit(l) => l.len(),
            };
            let n = match d.level {
                Some(n) => n,
                None => default_level(&b, &u, k, min_len(&arg))?,
            };
            let z = resolve_paths(&b, n, &arg)?;
            let r = product_ratio_bound(&b, &z, &u, n)?;
            let mut config = base_config(&d, n, &u);
            config["paths"] = json!(z.iter().map(|p| p.edges().to_vec()).collect::<Vec<_>>());
            let meta = Meta::new("bratteli ratio", config, None);
            let result = json!({
                "k": r.k,
                "joint": r.joint.to_string(),
                "product": r.product.to_string(),
                "ratio": ratio_json(&r.ratio),
                "lower": ratio_json(&r.lower),
                "holds": r.holds,
            });
            write_json(out, &meta, result)
        }
        BratteliCmd::Ergodic { d, point } => {
            let b = load_diagram(&d.diagram, d.horizon)?;
            let u = clopen(&b, &d.clopen)?;
            let explicit: Option<Vec<usize>> = point.as_deref().map(json_arg).transpose()?;
            let n = match d.level {
                Some(n) => n,
                None => default_level(&b, &u, 1, explicit.as_ref().map_or(0, Vec::len))?,
            };
            let x = match explicit {
                Some(e) => FinitePath::new(&b, e)?,
                None => LevelPaths::new(&b, n)?.path(0).clone(),
            };
            let value = ergodic_average_point(&b, &x, &u, n)?;
            let mut config = base_config(&d, n, &u);
            config["point"] = json!(x.edges());
            let meta = Meta::new("bratteli ergodic", config, None);
            let vertex = x.prefix(&b, n)?.end();
            write_json(out, &meta, json!({ "vertex": vertex, "average": value.to_string() }))
        }
        BratteliCmd::Bound { d, paths, connect } => {
            let b = load_diagram(&d.diagram, d.horizon)?;
            let u = clopen(&b, &d.clopen)?;
            let arg = paths_arg(&paths)?;
            let n = d.level.unwrap_or(b.horizon());
            let c = resolve_paths(&b, n, &arg)?;
            let r = kset_decay_bound(&b, &c, &u, n, connect)?;
            let mut config = base_config(&d, n, &u);
            config["paths"] = json!(c.iter().map(|p| p.edges().to_vec()).collect::<Vec<_>>());
            config["connect"] = json!(connect);
            let meta = Meta::new("bratteli bound", config, None);
            let result = json!({
                "cylinder_level": r.ell,
                "connect_level": r.m_connect,
                "max_degree_m": r.max_degree_m.to_string(),
                "decay": r.decay.to_string(),
                "exponent": r.exponent,
                "probability": r.probability.to_string(),
                "bound": r.bound.to_string(),
                "holds": r.holds,
            });
            write_json(out, &meta, result)
        }
    }
}

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use arbor::coloring::{bad_blue_estimate, bad_blue_exhaustive, bb2_bound_check, k_i_subgroup, ClosedSetSpec, Coloring, SubgroupSpec};
use arbor::permgrp::LevelQuotient;
use arbor::selfsim::activity_bound;
use arbor::BoundaryRay;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::{decimal, write_csv, Meta, Table};
use crate::subject::{json_arg, load_table};

#[derive(Args, Debug)]
pub struct CosoficArgs {
    /// Read the whole experiment from a JSON config file instead of flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "grigorchuk")]
    group: String,
    /// Subgroup H as JSON (or @file), e.g. {"word_generated":["b","aca"]}; defaults to the stabilizer of 1^m
    #[arg(long)]
    subgroup: Option<String>,
    /// Closed set K as JSON (or @file); defaults to the ray 1^∞
    #[arg(long)]
    set: Option<String>,
    /// Depth of the level quotient Γ_m
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 3)]
    c0: usize,
    /// Largest level i; defaults to m − c0
    #[arg(long)]
    max_level: Option<usize>,
    /// The group element g
    #[arg(long, default_value = "b")]
    word: String,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    /// Root seed; required unless --exhaustive
    #[arg(long)]
    seed: Option<u64>,
    /// Enumerate the conjugacy class of g instead of sampling
    #[arg(long)]
    exhaustive: bool,
    /// Largest conjugacy class to enumerate
    #[arg(long, default_value_t = 5_000_000)]
    class_limit: usize,
    #[arg(long, default_value_t = 100_000)]
    state_limit: usize,
}

/// A fully resolved experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosoficConfig {
    pub group: String,
    pub subgroup: Option<SubgroupSpec>,
    #[serde(default)]
    pub set: Option<ClosedSetSpec>,
    pub m: usize,
    pub c0: usize,
    #[serde(default)]
    pub max_level: Option<usize>,
    pub word: String,
    #[serde(default)]
    pub trials: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub exhaustive: bool,
    #[serde(default = "default_class_limit")]
    pub class_limit: usize,
    #[serde(default = "default_state_limit")]
    pub state_limit: usize,
}

fn default_class_limit() -> usize {
    5_000_000
}

fn default_state_limit() -> usize {
    100_000
}

impl CosoficArgs {
    fn resolve(self) -> anyhow::Result<CosoficConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            return serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()));
        }
        Ok(CosoficConfig {
            group: self.group,
            subgroup: self.subgroup.as_deref().map(json_arg).transpose()?,
            set: self.set.as_deref().map(json_arg).transpose()?,
            m: self.m,
            c0: self.c0,
            max_level: self.max_level,
            word: self.word,
            trials: self.trials,
            seed: self.seed,
            exhaustive: self.exhaustive,
            class_limit: self.class_limit,
            state_limit: self.state_limit,
        })
    }
}

pub fn run(args: CosoficArgs, out: Option<&Path>) -> anyhow::Result<()> {
    let mut cfg = args.resolve()?;
    if cfg.m < cfg.c0 {
        bail!("m = {} must be at least c0 = {}", cfg.m, cfg.c0);
    }
    let max_level = *cfg.max_level.get_or_insert(cfg.m - cfg.c0);
    if max_level + cfg.c0 > cfg.m {
        bail!("level {max_level} needs m ≥ {}", max_level + cfg.c0);
    }
    if !cfg.exhaustive && cfg.seed.is_none() {
        bail!("sampling needs --seed (or pass --exhaustive)");
    }
    let table = load_table(&cfg.group)?;
    let subgroup = cfg.subgroup.get_or_insert_with(|| SubgroupSpec::spine(1, cfg.m)).clone();
    let set = cfg.set.get_or_insert_with(|| ClosedSetSpec::ray(BoundaryRay::constant(1))).clone();
    let meta = Meta::new("cosofic-sim", serde_json::to_value(&cfg)?, cfg.seed);
    let q = LevelQuotient::new(&table, cfg.m)?;
    let h = subgroup.realize(&table, &q)?;
    let col = Coloring::new(&set, table.valency(), cfg.m)?;
    let word = table.parse_word(&cfg.word)?;
    let g = q.word_image(&word);
    let activity = activity_bound(&table, &word, max_level, cfg.state_limit)?;
    let rows = (0..=max_level)
        .into_par_iter()
        .map(|i| {
            let k = k_i_subgroup(&q, &h, &col, i, cfg.c0)?;
            let r = if cfg.exhaustive {
                bad_blue_exhaustive(&q, &h, &k, &g, cfg.class_limit)?
            } else {
                bad_blue_estimate(&q, &h, &k, &g, cfg.trials, cfg.seed.expect("checked above"))
            };
            let bb2 = bb2_bound_check(&r, activity.counts[i]);
            if !bb2.holds {
                log::warn!("level {i}: {} > {}", bb2.lhs, bb2.rhs);
            }
            log::info!("level {i}: index {} done", k.index);
            Ok(vec![
                i.to_string(),
                decimal(&col.q_b(i)),
                decimal(&r.q_bb()),
                decimal(&r.symdiff_prob()),
                decimal(&bb2.lhs),
                decimal(&bb2.rhs),
                cfg.seed.map_or_else(String::new, |s| s.to_string()),
            ])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let columns = vec!["level", "q_b", "q_bb", "symdiff_prob", "bb2_lhs", "bb2_rhs", "seed"];
    write_csv(out, &meta, &Table { columns, rows })
}

use std::path::Path;

use arbor::permgrp::LevelQuotient;
use arbor::selfsim::{activity_bound, check_assumption_c, Nucleus, RecursionTable};
use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{write_csv, write_json, Meta, Table};
use crate::subject::load_table;

#[derive(Args, Debug)]
pub struct SubjectArgs {
    /// Builtin group (grigorchuk, gupta_sidki:3, basilica, grigorchuk_omega:(012), ...) or a table JSON file
    #[arg(default_value = "grigorchuk")]
    subject: String,
    /// Cap on automaton states explored for nuclei and sections
    #[arg(long, default_value_t = 100_000)]
    state_limit: usize,
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Generator table and nucleus
    Info(SubjectArgs),
    /// Orders of the level quotients Γ_1, ..., Γ_n
    Order {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
    },
    /// Nucleus states with root permutations and sections
    Nucleus(SubjectArgs),
    /// Exact per-level activity counts of a word
    Activity {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long, default_value = "b")]
        word: String,
        #[arg(long, default_value_t = 12)]
        horizon: usize,
    },
    /// The contraction condition with parameters i0 and c0
    AssumptionC {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long, default_value_t = 1)]
        i0: usize,
        #[arg(long, default_value_t = 3)]
        c0: usize,
        #[arg(long, default_value_t = 12)]
        horizon: usize,
    },
}

fn nucleus_json(table: &RecursionTable, n: &Nucleus) -> Value {
    let states: Vec<Value> = (0..n.len())
        .map(|s| {
            let key = n.key(s);
            let sections: Vec<String> = (0..table.degree_at_key(key)).map(|x| n.name(n.next(s, x))).collect();
            json!({ "name": n.name(s), "key": key, "root_perm": n.perm(s).to_string(), "sections": sections })
        })
        .collect();
    json!({ "size": n.len(), "states": states, "section_closed": n.is_section_closed() })
}

pub fn run(cmd: GroupCmd, out: Option<&Path>) -> anyhow::Result<()> {
    match cmd {
        GroupCmd::Info(s) => {
            let table = load_table(&s.subject)?;
            let meta = Meta::new("group info", json!({ "subject": s.subject, "state_limit": s.state_limit }), None);
            let nucleus = match Nucleus::compute(&table, s.state_limit) {
                Ok(n) => {
                    let mut names = n.state_names();
                    names.sort();
                    json!(names)
                }
                Err(e) => {
                    log::warn!("nucleus not found: {e}");
                    Value::Null
                }
            };
            let result = json!({
                "label": table.label(),
                "table": serde_json::to_value(table.to_json())?,
                "nucleus": nucleus,
            });
            write_json(out, &meta, result)
        }
        GroupCmd::Order { subject, max_level } => {
            let table = load_table(&subject.subject)?;
            let meta = Meta::new("group order", json!({ "subject": subject.subject, "max_level": max_level }), None);
            let rows = (1..=max_level)
                .into_par_iter()
                .map(|n| {
                    let q = LevelQuotient::new(&table, n)?;
                    log::info!("level {n}: order {}", q.group().order());
                    Ok(vec![n.to_string(), q.level().size().to_string(), q.group().order().to_string()])
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            write_csv(out, &meta, &Table { columns: vec!["level", "points", "order"], rows })
        }
        GroupCmd::Nucleus(s) => {
            let table = load_table(&s.subject)?;
            let meta = Meta::new("group nucleus", json!({ "subject": s.subject, "state_limit": s.state_limit }), None);
            let n = Nucleus::compute(&table, s.state_limit)?;
            write_json(out, &meta, nucleus_json(&table, &n))
        }
        GroupCmd::Activity { subject, word, horizon } => {
            let table = load_table(&subject.subject)?;
            let meta = Meta::new(
                "group activity",
                json!({ "subject": subject.subject, "word": word, "horizon": horizon, "state_limit": subject.state_limit }),
                None,
            );
            let w = table.parse_word(&word)?;
            let a = activity_bound(&table, &w, horizon, subject.state_limit)?;
            if !a.exact {
                log::warn!("identity certification failed; counts are upper bounds");
            }
            let rows = a
                .counts
                .iter()
                .enumerate()
                .map(|(i, c)| vec![i.to_string(), c.to_string(), a.exact.to_string()])
                .collect();
            write_csv(out, &meta, &Table { columns: vec!["level", "active", "exact"], rows })
        }
        GroupCmd::AssumptionC { subject, i0, c0, horizon } => {
            let table = load_table(&subject.subject)?;
            let meta = Meta::new(
                "group assumption-c",
                json!({ "subject": subject.subject, "i0": i0, "c0": c0, "horizon": horizon, "state_limit": subject.state_limit }),
                None,
            );
            let n = Nucleus::compute(&table, subject.state_limit)?;
            let r = check_assumption_c(&table, &n, i0, c0, horizon);
            let witnesses: Vec<Value> = r
                .witnesses
                .iter()
                .map(|w| json!({ "level": w.level, "state": w.state, "first_active": w.first_active }))
                .collect();
            let result = json!({
                "pass": r.pass,
                "minimal_c0": r.minimal_c0,
                "checked_states": r.checked.len(),
                "witnesses": witnesses,
            });
            write_json(out, &meta, result)
        }
    }
}

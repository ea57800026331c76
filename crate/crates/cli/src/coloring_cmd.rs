use std::path::Path;

use arbor::coloring::{ClosedSetSpec, Coloring};
use arbor::ValencySequence;
use clap::Args;
use serde_json::{json, Value};

use crate::report::{write_json, Meta};
use crate::subject::json_arg;

#[derive(Args, Debug)]
pub struct ColoringArgs {
    /// Closed set as JSON (or @file), e.g. {"cylinders":["0"],"rays":[{"pre":"","period":"1"}]}
    #[arg(long, default_value = r#"{"rays":[{"pre":"","period":"1"}]}"#)]
    set: String,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Degree of the regular tree
    #[arg(long, default_value_t = 2)]
    degree: usize,
}

pub fn run(args: ColoringArgs, out: Option<&Path>) -> anyhow::Result<()> {
    let set: ClosedSetSpec = json_arg(&args.set)?;
    let valency = ValencySequence::regular(args.degree);
    let meta = Meta::new(
        "coloring",
        json!({ "set": serde_json::to_value(&set)?, "depth": args.depth, "degree": args.degree }),
        None,
    );
    let col = Coloring::new(&set, &valency, args.depth)?;
    let index: Vec<String> = col.index_set().iter().map(|v| v.to_string()).collect();
    let levels: Vec<Value> = (0..=args.depth)
        .map(|i| {
            let (r, g, b) = col.counts(i);
            json!({ "level": i, "red": r, "green": g, "blue": b, "q_b": col.q_b(i).to_string() })
        })
        .collect();
    write_json(out, &meta, json!({ "index_set": index, "levels": levels }))
}

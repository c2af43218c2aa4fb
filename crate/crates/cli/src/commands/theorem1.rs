use mspace_core::numerics::random::{derive_seed, rng_from_seed};
use mspace_core::theorems::{check_protocol_equivalence, outcome_table, ProtocolSpec};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::load_protocol;
use crate::{parse_pair, CliError, Report, Theorem1Args};

struct Trial {
    row: Value,
    deviation: f64,
    pass: bool,
}

fn evaluate(spec: &ProtocolSpec, mut row: Value) -> Result<Trial, CliError> {
    let check = check_protocol_equivalence(spec)?;
    let (d_a, d_b) = spec.dims();
    row["d_a"] = json!(d_a);
    row["d_b"] = json!(d_b);
    row["outcomes"] = json!(spec.outcomes());
    row["p_original"] = json!(check.original);
    row["p_mspace"] = json!(check.mspace);
    row["deviation"] = json!(check.deviation);
    row["pass"] = json!(check.pass);
    Ok(Trial { row, deviation: check.deviation, pass: check.pass })
}

pub fn theorem1(args: &Theorem1Args, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("theorem1");
    if let Some(arg) = args.protocol.as_deref().filter(|_| !args.random) {
        report = report.param("protocol", arg).param("tol", tol);
        let loaded = load_protocol(arg, tol)?;
        report.warn(loaded.warnings);
        let spec = loaded.value;
        let table = outcome_table(&spec)?;
        let mut trial = evaluate(&spec, json!({"protocol": arg}))?;
        trial.row["success_by_outcome"] = json!(table.success);
        trial.row["failure_by_outcome"] = json!(table.failure);
        report.gate(trial.deviation, trial.pass);
        report.push(trial.row);
        return Ok(report);
    }

    let dims = args.dims.as_deref().map(|d| parse_pair::<usize>(d, "--dims")).transpose()?;
    report = report
        .param("random", true)
        .param("trials", args.trials)
        .param("dims", dims.map_or(Value::Null, |(a, b)| json!([a, b])))
        .param("outcomes", args.outcomes.map_or(Value::Null, Value::from))
        .with_seed(args.seed);
    let trials = (0..args.trials)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(args.seed, i as u64);
            let mut rng = rng_from_seed(seed);
            let (d_a, d_b) = dims.unwrap_or_else(|| (rng.random_range(2..=4), rng.random_range(2..=4)));
            let outcomes = args.outcomes.unwrap_or_else(|| rng.random_range(2..=4));
            let spec = ProtocolSpec::random(&mut rng, d_a, d_b, outcomes)?;
            evaluate(&spec, json!({"trial": i, "seed": seed}))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let failures = trials.iter().filter(|t| !t.pass).count();
    report.summarize("failures", failures);
    for t in trials {
        report.gate(t.deviation, t.pass);
        report.push(t.row);
    }
    Ok(report)
}

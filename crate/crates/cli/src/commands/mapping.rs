use mspace_core::entanglement::{
    entanglement as entanglement_of, operational_entanglement, BipartiteSplit, EntanglementMeasure,
};
use mspace_core::measurement::{outcome_probabilities, PROBABILITY_SUM_TOL};
use mspace_core::numerics::inner;
use mspace_core::theorems::locc::MONOTONICITY_TOL;
use mspace_core::{map_local, map_to_measurement_space, LocalMeasurementSet, MeasurementSet, PureState};
use serde_json::{json, Value};

use crate::input::{load_local, load_measurement, load_state};
use crate::{parse_pair, CliError, EntanglementArgs, MapArgs, Report, SweepArgs};

pub fn map(args: &MapArgs, tol: f64) -> Result<Report, CliError> {
    let state = load_state(&args.state)?;
    let psi = state.value;
    let mut report = Report::new("map").param("state", args.state.as_str());
    report.warn(state.warnings);
    let (joint, image) = match (&args.measurements, &args.alice, &args.bob) {
        (Some(m), None, None) => {
            report = report.param("measurements", m.as_str());
            let set = load_measurement(m, psi.dim(), tol)?;
            let image = map_to_measurement_space(&psi, &set)?;
            (set, image)
        }
        (None, Some(a), Some(b)) => {
            report = report.param("alice", a.as_str()).param("bob", b.as_str());
            let local = load_local(&psi, a, b, tol)?;
            let image = map_local(&psi, &local)?;
            (local.joint()?, image)
        }
        _ => return Err(CliError::Usage("give either --measurements or both --alice and --bob".into())),
    };
    report = report.param("tol", tol);

    let raw = outcome_probabilities(&psi, &joint)?;
    let sum: f64 = raw.iter().sum();
    let deviation = (sum - 1.0).abs();
    report.summarize("outcomes", image.len());
    report.summarize("probability_sum", sum);
    report.summarize("completeness_deviation", joint.completeness_deviation());
    report.summarize("structure", image.structure().map_or(Value::Null, |(a, b)| json!([a, b])));
    report.gate(deviation, deviation <= tol.max(PROBABILITY_SUM_TOL));
    for ((label, p), amp) in image.labels().iter().zip(image.probabilities()).zip(image.amplitudes()) {
        report.push(json!({"label": label, "probability": p, "amplitude": amp}));
    }
    Ok(report)
}

/// Reshapes `psi` to `a×b` when a split is given; otherwise it must already
/// be bipartite.
fn bipartite_view(psi: PureState, split: Option<&str>) -> Result<PureState, CliError> {
    match split {
        Some(text) => {
            let (a, b): (usize, usize) = parse_pair(text, "--split")?;
            Ok(psi.reshape(vec![a, b])?)
        }
        None => {
            BipartiteSplit::for_state(&psi)?;
            Ok(psi)
        }
    }
}

pub fn entanglement(args: &EntanglementArgs, tol: f64) -> Result<Report, CliError> {
    let measure: EntanglementMeasure = args.measure.parse()?;
    let state = load_state(&args.state)?;
    let psi = bipartite_view(state.value, args.split.as_deref())?;
    let mut report = Report::new("entanglement").param("state", args.state.as_str()).param("measure", measure.name());
    if let Some(s) = &args.split {
        report = report.param("split", s.as_str());
    }
    report.warn(state.warnings);
    let e_state = entanglement_of(&psi, &BipartiteSplit::pair(), measure)?;
    let mut row = json!({
        "measure": measure.name(),
        "dims": psi.dims(),
        "e_state": e_state,
    });
    if let (Some(a), Some(b)) = (&args.alice, &args.bob) {
        report = report.param("alice", a.as_str()).param("bob", b.as_str()).param("tol", tol);
        let local = load_local(&psi, a, b, tol)?;
        let e_m = operational_entanglement(&psi, &local, measure)?;
        let excess = (e_m.value - e_state).max(0.0);
        row["e_mspace"] = json!(e_m.value);
        row["outcome_shape"] = json!([e_m.split.0, e_m.split.1]);
        row["monotone"] = json!(excess <= MONOTONICITY_TOL);
        report.gate(excess, excess <= MONOTONICITY_TOL);
    }
    report.push(row);
    Ok(report)
}

/// (2η−1)², the image concurrence of |φ⁺⟩ under noisy pairs on both sides.
pub fn noisy_bell_concurrence(eta: f64) -> f64 {
    (2.0 * eta - 1.0).powi(2)
}

/// Tolerance of the sweep's closed-form comparison.
pub const SWEEP_TOL: f64 = 1e-9;

pub fn sweep(args: &SweepArgs) -> Result<Report, CliError> {
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    for eta in [args.eta_start, args.eta_end] {
        if !(0.0..=1.0).contains(&eta) {
            return Err(mspace_core::Error::OutOfRange { value: eta, min: 0.0, max: 1.0 }.into());
        }
    }
    let state = load_state(&args.state)?;
    let psi = state.value;
    if psi.dims() != [2, 2] {
        return Err(CliError::Usage(format!("sweep needs a two-qubit state, found dims {:?}", psi.dims())));
    }
    let mut report = Report::new("sweep")
        .param("eta_start", args.eta_start)
        .param("eta_end", args.eta_end)
        .param("steps", args.steps)
        .param("state", args.state.as_str());
    report.warn(state.warnings);
    // the closed form only describes |φ⁺⟩
    let bell_overlap = inner(PureState::bell().amplitudes(), psi.amplitudes()).norm_sqr();
    let closed_form_applies = (bell_overlap - 1.0).abs() < 1e-12;
    report.summarize("closed_form_applies", closed_form_applies);
    let e_state = entanglement_of(&psi, &BipartiteSplit::pair(), EntanglementMeasure::Entropy)?;
    for i in 0..args.steps {
        let eta = if args.steps == 1 {
            args.eta_start
        } else {
            args.eta_start + (args.eta_end - args.eta_start) * i as f64 / (args.steps - 1) as f64
        };
        let pair = MeasurementSet::noisy_pair(eta)?;
        let local = LocalMeasurementSet::new(pair.clone(), pair);
        let c = operational_entanglement(&psi, &local, EntanglementMeasure::Concurrence)?.value;
        let s = operational_entanglement(&psi, &local, EntanglementMeasure::Entropy)?.value;
        let mut row = json!({
            "eta": eta,
            "e_state": e_state,
            "em_concurrence": c,
            "em_entropy": s,
        });
        if closed_form_applies {
            let expected = noisy_bell_concurrence(eta);
            let deviation = (c - expected).abs();
            row["closed_form"] = json!(expected);
            row["deviation"] = json!(deviation);
            report.gate(deviation, deviation <= SWEEP_TOL);
        }
        report.push(row);
    }
    Ok(report)
}

//! Input files and built-in names for states, measurement sets and protocols.
//!
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows. Any
//! argument that is not a recognised name is read as a path.

use std::fs;
use std::path::{Path, PathBuf};

use mspace_core::numerics::random::rng_from_seed;
use mspace_core::numerics::{haar_state, Complex64};
use mspace_core::theorems::{ProtocolSpec, VerificationPair};
use mspace_core::{ComplexMatrix, Error, LocalMeasurementSet, MeasurementSet, PureState};
use serde::Deserialize;

use crate::CliError;

/// States within this distance of unit norm load silently.
pub const NORM_ACCEPT_TOL: f64 = 1e-8;
/// States within this distance are renormalized with a warning.
pub const NORM_RENORMALIZE_TOL: f64 = 1e-4;

pub type Matrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorEntry {
    pub label: String,
    pub matrix: Matrix,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementFile {
    pub dim: usize,
    pub operators: Vec<OperatorEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyEntry {
    pub success: Matrix,
    pub failure: Matrix,
}

/// Either an inline object or a string naming a built-in or a file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Inline<T> {
    Name(String),
    Value(T),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    pub state: Inline<StateFile>,
    pub alice: Inline<MeasurementFile>,
    pub bob_unitaries: Vec<Matrix>,
    pub verify: Vec<VerifyEntry>,
}

/// Loaded value plus any warnings raised while loading it.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

impl<T> Loaded<T> {
    fn clean(value: T) -> Self {
        Self { value, warnings: Vec::new() }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

fn parse_num<T: std::str::FromStr>(text: &str, what: &str) -> Result<T, CliError> {
    text.parse().map_err(|_| CliError::Usage(format!("cannot parse {what} from {text:?}")))
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub fn matrix_from_rows(rows: &Matrix) -> Result<ComplexMatrix, CliError> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::Empty("matrix".into()).into());
    }
    let mut data = Vec::with_capacity(n_rows * n_cols);
    for row in rows {
        if row.len() != n_cols {
            return Err(Error::DimensionMismatch { expected: n_cols, found: row.len() }.into());
        }
        data.extend(row.iter().map(complex));
    }
    Ok(ComplexMatrix::new(n_rows, n_cols, data)?)
}

/// "random:<seed>" or "random:<seed>:<d1>x<d2>…"; two qubits by default.
fn random_state(rest: &str) -> Result<PureState, CliError> {
    let mut parts = rest.splitn(2, ':');
    let seed: u64 = parse_num(parts.next().unwrap_or(""), "state seed")?;
    let dims = match parts.next() {
        Some(shape) => {
            shape.split('x').map(|d| parse_num::<usize>(d, "state dimension")).collect::<Result<Vec<_>, _>>()?
        }
        None => vec![2, 2],
    };
    Ok(haar_state(&mut rng_from_seed(seed), &dims)?)
}

pub fn named_state(name: &str) -> Option<Result<PureState, CliError>> {
    let state = match name {
        "bell" | "phi+" => PureState::bell(),
        "product0" => PureState::basis(vec![2, 2], 0).expect("basis state"),
        "plus" => PureState::plus(),
        "zero" => PureState::basis(vec![2], 0).expect("basis state"),
        _ => return name.strip_prefix("random:").map(random_state),
    };
    Some(Ok(state))
}

pub fn state_from_file(file: &StateFile) -> Result<Loaded<PureState>, CliError> {
    let expected: usize = file.dims.iter().product();
    if file.dims.is_empty() || expected == 0 {
        return Err(Error::Empty("state dims".into()).into());
    }
    if file.amplitudes.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: file.amplitudes.len() }.into());
    }
    let amps: Vec<Complex64> = file.amplitudes.iter().map(complex).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let deviation = (norm - 1.0).abs();
    if !(deviation <= NORM_RENORMALIZE_TOL) {
        return Err(Error::NotNormalized { deviation, tolerance: NORM_RENORMALIZE_TOL }.into());
    }
    let mut warnings = Vec::new();
    if deviation > NORM_ACCEPT_TOL {
        warnings.push(format!("state norm deviation {deviation:e} exceeds {NORM_ACCEPT_TOL:e}; renormalized"));
    }
    let state = PureState::normalized(file.dims.clone(), amps)?;
    Ok(Loaded { value: state, warnings })
}

fn resolve_path(base: Option<&Path>, text: &str) -> PathBuf {
    let p = PathBuf::from(text);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

/// Named state or a path to a state file.
pub fn load_state(arg: &str) -> Result<Loaded<PureState>, CliError> {
    load_state_from(arg, None)
}

fn load_state_from(arg: &str, base: Option<&Path>) -> Result<Loaded<PureState>, CliError> {
    if let Some(state) = named_state(arg) {
        return state.map(Loaded::clean);
    }
    state_from_file(&read_json(&resolve_path(base, arg))?)
}

pub fn measurement_from_file(file: &MeasurementFile, dim: usize, tol: f64) -> Result<MeasurementSet, CliError> {
    if file.dim != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: file.dim }.into());
    }
    let ops = file
        .operators
        .iter()
        .map(|e| Ok((e.label.clone(), matrix_from_rows(&e.matrix)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    checked(MeasurementSet::new(dim, ops)?, tol)
}

fn checked(set: MeasurementSet, tol: f64) -> Result<MeasurementSet, CliError> {
    let set = set.with_tolerance(tol);
    let report = set.validate_completeness(tol);
    if !report.pass {
        return Err(Error::Incomplete { deviation: report.max_deviation, tolerance: tol }.into());
    }
    Ok(set)
}

pub fn named_measurement(name: &str, dim: usize) -> Option<Result<MeasurementSet, CliError>> {
    let set = match name {
        "z-projectors" | "z" => Ok(MeasurementSet::computational_basis(dim)),
        "trivial" => Ok(MeasurementSet::trivial(dim)),
        _ => match name.strip_prefix("noisy:") {
            Some(eta) => noisy(eta, dim),
            None => random_measurement(name.strip_prefix("random:")?, dim),
        },
    };
    Some(set)
}

fn noisy(eta: &str, dim: usize) -> Result<MeasurementSet, CliError> {
    if dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: dim }.into());
    }
    Ok(MeasurementSet::noisy_pair(parse_num(eta, "detector efficiency")?)?)
}

/// "random:<outcomes>:<seed>".
fn random_measurement(rest: &str, dim: usize) -> Result<MeasurementSet, CliError> {
    let (outcomes, seed) = rest
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("expected random:<outcomes>:<seed>, got random:{rest}")))?;
    let outcomes: usize = parse_num(outcomes, "outcome count")?;
    let seed: u64 = parse_num(seed, "measurement seed")?;
    Ok(MeasurementSet::random(&mut rng_from_seed(seed), dim, outcomes)?)
}

/// Named family or a path to a measurement file, for a `dim`-level system.
pub fn load_measurement(arg: &str, dim: usize, tol: f64) -> Result<MeasurementSet, CliError> {
    load_measurement_from(arg, dim, tol, None)
}

fn load_measurement_from(arg: &str, dim: usize, tol: f64, base: Option<&Path>) -> Result<MeasurementSet, CliError> {
    match named_measurement(arg, dim) {
        Some(set) => checked(set?, tol),
        None => measurement_from_file(&read_json(&resolve_path(base, arg))?, dim, tol),
    }
}

/// Subsystem dimensions of a two-party state.
pub fn party_dims(psi: &PureState) -> Result<(usize, usize), CliError> {
    match *psi.dims() {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!("local measurements need a two-party state, found dims {:?}", psi.dims()))),
    }
}

pub fn load_local(psi: &PureState, alice: &str, bob: &str, tol: f64) -> Result<LocalMeasurementSet, CliError> {
    let (d_a, d_b) = party_dims(psi)?;
    Ok(LocalMeasurementSet::new(load_measurement(alice, d_a, tol)?, load_measurement(bob, d_b, tol)?))
}

/// Built-in protocols on |φ⁺⟩: `noisy-alice:<eta>`, `perfect`, `always-succeed`.
pub fn named_protocol(name: &str) -> Option<Result<ProtocolSpec, CliError>> {
    let spec = match name {
        "perfect" => ProtocolSpec::correlated_check(PureState::bell(), MeasurementSet::computational_basis(2)),
        "always-succeed" => ProtocolSpec::always_succeed(PureState::bell(), MeasurementSet::computational_basis(2)),
        _ => {
            let eta = name.strip_prefix("noisy-alice:")?;
            return Some(noisy(eta, 2).and_then(|set| Ok(ProtocolSpec::correlated_check(PureState::bell(), set)?)));
        }
    };
    Some(spec.map_err(CliError::from))
}

pub fn protocol_from_file(
    file: &ProtocolFile,
    base: Option<&Path>,
    tol: f64,
) -> Result<Loaded<ProtocolSpec>, CliError> {
    let state = match &file.state {
        Inline::Name(arg) => load_state_from(arg, base)?,
        Inline::Value(inline) => state_from_file(inline)?,
    };
    let (d_a, _) = party_dims(&state.value)?;
    let alice = match &file.alice {
        Inline::Name(arg) => load_measurement_from(arg, d_a, tol, base)?,
        Inline::Value(inline) => measurement_from_file(inline, d_a, tol)?,
    };
    let unitaries = file.bob_unitaries.iter().map(matrix_from_rows).collect::<Result<Vec<_>, _>>()?;
    let verify = file
        .verify
        .iter()
        .map(|v| Ok(VerificationPair::new(matrix_from_rows(&v.success)?, matrix_from_rows(&v.failure)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let spec = ProtocolSpec::new(state.value, alice, unitaries, verify)?;
    Ok(Loaded { value: spec, warnings: state.warnings })
}

pub fn load_protocol(arg: &str, tol: f64) -> Result<Loaded<ProtocolSpec>, CliError> {
    if let Some(spec) = named_protocol(arg) {
        return spec.map(Loaded::clean);
    }
    let path = PathBuf::from(arg);
    protocol_from_file(&read_json(&path)?, path.parent(), tol)
}

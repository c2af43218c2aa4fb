use mspace_core::modes::{useful_entanglement_bound, ModeSystem};
use serde_json::json;

use crate::{CliError, ModesArgs, Report};

/// Invariants every table row must satisfy.
fn row_consistent(s: &ModeSystem) -> bool {
    let n = s.compositions;
    let divides = n.is_multiple_of(s.p);
    let above_root = (s.p as u128) * (s.p as u128) >= n as u128;
    let prime_zero = !s.prime || s.bound_bits == 0.0;
    let ordered = s.bound_bits <= s.weak_bound_bits + 1e-12;
    divides && above_root && prime_zero && ordered && s.bound_bits >= 0.0
}

pub fn modes(args: &ModesArgs) -> Result<Report, CliError> {
    let (cells, mut report) = match (args.n, args.m, args.n_max, args.m_max) {
        (Some(n), Some(m), None, None) => (vec![(n, m)], Report::new("modes").param("n", n).param("m", m)),
        (None, None, Some(n_max), Some(m_max)) => {
            let cells = (1..=n_max).flat_map(|n| (2..=m_max).map(move |m| (n, m))).collect();
            (cells, Report::new("modes").param("n_max", n_max).param("m_max", m_max))
        }
        _ => return Err(CliError::Usage("give either --n and --m or --n-max and --m-max".into())),
    };
    if cells.is_empty() {
        return Err(CliError::Usage("empty table: need n ≥ 1 and m ≥ 2".into()));
    }
    for (n, m) in cells {
        let s = useful_entanglement_bound(n, m)?;
        let ok = row_consistent(&s);
        report.gate(0.0, ok);
        report.push(json!({
            "n": s.n,
            "m": s.m,
            "compositions": s.compositions,
            "prime": s.prime,
            "p": s.p,
            "bound_bits": s.bound_bits,
            "weak_bound_bits": s.weak_bound_bits,
            "weak_loose_for_prime": s.weak_bound_loose_for_prime(),
            "consistent": ok,
        }));
    }
    Ok(report)
}

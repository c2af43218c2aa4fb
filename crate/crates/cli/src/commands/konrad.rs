use mspace_core::numerics::haar_state;
use mspace_core::numerics::random::{derive_seed, rng_from_seed, TrialRng};
use mspace_core::theorems::konrad::KONRAD_TOL;
use mspace_core::theorems::{konrad_single_sided_check, konrad_two_sided_check, Channel};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{CliError, KonradArgs, Report};

#[derive(Debug, Clone, Copy)]
enum ChannelKind {
    Random,
    Identity,
    Depolarizing,
    Damping(f64),
}

impl ChannelKind {
    fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "random" => Ok(Self::Random),
            "identity" => Ok(Self::Identity),
            "depolarizing" => Ok(Self::Depolarizing),
            _ => text
                .strip_prefix("damping:")
                .and_then(|g| g.parse().ok())
                .map(Self::Damping)
                .ok_or_else(|| CliError::Usage(format!("unknown channel {text:?}"))),
        }
    }

    fn draw(self, rng: &mut TrialRng) -> Result<Channel, CliError> {
        Ok(match self {
            Self::Random => {
                let n_kraus = rng.random_range(1..=4);
                Channel::random(rng, 2, n_kraus)?
            }
            Self::Identity => Channel::identity(2),
            Self::Depolarizing => Channel::fully_depolarizing_qubit(),
            Self::Damping(g) => Channel::amplitude_damping(g)?,
        })
    }
}

struct Trial {
    row: Value,
    deviation: f64,
    pass: bool,
}

pub fn konrad(args: &KonradArgs) -> Result<Report, CliError> {
    let kind = ChannelKind::parse(&args.channel)?;
    let mut report = Report::new("konrad")
        .param("trials", args.trials)
        .param("two_sided", args.two_sided)
        .param("channel", args.channel.as_str())
        .with_seed(args.seed);
    let trials = (0..args.trials)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(args.seed, i as u64);
            let mut rng = rng_from_seed(seed);
            let psi = haar_state(&mut rng, &[2, 2])?;
            let alice = kind.draw(&mut rng)?;
            if args.two_sided {
                let bob = kind.draw(&mut rng)?;
                let c = konrad_two_sided_check(&psi, &alice, &bob)?;
                let violation = (-c.slack).max(0.0);
                Ok(Trial {
                    row: json!({
                        "trial": i, "seed": seed,
                        "kraus_a": alice.kraus().len(), "kraus_b": bob.kraus().len(),
                        "lhs": c.lhs, "rhs": c.rhs, "slack": c.slack, "pass": c.holds,
                    }),
                    deviation: violation,
                    pass: c.holds,
                })
            } else {
                let c = konrad_single_sided_check(&psi, &alice)?;
                Ok(Trial {
                    row: json!({
                        "trial": i, "seed": seed,
                        "kraus": alice.kraus().len(),
                        "lhs": c.lhs, "channel_factor": c.channel_factor,
                        "input_concurrence": c.input_concurrence,
                        "rhs": c.rhs, "residual": c.residual, "pass": c.pass,
                    }),
                    deviation: c.residual,
                    pass: c.pass,
                })
            }
        })
        .collect::<Result<Vec<Trial>, CliError>>()?;
    report.summarize("tolerance", KONRAD_TOL);
    report.summarize("violations", trials.iter().filter(|t| !t.pass).count());
    for t in trials {
        report.gate(t.deviation, t.pass);
        report.push(t.row);
    }
    Ok(report)
}

//! One function per subcommand, each returning a finished report.

mod konrad;
mod locc;
mod mapping;
mod modes;
mod theorem1;

pub use konrad::konrad;
pub use locc::locc;
pub use mapping::{entanglement, map, sweep};
pub use modes::modes;
pub use theorem1::theorem1;

//! Lagrangian cycles over a stratification, Euler obstruction calculus and
//! one-parameter families of cycles.

mod cycle;
mod family;
mod poset;
#[cfg(test)]
mod tests;

pub use cycle::{
    cc_from_chi, chi_from_cc, pair_with_test, ConstructibleFunction, CycleEntry, LagrangianCycle,
};
pub use family::{
    constancy_check, geometric_schedule, limit_of_family, ConstancyReport, FamilyOfCycles,
    DEFAULT_STABILITY_WINDOW,
};
pub use poset::{EulerObstructionTable, StratificationPoset, Stratum};

//! SAT instances, certificate checking, planted generation, timing campaigns
//! and polynomial degree fitting.

mod campaign;
mod cnf;
pub mod dimacs;
mod fit;
mod planted;

pub use campaign::{run_campaign, CampaignError, Claim, GeneratorConfig, Sample, TimingCampaign, AVERAGE_CASE_NOTE};
pub use cnf::{verify_assignment, Assignment, AssignmentError, CnfError, CnfFormula, Literal};
pub use dimacs::{parse_dimacs, to_dimacs, DimacsError};
pub use fit::{fit_poly_degree, DegreeFit, FitOutcome, FINITE_RANGE_NOTE};
pub use planted::{generate_planted, Ratio};

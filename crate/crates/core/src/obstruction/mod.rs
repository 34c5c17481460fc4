//! Non-liftability arguments made executable: constraints on perturbations,
//! iterate identities, the order-p probe, polynomial congruences and
//! certified finite searches.

mod constraints;
mod identities;
mod iterate;
mod lift;
mod search;

pub use constraints::{perturbation_constraints, ConstraintSystem, LinearConstraint};
pub use identities::{
    binomial_identity_check, eigen_order_values, klein_commutation_check, BinomialIdentityReport,
    KleinCommutationReport,
};
pub use iterate::{
    iterate_identity_check, lemma_matrix, order_p_probe, CoefficientFormula, IterateFailure, IterateReport,
    OrderProbeReport, ULift,
};
pub use lift::PerturbedLift;
pub use search::{
    exhaustive_lift_search, EnumerationOrder, SearchBounds, SearchOutcome, SearchSpace, SearchStatus, Witness,
};

#[cfg(test)]
mod tests;

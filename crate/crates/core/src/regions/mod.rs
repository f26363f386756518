//! Rate regions: exact symbolic elimination, closed-form membership, LP
//! feasibility, and auxiliary-distribution evaluations.

pub mod fme;
pub mod linear;
pub mod lp;
pub mod rational;

pub use fme::{extends, fme_eliminate, is_implied, prune_redundant};
pub use linear::{bind_entropies, entropy_symbol_axes, Inequality, LinearForm, LinearSystem, Relation};
pub use rational::Rational;

pub mod closed;
pub use closed::{
    region_equal_forehead, region_equal_general, region_equal_general_witness, region_equal_indv,
    region_two_equal, AccessStructure, GeneralWitness, RateTuple, REGION_SLACK,
};

pub mod aux;
pub use aux::{
    ach_two_bounds, factorization_gap, forehead_terms, forehead_upper_bound, region_ach_two,
    AUX_TOLERANCE,
};

pub mod search;
pub use search::{
    correlated_rate, forehead_search, oblivious_membership, ForeheadSearch, ObliviousCards,
    ObliviousReport, ObliviousVerdict, OBLIVIOUS_HINGE_SLACK, OBLIVIOUS_MARGINAL_TOL,
};

//! Exact abelian-group engine.

pub mod group;
pub mod limit;
pub mod normal_form;

pub use group::{
    invariance_sign, kernel_basis, kernel_of_invariant_functional, quotient_by_invariant_vector,
    restrict_to_kernel, GroupDescription,
};
pub use limit::{limits_agree_on_samples, solve_rational, standard_samples, StationaryLimit};
pub use normal_form::{hermite_rows, lattice_coordinates, smith_normal_form, Smith};

//! Van der Waals potentials and forces between two-level atoms out of thermal
//! equilibrium, with a sweep driver that writes CSV tables.
//!
//! Internal quantities are in natural units ħ = c = 1 with frequencies in
//! units of a reference ω (see [`units::UnitSystem`]).

// guards of the form `!(x > 0.0)` also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod atoms;
pub mod error;
pub mod fields;
pub mod forces;
pub mod greens;
pub mod potentials;
pub mod quadrature;
pub mod sweep;
pub mod units;

pub use atoms::{polarizability, polarizability_imagfreq, AtomState, TwoLevelAtom};
pub use error::{Result, VdwError};
pub use fields::{occupation, PhotonField, TabulatedSpectrum, TwoPeakSpectrum};
pub use forces::{force_exact, net_force, ForcePair, StepSpec};
pub use greens::{contracted_abs2, contracted_sq, dyadic_green};
pub use potentials::{u_cp_body, u_eq_two_atom, u_general, u_neq_exact, EnvironmentGreens, Target};
pub use units::{Frequency, UnitMode, UnitSystem};

//! Integer homological algebra: matrices and Smith normal form, finitely
//! generated abelian groups, cochain cohomology, and spectral sequences.

pub mod group;
pub mod matrix;
pub mod ss;

pub use group::{
    bounded_torsion_report, cohomology, lens_complex, localize_away_2, serre_extension_check,
    BoundedTorsionReport, ExtensionReport, FGAbGroup,
};
pub use matrix::{kernel_basis, smith_normal_form, snf_diagonal, IntMatrix};
pub use ss::{
    betti_rank_bounds, build_thm_a_e2, filtered_complex_ss, run_forced, AbutmentReport,
    FilteredComplex, FilteredSSRun, PageBidegree, SSPage, WittReport,
};

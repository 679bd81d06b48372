//! Construction, classification and exhaustive search of difference sets,
//! almost difference sets, relative difference sets and modular Golomb
//! rulers in finite abelian groups, plus order-8 cyclotomy for octic
//! residue sets.

pub mod adsearch;
pub mod arith;
pub mod cyclotomy;
pub mod diffcore;
pub mod error;
pub mod extend;
pub mod families;
pub mod groups;
pub mod mgr;
pub mod search;

pub use diffcore::{
    classify, complement, difference_profile, sumset, t_hat, verify_relative_ds, AdsParams,
    Classification, DiffProfile, DsParams, RelativeParams, Subset,
};
pub use error::{Error, Result};
pub use groups::{units, GroupElement, GroupSpec};
pub use search::{Budget, SearchMode, SearchReport, SearchStatus};

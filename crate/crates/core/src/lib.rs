pub mod ed_oracle;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod lmg;
pub mod operators;
pub mod purity;
pub mod sparse;
pub mod states;
pub mod xy_chain;

/// Library version, recorded in CLI sidecar files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use operators::{HermitianOperator, ObservableBasis, Spin, C64};
pub use purity::{BasisTag, StateVector};
pub use sparse::CsrMatrix;

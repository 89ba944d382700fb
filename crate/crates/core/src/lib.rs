pub mod certify;
pub mod closure;
pub mod determinacy;
pub mod dvr;
pub mod error;
pub mod ideals;
pub mod io;
pub mod localalg;
pub mod matrixops;
pub mod tangent;

pub use certify::{CertifiedBool, Certificate, PowerSearch};
pub use determinacy::{
    chain_report, genericity_note, relative_report, report, BoundCertificate, BoundKind, ChainReport, DeterminacyReport,
    OracleBounds, Verdict, DEFAULT_N_MAX,
};
pub use dvr::{skew_canonical_dvr, smith_normal_form, sym_canonical_dvr, CongruenceForm, SmithForm};
pub use error::{Error, Result};
pub use ideals::{Ideal, LoewyLength};
pub use io::{IdealInput, MatrixInput};
pub use localalg::{JetContext, Monomial, Poly, Scalar, SubspaceBasis};
pub use matrixops::{PolyMatrix, Structure};
pub use tangent::{GroupAction, GroupKind, SigmaSpace};

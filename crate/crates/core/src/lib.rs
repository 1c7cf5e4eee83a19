pub mod assignment;
pub mod deppairs;
pub mod encoder;
pub mod error;
pub mod lp;
pub mod maxpoly;
pub mod rc;
pub mod scalar;
pub mod synthesizer;
pub mod trs;
pub mod verdict;
pub mod verifier;

pub use assignment::Assignment;
pub use deppairs::{dependency_pairs, DependencyPair};
pub use encoder::{check_model, emit_smtlib, encode, parse_model, FormulaDoc};
pub use error::{Error, Result};
pub use maxpoly::{MaxPolyFn, Poly, SamplingPlan};
pub use rc::{construct_si_from_rc, measure_rc, RcFunction, RcReport};
pub use scalar::Scalar;
pub use synthesizer::{synthesize, Domain, Status, SynthesisConfig, SynthesisResult};
pub use trs::{Name, Position, Rule, Symbol, SymbolKind, Term, Trs};
pub use verdict::{Verdict, Witness};
pub use verifier::{
    verify, verify_dpi, verify_pi, verify_qi, Criterion, Overall, PiMode, Report, VerifyOptions,
};

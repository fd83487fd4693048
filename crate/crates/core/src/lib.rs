//! Gröbner-basis engine and Jacobian-ideal toolkit for hypersurface
//! arrangements in projective space.

pub mod arrangement;
pub mod error;
pub mod field;
pub mod groebner;
pub mod idealops;
pub mod invariants;
pub mod monomial;
pub mod oracle;
pub mod ring;
pub mod scenarios;
pub mod suites;

pub use arrangement::{
    arrangement_top, check_hypotheses, default_supports, jacobian_ideal, radical_top, top_part,
    ArrangementSpec, Check, Hypotheses, PencilArrangement, PrimaryPiece, Report, TopPart,
};
pub use error::{ArrError, Result};
pub use field::{Field, PrimeField, RationalField, DEFAULT_PRIME};
pub use groebner::{
    buchberger_criterion_holds, groebner_basis, groebner_basis_in, module_groebner_basis,
    normal_form, syzygies, Budget, FreeModule, FreeModuleVector, GbStats, GroebnerBasis,
    ModuleOrder,
};
pub use idealops::{ideal_equal, membership, minors, radical_membership, Ideal};
pub use invariants::{
    hilbert_data, is_acm, is_unmixed, minimal_betti, rao_module, unmixed_part, BettiTable,
    HilbertData, RaoModule,
};
pub use monomial::{Grading, Monomial, MonomialOrder, MAX_VARS};
pub use ring::{Polynomial, Ring};
pub use scenarios::{registry, run_scenario, Overrides, Scenario, ScenarioReport, Tier};

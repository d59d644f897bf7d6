use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("universe `{0}` has no elements")]
    EmptyUniverse(String),
    #[error("universe `{name}` has {size} elements, cap is {cap}")]
    UniverseTooLarge { name: String, size: usize, cap: usize },
    #[error("unknown element `{element}` in universe `{universe}`")]
    UnknownElement { universe: String, element: String },
    #[error("family saturation exceeded {limit} members")]
    FamilyBudgetExceeded { limit: usize },
    #[error("universe mismatch: expected `{expected}`, found `{found}`")]
    UniverseMismatch { expected: String, found: String },
    #[error("exhaustive check over {bits} bits of input exceeds the budget of {budget}")]
    BudgetExceeded { bits: usize, budget: usize },
    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("operator is not an endo-operator (P({domain}) -> P({codomain}))")]
    NotEndo { domain: String, codomain: String },
    #[error("operator is not monotone: F({lower}) is not contained in F({upper})")]
    NotMonotone { lower: String, upper: String },
    #[error("operator is not an interior operator: {0}")]
    NotInterior(String),
    #[error("operator is not a closure operator: {0}")]
    NotClosure(String),
    #[error("operator is neither an interior nor a closure operator: {0}")]
    NotInteriorOrClosure(String),
    #[error("{basis} basis requested for a fixpoint lattice of a {lattice} operator")]
    KindMismatch { basis: &'static str, lattice: &'static str },
    #[error("family member {0} is not a fixpoint")]
    NotAFixpointMember(String),
    #[error("verification failed at input {0}")]
    VerificationFailed(String),
    #[error("expected a resolution of form {expected}, found {found}")]
    WrongForm { expected: &'static str, found: &'static str },
}

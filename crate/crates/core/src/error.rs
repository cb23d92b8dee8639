use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cap exceeded: {what} needs {needed}, limit {limit}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("not associative: (b{0} b{1}) b{2} != b{0} (b{1} b{2})")]
    NotAssociative(usize, usize, usize),
    #[error("declared unit fails on basis element b{0}")]
    BadUnit(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("bad subgroup: {0}")]
    BadSubgroup(String),
    #[error("grading incompatible: b{0} b{1} has a term on b{2} of the wrong degree")]
    NotGraded(usize, usize, usize),
    #[error("grading is not epsilon-strong")]
    NotEpsilonStrong,
    #[error("strategy unavailable: {0}")]
    StrategyUnavailable(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("correspondence violation: {0}")]
    CorrespondenceViolation(String),
    #[error("malformed datum: {0}")]
    MalformedDatum(String),
    #[error("malformed data: {0}")]
    MalformedData(String),
    #[error("axiom {axiom} fails: {detail}")]
    AxiomViolation { axiom: &'static str, detail: String },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("action is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("ring is not s-unital")]
    NotSUnital,
    #[error("ring is not unital")]
    NotUnital,
    #[error("graph is not acyclic")]
    NotAcyclic,
    #[error("input is zero")]
    ZeroInput,
    #[error("internal exhaustion: {0}")]
    InternalExhaustion(String),
    #[error("unknown: {0}")]
    Unknown(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration limits shared by every exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_elements: u64,
    pub max_ideals: usize,
    pub max_group: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_elements: 1 << 20,
            max_ideals: 4096,
            max_group: 24,
        }
    }
}

impl Caps {
    pub fn check_elements(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_elements as u128 {
            return Err(Error::CapExceeded {
                what,
                needed,
                limit: self.max_elements as u128,
            });
        }
        Ok(())
    }
}

//! Error type shared by the whole engine.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by exact zero")]
    DivisionByExactZero,
    #[error("evaluation hit a pole locus after {retries} retries")]
    EvaluationAtPole { retries: u32 },
    #[error("pole order exceeds jet window (valuation {valuation}, order {order})")]
    PoleOrderExceedsJet { valuation: i64, order: usize },
    #[error("label {label} out of range for dimension {dim}")]
    LabelOutOfRange { label: usize, dim: usize },
    #[error("operands live on different graded spaces")]
    SpaceMismatch,
    #[error("algebra tags do not match: {0} vs {1}")]
    TagMismatch(String, String),
    #[error("factor position {pos} out of range for arity {arity}")]
    PositionOutOfRange { pos: usize, arity: usize },
    #[error("not a permutation of 0..{arity}")]
    BadPermutation { arity: usize },
    #[error("grading incompatible with embedding data")]
    GradingMismatch,
    #[error("R-matrix argument sits on the pole z = 1")]
    PoleAtArgument,
    #[error("slot {slot} out of range for {total} factors")]
    SlotOutOfRange { slot: usize, total: usize },
    #[error("word of length {word_len} is not reduced (inversion count {inversions})")]
    NonReducedWord { word_len: usize, inversions: usize },
    #[error("factor is singular at the argument (normalizer f vanishes)")]
    SingularAtArgument,
    #[error("negative shuffle product is only defined for purely bosonic spaces")]
    UnsupportedSuperMinus,
    #[error("wheel condition violated: {0}")]
    WheelViolation(String),
    #[error("element is not slope zero")]
    NotSlopeZero,
    #[error("sum of spectral variables vanished at the sample point")]
    SumOfVariablesZero,
    #[error("series truncation {order} requires division by integers beyond the characteristic")]
    CharacteristicDivision { order: usize },
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("configuration error: {0}")]
    Config(String),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surface in two bands: input problems (bad words, bad flags) and
/// internal invariant failures. The CLI maps the former to exit 3, the
/// latter to exit 4 via [`Error::is_internal`].
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("word is trivial after reduction; multiword entries must be nontrivial")]
    TrivialWord,
    #[error("letter {0} exceeds rank {1}")]
    LetterOutOfRange(String, usize),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("not a member of the subgroup: {0}")]
    NotInSubgroup(String),
    #[error("generating tuple does not reduce to a basis; cannot rebase")]
    NotAGeneratingTuple,
    #[error("subgroup has infinite index; lifting requires finite index")]
    InfiniteIndex,
    #[error("basis not prepared: Whitehead graph is disconnected or has a cut vertex")]
    BasisNotPrepared,
    #[error("not a cut pair: {0}")]
    NotCutPair(String),
    #[error("missing embedding certificate for piece {0}")]
    MissingCertificate(usize),

    // not a failure of the input or of the algorithm: the multiword does not
    // fill, so the relative decomposition splits freely first. Each string
    // describes one factor.
    #[error("free splitting: {}", .0.join("  ∗  "))]
    FreeSplitting(Vec<String>),

    // invariant failures: these indicate a bug or an exhausted search cap,
    // never a property of valid input
    #[error("internal: quotient component with zero monodromy")]
    ZeroMonodromy,
    #[error("internal: crossing relation asymmetric between {0} and {1}")]
    SymmetryViolation(String, String),
    #[error("internal: endpoint of {0} lies on the cut set of {1}")]
    EndpointOnCut(String, String),
    #[error("internal: selected cut pair {0} is crossed by {1}")]
    CrossingPair(String, String),
    #[error("internal: vertex multiword admits a free splitting")]
    VertexSplits,
    #[error("stabilizer search exhausted at radius {0}; raise JSJ_MAX_STABILIZER_LEN")]
    StabilizerSearchExhausted(usize),
    #[error("internal: decomposition failed recognition at scan length {0}")]
    RecognitionFailed(usize),
    #[error("internal: collection contains a crossing pair: {0}")]
    CrossingInCollection(String),
    #[error("internal: assigned class {0} has no conjugate in its vertex subgroup")]
    RewriteFailure(String),
    #[error("internal: vertex piece disconnected")]
    DisconnectedPiece,
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::ZeroMonodromy
                | Error::SymmetryViolation(..)
                | Error::EndpointOnCut(..)
                | Error::CrossingPair(..)
                | Error::VertexSplits
                | Error::StabilizerSearchExhausted(..)
                | Error::RecognitionFailed(..)
                | Error::CrossingInCollection(..)
                | Error::RewriteFailure(..)
                | Error::DisconnectedPiece
        )
    }

    /// The multiword splits freely; callers usually report the factors
    /// rather than treating this as a failure.
    pub fn is_free_splitting(&self) -> bool {
        matches!(self, Error::FreeSplitting(..))
    }
}

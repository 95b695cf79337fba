use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("operand is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("operand is singular (smallest eigenvalue or singular value {value:.3e})")]
    SingularOperand { value: f64 },
    #[error("operand is not positive (eigenvalue {value:.3e})")]
    NotPositive { value: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty span needs an explicit ambient shape")]
    MissingShape,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("name clash: {0}")]
    NameClash(String),
    #[error("not parallel: {0}")]
    NotParallel(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("generator `{0}` has no norm bound")]
    UnboundedGenerator(String),
    #[error("relation {index} fails (residual {residual:.3e})")]
    RelationFailed { index: usize, residual: f64 },
    #[error("norm bound on `{arrow}` fails: {value:.6} > {bound:.6}")]
    BoundFailed { arrow: String, value: f64, bound: f64 },
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("image of `{0}` is not unitary")]
    NotUnitary(String),
    #[error("invalid simplicial set: {0}")]
    InvalidSimplicialSet(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("coset enumeration exceeded the budget of {budget} cosets")]
    NotFiniteWithinBound { budget: usize },
    #[error("lifting square mismatch: {0}")]
    SquareMismatch(String),
    #[error("functor is not a weak equivalence: {0}")]
    NotAWeakEquivalence(String),
    #[error("no unitary lift found at object `{0}`")]
    LiftObstruction(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

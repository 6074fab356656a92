use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images are not a bijection (value {0} duplicated or out of range)")]
    NotBijective(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("element is not unipotent (order {0} is not a power of {1})")]
    NotUnipotent(u64, u8),
    #[error("element does not lie in the group")]
    NotInGroup,
    #[error("key is not realizable in this stabilizer chain")]
    UnrealizableKey,
    #[error("constructed order {got} disagrees with expected order {want}")]
    OrderMismatch { got: u128, want: u128 },
    #[error("memory cap exceeded: {used} bytes needed, cap is {cap}")]
    MemoryCap { used: usize, cap: usize },
    #[error("class cap exceeded: frontier reached {reached} elements, cap {cap}")]
    ClassCap { reached: usize, cap: usize },
    #[error("total decomposition cap exceeded: {reached} elements, cap {cap}")]
    TotalCap { reached: usize, cap: usize },
    #[error("centralizer verification failed: expected order {want}, generated {got}")]
    CentralizerVerify { want: u128, got: u128 },
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),
    #[error("unsupported element constructor: {0}")]
    UnsupportedElement(String),
    #[error("element fails its defining property: {0}")]
    ElementProperty(String),
    #[error("bad partition string: {0}")]
    BadPartition(String),
    #[error("point {0} escapes the acted-on set")]
    EscapesSet(usize),
    #[error("flag search unsupported for n={0}, q={1}")]
    FlagUnsupported(usize, u8),
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid format widths: {exp_bits} exponent bits, {frac_bits} fraction bits")]
    InvalidWidths { exp_bits: u32, frac_bits: u32 },
    #[error("unknown format name `{0}`")]
    UnknownName(String),
    #[error("bit pattern {bits:#x} does not fit in {width} bits")]
    BitsOutOfRange { bits: u64, width: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AccumError {
    /// A non-finite value was offered to an exact accumulator.
    #[error("non-finite input {0}")]
    NonFinite(String),
    /// The running value became non-finite at element `index`.
    #[error("accumulator poisoned by a non-finite value at element {index}")]
    Poisoned { index: usize },
    #[error("value out of the accumulator's range")]
    OutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HexFloatError {
    #[error("malformed hexadecimal float `{0}`")]
    Malformed(String),
    #[error("`{text}` is not exactly representable in {format}")]
    Inexact { text: String, format: String },
}

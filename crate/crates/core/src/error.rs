use thiserror::Error;

/// Errors surfaced by the library. CLI exit codes map validation errors to 2,
/// inadmissible-physics errors to 3 and tolerance failures to 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("invalid grid parameters N = {n}, M = {m} (need N >= 0 and M >= 1)")]
    InvalidGrid { n: i32, m: i32 },
    #[error("grid functions live on different grids")]
    GridMismatch,
    #[error("index {index} out of range for a grid of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point does not lie on the grid")]
    PointNotOnGrid,
    #[error("ball is not representable on this grid")]
    BallNotRepresentable,
    #[error("wavelet index (r = {r}, |n| = p^{shift_exp}, j = {j}) not representable on this grid")]
    WaveletNotRepresentable { r: i32, shift_exp: u32, j: u8 },
    #[error("Legendre symbol rejected: residue 0 mod p")]
    LegendreZero,
    #[error("sign character is undefined at 0")]
    SignOfZero,
    #[error("mass profile is undefined at the interface point x = 0")]
    MassUndefinedAtZero,
    #[error("mass profile invalid: {0}")]
    MassProfile(String),
    #[error("mass {mass} is inadmissible: 1 - log_p(m v / hbar) = {scale} is not an integer")]
    InadmissibleMass { mass: f64, scale: f64 },
    #[error("energy E = {0} sits on a pole of the matching condition")]
    MatchingPole(f64),
    #[error("energy E = {e} outside the admissible bracket |E| <= {bound}")]
    OutsideBracket { e: f64, bound: f64 },
    #[error("bulk energy would be imaginary: m^2 v^4 - hbar^2 v^2 lambda^2 = {0} < 0")]
    ImaginaryEnergy(f64),
    #[error("character class constraint violated: {0}")]
    CharacterClass(String),
    #[error("empty superposition term list")]
    EmptyTermList,
    #[error("physical parameters must be strictly positive")]
    NonPositiveParams,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

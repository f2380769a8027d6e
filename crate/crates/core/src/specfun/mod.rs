//! Scalar special functions.

mod euler;
mod gamma;
mod hermite;
mod kummer;
mod lauricella;

pub use euler::Scaled;
pub use gamma::{gamma, is_nonpositive_integer, ln_gamma, ln_gamma_real, pochhammer, rgamma};
pub use hermite::{hermite_function, hermite_poly};
pub use kummer::kummer_phi;
pub use lauricella::{
    lauricella_fd, lauricella_fd_integral, lauricella_fd_integral_scaled, lauricella_fd_scaled,
    lauricella_fd_series, FdScaled, FdStrategy, FdValue, LauricellaArgs, SERIES_MAX_DEGREE,
    SERIES_QUIET_SHELLS,
};

//! CLI-level error wrapper and the process exit-code contract.

use deepwater::Error as LibError;

/// Clean run.
pub const EXIT_OK: i32 = 0;
/// Internal numerical failure, i/o failure, or a failed validation check.
pub const EXIT_FAILURE: i32 = 1;
/// Bad invocation: unparseable or out-of-range flag values.
pub const EXIT_USAGE: i32 = 2;
/// The request was well-formed but outside the model's domain.
pub const EXIT_DOMAIN: i32 = 3;

/// Anything a command can fail with, tagged for the exit-code contract.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Lib(#[from] LibError),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => EXIT_USAGE,
            AppError::Io(_) => EXIT_FAILURE,
            AppError::Lib(e) => lib_exit_code(e),
        }
    }
}

/// Splits the library's error set into usage (the value came straight from
/// a flag), domain (valid flags asking for something the model excludes),
/// and internal failures.
fn lib_exit_code(e: &LibError) -> i32 {
    match e {
        LibError::NonPositiveParameter { .. }
        | LibError::EmptyInput { .. }
        | LibError::InvalidInput { .. }
        | LibError::InvalidTolerance { .. } => EXIT_USAGE,

        LibError::ValidityViolation { .. }
        | LibError::NotSuperCritical { .. }
        | LibError::OutOfDomain { .. }
        | LibError::AboveSeparatrix { .. }
        | LibError::AboveCritical { .. } => EXIT_DOMAIN,

        LibError::ConvergenceFailure { .. }
        | LibError::StepSizeUnderflow { .. }
        | LibError::SignViolation { .. }
        | LibError::QuadratureNonConvergence { .. }
        | LibError::MonotonicityViolation { .. } => EXIT_FAILURE,

        LibError::LevelCurveFailed { source, .. } => lib_exit_code(source),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        let cases: Vec<(AppError, i32)> = vec![
            (AppError::Usage("bad flag".into()), EXIT_USAGE),
            (
                AppError::Lib(LibError::InvalidTolerance { tol: 1.0 }),
                EXIT_USAGE,
            ),
            (
                AppError::Lib(LibError::AboveSeparatrix {
                    y0: 2.0,
                    y_pi_star: 1.0,
                }),
                EXIT_DOMAIN,
            ),
            (
                AppError::Lib(LibError::AboveCritical { y: 3.0, limit: 2.3 }),
                EXIT_DOMAIN,
            ),
            (
                AppError::Lib(LibError::ConvergenceFailure { context: "test" }),
                EXIT_FAILURE,
            ),
        ];
        for (err, code) in cases {
            assert_eq!(err.exit_code(), code, "wrong code for {err}");
        }
    }

    #[test]
    fn wrapped_level_curve_failures_inherit_the_inner_code() {
        let err = AppError::Lib(LibError::LevelCurveFailed {
            index: 0,
            alpha: -3.0,
            source: Box::new(LibError::NotSuperCritical {
                alpha: -3.0,
                alpha_star: -4.08,
            }),
        });
        assert_eq!(err.exit_code(), EXIT_DOMAIN);
    }
}

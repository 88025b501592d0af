use qdcomp_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("golden-value mismatch: {0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Core(Error::ResourceCap { .. }) => 3,
            CliError::Usage(_) | CliError::Core(_) => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Mismatch("x".into()).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::Config("x".into())).exit_code(), 2);
        let cap = Error::ResourceCap {
            what: "x",
            needed: 2,
            cap: 1,
        };
        assert_eq!(CliError::Core(cap).exit_code(), 3);
    }
}

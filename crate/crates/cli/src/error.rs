use std::fmt;

pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_IMPOSSIBLE: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> Self {
        CliError { code: EXIT_SCHEMA, message: message.into() }
    }

    pub fn unsupported(message: impl Into<String>) -> Self {
        CliError { code: EXIT_UNSUPPORTED, message: message.into() }
    }

    pub fn impossible(message: impl Into<String>) -> Self {
        CliError { code: EXIT_IMPOSSIBLE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<perop::Error> for CliError {
    fn from(e: perop::Error) -> Self {
        use perop::Error::*;
        let code = match &e {
            UnsupportedFamily(_) | UnsupportedSelector(_) | OrbitClosureUnavailable(_) | WrongOperatorKind(_) => {
                EXIT_UNSUPPORTED
            }
            ContractViolation(_) | ZeroVector | OrderUndefined(_) | NotPeriodic(_) => EXIT_IMPOSSIBLE,
            _ => EXIT_SCHEMA,
        };
        CliError { code, message: e.to_string() }
    }
}

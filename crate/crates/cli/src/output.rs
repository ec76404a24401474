use std::fmt;

use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(framing::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

impl From<framing::Error> for Failure {
    fn from(e: framing::Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Core(e) => e.fmt(f),
        }
    }
}

/// Routes human text to stdout, or to stderr when a JSON document owns stdout.
pub struct Output {
    json: bool,
}

impl Output {
    pub fn new(json: bool) -> Self {
        Output { json }
    }

    pub fn line(&self, text: impl fmt::Display) {
        if self.json {
            eprintln!("{text}");
        } else {
            println!("{text}");
        }
    }

    pub fn document<T: Serialize>(&self, value: &T) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
        }
    }

    pub fn error(&self, failure: &Failure) {
        eprintln!("error: {failure}");
        #[derive(Serialize)]
        struct ErrorDoc {
            error: String,
            exit_code: u8,
        }
        self.document(&ErrorDoc {
            error: failure.to_string(),
            exit_code: failure.exit_code(),
        });
    }
}

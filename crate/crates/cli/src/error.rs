/// A failure with its documented process exit code.
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    /// Exit 2: bad or missing flags (kept for errors clap cannot see itself,
    /// like the FACE_CASCADE fallback).
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    /// Exit 3: unreadable or undecodable input.
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    /// Exit 4: cascade model parse failure.
    pub fn model(message: impl Into<String>) -> Self {
        CliError {
            code: 4,
            message: message.into(),
        }
    }

    /// Exit 5: enrollment found no face.
    pub fn no_face(message: impl Into<String>) -> Self {
        CliError {
            code: 5,
            message: message.into(),
        }
    }

    /// Exit 6: the gallery has no entries.
    pub fn empty_gallery(message: impl Into<String>) -> Self {
        CliError {
            code: 6,
            message: message.into(),
        }
    }

    /// Exit 7: evaluation input violates its schema.
    pub fn schema(message: impl Into<String>) -> Self {
        CliError {
            code: 7,
            message: message.into(),
        }
    }
}

pub mod detect;
pub mod enroll;
pub mod eval;
pub mod gallery;
pub mod recognize;

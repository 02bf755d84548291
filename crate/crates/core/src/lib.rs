pub mod extract;
pub mod interp;
pub mod kernel;
pub mod logic;
pub mod runtime;
pub mod syntax;

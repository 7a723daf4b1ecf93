pub mod error;
pub mod field;
pub mod linalg;
pub mod algebra;
pub mod format;
pub mod exec;
pub mod decomposition;
pub mod closure;
pub mod certificates;
pub mod instances;
pub mod cli;

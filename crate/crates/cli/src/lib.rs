pub mod corpus;
pub mod eval;
pub mod report;
pub mod run;
pub mod script;

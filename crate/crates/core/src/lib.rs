pub mod exec;
pub mod gaussoid;
pub mod graph;
pub mod implication;
pub mod numeric;
pub mod param;
pub mod poly;
pub mod sweep;

//! Spec language, instance catalog, verification harness and exporters for
//! lattices of intermediate rings of finite ring extensions.

pub mod build;
pub mod dsl;
pub mod catalog;
pub mod summary;
pub mod harness;
pub mod oracle;

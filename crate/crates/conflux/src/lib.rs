//! Confluence and related properties of generalized term rewriting systems,
//! proved by composing processors into proof trees.

pub mod framework;
pub mod frontend;
pub mod oracles;
pub mod pairs;
pub mod processors;
pub mod rewrite;
pub mod system;
pub mod term;
pub mod transforms;

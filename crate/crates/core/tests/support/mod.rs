//! Oracles and property runners shared by the integration tests and the
//! acceptance suite. Each test crate uses only some of them.
#![allow(dead_code)]

pub mod bounds;
pub mod gadget;
pub mod hennie;
pub mod oracle;

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod dynamics;
pub mod experiments;
pub mod geometry;
pub mod output;
pub mod render;
pub mod symbolic;

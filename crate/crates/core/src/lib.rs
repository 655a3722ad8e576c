//! Exact big Ramsey degrees for ordinals below ω^ω.

pub mod colorings;
pub mod constructions;
pub mod counting;
pub mod ordinal;
pub mod rules;

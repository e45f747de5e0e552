//! Report serialization.

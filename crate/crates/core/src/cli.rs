//! Batch command implementations.

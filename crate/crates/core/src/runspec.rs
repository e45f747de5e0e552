//! Run specification parsing.

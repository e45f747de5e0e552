//! Named, reportable checks for the structural identities.

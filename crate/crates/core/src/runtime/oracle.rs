//! Brute-force references for the counterexample search.

/// Largest index whose candidate refutes, i.e. where `holds` is false.
pub fn last_counterexample(holds: &[bool]) -> Option<usize> {
    holds.iter().rposition(|h| !h)
}

/// Smallest refuting index.
pub fn first_counterexample(holds: &[bool]) -> Option<usize> {
    holds.iter().position(|h| !h)
}

use crate::element::CoefficientValue;

/// Smallest period `p <= max_period` such that the code is eventually
/// `p`-periodic with at least two full periods observed.
pub fn detect_cycle(code: &[CoefficientValue], max_period: usize) -> Option<usize> {
    let len = code.len();
    (1..=max_period).find(|&p| {
        if 2 * p > len {
            return false;
        }
        // Earliest start of the periodic tail.
        let mut start = len - p;
        while start > 0 && code[start - 1] == code[start - 1 + p] {
            start -= 1;
        }
        start + 2 * p <= len
    })
}

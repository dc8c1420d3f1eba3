//! Published reference data for the 2-qubit read-out problem.

/// The 72 minimal (five read-out) sets whose design, with the trace row,
/// has full rank, as printed in the literature. Ids use the 1–18 numbering
/// of [`crate::model::ReadoutId`].
pub const MINIMAL_FIVE_SETS: [[u8; 5]; 72] = [
    [1, 2, 6, 12, 13],
    [1, 2, 6, 12, 14],
    [1, 2, 9, 12, 16],
    [1, 2, 9, 12, 17],
    [1, 3, 5, 11, 13],
    [1, 3, 5, 11, 15],
    [1, 3, 8, 11, 16],
    [1, 3, 8, 11, 18],
    [1, 5, 6, 11, 13],
    [1, 5, 6, 12, 13],
    [1, 5, 11, 13, 16],
    [1, 5, 11, 13, 17],
    [1, 6, 12, 13, 16],
    [1, 6, 12, 13, 18],
    [1, 8, 9, 11, 16],
    [1, 8, 9, 12, 16],
    [1, 8, 11, 13, 16],
    [1, 8, 11, 14, 16],
    [1, 9, 12, 13, 16],
    [1, 9, 12, 15, 16],
    [2, 3, 4, 10, 14],
    [2, 3, 4, 10, 15],
    [2, 3, 7, 10, 17],
    [2, 3, 7, 10, 18],
    [2, 4, 6, 10, 14],
    [2, 4, 6, 12, 14],
    [2, 4, 10, 14, 16],
    [2, 4, 10, 14, 17],
    [2, 6, 12, 14, 17],
    [2, 6, 12, 14, 18],
    [2, 7, 9, 10, 17],
    [2, 7, 9, 12, 17],
    [2, 7, 10, 13, 17],
    [2, 7, 10, 14, 17],
    [2, 9, 12, 14, 17],
    [2, 9, 12, 15, 17],
    [3, 4, 5, 10, 15],
    [3, 4, 5, 11, 15],
    [3, 4, 10, 15, 16],
    [3, 4, 10, 15, 18],
    [3, 5, 11, 15, 17],
    [3, 5, 11, 15, 18],
    [3, 7, 8, 10, 18],
    [3, 7, 8, 11, 18],
    [3, 7, 10, 13, 18],
    [3, 7, 10, 15, 18],
    [3, 8, 11, 14, 18],
    [3, 8, 11, 15, 18],
    [4, 5, 9, 15, 16],
    [4, 5, 9, 15, 17],
    [4, 6, 8, 14, 16],
    [4, 6, 8, 14, 18],
    [4, 8, 9, 14, 16],
    [4, 8, 9, 15, 16],
    [4, 8, 10, 14, 16],
    [4, 8, 11, 14, 16],
    [4, 9, 10, 15, 16],
    [4, 9, 12, 15, 16],
    [5, 6, 7, 13, 17],
    [5, 6, 7, 13, 18],
    [5, 7, 9, 13, 17],
    [5, 7, 9, 15, 17],
    [5, 7, 10, 13, 17],
    [5, 7, 11, 13, 17],
    [5, 9, 11, 15, 17],
    [5, 9, 12, 15, 17],
    [6, 7, 8, 13, 18],
    [6, 7, 8, 14, 18],
    [6, 7, 10, 13, 18],
    [6, 7, 12, 13, 18],
    [6, 8, 11, 14, 18],
    [6, 8, 12, 14, 18],
];

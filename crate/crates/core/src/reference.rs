//! Published values used as golden data by `verify` and the test suites.
//!
//! Orders are one-based: index `m - 1` holds the value for order `m`.

/// Number of `m × m` squares with margins 4, for `m = 1..=6`.
pub const TOTAL_COUNTS: [u64; 6] = [1, 5, 120, 10147, 2224955, 1047649905];

/// Number of equivalence classes, for `m = 1..=6`.
pub const CLASS_COUNTS: [u64; 6] = [1, 3, 9, 43, 264, 2804];

/// Representatives after each row-augmentation stage at order 5
/// (one to five rows).
pub const ORDER5_STAGE_COUNTS: [usize; 5] = [5, 44, 314, 1021, 264];

/// Fixed-point counts `n(i, j)` for the two elements of `S_2` on rows and
/// columns at order 2.
pub const ORDER2_FIXED_POINTS: [[u64; 2]; 2] = [[5, 1], [1, 5]];

/// The nine third-order representatives in the order they are listed,
/// with class size, multinomial factor and the expansion weights of the
/// distinct graphs they produce.
pub struct ThirdOrderRep {
    pub rows: [[u8; 3]; 3],
    pub orbit_size: u64,
    pub mult_factor: u64,
    pub weights: &'static [u64],
}

pub const ORDER3_REPS: [ThirdOrderRep; 9] = [
    ThirdOrderRep {
        rows: [[4, 0, 0], [0, 4, 0], [0, 0, 4]],
        orbit_size: 6,
        mult_factor: 1,
        weights: &[13824],
    },
    ThirdOrderRep {
        rows: [[4, 0, 0], [0, 3, 1], [0, 1, 3]],
        orbit_size: 18,
        mult_factor: 16,
        weights: &[13824],
    },
    ThirdOrderRep {
        rows: [[4, 0, 0], [0, 2, 2], [0, 2, 2]],
        orbit_size: 9,
        mult_factor: 36,
        weights: &[1536, 6144, 6144],
    },
    ThirdOrderRep {
        rows: [[3, 1, 0], [0, 1, 3], [1, 2, 1]],
        orbit_size: 18,
        mult_factor: 192,
        weights: &[4608, 9216],
    },
    ThirdOrderRep {
        rows: [[3, 1, 0], [0, 3, 1], [1, 0, 3]],
        orbit_size: 12,
        mult_factor: 64,
        weights: &[13824],
    },
    ThirdOrderRep {
        rows: [[3, 1, 0], [0, 2, 2], [1, 1, 2]],
        orbit_size: 36,
        mult_factor: 288,
        weights: &[1536, 3072, 3072, 6144],
    },
    ThirdOrderRep {
        rows: [[2, 2, 0], [0, 2, 2], [2, 0, 2]],
        orbit_size: 6,
        mult_factor: 216,
        weights: &[512, 3072, 6144, 4096],
    },
    ThirdOrderRep {
        rows: [[2, 2, 0], [1, 1, 2], [1, 1, 2]],
        orbit_size: 9,
        mult_factor: 864,
        weights: &[512, 1024, 2048, 4096, 2048, 4096],
    },
    ThirdOrderRep {
        rows: [[1, 2, 1], [2, 1, 1], [1, 1, 2]],
        orbit_size: 6,
        mult_factor: 1728,
        weights: &[512, 3072, 6144, 4096],
    },
];

/// `(M_T, M_K, s)` for the seven third-order graphs.
pub const ORDER3_RECORDS: [(u64, u64, u64); 7] = [
    (1244160, 27, 3072),
    (29859840, 648, 128),
    (9953280, 216, 384),
    (79626240, 1728, 48),
    (119439360, 2592, 32),
    (159252480, 3456, 24),
    (79626240, 1728, 48),
];

/// `(M_T, M_K, s)` for the ten connected fourth-order graphs.
pub const ORDER4_CONNECTED: [(u64, u64, u64); 10] = [
    (642105999360, 62208, 128),
    (2568423997440, 248832, 32),
    (1712282664960, 165888, 48),
    (1712282664960, 165888, 48),
    (2568423997440, 248832, 32),
    (5136847994880, 497664, 16),
    (1284211998720, 124416, 64),
    (570760888320, 55296, 144),
    (642105999360, 62208, 128),
    (2568423997440, 248832, 32),
];

/// `(M_T, M_K, s)` for the 28 connected fifth-order graphs.
pub const ORDER5_CONNECTED: [(u64, u64, u64); 28] = [
    (27738979172352000, 7464960, 128),
    (110955916689408000, 29859840, 32),
    (221911833378816000, 59719680, 16),
    (221911833378816000, 59719680, 16),
    (11095591668940800, 2985984, 320),
    (110955916689408000, 29859840, 32),
    (221911833378816000, 59719680, 16),
    (29588244450508800, 7962624, 120),
    (55477958344704000, 14929920, 64),
    (36985305563136000, 9953280, 96),
    (55477958344704000, 14929920, 64),
    (55477958344704000, 14929920, 64),
    (73970611126272000, 19906560, 48),
    (110955916689408000, 29859840, 32),
    (27738979172352000, 7464960, 128),
    (36985305563136000, 9953280, 96),
    (11095591668940800, 2985984, 320),
    (36985305563136000, 9953280, 96),
    (110955916689408000, 29859840, 32),
    (110955916689408000, 29859840, 32),
    (73970611126272000, 19906560, 48),
    (24656870375424000, 6635520, 144),
    (12328435187712000, 3317760, 288),
    (73970611126272000, 19906560, 48),
    (110955916689408000, 29859840, 32),
    (36985305563136000, 9953280, 96),
    (55477958344704000, 14929920, 64),
    (221911833378816000, 59719680, 16),
];

/// Distinct graphs (all, connected) per order where published.
pub fn graph_counts(m: usize) -> (Option<usize>, Option<usize>) {
    match m {
        3 => (Some(7), None),
        4 => (None, Some(10)),
        5 => (Some(56), Some(28)),
        6 => (Some(187), Some(97)),
        _ => (None, None),
    }
}

/// Distinct fourth-order graphs, connected or not. Not published; produced
/// by this engine and kept as a regression value.
pub const ORDER4_GRAPH_COUNT_REGRESSION: usize = 20;

/// The fourth-order worked example, its multinomial factor and the weights
/// of its seven graphs.
pub const EXAMPLE4_ROWS: [[u8; 4]; 4] = [[1, 1, 1, 1], [3, 1, 0, 0], [0, 2, 1, 1], [0, 0, 2, 2]];
pub const EXAMPLE4_FACTOR: u64 = 6912;
pub const EXAMPLE4_WEIGHTS: [u64; 7] = [12288, 24576, 73728, 49152, 24576, 49152, 98304];
pub const EXAMPLE4_WEIGHT_SUM: u64 = 331776;

/// Third-order square with two decompositions.
pub const TWO_DECOMPOSITIONS: [[u8; 3]; 3] = [[1, 2, 1], [2, 1, 1], [1, 1, 2]];

/// `3·P1 + P2`.
pub const IDENTITY_PLUS_SWAP: [[u8; 3]; 3] = [[4, 0, 0], [0, 3, 1], [0, 1, 3]];

/// Two inequivalent fourth-order squares whose unique decompositions share
/// the same overlap pattern, with their permutations in one-based notation.
pub const SAME_SIGNATURE_A: [[u8; 4]; 4] = [[2, 1, 1, 0], [0, 0, 2, 2], [0, 2, 0, 2], [2, 1, 1, 0]];
pub const SAME_SIGNATURE_A_TERMS: [[usize; 4]; 4] =
    [[3, 4, 2, 1], [2, 3, 4, 1], [1, 4, 2, 3], [1, 3, 4, 2]];
pub const SAME_SIGNATURE_B: [[u8; 4]; 4] = [[2, 1, 1, 0], [0, 1, 1, 2], [0, 2, 2, 0], [2, 0, 0, 2]];
pub const SAME_SIGNATURE_B_TERMS: [[usize; 4]; 4] =
    [[3, 4, 2, 1], [2, 4, 3, 1], [1, 3, 2, 4], [1, 2, 3, 4]];

/// Allowed repeat-count patterns of a decomposition with margin 4.
pub const ALLOWED_COUNT_PATTERNS: [&[u8]; 5] = [&[4], &[3, 1], &[2, 2], &[2, 1, 1], &[1, 1, 1, 1]];

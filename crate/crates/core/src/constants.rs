//! Published constants: the target ratio, the multiplier vectors for the
//! distance-sum bounds, and the printed block coefficients of the linear
//! system. This is the only copy; `coeff` and `lp` both read from here.
//!
//! Decimal constants that enter exact arithmetic are kept as strings so they
//! can be parsed into exact rationals.

/// Target path-to-star ratio.
pub const R_STAR: f64 = 1.559;
pub const R_STAR_DECIMAL: &str = "1.559";

/// Blocks of size 3 are accepted when `d4 <= N3_RATIO * d3`.
pub const N3_RATIO: f64 = 0.541;
pub const N3_RATIO_DECIMAL: &str = "0.541";

/// Bound on the averaged 3-block path, `3 * R_STAR` rounded as published.
pub const N3_PATH_BOUND: f64 = 4.677;

pub const MIN_BLOCK: usize = 3;
pub const MAX_BLOCK: usize = 10;

/// Multiplier row for the `f(i)` bound: `x_1 = x_2`, and `x_3 .. x_i` equal.
#[derive(Debug, Clone, Copy)]
pub struct FRow {
    pub i: usize,
    pub x12: f64,
    pub x_rest: f64,
}

/// Multiplier row for the `g(n)` bound: `x_1 = x_2`, `x_3 .. x_n` equal, and
/// a separate value for the last point `x_{n+1}`.
#[derive(Debug, Clone, Copy)]
pub struct GRow {
    pub n: usize,
    pub x12: f64,
    pub x_mid: f64,
    pub x_last: f64,
}

pub const F_ROWS: [FRow; 8] = [
    FRow { i: 3, x12: 2.127480103088468, x_rest: 2.715029663803688 },
    FRow { i: 4, x12: 3.2023557495551507, x_rest: 4.175556640172782 },
    FRow { i: 5, x12: 4.270167577054796, x_rest: 5.608618419590356 },
    FRow { i: 6, x12: 5.335126162486634, x_rest: 7.033301794415261 },
    FRow { i: 7, x12: 6.3986555212789265, x_rest: 8.454218195486414 },
    FRow { i: 8, x12: 7.461367172755974, x_rest: 9.873101560726544 },
    FRow { i: 9, x12: 8.52356722480373, x_rest: 11.290758818589284 },
    FRow { i: 10, x12: 9.585425903496056, x_rest: 12.707618366991161 },
];

pub const G_ROWS: [GRow; 8] = [
    GRow { n: 3, x12: 2.4556264573869506, x_mid: 3.5140460449331314, x_last: 1.5613009117434562 },
    GRow { n: 4, x12: 3.5424450202354296, x_mid: 4.920230571592636, x_last: 2.294026685501083 },
    GRow { n: 5, x12: 4.618609731491003, x_mid: 6.336229610465761, x_last: 3.0154193383617174 },
    GRow { n: 6, x12: 5.689328832275783, x_mid: 7.753335975414664, x_last: 3.7315531287091606 },
    GRow { n: 7, x12: 6.757011330006688, x_mid: 9.170224016158656, x_last: 4.4448690694127775 },
    GRow { n: 8, x12: 7.822844123284092, x_mid: 10.58670954888685, x_last: 5.15650608100577 },
    GRow { n: 9, x12: 8.88747045789415, x_mid: 12.002823667602273, x_last: 5.867063400774457 },
    GRow { n: 10, x12: 9.951267362449125, x_mid: 13.41863151261787, x_last: 6.576885724382338 },
];

/// Multipliers for the 3-block special case, points 1..4.
pub const N3_X: [f64; 4] = [
    1.2840665853752833,
    1.2840665853752833,
    1.8003074954981302,
    1.0528095728981612,
];

/// Printed block row for block size `n`. `coeffs` lists, in order, the
/// coefficients of `(d_i - d_{i+1})` for `i = 3..n-1`, then of
/// `(d_n - d_{n+1}/2 - d_{n+2}/2)`, then of `(d_{n+1} + d_{n+2})`.
#[derive(Debug, Clone, Copy)]
pub struct PrintedRow {
    pub n: usize,
    pub coeffs: &'static [&'static str],
}

pub const PRINTED_ROWS: [PrintedRow; 7] = [
    PrintedRow { n: 4, coeffs: &["4.6568", "5.9188", "3.2034"] },
    PrintedRow { n: 5, coeffs: &["4.7426", "6.1891", "7.3417", "3.9078"] },
    PrintedRow { n: 6, coeffs: &["4.7941", "6.3513", "7.6734", "8.7608", "4.6125"] },
    PrintedRow { n: 7, coeffs: &["4.8285", "6.4595", "7.8945", "9.1341", "10.1782", "5.3177"] },
    PrintedRow {
        n: 8,
        coeffs: &["4.853", "6.5367", "8.0525", "9.4006", "10.5814", "11.5946", "6.0232"],
    },
    PrintedRow {
        n: 9,
        coeffs: &["4.8714", "6.5946", "8.1709", "9.6006", "10.8837", "12.0203", "13.0105", "6.729"],
    },
    PrintedRow {
        n: 10,
        coeffs: &[
            "4.8857", "6.6397", "8.2631", "9.7561", "11.1189", "12.3514", "13.4538", "14.4259",
            "7.4351",
        ],
    },
];

/// Number of sorted distances in the linear system.
pub const LP_VARS: usize = 12;

pub fn f_row(i: usize) -> Option<FRow> {
    F_ROWS.iter().copied().find(|r| r.i == i)
}

pub fn g_row(n: usize) -> Option<GRow> {
    G_ROWS.iter().copied().find(|r| r.n == n)
}

pub fn printed_row(n: usize) -> Option<PrintedRow> {
    PRINTED_ROWS.iter().copied().find(|r| r.n == n)
}

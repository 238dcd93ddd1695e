//! Security parameter estimates by L-function extrapolation.
//!
//! Times are in MIPS-years. A timing t₁ at size N₁ is carried to size N₂ by
//! t₂ = t₁·L_{N₂}/L_{N₁}; the smallest discriminant matching a factoring
//! effort is found by searching bit sizes.

use serde::Serialize;

/// Seconds in a 365-day year.
pub const SECONDS_PER_YEAR: f64 = 31_536_000.0;

/// Subexponential exponent of the number field sieve.
pub const NFS_E: f64 = 1.0 / 3.0;

/// NFS constant (64/9)^{1/3}, o(1) dropped.
pub fn nfs_c() -> f64 {
    (64.0f64 / 9.0).cbrt()
}

/// RSA-768 factoring effort, the NFS anchor.
pub const NFS_ANCHOR: Anchor = Anchor { bits: 768, time: 8.8e6, e: NFS_E, c: 1.922_999_427_076_544_5 };

/// RSA moduli sizes of the table, starting with the anchor row.
pub const RSA_ROWS: [u32; 6] = [768, 1024, 2048, 3072, 7680, 15360];

/// Constant of the quadratic-field runtime column in the timing tables.
pub fn table_c() -> f64 {
    3.0 * std::f64::consts::SQRT_2 / 4.0
}

/// Largest timed discriminant sizes and their mean solve times in seconds
/// on a 4800 MIPS machine.
pub const IMAGINARY_TIMING: (u32, f64) = (256, 22_992.70);
pub const REAL_TIMING: (u32, f64) = (230, 5_680.90);
pub const TIMING_MIPS: f64 = 4800.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Anchor {
    pub bits: u32,
    /// MIPS-years.
    pub time: f64,
    pub e: f64,
    pub c: f64,
}

impl Anchor {
    /// Quadratic-field anchor, L[1/2, 1].
    pub fn quadratic(bits: u32, time: f64) -> Anchor {
        Anchor { bits, time, e: 0.5, c: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    pub rsa_bits: u32,
    pub t2_mips_years: f64,
    pub bits_imaginary: u32,
    pub bits_real: u32,
}

/// Imaginary and real anchors for the discriminant columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub imaginary: Anchor,
    pub real: Anchor,
}

impl Calibration {
    /// Anchors from the measured times converted at face value.
    pub fn literal() -> Calibration {
        let conv = |(bits, secs): (u32, f64)| Anchor::quadratic(bits, mips_years(secs, TIMING_MIPS));
        Calibration { imaginary: conv(IMAGINARY_TIMING), real: conv(REAL_TIMING) }
    }

    /// Anchors back-solved so that the 768-bit row gives 640 (imaginary) and
    /// 634 (real) bits.
    pub fn paper() -> Calibration {
        Calibration {
            imaginary: back_solve(IMAGINARY_TIMING.0, NFS_ANCHOR.time, 640),
            real: back_solve(REAL_TIMING.0, NFS_ANCHOR.time, 634),
        }
    }
}

/// ln L_{2^bits}[e, c].
pub fn ln_l(bits: u32, e: f64, c: f64) -> f64 {
    let ln_n = bits as f64 * std::f64::consts::LN_2;
    c * ln_n.powf(e) * ln_n.ln().powf(1.0 - e)
}

/// Carry a time t1 at `bits1` to `bits2`.
pub fn extrapolate(t1: f64, bits1: u32, bits2: u32, e: f64, c: f64) -> f64 {
    t1 * (ln_l(bits2, e, c) - ln_l(bits1, e, c)).exp()
}

/// Smallest b with L_{2^b} > L_{N₁}·t2/t1 under the anchor's L-parameters.
pub fn min_bits(anchor: &Anchor, t2: f64) -> u32 {
    let target = ln_l(anchor.bits, anchor.e, anchor.c) + (t2 / anchor.time).ln();
    let above = |b: u32| ln_l(b, anchor.e, anchor.c) > target;
    // L is increasing in b; double then bisect
    if above(2) {
        return 2;
    }
    let (mut lo, mut hi) = (2u32, 4u32);
    while !above(hi) {
        (lo, hi) = (hi, hi * 2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn mips_years(seconds: f64, mips: f64) -> f64 {
    seconds * mips / SECONDS_PER_YEAR
}

/// Anchor time at `bits` for which `min_bits(anchor, t2) == want`: the
/// admissible times form an interval in log scale and this is its midpoint.
pub fn back_solve(bits: u32, t2: f64, want: u32) -> Anchor {
    let (lo, hi) = back_solve_interval(bits, t2, want);
    Anchor::quadratic(bits, (lo * hi).sqrt())
}

/// Open-closed interval (lo, hi] of anchor times giving `want` bits.
pub fn back_solve_interval(bits: u32, t2: f64, want: u32) -> (f64, f64) {
    let base = ln_l(bits, 0.5, 1.0) + t2.ln();
    let lo = (base - ln_l(want, 0.5, 1.0)).exp();
    let hi = (base - ln_l(want - 1, 0.5, 1.0)).exp();
    (lo, hi)
}

/// The NFS time for each RSA size and the matching discriminant sizes.
pub fn security_table(cal: &Calibration) -> Vec<EstimateRow> {
    RSA_ROWS
        .iter()
        .map(|&rsa| {
            let t2 = extrapolate(NFS_ANCHOR.time, NFS_ANCHOR.bits, rsa, NFS_ANCHOR.e, NFS_ANCHOR.c);
            EstimateRow {
                rsa_bits: rsa,
                t2_mips_years: t2,
                bits_imaginary: min_bits(&cal.imaginary, t2),
                bits_real: min_bits(&cal.real, t2),
            }
        })
        .collect()
}

pub fn render_table(rows: &[EstimateRow]) -> String {
    let mut s = format!("{:>6}  {:>12}  {:>10}  {:>10}\n", "RSA", "MIPS-years", "imaginary", "real");
    for r in rows {
        s += &format!("{:>6}  {:>12.2e}  {:>10}  {:>10}\n", r.rsa_bits, r.t2_mips_years, r.bits_imaginary, r.bits_real);
    }
    s
}

//! Extrapolation and the security table.

use proptest::prelude::*;
use qfdlog::secest::{extrapolate, ln_l, min_bits, nfs_c, security_table, Anchor, Calibration, NFS_E};

proptest! {
    #[test]
    fn extrapolation_composes(t in 1e-3f64..1e6, b1 in 64u32..4096, b2 in 64u32..4096, b3 in 64u32..4096, nfs in any::<bool>()) {
        let (e, c) = if nfs { (NFS_E, nfs_c()) } else { (0.5, 1.0) };
        let two = extrapolate(extrapolate(t, b1, b2, e, c), b2, b3, e, c);
        let one = extrapolate(t, b1, b3, e, c);
        prop_assert!(((two - one) / one).abs() < 1e-9, "{} vs {}", two, one);
    }

    #[test]
    fn min_bits_is_monotone_and_tight(bits in 64u32..512, time in 1e-4f64..1e3, t2a in 1e-2f64..1e30, f in 1.0f64..1e6) {
        let a = Anchor::quadratic(bits, time);
        let (lo, hi) = (min_bits(&a, t2a), min_bits(&a, t2a * f));
        prop_assert!(lo <= hi);
        let target = ln_l(a.bits, a.e, a.c) + (t2a / a.time).ln();
        prop_assert!(ln_l(lo, a.e, a.c) > target);
        if lo > 2 {
            prop_assert!(ln_l(lo - 1, a.e, a.c) <= target);
        }
    }
}

#[test]
fn calibrated_table_matches_published_columns() {
    let rows = security_table(&Calibration::paper());
    let imag = [640, 798, 1348, 1827, 3598, 5971];
    let real = [634, 792, 1341, 1818, 3586, 5957];
    for (r, (i, re)) in rows.iter().zip(imag.iter().zip(&real)) {
        assert!(r.bits_imaginary.abs_diff(*i) <= 3, "{r:?}");
        assert!(r.bits_real.abs_diff(*re) <= 3, "{r:?}");
    }
}

#[test]
fn literal_units_snapshot() {
    // face-value MIPS-years give anchors about 1000 times larger than the
    // back-solved ones, so every size comes out smaller
    let rows = security_table(&Calibration::literal());
    let imag: Vec<u32> = rows.iter().map(|r| r.bits_imaginary).collect();
    let real: Vec<u32> = rows.iter().map(|r| r.bits_real).collect();
    assert_eq!(imag, vec![501, 644, 1152, 1601, 3288, 5580]);
    assert_eq!(real, vec![492, 634, 1139, 1585, 3267, 5554]);
}

#[test]
fn table_rows_increase() {
    for cal in [Calibration::paper(), Calibration::literal()] {
        let rows = security_table(&cal);
        for w in rows.windows(2) {
            assert!(w[0].rsa_bits < w[1].rsa_bits);
            assert!(w[0].t2_mips_years < w[1].t2_mips_years);
            assert!(w[0].bits_imaginary < w[1].bits_imaginary);
            assert!(w[0].bits_real < w[1].bits_real);
        }
    }
}

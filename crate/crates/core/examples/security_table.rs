//! Discriminant sizes matching RSA moduli, under both anchor conventions.
//!
//! cargo run --example security_table

use qfdlog::secest::{render_table, security_table, Calibration};

fn main() {
    for (name, cal) in [("calibrated", Calibration::paper()), ("literal units", Calibration::literal())] {
        println!(
            "{name}: imaginary anchor {:.4e} MIPS-years at {} bits, real {:.4e} at {}",
            cal.imaginary.time, cal.imaginary.bits, cal.real.time, cal.real.bits
        );
        print!("{}", render_table(&security_table(&cal)));
        println!();
    }
}

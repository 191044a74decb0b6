//! Shared CSV formatting: '.' decimal, no separators, 17 significant
//! digits so that every written real round-trips exactly.

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

//! Deterministic CSV cell formatting shared by the library and the CLI.

/// Format a float with 12 significant digits in scientific notation so that
/// identical runs produce byte-identical output.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        // Collapse -0.0 so the sign of a zero never depends on rounding.
        return "0.00000000000e0".to_string();
    }
    format!("{:.11e}", x)
}

/// Join already-formatted cells into one CSV line.
pub fn line(cells: &[String]) -> String {
    cells.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.125), "1.25000000000e-1");
        assert_eq!(sig12(-12.346), "-1.23460000000e1");
        assert_eq!(sig12(0.0), "0.00000000000e0");
        assert_eq!(sig12(-0.0), "0.00000000000e0");
    }
}

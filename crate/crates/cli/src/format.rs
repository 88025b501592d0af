//! Human-readable tables.

/// `x` with six significant digits.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    // the exponent after rounding, so 0.9999999 prints as 1.00000
    let sci = format!("{x:.5e}");
    let magnitude: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if !(-4..6).contains(&magnitude) {
        return sci;
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Right-aligned columns under a header, separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.95283), "0.952830");
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(12.0), "12.0000");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(0.99999999), "1.00000");
        assert_eq!(sig6(999999.7), "1.00000e6");
        assert_eq!(sig6(1.5e-7), "1.50000e-7");
    }

    #[test]
    fn columns_align() {
        let t = table(&["k", "S"], &[vec!["1".into(), "1.00000".into()]]);
        assert_eq!(t, "k        S\n1  1.00000\n");
    }
}

//! Deterministic CSV assembly.
//!
//! Floats are always rendered as 17-significant-digit scientific notation
//! so identical runs produce identical bytes on every platform; rows use
//! LF endings and fields never need quoting.

/// Fixed 17-significant-digit scientific rendering; `-0` is normalized.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub struct CsvBuilder {
    out: String,
    columns: usize,
}

impl CsvBuilder {
    pub fn new(header: &[&str]) -> Self {
        let mut out = String::new();
        out.push_str(&header.join(","));
        out.push('\n');
        CsvBuilder {
            out,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.out.push_str(&fields.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width_scientific() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.5e-5), "-2.5000000000000001e-5");
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
        assert_eq!(format_float(-0.0), "0.0000000000000000e0");
    }

    #[test]
    fn builder_emits_header_and_lf_rows() {
        let mut b = CsvBuilder::new(&["a", "b"]);
        b.row(&["1".into(), "2".into()]);
        assert_eq!(b.finish(), "a,b\n1,2\n");
    }
}

use std::io::Write;

use crate::error::CliError;

/// Formats `v` like C's `%.{digits}g`.
pub fn fmt_g(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// 12 significant digits, the precision of every CSV value.
pub fn num(v: f64) -> String {
    fmt_g(v, 12)
}

/// Writes a header and rows as RFC 4180 CSV.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_g(0.1, 12), "0.1");
        assert_eq!(fmt_g(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_g(123456789012.0, 12), "123456789012");
        assert_eq!(fmt_g(1234567890123.0, 12), "1.23456789012e+12");
        assert_eq!(fmt_g(1.5e-5, 12), "1.5e-05");
        assert_eq!(fmt_g(0.0001, 12), "0.0001");
        assert_eq!(fmt_g(-2.5, 12), "-2.5");
        assert_eq!(fmt_g(0.0, 12), "0");
        assert_eq!(fmt_g(1e100, 12), "1e+100");
        assert_eq!(fmt_g(9.9999999999999e-5, 12), "0.0001");
        assert_eq!(fmt_g(f64::NAN, 12), "nan");
    }

    #[test]
    fn quotes_when_needed() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), "plain".into()]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\r\n\"x,y\",plain\r\n");
    }
}

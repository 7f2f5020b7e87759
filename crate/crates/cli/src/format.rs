//! Number formatting shared by the text, CSV and JSON outputs.

use paperfold::approx::ExperimentRow;

pub const SIG_DIGITS: i32 = 12;

/// `x` with 12 significant digits, trailing zeros trimmed.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&magnitude) {
        let s = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        return format!("{}e{}", trim(mantissa), exp);
    }
    let decimals = (SIG_DIGITS - 1 - magnitude).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = trim(&s).to_string();
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, for JSON output.
pub fn round(x: f64) -> f64 {
    num(x).parse().unwrap_or(x)
}

pub const CSV_HEADER: &str = "n,gamma_len,gamma_diam,sup_diff,gh_bound,theorem_bound,total_abs_curv";

pub fn csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.n.to_string(),
            num(r.gamma_len),
            num(r.gamma_diam),
            num(r.sup_diff),
            num(r.gh_bound),
            num(r.theorem_bound),
            num(r.total_abs_curv),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(4.0), "4");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1234.5678), "1234.5678");
        assert_eq!(num(1e-9), "1e-9");
        assert_eq!(num(2.0f64.sqrt() / 64.0), "0.0220970869121");
    }
}

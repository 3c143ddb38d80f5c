use super::SweepRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "theta_deg,dF_array,dN_array,dF_single,dN_single,branch_F,branch_N";

/// `%g`-style formatting with `digits` significant digits and trailing zeros
/// dropped. Output always parses back with `str::parse::<f64>`.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus one LF-terminated line per row.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let nums = [r.theta_deg, r.df_array, r.dn_array, r.df_single, r.dn_single];
        for v in nums {
            out.push_str(&format_significant(v, 12));
            out.push(',');
        }
        out.push_str(r.branch_f.as_str());
        out.push(',');
        out.push_str(r.branch_n.as_str());
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::invalid("missing or unexpected CSV header")),
    }
    lines
        .map(|(i, line)| {
            let fields: Vec<&str> = line.trim_end_matches('\r').split(',').collect();
            if fields.len() != 7 {
                return Err(Error::invalid(format!("line {}: expected 7 fields, got {}", i + 1, fields.len())));
            }
            let num = |k: usize| {
                fields[k]
                    .parse::<f64>()
                    .map_err(|e| Error::invalid(format!("line {}: field {}: {e}", i + 1, k + 1)))
            };
            Ok(SweepRow {
                theta_deg: num(0)?,
                df_array: num(1)?,
                dn_array: num(2)?,
                df_single: num(3)?,
                dn_single: num(4)?,
                branch_f: fields[5].parse()?,
                branch_n: fields[6].parse()?,
            })
        })
        .collect()
}

//! Text output: one machine-readable line per value, or an aligned table.

use decalage_core::{ApproxComplex, Scalar};

/// Outcome of one query.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueRecord {
    pub k: Vec<u32>,
    pub value: Scalar,
    pub methods: Vec<&'static str>,
    /// Set when more than one method ran.
    pub agree: Option<bool>,
}

pub fn tuple(k: &[u32]) -> String {
    let parts: Vec<String> = k.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

/// Coordinates in the power basis `1, zeta, ..., zeta^{phi(r)-1}`, or `null`
/// for approximate values.
pub fn exact_coords(v: &Scalar) -> String {
    match v.as_exact() {
        Some(e) => {
            let parts: Vec<String> = e.coords().iter().map(ToString::to_string).collect();
            format!("[{}]", parts.join(","))
        }
        None => "null".to_string(),
    }
}

/// Short exact form: a bare rational when the value is rational.
pub fn exact_short(v: &Scalar) -> String {
    match v.as_exact() {
        Some(e) => match e.as_rational() {
            Some(q) => q.to_string(),
            None => exact_coords(v),
        },
        None => "-".to_string(),
    }
}

pub fn decimal(z: ApproxComplex) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn machine_line(r: &ValueRecord) -> String {
    let z = r.value.embed();
    let mut line = format!(
        "k={} exact={} approx={},{} method={}",
        tuple(&r.k),
        exact_coords(&r.value),
        z.re,
        z.im,
        r.methods.join(",")
    );
    if let Some(agree) = r.agree {
        line.push_str(&format!(" agree={agree}"));
    }
    line
}

pub fn aligned_table(records: &[ValueRecord]) -> String {
    let header = ["k", "exact", "decimal", "method", "agree"];
    let rows: Vec<[String; 5]> = records
        .iter()
        .map(|r| {
            [
                tuple(&r.k),
                exact_short(&r.value),
                decimal(r.value.embed()),
                r.methods.join(","),
                r.agree.map_or("-".to_string(), |a| a.to_string()),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let fmt_row = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![fmt_row(header.to_vec())];
    out.extend(rows.iter().map(|r| fmt_row(r.iter().map(String::as_str).collect())));
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use decalage_core::rational::frac;
    use decalage_core::{CyclotomicField, TwistVector};

    fn rational_value(p: i64, q: i64) -> Scalar {
        let mus = TwistVector::exact(CyclotomicField::new(2).unwrap(), vec![1]).unwrap();
        mus.from_rational(frac(p, q))
    }

    #[test]
    fn machine_line_format() {
        let r = ValueRecord { k: vec![1], value: rational_value(-1, 4), methods: vec!["recurrence", "closed"], agree: Some(true) };
        assert_eq!(machine_line(&r), "k=(1) exact=[-1/4] approx=-0.25,0 method=recurrence,closed agree=true");
    }

    #[test]
    fn table_is_aligned() {
        let recs: Vec<ValueRecord> = [(-1, 2), (-1, 4), (0, 1), (1, 8)]
            .iter()
            .enumerate()
            .map(|(i, &(p, q))| ValueRecord { k: vec![i as u32], value: rational_value(p, q), methods: vec!["recurrence"], agree: None })
            .collect();
        let t = aligned_table(&recs);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("(0)  -1/2"));
        assert!(lines[4].contains("1/8"));
        let col = lines[0].find("decimal").unwrap();
        assert!(lines.iter().skip(1).all(|l| l[col..].starts_with(|c: char| c == '-' || c.is_ascii_digit())));
    }

    #[test]
    fn decimal_forms() {
        assert_eq!(decimal(ApproxComplex::new(0.5, 0.0)), "0.5");
        assert_eq!(decimal(ApproxComplex::new(0.5, -1.0)), "0.5-1i");
    }
}

//! Data commands and their renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use genbell::oracle::{normalize, BosonWord, NormalForm};
use genbell::series::{
    bell_r1_hypergeometric, dobinski_diag_form, dobinski_factorial_form, dobinski_gamma_form,
    dobinski_polynomial, family_bell_general, kummer_bell, SeriesValue,
};
use genbell::{Params, Rational};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::table::Table;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Plain,
    Csv,
    Json,
    Oeis,
}

fn join<T: ToString>(values: impl IntoIterator<Item = T>, sep: &str) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn cmd_triangle(
    table: &Table,
    p: Params,
    n_max: u32,
    format: OutputFormat,
) -> genbell::Result<String> {
    if n_max == 0 {
        return Err(genbell::Error::InvalidParams(
            "n_max must be at least 1".into(),
        ));
    }
    let rows = (1..=n_max)
        .map(|n| Ok((n, table.row(p, n)?)))
        .collect::<genbell::Result<Vec<_>>>()?;
    Ok(match format {
        OutputFormat::Plain => {
            let top = if p.lower() == 1 {
                "n".to_string()
            } else {
                format!("{}n", p.lower())
            };
            let mut out = format!(
                "# S_{{{},{}}}(n,k), row n lists k = {}..{top}\n",
                p.r(),
                p.s(),
                p.lower()
            );
            for (_, row) in &rows {
                out += &join(row.iter().map(|(_, v)| v), " ");
                out.push('\n');
            }
            out
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            for (n, row) in &rows {
                for (k, v) in row {
                    let _ = writeln!(out, "{n},{k},{v}");
                }
            }
            out
        }
        OutputFormat::Oeis => {
            join(
                rows.iter().flat_map(|(_, row)| row.iter().map(|(_, v)| v)),
                ", ",
            ) + "\n"
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(n, row)| {
                    let entries: Map<String, Value> = row
                        .iter()
                        .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
                        .collect();
                    json!({ "n": n, "entries": entries })
                })
                .collect();
            pretty(&json!({ "r": p.r(), "s": p.s(), "rows": rows }))
        }
    })
}

pub fn cmd_bell(
    table: &Table,
    p: Params,
    n_max: u32,
    format: OutputFormat,
) -> genbell::Result<String> {
    let values = (0..=n_max)
        .map(|n| table.bell(p, n))
        .collect::<genbell::Result<Vec<BigInt>>>()?;
    Ok(match format {
        OutputFormat::Plain => {
            let mut out = String::new();
            for (n, v) in values.iter().enumerate() {
                let _ = writeln!(out, "{n} {v}");
            }
            out
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            for (n, v) in values.iter().enumerate() {
                let _ = writeln!(out, "{n},{v}");
            }
            out
        }
        OutputFormat::Oeis => join(&values, ", ") + "\n",
        OutputFormat::Json => pretty(&json!({
            "r": p.r(),
            "s": p.s(),
            "values": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })),
    })
}

pub fn cmd_normalize(word: &str, format: OutputFormat) -> genbell::Result<String> {
    let w: BosonWord = word.parse()?;
    let nf: NormalForm = normalize(&w)?;
    Ok(match format {
        OutputFormat::Plain => format!("{nf}\n"),
        OutputFormat::Csv => {
            let mut out = String::new();
            for ((i, j), c) in nf.terms() {
                let _ = writeln!(out, "{i},{j},{c}");
            }
            out
        }
        OutputFormat::Oeis => join(nf.terms().values(), ", ") + "\n",
        OutputFormat::Json => {
            let terms: Vec<Value> = nf
                .terms()
                .iter()
                .map(|((i, j), c)| json!({ "i": i, "j": j, "coeff": c.to_string() }))
                .collect();
            pretty(&json!({ "word": w.to_string(), "terms": terms }))
        }
    })
}

pub fn cmd_poly(
    table: &Table,
    p: Params,
    n: u32,
    t: &Rational,
    format: OutputFormat,
) -> genbell::Result<String> {
    let v = table.bell_poly(p, n, t)?;
    Ok(match format {
        OutputFormat::Json => pretty(&json!({
            "r": p.r(), "s": p.s(), "n": n, "t": t.to_string(), "value": v.to_string(),
        })),
        OutputFormat::Csv => format!("{},{},{},{},{}\n", p.r(), p.s(), n, t, v),
        OutputFormat::Plain | OutputFormat::Oeis => format!("{v}\n"),
    })
}

/// Series representations available to `series`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesForm {
    /// `e^{-t} sum_k (t^k/k!) prod_j (k + (j-1)(r-s))_s`
    Dobinski,
    /// Gamma-ratio Dobinski form, `r > s`
    Gamma,
    /// Factorial-product Dobinski form, `r >= s`
    Factorial,
    /// Diagonal Dobinski form, `r = s`
    Diag,
    /// Confluent hypergeometric value of `B_{2s,s}(n)`, needs `r = 2s`
    Kummer,
    /// Generalized hypergeometric value of `B_{pr+p,pr}(n)`, needs `s` a multiple of `r - s`
    Family,
    /// Hypergeometric combination for `B_{r,1}(n)`, `2 <= r <= 4`
    Hyper,
}

fn form_value(
    form: SeriesForm,
    p: Params,
    n: u32,
    t: &Rational,
    prec: u32,
) -> genbell::Result<SeriesValue> {
    let (r, s) = (p.r(), p.s());
    let mismatch = |what: &str| genbell::Error::InvalidParams(format!("{what} (got r={r}, s={s})"));
    if !t.is_one() && form != SeriesForm::Dobinski {
        return Err(genbell::Error::InvalidParams(
            "only the dobinski form takes --t".into(),
        ));
    }
    match form {
        SeriesForm::Dobinski => dobinski_polynomial(p, n, t, prec),
        SeriesForm::Gamma => dobinski_gamma_form(p, n, prec),
        SeriesForm::Factorial => dobinski_factorial_form(p, n, prec),
        SeriesForm::Diag if r == s => dobinski_diag_form(r, n, prec),
        SeriesForm::Diag => Err(mismatch("the diagonal form needs r = s")),
        SeriesForm::Kummer if r == 2 * s => kummer_bell(s, n, prec),
        SeriesForm::Kummer => Err(mismatch("the Kummer form needs r = 2s")),
        SeriesForm::Family if r > s && s % (r - s) == 0 => {
            family_bell_general(r - s, s / (r - s), n, prec)
        }
        SeriesForm::Family => Err(mismatch("the family form needs r = pq + p, s = pq")),
        SeriesForm::Hyper if s == 1 => bell_r1_hypergeometric(r, n, prec),
        SeriesForm::Hyper => Err(mismatch("the hypergeometric combination needs s = 1")),
    }
}

pub fn cmd_series(
    table: &Table,
    form: SeriesForm,
    p: Params,
    n: u32,
    t: &Rational,
    prec: u32,
    format: OutputFormat,
) -> genbell::Result<String> {
    let v = form_value(form, p, n, t, prec)?;
    let exact = table.bell_poly(p, n, t)?;
    let contains = v.contains(&exact);
    let digits = (prec as f64 * std::f64::consts::LOG10_2) as usize;
    Ok(match format {
        OutputFormat::Json => pretty(&json!({
            "form": format!("{form:?}").to_lowercase(),
            "r": p.r(), "s": p.s(), "n": n, "t": t.to_string(),
            "value": v.value.to_decimal_string(digits),
            "tail_bound": v.tail_bound.to_decimal_string(6),
            "terms_used": v.terms_used,
            "precision_bits": v.precision_bits,
            "exact": exact.to_string(),
            "contains_exact": contains,
        })),
        OutputFormat::Csv => format!(
            "{},{},{},{},{},{}\n",
            v.value.to_decimal_string(digits),
            v.tail_bound.to_decimal_string(6),
            v.terms_used,
            v.precision_bits,
            exact,
            contains
        ),
        OutputFormat::Plain | OutputFormat::Oeis => format!(
            "value      {}\ntail bound {}\nterms      {}\nexact      {}\ncontains   {}\n",
            v.value.to_decimal_string(digits),
            v.tail_bound.to_decimal_string(6),
            v.terms_used,
            exact,
            if contains { "yes" } else { "no" }
        ),
    })
}

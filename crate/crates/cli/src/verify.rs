//! Cross-route verification suites.
//!
//! Every suite reads the triangle through a [`Table`] and compares it with a
//! route that does not go through the table, so a corrupted entry inside the
//! suite's bounds makes at least one check fail.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use genbell::exact::{factorial, falling_factorial_int, rat, ratio, rational_pow};
use genbell::fock::{expectation_power_report, relative_error, stability_tolerance};
use genbell::oracle::{
    extract_anti_stirling_row, extract_stirling_row, normalize, BosonWord, Normalizer,
    RewriteStrategy,
};
use genbell::series::{
    bell_r1_hypergeometric, coherent_egf_diag_series, dobinski_bell, dobinski_diag_form,
    dobinski_factorial_form, dobinski_gamma_form, dobinski_polynomial, egf_bell_r1_series,
    egf_stirling_diag_series, egf_stirling_r1_series, family_bell, family_bell_general,
    hgf_compare, hgf_default_lambda, kummer_bell, laguerre, HgfFamily, HgfMode, SeriesValue,
};
use genbell::stirling::{
    bell_diag_from_classical, bell_recurrence_r1, connection_identity_sides,
    stirling_diag_recurrence, stirling_diffop, stirling_explicit,
};
use genbell::{BigFloat, Params, PowerSeries, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracle,
    Symmetry,
    Anti,
    Dobinski,
    Laguerre,
    Kummer,
    Family,
    Egf,
    Hgf,
    Fock,
    Recurrence,
    Connection,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Symmetry => "symmetry",
            Suite::Anti => "anti",
            Suite::Dobinski => "dobinski",
            Suite::Laguerre => "laguerre",
            Suite::Kummer => "kummer",
            Suite::Family => "family",
            Suite::Egf => "egf",
            Suite::Hgf => "hgf",
            Suite::Fock => "fock",
            Suite::Recurrence => "recurrence",
            Suite::Connection => "connection",
        }
    }

    /// Default `(rmax, nmax)` when the flags are absent.
    pub fn default_bounds(self) -> (u32, u32) {
        match self {
            Suite::Oracle | Suite::Dobinski | Suite::Connection => (3, 4),
            Suite::Symmetry | Suite::Anti | Suite::Family | Suite::Fock => (3, 3),
            Suite::Laguerre => (2, 20),
            Suite::Kummer => (2, 4),
            Suite::Egf => (3, 6),
            Suite::Hgf => (2, 12),
            Suite::Recurrence => (3, 8),
        }
    }

    pub fn all() -> &'static [Suite] {
        &[
            Suite::Oracle,
            Suite::Symmetry,
            Suite::Anti,
            Suite::Dobinski,
            Suite::Laguerre,
            Suite::Kummer,
            Suite::Family,
            Suite::Egf,
            Suite::Hgf,
            Suite::Fock,
            Suite::Recurrence,
            Suite::Connection,
        ]
    }
}

#[derive(Clone, Debug)]
pub struct Bounds {
    pub rmax: Option<u32>,
    pub nmax: Option<u32>,
    /// egf truncation order.
    pub kmax: usize,
    pub dim: usize,
    pub prec: u32,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            rmax: None,
            nmax: None,
            kmax: 6,
            dim: 128,
            prec: 256,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub identity: String,
    pub case: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render_plain(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status}  {}  [{}]", c.identity, c.case);
            if !c.passed && !c.detail.is_empty() {
                let _ = write!(out, "  {}", c.detail);
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{}: {} checks, {} failed => {}",
            self.suite.name(),
            self.checks.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        );
        out
    }
}

struct Recorder<'a> {
    table: &'a Table,
    bounds: &'a Bounds,
    rmax: u32,
    nmax: u32,
    checks: Vec<Check>,
}

type Outcome = genbell::Result<Option<String>>;

impl Recorder<'_> {
    /// `Ok(None)` passes, `Ok(Some(detail))` fails with a counterexample, and
    /// a library error fails with the error text.
    fn check(&mut self, identity: &str, case: String, outcome: Outcome) {
        let (passed, detail) = match outcome {
            Ok(None) => (true, String::new()),
            Ok(Some(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check {
            identity: identity.to_string(),
            case,
            passed,
            detail,
        });
    }

    fn pairs(&self) -> Vec<Params> {
        let mut out = Vec::new();
        for r in 1..=self.rmax {
            for s in 1..=self.rmax {
                out.push(Params::new(r, s).expect("positive"));
            }
        }
        out
    }
}

fn p(r: u32, s: u32) -> Params {
    Params::new(r, s).expect("positive")
}

fn case(params: Params, n: u32) -> String {
    format!("r={} s={} n={}", params.r(), params.s(), n)
}

/// First `k` where the two rows disagree, as a counterexample string.
fn compare_rows(table: &[(u32, BigInt)], other: &BTreeMap<u32, BigInt>) -> Option<String> {
    let mut keys: Vec<u32> = table
        .iter()
        .map(|(k, _)| *k)
        .chain(other.keys().copied())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let lookup: BTreeMap<u32, &BigInt> = table.iter().map(|(k, v)| (*k, v)).collect();
    let zero = BigInt::zero();
    for k in keys {
        let a = lookup.get(&k).copied().unwrap_or(&zero);
        let b = other.get(&k).unwrap_or(&zero);
        if a != b {
            return Some(format!("k={k}: table {a} vs route {b}"));
        }
    }
    None
}

fn equal<T: PartialEq + std::fmt::Display>(table: &T, route: &T) -> Option<String> {
    (table != route).then(|| format!("table {table} vs route {route}"))
}

fn brackets(v: &SeriesValue, target: &Rational) -> Option<String> {
    (!v.contains(target)).then(|| {
        format!(
            "interval {} +/- {} misses {target}",
            v.value.to_decimal_string(40),
            v.tail_bound.to_decimal_string(6)
        )
    })
}

fn egf_mismatch(
    series: &PowerSeries,
    order: usize,
    value: impl Fn(u32) -> genbell::Result<BigInt>,
) -> Outcome {
    for n in 0..=order {
        let got = series.coeff(n) * Rational::from_integer(factorial(n as u64));
        let want = Rational::from_integer(value(n as u32)?);
        if got != want {
            return Ok(Some(format!("n={n}: table {want} vs n![x^n] {got}")));
        }
    }
    Ok(None)
}

pub fn run_suite(suite: Suite, bounds: &Bounds, table: &Table) -> Report {
    let (rmax, nmax) = suite.default_bounds();
    let mut rec = Recorder {
        table,
        bounds,
        rmax: bounds.rmax.unwrap_or(rmax),
        nmax: bounds.nmax.unwrap_or(nmax),
        checks: Vec::new(),
    };
    match suite {
        Suite::Oracle => oracle(&mut rec),
        Suite::Symmetry => symmetry(&mut rec),
        Suite::Anti => anti(&mut rec),
        Suite::Dobinski => dobinski(&mut rec),
        Suite::Laguerre => laguerre_suite(&mut rec),
        Suite::Kummer => kummer(&mut rec),
        Suite::Family => family(&mut rec),
        Suite::Egf => egf(&mut rec),
        Suite::Hgf => hgf(&mut rec),
        Suite::Fock => fock(&mut rec),
        Suite::Recurrence => recurrence(&mut rec),
        Suite::Connection => connection(&mut rec),
    }
    let passed = rec.checks.iter().all(|c| c.passed);
    Report {
        suite,
        passed,
        checks: rec.checks,
    }
}

fn oracle(rec: &mut Recorder<'_>) {
    let seeded = Normalizer::with_strategy(RewriteStrategy::Seeded(rec.bounds.seed));
    for params in rec.pairs() {
        for n in 1..=rec.nmax {
            let table = rec.table;
            rec.check(
                "normal ordering of [(a†)^r a^s]^n",
                case(params, n),
                (|| {
                    Ok(compare_rows(
                        &table.row(params, n)?,
                        &extract_stirling_row(params, n)?,
                    ))
                })(),
            );
            rec.check(
                "rewrite order independence",
                format!("{} seed={}", case(params, n), rec.bounds.seed),
                (|| {
                    let w = BosonWord::power(params, n);
                    Ok(equal(&normalize(&w)?, &seeded.normalize(&w)?))
                })(),
            );
            if params.r() < params.s() {
                continue;
            }
            let route = |f: fn(Params, u32, u32) -> genbell::Result<BigInt>| -> genbell::Result<BTreeMap<u32, BigInt>> {
                params.band(n).map(|k| Ok((k, f(params, n, k)?))).collect()
            };
            rec.check(
                "alternating binomial sum",
                case(params, n),
                (|| {
                    Ok(compare_rows(
                        &table.row(params, n)?,
                        &route(stirling_explicit)?,
                    ))
                })(),
            );
            rec.check(
                "differential operator expansion",
                case(params, n),
                (|| {
                    Ok(compare_rows(
                        &table.row(params, n)?,
                        &route(stirling_diffop)?,
                    ))
                })(),
            );
            if params.is_diagonal() {
                rec.check(
                    "diagonal triangle recurrence",
                    case(params, n),
                    (|| {
                        let tri = stirling_diag_recurrence(params.r(), n)?;
                        Ok(compare_rows(
                            &table.row(params, n)?,
                            &tri.row(n).into_iter().collect(),
                        ))
                    })(),
                );
            }
        }
    }
}

fn symmetry(rec: &mut Recorder<'_>) {
    for params in rec.pairs() {
        for n in 1..=rec.nmax {
            let table = rec.table;
            rec.check(
                "S_{r,s} = S_{s,r} against the swapped word",
                case(params, n),
                (|| {
                    Ok(compare_rows(
                        &table.row(params, n)?,
                        &extract_stirling_row(params.swapped(), n)?,
                    ))
                })(),
            );
        }
    }
}

fn anti(rec: &mut Recorder<'_>) {
    for params in rec.pairs() {
        let upper = if params.r() >= params.s() {
            params
        } else {
            params.swapped()
        };
        for n in 1..=rec.nmax {
            let table = rec.table;
            rec.check(
                "anti-normal ordering of [a^s (a†)^r]^n equals S(n+1, k+s)",
                case(params, n),
                (|| {
                    let shifted = (0..=n * upper.s())
                        .map(|k| Ok((k, table.entry(upper, n + 1, k + upper.s())?)))
                        .collect::<genbell::Result<Vec<_>>>()?;
                    Ok(compare_rows(
                        &shifted,
                        &extract_anti_stirling_row(params, n)?,
                    ))
                })(),
            );
        }
    }
}

fn dobinski(rec: &mut Recorder<'_>) {
    let prec = rec.bounds.prec;
    for params in rec.pairs() {
        for n in 1..=rec.nmax {
            let table = rec.table;
            let target = || -> genbell::Result<Rational> {
                Ok(Rational::from_integer(table.bell(params, n)?))
            };
            rec.check(
                "Dobinski series at t = 1",
                case(params, n),
                (|| Ok(brackets(&dobinski_bell(params, n, prec)?, &target()?)))(),
            );
            if params.r() > params.s() {
                rec.check(
                    "Dobinski series, Gamma-ratio form",
                    case(params, n),
                    (|| Ok(brackets(&dobinski_gamma_form(params, n, prec)?, &target()?)))(),
                );
            }
            if params.r() >= params.s() {
                rec.check(
                    "Dobinski series, factorial-product form",
                    case(params, n),
                    (|| {
                        Ok(brackets(
                            &dobinski_factorial_form(params, n, prec)?,
                            &target()?,
                        ))
                    })(),
                );
            }
            if params.is_diagonal() {
                rec.check(
                    "Dobinski series, diagonal form",
                    case(params, n),
                    (|| {
                        Ok(brackets(
                            &dobinski_diag_form(params.r(), n, prec)?,
                            &target()?,
                        ))
                    })(),
                );
            }
            for t in [ratio(1, 2), rat(1), rat(2)] {
                rec.check(
                    "Dobinski series for the Bell polynomial",
                    format!("{} t={t}", case(params, n)),
                    (|| {
                        Ok(brackets(
                            &dobinski_polynomial(params, n, &t, prec)?,
                            &table.bell_poly(params, n, &t)?,
                        ))
                    })(),
                );
            }
        }
    }
}

fn laguerre_suite(rec: &mut Recorder<'_>) {
    let params = p(2, 1);
    for n in 1..=rec.nmax {
        let table = rec.table;
        rec.check(
            "B_{2,1}(n) = (n-1)! L^(1)_{n-1}(-1)",
            case(params, n),
            (|| {
                let lhs = Rational::from_integer(factorial(n as u64 - 1))
                    * laguerre(n - 1, &rat(1), &rat(-1));
                Ok(equal(&Rational::from_integer(table.bell(params, n)?), &lhs))
            })(),
        );
    }
}

fn kummer(rec: &mut Recorder<'_>) {
    let prec = rec.bounds.prec;
    for r in 1..=rec.rmax {
        let params = p(2 * r, r);
        for n in 1..=rec.nmax {
            let table = rec.table;
            rec.check(
                "B_{2r,r}(n) as a confluent hypergeometric value",
                case(params, n),
                (|| {
                    Ok(brackets(
                        &kummer_bell(r, n, prec)?,
                        &Rational::from_integer(table.bell(params, n)?),
                    ))
                })(),
            );
        }
    }
}

fn family(rec: &mut Recorder<'_>) {
    let prec = rec.bounds.prec;
    for fp in 1..=2u32 {
        for fr in 1..=rec.rmax.min(2) {
            let params = p(fp * fr + fp, fp * fr);
            for n in 1..=rec.nmax {
                let table = rec.table;
                let target = || -> genbell::Result<Rational> {
                    Ok(Rational::from_integer(table.bell(params, n)?))
                };
                rec.check(
                    "B_{pr+p,pr}(n) as a generalized hypergeometric value",
                    format!("p={fp} {}", case(params, n)),
                    (|| Ok(brackets(&family_bell_general(fp, fr, n, prec)?, &target()?)))(),
                );
                if fp == 1 {
                    rec.check(
                        "B_{r+1,r}(n), factorial prefactor (p = 1)",
                        case(params, n),
                        (|| Ok(brackets(&family_bell(fp, fr, n, prec)?, &target()?)))(),
                    );
                }
            }
        }
    }
    for r in 2..=rec.rmax.clamp(2, 4) {
        let params = p(r, 1);
        for n in 1..=rec.nmax {
            let table = rec.table;
            rec.check(
                "B_{r,1}(n) as a combination of hypergeometric values",
                case(params, n),
                (|| {
                    Ok(brackets(
                        &bell_r1_hypergeometric(r, n, prec)?,
                        &Rational::from_integer(table.bell(params, n)?),
                    ))
                })(),
            );
        }
    }
}

fn egf(rec: &mut Recorder<'_>) {
    let order = rec.bounds.kmax;
    let table = rec.table;
    for r in 1..=rec.rmax {
        rec.check(
            "B_{r,1} exponential generating function",
            format!("r={r} K={order}"),
            (|| {
                egf_mismatch(&egf_bell_r1_series(r, order)?, order, |n| {
                    table.bell(p(r, 1), n)
                })
            })(),
        );
        if r >= 2 {
            for k in 1..=4 {
                rec.check(
                    "S_{r,1}(n,k) exponential generating function",
                    format!("r={r} k={k} K={order}"),
                    (|| {
                        egf_mismatch(&egf_stirling_r1_series(r, k, order)?, order, |n| {
                            table.entry(p(r, 1), n, k)
                        })
                    })(),
                );
            }
        }
    }
    for r in 1..=rec.rmax.min(2) {
        for k in r..=4 {
            rec.check(
                "S_{r,r}(n,k) exponential generating function",
                format!("r={r} k={k} K={order}"),
                (|| {
                    egf_mismatch(&egf_stirling_diag_series(r, k, order)?, order, |n| {
                        table.entry(p(r, r), n, k)
                    })
                })(),
            );
        }
        rec.check(
            "coherent-state generating function of B_{r,r}",
            format!("r={r} K={order}"),
            (|| {
                let series = coherent_egf_diag_series(r, order, order as u32 * r)?;
                egf_mismatch(&series, order, |n| table.bell(p(r, r), n))
            })(),
        );
    }
}

/// Absolute tolerance on the combined hgf truncation bounds.
pub const HGF_BOUND: f64 = 1e-15;

fn hgf(rec: &mut Recorder<'_>) {
    let prec = rec.bounds.prec;
    let n_max = rec.nmax;
    for (r, s) in [(3, 2), (4, 2)] {
        let table = rec.table;
        let label = format!("r={r} s={s} N={n_max} lambda=R/5");
        let report = hgf_default_lambda(r, s)
            .and_then(|l| hgf_compare(r, s, &l, n_max, HgfMode::Polynomial, prec));
        let report = match report {
            Ok(rep) => rep,
            Err(e) => {
                rec.check("hypergeometric generating function", label, Err(e));
                continue;
            }
        };
        rec.check(
            "hypergeometric generating function: double sum vs direct sum",
            label.clone(),
            (|| {
                let family = HgfFamily::new(r, s)?;
                let t = family.t() as usize + 1;
                let mut direct = Rational::zero();
                for n in 0..=n_max {
                    let denom = num_traits::pow(factorial(n as u64), t);
                    direct += Rational::new(table.bell(family.params(), n)?, denom)
                        * rational_pow(&report.lambda, n as u64);
                }
                let double = &report.double_sum;
                let diff = (double.value.to_rational() - &direct).abs();
                let bound = report.combined_bound.to_rational() + double.rounding_allowance();
                Ok((diff > bound).then(|| {
                    format!(
                        "difference {} exceeds bound {}",
                        BigFloat::from_rational(&diff, 64).to_decimal_string(6),
                        BigFloat::from_rational(&bound, 64).to_decimal_string(6)
                    )
                }))
            })(),
        );
        rec.check(
            "hypergeometric generating function: combined bound <= 1e-15",
            label,
            Ok((report.combined_bound.to_f64() > HGF_BOUND)
                .then(|| format!("bound {}", report.combined_bound.to_decimal_string(6)))),
        );
    }
}

fn fock(rec: &mut Recorder<'_>) {
    let (prec, dim) = (rec.bounds.prec, rec.bounds.dim);
    let tolerance = stability_tolerance(prec);
    let pairs: Vec<Params> = [(1, 1), (2, 1), (2, 2), (1, 2)]
        .into_iter()
        .filter(|&(r, s)| r <= rec.rmax && s <= rec.rmax)
        .map(|(r, s)| p(r, s))
        .collect();
    let table = rec.table;
    let expectation = |params: Params, n: u32, z: &Rational| -> Outcome {
        let offset = (params.r() as i64 - params.s() as i64).unsigned_abs() * n as u64;
        let exact = rational_pow(z, offset) * table.bell_poly(params, n, &(z * z))?;
        let report =
            expectation_power_report(params, n, &BigFloat::from_rational(z, prec), dim, prec)?;
        let err = relative_error(&report.value, &exact);
        Ok((err > tolerance).then(|| {
            format!(
                "value {} vs exact {exact}, relative error {}",
                report.value.to_decimal_string(40),
                err.to_decimal_string(6)
            )
        }))
    };
    for &params in &pairs {
        for n in 1..=rec.nmax {
            for z in [ratio(1, 2), rat(1)] {
                rec.check(
                    "<z|[(a†)^r a^s]^n|z> on a truncated Fock space",
                    format!("{} z={z} D={dim}", case(params, n)),
                    expectation(params, n, &z),
                );
            }
        }
    }
    if pairs.contains(&p(1, 1)) {
        for n in rec.nmax + 1..=2 * rec.nmax {
            rec.check(
                "<1|(a†a)^n|1> = B_{1,1}(n)",
                format!("n={n} D={dim}"),
                expectation(p(1, 1), n, &rat(1)),
            );
        }
    }
}

fn recurrence(rec: &mut Recorder<'_>) {
    let table = rec.table;
    for r in 1..=rec.rmax {
        rec.check(
            "B_{r,1} recurrence against row sums",
            format!("r={r} n<={}", rec.nmax),
            (|| {
                let seq = bell_recurrence_r1(r, rec.nmax)?.values;
                for (n, v) in seq.iter().enumerate() {
                    if let Some(d) = equal(&table.bell(p(r, 1), n as u32)?, v) {
                        return Ok(Some(format!("n={n}: {d}")));
                    }
                }
                Ok(None)
            })(),
        );
    }
    let nmax = rec.nmax;
    rec.check(
        "S(n+1,k) = k S(n,k) + S(n,k-1)",
        format!("r=1 s=1 n<={nmax}"),
        (|| {
            let classical = p(1, 1);
            for n in 1..nmax {
                for k in 1..=n + 1 {
                    let lhs = table.entry(classical, n + 1, k)?;
                    let rhs =
                        table.entry(classical, n, k)? * k + table.entry(classical, n, k - 1)?;
                    if let Some(d) = equal(&lhs, &rhs) {
                        return Ok(Some(format!("n={n} k={k}: {d}")));
                    }
                }
            }
            Ok(None)
        })(),
    );
    rec.check(
        "B(n+1) = sum_k C(n,k) B(k)",
        format!("r=1 s=1 n<={nmax}"),
        (|| {
            let classical = p(1, 1);
            for n in 0..nmax as u64 {
                let next: BigInt = (0..=n)
                    .map(|k| {
                        Ok(genbell::exact::binomial(n, k as i64)
                            * table.bell(classical, k as u32)?)
                    })
                    .sum::<genbell::Result<BigInt>>()?;
                if let Some(d) = equal(&table.bell(classical, n as u32 + 1)?, &next) {
                    return Ok(Some(format!("n={}: {d}", n + 1)));
                }
            }
            Ok(None)
        })(),
    );
    for n in 1..=nmax {
        rec.check(
            "B_{2,2}(n) = sum_k C(n-1,k) B_{1,1}(n+k)",
            format!("n={n}"),
            (|| {
                Ok(equal(
                    &table.bell(p(2, 2), n)?,
                    &bell_diag_from_classical(n)?,
                ))
            })(),
        );
    }
}

fn connection(rec: &mut Recorder<'_>) {
    for params in rec.pairs().into_iter().filter(|q| q.r() >= q.s()) {
        for n in 1..=rec.nmax {
            let table = rec.table;
            rec.check(
                "prod_j (x + (j-1)(r-s))_s = sum_k S(n,k) (x)_k",
                case(params, n),
                (|| {
                    for x in 0..=(n * params.r()) as i64 {
                        let (lhs, _) = connection_identity_sides(params, n, x)?;
                        let rhs: BigInt = table
                            .row(params, n)?
                            .into_iter()
                            .map(|(k, v)| v * falling_factorial_int(&BigInt::from(x), k))
                            .sum();
                        if let Some(d) = equal(&rhs, &lhs) {
                            return Ok(Some(format!("x={x}: {d}")));
                        }
                    }
                    Ok(None)
                })(),
            );
        }
    }
}

//! Normal ordering of boson words by brute-force rewriting.
//!
//! This is the ground truth the closed forms are checked against: a word over
//! `{a, a†}` is expanded by repeatedly replacing one adjacent `a a†` by
//! `a† a + 1` until no such pair remains. Nothing here knows about Stirling
//! numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::exact::{rational_pow, Rational};
use crate::stirling::Params;

/// Default cap on word length.
pub const DEFAULT_MAX_LETTERS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// `a†`, written `A`.
    Create,
    /// `a`, written `a`.
    Annihilate,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BosonWord {
    letters: Vec<Letter>,
}

impl BosonWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        BosonWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `#a† - #a`.
    pub fn offset(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Create => 1,
                Letter::Annihilate => -1,
            })
            .sum()
    }

    /// `n` copies of `x^first y^second` concatenated.
    fn repeated(first: (Letter, u32), second: (Letter, u32), n: u32) -> Self {
        let mut letters = Vec::with_capacity(((first.1 + second.1) * n) as usize);
        for _ in 0..n {
            letters.extend(std::iter::repeat_n(first.0, first.1 as usize));
            letters.extend(std::iter::repeat_n(second.0, second.1 as usize));
        }
        BosonWord { letters }
    }

    /// `[(a†)^r a^s]^n`.
    pub fn power(p: Params, n: u32) -> Self {
        Self::repeated((Letter::Create, p.r()), (Letter::Annihilate, p.s()), n)
    }

    /// `[a^s (a†)^r]^n`.
    pub fn anti_power(p: Params, n: u32) -> Self {
        Self::repeated((Letter::Annihilate, p.s()), (Letter::Create, p.r()), n)
    }

    /// The Hermitian conjugate: reversed, with `a` and `a†` exchanged.
    pub fn conjugate(&self) -> Self {
        BosonWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::Create => Letter::Annihilate,
                    Letter::Annihilate => Letter::Create,
                })
                .collect(),
        }
    }
}

impl FromStr for BosonWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'A' => Ok(Letter::Create),
                'a' => Ok(Letter::Annihilate),
                other => Err(Error::BadLetter(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(BosonWord::new)
    }
}

impl fmt::Display for BosonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::Create => "A",
                Letter::Annihilate => "a",
            })?;
        }
        Ok(())
    }
}

/// `sum c_{ij} (a†)^i a^j`, keyed by `(i, j)`, zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalForm {
    terms: BTreeMap<(usize, usize), BigInt>,
}

impl NormalForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, i: usize, j: usize, coeff: &BigInt) {
        let entry = self.terms.entry((i, j)).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.terms
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((i, j), c) in &self.terms {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "({i},{j}):{c}")?;
        }
        Ok(())
    }
}

/// `sum c (a^j)(a†)^i`, keyed by `(j, i)`: all annihilators on the left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AntiNormalForm {
    terms: BTreeMap<(usize, usize), BigInt>,
}

impl AntiNormalForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, j: usize, i: usize, coeff: &BigInt) {
        let entry = self.terms.entry((j, i)).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(j, i));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.terms
    }

    /// Normal-orders every antinormal monomial and collects the result.
    pub fn to_normal(&self, normalizer: &Normalizer) -> Result<NormalForm> {
        let mut out = NormalForm::new();
        for ((j, i), c) in &self.terms {
            let mut letters = vec![Letter::Annihilate; *j];
            letters.extend(std::iter::repeat_n(Letter::Create, *i));
            for ((ni, nj), nc) in normalizer.normalize(&BosonWord::new(letters))?.terms() {
                out.add_term(*ni, *nj, &(nc * c));
            }
        }
        Ok(out)
    }
}

/// Which `a a†` pair to rewrite when several are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    Leftmost,
    Rightmost,
    /// Uniformly random choice from a seeded generator.
    Seeded(u64),
}

#[derive(Clone, Debug)]
pub struct Normalizer {
    pub max_letters: usize,
    pub strategy: RewriteStrategy,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer {
            max_letters: DEFAULT_MAX_LETTERS,
            strategy: RewriteStrategy::Leftmost,
        }
    }
}

impl Normalizer {
    pub fn with_strategy(strategy: RewriteStrategy) -> Self {
        Normalizer {
            strategy,
            ..Self::default()
        }
    }

    /// Normal form of `w`.
    ///
    /// Works on a multiset of weighted words; identical words merge as soon as
    /// they appear. Each rewrite strictly lowers the number of `(a, a†)`
    /// inversions in both branches, so the loop terminates.
    pub fn normalize(&self, w: &BosonWord) -> Result<NormalForm> {
        if w.len() > self.max_letters {
            return Err(Error::WordTooLong {
                len: w.len(),
                cap: self.max_letters,
            });
        }
        let mut rng = match self.strategy {
            RewriteStrategy::Seeded(seed) => Some(StdRng::seed_from_u64(seed)),
            _ => None,
        };
        let mut pending: BTreeMap<Vec<Letter>, BigInt> = BTreeMap::new();
        pending.insert(w.letters.clone(), BigInt::one());
        let mut result = NormalForm::new();
        while let Some((word, coeff)) = pending.pop_last() {
            if coeff.is_zero() {
                continue;
            }
            let pairs: Vec<usize> = word
                .windows(2)
                .enumerate()
                .filter(|(_, pair)| pair[0] == Letter::Annihilate && pair[1] == Letter::Create)
                .map(|(idx, _)| idx)
                .collect();
            if pairs.is_empty() {
                let creators = word.iter().filter(|&&l| l == Letter::Create).count();
                result.add_term(creators, word.len() - creators, &coeff);
                continue;
            }
            let at = match (&self.strategy, rng.as_mut()) {
                (RewriteStrategy::Leftmost, _) => pairs[0],
                (RewriteStrategy::Rightmost, _) => pairs[pairs.len() - 1],
                (RewriteStrategy::Seeded(_), Some(rng)) => pairs[rng.gen_range(0..pairs.len())],
                (RewriteStrategy::Seeded(_), None) => unreachable!(),
            };
            // a a† -> a† a
            let mut swapped = word.clone();
            swapped.swap(at, at + 1);
            *pending.entry(swapped).or_insert_with(BigInt::zero) += &coeff;
            // a a† -> 1
            let mut contracted = word;
            contracted.drain(at..at + 2);
            *pending.entry(contracted).or_insert_with(BigInt::zero) += &coeff;
        }
        Ok(result)
    }
}

/// Normal form of `w` with the default normalizer.
pub fn normalize(w: &BosonWord) -> Result<NormalForm> {
    Normalizer::default().normalize(w)
}

/// Normal form of `[(a†)^r a^s]^n`.
pub fn power_word(p: Params, n: u32) -> Result<NormalForm> {
    if n == 0 {
        return Err(Error::InvalidParams("power_word needs n >= 1".into()));
    }
    normalize(&BosonWord::power(p, n))
}

/// Reads a row of coefficients from a normal form whose terms all share the
/// offset `i - j = offset`. Positive offsets are factored out on the left as
/// `(a†)^offset` and index by `j`; negative ones on the right as `a^|offset|`
/// and index by `i`.
fn read_row(nf: &NormalForm, offset: i64) -> Result<BTreeMap<u32, BigInt>> {
    let mut row = BTreeMap::new();
    for ((i, j), c) in nf.terms() {
        let actual = *i as i64 - *j as i64;
        if actual != offset {
            return Err(Error::OracleStructure {
                i: *i,
                j: *j,
                detail: format!("expected i - j = {offset}, found {actual}"),
            });
        }
        let k = if offset >= 0 { *j } else { *i };
        row.insert(k as u32, c.clone());
    }
    Ok(row)
}

/// `k -> S_{r,s}(n,k)` read off the normal form of `[(a†)^r a^s]^n`.
pub fn extract_stirling_row(p: Params, n: u32) -> Result<BTreeMap<u32, BigInt>> {
    let nf = power_word(p, n)?;
    read_row(&nf, n as i64 * (p.r() as i64 - p.s() as i64))
}

/// `k -> ~S_{s,r}(n,k)` read off the normal form of `[a^s (a†)^r]^n`.
///
/// For `r >= s` the factor `(a†)^{n(r-s)}` is pulled out on the left; for
/// `r < s` the factor `a^{n(s-r)}` is pulled out on the right.
pub fn extract_anti_stirling_row(p: Params, n: u32) -> Result<BTreeMap<u32, BigInt>> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "extract_anti_stirling_row needs n >= 1".into(),
        ));
    }
    let nf = normalize(&BosonWord::anti_power(p, n))?;
    read_row(&nf, n as i64 * (p.r() as i64 - p.s() as i64))
}

/// `<z| N |z>` for real `z`: `sum c_{ij} z^{i+j}`.
pub fn coherent_expectation_exact(nf: &NormalForm, z: &Rational) -> Rational {
    nf.terms()
        .iter()
        .map(|((i, j), c)| Rational::from_integer(c.clone()) * rational_pow(z, (i + j) as u64))
        .sum()
}

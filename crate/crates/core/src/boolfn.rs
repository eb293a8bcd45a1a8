//! Partial Boolean functions `f: X -> {0,1}` with `X ⊆ {0,1}^n`, stored as an
//! explicit domain table.
//!
//! The domain order is the canonical index order used everywhere else
//! (SDP rows, vector sets, reports). Bit positions are 1-based in every
//! user-facing value, internal storage is 0-based.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An n-bit input string. `bits[0]` is `x_1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Big-endian encoding of the low `n` bits of `value`: the most
    /// significant of those bits becomes `x_1`.
    pub fn from_index(value: u64, n: usize) -> Self {
        Self((0..n).map(|k| (value >> (n - 1 - k)) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit at 0-based position `i`.
    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn hamming(&self, other: &BitString) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidFunction(format!(
                    "invalid bit character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

/// Positions (1-based) where `x` and `y` differ.
pub fn differing_indices(x: &BitString, y: &BitString) -> Result<Vec<usize>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.0
        .iter()
        .zip(&y.0)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i + 1)
        .collect())
}

/// A partial Boolean function given by its truth table on the domain `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction", into = "RawFunction")]
pub struct BooleanFunction {
    n: usize,
    domain: Vec<BitString>,
    values: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RawFunction {
    n: usize,
    domain: Vec<BitString>,
    values: Vec<u8>,
}

impl TryFrom<RawFunction> for BooleanFunction {
    type Error = Error;

    fn try_from(raw: RawFunction) -> Result<Self> {
        let values = raw
            .values
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidFunction(format!("value {other} outside {{0,1}}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let f = BooleanFunction::new(raw.domain, values)?;
        if f.n != raw.n {
            return Err(Error::InvalidFunction(format!(
                "declared n = {} but strings have length {}",
                raw.n, f.n
            )));
        }
        Ok(f)
    }
}

impl From<BooleanFunction> for RawFunction {
    fn from(f: BooleanFunction) -> Self {
        RawFunction {
            n: f.n,
            values: f.values.iter().map(|&v| v as u8).collect(),
            domain: f.domain,
        }
    }
}

impl BooleanFunction {
    pub fn new(domain: Vec<BitString>, values: Vec<bool>) -> Result<Self> {
        let Some(first) = domain.first() else {
            return Err(Error::InvalidFunction("empty domain".into()));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidFunction("bit strings must be non-empty".into()));
        }
        if values.len() != domain.len() {
            return Err(Error::InvalidFunction(format!(
                "{} values for {} domain elements",
                values.len(),
                domain.len()
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(domain.len());
        for x in &domain {
            if x.len() != n {
                return Err(Error::LengthMismatch(n, x.len()));
            }
            if !seen.insert(x) {
                return Err(Error::InvalidFunction(format!("duplicate domain element {x}")));
            }
        }
        Ok(Self { n, domain, values })
    }

    /// Parses the line format `<bitstring> <0|1>`; blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut domain = Vec::new();
        let mut values = Vec::new();
        let mut width = None;
        let mut seen = std::collections::HashSet::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let mut fields = line.split_whitespace();
            let (Some(bits), Some(value), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(parse_err(format!("expected \"<bitstring> <0|1>\", got {line:?}")));
            };
            let x: BitString = bits.parse().map_err(|e: Error| parse_err(e.to_string()))?;
            if x.is_empty() {
                return Err(parse_err("empty bit string".into()));
            }
            match width {
                None => width = Some(x.len()),
                Some(w) if w != x.len() => {
                    return Err(parse_err(format!(
                        "bit string {x} has length {}, expected {w}",
                        x.len()
                    )))
                }
                _ => {}
            }
            let v = match value {
                "0" => false,
                "1" => true,
                other => return Err(parse_err(format!("value {other:?} outside {{0,1}}"))),
            };
            if !seen.insert(x.clone()) {
                return Err(parse_err(format!("duplicate domain element {x}")));
            }
            domain.push(x);
            values.push(v);
        }
        if domain.is_empty() {
            return Err(Error::InvalidFunction("empty domain".into()));
        }
        Self::new(domain, values)
    }

    /// Inverse of [`BooleanFunction::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, &v) in self.domain.iter().zip(&self.values) {
            out.push_str(&format!("{x} {}\n", v as u8));
        }
        out
    }

    /// Uniformly random domain of `domain_size` distinct strings with fair-coin
    /// labels; labels are redrawn until the function is non-constant.
    pub fn random(n: usize, domain_size: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidParameter(format!("n = {n} must be in 1..=63")));
        }
        let universe = 1u64 << n;
        if domain_size as u64 > universe {
            return Err(Error::DomainTooLarge { n, domain_size });
        }
        if domain_size < 2 {
            return Err(Error::InvalidParameter(
                "a non-constant function needs at least two domain points".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picks: Vec<u64> = index::sample(&mut rng, universe as usize, domain_size)
            .into_iter()
            .map(|k| k as u64)
            .collect();
        picks.sort_unstable();
        let domain: Vec<BitString> = picks.into_iter().map(|k| BitString::from_index(k, n)).collect();
        let values = loop {
            let values: Vec<bool> = (0..domain_size).map(|_| rng.random_bool(0.5)).collect();
            if values.iter().any(|&v| v) && values.iter().any(|&v| !v) {
                break values;
            }
        };
        Self::new(domain, values)
    }

    /// Full-domain function from a predicate on bit strings.
    pub fn from_predicate(n: usize, predicate: impl Fn(&BitString) -> bool) -> Result<Self> {
        if n == 0 || n > 20 {
            return Err(Error::InvalidParameter(format!("full domain needs 1 <= n <= 20, got {n}")));
        }
        let domain: Vec<BitString> = (0..1u64 << n).map(|k| BitString::from_index(k, n)).collect();
        let values = domain.iter().map(&predicate).collect();
        Self::new(domain, values)
    }

    /// OR on `n` bits over the full domain.
    pub fn or(n: usize) -> Result<Self> {
        Self::from_predicate(n, |x| x.bits().iter().any(|&b| b))
    }

    /// The identity on one bit.
    pub fn identity() -> Self {
        Self::from_predicate(1, |x| x.bit(0)).expect("valid")
    }

    pub fn negate(&self) -> Self {
        Self {
            n: self.n,
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| !v).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &[BitString] {
        &self.domain
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn value(&self, idx: usize) -> bool {
        self.values[idx]
    }

    pub fn input(&self, idx: usize) -> &BitString {
        &self.domain[idx]
    }

    /// Domain indices of `f⁻¹(b)` in canonical order.
    pub fn preimage(&self, b: bool) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.values[k] == b).collect()
    }

    pub fn ones(&self) -> Vec<usize> {
        self.preimage(true)
    }

    pub fn zeros(&self) -> Vec<usize> {
        self.preimage(false)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    /// Unordered pairs `(x, y)` of domain indices with `f(x) = 1`, `f(y) = 0`,
    /// ordered by 1-input then 0-input.
    pub fn mixed_pairs(&self) -> Vec<(usize, usize)> {
        let zeros = self.zeros();
        self.ones()
            .into_iter()
            .flat_map(|x| zeros.iter().map(move |&y| (x, y)))
            .collect()
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector of signs, every entry `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Format(format!("sign entry {bad} is not +1 or -1")));
        }
        Ok(SignVector(signs))
    }

    pub fn all_plus(n: usize) -> Self {
        SignVector(vec![1; n])
    }

    /// Decode a bit pattern: bit `n - 1 - i` set means position `i` is `-1`.
    ///
    /// This makes the integer order agree with the lexicographic order on
    /// sign vectors where `+1 < -1`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        SignVector(
            (0..n)
                .map(|i| if (bits >> (n - 1 - i)) & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn to_bits(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &s| (acc << 1) | u64::from(s == -1))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        f64::from(self.0[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|&s| f64::from(s))
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn negated(&self) -> Self {
        SignVector(self.0.iter().map(|s| -s).collect())
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Vec<i8> {
        s.0
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

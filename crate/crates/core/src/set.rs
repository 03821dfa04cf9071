//! Finite sets of positive integers, stored sorted and duplicate-free.
//!
//! The text form is one decimal integer per line, strictly increasing.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    elements: Vec<u64>,
}

impl FiniteSet {
    /// Accepts only a strictly increasing list of positive integers.
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        for (index, &value) in elements.iter().enumerate() {
            if value == 0 || (index > 0 && elements[index - 1] >= value) {
                return Err(Error::InvalidSet { index, value });
            }
        }
        Ok(Self { elements })
    }

    /// Sorts and deduplicates; zero is still rejected.
    pub fn from_unsorted(mut elements: Vec<u64>) -> Result<Self> {
        if let Some(index) = elements.iter().position(|&v| v == 0) {
            return Err(Error::InvalidSet { index, value: 0 });
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { elements })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.first().is_none_or(|&v| v > 0));
        Self { elements }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.elements
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.elements.binary_search(&value).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }

    /// `|{x in self : x <= bound}|`.
    pub fn count_up_to(&self, bound: u64) -> usize {
        self.elements.partition_point(|&v| v <= bound)
    }

    /// Elements `<= bound`.
    pub fn truncate(&self, bound: u64) -> FiniteSet {
        Self {
            elements: self.elements[..self.count_up_to(bound)].to_vec(),
        }
    }

    /// Elements `<= x^{1/root}`, decided exactly as `e^root <= x`.
    pub fn count_up_to_root(&self, x: u64, root: u32) -> usize {
        let cutoff = crate::arith::floor_root_u64(x, root);
        self.count_up_to(cutoff)
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for value in &self.elements {
            writeln!(f, "{value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseSetError {
    #[error("line {line}: not a decimal integer: {text:?}")]
    NotAnInteger { line: usize, text: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: Error },
}

impl FromStr for FiniteSet {
    type Err = ParseSetError;

    /// Blank lines are skipped; every other line must hold one integer.
    fn from_str(text: &str) -> std::result::Result<Self, Self::Err> {
        let mut elements = Vec::new();
        let mut lines = Vec::new();
        for (number, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            let value: u64 = trimmed.parse().map_err(|_| ParseSetError::NotAnInteger {
                line: number + 1,
                text: trimmed.to_string(),
            })?;
            elements.push(value);
            lines.push(number + 1);
        }
        FiniteSet::new(elements).map_err(|source| {
            let line = match source {
                Error::InvalidSet { index, .. } => lines[index],
                _ => 0,
            };
            ParseSetError::Invalid { line, source }
        })
    }
}

//! Words with erasure masks, and their text format.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};

/// A sequence of field symbols together with an erasure mask.
///
/// Erased positions may carry any placeholder value; decoders overwrite them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolWord {
    pub symbols: Vec<Symbol>,
    pub erased: Vec<bool>,
}

impl SymbolWord {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        let erased = vec![false; symbols.len()];
        SymbolWord { symbols, erased }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0; len])
    }

    pub fn with_mask(symbols: Vec<Symbol>, erased: Vec<bool>) -> Result<Self> {
        if symbols.len() != erased.len() {
            return Err(Error::LengthMismatch {
                expected: symbols.len(),
                actual: erased.len(),
            });
        }
        Ok(SymbolWord { symbols, erased })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Marks the given positions as erased and zeroes their placeholders.
    pub fn erase(&mut self, positions: &[usize]) -> Result<()> {
        for &p in positions {
            if p >= self.len() {
                return Err(Error::InvalidParameter(format!(
                    "erasure position {p} out of range for length {}",
                    self.len()
                )));
            }
            self.erased[p] = true;
            self.symbols[p] = 0;
        }
        Ok(())
    }

    pub fn erasure_count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }

    pub fn erased_positions(&self) -> Vec<usize> {
        self.erased
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| e.then_some(i))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        !self.erased.iter().any(|&e| e)
    }

    /// Number of nonzero symbols.
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    /// Parses whitespace-separated integers, with `?` marking an erasure.
    pub fn parse(text: &str, field: &Field) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut erased = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "?" {
                symbols.push(0);
                erased.push(true);
                continue;
            }
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))?;
            if v >= field.q() {
                return Err(Error::Parse(format!("symbol {v} is not in {field}")));
            }
            symbols.push(v as Symbol);
            erased.push(false);
        }
        Ok(SymbolWord { symbols, erased })
    }

    /// Text form with `row_len` symbols per line; erasures print as `?`.
    pub fn format(&self, row_len: usize) -> String {
        let row_len = row_len.max(1);
        let mut out = String::new();
        for (i, (&s, &e)) in self.symbols.iter().zip(&self.erased).enumerate() {
            if i > 0 {
                out.push(if i % row_len == 0 { '\n' } else { ' ' });
            }
            if e {
                out.push('?');
            } else {
                let _ = write!(out, "{s}");
            }
        }
        out.push('\n');
        out
    }
}

/// Parses a comma-separated list of zero-based positions, e.g. `3,17,40`.
pub fn parse_positions(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad erasure index {t:?}")))
        })
        .collect()
}

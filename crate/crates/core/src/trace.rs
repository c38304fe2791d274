//! Address traces, per-bit toggle sets and a row-buffer reference model.
//!
//! Bit index 0 is the leftmost character of a binary line, and the most
//! significant bit of the declared width for hex lines. Transition `i`
//! sits between address `i - 1` and address `i`, so transition indices
//! run from 1 to `len - 1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Input encoding of a trace file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    /// One `0`/`1` string per line; width is inferred from the first line.
    Binary,
    /// One hex literal per line (optional `0x`), with a declared bit width.
    Hex { width: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressTrace {
    width: usize,
    addresses: Vec<Vec<bool>>,
    source: String,
}

impl AddressTrace {
    /// Builds a trace from bit vectors, checking that every address has
    /// `width` bits and that there is at least one address.
    pub fn new(width: usize, addresses: Vec<Vec<bool>>, source: impl Into<String>) -> Result<Self> {
        if addresses.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, address) in addresses.iter().enumerate() {
            if address.len() != width {
                return Err(Error::Format {
                    line: i + 1,
                    expected: width,
                    found: address.len(),
                });
            }
        }
        Ok(Self {
            width,
            addresses,
            source: source.into(),
        })
    }

    /// Parses trace text. Blank lines and lines starting with `#` are skipped;
    /// reported line numbers refer to the original text.
    pub fn parse(input: &str, format: TraceFormat) -> Result<Self> {
        Self::parse_with_source(input, format, "inline")
    }

    pub fn parse_with_source(input: &str, format: TraceFormat, source: &str) -> Result<Self> {
        if let TraceFormat::Hex { width } = format {
            if width == 0 {
                return Err(Error::Config("hex traces need a positive --width".into()));
            }
        }
        let mut width = match format {
            TraceFormat::Binary => None,
            TraceFormat::Hex { width } => Some(width),
        };
        let mut addresses = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bits = match format {
                TraceFormat::Binary => parse_binary_line(line, line_no)?,
                TraceFormat::Hex { width } => parse_hex_line(line, width, line_no)?,
            };
            match width {
                None => width = Some(bits.len()),
                Some(w) if w != bits.len() => {
                    return Err(Error::Format {
                        line: line_no,
                        expected: w,
                        found: bits.len(),
                    })
                }
                Some(_) => {}
            }
            addresses.push(bits);
        }
        if addresses.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            width: width.unwrap_or(0),
            addresses,
            source: source.to_string(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.addresses.len()
    }

    /// Always false for a constructed trace; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.addresses.is_empty()
    }

    pub fn addresses(&self) -> &[Vec<bool>] {
        &self.addresses
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn num_transitions(&self) -> usize {
        self.addresses.len() - 1
    }

    /// Bit `j` of address `i`.
    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.addresses[i][j]
    }

    /// Renders the trace back to binary-line text.
    pub fn to_binary_lines(&self) -> String {
        let mut out = String::with_capacity(self.addresses.len() * (self.width + 1));
        for address in &self.addresses {
            out.extend(address.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }
}

fn parse_binary_line(line: &str, line_no: usize) -> Result<Vec<bool>> {
    line.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse {
                line: line_no,
                message: format!("invalid binary digit {other:?}"),
            }),
        })
        .collect()
}

fn parse_hex_line(line: &str, width: usize, line_no: usize) -> Result<Vec<bool>> {
    let digits = line
        .strip_prefix("0x")
        .or_else(|| line.strip_prefix("0X"))
        .unwrap_or(line);
    if digits.is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: "empty hex literal".into(),
        });
    }
    let mut bits = Vec::with_capacity(digits.len() * 4);
    for c in digits.chars() {
        let nibble = c.to_digit(16).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("invalid hex digit {c:?}"),
        })?;
        bits.extend((0..4).rev().map(|s| (nibble >> s) & 1 == 1));
    }
    // MSB-first; anything left of the declared width must be zero.
    if bits.len() > width {
        let excess = bits.len() - width;
        if bits[..excess].iter().any(|&b| b) {
            return Err(Error::Overflow {
                line: line_no,
                value: line.to_string(),
                width,
            });
        }
        bits.drain(..excess);
    } else {
        let mut padded = vec![false; width - bits.len()];
        padded.extend(bits);
        bits = padded;
    }
    Ok(bits)
}

/// One sorted set of transition indices per bit position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToggleSets {
    width: usize,
    num_transitions: usize,
    sets: Vec<Vec<usize>>,
}

impl ToggleSets {
    /// `sets[j]` holds every transition `i` at which bit `j` flips.
    pub fn compute(trace: &AddressTrace) -> Self {
        let mut sets = vec![Vec::new(); trace.width()];
        for (i, pair) in trace.addresses().windows(2).enumerate() {
            for (j, set) in sets.iter_mut().enumerate() {
                if pair[0][j] != pair[1][j] {
                    set.push(i + 1);
                }
            }
        }
        Self {
            width: trace.width(),
            num_transitions: trace.num_transitions(),
            sets,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_transitions(&self) -> usize {
        self.num_transitions
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, bit: usize) -> &[usize] {
        &self.sets[bit]
    }
}

/// Address bits assigned to the DRAM row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RowBitSelection {
    bits: BTreeSet<usize>,
}

impl RowBitSelection {
    pub fn new(bits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn insert(&mut self, bit: usize) -> bool {
        self.bits.insert(bit)
    }
}

impl FromIterator<usize> for RowBitSelection {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter)
    }
}

impl fmt::Display for RowBitSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bits.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for RowBitSelection {
    type Err = Error;

    /// Accepts comma-separated bit indices, with or without braces.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        inner
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::Domain(format!("invalid bit index {p:?}")))
            })
            .collect()
    }
}

/// Counts row misses by walking the trace with a single-bank row buffer.
///
/// The row of an address is its value over the selected bits. The first
/// access only opens the buffer and is not a miss.
pub fn count_row_misses(trace: &AddressTrace, selection: &RowBitSelection) -> Result<usize> {
    if let Some(bad) = selection.bits().find(|&b| b >= trace.width()) {
        return Err(Error::Domain(format!(
            "row bit {bad} out of range for a {}-bit trace",
            trace.width()
        )));
    }
    let bits: Vec<usize> = selection.bits().collect();
    let row_of = |address: &[bool]| -> Vec<bool> { bits.iter().map(|&b| address[b]).collect() };

    let mut addresses = trace.addresses().iter();
    let mut open_row = row_of(addresses.next().expect("trace is non-empty"));
    let mut misses = 0;
    for address in addresses {
        let row = row_of(address);
        if row != open_row {
            misses += 1;
            open_row = row;
        }
    }
    Ok(misses)
}

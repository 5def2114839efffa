//! Erasure-correcting capability trees and their parenthesised notation.
//!
//! `(1,1,2)` lists the guaranteed erasure count of each row of a 2-layer
//! code; deeper codes nest further, e.g. `((1,1,2),(1,2,3),(1,2,3))`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::codespec::{tail_sums, Code};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CapabilityTree {
    Row(usize),
    Block(Vec<CapabilityTree>),
}

impl CapabilityTree {
    /// Row entries in order.
    pub fn flatten(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Vec<usize>) {
        match self {
            CapabilityTree::Row(u) => out.push(*u),
            CapabilityTree::Block(items) => items.iter().for_each(|i| i.flatten_into(out)),
        }
    }

    /// Nesting depth; `None` when siblings have different depths.
    pub fn height(&self) -> Option<usize> {
        match self {
            CapabilityTree::Row(_) => Some(0),
            CapabilityTree::Block(items) => {
                let mut h = None;
                for i in items {
                    let hi = i.height()?;
                    if h.is_some_and(|h| h != hi) {
                        return None;
                    }
                    h = Some(hi);
                }
                h.map(|h| h + 1)
            }
        }
    }

    fn write_inner(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapabilityTree::Row(u) => write!(f, "{u}"),
            CapabilityTree::Block(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    item.write_inner(f)?;
                }
                f.write_str(")")
            }
        }
    }

    /// Subtrees at the given height, in left-to-right order.
    fn collect_at<'a>(&'a self, height: usize, out: &mut Vec<&'a CapabilityTree>) {
        if self.height() == Some(height) {
            out.push(self);
        } else if let CapabilityTree::Block(items) = self {
            items.iter().for_each(|i| i.collect_at(height, out));
        }
    }
}

impl fmt::Display for CapabilityTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapabilityTree::Row(u) => write!(f, "({u})"),
            CapabilityTree::Block(_) => self.write_inner(f),
        }
    }
}

impl FromStr for CapabilityTree {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_item(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input at offset {pos} in {text:?}"
            )));
        }
        if !matches!(tree, CapabilityTree::Block(_)) {
            return Err(Error::Parse("capability must be parenthesised".into()));
        }
        Ok(tree)
    }
}

fn parse_item(chars: &[char], pos: &mut usize) -> Result<CapabilityTree> {
    match chars.get(*pos) {
        Some('(') => {
            *pos += 1;
            let mut items = vec![parse_item(chars, pos)?];
            loop {
                match chars.get(*pos) {
                    Some(',') => {
                        *pos += 1;
                        items.push(parse_item(chars, pos)?);
                    }
                    Some(')') => {
                        *pos += 1;
                        return Ok(CapabilityTree::Block(items));
                    }
                    other => {
                        return Err(Error::Parse(format!(
                            "expected ',' or ')' at offset {}, found {other:?}",
                            *pos
                        )))
                    }
                }
            }
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let digits: String = chars[start..*pos].iter().collect();
            digits
                .parse()
                .map(CapabilityTree::Row)
                .map_err(|_| Error::Parse(format!("bad number {digits:?}")))
        }
        other => Err(Error::Parse(format!(
            "expected '(' or a number at offset {}, found {other:?}",
            *pos
        ))),
    }
}

/// Component-wise comparison of two equal-length rows.
fn compare(a: &[usize], b: &[usize]) -> Option<Ordering> {
    if a.len() != b.len() {
        return None;
    }
    let le = a.iter().zip(b).all(|(x, y)| x <= y);
    let ge = a.iter().zip(b).all(|(x, y)| x >= y);
    match (le, ge) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    }
}

fn check_siblings(tree: &CapabilityTree) -> Result<()> {
    if let CapabilityTree::Block(items) = tree {
        let flat: Vec<Vec<usize>> = items.iter().map(CapabilityTree::flatten).collect();
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                if compare(&flat[i], &flat[j]).is_none() {
                    return Err(Error::NotTotallyOrdered(format!(
                        "{} and {}",
                        items[i], items[j]
                    )));
                }
            }
        }
        items.iter().try_for_each(check_siblings)?;
    }
    Ok(())
}

/// Rebuilds a code whose capability equals `tree` up to sorting within each block.
///
/// `n` is the row length. Entries equal to `n` mark rows of the zero code.
/// A single parenthesised number `(u)` denotes the MDS code `[n, n-u]`.
pub fn code_from_capability(tree: &CapabilityTree, n: usize) -> Result<Code> {
    let height = tree
        .height()
        .ok_or_else(|| Error::Parse(format!("{tree} mixes blocks of different depth")))?;
    if let Some(&bad) = tree.flatten().iter().find(|&&u| u > n) {
        return Err(Error::InvalidParameter(format!(
            "capability entry {bad} exceeds the row length {n}"
        )));
    }
    if let CapabilityTree::Block(items) = tree {
        if let [CapabilityTree::Row(u)] = items.as_slice() {
            return Ok(Code::leaf(n, *u));
        }
    }
    check_siblings(tree)?;

    // chains[h] lists the distinct nonzero codes of height h, weakest first.
    let mut chains: Vec<Vec<Code>> = Vec::with_capacity(height);
    for h in 0..height {
        let mut subtrees = Vec::new();
        tree.collect_at(h, &mut subtrees);
        let mut codes: Vec<Code> = Vec::new();
        for sub in subtrees {
            if let Some(c) = to_code(sub, h, n, &chains)? {
                if !codes.contains(&c) {
                    codes.push(c);
                }
            }
        }
        chains.push(sort_chain(codes)?);
    }
    to_code(tree, height, n, &chains)?
        .ok_or_else(|| Error::InvalidParameter(format!("{tree} describes the zero code")))
}

/// Code for a subtree of the given height, or `None` for the zero code.
fn to_code(
    sub: &CapabilityTree,
    height: usize,
    n: usize,
    chains: &[Vec<Code>],
) -> Result<Option<Code>> {
    match sub {
        CapabilityTree::Row(u) => Ok((*u < n).then(|| Code::leaf(n, *u))),
        CapabilityTree::Block(items) => {
            let chain = &chains[height - 1];
            let mut s = vec![0; chain.len() + 1];
            for item in items {
                match to_code(item, height - 1, n, chains)? {
                    Some(c) => {
                        let i = chain
                            .iter()
                            .position(|x| *x == c)
                            .expect("chain holds every subtree code");
                        s[i] += 1;
                    }
                    None => s[chain.len()] += 1,
                }
            }
            if s[..chain.len()].iter().all(|&x| x == 0) {
                return Ok(None);
            }
            Ok(Some(Code::node(s, chain.clone())))
        }
    }
}

fn sort_chain(mut codes: Vec<Code>) -> Result<Vec<Code>> {
    let key = |c: &Code| match c {
        Code::Leaf { u, .. } => *u,
        Code::Node { s, .. } => tail_sums(s).iter().sum(),
    };
    codes.sort_by_key(key);
    for pair in codes.windows(2) {
        let nested = pair[0].is_nested(&pair[1]).map_err(|_| {
            Error::NotTotallyOrdered("blocks of different size at the same depth".to_string())
        })?;
        if !nested {
            return Err(Error::NotTotallyOrdered(format!(
                "{} and {}",
                pair[0].capability(),
                pair[1].capability()
            )));
        }
    }
    Ok(codes)
}

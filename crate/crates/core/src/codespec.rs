//! Recursive description of multi-layer extended integrated interleaved codes.
//!
//! A 1-layer code is an MDS `[n, n-u, u+1]` code ([`Code::Leaf`]). An
//! `l`-layer code ([`Code::Node`]) interleaves `m = s_0 + ... + s_t` blocks
//! drawn from a chain of nested `(l-1)`-layer codes `C_0 > C_1 > ... > C_{t-1}`,
//! with the zero code `C_t` left implicit.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::capability::CapabilityTree;
use crate::error::{Error, Result, ValidationError};
use crate::gf::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Code {
    /// MDS code of length `n` with `u` parity symbols.
    Leaf { n: usize, u: usize },
    /// `s` has one entry per child plus a final entry for the zero code.
    Node { s: Vec<usize>, children: Vec<Code> },
}

/// `[N, k, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.n, self.k, self.d)
    }
}

/// Tail sums `ŝ_i = s_i + ... + s_t`.
pub fn tail_sums(s: &[usize]) -> Vec<usize> {
    let mut out = vec![0; s.len()];
    let mut acc = 0;
    for i in (0..s.len()).rev() {
        acc += s[i];
        out[i] = acc;
    }
    out
}

impl Code {
    pub fn leaf(n: usize, u: usize) -> Code {
        Code::Leaf { n, u }
    }

    pub fn node(s: Vec<usize>, children: Vec<Code>) -> Code {
        Code::Node { s, children }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Code::Leaf { .. })
    }

    /// Number of interleaved blocks; 1 for a leaf.
    pub fn m(&self) -> usize {
        match self {
            Code::Leaf { .. } => 1,
            Code::Node { s, .. } => s.iter().sum(),
        }
    }

    /// Length of one block (the child length); `n` for a leaf.
    pub fn block_len(&self) -> usize {
        match self {
            Code::Leaf { n, .. } => *n,
            Code::Node { children, .. } => children[0].length(),
        }
    }

    pub fn length(&self) -> usize {
        match self {
            Code::Leaf { n, .. } => *n,
            Code::Node { .. } => self.m() * self.block_len(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Code::Leaf { n, u } => n - u,
            Code::Node { s, children } => children
                .iter()
                .zip(s)
                .map(|(c, &si)| si * c.dimension())
                .sum(),
        }
    }

    pub fn redundancy(&self) -> usize {
        self.length() - self.dimension()
    }

    /// Minimum Hamming distance.
    ///
    /// Zero-dimensional codes have no nonzero codeword; they report `length + 1`.
    pub fn min_distance(&self) -> usize {
        match self {
            Code::Leaf { n, u } => {
                if u == n {
                    n + 1
                } else {
                    u + 1
                }
            }
            Code::Node { s, children } => {
                let hat = tail_sums(s);
                let m = hat[0];
                // Terms with s_0 = ... = s_j = 0 force every block into C_{j+1}
                // and do not contribute.
                (0..children.len())
                    .filter(|&j| hat[j + 1] < m)
                    .map(|j| children[j].min_distance() * (hat[j + 1] + 1))
                    .min()
                    .unwrap_or(self.length() + 1)
            }
        }
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.length(),
            k: self.dimension(),
            d: self.min_distance(),
        }
    }

    /// Recursion depth; a leaf has one layer.
    pub fn layers(&self) -> usize {
        match self {
            Code::Leaf { .. } => 1,
            Code::Node { children, .. } => 1 + children[0].layers(),
        }
    }

    /// Number of nonzero multiplicities among `s_0..s_{t-1}`; 1 for a leaf.
    pub fn levels(&self) -> usize {
        match self {
            Code::Leaf { .. } => 1,
            Code::Node { s, .. } => s[..s.len() - 1].iter().filter(|&&x| x != 0).count(),
        }
    }

    /// Per-row guaranteed erasure counts.
    pub fn capability(&self) -> CapabilityTree {
        match self {
            Code::Leaf { u, .. } => CapabilityTree::Row(*u),
            Code::Node { s, children } => {
                let mut out = Vec::with_capacity(self.m());
                for (c, &si) in children.iter().zip(s) {
                    let cap = c.capability();
                    out.extend(std::iter::repeat_n(cap, si));
                }
                let full = children[0].full_capability();
                out.extend(std::iter::repeat_n(full, s[s.len() - 1]));
                CapabilityTree::Block(out)
            }
        }
    }

    /// Capability of the zero code with this code's shape.
    fn full_capability(&self) -> CapabilityTree {
        match self {
            Code::Leaf { n, .. } => CapabilityTree::Row(*n),
            Code::Node { children, .. } => {
                CapabilityTree::Block(vec![children[0].full_capability(); self.m()])
            }
        }
    }

    /// Whether `b` is a subcode of `self`.
    ///
    /// Leaves must share their length; nodes must share their children.
    pub fn is_nested(&self, b: &Code) -> Result<bool> {
        match (self, b) {
            (Code::Leaf { n: na, u: ua }, Code::Leaf { n: nb, u: ub }) if na == nb => Ok(ua <= ub),
            (
                Code::Node {
                    s: sa,
                    children: ca,
                },
                Code::Node {
                    s: sb,
                    children: cb,
                },
            ) if ca == cb
                && sa.len() == sb.len()
                && sa.iter().sum::<usize>() == sb.iter().sum::<usize>() =>
            {
                let (ha, hb) = (tail_sums(sa), tail_sums(sb));
                Ok(ha.iter().zip(&hb).all(|(x, y)| x <= y))
            }
            _ => Err(Error::DifferentChildren),
        }
    }

    /// Whether two codes can be siblings: same leaf length, or same children and `m`.
    fn same_frame(&self, other: &Code) -> bool {
        match (self, other) {
            (Code::Leaf { n: a, .. }, Code::Leaf { n: b, .. }) => a == b,
            (
                Code::Node {
                    s: sa,
                    children: ca,
                },
                Code::Node {
                    s: sb,
                    children: cb,
                },
            ) => {
                ca == cb
                    && sa.len() == sb.len()
                    && sa.iter().sum::<usize>() == sb.iter().sum::<usize>()
            }
            _ => false,
        }
    }

    /// Checks every structural invariant against `field`.
    pub fn validate(&self, field: &Field) -> Result<(), ValidationError> {
        match self {
            Code::Leaf { n, u } => {
                if *n == 0 {
                    return Err(ValidationError::EmptyLeaf);
                }
                if u > n {
                    return Err(ValidationError::RedundancyTooLarge { n: *n, u: *u });
                }
                // A single all-ones row works for any length; more rows need
                // n distinct powers of alpha.
                if *u >= 2 && *n > field.alpha_order() {
                    return Err(ValidationError::AlphaOrderTooSmall {
                        needed: *n,
                        order: field.alpha_order(),
                    });
                }
                Ok(())
            }
            Code::Node { s, children } => {
                if children.is_empty() {
                    return Err(ValidationError::EmptyNode);
                }
                if s.len() != children.len() + 1 {
                    return Err(ValidationError::MultiplicityCount {
                        children: children.len(),
                        s: s.len(),
                    });
                }
                let m: usize = s.iter().sum();
                if m == 0 {
                    return Err(ValidationError::EmptyInterleave);
                }
                if m >= field.q() {
                    return Err(ValidationError::MTooLargeForField { m, q: field.q() });
                }
                if m > field.alpha_order() {
                    return Err(ValidationError::AlphaOrderTooSmall {
                        needed: m,
                        order: field.alpha_order(),
                    });
                }
                for c in children {
                    c.validate(field)?;
                }
                for (i, pair) in children.windows(2).enumerate() {
                    if !pair[0].same_frame(&pair[1]) {
                        return Err(ValidationError::MismatchedChildren(format!(
                            "children {i} and {} differ in shape",
                            i + 1
                        )));
                    }
                    let down = pair[0].is_nested(&pair[1]).unwrap_or(false);
                    let up = pair[1].is_nested(&pair[0]).unwrap_or(false);
                    if !down || up {
                        return Err(ValidationError::NotNested(format!(
                            "child {} is not a proper subcode of child {i}",
                            i + 1
                        )));
                    }
                }
                if children[children.len() - 1].dimension() == 0 {
                    return Err(ValidationError::NotNested(
                        "the last child equals the implicit zero code".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A validated code bound to its field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    field: &'static Field,
    code: Code,
}

impl CodeSpec {
    pub fn new(field: &'static Field, code: Code) -> Result<CodeSpec> {
        code.validate(field)?;
        Ok(CodeSpec { field, code })
    }

    /// Uses the smallest field, `GF(4)` upwards, in which `code` is valid.
    pub fn in_smallest_field(code: Code) -> Result<CodeSpec> {
        let mut last = None;
        for w in crate::gf::MIN_W..=crate::gf::MAX_W {
            let field = Field::get(w)?;
            match code.validate(field) {
                Ok(()) => return Ok(CodeSpec { field, code }),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one width was tried").into())
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn length(&self) -> usize {
        self.code.length()
    }

    pub fn dimension(&self) -> usize {
        self.code.dimension()
    }

    pub fn min_distance(&self) -> usize {
        self.code.min_distance()
    }

    pub fn params(&self) -> CodeParams {
        self.code.params()
    }

    pub fn capability(&self) -> CapabilityTree {
        self.code.capability()
    }

    /// Child `i` as a spec over the same field.
    pub fn child(&self, i: usize) -> Option<CodeSpec> {
        match &self.code {
            Code::Node { children, .. } => children.get(i).map(|c| CodeSpec {
                field: self.field,
                code: c.clone(),
            }),
            Code::Leaf { .. } => None,
        }
    }

    pub fn from_json(text: &str) -> Result<CodeSpec> {
        let raw: RawSpec = serde_json::from_str(text)?;
        let field = Field::get(raw.field.w)?;
        CodeSpec::new(field, raw.code.into_code()?)
    }

    pub fn to_json(&self) -> String {
        let raw = RawSpec {
            field: RawField { w: self.field.w() },
            code: RawCode::from_code(&self.code),
        };
        serde_json::to_string(&raw).expect("spec serialisation cannot fail")
    }

    /// Short hex identifier of the canonical JSON form.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_json().as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    field: RawField,
    code: RawCode,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    w: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawCode {
    Leaf { n: usize, u: usize },
    Node { s: Vec<i64>, children: Vec<RawCode> },
}

impl RawCode {
    fn into_code(self) -> Result<Code> {
        match self {
            RawCode::Leaf { n, u } => Ok(Code::Leaf { n, u }),
            RawCode::Node { s, children } => {
                let s = s
                    .into_iter()
                    .enumerate()
                    .map(|(index, value)| {
                        usize::try_from(value)
                            .map_err(|_| ValidationError::NegativeMultiplicity { index, value })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let children = children
                    .into_iter()
                    .map(RawCode::into_code)
                    .collect::<Result<Vec<_>>>()?;
                Ok(Code::Node { s, children })
            }
        }
    }

    fn from_code(code: &Code) -> RawCode {
        match code {
            Code::Leaf { n, u } => RawCode::Leaf { n: *n, u: *u },
            Code::Node { s, children } => RawCode::Node {
                s: s.iter().map(|&x| x as i64).collect(),
                children: children.iter().map(RawCode::from_code).collect(),
            },
        }
    }
}

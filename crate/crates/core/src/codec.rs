//! Membership test, systematic encoder and the recursive erasure decoder.
//!
//! A node code of length `m * L` is stored block after block: block `j`
//! occupies positions `j*L .. (j+1)*L`.
//!
//! Decoding first repairs every erased block that its weakest child `C_0`
//! handles alone. Every other erased block gets a level: the index of the
//! weakest child that handles its erasure pattern, or `t` for the zero code.
//! Blocks are ordered by level, highest first, and peeled from the back. A
//! block of level `w` with `l - 1` other unresolved blocks is combined with
//! the known blocks through the Lagrange polynomial `P` of degree `< l` that
//! is 1 at `alpha^target` and 0 at the other unresolved points. The result
//! `c' = sum_j P(alpha^j) c_j` lies in `C_w` whenever `l <= ŝ_w`, shares the
//! target's erasures, and is decoded recursively.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::codespec::{tail_sums, Code, CodeSpec};
use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};
use crate::matrix::Matrix;
use crate::word::SymbolWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeOutcome {
    Recovered,
    Uncorrectable,
}

/// What the decoder did at the outermost layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub outcome: DecodeOutcome,
    /// Minimal sufficient level of each block, `None` for erasure-free blocks.
    /// Empty for a 1-layer code.
    pub levels: Vec<Option<usize>>,
    /// Blocks repaired by the weakest child alone.
    pub local: Vec<usize>,
    /// Blocks repaired through weighted block sums, in processing order.
    pub peel_order: Vec<usize>,
}

impl DecodeReport {
    /// Erased blocks grouped by level: entry `i` lists the blocks of level `i`.
    pub fn level_sets(&self, t: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); t + 1];
        for (j, l) in self.levels.iter().enumerate() {
            if let Some(l) = l {
                sets[*l].push(j);
            }
        }
        sets
    }
}

/// Precomputed elimination steps for one erasure pattern.
#[derive(Debug, Clone)]
enum Plan {
    Leaf {
        erased: Vec<usize>,
        known: Vec<usize>,
        /// `coef[i][k]` multiplies the `k`-th known symbol into erased position `i`.
        coef: Vec<Vec<Symbol>>,
    },
    Node {
        block_len: usize,
        local: Vec<(usize, Plan)>,
        peel: Vec<PeelStep>,
    },
}

#[derive(Debug, Clone)]
struct PeelStep {
    target: usize,
    /// `(block, P(alpha^block))` over the blocks known at this step.
    weights: Vec<(usize, Symbol)>,
    /// Decoder for `c'` in the target's child; `None` when `c'` is zero.
    sub: Option<Box<Plan>>,
}

struct Layout {
    levels: Vec<Option<usize>>,
    local: Vec<usize>,
    peel_order: Vec<usize>,
}

/// Whether the decoder is guaranteed to fill the erasures in `mask`.
pub fn correctable(code: &Code, mask: &[bool]) -> bool {
    match code {
        Code::Leaf { u, .. } => mask.iter().filter(|&&e| e).count() <= *u,
        Code::Node { s, children } => {
            let l = code.block_len();
            let t = children.len();
            let hat = tail_sums(s);
            let mut at_least = vec![0usize; t + 1];
            for block in mask.chunks(l) {
                if block.iter().any(|&e| e) {
                    let lvl = block_level(children, block);
                    for c in at_least.iter_mut().take(lvl + 1).skip(1) {
                        *c += 1;
                    }
                }
            }
            (1..=t).all(|i| at_least[i] <= hat[i])
        }
    }
}

/// Index of the weakest child handling `block`, or `children.len()`.
fn block_level(children: &[Code], block: &[bool]) -> usize {
    children
        .iter()
        .position(|c| correctable(c, block))
        .unwrap_or(children.len())
}

fn layout(code: &Code, mask: &[bool]) -> Option<Layout> {
    let Code::Node { s, children } = code else {
        return None;
    };
    let l = code.block_len();
    let t = children.len();
    let hat = tail_sums(s);
    let mut levels = Vec::with_capacity(code.m());
    let mut local = Vec::new();
    let mut pending = Vec::new();
    let mut at_least = vec![0usize; t + 1];
    for (j, block) in mask.chunks(l).enumerate() {
        if !block.iter().any(|&e| e) {
            levels.push(None);
            continue;
        }
        let lvl = block_level(children, block);
        levels.push(Some(lvl));
        if lvl == 0 {
            local.push(j);
        } else {
            pending.push(j);
            for c in at_least.iter_mut().take(lvl + 1).skip(1) {
                *c += 1;
            }
        }
    }
    if (1..=t).any(|i| at_least[i] > hat[i]) {
        return None;
    }
    // Highest level first, ties by index; peeling runs from the back.
    pending.sort_by_key(|&j| (std::cmp::Reverse(levels[j]), j));
    pending.reverse();
    Some(Layout {
        levels,
        local,
        peel_order: pending,
    })
}

fn build_plan(field: &'static Field, code: &Code, mask: &[bool]) -> Option<Plan> {
    match code {
        Code::Leaf { n, u } => {
            let erased: Vec<usize> = (0..*n).filter(|&i| mask[i]).collect();
            if erased.len() > *u {
                return None;
            }
            let known: Vec<usize> = (0..*n).filter(|&i| !mask[i]).collect();
            Some(Plan::Leaf {
                coef: leaf_coefficients(field, &erased, &known),
                erased,
                known,
            })
        }
        Code::Node { children, .. } => {
            let lay = layout(code, mask)?;
            let l = code.block_len();
            let block_mask = |j: usize| &mask[j * l..(j + 1) * l];
            let local = lay
                .local
                .iter()
                .map(|&j| Some((j, build_plan(field, &children[0], block_mask(j))?)))
                .collect::<Option<Vec<_>>>()?;

            let mut unresolved: Vec<bool> = vec![false; code.m()];
            for &j in &lay.peel_order {
                unresolved[j] = true;
            }
            let mut peel = Vec::with_capacity(lay.peel_order.len());
            for &target in &lay.peel_order {
                let others: Vec<usize> = (0..code.m())
                    .filter(|&j| unresolved[j] && j != target)
                    .collect();
                let weights = (0..code.m())
                    .filter(|&j| !unresolved[j])
                    .map(|j| (j, lagrange_at(field, target, &others, j)))
                    .filter(|&(_, w)| w != 0)
                    .collect();
                let lvl = lay.levels[target].expect("peeled blocks are erased");
                let sub = match children.get(lvl) {
                    Some(child) => Some(Box::new(build_plan(field, child, block_mask(target))?)),
                    None => None,
                };
                peel.push(PeelStep {
                    target,
                    weights,
                    sub,
                });
                unresolved[target] = false;
            }
            Some(Plan::Node {
                block_len: l,
                local,
                peel,
            })
        }
    }
}

/// `P(alpha^x)` for the polynomial equal to 1 at `alpha^target` and 0 at `alpha^z`, `z` in `zeros`.
fn lagrange_at(field: &Field, target: usize, zeros: &[usize], x: usize) -> Symbol {
    let a = |e: usize| field.alpha_pow(e as i64);
    let mut num = 1;
    let mut den = 1;
    for &z in zeros {
        num = field.mul(num, a(x) ^ a(z));
        den = field.mul(den, a(target) ^ a(z));
    }
    field.div(num, den).expect("evaluation points are distinct")
}

/// Solves the first `|erased|` parity checks of an MDS leaf for the erased symbols.
fn leaf_coefficients(field: &'static Field, erased: &[usize], known: &[usize]) -> Vec<Vec<Symbol>> {
    let e = erased.len();
    if e == 0 {
        return Vec::new();
    }
    let cols = e + known.len();
    let mut data = Vec::with_capacity(e * cols);
    for r in 0..e {
        for &c in erased.iter().chain(known) {
            data.push(field.alpha_pow((c * r) as i64));
        }
    }
    let ech = Matrix::from_vec(field, e, cols, data)
        .expect("dimensions match")
        .row_reduce();
    debug_assert_eq!(ech.rank, e);
    (0..e).map(|i| ech.matrix.row(i)[e..].to_vec()).collect()
}

fn execute(field: &Field, plan: &Plan, sym: &mut [Symbol]) {
    match plan {
        Plan::Leaf {
            erased,
            known,
            coef,
        } => {
            for (&pos, row) in erased.iter().zip(coef) {
                sym[pos] = row
                    .iter()
                    .zip(known)
                    .fold(0, |acc, (&c, &k)| acc ^ field.mul(c, sym[k]));
            }
        }
        Plan::Node {
            block_len,
            local,
            peel,
        } => {
            let l = *block_len;
            for (j, p) in local {
                execute(field, p, &mut sym[j * l..(j + 1) * l]);
            }
            let mut acc = vec![0; l];
            for step in peel {
                acc.iter_mut().for_each(|x| *x = 0);
                for &(j, w) in &step.weights {
                    field.axpy(&mut acc, w, &sym[j * l..(j + 1) * l]);
                }
                let target = &mut sym[step.target * l..(step.target + 1) * l];
                match &step.sub {
                    Some(sub) => {
                        for (t, a) in target.iter_mut().zip(&acc) {
                            *t ^= a;
                        }
                        execute(field, sub, target);
                        for (t, a) in target.iter_mut().zip(&acc) {
                            *t ^= a;
                        }
                    }
                    None => target.copy_from_slice(&acc),
                }
            }
        }
    }
}

/// Checks the defining membership conditions recursively.
fn member(field: &Field, code: &Code, sym: &[Symbol]) -> bool {
    match code {
        Code::Leaf { n, u } => (0..*u).all(|r| {
            (0..*n).fold(0, |acc, c| {
                acc ^ field.mul(field.alpha_pow((c * r) as i64), sym[c])
            }) == 0
        }),
        Code::Node { s, children } => {
            let l = code.block_len();
            let m = code.m();
            let t = children.len();
            let hat = tail_sums(s);
            if !sym.chunks(l).all(|b| member(field, &children[0], b)) {
                return false;
            }
            let mut combo = vec![0; l];
            for r in 0..hat.get(1).copied().unwrap_or(0) {
                combo.iter_mut().for_each(|x| *x = 0);
                for j in 0..m {
                    field.axpy(
                        &mut combo,
                        field.alpha_pow((r * j) as i64),
                        &sym[j * l..(j + 1) * l],
                    );
                }
                for i in 1..=t {
                    if hat[i] <= r {
                        continue;
                    }
                    let ok = match children.get(i) {
                        Some(c) => member(field, c, &combo),
                        None => combo.iter().all(|&x| x == 0),
                    };
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
    }
}

fn check_len(spec: &CodeSpec, len: usize) -> Result<()> {
    if len != spec.length() {
        return Err(Error::LengthMismatch {
            expected: spec.length(),
            actual: len,
        });
    }
    Ok(())
}

/// Whether the word is a codeword. Erased placeholders are read as given.
pub fn is_codeword(spec: &CodeSpec, word: &SymbolWord) -> Result<bool> {
    check_len(spec, word.len())?;
    Ok(member(spec.field(), spec.code(), &word.symbols))
}

/// Fills the erasures of `word` with the recursive decoder.
///
/// An uncorrectable pattern returns the input unchanged. Known symbols that
/// contradict every codeword give [`Error::InconsistentWord`].
pub fn decode(spec: &CodeSpec, word: &SymbolWord) -> Result<(SymbolWord, DecodeReport)> {
    check_len(spec, word.len())?;
    let code = spec.code();
    let mask = &word.erased;
    let lay = layout(code, mask);
    let mut report = DecodeReport {
        outcome: DecodeOutcome::Uncorrectable,
        levels: Vec::new(),
        local: Vec::new(),
        peel_order: Vec::new(),
    };
    if let Some(lay) = &lay {
        report.levels = lay.levels.clone();
        report.local = lay.local.clone();
        report.peel_order = lay.peel_order.clone();
    }
    let Some(plan) = build_plan(spec.field(), code, mask) else {
        return Ok((word.clone(), report));
    };
    let mut out = word.clone();
    execute(spec.field(), &plan, &mut out.symbols);
    let agrees = out
        .symbols
        .iter()
        .zip(&word.symbols)
        .zip(mask)
        .all(|((a, b), &e)| e || a == b);
    if !agrees || !member(spec.field(), code, &out.symbols) {
        return Err(Error::InconsistentWord);
    }
    out.erased.iter_mut().for_each(|e| *e = false);
    report.outcome = DecodeOutcome::Recovered;
    Ok((out, report))
}

/// Parity positions of the systematic layout.
///
/// A leaf keeps data in its first `n - u` symbols. A node lays out the `s_0`
/// blocks of `C_0` first, then the `s_1` blocks of `C_1`, and so on; the final
/// `s_t` blocks are entirely parity.
pub fn parity_mask(code: &Code) -> Vec<bool> {
    match code {
        Code::Leaf { n, u } => (0..*n).map(|i| i >= n - u).collect(),
        Code::Node { s, children } => {
            let mut out = Vec::with_capacity(code.length());
            for (c, &si) in children.iter().zip(s) {
                let block = parity_mask(c);
                for _ in 0..si {
                    out.extend_from_slice(&block);
                }
            }
            out.resize(code.length(), true);
            out
        }
    }
}

/// Systematic encoder with its elimination plan precomputed.
#[derive(Debug, Clone)]
pub struct Encoder {
    spec: CodeSpec,
    data_positions: Vec<usize>,
    plan: Arc<Plan>,
}

type PlanCache = Mutex<HashMap<(u32, Code), (Vec<usize>, Arc<Plan>)>>;

fn plan_cache() -> &'static PlanCache {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Encoder {
    pub fn new(spec: &CodeSpec) -> Encoder {
        let key = (spec.field().w(), spec.code().clone());
        let mut cache = plan_cache().lock().unwrap_or_else(|e| e.into_inner());
        let (data_positions, plan) = cache
            .entry(key)
            .or_insert_with(|| {
                let mask = parity_mask(spec.code());
                let plan = build_plan(spec.field(), spec.code(), &mask)
                    .expect("the systematic parity pattern is always correctable");
                let data = (0..mask.len()).filter(|&i| !mask[i]).collect();
                (data, Arc::new(plan))
            })
            .clone();
        Encoder {
            spec: spec.clone(),
            data_positions,
            plan,
        }
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// Positions holding data symbols, ascending.
    pub fn data_positions(&self) -> &[usize] {
        &self.data_positions
    }

    pub fn encode(&self, data: &[Symbol]) -> Result<SymbolWord> {
        if data.len() != self.data_positions.len() {
            return Err(Error::LengthMismatch {
                expected: self.data_positions.len(),
                actual: data.len(),
            });
        }
        let field = self.spec.field();
        if let Some(&bad) = data.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::InvalidParameter(format!("{bad} is not in {field}")));
        }
        let mut sym = vec![0; self.spec.length()];
        for (&p, &x) in self.data_positions.iter().zip(data) {
            sym[p] = x;
        }
        execute(field, &self.plan, &mut sym);
        Ok(SymbolWord::new(sym))
    }
}

pub fn encode(spec: &CodeSpec, data: &[Symbol]) -> Result<SymbolWord> {
    Encoder::new(spec).encode(data)
}

/// A nonzero codeword of weight `min_distance`.
pub fn min_weight_codeword(spec: &CodeSpec) -> Result<SymbolWord> {
    if spec.dimension() == 0 {
        return Err(Error::NoCodewords);
    }
    Ok(SymbolWord::new(min_weight(spec.field(), spec.code())))
}

fn min_weight(field: &'static Field, code: &Code) -> Vec<Symbol> {
    match code {
        Code::Leaf { n, u } => {
            // Support on 0..=u: fix position u to 1 and solve for 0..u.
            let erased: Vec<usize> = (0..*u).collect();
            let known: Vec<usize> = (*u..*n).collect();
            let mut sym = vec![0; *n];
            sym[*u] = 1;
            let coef = leaf_coefficients(field, &erased, &known);
            execute(
                field,
                &Plan::Leaf {
                    erased,
                    known,
                    coef,
                },
                &mut sym,
            );
            sym
        }
        Code::Node { s, children } => {
            let hat = tail_sums(s);
            let m = hat[0];
            let j = (0..children.len())
                .filter(|&j| hat[j + 1] < m)
                .min_by_key(|&j| children[j].min_distance() * (hat[j + 1] + 1))
                .expect("nonzero dimension");
            let w = min_weight(field, &children[j]);
            // v(x) = prod_{r < deg} (x - alpha^r), coefficients low to high.
            let deg = hat[j + 1];
            let mut v = vec![1 as Symbol];
            for r in 0..deg {
                let root = field.alpha_pow(r as i64);
                let mut next = vec![0; v.len() + 1];
                for (i, &c) in v.iter().enumerate() {
                    next[i + 1] ^= c;
                    next[i] ^= field.mul(c, root);
                }
                v = next;
            }
            let l = w.len();
            let mut out = vec![0; code.length()];
            for (b, &vb) in v.iter().enumerate() {
                for (o, &x) in out[b * l..(b + 1) * l].iter_mut().zip(&w) {
                    *o = field.mul(vb, x);
                }
            }
            out
        }
    }
}

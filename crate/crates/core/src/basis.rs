//! Total-degree monomial sets and the ordered partitions that give each
//! sensitivity index family its meaning.
//!
//! Monomials are stored in *analysis coordinates*: exponent `l` belongs to the
//! `l`-th input of the analysis order. An [`OrderedBasis`] carries a
//! [`Permutation`] mapping analysis positions to dataset columns, so a single
//! dataset serves every input ordering without copying.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("basis size C({n}+{p}, {n}) overflows the platform integer")]
    SizeOverflow { n: usize, p: u32 },
    #[error("at least one input is required")]
    NoInputs,
    #[error("invalid permutation {0:?}: expected a bijection on 0..{1}")]
    InvalidPermutation(Vec<usize>, usize),
}

/// Exponent vector of a monomial `x_1^{j_1} ... x_n^{j_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn constant(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n_inputs(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Positions with a non-zero exponent, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(l, _)| l)
            .collect()
    }

    /// Number of active inputs (the interaction order).
    pub fn interaction_order(&self) -> usize {
        self.0.iter().filter(|&&e| e != 0).count()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn first_active(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    /// Graded order: total degree first, then exponents compared
    /// lexicographically with the larger leading exponent first, so that
    /// `x1 < x2` and `x1^2 < x1 x2 < x2^2`.
    pub fn graded_cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }

    /// Human-readable label such as `X1^2*X3`, using `names[l]` for position `l`.
    pub fn label(&self, names: &[String]) -> String {
        if self.is_constant() {
            return "1".to_string();
        }
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(l, &e)| {
                let name = names
                    .get(l)
                    .cloned()
                    .unwrap_or_else(|| format!("X{}", l + 1));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.0.len()).map(|l| format!("x{l}")).collect();
        f.write_str(&self.label(&names))
    }
}

/// A bijection on `0..n`. Entry `l` is the dataset column placed at analysis
/// position `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self, BasisError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n || seen[c] {
                return Err(BasisError::InvalidPermutation(order, n));
            }
            seen[c] = true;
        }
        Ok(Permutation(order))
    }

    /// Builds a permutation from 1-based column numbers, as written in reports.
    pub fn from_one_based(order: &[usize]) -> Result<Self, BasisError> {
        let zero: Option<Vec<usize>> = order.iter().map(|&c| c.checked_sub(1)).collect();
        match zero {
            Some(v) => Permutation::new(v),
            None => Err(BasisError::InvalidPermutation(order.to_vec(), order.len())),
        }
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The cyclic shift `(i, i+1, ..., n-1, 0, ..., i-1)` that puts input `first` in front.
    pub fn cyclic(n: usize, first: usize) -> Self {
        assert!(
            first < n,
            "cyclic shift start {first} out of range for {n} inputs"
        );
        Permutation((0..n).map(|l| (first + l) % n).collect())
    }

    /// `leading` in the given order, followed by the remaining columns ascending.
    pub fn leading(n: usize, leading: &[usize]) -> Result<Self, BasisError> {
        let mut order = leading.to_vec();
        order.extend((0..n).filter(|c| !leading.contains(c)));
        Permutation::new(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Dataset column at analysis position `l`.
    pub fn column(&self, l: usize) -> usize {
        self.0[l]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (l, &c) in self.0.iter().enumerate() {
            inv[c] = l;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: position `l` maps to `self[other[l]]`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&l| self.0[l]).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|c| c + 1).collect()
    }
}

/// Number of monomials of total degree at most `p` in `n` inputs, `C(n+p, n)`.
pub fn basis_size(n: usize, p: u32) -> Result<usize, BasisError> {
    if n == 0 {
        return Err(BasisError::NoInputs);
    }
    let overflow = || BasisError::SizeOverflow { n, p };
    // C(n+k, k) = C(n+k-1, k-1) * (n+k) / k, exact at every step.
    let mut c: usize = 1;
    for k in 1..=p as usize {
        let top = n.checked_add(k).ok_or_else(overflow)?;
        c = c.checked_mul(top).ok_or_else(overflow)? / k;
    }
    Ok(c)
}

/// All multi-indices with `|α| ≤ p`, in graded order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSet {
    n: usize,
    degree: u32,
    members: Vec<MultiIndex>,
}

impl MonomialSet {
    pub fn n_inputs(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn enumerate_monomials(n: usize, p: u32) -> Result<MonomialSet, BasisError> {
    let size = basis_size(n, p)?;
    let mut members = Vec::with_capacity(size);
    let mut current = vec![0u32; n];
    for d in 0..=p {
        compositions(d, 0, &mut current, &mut members);
    }
    debug_assert_eq!(members.len(), size);
    Ok(MonomialSet {
        n,
        degree: p,
        members,
    })
}

// Exponent vectors summing to `remaining` over positions `pos..`, largest
// leading exponent first.
fn compositions(remaining: u32, pos: usize, current: &mut [u32], out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.to_vec()));
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        compositions(remaining - e, pos + 1, current, out);
    }
    current[pos] = 0;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionKind {
    /// `(St_0, St_11, St_1 - St_11, St_2, ..., St_n)`
    Full,
    /// `(St_0, St_-1, St_11, St_1 - St_11)`
    Uncorrelated,
    /// `(Sc_0, Sc_11, ..., Sc_1p, Sc_22, ..., Sc_kp)`
    OrderBased,
    /// Caller-assembled blocks.
    Custom,
}

impl PartitionKind {
    pub fn name(self) -> &'static str {
        match self {
            PartitionKind::Full => "full",
            PartitionKind::Uncorrelated => "uncorrelated",
            PartitionKind::OrderBased => "order_based",
            PartitionKind::Custom => "custom",
        }
    }
}

/// What a block means. Input positions are in analysis coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockRole {
    Constant,
    /// Pure powers of an input, `St_11`.
    PurePowers {
        input: usize,
    },
    /// Interactions of an input with any later input, `St_1 - St_11`.
    Interactions {
        input: usize,
    },
    /// Monomials involving `input` but no earlier input, `St_i` for `i ≥ 2`.
    Conditional {
        input: usize,
    },
    /// Every monomial not involving `input`, `St_-1`.
    Complement {
        input: usize,
    },
    /// Exactly `interactions` active inputs and total degree `degree`, `Sc_ij`.
    Order {
        interactions: usize,
        degree: u32,
    },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub label: String,
    pub role: BlockRole,
    pub members: Vec<MultiIndex>,
}

/// An ordered partition of a monomial set plus the input ordering it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedBasis {
    kind: PartitionKind,
    n: usize,
    degree: u32,
    blocks: Vec<Block>,
    permutation: Permutation,
}

impl OrderedBasis {
    /// Assembles an arbitrary block sequence. Only the permutation and the
    /// exponent lengths are checked, so callers can build deliberately
    /// degenerate bases (duplicated monomials, shuffled blocks).
    pub fn from_blocks(
        blocks: Vec<Block>,
        permutation: Permutation,
        degree: u32,
    ) -> Result<Self, BasisError> {
        let n = permutation.len();
        if n == 0 {
            return Err(BasisError::NoInputs);
        }
        if let Some(bad) = blocks
            .iter()
            .flat_map(|b| b.members.iter())
            .find(|m| m.n_inputs() != n)
        {
            return Err(BasisError::InvalidPermutation(
                bad.exponents().iter().map(|&e| e as usize).collect(),
                n,
            ));
        }
        Ok(OrderedBasis {
            kind: PartitionKind::Custom,
            n,
            degree,
            blocks,
            permutation,
        })
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn n_inputs(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn permutation(&self) -> &Permutation {
        &self.permutation
    }

    /// Total number of monomials across blocks.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Monomials in evaluation order, each tagged with its block index.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &MultiIndex)> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(b, block)| block.members.iter().map(move |m| (b, m)))
    }

    /// Re-expresses an analysis-coordinate monomial in dataset columns.
    pub fn dataset_exponents(&self, m: &MultiIndex) -> MultiIndex {
        let mut out = vec![0; self.n];
        for (l, &e) in m.exponents().iter().enumerate() {
            out[self.permutation.column(l)] = e;
        }
        MultiIndex(out)
    }

    /// Mutable access for callers that reorder members inside blocks. The
    /// block structure itself is kept.
    pub fn blocks_mut(&mut self) -> impl Iterator<Item = &mut Vec<MultiIndex>> + '_ {
        self.blocks.iter_mut().map(|b| &mut b.members)
    }

    /// True if the blocks are disjoint and their union is exactly `ms`.
    pub fn covers_exactly(&self, ms: &MonomialSet) -> bool {
        if self.len() != ms.len() {
            return false;
        }
        let mut mine: Vec<&MultiIndex> = self.iter().map(|(_, m)| m).collect();
        mine.sort_by(|a, b| a.graded_cmp(b));
        mine.windows(2).all(|w| w[0] != w[1]) && mine.iter().zip(ms.members()).all(|(a, b)| *a == b)
    }

    fn rebuild(kind: PartitionKind, ms: &MonomialSet, permutation: Permutation) -> Self {
        let blocks = match kind {
            PartitionKind::Full => full_blocks(ms),
            PartitionKind::Uncorrelated => uncorrelated_blocks(ms),
            PartitionKind::OrderBased => order_blocks(ms),
            PartitionKind::Custom => unreachable!("custom bases are not rebuilt"),
        };
        OrderedBasis {
            kind,
            n: ms.n_inputs(),
            degree: ms.degree(),
            blocks,
            permutation,
        }
    }
}

fn st_label(input: usize) -> String {
    format!("St_{}", input + 1)
}

fn full_blocks(ms: &MonomialSet) -> Vec<Block> {
    let n = ms.n_inputs();
    let mut constant = Vec::new();
    let mut pure = Vec::new();
    let mut mixed = Vec::new();
    let mut conditional: Vec<Vec<MultiIndex>> = vec![Vec::new(); n.saturating_sub(1)];
    for m in ms.members() {
        match m.first_active() {
            None => constant.push(m.clone()),
            Some(0) if m.interaction_order() == 1 => pure.push(m.clone()),
            Some(0) => mixed.push(m.clone()),
            Some(i) => conditional[i - 1].push(m.clone()),
        }
    }
    let mut blocks = vec![
        Block {
            label: "St_0".into(),
            role: BlockRole::Constant,
            members: constant,
        },
        Block {
            label: "St_11".into(),
            role: BlockRole::PurePowers { input: 0 },
            members: pure,
        },
        Block {
            label: "St_1-St_11".into(),
            role: BlockRole::Interactions { input: 0 },
            members: mixed,
        },
    ];
    blocks.extend(
        conditional
            .into_iter()
            .enumerate()
            .map(|(k, members)| Block {
                label: st_label(k + 1),
                role: BlockRole::Conditional { input: k + 1 },
                members,
            }),
    );
    blocks
}

fn uncorrelated_blocks(ms: &MonomialSet) -> Vec<Block> {
    let mut full = full_blocks(ms).into_iter();
    let constant = full.next().expect("constant block");
    let pure = full.next().expect("pure-power block");
    let mixed = full.next().expect("interaction block");
    let complement: Vec<MultiIndex> = full.flat_map(|b| b.members).collect();
    vec![
        constant,
        Block {
            label: "St_-1".into(),
            role: BlockRole::Complement { input: 0 },
            members: complement,
        },
        pure,
        mixed,
    ]
}

fn order_blocks(ms: &MonomialSet) -> Vec<Block> {
    let p = ms.degree();
    let k = ms.n_inputs().min(p as usize);
    let mut blocks = vec![Block {
        label: "Sc_0".into(),
        role: BlockRole::Constant,
        members: vec![MultiIndex::constant(ms.n_inputs())],
    }];
    for i in 1..=k {
        for j in i as u32..=p {
            let members = ms
                .members()
                .iter()
                .filter(|m| m.interaction_order() == i && m.degree() == j)
                .cloned()
                .collect();
            let label = if i < 10 && j < 10 {
                format!("Sc_{i}{j}")
            } else {
                format!("Sc_{i},{j}")
            };
            blocks.push(Block {
                label,
                role: BlockRole::Order {
                    interactions: i,
                    degree: j,
                },
                members,
            });
        }
    }
    blocks
}

pub fn partition_full(ms: &MonomialSet) -> OrderedBasis {
    OrderedBasis::rebuild(
        PartitionKind::Full,
        ms,
        Permutation::identity(ms.n_inputs()),
    )
}

pub fn partition_uncorrelated(ms: &MonomialSet) -> OrderedBasis {
    OrderedBasis::rebuild(
        PartitionKind::Uncorrelated,
        ms,
        Permutation::identity(ms.n_inputs()),
    )
}

pub fn partition_order_based(ms: &MonomialSet) -> OrderedBasis {
    OrderedBasis::rebuild(
        PartitionKind::OrderBased,
        ms,
        Permutation::identity(ms.n_inputs()),
    )
}

/// Builds the partition for a kind under the given analysis order in one step.
pub fn partition(
    kind: PartitionKind,
    ms: &MonomialSet,
    order: &Permutation,
) -> Result<OrderedBasis, BasisError> {
    if order.len() != ms.n_inputs() || kind == PartitionKind::Custom {
        return Err(BasisError::InvalidPermutation(
            order.as_slice().to_vec(),
            ms.n_inputs(),
        ));
    }
    Ok(OrderedBasis::rebuild(kind, ms, order.clone()))
}

/// Re-targets `ob` to the analysis order `perm` (relative to its current
/// order). Blocks are defined in analysis coordinates, so only the mapping to
/// dataset columns changes.
pub fn permute_inputs(ob: &OrderedBasis, perm: &Permutation) -> Result<OrderedBasis, BasisError> {
    if perm.len() != ob.n_inputs() {
        return Err(BasisError::InvalidPermutation(
            perm.as_slice().to_vec(),
            ob.n_inputs(),
        ));
    }
    Ok(OrderedBasis {
        permutation: ob.permutation.compose(perm),
        ..ob.clone()
    })
}

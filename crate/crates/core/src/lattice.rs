//! The two-row lattice-path model: paths with no two consecutive lower
//! vertices, the partial order each path induces on its essential
//! coordinates, and enumeration of the strict and tied total orders that
//! refine it.

use std::fmt;

use thiserror::Error;

/// Largest path length accepted by [`enumerate_paths`] unless overridden.
pub const DEFAULT_PATH_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("path must have at least one vertex")]
    Empty,
    #[error("consecutive lower vertices at positions {0} and {next}", next = .0 + 1)]
    AdjacentLower(usize),
    #[error("path length {requested} exceeds the enumeration cap {cap}")]
    SizeLimit { requested: usize, cap: usize },
}

/// A path through the `2 x s` lattice, one vertex per column.
/// `true` marks an upper vertex, `false` a lower one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePath {
    bits: Vec<bool>,
}

impl LatticePath {
    pub fn new(bits: Vec<bool>) -> Result<Self, LatticeError> {
        if bits.is_empty() {
            return Err(LatticeError::Empty);
        }
        if let Some(i) = bits.windows(2).position(|w| !w[0] && !w[1]) {
            return Err(LatticeError::AdjacentLower(i));
        }
        Ok(Self { bits })
    }

    /// Builds a path from a `0`/`1` word.
    pub fn from_word(word: &[u8]) -> Result<Self, LatticeError> {
        Self::new(word.iter().map(|&b| b != 0).collect())
    }

    /// Number of vertices `s` (the path has length `s - 1`).
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_upper(&self, column: usize) -> bool {
        self.bits[column]
    }

    pub fn upper_vertex_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Column-reversed path `(i, b_i) -> (i, b_{s+1-i})`.
    pub fn inverted(&self) -> Self {
        Self {
            bits: self.bits.iter().rev().copied().collect(),
        }
    }

    /// True for the zig-zag `lower, upper, lower, ..., lower` (the `∧^k`
    /// shape, including the single lower vertex).
    pub fn is_wedge_chain(&self) -> bool {
        self.len() % 2 == 1
            && self
                .bits
                .iter()
                .enumerate()
                .all(|(i, &b)| b == (i % 2 == 1))
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// All paths with `s` vertices, in lexicographic order of their words.
pub fn enumerate_paths(s: usize) -> Result<Vec<LatticePath>, LatticeError> {
    enumerate_paths_capped(s, DEFAULT_PATH_CAP)
}

pub fn enumerate_paths_capped(s: usize, cap: usize) -> Result<Vec<LatticePath>, LatticeError> {
    if s == 0 {
        return Err(LatticeError::Empty);
    }
    if s > cap {
        return Err(LatticeError::SizeLimit { requested: s, cap });
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(s);
    paths_rec(s, &mut word, &mut out);
    Ok(out)
}

fn paths_rec(s: usize, word: &mut Vec<bool>, out: &mut Vec<LatticePath>) {
    if word.len() == s {
        out.push(LatticePath { bits: word.clone() });
        return;
    }
    if word.last() != Some(&false) {
        word.push(false);
        paths_rec(s, word, out);
        word.pop();
    }
    word.push(true);
    paths_rec(s, word, out);
    word.pop();
}

/// The coordinate `p_{column+1, slot}` of a pair array (`slot` is 1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub column: usize,
    pub slot: u8,
}

impl Coord {
    fn index(self) -> usize {
        2 * self.column + (self.slot as usize - 1)
    }

    fn from_index(i: usize) -> Self {
        Self {
            column: i / 2,
            slot: (i % 2) as u8 + 1,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}{}", self.column + 1, self.slot)
    }
}

/// Partial order on the `s + 1` essential coordinates of a path.
///
/// Classes are numbered in order of first appearance when scanning
/// `p11, p12, p21, p22, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialOrder {
    classes: Vec<Vec<Coord>>,
    relations: Vec<(usize, usize)>,
    less: Vec<Vec<bool>>,
    start: usize,
    end: usize,
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

pub fn essential_order(path: &LatticePath) -> EssentialOrder {
    let s = path.len();
    let c = |column: usize, slot: u8| Coord { column, slot }.index();
    let mut parent: Vec<usize> = (0..2 * s).collect();
    let mut strict: Vec<(usize, usize)> = (0..s).map(|i| (c(i, 1), c(i, 2))).collect();
    for i in 0..s.saturating_sub(1) {
        let (eq_a, eq_b) = match (path.bits[i], path.bits[i + 1]) {
            // p_{i,1} = p_{i+1,1} < p_{i,2} < p_{i+1,2}
            (false, true) => {
                strict.push((c(i, 2), c(i + 1, 2)));
                (c(i, 1), c(i + 1, 1))
            }
            // p_{i,1} < p_{i,2} = p_{i+1,1} < p_{i+1,2}
            (true, true) => (c(i, 2), c(i + 1, 1)),
            // p_{i,1} < p_{i+1,1} < p_{i,2} = p_{i+1,2}
            (true, false) => {
                strict.push((c(i, 1), c(i + 1, 1)));
                (c(i, 2), c(i + 1, 2))
            }
            (false, false) => unreachable!("validated path"),
        };
        let (ra, rb) = (find(&mut parent, eq_a), find(&mut parent, eq_b));
        parent[ra] = rb;
    }

    let mut id_of_root = vec![usize::MAX; 2 * s];
    let mut class_of = vec![0usize; 2 * s];
    let mut classes: Vec<Vec<Coord>> = Vec::new();
    for i in 0..2 * s {
        let root = find(&mut parent, i);
        if id_of_root[root] == usize::MAX {
            id_of_root[root] = classes.len();
            classes.push(Vec::new());
        }
        class_of[i] = id_of_root[root];
        classes[class_of[i]].push(Coord::from_index(i));
    }
    debug_assert_eq!(classes.len(), s + 1);

    let mut relations: Vec<(usize, usize)> = strict
        .iter()
        .map(|&(a, b)| (class_of[a], class_of[b]))
        .collect();
    relations.sort_unstable();
    relations.dedup();

    let k = classes.len();
    let mut less = vec![vec![false; k]; k];
    for &(a, b) in &relations {
        less[a][b] = true;
    }
    for mid in 0..k {
        for a in 0..k {
            if less[a][mid] {
                for b in 0..k {
                    if less[mid][b] {
                        less[a][b] = true;
                    }
                }
            }
        }
    }
    assert!(
        (0..k).all(|a| !less[a][a]),
        "essential relations contain a cycle"
    );

    // The first vertex contributes |p11><p12| when upper and |p12><p11|
    // when lower; the last one likewise fixes the trailing bra.
    let start = class_of[if path.bits[0] { c(0, 1) } else { c(0, 2) }];
    let end = class_of[if path.bits[s - 1] {
        c(s - 1, 2)
    } else {
        c(s - 1, 1)
    }];

    EssentialOrder {
        classes,
        relations,
        less,
        start,
        end,
    }
}

impl EssentialOrder {
    /// Number of essential coordinates.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The coordinates merged into each essential coordinate.
    pub fn classes(&self) -> &[Vec<Coord>] {
        &self.classes
    }

    pub fn class_of(&self, coord: Coord) -> Option<usize> {
        self.classes
            .iter()
            .position(|members| members.contains(&coord))
    }

    /// Generating strict relations `(a, b)` meaning `a < b`.
    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    /// `a < b` in the transitive closure.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less[a][b] || self.less[b][a]
    }

    /// Class of `j_p`, the ket of the first vertex's weight.
    pub fn start(&self) -> usize {
        self.start
    }

    /// Class of `k_p`, the bra of the last vertex's weight.
    pub fn end(&self) -> usize {
        self.end
    }

    pub fn label(&self, class: usize) -> String {
        self.classes[class]
            .iter()
            .map(Coord::to_string)
            .collect::<Vec<_>>()
            .join("=")
    }

    fn minimal_in(&self, placed: &[bool], candidate: usize) -> bool {
        !placed[candidate] && (0..self.len()).all(|a| placed[a] || !self.less[a][candidate])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `j_p < k_p`: contributes to the strictly upper region.
    Forward,
    /// `k_p < j_p`: contributes to the strictly lower region.
    Reversed,
}

/// A strict total order refining an [`EssentialOrder`], listed from the
/// smallest coordinate upwards.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearExtension {
    order: Vec<usize>,
    rank: (usize, usize),
    forward: bool,
}

impl LinearExtension {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `(r, r')`: coordinates below `j_p` and above `k_p`.
    pub fn rank(&self) -> (usize, usize) {
        self.rank
    }

    pub fn orientation(&self) -> Orientation {
        if self.forward {
            Orientation::Forward
        } else {
            Orientation::Reversed
        }
    }

    /// Number of coordinates strictly between the two endpoints.
    pub fn between(&self) -> usize {
        let (r, rp) = self.rank;
        let s = self.order.len() - 1;
        if self.forward {
            s - 1 - r - rp
        } else {
            r + rp - s - 1
        }
    }
}

/// Total preorder refining an [`EssentialOrder`] whose tie classes have
/// size one or two, listed from the bottom block upwards.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegenerateOrdering {
    blocks: Vec<Vec<usize>>,
}

impl DegenerateOrdering {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Degree of degeneration: number of tied pairs.
    pub fn ties(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() == 2).count()
    }

    pub fn block_of(&self, class: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&class))
            .expect("class present")
    }
}

/// All linear extensions, in lexicographic order of their class sequences.
pub fn enumerate_linear_extensions(order: &EssentialOrder) -> Vec<LinearExtension> {
    let mut out = Vec::new();
    walk_orderings(order, false, &mut |blocks| {
        let seq: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
        let pos = |c: usize| seq.iter().position(|&x| x == c).expect("class present");
        let (ps, pe) = (pos(order.start), pos(order.end));
        out.push(LinearExtension {
            rank: (ps, seq.len() - 1 - pe),
            forward: ps < pe,
            order: seq,
        });
    });
    out
}

/// Total preorders with at least one tied pair of (necessarily
/// incomparable) coordinates, in lexicographic order of their blocks.
pub fn enumerate_degenerate_orderings(order: &EssentialOrder) -> Vec<DegenerateOrdering> {
    let mut out = Vec::new();
    walk_orderings(order, true, &mut |blocks| {
        if blocks.iter().any(|b| b.len() == 2) {
            out.push(DegenerateOrdering {
                blocks: blocks.to_vec(),
            });
        }
    });
    out
}

fn walk_orderings(order: &EssentialOrder, ties: bool, visit: &mut dyn FnMut(&[Vec<usize>])) {
    let mut placed = vec![false; order.len()];
    let mut blocks = Vec::with_capacity(order.len());
    walk_rec(order, ties, &mut placed, &mut blocks, visit);
}

fn walk_rec(
    order: &EssentialOrder,
    ties: bool,
    placed: &mut [bool],
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut dyn FnMut(&[Vec<usize>]),
) {
    if placed.iter().all(|&p| p) {
        visit(blocks);
        return;
    }
    let minimal: Vec<usize> = (0..order.len())
        .filter(|&c| order.minimal_in(placed, c))
        .collect();
    // Candidate blocks in lexicographic order: [a], then [a, b] for b > a.
    for (i, &a) in minimal.iter().enumerate() {
        placed[a] = true;
        blocks.push(vec![a]);
        walk_rec(order, ties, placed, blocks, visit);
        blocks.pop();
        if ties {
            // Two simultaneously minimal coordinates are incomparable.
            for &b in &minimal[i + 1..] {
                placed[b] = true;
                blocks.push(vec![a, b]);
                walk_rec(order, ties, placed, blocks, visit);
                blocks.pop();
                placed[b] = false;
            }
        }
        placed[a] = false;
    }
}

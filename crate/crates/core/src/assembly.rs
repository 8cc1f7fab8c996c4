//! Assembly trees and time-dependent assembly trees of a graph.
//!
//! This module is the ground truth for every count in the crate: it builds
//! the trees directly on a [`Graph`] and counts them either by enumeration or
//! by memoized recursion over vertex subsets. Nothing here knows about the
//! graph families or their closed forms.
//!
//! Trees are unordered; the canonical representative sorts the children of
//! every node by their smallest vertex, and that is the order in which the
//! enumerators emit children.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::Natural;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Which merges an assembly tree may perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GluingRule {
    /// Any laminar hierarchy is allowed; the graph is irrelevant.
    None,
    /// Every node label induces a connected subgraph.
    Connected,
    /// Every internal node has exactly two children joined by an edge.
    Edge,
}

impl GluingRule {
    pub const ALL: [GluingRule; 3] = [GluingRule::None, GluingRule::Connected, GluingRule::Edge];

    pub fn name(self) -> &'static str {
        match self {
            GluingRule::None => "none",
            GluingRule::Connected => "connected",
            GluingRule::Edge => "edge",
        }
    }
}

impl fmt::Display for GluingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GluingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(GluingRule::None),
            "connected" => Ok(GluingRule::Connected),
            "edge" => Ok(GluingRule::Edge),
            other => Err(Error::InvalidArgument(format!("unknown gluing rule `{other}`"))),
        }
    }
}

/// Size caps for the exponential operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest graph for which trees are materialised one by one.
    pub enumerate: usize,
    /// Largest graph for memoized subset counting of plain trees.
    pub count: usize,
    /// Largest graph for memoized counting of time-dependent trees, whose
    /// state space is the set partitions of the vertex set.
    pub timed_count: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumerate: 9, count: 16, timed_count: 10 }
    }
}

fn check_input(g: &Graph, limit: usize, what: &'static str) -> Result<()> {
    if g.n() > limit {
        return Err(Error::TooLarge { what, n: g.n(), limit });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tree model

/// A rooted tree whose nodes are labelled by vertex sets.
///
/// The fields are public so that malformed trees can be built and handed to
/// [`validate`]; trees produced by this crate are always canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssemblyTree {
    pub label: VertexSet,
    pub children: Vec<AssemblyTree>,
}

impl AssemblyTree {
    pub fn leaf(v: usize) -> Self {
        AssemblyTree { label: VertexSet::singleton(v), children: Vec::new() }
    }

    /// An internal node over `children`, labelled by their union and put in
    /// canonical child order.
    pub fn node(mut children: Vec<AssemblyTree>) -> Self {
        children.sort_by_key(|c| c.label.min());
        let label = children.iter().fold(VertexSet::EMPTY, |acc, c| acc.union(c.label));
        AssemblyTree { label, children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Sorts children by minimum vertex at every level.
    pub fn canonicalize(&mut self) {
        for c in &mut self.children {
            c.canonicalize();
        }
        self.children.sort_by_key(|c| c.label.min());
    }

    /// Number of internal (non-leaf) nodes.
    pub fn internal_count(&self) -> usize {
        if self.is_leaf() {
            0
        } else {
            1 + self.children.iter().map(AssemblyTree::internal_count).sum::<usize>()
        }
    }

    /// Labels of every node, pre-order.
    pub fn labels(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        self.walk(&mut |t| out.push(t.label));
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a AssemblyTree)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson::from_plain(self)).expect("tree serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TreeJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_plain()
    }

    pub fn to_dot(&self) -> String {
        let mut dot = DotWriter::default();
        dot.plain(self);
        dot.finish()
    }
}

/// An assembly tree with a formation time on every node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimedAssemblyTree {
    pub label: VertexSet,
    pub time: u32,
    pub children: Vec<TimedAssemblyTree>,
}

impl TimedAssemblyTree {
    pub fn leaf(v: usize) -> Self {
        TimedAssemblyTree { label: VertexSet::singleton(v), time: 0, children: Vec::new() }
    }

    pub fn node(time: u32, mut children: Vec<TimedAssemblyTree>) -> Self {
        children.sort_by_key(|c| c.label.min());
        let label = children.iter().fold(VertexSet::EMPTY, |acc, c| acc.union(c.label));
        TimedAssemblyTree { label, time, children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Time of the root, `m`.
    pub fn root_time(&self) -> u32 {
        self.time
    }

    /// Drops the times.
    pub fn untimed(&self) -> AssemblyTree {
        AssemblyTree { label: self.label, children: self.children.iter().map(Self::untimed).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson::from_timed(self)).expect("tree serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TreeJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_timed()
    }

    pub fn to_dot(&self) -> String {
        let mut dot = DotWriter::default();
        dot.timed(self);
        dot.finish()
    }
}

// ---------------------------------------------------------------------------
// Serialization

#[derive(Serialize, Deserialize)]
struct TreeJson {
    label: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    time: Option<u32>,
    children: Vec<TreeJson>,
}

fn parse_label(label: &[usize]) -> Result<VertexSet> {
    let mut set = VertexSet::EMPTY;
    for &v in label {
        if !(1..=crate::graph::MAX_VERTICES).contains(&v) {
            return Err(Error::Parse(format!("vertex {v} out of range")));
        }
        if set.contains(v) {
            return Err(Error::Parse(format!("vertex {v} repeated in a label")));
        }
        set.insert(v);
    }
    Ok(set)
}

impl TreeJson {
    fn from_plain(t: &AssemblyTree) -> Self {
        TreeJson { label: t.label.to_vec(), time: None, children: t.children.iter().map(Self::from_plain).collect() }
    }

    fn from_timed(t: &TimedAssemblyTree) -> Self {
        TreeJson {
            label: t.label.to_vec(),
            time: Some(t.time),
            children: t.children.iter().map(Self::from_timed).collect(),
        }
    }

    fn into_plain(self) -> Result<AssemblyTree> {
        if self.time.is_some() {
            return Err(Error::Parse("plain tree carries a time".into()));
        }
        Ok(AssemblyTree {
            label: parse_label(&self.label)?,
            children: self.children.into_iter().map(Self::into_plain).collect::<Result<_>>()?,
        })
    }

    fn into_timed(self) -> Result<TimedAssemblyTree> {
        let time = self.time.ok_or_else(|| Error::Parse("timed tree node without a time".into()))?;
        Ok(TimedAssemblyTree {
            label: parse_label(&self.label)?,
            time,
            children: self.children.into_iter().map(Self::into_timed).collect::<Result<_>>()?,
        })
    }
}

#[derive(Default)]
struct DotWriter {
    out: String,
    next: usize,
}

impl DotWriter {
    fn plain(&mut self, t: &AssemblyTree) -> usize {
        let id = self.emit_node(&t.label.to_string());
        for c in &t.children {
            let child = self.plain(c);
            let _ = writeln!(self.out, "  n{id} -> n{child};");
        }
        id
    }

    fn timed(&mut self, t: &TimedAssemblyTree) -> usize {
        let id = self.emit_node(&format!("{}@{}", t.label, t.time));
        for c in &t.children {
            let child = self.timed(c);
            let _ = writeln!(self.out, "  n{id} -> n{child};");
        }
        id
    }

    fn emit_node(&mut self, label: &str) -> usize {
        let id = self.next;
        self.next += 1;
        let _ = writeln!(self.out, "  n{id} [label=\"{label}\"];");
        id
    }

    fn finish(self) -> String {
        format!("digraph assembly {{\n{}}}\n", self.out)
    }
}

// ---------------------------------------------------------------------------
// Validation

/// A reason a tree fails validation. Node positions are given by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RootLabel { expected: VertexSet, found: VertexSet },
    VertexOutOfRange { node: VertexSet },
    LeafNotSingleton { node: VertexSet },
    TooFewChildren { node: VertexSet },
    OverlappingChildren { node: VertexSet },
    LabelNotUnion { node: VertexSet },
    Disconnected { node: VertexSet },
    NotBinary { node: VertexSet, children: usize },
    NoGluingEdge { node: VertexSet },
    LeafTime { node: VertexSet, time: u32 },
    RootTime { time: u32 },
    TimeNotIncreasing { child: VertexSet, parent: VertexSet },
    MissingTime { time: u32 },
}

/// Outcome of [`validate`]; empty `violations` means the tree is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the assembly tree definition plus `rule` for `t` on `g`.
///
/// Shares no code with the enumerators, so it can audit their output.
pub fn validate(g: &Graph, t: &AssemblyTree, rule: GluingRule) -> Validation {
    let mut v = Vec::new();
    if t.label != g.vertices() {
        v.push(Violation::RootLabel { expected: g.vertices(), found: t.label });
    }
    check_node(g, t.label, &t.children.iter().map(|c| c.label).collect::<Vec<_>>(), rule, &mut v);
    let mut stack: Vec<&AssemblyTree> = t.children.iter().collect();
    while let Some(node) = stack.pop() {
        check_node(g, node.label, &node.children.iter().map(|c| c.label).collect::<Vec<_>>(), rule, &mut v);
        stack.extend(node.children.iter());
    }
    Validation { violations: v }
}

fn check_node(g: &Graph, label: VertexSet, children: &[VertexSet], rule: GluingRule, out: &mut Vec<Violation>) {
    if label.is_empty() || !label.is_subset(g.vertices()) {
        out.push(Violation::VertexOutOfRange { node: label });
        return;
    }
    if children.is_empty() {
        if label.len() != 1 {
            out.push(Violation::LeafNotSingleton { node: label });
        }
        return;
    }
    if children.len() < 2 {
        out.push(Violation::TooFewChildren { node: label });
    }
    let mut union = VertexSet::EMPTY;
    let mut overlap = false;
    for &c in children {
        overlap |= !union.is_disjoint(c);
        union = union.union(c);
    }
    if overlap {
        out.push(Violation::OverlappingChildren { node: label });
    }
    if union != label {
        out.push(Violation::LabelNotUnion { node: label });
    }
    match rule {
        GluingRule::None => {}
        GluingRule::Connected => {
            if !is_connected_bfs(g, label) {
                out.push(Violation::Disconnected { node: label });
            }
        }
        GluingRule::Edge => {
            if children.len() != 2 {
                out.push(Violation::NotBinary { node: label, children: children.len() });
            } else if !g.edges().iter().any(|&(a, b)| {
                (children[0].contains(a) && children[1].contains(b))
                    || (children[0].contains(b) && children[1].contains(a))
            }) {
                out.push(Violation::NoGluingEdge { node: label });
            }
        }
    }
}

// Plain vertex-by-vertex search over the edge list, deliberately not the
// bit-parallel routine used by the counters.
fn is_connected_bfs(g: &Graph, s: VertexSet) -> bool {
    let members = s.to_vec();
    let mut seen = vec![members[0]];
    let mut i = 0;
    while i < seen.len() {
        let u = seen[i];
        for &v in &members {
            if !seen.contains(&v) && g.has_edge(u, v) {
                seen.push(v);
            }
        }
        i += 1;
    }
    seen.len() == members.len()
}

/// Checks the time-dependent definition plus `rule`.
pub fn validate_timed(g: &Graph, t: &TimedAssemblyTree, rule: GluingRule) -> Validation {
    let mut report = validate(g, &t.untimed(), rule);
    let v = &mut report.violations;
    let n = g.n() as u32;
    let m = t.time;
    if (n >= 2 && !(1..n).contains(&m)) || (n == 1 && m != 0) {
        v.push(Violation::RootTime { time: m });
    }
    let mut used = vec![false; m as usize + 1];
    let mut stack = vec![t];
    while let Some(node) = stack.pop() {
        if let Some(slot) = used.get_mut(node.time as usize) {
            *slot = true;
        }
        if node.is_leaf() && node.time != 0 {
            v.push(Violation::LeafTime { node: node.label, time: node.time });
        }
        for c in &node.children {
            if c.time >= node.time {
                v.push(Violation::TimeNotIncreasing { child: c.label, parent: node.label });
            }
            stack.push(c);
        }
    }
    for (time, seen) in used.iter().enumerate() {
        if !seen {
            v.push(Violation::MissingTime { time: time as u32 });
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Memoized counting of plain trees

struct SubsetCounter<'g> {
    g: &'g Graph,
    rule: GluingRule,
    // sum over proper splits, keyed by subset bits
    proper: HashMap<u64, Natural>,
    connected: HashMap<u64, bool>,
}

impl<'g> SubsetCounter<'g> {
    fn new(g: &'g Graph, rule: GluingRule) -> Self {
        SubsetCounter { g, rule, proper: HashMap::new(), connected: HashMap::new() }
    }

    fn connected(&mut self, s: VertexSet) -> bool {
        let g = self.g;
        *self.connected.entry(s.bits()).or_insert_with(|| g.connected_unchecked(s))
    }

    fn admissible(&mut self, s: VertexSet) -> bool {
        match self.rule {
            GluingRule::None => true,
            GluingRule::Connected | GluingRule::Edge => self.connected(s),
        }
    }

    /// Number of rule-satisfying trees whose root is labelled `s`.
    fn trees(&mut self, s: VertexSet) -> Natural {
        if s.len() == 1 {
            return Natural::one();
        }
        if !self.admissible(s) {
            return Natural::zero();
        }
        self.proper_sum(s)
    }

    /// Number of ways to split `s` into admissible blocks, each carrying a tree.
    fn forest(&mut self, s: VertexSet) -> Natural {
        if s.len() <= 1 {
            return Natural::one();
        }
        // Splits with the block of min(s) equal to s contribute trees(s) itself.
        self.proper_sum(s) + self.trees(s)
    }

    /// Σ over proper blocks A ∋ min(s) of trees(A) · (forest or tree of s∖A).
    fn proper_sum(&mut self, s: VertexSet) -> Natural {
        if let Some(v) = self.proper.get(&s.bits()) {
            return v.clone();
        }
        let low = s.bits() & s.bits().wrapping_neg();
        let rest = s.bits() ^ low;
        let mut total = Natural::zero();
        // sub ranges over proper subsets of rest; A = low ∪ sub ≠ s.
        let mut sub = (rest.wrapping_sub(1)) & rest;
        loop {
            let a = VertexSet::from_bits(low | sub);
            let b = s.difference(a);
            match self.rule {
                GluingRule::Edge => {
                    if self.g.crossing_unchecked(a, b) {
                        let ta = self.trees(a);
                        if !ta.is_zero() {
                            total += ta * self.trees(b);
                        }
                    }
                }
                _ => {
                    let ta = self.trees(a);
                    if !ta.is_zero() {
                        total += ta * self.forest(b);
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        self.proper.insert(s.bits(), total.clone());
        total
    }
}

/// Number of assembly trees of `g` under `rule`.
pub fn count_trees(g: &Graph, rule: GluingRule) -> Result<Natural> {
    count_trees_with_limits(g, rule, &Limits::default())
}

pub fn count_trees_with_limits(g: &Graph, rule: GluingRule, limits: &Limits) -> Result<Natural> {
    check_input(g, limits.count, "tree counting")?;
    Ok(SubsetCounter::new(g, rule).trees(g.vertices()))
}

// ---------------------------------------------------------------------------
// Enumeration of plain trees

struct Enumerator<'g> {
    g: &'g Graph,
    rule: GluingRule,
}

impl Enumerator<'_> {
    fn block_ok(&self, s: VertexSet) -> bool {
        match self.rule {
            GluingRule::None => true,
            _ => self.g.connected_unchecked(s),
        }
    }

    /// Every way to cut `s` into the root's child blocks, canonical order.
    fn root_splits(&self, s: VertexSet) -> Vec<Vec<VertexSet>> {
        let mut out = Vec::new();
        match self.rule {
            GluingRule::Edge => {
                let low = s.bits() & s.bits().wrapping_neg();
                let rest = s.bits() ^ low;
                let mut subs = Vec::new();
                let mut sub = rest.wrapping_sub(1) & rest;
                loop {
                    subs.push(sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
                // ascending submask order keeps the listing stable and readable
                for sub in subs.into_iter().rev() {
                    let a = VertexSet::from_bits(low | sub);
                    let b = s.difference(a);
                    if self.block_ok(a) && self.block_ok(b) && self.g.crossing_unchecked(a, b) {
                        out.push(vec![a, b]);
                    }
                }
            }
            _ => {
                let mut blocks = Vec::new();
                self.partitions(s, s, &mut blocks, &mut out);
            }
        }
        out
    }

    fn partitions(
        &self,
        whole: VertexSet,
        rest: VertexSet,
        blocks: &mut Vec<VertexSet>,
        out: &mut Vec<Vec<VertexSet>>,
    ) {
        if rest.is_empty() {
            if blocks.len() >= 2 {
                out.push(blocks.clone());
            }
            return;
        }
        let low = rest.bits() & rest.bits().wrapping_neg();
        let others = rest.bits() ^ low;
        let mut subs = Vec::new();
        let mut sub = others;
        loop {
            subs.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        for sub in subs.into_iter().rev() {
            let block = VertexSet::from_bits(low | sub);
            if block == whole || !self.block_ok(block) {
                continue;
            }
            blocks.push(block);
            self.partitions(whole, rest.difference(block), blocks, out);
            blocks.pop();
        }
    }

    fn each(&self, s: VertexSet, f: &mut dyn FnMut(&AssemblyTree)) {
        if s.len() == 1 {
            f(&AssemblyTree { label: s, children: Vec::new() });
            return;
        }
        for blocks in self.root_splits(s) {
            let mut acc = Vec::with_capacity(blocks.len());
            self.product(s, &blocks, &mut acc, f);
        }
    }

    fn product(
        &self,
        s: VertexSet,
        blocks: &[VertexSet],
        acc: &mut Vec<AssemblyTree>,
        f: &mut dyn FnMut(&AssemblyTree),
    ) {
        let Some((&first, rest)) = blocks.split_first() else {
            f(&AssemblyTree { label: s, children: acc.clone() });
            return;
        };
        self.each(first, &mut |sub| {
            acc.push(sub.clone());
            self.product(s, rest, acc, f);
            acc.pop();
        });
    }
}

/// Streams every assembly tree of `g` under `rule`, in canonical order.
pub fn for_each_tree(g: &Graph, rule: GluingRule, f: impl FnMut(&AssemblyTree)) -> Result<()> {
    for_each_tree_with_limits(g, rule, &Limits::default(), f)
}

pub fn for_each_tree_with_limits(
    g: &Graph,
    rule: GluingRule,
    limits: &Limits,
    mut f: impl FnMut(&AssemblyTree),
) -> Result<()> {
    check_input(g, limits.enumerate, "tree enumeration")?;
    Enumerator { g, rule }.each(g.vertices(), &mut f);
    Ok(())
}

/// All assembly trees of `g` under `rule`, in canonical order.
pub fn enumerate_trees(g: &Graph, rule: GluingRule) -> Result<Vec<AssemblyTree>> {
    let mut out = Vec::new();
    for_each_tree(g, rule, |t| out.push(t.clone()))?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Time labels

/// Internal nodes of a tree in post-order, each with the mask of its
/// internal children (by post-order index).
struct InternalLayout {
    child_masks: Vec<u64>,
}

impl InternalLayout {
    fn of(t: &AssemblyTree) -> Self {
        let mut layout = InternalLayout { child_masks: Vec::new() };
        layout.visit(t);
        layout
    }

    fn visit(&mut self, t: &AssemblyTree) -> Option<usize> {
        if t.is_leaf() {
            return None;
        }
        let mut mask = 0u64;
        for c in &t.children {
            if let Some(i) = self.visit(c) {
                mask |= 1 << i;
            }
        }
        self.child_masks.push(mask);
        Some(self.child_masks.len() - 1)
    }

    fn full(&self) -> u64 {
        match self.child_masks.len() {
            64 => u64::MAX,
            k => (1u64 << k) - 1,
        }
    }

    /// Nodes outside `placed` whose internal children are all placed.
    fn available(&self, placed: u64) -> u64 {
        self.child_masks
            .iter()
            .enumerate()
            .filter(|&(i, &m)| placed >> i & 1 == 0 && m & !placed == 0)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Number of ways to time-stamp `t` into a time-dependent assembly tree.
///
/// Each time step forms a nonempty set of internal nodes whose internal
/// children were all formed earlier; the count runs over sequences of such
/// layers, memoized on the set of nodes formed so far.
pub fn count_level_assignments(t: &AssemblyTree) -> Natural {
    let layout = InternalLayout::of(t);
    let mut memo = HashMap::new();
    layers(&layout, 0, &mut memo)
}

fn layers(layout: &InternalLayout, placed: u64, memo: &mut HashMap<u64, Natural>) -> Natural {
    if placed == layout.full() {
        return Natural::one();
    }
    if let Some(v) = memo.get(&placed) {
        return v.clone();
    }
    let avail = layout.available(placed);
    let mut total = Natural::zero();
    let mut sub = avail;
    while sub != 0 {
        total += layers(layout, placed | sub, memo);
        sub = (sub - 1) & avail;
    }
    memo.insert(placed, total.clone());
    total
}

/// Every time labelling of `t`, as timed trees.
pub fn level_assignments(t: &AssemblyTree) -> Vec<TimedAssemblyTree> {
    let layout = InternalLayout::of(t);
    let mut times = vec![0u32; layout.child_masks.len()];
    let mut out = Vec::new();
    assign(&layout, 0, 1, &mut times, &mut |times| {
        let mut next = 0;
        out.push(stamp(t, times, &mut next));
    });
    out
}

fn assign(layout: &InternalLayout, placed: u64, level: u32, times: &mut [u32], emit: &mut dyn FnMut(&[u32])) {
    if placed == layout.full() {
        emit(times);
        return;
    }
    let avail = layout.available(placed);
    // ascending submask order
    let mut subs = Vec::new();
    let mut sub = avail;
    while sub != 0 {
        subs.push(sub);
        sub = (sub - 1) & avail;
    }
    for sub in subs.into_iter().rev() {
        for (i, time) in times.iter_mut().enumerate() {
            if sub >> i & 1 == 1 {
                *time = level;
            }
        }
        assign(layout, placed | sub, level + 1, times, emit);
    }
}

fn stamp(t: &AssemblyTree, times: &[u32], next: &mut usize) -> TimedAssemblyTree {
    if t.is_leaf() {
        return TimedAssemblyTree { label: t.label, time: 0, children: Vec::new() };
    }
    let children = t.children.iter().map(|c| stamp(c, times, next)).collect();
    let time = times[*next];
    *next += 1;
    TimedAssemblyTree { label: t.label, time, children }
}

/// Streams every time-dependent assembly tree of `g` under `rule`: trees in
/// canonical order, and for each tree its labellings in layer order.
pub fn for_each_timed_tree(g: &Graph, rule: GluingRule, f: impl FnMut(&TimedAssemblyTree)) -> Result<()> {
    for_each_timed_tree_with_limits(g, rule, &Limits::default(), f)
}

pub fn for_each_timed_tree_with_limits(
    g: &Graph,
    rule: GluingRule,
    limits: &Limits,
    mut f: impl FnMut(&TimedAssemblyTree),
) -> Result<()> {
    for_each_tree_with_limits(g, rule, limits, |t| {
        for timed in level_assignments(t) {
            f(&timed);
        }
    })
}

pub fn enumerate_timed_trees(g: &Graph, rule: GluingRule) -> Result<Vec<TimedAssemblyTree>> {
    let mut out = Vec::new();
    for_each_timed_tree(g, rule, |t| out.push(t.clone()))?;
    Ok(out)
}

/// Number of time-dependent assembly trees, as the sum of
/// [`count_level_assignments`] over the enumerated plain trees.
pub fn count_timed_trees_by_enumeration(g: &Graph, rule: GluingRule) -> Result<Natural> {
    count_timed_trees_by_enumeration_with_limits(g, rule, &Limits::default())
}

pub fn count_timed_trees_by_enumeration_with_limits(g: &Graph, rule: GluingRule, limits: &Limits) -> Result<Natural> {
    let mut total = Natural::zero();
    for_each_tree_with_limits(g, rule, limits, |t| total += count_level_assignments(t))?;
    Ok(total)
}

/// Number of time-dependent assembly trees of `g` under `rule`.
///
/// Counts strictly coarsening chains of set partitions from all singletons
/// to the whole vertex set, where every block formed at a step obeys the
/// rule; memoized on the current partition. Agrees with
/// [`count_timed_trees_by_enumeration`].
pub fn count_timed_trees(g: &Graph, rule: GluingRule) -> Result<Natural> {
    count_timed_trees_with_limits(g, rule, &Limits::default())
}

pub fn count_timed_trees_with_limits(g: &Graph, rule: GluingRule, limits: &Limits) -> Result<Natural> {
    check_input(g, limits.timed_count, "timed tree counting")?;
    let start: Vec<VertexSet> = g.vertices().iter().map(VertexSet::singleton).collect();
    let mut chains = ChainCounter { g, rule, memo: HashMap::new() };
    Ok(chains.count(&start))
}

struct ChainCounter<'g> {
    g: &'g Graph,
    rule: GluingRule,
    memo: HashMap<Vec<u64>, Natural>,
}

impl ChainCounter<'_> {
    fn count(&mut self, blocks: &[VertexSet]) -> Natural {
        if blocks.len() == 1 {
            return Natural::one();
        }
        let key: Vec<u64> = blocks.iter().map(|b| b.bits()).collect();
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut next = Vec::new();
        let mut merged = Vec::new();
        self.coarsenings(blocks, 0, &mut merged, false, &mut next);
        let mut total = Natural::zero();
        for mut q in next {
            q.sort_by_key(|b| VertexSet::min(*b));
            total += self.count(&q);
        }
        self.memo.insert(key, total.clone());
        total
    }

    // Groups the blocks (in order) into the blocks of the next partition.
    fn coarsenings(
        &self,
        blocks: &[VertexSet],
        used: u64,
        acc: &mut Vec<VertexSet>,
        changed: bool,
        out: &mut Vec<Vec<VertexSet>>,
    ) {
        let k = blocks.len();
        let Some(first) = (0..k).find(|&i| used >> i & 1 == 0) else {
            if changed {
                out.push(acc.clone());
            }
            return;
        };
        let free: u64 = (first + 1..k).filter(|&i| used >> i & 1 == 0).fold(0, |m, i| m | 1 << i);
        let mut sub = free;
        loop {
            let group_size = sub.count_ones() as usize + 1;
            let label = (0..k)
                .filter(|&i| i == first || sub >> i & 1 == 1)
                .fold(VertexSet::EMPTY, |acc, i| acc.union(blocks[i]));
            let ok = group_size == 1
                || match self.rule {
                    GluingRule::None => true,
                    GluingRule::Connected => self.g.connected_unchecked(label),
                    GluingRule::Edge => {
                        group_size == 2 && {
                            let other = blocks[sub.trailing_zeros() as usize];
                            self.g.crossing_unchecked(blocks[first], other)
                        }
                    }
                };
            if ok {
                acc.push(label);
                self.coarsenings(blocks, used | sub | 1 << first, acc, changed || group_size > 1, out);
                acc.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
}

// ---------------------------------------------------------------------------
// Frontier partitions

/// The maximal node labels among nodes formed at or before some time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrontierPartition {
    blocks: Vec<VertexSet>,
}

impl FrontierPartition {
    /// Blocks ordered by smallest vertex.
    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `𝒫_j(T)`: the maximal labels among nodes of `t` with time at most `j`.
pub fn frontier_partition(t: &TimedAssemblyTree, j: u32) -> Result<FrontierPartition> {
    if j > t.time {
        return Err(Error::InvalidArgument(format!("time {j} exceeds the root time {}", t.time)));
    }
    let mut blocks = Vec::new();
    let mut stack = vec![t];
    while let Some(node) = stack.pop() {
        // times strictly increase towards the root, so the first node at or
        // below j on any root path is maximal
        if node.time <= j {
            blocks.push(node.label);
        } else {
            stack.extend(node.children.iter());
        }
    }
    blocks.sort_by_key(|b| VertexSet::min(*b));
    Ok(FrontierPartition { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn leaves(vs: &[usize]) -> Vec<AssemblyTree> {
        vs.iter().map(|&v| AssemblyTree::leaf(v)).collect()
    }

    fn k3_trees() -> (AssemblyTree, [AssemblyTree; 3]) {
        let flat = AssemblyTree::node(leaves(&[1, 2, 3]));
        let pair = |a, b, c| AssemblyTree::node(vec![AssemblyTree::node(leaves(&[a, b])), AssemblyTree::leaf(c)]);
        (flat, [pair(1, 2, 3), pair(1, 3, 2), pair(2, 3, 1)])
    }

    #[test]
    fn k3_edge_and_connected_listings() {
        let k3 = Graph::complete(3).unwrap();
        let (flat, pairs) = k3_trees();
        let edge = enumerate_trees(&k3, GluingRule::Edge).unwrap();
        assert_eq!(edge.len(), 3);
        for p in &pairs {
            assert!(edge.contains(p));
        }
        let conn = enumerate_trees(&k3, GluingRule::Connected).unwrap();
        assert_eq!(conn.len(), 4);
        assert!(conn.contains(&flat));
        assert!(validate(&k3, &flat, GluingRule::Connected).is_valid());
        let edge_check = validate(&k3, &flat, GluingRule::Edge);
        assert_eq!(edge_check.violations, vec![Violation::NotBinary { node: set(&[1, 2, 3]), children: 3 }]);
    }

    #[test]
    fn path3_disconnected_merge_is_rejected() {
        let p3 = Graph::path(3).unwrap();
        let t = AssemblyTree::node(vec![AssemblyTree::node(leaves(&[1, 3])), AssemblyTree::leaf(2)]);
        let report = validate(&p3, &t, GluingRule::Connected);
        assert_eq!(report.violations, vec![Violation::Disconnected { node: set(&[1, 3]) }]);
        assert!(validate(&p3, &t, GluingRule::None).is_valid());
        assert!(!validate(&p3, &t, GluingRule::Edge).is_valid());
    }

    #[test]
    fn malformed_trees_are_reported() {
        let k3 = Graph::complete(3).unwrap();
        let unary = AssemblyTree { label: set(&[1, 2, 3]), children: vec![AssemblyTree::node(leaves(&[1, 2, 3]))] };
        assert!(validate(&k3, &unary, GluingRule::None)
            .violations
            .contains(&Violation::TooFewChildren { node: set(&[1, 2, 3]) }));
        let wrong_root = AssemblyTree::node(leaves(&[1, 2]));
        assert!(validate(&k3, &wrong_root, GluingRule::None)
            .violations
            .contains(&Violation::RootLabel { expected: set(&[1, 2, 3]), found: set(&[1, 2]) }));
        let fat_leaf = AssemblyTree {
            label: set(&[1, 2, 3]),
            children: vec![AssemblyTree { label: set(&[1, 2]), children: vec![] }, AssemblyTree::leaf(3)],
        };
        assert!(validate(&k3, &fat_leaf, GluingRule::None)
            .violations
            .contains(&Violation::LeafNotSingleton { node: set(&[1, 2]) }));
        let overlap = AssemblyTree {
            label: set(&[1, 2, 3]),
            children: vec![AssemblyTree::node(leaves(&[1, 2])), AssemblyTree::node(leaves(&[2, 3]))],
        };
        assert!(validate(&k3, &overlap, GluingRule::None)
            .violations
            .contains(&Violation::OverlappingChildren { node: set(&[1, 2, 3]) }));
        let not_union = AssemblyTree { label: set(&[1, 2, 3]), children: leaves(&[1, 2]) };
        assert!(validate(&k3, &not_union, GluingRule::None)
            .violations
            .contains(&Violation::LabelNotUnion { node: set(&[1, 2, 3]) }));
        let p3 = Graph::path(3).unwrap();
        let no_edge = AssemblyTree::node(vec![AssemblyTree::node(leaves(&[1, 2])), AssemblyTree::leaf(3)]);
        assert!(validate(&p3, &no_edge, GluingRule::Edge).is_valid());
        let no_edge = AssemblyTree::node(vec![AssemblyTree::node(leaves(&[2, 3])), AssemblyTree::leaf(1)]);
        assert!(validate(&p3, &no_edge, GluingRule::Edge).is_valid());
        let s3 = Graph::star(3).unwrap();
        let bad = AssemblyTree::node(vec![AssemblyTree::node(leaves(&[2, 3])), AssemblyTree::leaf(1)]);
        assert!(validate(&s3, &bad, GluingRule::Edge)
            .violations
            .contains(&Violation::NoGluingEdge { node: set(&[2, 3]) }));
    }

    #[test]
    fn single_vertex_graph() {
        let p1 = Graph::path(1).unwrap();
        for rule in GluingRule::ALL {
            assert_eq!(enumerate_trees(&p1, rule).unwrap(), vec![AssemblyTree::leaf(1)]);
            assert_eq!(count_trees(&p1, rule).unwrap(), Natural::one());
            assert_eq!(count_timed_trees(&p1, rule).unwrap(), Natural::one());
            let timed = enumerate_timed_trees(&p1, rule).unwrap();
            assert_eq!(timed, vec![TimedAssemblyTree::leaf(1)]);
            assert!(validate_timed(&p1, &timed[0], rule).is_valid());
        }
    }

    #[test]
    fn counts_small_examples() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(count_trees(&k3, GluingRule::Connected).unwrap(), 4u32.into());
        assert_eq!(count_trees(&k3, GluingRule::Edge).unwrap(), 3u32.into());
        assert_eq!(count_trees(&Graph::path(4).unwrap(), GluingRule::Connected).unwrap(), 11u32.into());
        assert_eq!(count_trees(&Graph::complete(4).unwrap(), GluingRule::None).unwrap(), 26u32.into());
        assert_eq!(count_timed_trees(&k3, GluingRule::Connected).unwrap(), 4u32.into());
        assert_eq!(count_timed_trees(&k3, GluingRule::Edge).unwrap(), 3u32.into());
        assert_eq!(count_timed_trees(&Graph::path(3).unwrap(), GluingRule::Connected).unwrap(), 3u32.into());
    }

    #[test]
    fn disconnected_and_oversized_inputs_fail() {
        let g = Graph::new(3, &[(1, 2)]).unwrap();
        assert_eq!(count_trees(&g, GluingRule::None), Err(Error::Disconnected));
        assert_eq!(enumerate_trees(&g, GluingRule::Connected), Err(Error::Disconnected));
        let big = Graph::path(10).unwrap();
        assert!(matches!(enumerate_trees(&big, GluingRule::Edge), Err(Error::TooLarge { .. })));
        assert!(count_trees(&big, GluingRule::Edge).is_ok());
        let limits = Limits { enumerate: 10, ..Limits::default() };
        assert!(for_each_tree_with_limits(&big, GluingRule::Edge, &limits, |_| {}).is_ok());
    }

    #[test]
    fn two_cherries_have_three_timings() {
        let t = AssemblyTree::node(vec![AssemblyTree::node(leaves(&[1, 2])), AssemblyTree::node(leaves(&[3, 4]))]);
        assert_eq!(count_level_assignments(&t), 3u32.into());
        let timed = level_assignments(&t);
        assert_eq!(timed.len(), 3);
        let roots: Vec<u32> = timed.iter().map(|t| t.time).collect();
        assert_eq!(roots, vec![3, 3, 2]);
    }

    #[test]
    fn chains_and_flat_roots_have_one_timing() {
        let flat = AssemblyTree::node(leaves(&[1, 2, 3, 4, 5]));
        assert_eq!(count_level_assignments(&flat), Natural::one());
        let mut chain = AssemblyTree::leaf(1);
        for v in 2..=6 {
            chain = AssemblyTree::node(vec![chain, AssemblyTree::node(leaves(&[v + 10, v + 20]))]);
        }
        // caterpillar-like nesting with cherries hanging off: not a chain
        assert!(count_level_assignments(&chain) > Natural::one());
        let mut chain = AssemblyTree::leaf(1);
        for v in 2..=6 {
            chain = AssemblyTree::node(vec![chain, AssemblyTree::leaf(v)]);
        }
        assert_eq!(count_level_assignments(&chain), Natural::one());
        assert_eq!(count_level_assignments(&AssemblyTree::leaf(1)), Natural::one());
    }

    fn seven_vertex_tree() -> TimedAssemblyTree {
        let l = TimedAssemblyTree::leaf;
        TimedAssemblyTree::node(
            3,
            vec![
                TimedAssemblyTree::node(1, vec![l(1), l(3), l(5), l(7)]),
                TimedAssemblyTree::node(2, vec![l(4), TimedAssemblyTree::node(1, vec![l(2), l(6)])]),
            ],
        )
    }

    #[test]
    fn seven_vertex_frontiers() {
        let t = seven_vertex_tree();
        let p2 = frontier_partition(&t, 2).unwrap();
        assert_eq!(p2.blocks(), &[set(&[1, 3, 5, 7]), set(&[2, 4, 6])]);
        let p0 = frontier_partition(&t, 0).unwrap();
        assert_eq!(p0.blocks(), (1..=7).map(VertexSet::singleton).collect::<Vec<_>>().as_slice());
        let p1 = frontier_partition(&t, 1).unwrap();
        assert_eq!(p1.blocks(), &[set(&[1, 3, 5, 7]), set(&[2, 6]), set(&[4])]);
        assert_eq!(frontier_partition(&t, 3).unwrap().blocks(), &[VertexSet::full(7)]);
        assert!(frontier_partition(&t, 4).is_err());
    }

    #[test]
    fn seven_vertex_tree_validates_on_a_graph_with_connected_labels() {
        let g = Graph::new(7, &[(1, 3), (3, 5), (5, 7), (2, 6), (4, 6), (1, 2)]).unwrap();
        let t = seven_vertex_tree();
        assert!(validate_timed(&g, &t, GluingRule::Connected).is_valid());
        assert!(validate_timed(&g, &t, GluingRule::None).is_valid());
        assert!(!validate_timed(&g, &t, GluingRule::Edge).is_valid());
    }

    #[test]
    fn timed_violations() {
        let g = Graph::complete(4).unwrap();
        let l = TimedAssemblyTree::leaf;
        let mut t = TimedAssemblyTree::node(2, vec![TimedAssemblyTree::node(2, vec![l(1), l(2)]), l(3), l(4)]);
        let v = validate_timed(&g, &t, GluingRule::None).violations;
        assert!(v.contains(&Violation::TimeNotIncreasing { child: set(&[1, 2]), parent: set(&[1, 2, 3, 4]) }));
        assert!(v.contains(&Violation::MissingTime { time: 1 }));
        t.children[0].time = 1;
        assert!(validate_timed(&g, &t, GluingRule::None).is_valid());
        t.children[1].time = 1;
        assert!(validate_timed(&g, &t, GluingRule::None)
            .violations
            .contains(&Violation::LeafTime { node: set(&[3]), time: 1 }));
        let late = TimedAssemblyTree::node(4, vec![l(1), l(2), l(3), l(4)]);
        assert!(validate_timed(&g, &late, GluingRule::None).violations.contains(&Violation::RootTime { time: 4 }));
    }

    #[test]
    fn serialization_formats() {
        let leaf = AssemblyTree::leaf(1);
        assert_eq!(leaf.to_json(), r#"{"label":[1],"children":[]}"#);
        let (_, pairs) = k3_trees();
        assert_eq!(
            pairs[0].to_json(),
            r#"{"label":[1,2,3],"children":[{"label":[1,2],"children":[{"label":[1],"children":[]},{"label":[2],"children":[]}]},{"label":[3],"children":[]}]}"#
        );
        assert_eq!(
            pairs[0].to_dot(),
            "digraph assembly {\n  n0 [label=\"{1,2,3}\"];\n  n1 [label=\"{1,2}\"];\n  n2 [label=\"{1}\"];\n  n1 -> n2;\n  n3 [label=\"{2}\"];\n  n1 -> n3;\n  n0 -> n1;\n  n4 [label=\"{3}\"];\n  n0 -> n4;\n}\n"
        );
        let t = seven_vertex_tree();
        let json = t.to_json();
        assert!(json.starts_with(r#"{"label":[1,2,3,4,5,6,7],"time":3,"children":"#));
        assert_eq!(TimedAssemblyTree::from_json(&json).unwrap(), t);
        assert!(t.to_dot().contains("n0 [label=\"{1,2,3,4,5,6,7}@3\"]"));
        assert!(AssemblyTree::from_json(&json).is_err());
        assert!(TimedAssemblyTree::from_json(&leaf.to_json()).is_err());
        assert!(AssemblyTree::from_json(r#"{"label":[0],"children":[]}"#).is_err());
        assert!(AssemblyTree::from_json(r#"{"label":[1,1],"children":[]}"#).is_err());
    }

    #[test]
    fn rule_parsing() {
        for rule in GluingRule::ALL {
            assert_eq!(rule.name().parse::<GluingRule>().unwrap(), rule);
        }
        assert!("glue".parse::<GluingRule>().is_err());
    }
}

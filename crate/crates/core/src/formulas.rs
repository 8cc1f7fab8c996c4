//! Closed forms and recursions for assembly-tree counts of the star, path,
//! cycle and complete graph families.
//!
//! Index conventions: star counts take the total number of vertices
//! (`total = leaves + 1`); every other family takes its vertex count `n`.
//! Cycles on one or two vertices are not simple graphs, so their values are
//! fixed base cases of the recursions and not graph computations.
//!
//! Recursive sequences are memoized in process-wide tables guarded by a
//! mutex; a table only ever grows by appending values that depend on earlier
//! entries, so concurrent callers always see the same numbers.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::assembly::GluingRule;
use crate::combinat::{binomial, factorial, multinomial, partitions, stirling2_row, Natural};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// An append-only table of sequence values indexed from 0.
struct Memo<T = Natural>(Mutex<Vec<T>>);

impl<T: Clone> Memo<T> {
    const fn new() -> Self {
        Memo(Mutex::new(Vec::new()))
    }

    /// Value at `n`, extending the table with `next(prefix)` as needed.
    fn get(&self, n: usize, next: impl Fn(&[T]) -> T) -> T {
        let mut values = self.0.lock().unwrap_or_else(|e| e.into_inner());
        while values.len() <= n {
            let v = next(&values);
            values.push(v);
        }
        values[n].clone()
    }
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

/// Number of ordered set partitions of an `n`-set, `Σ_{k=1..n} k!·S₂(n,k)`;
/// 1 for `n = 0`.
pub fn fubini(n: usize) -> Natural {
    if n == 0 {
        return Natural::one();
    }
    stirling2_row(n).iter().enumerate().skip(1).map(|(k, s)| factorial(k) * s).sum()
}

/// Connected-rule assembly trees of the star on `total` vertices.
pub fn connected_star(total: usize) -> Result<Natural> {
    require(total >= 2, || format!("stars need at least 2 vertices, got {total}"))?;
    Ok(fubini(total - 1))
}

// Entry m holds (f(m), s(m)): f counts super Catalan trees with m leaves and
// s counts ordered lists of such trees with m leaves in total (s(0) = 1).
static SUPER_CATALAN: Memo<(Natural, Natural)> = Memo::new();

fn super_catalan_entry(m: usize) -> (Natural, Natural) {
    SUPER_CATALAN.get(m, |prev| {
        let m = prev.len();
        if m == 0 {
            return (Natural::zero(), Natural::one());
        }
        // a tree is a leaf or a root over a list of at least two subtrees:
        // its first subtree, then a nonempty list of the rest
        let split: Natural = (1..m).map(|p| &prev[p].0 * &prev[m - p].1).sum();
        let f = if m == 1 { Natural::one() } else { split.clone() };
        let s = split + &f;
        (f, s)
    })
}

/// Plane trees with `n` leaves and no unary nodes (super Catalan numbers).
pub fn super_catalan(n: usize) -> Result<Natural> {
    require(n >= 1, || "super Catalan numbers start at n = 1".into())?;
    Ok(super_catalan_entry(n).0)
}

/// Ordered lists of super Catalan trees with `m` leaves in total.
fn super_catalan_lists(m: usize) -> Natural {
    super_catalan_entry(m).1
}

/// Connected-rule assembly trees of the path on `n` vertices.
pub fn connected_path(n: usize) -> Result<Natural> {
    require(n >= 1, || "paths need at least 1 vertex".into())?;
    super_catalan(n)
}

/// Connected-rule assembly trees of the cycle on `n ≥ 3` vertices:
/// `Σ_{k≥2} Σ_{i₁+…+i_k=n} i₁·Π SC(i_j)`.
///
/// The compositions are grouped by their first part `i₁`; the remaining
/// parts range over all nonempty lists summing to `n − i₁`.
pub fn connected_cycle(n: usize) -> Result<Natural> {
    require(n >= 3, || format!("cycles need at least 3 vertices, got {n}"))?;
    Ok((1..n).map(|first| Natural::from(first) * super_catalan_entry(first).0 * super_catalan_lists(n - first)).sum())
}

/// Which binomial closed form of [`connected_cycle`] to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleClosedForm {
    /// `Σ_{i=0}^{n−2} C(n−2,i)·C(n+i−1,i)`
    A,
    /// `Σ_{k=0}^{n−2} C(n−2,k)·C(n−1,k+1)·2^k`
    B,
}

impl FromStr for CycleClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(CycleClosedForm::A),
            "b" => Ok(CycleClosedForm::B),
            other => Err(Error::InvalidArgument(format!("unknown closed form `{other}`, expected a or b"))),
        }
    }
}

pub fn connected_cycle_closed(n: usize, variant: CycleClosedForm) -> Result<Natural> {
    require(n >= 3, || format!("cycles need at least 3 vertices, got {n}"))?;
    let n = n as i64;
    Ok(match variant {
        CycleClosedForm::A => (0..=n - 2).map(|i| binomial(n - 2, i) * binomial(n + i - 1, i)).sum(),
        CycleClosedForm::B => (0..=n - 2).map(|k| (binomial(n - 2, k) * binomial(n - 1, k + 1)) << (k as usize)).sum(),
    })
}

static CONNECTED_COMPLETE: Memo = Memo::new();

/// Connected-rule assembly trees of `K_n`: a sum over the integer partition
/// formed by the root's block sizes, weighted by the number of set
/// partitions of that shape.
pub fn connected_complete(n: usize) -> Result<Natural> {
    require(n >= 1, || "complete graphs need at least 1 vertex".into())?;
    Ok(CONNECTED_COMPLETE.get(n, |prev| {
        let n = prev.len();
        if n <= 1 {
            return Natural::from(n);
        }
        let mut total = Natural::zero();
        for k in 2..=n {
            for lambda in partitions(n, k) {
                let shapes = multinomial(lambda.parts())
                    / (1..=n).map(|i| factorial(lambda.multiplicity(i))).product::<Natural>();
                let inner: Natural = lambda.parts().iter().map(|&p| &prev[p]).product();
                total += shapes * inner;
            }
        }
        total
    }))
}

/// Time-dependent connected-rule trees of the star on `total` vertices.
pub fn td_connected_star(total: usize) -> Result<Natural> {
    connected_star(total)
}

/// Time-dependent connected-rule trees of the path on `n` vertices:
/// the Fubini number of the `n − 1` edges, each closed at some time step.
pub fn td_connected_path(n: usize) -> Result<Natural> {
    require(n >= 1, || "paths need at least 1 vertex".into())?;
    Ok(fubini(n - 1))
}

static TD_CONNECTED_CYCLE: Memo = Memo::new();

/// `1 + Σ_{j=2}^{n−1} C(n,j)·a(C_j)` with `a(C₁) = a(C₂) = 1`.
pub fn td_connected_cycle(n: usize) -> Result<Natural> {
    require(n >= 1, || "cycles are indexed from 1".into())?;
    Ok(TD_CONNECTED_CYCLE.get(n, |prev| {
        let n = prev.len();
        match n {
            0 => Natural::zero(),
            1 | 2 => Natural::one(),
            _ => Natural::one() + (2..n).map(|j| binomial(n as i64, j as i64) * &prev[j]).sum::<Natural>(),
        }
    }))
}

static TD_CONNECTED_COMPLETE: Memo = Memo::new();

/// `Σ_{j=1}^{n−1} S₂(n,j)·a(K_j)` with `a(K₁) = a(K₂) = 1`.
pub fn td_connected_complete(n: usize) -> Result<Natural> {
    require(n >= 1, || "complete graphs need at least 1 vertex".into())?;
    Ok(TD_CONNECTED_COMPLETE.get(n, |prev| {
        let n = prev.len();
        match n {
            0 => Natural::zero(),
            1 | 2 => Natural::one(),
            _ => {
                let row = stirling2_row(n);
                (1..n).map(|j| &row[j] * &prev[j]).sum()
            }
        }
    }))
}

/// Time-dependent edge-rule trees of the star on `total` vertices: the
/// leaves join the centre one at a time, in any order.
pub fn td_edge_star(total: usize) -> Result<Natural> {
    require(total >= 2, || format!("stars need at least 2 vertices, got {total}"))?;
    Ok(factorial(total - 1))
}

static TD_EDGE_PATH: Memo = Memo::new();

/// `Σ_{j=1}^{⌊n/2⌋} C(n−j, n−2j)·a(P_{n−j})` with `a(P₁) = a(P₂) = 1`.
pub fn td_edge_path(n: usize) -> Result<Natural> {
    require(n >= 1, || "paths need at least 1 vertex".into())?;
    Ok(TD_EDGE_PATH.get(n, |prev| {
        let n = prev.len();
        match n {
            0 => Natural::zero(),
            1 | 2 => Natural::one(),
            _ => (1..=n / 2).map(|j| binomial((n - j) as i64, (n - 2 * j) as i64) * &prev[n - j]).sum(),
        }
    }))
}

static TD_EDGE_CYCLE: Memo = Memo::new();

/// `Σ_{j=1}^{⌊n/2⌋} (C(n−j, n−2j) + C(n−j−1, n−2j))·a(C_{n−j})` with
/// `a(C₁) = a(C₂) = 1`.
pub fn td_edge_cycle(n: usize) -> Result<Natural> {
    require(n >= 1, || "cycles are indexed from 1".into())?;
    Ok(TD_EDGE_CYCLE.get(n, |prev| {
        let n = prev.len();
        match n {
            0 => Natural::zero(),
            1 | 2 => Natural::one(),
            _ => (1..=n / 2)
                .map(|j| {
                    let (len, shrunk) = ((n - j) as i64, (n - 2 * j) as i64);
                    (binomial(len, shrunk) + binomial(len - 1, shrunk)) * &prev[n - j]
                })
                .sum(),
        }
    }))
}

static TD_EDGE_COMPLETE: Memo = Memo::new();

/// `Σ_{i=1}^{⌊n/2⌋} n!/(2^i·i!·(n−2i)!)·a(K_{n−i})` with
/// `a(K₁) = a(K₂) = 1`.
pub fn td_edge_complete(n: usize) -> Result<Natural> {
    require(n >= 1, || "complete graphs need at least 1 vertex".into())?;
    Ok(TD_EDGE_COMPLETE.get(n, |prev| {
        let n = prev.len();
        match n {
            0 => Natural::zero(),
            1 | 2 => Natural::one(),
            _ => (1..=n / 2)
                .map(|i| {
                    let matchings = factorial(n) / ((factorial(i) << i) * factorial(n - 2 * i));
                    matchings * &prev[n - i]
                })
                .sum(),
        }
    }))
}

/// The terms of a time-dependent recursion, keyed by the number of blocks
/// left after the first time step. Each term counts the timed trees whose
/// first step leaves that many blocks, so the terms sum to the count.
///
/// Available for the cycle and complete recursions under both rules and for
/// edge-rule paths; `None` for every other spec.
pub fn first_step_terms(spec: SequenceSpec, n: usize) -> Result<Option<Vec<(usize, Natural)>>> {
    use Family::*;
    use GluingRule::{Connected, Edge};
    if !spec.timed {
        return Ok(None);
    }
    let terms = match (spec.family, spec.rule) {
        (Cycle, Connected) => {
            require(n >= 3, || format!("cycles need at least 3 vertices, got {n}"))?;
            let mut terms = vec![(1, Natural::one())];
            for j in 2..n {
                terms.push((j, binomial(n as i64, j as i64) * td_connected_cycle(j)?));
            }
            terms
        }
        (Complete, Connected) => {
            require(n >= 2, || format!("the recursion needs at least 2 vertices, got {n}"))?;
            let row = stirling2_row(n);
            (1..n).map(|j| Ok((j, &row[j] * td_connected_complete(j)?))).collect::<Result<_>>()?
        }
        (Path, Edge) | (Cycle, Edge) | (Complete, Edge) => {
            require(n >= spec.family.min_n().max(2), || format!("the recursion needs more than {n} vertices"))?;
            let mut terms = Vec::new();
            for merges in (1..=n / 2).rev() {
                let (left, shrunk) = (n - merges, (n - 2 * merges) as i64);
                let term = match spec.family {
                    Path => binomial(left as i64, shrunk) * td_edge_path(left)?,
                    Cycle => (binomial(left as i64, shrunk) + binomial(left as i64 - 1, shrunk)) * td_edge_cycle(left)?,
                    _ => {
                        let matchings = factorial(n) / ((factorial(merges) << merges) * factorial(n - 2 * merges));
                        matchings * td_edge_complete(left)?
                    }
                };
                terms.push((left, term));
            }
            terms
        }
        _ => return Ok(None),
    };
    Ok(Some(terms))
}

/// The graph families with known formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Star,
    Path,
    Cycle,
    Complete,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Star, Family::Path, Family::Cycle, Family::Complete];

    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
        }
    }

    /// Smallest `n` for which the family has a simple graph.
    pub fn min_n(self) -> usize {
        match self {
            Family::Star => 2,
            Family::Path | Family::Complete => 1,
            Family::Cycle => 3,
        }
    }

    /// The family member on `n` vertices.
    pub fn graph(self, n: usize) -> Result<Graph> {
        match self {
            Family::Star => Graph::star(n),
            Family::Path => Graph::path(n),
            Family::Cycle => Graph::cycle(n),
            Family::Complete => Graph::complete(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Family::Star),
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// Selects one counted quantity: a family, a rule and whether trees are timed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    pub family: Family,
    pub rule: GluingRule,
    pub timed: bool,
}

impl SequenceSpec {
    pub fn new(family: Family, rule: GluingRule, timed: bool) -> Self {
        SequenceSpec { family, rule, timed }
    }

    /// Every spec with a formula.
    pub fn all_with_formulas() -> Vec<SequenceSpec> {
        let mut out = Vec::new();
        for family in Family::ALL {
            out.push(SequenceSpec::new(family, GluingRule::Connected, false));
            out.push(SequenceSpec::new(family, GluingRule::Connected, true));
            out.push(SequenceSpec::new(family, GluingRule::Edge, true));
        }
        out
    }

    pub fn has_formula(&self) -> bool {
        match (self.rule, self.timed) {
            (GluingRule::Connected, _) => true,
            (GluingRule::Edge, true) => true,
            // plain edge-rule counts and rule-free counts are oracle-only
            _ => false,
        }
    }

    /// The formula value at `n`, or `None` when the spec has no formula.
    pub fn formula(&self, n: usize) -> Result<Option<Natural>> {
        use Family::*;
        use GluingRule::{Connected, Edge};
        let value = match (self.family, self.rule, self.timed) {
            (Star, Connected, false) => connected_star(n)?,
            (Path, Connected, false) => connected_path(n)?,
            (Cycle, Connected, false) => connected_cycle(n)?,
            (Complete, Connected, false) => connected_complete(n)?,
            (Star, Connected, true) => td_connected_star(n)?,
            (Path, Connected, true) => td_connected_path(n)?,
            (Cycle, Connected, true) => td_connected_cycle(n)?,
            (Complete, Connected, true) => td_connected_complete(n)?,
            (Star, Edge, true) => td_edge_star(n)?,
            (Path, Edge, true) => td_edge_path(n)?,
            (Cycle, Edge, true) => td_edge_cycle(n)?,
            (Complete, Edge, true) => td_edge_complete(n)?,
            _ => return Ok(None),
        };
        Ok(Some(value))
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.family, self.rule)?;
        if self.timed {
            f.write_str("/timed")?;
        }
        Ok(())
    }
}

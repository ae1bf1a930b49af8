//! Twists `Z^n / <(1, ..., 1)>` and the tree enumeration of semistable twists.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::sncmodel::{ClassExpr, ComponentSet, Configuration};
use crate::stability::{is_semistable_with, kx_criterion, twistable_interval, IntervalReport, KxClass, Mode, Scope};

/// A twist normalized so that its first coordinate is zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Twist(Vec<i64>);

impl std::fmt::Debug for Twist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl Twist {
    pub fn new(raw: &[i64]) -> Twist {
        let base = raw.first().copied().unwrap_or(0);
        Twist(raw.iter().map(|x| x - base).collect())
    }

    pub fn zero(n: usize) -> Twist {
        Twist(vec![0; n])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

/// `M + sum t_i Y_i`.
pub fn apply_twist(m: &ClassExpr, t: &Twist) -> ClassExpr {
    m.plus(&ClassExpr::twist(t.coords()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceNode {
    /// `(parent, child)`, the child being the newly reached vertex.
    pub edge: (usize, usize),
    pub interval: IntervalReport,
    pub candidates: Vec<i64>,
    /// One subtree per candidate, in candidate order; empty at the last edge.
    pub children: Vec<TraceNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationTrace {
    pub root: usize,
    pub order: Vec<usize>,
    pub steps: Option<TraceNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enumeration {
    pub twists: Vec<Twist>,
    pub trace: EnumerationTrace,
}

/// Root vertex and the tree edges `(parent, child)` in breadth-first order.
pub fn bfs_edges(config: &Configuration, root: usize) -> Vec<(usize, usize)> {
    let n = config.num_components();
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    while let Some(p) = queue.pop_front() {
        for &v in config.neighbors(p) {
            if !seen[v] {
                seen[v] = true;
                out.push((p, v));
                queue.push_back(v);
            }
        }
    }
    out
}

pub fn is_canonical(config: &Configuration, h: &ClassExpr) -> bool {
    match config.canonical_name() {
        Some(k) => *h == ClassExpr::bundle(k) || config.vector::<crate::exactnum::Rational>(h).ok() == config.vector(&ClassExpr::bundle(k)).ok(),
        None => false,
    }
}

/// Every twist `t` with `L + t` semistable, found edge by edge along a
/// breadth-first traversal of the (tree) dual graph from vertex 0.
pub fn enumerate_semistable_twists(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
) -> Result<Enumeration> {
    enumerate_with(config, l, h, mode, 0, Exec::default())
}

pub fn enumerate_with(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    root: usize,
    exec: Exec,
) -> Result<Enumeration> {
    let n = config.num_components();
    if !config.is_tree() {
        return Err(Error::NotTree);
    }
    if root >= n {
        return Err(Error::Malformed(format!("root {root} out of range")));
    }
    config.vector::<crate::exactnum::Rational>(l)?;
    config.vector::<crate::exactnum::Rational>(h)?;
    let edges = bfs_edges(config, root);
    if is_canonical(config, h) {
        for &(p, v) in &edges {
            let side = config.side_of(p, v);
            if kx_criterion(config, side)?.classification == KxClass::Inconclusive {
                return Err(Error::EdgeHypothesis {
                    edge: (p, v),
                    reason: "canonical sign criterion is zero".into(),
                });
            }
        }
    }
    let mut order = vec![root];
    order.extend(edges.iter().map(|e| e.1));
    let mut start = vec![0i64; n];
    start[root] = 0;
    let (mut twists, steps) = explore(config, l, h, mode, &edges, 0, &mut start, exec)?;
    twists.sort();
    twists.dedup();
    Ok(Enumeration {
        twists,
        trace: EnumerationTrace { root, order, steps },
    })
}

#[allow(clippy::too_many_arguments)]
fn explore(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    edges: &[(usize, usize)],
    step: usize,
    t: &mut [i64],
    exec: Exec,
) -> Result<(Vec<Twist>, Option<TraceNode>)> {
    let Some(&(p, v)) = edges.get(step) else {
        let twist = Twist::new(t);
        let ok = is_semistable_with(config, &apply_twist(l, &twist), h, mode, Scope::ConnectedPairs, Exec::Sequential)?;
        return Ok((if ok { vec![twist] } else { Vec::new() }, None));
    };
    let current = l.plus(&ClassExpr::twist(t));
    let side = config.side_of(p, v);
    let report = twistable_interval(config, side, &current, h, mode)?;
    let candidates = match report.unit() {
        Some(u) => u.candidates.clone(),
        None => {
            return Err(Error::EdgeHypothesis {
                edge: (p, v),
                reason: format!(
                    "solution set is not a unit interval ({})",
                    report.degenerate_reason().unwrap_or("unknown")
                ),
            })
        }
    };
    let branch = |a: i64| -> Result<(Vec<Twist>, Option<TraceNode>)> {
        let mut tt = t.to_vec();
        tt[v] += a;
        explore(config, l, h, mode, edges, step + 1, &mut tt, exec)
    };
    let results: Vec<Result<(Vec<Twist>, Option<TraceNode>)>> = match candidates.as_slice() {
        [a, b] => {
            let (ra, rb) = exec.join(|| branch(*a), || branch(*b));
            vec![ra, rb]
        }
        _ => candidates.iter().map(|&a| branch(a)).collect(),
    };
    let mut twists = Vec::new();
    let mut children = Vec::new();
    for r in results {
        let (tw, node) = r?;
        twists.extend(tw);
        children.extend(node);
    }
    Ok((
        twists,
        Some(TraceNode {
            edge: (p, v),
            interval: report,
            candidates,
            children,
        }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Stable,
    StrictlySemistable,
    Unstable,
}

pub fn classify(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    t: &Twist,
) -> Result<Classification> {
    let twisted = apply_twist(l, t);
    if !is_semistable_with(config, &twisted, h, mode, Scope::AllUnions, Exec::default())? {
        return Ok(Classification::Unstable);
    }
    let all = enumerate_semistable_twists(config, l, h, mode)?;
    Ok(if all.twists.len() == 1 && all.twists[0] == *t {
        Classification::Stable
    } else {
        Classification::StrictlySemistable
    })
}

/// Unions cut out by each edge of a tree: the side away from the root.
pub fn edge_cuts(config: &Configuration) -> Vec<((usize, usize), ComponentSet)> {
    bfs_edges(config, 0)
        .into_iter()
        .map(|(p, v)| ((p, v), config.side_of(p, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::sncmodel::curve_builder;

    fn curve(genera: &[u32], edges: &[(usize, usize, u32)], l: &[i64]) -> Configuration {
        let deg = BTreeMap::from([("L".to_string(), l.to_vec())]);
        curve_builder(genera, edges, &deg).unwrap()
    }

    fn lk(c: &Configuration) -> (ClassExpr, ClassExpr) {
        (c.parse_class("L").unwrap(), c.parse_class("K").unwrap())
    }

    #[test]
    fn normalization() {
        assert_eq!(Twist::new(&[3, 4, 1]), Twist::new(&[0, 1, -2]));
        assert_eq!(Twist::new(&[5, 5]), Twist::zero(2));
    }

    #[test]
    fn twist_moves_degrees() {
        let c = curve(&[2, 1], &[(0, 1, 1)], &[3, 2]);
        let (l, _) = lk(&c);
        let twisted = apply_twist(&l, &Twist::new(&[0, 1]));
        let y1 = c.parse_class("Y1").unwrap();
        let y2 = c.parse_class("Y2").unwrap();
        assert_eq!(c.intersect(&[twisted.clone(), y1]).unwrap(), crate::exactnum::rat(4));
        assert_eq!(c.intersect(&[twisted, y2]).unwrap(), crate::exactnum::rat(1));
    }

    #[test]
    fn unique_twist_on_two_components() {
        let c = curve(&[2, 1], &[(0, 1, 1)], &[3, 2]);
        let (l, k) = lk(&c);
        let e = enumerate_semistable_twists(&c, &l, &k, Mode::Minus).unwrap();
        assert_eq!(e.twists, vec![Twist::new(&[0, 1])]);
        assert_eq!(classify(&c, &l, &k, Mode::Minus, &Twist::new(&[0, 1])).unwrap(), Classification::Stable);
        assert_eq!(classify(&c, &l, &k, Mode::Minus, &Twist::zero(2)).unwrap(), Classification::Unstable);
    }

    #[test]
    fn two_twists_when_endpoints_are_integers() {
        let c = curve(&[2, 2], &[(0, 1, 1)], &[1, 2]);
        let (l, k) = lk(&c);
        let e = enumerate_semistable_twists(&c, &l, &k, Mode::Minus).unwrap();
        assert_eq!(e.twists, vec![Twist::new(&[0, 0]), Twist::new(&[0, 1])]);
        for t in &e.twists {
            assert_eq!(classify(&c, &l, &k, Mode::Minus, t).unwrap(), Classification::StrictlySemistable);
        }
    }

    #[test]
    fn single_component_and_preconditions() {
        let c = curve(&[3], &[], &[4]);
        let (l, k) = lk(&c);
        assert_eq!(enumerate_semistable_twists(&c, &l, &k, Mode::Minus).unwrap().twists, vec![Twist::zero(1)]);
        let tri = curve(&[2, 2, 2], &[(0, 1, 1), (1, 2, 1), (0, 2, 1)], &[0, 0, 0]);
        let (l, k) = lk(&tri);
        assert_eq!(enumerate_semistable_twists(&tri, &l, &k, Mode::Minus).unwrap_err(), Error::NotTree);
        let g1 = curve(&[1, 0], &[(0, 1, 1)], &[0, 0]);
        let (l, k) = lk(&g1);
        assert!(matches!(
            enumerate_semistable_twists(&g1, &l, &k, Mode::Minus).unwrap_err(),
            Error::EdgeHypothesis { .. }
        ));
    }

    #[test]
    fn root_choice_does_not_matter() {
        let c = curve(&[2, 1, 0, 3], &[(0, 1, 2), (1, 2, 1), (1, 3, 1)], &[7, -3, 2, 5]);
        let (l, k) = lk(&c);
        let base = enumerate_with(&c, &l, &k, Mode::Minus, 0, Exec::Sequential).unwrap().twists;
        assert!(!base.is_empty());
        for root in 1..4 {
            assert_eq!(enumerate_with(&c, &l, &k, Mode::Minus, root, Exec::Parallel).unwrap().twists, base);
        }
    }
}

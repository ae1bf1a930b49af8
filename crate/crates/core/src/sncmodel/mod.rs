//! Combinatorial model of a simple-normal-crossings fiber.
//!
//! Basis symbols are numbered components first (`0..n`), then bundle
//! symbols (`n..n+b`). Classes are vectors over that basis.

mod builder;
mod io;
mod synth;
mod validate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{MultiPoly, Rational, Ring};

pub use builder::{curve_builder, random_tree_curve, CurveParams};
pub use io::ConfigFile;
pub use synth::{random_tree, synth_generator};
pub use validate::{CheckResult, ValidationReport};

/// A union of components, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ComponentSet(u64);

impl ComponentSet {
    pub const MAX: usize = 64;

    pub fn from_mask(mask: u64) -> Self {
        ComponentSet(mask)
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        ComponentSet(idx.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn singleton(i: usize) -> Self {
        ComponentSet(1 << i)
    }

    pub fn full(n: usize) -> Self {
        if n == 64 {
            ComponentSet(u64::MAX)
        } else {
            ComponentSet((1u64 << n) - 1)
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        ComponentSet(!self.0 & Self::full(n).0)
    }

    pub fn union(self, other: Self) -> Self {
        ComponentSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Every nonempty proper subset of `n` components, by mask order.
    pub fn proper_unions(n: usize) -> impl Iterator<Item = ComponentSet> {
        let full = Self::full(n).0;
        (1..full).map(ComponentSet)
    }
}

impl fmt::Debug for ComponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Integer combination of component classes and named bundle classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassExpr {
    pub components: Vec<i64>,
    pub bundles: BTreeMap<String, i64>,
}

impl ClassExpr {
    pub fn bundle(name: &str) -> Self {
        let mut c = ClassExpr::default();
        c.bundles.insert(name.to_string(), 1);
        c
    }

    pub fn union(y: ComponentSet) -> Self {
        let n = y.iter().last().map_or(0, |i| i + 1);
        ClassExpr {
            components: (0..n).map(|i| i64::from(y.contains(i))).collect(),
            bundles: BTreeMap::new(),
        }
    }

    pub fn twist(t: &[i64]) -> Self {
        ClassExpr {
            components: t.to_vec(),
            bundles: BTreeMap::new(),
        }
    }

    pub fn component(&self, i: usize) -> i64 {
        self.components.get(i).copied().unwrap_or(0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        ClassExpr {
            components: self.components.iter().map(|c| c * k).collect(),
            bundles: self
                .bundles
                .iter()
                .map(|(s, c)| (s.clone(), c * k))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }

    pub fn plus(&self, other: &ClassExpr) -> Self {
        let n = self.components.len().max(other.components.len());
        let mut bundles = self.bundles.clone();
        for (s, c) in &other.bundles {
            *bundles.entry(s.clone()).or_insert(0) += c;
        }
        bundles.retain(|_, c| *c != 0);
        ClassExpr {
            components: (0..n).map(|i| self.component(i) + other.component(i)).collect(),
            bundles,
        }
    }

    pub fn minus(&self, other: &ClassExpr) -> Self {
        self.plus(&other.scaled(-1))
    }
}

/// Symmetric `(d+1)`-linear form on basis symbols, stored by sorted
/// multiset key. Missing keys are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    dim: usize,
    table: BTreeMap<Vec<usize>, Rational>,
}

impl IntersectionForm {
    pub fn new(dim: usize) -> Self {
        IntersectionForm {
            dim,
            table: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, key: &[usize]) -> Rational {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.table.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, key: &[usize], value: Rational) {
        let mut k = key.to_vec();
        k.sort_unstable();
        if value.is_zero() {
            self.table.remove(&k);
        } else {
            self.table.insert(k, value);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &Rational)> {
        self.table.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Multilinear evaluation. `args` are dense basis vectors.
    pub fn eval<R: Ring>(&self, args: &[&[R]]) -> R {
        let mut acc = R::zero();
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for (key, value) in &self.table {
            counts.clear();
            for &s in key {
                match counts.last_mut() {
                    Some((sym, c)) if *sym == s => *c += 1,
                    _ => counts.push((s, 1)),
                }
            }
            let sum = orderings_sum(args, 0, &mut counts);
            if !sum.is_zero() {
                acc = acc + sum.scale(value);
            }
        }
        acc
    }
}

/// Sum over distinct assignments of the multiset `counts` to argument
/// positions `pos..`, of the product of the selected coordinates.
fn orderings_sum<R: Ring>(args: &[&[R]], pos: usize, counts: &mut [(usize, usize)]) -> R {
    if pos == args.len() {
        return R::one();
    }
    let mut acc = R::zero();
    for k in 0..counts.len() {
        if counts[k].1 == 0 {
            continue;
        }
        let sym = counts[k].0;
        let x = match args[pos].get(sym) {
            Some(x) if !x.is_zero() => x.clone(),
            _ => continue,
        };
        counts[k].1 -= 1;
        let rest = orderings_sum(args, pos + 1, counts);
        counts[k].1 += 1;
        if !rest.is_zero() {
            acc = acc + x * rest;
        }
    }
    acc
}

/// Raw pieces of a configuration, before structural checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigParts {
    pub dim: usize,
    pub components: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub bundles: Vec<String>,
    pub canonical: Option<String>,
    pub form: IntersectionForm,
    /// Euler characteristic of each component, as a polynomial in the basis
    /// coordinates of the class.
    pub chi_components: Vec<MultiPoly>,
    /// Euler characteristic of each double locus, aligned with `edges`.
    pub chi_edges: Vec<MultiPoly>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    parts: ConfigParts,
    canonical: Option<usize>,
    adjacency: Vec<Vec<usize>>,
}

impl Configuration {
    pub fn from_parts(mut parts: ConfigParts) -> Result<Configuration> {
        let n = parts.components.len();
        let d = parts.dim;
        if d == 0 {
            return Err(Error::Malformed("dimension must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::Malformed("no components".into()));
        }
        if n > ComponentSet::MAX {
            return Err(Error::Malformed(format!("at most {} components", ComponentSet::MAX)));
        }
        if parts.form.dim != d {
            return Err(Error::Malformed("intersection form dimension mismatch".into()));
        }
        let mut names = BTreeSet::new();
        for s in parts.components.iter().chain(&parts.bundles) {
            if s.is_empty() || !names.insert(s.as_str()) {
                return Err(Error::Malformed(format!("duplicate or empty symbol `{s}`")));
            }
        }
        let canonical = match &parts.canonical {
            None => None,
            Some(k) => match parts.bundles.iter().position(|b| b == k) {
                Some(p) => Some(n + p),
                None => return Err(Error::UnknownSymbol(k.clone())),
            },
        };
        if parts.chi_components.len() != n || parts.chi_edges.len() != parts.edges.len() {
            return Err(Error::Malformed("chi data does not match components and edges".into()));
        }
        let mut seen = BTreeSet::new();
        for e in parts.edges.iter_mut() {
            if e.0 >= n || e.1 >= n {
                return Err(Error::Malformed(format!("edge {e:?} references unknown component")));
            }
            if e.0 == e.1 {
                return Err(Error::Malformed(format!("edge {e:?} is a loop")));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if !seen.insert(*e) {
                return Err(Error::Malformed(format!("duplicate edge {e:?}")));
            }
        }
        let syms = n + parts.bundles.len();
        for (key, _) in parts.form.entries() {
            if key.len() != d + 1 {
                return Err(Error::Malformed(format!("monomial of size {} (expected {})", key.len(), d + 1)));
            }
            if key.iter().any(|&s| s >= syms) {
                return Err(Error::Malformed("monomial references unknown symbol".into()));
            }
            if !key.iter().any(|&s| s < n) {
                return Err(Error::Malformed("monomial has no component symbol".into()));
            }
        }
        let check_chi = |p: &MultiPoly, max_deg: usize| -> Result<()> {
            if p.num_vars() > syms {
                return Err(Error::Malformed("chi term references unknown symbol".into()));
            }
            if p.total_degree().unwrap_or(0) as usize > max_deg {
                return Err(Error::Malformed(format!("chi term exceeds degree {max_deg}")));
            }
            Ok(())
        };
        for p in &parts.chi_components {
            check_chi(p, d)?;
        }
        for p in &parts.chi_edges {
            check_chi(p, d - 1)?;
        }
        // sort edges together with their chi data
        let mut paired: Vec<((usize, usize), MultiPoly)> = parts
            .edges
            .iter()
            .copied()
            .zip(parts.chi_edges.drain(..))
            .collect();
        paired.sort_by_key(|(e, _)| *e);
        (parts.edges, parts.chi_edges) = paired.into_iter().unzip();

        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &parts.edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for a in adjacency.iter_mut() {
            a.sort_unstable();
        }
        Ok(Configuration {
            parts,
            canonical,
            adjacency,
        })
    }

    pub fn parts(&self) -> &ConfigParts {
        &self.parts
    }

    pub fn into_parts(self) -> ConfigParts {
        self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts.dim
    }

    pub fn num_components(&self) -> usize {
        self.parts.components.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.parts.components.len() + self.parts.bundles.len()
    }

    pub fn component_names(&self) -> &[String] {
        &self.parts.components
    }

    pub fn bundle_names(&self) -> &[String] {
        &self.parts.bundles
    }

    pub fn symbol_name(&self, s: usize) -> &str {
        let n = self.num_components();
        if s < n {
            &self.parts.components[s]
        } else {
            &self.parts.bundles[s - n]
        }
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        let n = self.num_components();
        self.parts
            .components
            .iter()
            .position(|c| c == name)
            .or_else(|| self.parts.bundles.iter().position(|b| b == name).map(|p| n + p))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.parts.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.parts.form
    }

    /// Basis index of the designated canonical class.
    pub fn canonical(&self) -> Option<usize> {
        self.canonical
    }

    pub fn canonical_name(&self) -> Option<&str> {
        self.parts.canonical.as_deref()
    }

    pub fn chi_component(&self, i: usize) -> &MultiPoly {
        &self.parts.chi_components[i]
    }

    pub fn chi_edge(&self, e: usize) -> &MultiPoly {
        &self.parts.chi_edges[e]
    }

    pub fn full(&self) -> ComponentSet {
        ComponentSet::full(self.num_components())
    }

    /// True if the subgraph induced on `y` is connected (and nonempty).
    pub fn is_connected(&self, y: ComponentSet) -> bool {
        let Some(start) = y.iter().next() else {
            return false;
        };
        let mut seen = ComponentSet::singleton(start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if y.contains(w) && !seen.contains(w) {
                    seen = seen.union(ComponentSet::singleton(w));
                    queue.push_back(w);
                }
            }
        }
        seen == y
    }

    pub fn is_tree(&self) -> bool {
        self.parts.edges.len() + 1 == self.num_components() && self.is_connected(self.full())
    }

    /// Connected components of the induced subgraph on `y`.
    pub fn connected_parts(&self, y: ComponentSet) -> Vec<ComponentSet> {
        let mut rest = y;
        let mut out = Vec::new();
        while let Some(start) = rest.iter().next() {
            let mut part = ComponentSet::singleton(start);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if rest.contains(w) && !part.contains(w) {
                        part = part.union(ComponentSet::singleton(w));
                        queue.push_back(w);
                    }
                }
            }
            rest = ComponentSet::from_mask(rest.mask() & !part.mask());
            out.push(part);
        }
        out
    }

    /// Proper unions `Y` with both `Y` and its complement connected.
    pub fn connected_pairs(&self) -> Vec<ComponentSet> {
        let n = self.num_components();
        if n > 20 && self.is_tree() {
            // on a tree these are exactly the two sides of each edge
            let mut out = Vec::new();
            for &(i, j) in self.edges() {
                let side = self.side_of(i, j);
                out.push(side);
                out.push(side.complement(n));
            }
            out.sort();
            return out;
        }
        ComponentSet::proper_unions(n)
            .filter(|&y| self.is_connected(y) && self.is_connected(y.complement(n)))
            .collect()
    }

    /// Components reachable from `v` without crossing the edge to `p`.
    pub fn side_of(&self, p: usize, v: usize) -> ComponentSet {
        let mut seen = ComponentSet::singleton(v);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if !(u == v && w == p) && !seen.contains(w) {
                    seen = seen.union(ComponentSet::singleton(w));
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Dense basis vector of a class.
    pub fn vector<R: Ring>(&self, c: &ClassExpr) -> Result<Vec<R>> {
        let n = self.num_components();
        if c.components.len() > n && c.components[n..].iter().any(|&x| x != 0) {
            return Err(Error::Malformed("class has more component coefficients than components".into()));
        }
        let mut v = vec![R::zero(); self.num_symbols()];
        for (i, slot) in v.iter_mut().enumerate().take(n) {
            let k = c.component(i);
            if k != 0 {
                *slot = R::from_i64(k);
            }
        }
        for (name, &k) in &c.bundles {
            let pos = self.parts.bundles.iter().position(|b| b == name);
            match pos {
                Some(p) => v[n + p] = R::from_i64(k),
                None if self.parts.components.contains(name) => {
                    let i = self.symbol_index(name).unwrap();
                    v[i] = v[i].clone() + R::from_i64(k);
                }
                None => return Err(Error::UnknownSymbol(name.clone())),
            }
        }
        Ok(v)
    }

    pub fn union_vector<R: Ring>(&self, y: ComponentSet) -> Vec<R> {
        (0..self.num_symbols())
            .map(|i| if y.contains(i) && i < self.num_components() { R::one() } else { R::zero() })
            .collect()
    }

    /// Intersection number of `d + 1` classes.
    pub fn intersect(&self, classes: &[ClassExpr]) -> Result<Rational> {
        let vs: Vec<Vec<Rational>> = classes.iter().map(|c| self.vector(c)).collect::<Result<_>>()?;
        let refs: Vec<&[Rational]> = vs.iter().map(|v| v.as_slice()).collect();
        self.intersect_vectors(&refs)
    }

    /// Intersection number of dense basis vectors over any coefficient ring.
    pub fn intersect_vectors<R: Ring>(&self, args: &[&[R]]) -> Result<R> {
        let d = self.dim();
        if args.len() != d + 1 {
            return Err(Error::Arity {
                expected: d + 1,
                got: args.len(),
            });
        }
        let n = self.num_components();
        if args.iter().all(|a| a.iter().take(n).all(|x| x.is_zero())) {
            return Err(Error::UndefinedIntersection);
        }
        Ok(self.parts.form.eval(args))
    }

    /// Euler characteristic of the union `y` at a class, as a value in `R`.
    pub fn chi_union_vector<R: Ring>(&self, y: ComponentSet, m: &[R]) -> Result<R> {
        if y.is_empty() {
            return Err(Error::EmptyUnion);
        }
        let mut acc = R::zero();
        for i in y.iter() {
            acc = acc + self.parts.chi_components[i].eval(m);
        }
        for (e, &(i, j)) in self.parts.edges.iter().enumerate() {
            if y.contains(i) && y.contains(j) {
                acc = acc - self.parts.chi_edges[e].eval(m);
            }
        }
        Ok(acc)
    }

    pub fn chi_union(&self, y: ComponentSet, m: &ClassExpr) -> Result<Rational> {
        let v: Vec<Rational> = self.vector(m)?;
        self.chi_union_vector(y, &v)
    }

    /// Parses `"L + 2*Y1 - Y2"`-style expressions over this configuration's
    /// symbols. `"0"` is the zero class.
    pub fn parse_class(&self, s: &str) -> Result<ClassExpr> {
        let mut out = ClassExpr::default();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Malformed("empty class expression".into()));
        }
        if compact == "0" {
            return Ok(out);
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (k, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && k > start {
                terms.push(&compact[start..k]);
                start = k;
            }
        }
        terms.push(&compact[start..]);
        let n = self.num_components();
        for t in terms {
            let (sign, body) = match t.as_bytes().first() {
                Some(b'-') => (-1, &t[1..]),
                Some(b'+') => (1, &t[1..]),
                _ => (1, t),
            };
            let (coef, sym) = match body.split_once('*') {
                Some((c, s)) => (
                    c.parse::<i64>()
                        .map_err(|_| Error::Malformed(format!("bad coefficient in `{t}`")))?,
                    s,
                ),
                None => {
                    let digits = body.chars().take_while(|c| c.is_ascii_digit()).count();
                    if digits == 0 {
                        (1, body)
                    } else {
                        let c = body[..digits].parse::<i64>().map_err(|_| Error::Malformed(format!("bad coefficient in `{t}`")))?;
                        (c, &body[digits..])
                    }
                }
            };
            if sym.is_empty() {
                return Err(Error::Malformed(format!("term `{t}` has no symbol")));
            }
            let idx = self
                .symbol_index(sym)
                .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
            let k = sign * coef;
            if idx < n {
                if out.components.len() < n {
                    out.components.resize(n, 0);
                }
                out.components[idx] += k;
            } else {
                *out.bundles.entry(sym.to_string()).or_insert(0) += k;
            }
        }
        out.bundles.retain(|_, c| *c != 0);
        Ok(out)
    }

    pub fn format_class(&self, c: &ClassExpr) -> String {
        let mut parts: Vec<(String, i64)> = c
            .bundles
            .iter()
            .filter(|(_, &k)| k != 0)
            .map(|(s, &k)| (s.clone(), k))
            .collect();
        for (i, &k) in c.components.iter().enumerate() {
            if k != 0 {
                parts.push((self.symbol_name(i).to_string(), k));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (s, k)) in parts.into_iter().enumerate() {
            let mag = k.abs();
            if idx == 0 {
                if k < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if k < 0 { " - " } else { " + " });
            }
            if mag != 1 {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&s);
        }
        out
    }

    pub fn format_union(&self, y: ComponentSet) -> String {
        let names: Vec<&str> = y.iter().map(|i| self.symbol_name(i)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Parses a comma-separated list of component names or 0-based indices.
    pub fn parse_union(&self, s: &str) -> Result<ComponentSet> {
        let n = self.num_components();
        let mut y = ComponentSet::default();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let i = match self.symbol_index(tok) {
                Some(i) if i < n => i,
                _ => match tok.parse::<usize>() {
                    Ok(i) if i < n => i,
                    _ => return Err(Error::UnknownSymbol(tok.to_string())),
                },
            };
            y = y.union(ComponentSet::singleton(i));
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn fix_c1() -> Configuration {
        let mut deg = BTreeMap::new();
        deg.insert("L".to_string(), vec![3, 2]);
        curve_builder(&[2, 1], &[(0, 1, 1)], &deg).unwrap()
    }

    #[test]
    fn intersections_on_two_component_curve() {
        let c = fix_c1();
        let l = ClassExpr::bundle("L");
        let y1 = c.parse_class("Y1").unwrap();
        let y2 = c.parse_class("Y2").unwrap();
        assert_eq!(c.intersect(&[l.clone(), y1.clone()]).unwrap(), rat(3));
        assert_eq!(c.intersect(&[y1.clone(), y2.clone()]).unwrap(), rat(1));
        assert_eq!(c.intersect(&[y1.clone(), y1.clone()]).unwrap(), rat(-1));
        let x = y1.plus(&y2);
        assert_eq!(c.intersect(&[x.clone(), x]).unwrap(), rat(0));
        assert_eq!(
            c.intersect(&[l.clone(), l.clone()]),
            Err(Error::UndefinedIntersection)
        );
        assert!(matches!(c.intersect(&[l]), Err(Error::Arity { .. })));
    }

    #[test]
    fn euler_characteristics_on_two_component_curve() {
        let c = fix_c1();
        let l = ClassExpr::bundle("L");
        let y1 = ComponentSet::singleton(0);
        assert_eq!(c.chi_union(y1, &l).unwrap(), rat(2));
        assert_eq!(c.chi_union(c.full(), &l).unwrap(), rat(3));
        assert_eq!(c.chi_union(c.full(), &ClassExpr::default()).unwrap(), rat(-2));
        assert_eq!(c.chi_union(ComponentSet::default(), &l), Err(Error::EmptyUnion));
    }

    #[test]
    fn class_expressions() {
        let c = fix_c1();
        let e = c.parse_class("L + 2*Y1 - Y2").unwrap();
        assert_eq!(e.components, vec![2, -1]);
        assert_eq!(e.bundles["L"], 1);
        assert_eq!(c.format_class(&e), "L + 2*Y1 - Y2");
        assert_eq!(c.parse_class("-3K").unwrap().bundles["K"], -3);
        assert!(c.parse_class("L+Q").is_err());
        assert_eq!(c.parse_class("0").unwrap(), ClassExpr::default());
        assert_eq!(c.format_class(&ClassExpr::default()), "0");
    }

    #[test]
    fn graph_queries() {
        let mut deg = BTreeMap::new();
        deg.insert("L".to_string(), vec![0, 0, 0, 0]);
        // path 0-1-2-3
        let c = curve_builder(&[1, 1, 1, 1], &[(0, 1, 1), (1, 2, 1), (2, 3, 2)], &deg).unwrap();
        assert!(c.is_tree());
        assert_eq!(c.connected_pairs().len(), 6);
        assert_eq!(c.side_of(1, 2), ComponentSet::from_indices([2, 3]));
        let parts = c.connected_parts(ComponentSet::from_indices([0, 2, 3]));
        assert_eq!(parts.len(), 2);
    }
}

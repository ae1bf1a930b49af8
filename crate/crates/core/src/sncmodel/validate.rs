//! Consistency checks on a configuration.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{ComponentSet, Configuration};
use crate::exactnum::{factorial, frac, MultiPoly, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Unions checked exhaustively up to this many components; beyond it only
/// single components and their complements.
pub(crate) const EXHAUSTIVE_UNIONS: usize = 12;

/// Sorted multisets of size `k` drawn from `0..s`.
pub(crate) fn multisets(s: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(s: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in from..s {
            cur.push(x);
            rec(s, k, x, cur, out);
            cur.pop();
        }
    }
    rec(s, k, 0, &mut cur, &mut out);
    out
}

/// Exponent vectors of every monomial of total degree `<= d` in `s` variables.
pub(crate) fn monomials_up_to(s: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for k in 0..=d {
        for ms in multisets(s, k) {
            let mut e = vec![0u32; s];
            for x in ms {
                e[x] += 1;
            }
            out.push(e);
        }
    }
    out
}

impl Configuration {
    pub(crate) fn mv_unions(&self) -> Vec<ComponentSet> {
        let n = self.num_components();
        if n <= EXHAUSTIVE_UNIONS {
            ComponentSet::proper_unions(n).collect()
        } else {
            (0..n)
                .flat_map(|i| {
                    let y = ComponentSet::singleton(i);
                    [y, y.complement(n)]
                })
                .collect()
        }
    }

    fn symbol_vars(&self) -> Vec<MultiPoly> {
        (0..self.num_symbols()).map(MultiPoly::var).collect()
    }

    /// `sum_i [N Y_i]` for every size-`d` multiset `N` containing a
    /// component symbol.
    pub(crate) fn fiber_sums(&self) -> Vec<(Vec<usize>, Rational)> {
        let n = self.num_components();
        let form = self.form();
        multisets(self.num_symbols(), self.dim())
            .into_iter()
            .filter(|ms| ms.iter().any(|&s| s < n))
            .map(|ms| {
                let mut key = ms.clone();
                key.push(0);
                let mut total = Rational::zero();
                for i in 0..n {
                    *key.last_mut().unwrap() = i;
                    total += form.get(&key);
                }
                (ms, total)
            })
            .collect()
    }

    /// `chi(Z, x) - chi(X, x) + chi(Y, x + Y)` for each checked union.
    pub(crate) fn mv_residuals(&self) -> Vec<(ComponentSet, MultiPoly)> {
        let n = self.num_components();
        let x = self.symbol_vars();
        let full = self.full();
        let chi_x = self.chi_union_vector(full, &x).expect("nonempty");
        self.mv_unions()
            .into_iter()
            .map(|y| {
                let z = y.complement(n);
                let shifted: Vec<MultiPoly> = x
                    .iter()
                    .enumerate()
                    .map(|(s, v)| if y.contains(s) && s < n { v.clone() + MultiPoly::one() } else { v.clone() })
                    .collect();
                let r = self.chi_union_vector(z, &x).expect("nonempty")
                    - chi_x.clone()
                    + self.chi_union_vector(y, &shifted).expect("nonempty");
                (y, r)
            })
            .collect()
    }

    /// `chi_W(x + X) - chi_W(x)` for each component, then each edge.
    pub(crate) fn chi_shift_residuals(&self) -> Vec<MultiPoly> {
        let n = self.num_components();
        let x = self.symbol_vars();
        let shifted: Vec<MultiPoly> = x
            .iter()
            .enumerate()
            .map(|(s, v)| if s < n { v.clone() + MultiPoly::one() } else { v.clone() })
            .collect();
        let parts = self.parts();
        parts
            .chi_components
            .iter()
            .chain(&parts.chi_edges)
            .map(|p| p.eval(&shifted) - p.clone())
            .collect()
    }

    /// Parts of degree `>= d - 1` of
    /// `d! chi_W(x) - [x^d W] + (d/2) [x^(d-1) (K + W) W]` per component.
    pub(crate) fn hrr_residuals(&self) -> Option<Vec<MultiPoly>> {
        let k = self.canonical()?;
        let d = self.dim();
        let x = self.symbol_vars();
        let dfact = Rational::from_integer(factorial(d));
        let half_d = frac(d as i64, 2);
        let out = (0..self.num_components())
            .map(|w| {
                let wv: Vec<MultiPoly> = self.union_vector(ComponentSet::singleton(w));
                let mut kw = wv.clone();
                kw[k] = kw[k].clone() + MultiPoly::one();
                let mut args: Vec<&[MultiPoly]> = vec![&x; d];
                args.push(&wv);
                let top = self.form().eval(&args);
                let mut args: Vec<&[MultiPoly]> = vec![&x; d - 1];
                args.push(&kw);
                args.push(&wv);
                let next = self.form().eval(&args);
                let p = self.chi_component(w).scale(&dfact) - top + next.scale(&half_d);
                p.homogeneous(d as u32) + p.homogeneous(d as u32 - 1)
            })
            .collect();
        Some(out)
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.num_components();
        let mut checks = Vec::new();

        checks.push(CheckResult {
            name: "connectivity",
            passed: self.is_connected(self.full()),
            witness: (!self.is_connected(self.full())).then(|| {
                let parts = self.connected_parts(self.full());
                format!("{} connected pieces", parts.len())
            }),
        });

        let bad_adjacency = self.form().entries().find_map(|(key, v)| {
            let comps: Vec<usize> = key.iter().copied().filter(|&s| s < n).collect();
            for (a, &i) in comps.iter().enumerate() {
                for &j in &comps[a + 1..] {
                    if i != j && !self.adjacent(i, j) {
                        return Some(format!("{} = {v}", self.format_key(key)));
                    }
                }
            }
            None
        });
        checks.push(CheckResult {
            name: "adjacency_vanishing",
            passed: bad_adjacency.is_none(),
            witness: bad_adjacency,
        });

        let bad_fiber = self
            .fiber_sums()
            .into_iter()
            .find(|(_, v)| !v.is_zero())
            .map(|(ms, v)| format!("sum over components of {} = {v}", self.format_key(&ms)));
        checks.push(CheckResult {
            name: "fiber_relation",
            passed: bad_fiber.is_none(),
            witness: bad_fiber,
        });

        let bad_mv = self
            .mv_residuals()
            .into_iter()
            .find(|(_, r)| !r.is_zero())
            .map(|(y, r)| format!("union {}: residual {}", self.format_union(y), self.format_poly(&r)));
        checks.push(CheckResult {
            name: "mayer_vietoris",
            passed: bad_mv.is_none(),
            witness: bad_mv,
        });

        let bad_shift = self
            .chi_shift_residuals()
            .into_iter()
            .enumerate()
            .find(|(_, r)| !r.is_zero())
            .map(|(k, r)| {
                let owner = if k < n {
                    self.symbol_name(k).to_string()
                } else {
                    let (i, j) = self.edges()[k - n];
                    format!("edge {}-{}", self.symbol_name(i), self.symbol_name(j))
                };
                format!("{owner}: residual {}", self.format_poly(&r))
            });
        checks.push(CheckResult {
            name: "fiber_twist_invariance",
            passed: bad_shift.is_none(),
            witness: bad_shift,
        });

        if let Some(res) = self.hrr_residuals() {
            let bad = res
                .into_iter()
                .enumerate()
                .find(|(_, r)| !r.is_zero())
                .map(|(w, r)| format!("{}: top-degree residual {}", self.symbol_name(w), self.format_poly(&r)));
            checks.push(CheckResult {
                name: "riemann_roch_shape",
                passed: bad.is_none(),
                witness: bad,
            });
        }

        let unsupported = self.edges().iter().find(|&&(i, j)| {
            !self
                .form()
                .entries()
                .any(|(key, _)| key.contains(&i) && key.contains(&j))
        });
        checks.push(CheckResult {
            name: "edge_support",
            passed: unsupported.is_none(),
            witness: unsupported.map(|&(i, j)| {
                format!("no nonzero entry meets both {} and {}", self.symbol_name(i), self.symbol_name(j))
            }),
        });

        ValidationReport { checks }
    }

    pub(crate) fn format_key(&self, key: &[usize]) -> String {
        let names: Vec<&str> = key.iter().map(|&s| self.symbol_name(s)).collect();
        format!("[{}]", names.join(" "))
    }

    pub(crate) fn format_poly(&self, p: &MultiPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = p
            .terms()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(s, &k)| {
                        if k == 1 {
                            self.symbol_name(s).to_string()
                        } else {
                            format!("{}^{k}", self.symbol_name(s))
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::exactnum::rat;
    use crate::sncmodel::{curve_builder, Configuration};

    fn fix_c1() -> Configuration {
        let deg = BTreeMap::from([("L".to_string(), vec![3, 2])]);
        curve_builder(&[2, 1], &[(0, 1, 1)], &deg).unwrap()
    }

    fn with_entry(c: &Configuration, key: &[usize], v: Rational) -> Configuration {
        let mut parts = c.parts().clone();
        parts.form.set(key, v);
        Configuration::from_parts(parts).unwrap()
    }

    #[test]
    fn curve_passes_every_check() {
        let r = fix_c1().validate();
        assert!(r.passed(), "{r:?}");
        let names: Vec<&str> = r.checks.iter().map(|c| c.name).collect();
        assert!(names.contains(&"riemann_roch_shape"));
    }

    #[test]
    fn broken_fiber_relation_is_caught() {
        // [Y1 Y1] = -1 with [Y1 Y2] = 2
        let c = with_entry(&fix_c1(), &[0, 1], rat(2));
        let r = c.validate();
        assert!(!r.get("fiber_relation").unwrap().passed);
        assert!(r.get("fiber_relation").unwrap().witness.is_some());
    }

    #[test]
    fn nonadjacent_entry_is_caught() {
        let deg = BTreeMap::from([("L".to_string(), vec![0, 0, 0])]);
        let c = curve_builder(&[1, 1, 1], &[(0, 1, 1), (1, 2, 1)], &deg).unwrap();
        let c = with_entry(&c, &[0, 2], rat(1));
        assert!(!c.validate().get("adjacency_vanishing").unwrap().passed);
    }

    #[test]
    fn corrupted_chi_breaks_mayer_vietoris() {
        let c = fix_c1();
        let mut parts = c.parts().clone();
        parts.chi_edges[0] = MultiPoly::constant(rat(2));
        let c = Configuration::from_parts(parts).unwrap();
        let r = c.validate();
        assert!(!r.get("mayer_vietoris").unwrap().passed);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(multisets(4, 2).len(), 10);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
    }
}

//! Random formal configurations obtained by solving the validation
//! constraints, which are linear in the table and chi entries.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::validate::{monomials_up_to, multisets};
use super::{ConfigParts, Configuration, IntersectionForm};
use crate::error::{Error, Result};
use crate::exactnum::{rat, MultiPoly, Rational};

const ATTEMPTS: u64 = 16;

/// Uniformly labelled random tree on `n` vertices.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|v| {
            let p = rng.gen_range(0..v);
            let (a, b) = (labels[p], labels[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

#[derive(Clone, Copy)]
enum Unknown {
    ChiComponent(usize, usize),
    ChiEdge(usize, usize),
    Table(usize),
}

struct Layout {
    dim: usize,
    n: usize,
    edges: Vec<(usize, usize)>,
    comp_monos: Vec<Vec<u32>>,
    edge_monos: Vec<Vec<u32>>,
    keys: Vec<Vec<usize>>,
    unknowns: Vec<Unknown>,
}

impl Layout {
    fn new(dim: usize, n: usize, edges: &[(usize, usize)]) -> Layout {
        let syms = n + 2;
        let adjacent = |i: usize, j: usize| i == j || edges.contains(&(i.min(j), i.max(j)));
        let keys: Vec<Vec<usize>> = multisets(syms, dim + 1)
            .into_iter()
            .filter(|k| {
                let comps: Vec<usize> = k.iter().copied().filter(|&s| s < n).collect();
                !comps.is_empty()
                    && comps
                        .iter()
                        .all(|&i| comps.iter().all(|&j| adjacent(i, j)))
            })
            .collect();
        let comp_monos = monomials_up_to(syms, dim);
        let edge_monos = monomials_up_to(syms, dim - 1);
        let mut unknowns = Vec::new();
        for i in 0..n {
            unknowns.extend((0..comp_monos.len()).map(|m| Unknown::ChiComponent(i, m)));
        }
        for e in 0..edges.len() {
            unknowns.extend((0..edge_monos.len()).map(|m| Unknown::ChiEdge(e, m)));
        }
        unknowns.extend((0..keys.len()).map(Unknown::Table));
        Layout {
            dim,
            n,
            edges: edges.to_vec(),
            comp_monos,
            edge_monos,
            keys,
            unknowns,
        }
    }

    fn build(&self, values: &[Rational]) -> Configuration {
        let mut form = IntersectionForm::new(self.dim);
        let mut chi_components = vec![MultiPoly::zero(); self.n];
        let mut chi_edges = vec![MultiPoly::zero(); self.edges.len()];
        for (u, v) in self.unknowns.iter().zip(values) {
            if v.is_zero() {
                continue;
            }
            match *u {
                Unknown::ChiComponent(i, m) => chi_components[i].add_term(self.comp_monos[m].clone(), v.clone()),
                Unknown::ChiEdge(e, m) => chi_edges[e].add_term(self.edge_monos[m].clone(), v.clone()),
                Unknown::Table(k) => form.set(&self.keys[k], v.clone()),
            }
        }
        Configuration::from_parts(ConfigParts {
            dim: self.dim,
            components: (1..=self.n).map(|i| format!("Y{i}")).collect(),
            edges: self.edges.clone(),
            bundles: vec!["L".into(), "K".into()],
            canonical: Some("K".into()),
            form,
            chi_components,
            chi_edges,
        })
        .expect("layout is structurally valid")
    }

    /// Every validation identity as a flat vector of values that must vanish.
    fn residuals(&self, c: &Configuration) -> Vec<Rational> {
        let mut out: Vec<Rational> = c.fiber_sums().into_iter().map(|(_, v)| v).collect();
        let read = |p: &MultiPoly, out: &mut Vec<Rational>| {
            out.extend(self.comp_monos.iter().map(|m| p.coeff(m)));
        };
        for (_, r) in c.mv_residuals() {
            read(&r, &mut out);
        }
        for r in c.chi_shift_residuals() {
            read(&r, &mut out);
        }
        for r in c.hrr_residuals().expect("canonical designated") {
            read(&r, &mut out);
        }
        out
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<Rational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A random configuration of dimension `dim` on the given tree, with
/// bundles `L` and `K` (canonical), satisfying every validation identity.
/// Deterministic in `seed`.
pub fn synth_generator(dim: usize, tree: &[(usize, usize)], seed: u64) -> Result<Configuration> {
    if dim == 0 {
        return Err(Error::Malformed("dimension must be at least 1".into()));
    }
    let n = tree.len() + 1;
    let mut edges: Vec<(usize, usize)> = tree.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
    edges.sort_unstable();
    edges.dedup();
    if edges.len() != tree.len() || edges.iter().any(|&(i, j)| i == j || j >= n) {
        return Err(Error::NotTree);
    }
    let layout = Layout::new(dim, n, &edges);
    let shape = layout.build(&[]);
    if !shape.is_tree() {
        return Err(Error::NotTree);
    }

    let u = layout.unknowns.len();
    let mut columns = Vec::with_capacity(u);
    let mut unit = vec![Rational::zero(); u];
    for k in 0..u {
        unit[k] = Rational::one();
        columns.push(layout.residuals(&layout.build(&unit)));
        unit[k] = Rational::zero();
    }
    let nrows = columns.first().map_or(0, |c| c.len());
    let mut rows: Vec<Vec<Rational>> = (0..nrows)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect::<Vec<_>>())
        .filter(|row: &Vec<Rational>| row.iter().any(|x| !x.is_zero()))
        .collect();
    rows.sort();
    rows.dedup();
    let pivots = rref(&mut rows, u);
    let is_pivot = {
        let mut v = vec![false; u];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };

    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9)));
        let mut values = vec![Rational::zero(); u];
        for (k, v) in values.iter_mut().enumerate() {
            if !is_pivot[k] {
                *v = rat(rng.gen_range(-3..=3));
            }
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            let mut acc = Rational::zero();
            for (k, x) in row.iter().enumerate() {
                if k != p && !x.is_zero() {
                    acc -= x * &values[k];
                }
            }
            values[p] = acc;
        }
        let config = layout.build(&values);
        let report = config.validate();
        if report.passed() {
            return Ok(config);
        }
    }
    Err(Error::Infeasible(format!(
        "no configuration with full edge support after {ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_pair_validates() {
        let c = synth_generator(2, &[(0, 1)], 7).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.validate().passed());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = synth_generator(2, &[(0, 1), (1, 2)], 11).unwrap();
        let b = synth_generator(2, &[(0, 1), (1, 2)], 11).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = synth_generator(2, &[(0, 1), (1, 2)], 12).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn curve_shaped_when_dimension_one() {
        let c = synth_generator(1, &[(0, 1), (0, 2)], 3).unwrap();
        assert!(c.validate().passed());
    }

    #[test]
    fn rejects_cycles() {
        assert_eq!(
            synth_generator(2, &[(0, 1), (1, 2), (0, 2)], 1).unwrap_err(),
            Error::NotTree
        );
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..8 {
            let t = random_tree(n, &mut rng);
            assert_eq!(t.len(), n.saturating_sub(1));
        }
    }
}

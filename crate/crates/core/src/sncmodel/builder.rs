//! Nodal curve configurations from genera, node counts and multidegrees.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::Zero;
use rand::Rng;

use super::{random_tree, ConfigParts, Configuration, IntersectionForm};
use crate::error::{Error, Result};
use crate::exactnum::{rat, MultiPoly};

/// Builds a curve with components `Y1..Yn` of the given genera, joined at
/// `edges = (i, j, nodes)`. Every bundle in `degrees` gets the listed
/// multidegree; `L` is always present and `K` is the designated canonical
/// class.
pub fn curve_builder(
    genera: &[u32],
    edges: &[(usize, usize, u32)],
    degrees: &BTreeMap<String, Vec<i64>>,
) -> Result<Configuration> {
    let n = genera.len();
    if n == 0 {
        return Err(Error::Malformed("no components".into()));
    }
    if degrees.contains_key("K") {
        return Err(Error::Malformed("the canonical class `K` is derived, not supplied".into()));
    }
    let mut bundles = vec!["L".to_string()];
    bundles.extend(degrees.keys().filter(|k| k.as_str() != "L").cloned());
    bundles.push("K".to_string());
    let sym = |name: &str| n + bundles.iter().position(|b| b == name).unwrap();

    let mut nodes_on = vec![0i64; n];
    let mut form = IntersectionForm::new(1);
    let mut plain_edges = Vec::new();
    let mut chi_edges = Vec::new();
    for &(i, j, k) in edges {
        if i >= n || j >= n || i == j {
            return Err(Error::Malformed(format!("bad edge ({i}, {j})")));
        }
        if k == 0 {
            return Err(Error::Malformed(format!("edge ({i}, {j}) has no nodes")));
        }
        if !form.get(&[i, j]).is_zero() {
            return Err(Error::Malformed(format!("duplicate edge ({i}, {j})")));
        }
        form.set(&[i, j], rat(k.into()));
        nodes_on[i] += i64::from(k);
        nodes_on[j] += i64::from(k);
        plain_edges.push((i, j));
        chi_edges.push(MultiPoly::constant(rat(k.into())));
    }
    for (i, &k) in nodes_on.iter().enumerate() {
        form.set(&[i, i], rat(-k));
    }
    for (name, degs) in degrees {
        if degs.len() != n {
            return Err(Error::Malformed(format!("bundle `{name}` needs {n} degrees")));
        }
    }
    for b in &bundles {
        let s = sym(b);
        for i in 0..n {
            let v = match b.as_str() {
                "K" => 2 * i64::from(genera[i]) - 2 + nodes_on[i],
                _ => degrees.get(b).map_or(0, |d| d[i]),
            };
            form.set(&[s, i], rat(v));
        }
    }
    let syms = n + bundles.len();
    let chi_components = (0..n)
        .map(|i| {
            let mut p = MultiPoly::constant(rat(1 - i64::from(genera[i])));
            for s in 0..syms {
                let mut e = vec![0; s + 1];
                e[s] = 1;
                p.add_term(e, form.get(&[s, i]));
            }
            p
        })
        .collect();
    let config = Configuration::from_parts(ConfigParts {
        dim: 1,
        components: (1..=n).map(|i| format!("Y{i}")).collect(),
        edges: plain_edges,
        bundles,
        canonical: Some("K".into()),
        form,
        chi_components,
        chi_edges,
    })?;
    if !config.is_connected(config.full()) {
        return Err(Error::Disconnected);
    }
    Ok(config)
}

/// Ranges for random tree-shaped curves.
#[derive(Debug, Clone)]
pub struct CurveParams {
    pub components: RangeInclusive<usize>,
    pub genus: RangeInclusive<u32>,
    pub nodes: RangeInclusive<u32>,
    pub degree: RangeInclusive<i64>,
}

impl Default for CurveParams {
    fn default() -> Self {
        CurveParams {
            components: 1..=6,
            genus: 0..=5,
            nodes: 1..=3,
            degree: -10..=10,
        }
    }
}

/// A random curve whose dual graph is a tree, with a random `L`.
pub fn random_tree_curve<R: Rng>(rng: &mut R, p: &CurveParams) -> Configuration {
    let n = rng.gen_range(p.components.clone());
    let genera: Vec<u32> = (0..n).map(|_| rng.gen_range(p.genus.clone())).collect();
    let edges: Vec<(usize, usize, u32)> = random_tree(n, rng)
        .into_iter()
        .map(|(i, j)| (i, j, rng.gen_range(p.nodes.clone())))
        .collect();
    let mut degrees = BTreeMap::new();
    degrees.insert(
        "L".to_string(),
        (0..n).map(|_| rng.gen_range(p.degree.clone())).collect(),
    );
    curve_builder(&genera, &edges, &degrees).expect("trees are connected")
}

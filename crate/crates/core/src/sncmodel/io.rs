//! JSON configuration files.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ConfigParts, Configuration, IntersectionForm};
use crate::error::{Error, Result};
use crate::exactnum::{rational_str, MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dimension: usize,
    pub components: Vec<String>,
    pub edges: Vec<EdgeEntry>,
    pub bundles: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    pub intersection: Vec<TermEntry>,
    pub chi: ChiEntries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub monomial: Vec<String>,
    #[serde(with = "rational_str")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChiEntries {
    pub components: Vec<ComponentChi>,
    pub edges: Vec<EdgeChi>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentChi {
    pub component: String,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeChi {
    pub edge: [usize; 2],
    pub terms: Vec<TermEntry>,
}

impl ConfigFile {
    pub fn from_json(s: &str) -> Result<ConfigFile> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn into_config(self) -> Result<Configuration> {
        let n = self.components.len();
        let lookup = |name: &str| -> Result<usize> {
            self.components
                .iter()
                .position(|c| c == name)
                .or_else(|| self.bundles.iter().position(|b| b == name).map(|p| n + p))
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
        };
        let mut form = IntersectionForm::new(self.dimension);
        for t in &self.intersection {
            let key = t.monomial.iter().map(|s| lookup(s)).collect::<Result<Vec<_>>>()?;
            if !form.get(&key).is_zero() {
                return Err(Error::Malformed(format!("duplicate monomial {:?}", t.monomial)));
            }
            form.set(&key, t.value.clone());
        }
        let poly = |terms: &[TermEntry]| -> Result<MultiPoly> {
            let mut p = MultiPoly::default();
            for t in terms {
                let mut e = Vec::new();
                for s in &t.monomial {
                    let k = lookup(s)?;
                    if e.len() <= k {
                        e.resize(k + 1, 0u32);
                    }
                    e[k] += 1;
                }
                p.add_term(e, t.value.clone());
            }
            Ok(p)
        };
        let mut chi_components = vec![None; n];
        for c in &self.chi.components {
            let i = self
                .components
                .iter()
                .position(|x| x == &c.component)
                .ok_or_else(|| Error::UnknownSymbol(c.component.clone()))?;
            if chi_components[i].is_some() {
                return Err(Error::Malformed(format!("duplicate chi for `{}`", c.component)));
            }
            chi_components[i] = Some(poly(&c.terms)?);
        }
        let chi_components = chi_components
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::Malformed(format!("missing chi for `{}`", self.components[i]))))
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        let mut chi_edges = Vec::new();
        for e in &self.edges {
            let key = (e.i.min(e.j), e.i.max(e.j));
            let entry = self
                .chi
                .edges
                .iter()
                .filter(|c| (c.edge[0].min(c.edge[1]), c.edge[0].max(c.edge[1])) == key)
                .collect::<Vec<_>>();
            match entry.as_slice() {
                [one] => chi_edges.push(poly(&one.terms)?),
                [] => return Err(Error::Malformed(format!("missing chi for edge {}-{}", e.i, e.j))),
                _ => return Err(Error::Malformed(format!("duplicate chi for edge {}-{}", e.i, e.j))),
            }
            edges.push((e.i, e.j));
        }
        if self.chi.edges.len() != self.edges.len() {
            return Err(Error::Malformed("chi given for an edge not in the edge list".into()));
        }
        Configuration::from_parts(ConfigParts {
            dim: self.dimension,
            components: self.components,
            edges,
            bundles: self.bundles,
            canonical: self.canonical,
            form,
            chi_components,
            chi_edges,
        })
    }
}

impl Configuration {
    pub fn from_json(s: &str) -> Result<Configuration> {
        ConfigFile::from_json(s)?.into_config()
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn to_file(&self) -> ConfigFile {
        let names = |key: &[usize]| key.iter().map(|&s| self.symbol_name(s).to_string()).collect();
        let terms = |p: &MultiPoly| {
            p.terms()
                .map(|(e, c)| {
                    let mut mono = Vec::new();
                    for (s, &k) in e.iter().enumerate() {
                        for _ in 0..k {
                            mono.push(self.symbol_name(s).to_string());
                        }
                    }
                    TermEntry {
                        monomial: mono,
                        value: c.clone(),
                    }
                })
                .collect()
        };
        let p = self.parts();
        ConfigFile {
            dimension: p.dim,
            components: p.components.clone(),
            edges: p.edges.iter().map(|&(i, j)| EdgeEntry { i, j }).collect(),
            bundles: p.bundles.clone(),
            canonical: p.canonical.clone(),
            intersection: p
                .form
                .entries()
                .map(|(k, v)| TermEntry {
                    monomial: names(k),
                    value: v.clone(),
                })
                .collect(),
            chi: ChiEntries {
                components: p
                    .chi_components
                    .iter()
                    .enumerate()
                    .map(|(i, q)| ComponentChi {
                        component: p.components[i].clone(),
                        terms: terms(q),
                    })
                    .collect(),
                edges: p
                    .edges
                    .iter()
                    .zip(&p.chi_edges)
                    .map(|(&(i, j), q)| EdgeChi {
                        edge: [i, j],
                        terms: terms(q),
                    })
                    .collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::sncmodel::curve_builder;

    fn fix_c1() -> Configuration {
        let deg = BTreeMap::from([("L".to_string(), vec![3, 2])]);
        curve_builder(&[2, 1], &[(0, 1, 1)], &deg).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let c = fix_c1();
        let s = c.to_json();
        let back = Configuration::from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn unknown_fields_rejected() {
        let s = fix_c1().to_json().replacen("\"dimension\"", "\"colour\": 1,\n  \"dimension\"", 1);
        assert!(matches!(Configuration::from_json(&s), Err(Error::Malformed(_))));
    }

    #[test]
    fn unknown_symbol_rejected() {
        let mut f = fix_c1().to_file();
        f.intersection.push(TermEntry {
            monomial: vec!["Q".into(), "Y1".into()],
            value: crate::exactnum::rat(1),
        });
        assert_eq!(f.into_config(), Err(Error::UnknownSymbol("Q".into())));
        assert!(Configuration::from_json("{}").is_err());
    }
}

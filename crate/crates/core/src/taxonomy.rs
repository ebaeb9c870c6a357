//! Rooted concept tree used for type similarity between components.
//!
//! Depth is 1-based: the root sits at depth 1 and every child is one deeper
//! than its parent.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// File shape: `{"root": "...", "children": {"label": ["child", ...]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct TaxonomyFile {
    root: String,
    #[serde(default)]
    children: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TaxonomyFile", into = "TaxonomyFile")]
pub struct Taxonomy {
    root: String,
    children: BTreeMap<String, Vec<String>>,
    parent: BTreeMap<String, String>,
    depth: BTreeMap<String, usize>,
}

impl TryFrom<TaxonomyFile> for Taxonomy {
    type Error = Error;

    fn try_from(file: TaxonomyFile) -> Result<Self> {
        Taxonomy::new(file.root, file.children)
    }
}

impl From<Taxonomy> for TaxonomyFile {
    fn from(t: Taxonomy) -> Self {
        TaxonomyFile {
            root: t.root,
            children: t.children,
        }
    }
}

impl Taxonomy {
    /// Builds and validates the tree: one parent per non-root label, no
    /// cycles, every listed label reachable from the root.
    pub fn new(root: String, children: BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut parent = BTreeMap::new();
        for (p, kids) in &children {
            for child in kids {
                if child == &root {
                    return Err(Error::InvalidTaxonomy(format!(
                        "root {root:?} cannot be a child of {p:?}"
                    )));
                }
                if let Some(prev) = parent.insert(child.clone(), p.clone()) {
                    return Err(Error::InvalidTaxonomy(format!(
                        "label {child:?} has two parents: {prev:?} and {p:?}"
                    )));
                }
            }
        }

        // Breadth-first walk from the root assigns depths and proves
        // reachability of every label mentioned anywhere.
        let mut depth = BTreeMap::new();
        depth.insert(root.clone(), 1usize);
        let mut queue = vec![root.clone()];
        while let Some(label) = queue.pop() {
            let d = depth[&label];
            if let Some(kids) = children.get(&label) {
                for child in kids {
                    if depth.insert(child.clone(), d + 1).is_some() {
                        return Err(Error::InvalidTaxonomy(format!(
                            "label {child:?} appears twice in the tree"
                        )));
                    }
                    queue.push(child.clone());
                }
            }
        }
        for p in children.keys() {
            if !depth.contains_key(p) {
                return Err(Error::InvalidTaxonomy(format!(
                    "label {p:?} is not reachable from the root"
                )));
            }
        }

        Ok(Taxonomy {
            root,
            children,
            parent,
            depth,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn contains(&self, label: &str) -> bool {
        self.depth.contains_key(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.depth.keys().map(String::as_str)
    }

    /// Depth of `label`; the root has depth 1.
    pub fn depth(&self, label: &str) -> Result<usize> {
        self.depth
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn ancestor_chain(&self, label: &str) -> Vec<&str> {
        let mut chain = vec![label];
        let mut cur = label;
        while let Some(p) = self.parent.get(cur) {
            chain.push(p.as_str());
            cur = p;
        }
        chain.reverse(); // root first
        chain
    }

    /// Deepest label that is an ancestor-or-self of both arguments.
    pub fn lowest_common_ancestor<'a>(&'a self, c1: &str, c2: &str) -> Result<&'a str> {
        if !self.contains(c1) {
            return Err(Error::UnknownLabel(c1.to_string()));
        }
        if !self.contains(c2) {
            return Err(Error::UnknownLabel(c2.to_string()));
        }
        let a = self.ancestor_chain(c1);
        let b = self.ancestor_chain(c2);
        let mut lca = self.root.as_str();
        for (x, y) in a.iter().zip(b.iter()) {
            if x == y {
                lca = self.depth.get_key_value(*x).expect("chain label").0;
            } else {
                break;
            }
        }
        Ok(lca)
    }
}

/// Depth lookup as a free function, mirroring the taxonomy operations API.
pub fn taxonomy_depth(t: &Taxonomy, label: &str) -> Result<usize> {
    t.depth(label)
}

pub fn lowest_common_ancestor<'a>(t: &'a Taxonomy, c1: &str, c2: &str) -> Result<&'a str> {
    t.lowest_common_ancestor(c1, c2)
}

/// The equipment tree used across tests and the synthetic scenarios:
/// Equipment -> { Server -> { Master, Slave, Broker, Client -> { Producer,
/// Consumer } }, Switch }.
pub fn equipment_taxonomy() -> Taxonomy {
    let children = BTreeMap::from([
        (
            "Equipment".to_string(),
            vec!["Server".to_string(), "Switch".to_string()],
        ),
        (
            "Server".to_string(),
            vec![
                "Master".to_string(),
                "Slave".to_string(),
                "Broker".to_string(),
                "Client".to_string(),
            ],
        ),
        (
            "Client".to_string(),
            vec!["Producer".to_string(), "Consumer".to_string()],
        ),
    ]);
    Taxonomy::new("Equipment".to_string(), children).expect("built-in taxonomy is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Taxonomy {
        // Equipment -> Server -> {Master, Slave}; Equipment -> Switch
        let children = BTreeMap::from([
            (
                "Equipment".to_string(),
                vec!["Server".to_string(), "Switch".to_string()],
            ),
            (
                "Server".to_string(),
                vec!["Master".to_string(), "Slave".to_string()],
            ),
        ]);
        Taxonomy::new("Equipment".to_string(), children).unwrap()
    }

    #[test]
    fn depths_are_one_based() {
        let t = small();
        assert_eq!(t.depth("Equipment").unwrap(), 1);
        assert_eq!(t.depth("Server").unwrap(), 2);
        assert_eq!(t.depth("Switch").unwrap(), 2);
        assert_eq!(t.depth("Master").unwrap(), 3);
    }

    #[test]
    fn unknown_label_errors() {
        let t = small();
        assert!(matches!(
            t.depth("Router"),
            Err(Error::UnknownLabel(l)) if l == "Router"
        ));
        assert!(t.lowest_common_ancestor("Master", "Router").is_err());
    }

    #[test]
    fn lowest_common_ancestor_cases() {
        let t = small();
        assert_eq!(t.lowest_common_ancestor("Master", "Slave").unwrap(), "Server");
        assert_eq!(t.lowest_common_ancestor("Master", "Master").unwrap(), "Master");
        assert_eq!(
            t.lowest_common_ancestor("Master", "Switch").unwrap(),
            "Equipment"
        );
        assert_eq!(t.lowest_common_ancestor("Server", "Master").unwrap(), "Server");
    }

    #[test]
    fn depth_increases_along_every_chain() {
        let t = equipment_taxonomy();
        for label in t.labels() {
            assert_eq!(t.lowest_common_ancestor(label, label).unwrap(), label);
            let chain = t.ancestor_chain(label);
            for pair in chain.windows(2) {
                assert_eq!(t.depth(pair[1]).unwrap(), t.depth(pair[0]).unwrap() + 1);
            }
        }
    }

    #[test]
    fn rejects_double_parent_and_unreachable_labels() {
        let double = BTreeMap::from([
            ("r".to_string(), vec!["a".to_string(), "b".to_string()]),
            ("a".to_string(), vec!["c".to_string()]),
            ("b".to_string(), vec!["c".to_string()]),
        ]);
        assert!(Taxonomy::new("r".to_string(), double).is_err());

        let orphan = BTreeMap::from([("ghost".to_string(), vec!["x".to_string()])]);
        assert!(Taxonomy::new("r".to_string(), orphan).is_err());
    }

    #[test]
    fn file_round_trip() {
        let t = small();
        let text = serde_json::to_string(&t).unwrap();
        let back: Taxonomy = serde_json::from_str(&text).unwrap();
        assert_eq!(t, back);
    }
}

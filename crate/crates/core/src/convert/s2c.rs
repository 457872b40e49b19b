//! Star-to-clique conversion.
//!
//! An instance (or fact) vertex with labelled spokes is replaced by a clique on
//! its neighbours; the edge between the entities at roles `r1` and `r2` is
//! labelled `r1.r2` with the role names in lexicographic order.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::kb::{Instance, InstanceRepresentation, Origin, RelationSchema, PAIR_SEPARATOR};
use crate::symbol::{EntityId, RelTypeId, RoleId};

/// `r1.r2` with the two labels in canonical order.
pub fn pair_label(first: &str, second: &str) -> String {
    let (a, b) = if first <= second {
        (first, second)
    } else {
        (second, first)
    };
    format!("{a}{PAIR_SEPARATOR}{b}")
}

/// Relation type of the triples cut from `rel` at the role pair.
///
/// Role names never contain the separator, so the parent type is recoverable
/// by splitting off the last two segments.
pub fn triple_type(rel: &RelTypeId, first: &RoleId, second: &RoleId) -> RelTypeId {
    RelTypeId::new(format!(
        "{rel}{PAIR_SEPARATOR}{}",
        pair_label(first.name(), second.name())
    ))
}

/// An edge `(from, label, to)`. Edges created by S2C are oriented so that
/// `from` plays the first role of the pair label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelledEdge {
    pub from: EntityId,
    pub label: String,
    pub to: EntityId,
}

/// Undirected edge-labelled graph without self-loops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelledGraph {
    vertices: BTreeSet<EntityId>,
    edges: BTreeSet<LabelledEdge>,
}

impl LabelledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: EntityId) {
        self.vertices.insert(v);
    }

    /// Adds an edge and its endpoints. Self-loops are refused (returns `false`).
    pub fn add_edge(&mut self, from: EntityId, label: impl Into<String>, to: EntityId) -> bool {
        if from == to {
            return false;
        }
        self.vertices.insert(from.clone());
        self.vertices.insert(to.clone());
        self.edges.insert(LabelledEdge {
            from,
            label: label.into(),
            to,
        })
    }

    pub fn vertices(&self) -> &BTreeSet<EntityId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<LabelledEdge> {
        &self.edges
    }

    /// Neighbours of `v` with the label of the connecting edge.
    pub fn neighbours(&self, v: &EntityId) -> Vec<(&EntityId, &str)> {
        self.edges
            .iter()
            .filter_map(|e| {
                if &e.from == v {
                    Some((&e.to, e.label.as_str()))
                } else if &e.to == v {
                    Some((&e.from, e.label.as_str()))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Bipartite graph of a representation: one vertex per instance, named
    /// `<rel>@<k>` in iteration order, with role-labelled spokes.
    pub fn from_instances(rep: &InstanceRepresentation) -> (LabelledGraph, Vec<EntityId>) {
        let mut graph = LabelledGraph::new();
        for e in &rep.entities {
            graph.add_vertex(e.clone());
        }
        let mut stars = Vec::new();
        for (k, instance) in rep.iter().enumerate() {
            let star = EntityId::new(format!("{}@{k}", instance.rel_type()));
            graph.add_vertex(star.clone());
            for (role, entity) in instance.assignment() {
                graph.add_edge(entity.clone(), role.name(), star.clone());
            }
            stars.push(star);
        }
        (graph, stars)
    }

    /// Replaces vertex `s` by a clique on its neighbours.
    ///
    /// For every pair of spokes `(x1, r1, s)`, `(x2, r2, s)` with `r1 != r2`
    /// the edge `(x1, r1.r2, x2)` is added; then `s` and its spokes are
    /// removed. Pairs with equal labels, or that would form a self-loop, add
    /// nothing.
    pub fn s2c_vertex(&self, s: &EntityId) -> Result<LabelledGraph> {
        if !self.vertices.contains(s) {
            return Err(Error::UnknownVertex(s.to_string()));
        }
        let spokes: Vec<(EntityId, String)> = self
            .neighbours(s)
            .into_iter()
            .map(|(v, l)| (v.clone(), l.to_owned()))
            .collect();
        let mut out = LabelledGraph {
            vertices: self.vertices.iter().filter(|v| *v != s).cloned().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| &e.from != s && &e.to != s)
                .cloned()
                .collect(),
        };
        for (i, (x1, r1)) in spokes.iter().enumerate() {
            for (x2, r2) in &spokes[i + 1..] {
                if r1 == r2 {
                    continue;
                }
                let (from, to) = if r1 < r2 { (x1, x2) } else { (x2, x1) };
                out.add_edge(from.clone(), pair_label(r1, r2), to.clone());
            }
        }
        Ok(out)
    }
}

/// S2C image of a representation: every instance vertex replaced by its
/// clique, each clique edge becoming a binary instance.
///
/// The triple type is `<rel>.<r1>.<r2>` with roles `r1 < r2` kept under their
/// original names, so the first role is the head. Triples between two
/// occurrences of the same entity are dropped; identical triples from
/// different instances merge. Every triple type records the fold of the
/// relation it came from.
pub fn s2c_representation(rep: &InstanceRepresentation) -> InstanceRepresentation {
    let mut out = InstanceRepresentation::new();
    out.entities = rep.entities.clone();
    for (rel, set) in &rep.instances {
        let fold = rep.original_fold(rel).unwrap_or(0);
        for instance in set {
            let pairs: Vec<(&RoleId, &EntityId)> = instance.assignment().iter().collect();
            for (i, (r1, x1)) in pairs.iter().enumerate() {
                for (r2, x2) in &pairs[i + 1..] {
                    if x1 == x2 {
                        continue;
                    }
                    let ty = triple_type(rel, r1, r2);
                    if !out.schemas.contains_key(&ty) {
                        let schema = RelationSchema::new(ty.clone(), [(*r1).clone(), (*r2).clone()])
                            .expect("distinct roles");
                        out.schemas.insert(ty.clone(), schema);
                        out.origins.insert(
                            ty.clone(),
                            Origin {
                                parent: rel.clone(),
                                fold,
                            },
                        );
                    }
                    let triple = Instance::from_parts(
                        ty.clone(),
                        BTreeMap::from([((*r1).clone(), (*x1).clone()), ((*r2).clone(), (*x2).clone())]),
                    );
                    out.instances.entry(ty).or_default().insert(triple);
                }
            }
        }
    }
    out
}

/// Two different representations with identical S2C images.
///
/// Both hold four instances of one 3-fold relation over two entities per
/// role: the even-parity and the odd-parity corners of the cube. Every role
/// pair sees all four entity combinations in both, so the cliques coincide.
pub fn s2c_collision_witness() -> (InstanceRepresentation, InstanceRepresentation) {
    let roles = ["a", "b", "c"];
    let build = |parity: usize| {
        let mut instances = Vec::new();
        for bits in 0..8usize {
            if bits.count_ones() as usize % 2 != parity {
                continue;
            }
            let pairs: Vec<(RoleId, EntityId)> = roles
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    let bit = (bits >> k) & 1;
                    (RoleId::new(r), EntityId::new(format!("{r}{bit}")))
                })
                .collect();
            instances.push(Instance::new(RelTypeId::new("R"), pairs).expect("distinct roles"));
        }
        InstanceRepresentation::from_instances(instances).expect("well-formed")
    };
    (build(0), build(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(name: &str) -> EntityId {
        EntityId::new(name)
    }

    fn edge(from: &str, label: &str, to: &str) -> LabelledEdge {
        LabelledEdge {
            from: e(from),
            label: label.into(),
            to: e(to),
        }
    }

    fn figure_five() -> LabelledGraph {
        let mut g = LabelledGraph::new();
        g.add_edge(e("1"), "a", e("A"));
        g.add_edge(e("2"), "b", e("A"));
        g.add_edge(e("3"), "c", e("A"));
        g.add_edge(e("4"), "d", e("A"));
        g.add_edge(e("4"), "e", e("B"));
        g.add_edge(e("5"), "f", e("B"));
        g
    }

    #[test]
    fn s2c_on_vertex_a() {
        let g = figure_five().s2c_vertex(&e("A")).unwrap();
        assert!(!g.vertices().contains(&e("A")));
        let expected: BTreeSet<LabelledEdge> = [
            edge("1", "a.b", "2"),
            edge("1", "a.c", "3"),
            edge("1", "a.d", "4"),
            edge("2", "b.c", "3"),
            edge("2", "b.d", "4"),
            edge("3", "c.d", "4"),
            edge("4", "e", "B"),
            edge("5", "f", "B"),
        ]
        .into_iter()
        .collect();
        assert_eq!(g.edges(), &expected);
    }

    #[test]
    fn s2c_on_both_vertices() {
        let g = figure_five()
            .s2c_vertex(&e("A"))
            .unwrap()
            .s2c_vertex(&e("B"))
            .unwrap();
        assert_eq!(g.vertices().len(), 5);
        assert_eq!(g.edges().len(), 7);
        assert!(g.edges().contains(&edge("4", "e.f", "5")));
    }

    #[test]
    fn degree_one_vertex_just_disappears() {
        let mut g = LabelledGraph::new();
        g.add_edge(e("x"), "r", e("s"));
        g.add_edge(e("x"), "q", e("y"));
        let out = g.s2c_vertex(&e("s")).unwrap();
        assert_eq!(out.edges().len(), 1);
        assert!(!out.vertices().contains(&e("s")));
    }

    #[test]
    fn equal_labels_add_no_edge() {
        let mut g = LabelledGraph::new();
        g.add_edge(e("x1"), "SPOUSE", e("s"));
        g.add_edge(e("x2"), "SPOUSE", e("s"));
        g.add_edge(e("x3"), "LOCATION", e("s"));
        let out = g.s2c_vertex(&e("s")).unwrap();
        assert!(!out
            .edges()
            .iter()
            .any(|ed| (ed.from == e("x1") && ed.to == e("x2")) || (ed.from == e("x2") && ed.to == e("x1"))));
        assert_eq!(out.edges().len(), 2);
    }

    #[test]
    fn unknown_vertex_is_error() {
        assert!(matches!(
            figure_five().s2c_vertex(&e("Z")),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn three_fold_instance_gives_three_triples() {
        let rep = crate::kb::toy_instance_rep();
        let out = s2c_representation(&rep);
        assert_eq!(out.instance_count(), 6);
        assert!(out.validate().is_empty());
        let ty = RelTypeId::new("SportAward.AWARD.SEASON");
        let triple = out.instances[&ty].iter().next().unwrap();
        assert_eq!(triple.get(&RoleId::new("AWARD")), Some(&e("All-Star MVP")));
        assert_eq!(out.origins[&ty].fold, 3);
        assert_eq!(out.origins[&ty].parent, RelTypeId::new("SportAward"));
    }

    #[test]
    fn binary_instance_gives_one_triple() {
        let rep = InstanceRepresentation::from_instances([Instance::from_names(
            "PlaceOfBirth",
            &[("PERSON", "Kobe"), ("PLACE", "Philadelphia")],
        )
        .unwrap()])
        .unwrap();
        let out = s2c_representation(&rep);
        assert_eq!(out.instance_count(), 1);
        assert!(out
            .schemas
            .contains_key(&RelTypeId::new("PlaceOfBirth.PERSON.PLACE")));
    }

    #[test]
    fn repeated_entity_drops_self_loop() {
        let rep = InstanceRepresentation::from_instances([Instance::from_names(
            "R",
            &[("a", "x"), ("b", "x"), ("c", "y")],
        )
        .unwrap()])
        .unwrap();
        assert_eq!(s2c_representation(&rep).instance_count(), 2);
    }

    #[test]
    fn graph_and_representation_agree() {
        let rep = crate::kb::toy_instance_rep();
        let (mut graph, stars) = LabelledGraph::from_instances(&rep);
        for s in &stars {
            graph = graph.s2c_vertex(s).unwrap();
        }
        let from_rep: BTreeSet<(EntityId, String, EntityId)> = s2c_representation(&rep)
            .iter()
            .map(|t| {
                let mut it = t.assignment().iter();
                let (r1, x1) = it.next().unwrap();
                let (r2, x2) = it.next().unwrap();
                (x1.clone(), pair_label(r1.name(), r2.name()), x2.clone())
            })
            .collect();
        let from_graph: BTreeSet<(EntityId, String, EntityId)> = graph
            .edges()
            .iter()
            .map(|ed| (ed.from.clone(), ed.label.clone(), ed.to.clone()))
            .collect();
        assert_eq!(from_rep, from_graph);
    }

    #[test]
    fn witness_collides() {
        let (g1, g2) = s2c_collision_witness();
        assert_ne!(g1, g2);
        assert!(g1.validate().is_empty() && g2.validate().is_empty());
        assert_eq!(s2c_representation(&g1), s2c_representation(&g2));
    }

    #[test]
    fn reapplying_s2c_compounds_labels() {
        let (g1, _) = s2c_collision_witness();
        let once = s2c_representation(&g1);
        let twice = s2c_representation(&once);
        assert_eq!(once.instance_count(), twice.instance_count());
        for t in twice.iter() {
            let name = t.rel_type().name();
            let parent = &twice.origins[t.rel_type()].parent;
            assert!(once.schemas.contains_key(parent));
            // R.a.b becomes R.a.b.a.b
            let suffix = &name[parent.name().len() + 1..];
            assert!(parent.name().ends_with(suffix), "{name}");
            let mut stripped = t.clone();
            stripped = Instance::new(parent.clone(), stripped.assignment().clone()).unwrap();
            assert!(once.contains(&stripped));
        }
    }
}

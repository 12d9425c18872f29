//! Serre graphs, finite graphs of groups, the presentation data of their
//! fundamental groups, and almost-actions with their relation defect.
//!
//! A Serre graph keeps both directions of every edge, paired by the `bar`
//! involution. A graph of groups attaches a finite group to each vertex and
//! to each edge pair, with an injective inclusion of the edge group into the
//! group at each endpoint. The fundamental group (relative to a spanning
//! tree) is presented by the vertex groups together with one stable letter
//! per oriented edge, subject to tree relations and conjugation relations.
//!
//! An [`AlmostAction`] assigns an honest action to every vertex group and a
//! free permutation to every stable letter; only the tree and conjugation
//! relations may fail, and [`AlmostAction::defect`] measures by how much.

use std::collections::VecDeque;
use std::sync::Arc;

use thiserror::Error;

use crate::action::{action_distance, FiniteAction};
use crate::group::{FiniteGroup, GroupHom};
use crate::perm::{normalized_hamming, Perm};
use crate::ratio::{rat_int, Rat};

#[derive(Debug, Error)]
pub enum GogError {
    #[error("bad involution: {0}")]
    BadInvolution(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge inclusion is not injective (edge {0})")]
    NonInjectiveEdgeMap(usize),
    #[error("vertex-group assignment violates its multiplication table: {0}")]
    VertexActionBroken(String),
    #[error("incompatible data: {0}")]
    Incompatible(String),
}

/// A finite connected graph in Serre's formalism: every edge appears with
/// both directions, swapped by the fixed-point-free involution `bar`.
#[derive(Clone, Debug)]
pub struct SerreGraph {
    n_vertices: usize,
    origin: Vec<usize>,
    terminus: Vec<usize>,
    bar: Vec<usize>,
}

impl SerreGraph {
    pub fn new(
        n_vertices: usize,
        origin: Vec<usize>,
        terminus: Vec<usize>,
        bar: Vec<usize>,
    ) -> Result<SerreGraph, GogError> {
        if n_vertices == 0 {
            return Err(GogError::Disconnected);
        }
        let m = bar.len();
        if origin.len() != m || terminus.len() != m {
            return Err(GogError::Incompatible("edge arrays differ in length".into()));
        }
        for e in 0..m {
            if origin[e] >= n_vertices || terminus[e] >= n_vertices {
                return Err(GogError::Incompatible(format!("edge {e} leaves the vertex range")));
            }
            if bar[e] >= m || bar[bar[e]] != e {
                return Err(GogError::BadInvolution(format!("bar is not an involution at {e}")));
            }
            if bar[e] == e {
                return Err(GogError::BadInvolution(format!("bar fixes edge {e}")));
            }
            if origin[bar[e]] != terminus[e] || terminus[bar[e]] != origin[e] {
                return Err(GogError::BadInvolution(format!(
                    "reversed edge {e} does not swap endpoints"
                )));
            }
        }
        let graph = SerreGraph { n_vertices, origin, terminus, bar };
        if !graph.is_connected() {
            return Err(GogError::Disconnected);
        }
        Ok(graph)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n_vertices];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for e in 0..self.bar.len() {
                if self.origin[e] == v && !seen[self.terminus[e]] {
                    seen[self.terminus[e]] = true;
                    stack.push(self.terminus[e]);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of directed edges (twice the number of geometric edges).
    pub fn n_edges(&self) -> usize {
        self.bar.len()
    }

    pub fn origin(&self, e: usize) -> usize {
        self.origin[e]
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.terminus[e]
    }

    pub fn bar(&self, e: usize) -> usize {
        self.bar[e]
    }

    /// The default orientation: the lower id of each edge pair, ascending.
    pub fn oriented_edges(&self) -> Vec<usize> {
        (0..self.n_edges()).filter(|&e| e < self.bar[e]).collect()
    }

    /// Directed edge ids of a spanning tree (closed under `bar`), chosen by
    /// breadth-first search from vertex 0 scanning edge ids in order.
    pub fn bfs_tree(&self) -> Vec<usize> {
        let mut in_tree = vec![false; self.n_edges()];
        let mut seen = vec![false; self.n_vertices];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for e in 0..self.n_edges() {
                if self.origin[e] == v && !seen[self.terminus[e]] {
                    seen[self.terminus[e]] = true;
                    in_tree[e] = true;
                    in_tree[self.bar[e]] = true;
                    queue.push_back(self.terminus[e]);
                }
            }
        }
        (0..self.n_edges()).filter(|&e| in_tree[e]).collect()
    }
}

/// A finite graph of groups: vertex groups, edge groups (shared between an
/// edge and its reverse), injective inclusions `i_e : G_e -> G_{t(e)}`, and
/// a spanning tree.
pub struct GraphOfGroups {
    graph: SerreGraph,
    vertex_groups: Vec<Arc<FiniteGroup>>,
    edge_groups: Vec<Arc<FiniteGroup>>,
    inclusions: Vec<GroupHom>,
    tree: Vec<usize>,
    in_tree: Vec<bool>,
}

impl std::fmt::Debug for GraphOfGroups {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GraphOfGroups({} vertices, {} edge pairs)",
            self.graph.n_vertices(),
            self.graph.n_edges() / 2
        )
    }
}

impl GraphOfGroups {
    /// Validates the full structure. `tree` lists directed edge ids and must
    /// be closed under `bar`; when absent the BFS tree is used.
    pub fn new(
        graph: SerreGraph,
        vertex_groups: Vec<Arc<FiniteGroup>>,
        edge_groups: Vec<Arc<FiniteGroup>>,
        inclusions: Vec<GroupHom>,
        tree: Option<Vec<usize>>,
    ) -> Result<Arc<GraphOfGroups>, GogError> {
        if vertex_groups.len() != graph.n_vertices() {
            return Err(GogError::Incompatible("one group per vertex required".into()));
        }
        if edge_groups.len() != graph.n_edges() || inclusions.len() != graph.n_edges() {
            return Err(GogError::Incompatible(
                "one group and one inclusion per directed edge required".into(),
            ));
        }
        for e in 0..graph.n_edges() {
            if !Arc::ptr_eq(&edge_groups[e], &edge_groups[graph.bar(e)]) {
                return Err(GogError::Incompatible(format!(
                    "edge {e} and its reverse must carry the identical group object"
                )));
            }
            let inc = &inclusions[e];
            if !inc.injective {
                return Err(GogError::NonInjectiveEdgeMap(e));
            }
            if *inc.source != *edge_groups[e] {
                return Err(GogError::Incompatible(format!(
                    "inclusion at edge {e} does not start at the edge group"
                )));
            }
            if *inc.target != *vertex_groups[graph.terminus(e)] {
                return Err(GogError::Incompatible(format!(
                    "inclusion at edge {e} does not land in the terminal vertex group"
                )));
            }
        }
        let tree = match tree {
            Some(t) => {
                let mut in_tree = vec![false; graph.n_edges()];
                for &e in &t {
                    if e >= graph.n_edges() {
                        return Err(GogError::Incompatible(format!("tree edge {e} out of range")));
                    }
                    in_tree[e] = true;
                }
                for e in 0..graph.n_edges() {
                    if in_tree[e] != in_tree[graph.bar(e)] {
                        return Err(GogError::Incompatible(
                            "tree must be closed under edge reversal".into(),
                        ));
                    }
                }
                if t.len() != 2 * (graph.n_vertices() - 1) {
                    return Err(GogError::Incompatible("tree has wrong edge count".into()));
                }
                // reachability using tree edges only
                let mut seen = vec![false; graph.n_vertices()];
                seen[0] = true;
                let mut stack = vec![0usize];
                while let Some(v) = stack.pop() {
                    for e in 0..graph.n_edges() {
                        if in_tree[e] && graph.origin(e) == v && !seen[graph.terminus(e)] {
                            seen[graph.terminus(e)] = true;
                            stack.push(graph.terminus(e));
                        }
                    }
                }
                if !seen.into_iter().all(|s| s) {
                    return Err(GogError::Incompatible("tree does not span the graph".into()));
                }
                let mut t = t;
                t.sort_unstable();
                t.dedup();
                t
            }
            None => graph.bfs_tree(),
        };
        let mut in_tree = vec![false; graph.n_edges()];
        for &e in &tree {
            in_tree[e] = true;
        }
        Ok(Arc::new(GraphOfGroups { graph, vertex_groups, edge_groups, inclusions, tree, in_tree }))
    }

    pub fn graph(&self) -> &SerreGraph {
        &self.graph
    }

    pub fn vertex_group(&self, v: usize) -> &Arc<FiniteGroup> {
        &self.vertex_groups[v]
    }

    pub fn edge_group(&self, e: usize) -> &Arc<FiniteGroup> {
        &self.edge_groups[e]
    }

    /// The inclusion `i_e : G_e -> G_{t(e)}`.
    pub fn inclusion(&self, e: usize) -> &GroupHom {
        &self.inclusions[e]
    }

    pub fn tree(&self) -> &[usize] {
        &self.tree
    }

    pub fn in_tree(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    pub fn oriented_edges(&self) -> Vec<usize> {
        self.graph.oriented_edges()
    }

    pub fn oriented_tree_edges(&self) -> Vec<usize> {
        self.graph.oriented_edges().into_iter().filter(|&e| self.in_tree[e]).collect()
    }

    /// The generating set and relation list presenting the fundamental group
    /// relative to the stored spanning tree.
    pub fn presentation(&self) -> Presentation {
        let mut generators = Vec::new();
        for v in 0..self.graph.n_vertices() {
            for g in 0..self.vertex_groups[v].order() {
                generators.push(Generator::VertexElement { vertex: v, element: g });
            }
        }
        for e in self.oriented_edges() {
            generators.push(Generator::StableLetter { edge: e });
        }
        let mut relations = Vec::new();
        for e in self.oriented_tree_edges() {
            relations.push(Relation::Tree { edge: e });
        }
        for e in self.oriented_edges() {
            for g in 0..self.edge_groups[e].order() {
                relations.push(Relation::Conjugation { edge: e, element: g });
            }
        }
        Presentation { generators, relations }
    }
}

/// One generator of the fundamental-group presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    VertexElement { vertex: usize, element: usize },
    StableLetter { edge: usize },
}

/// One relation: either `s_e = 1` for a tree edge or
/// `s_e^{-1} i_e(g) s_e = i_{e-bar}(g)` for an oriented edge and `g` in its
/// edge group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Tree { edge: usize },
    Conjugation { edge: usize, element: usize },
}

/// The presentation data of the fundamental group: `generators` lists every
/// vertex-group element and one stable letter per oriented edge; `relations`
/// lists one tree relation per oriented tree edge and `|G_e|` conjugation
/// relations per oriented edge.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn tree_relation_count(&self) -> usize {
        self.relations.iter().filter(|r| matches!(r, Relation::Tree { .. })).count()
    }

    pub fn conjugation_relation_count(&self) -> usize {
        self.relations.iter().filter(|r| matches!(r, Relation::Conjugation { .. })).count()
    }
}

/// An almost-action of the fundamental group: an honest action of each
/// vertex group on the same set, plus a free permutation for each oriented
/// edge's stable letter. The reversed letter acts by the inverse.
#[derive(Clone)]
pub struct AlmostAction {
    gog: Arc<GraphOfGroups>,
    degree: usize,
    vertex_actions: Vec<FiniteAction>,
    letters: Vec<Perm>,
}

impl std::fmt::Debug for AlmostAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlmostAction(degree {})", self.degree)
    }
}

impl AlmostAction {
    /// `letters` is aligned with `gog.oriented_edges()`.
    pub fn new(
        gog: Arc<GraphOfGroups>,
        vertex_actions: Vec<FiniteAction>,
        letters: Vec<Perm>,
    ) -> Result<AlmostAction, GogError> {
        if vertex_actions.len() != gog.graph().n_vertices() {
            return Err(GogError::Incompatible("one action per vertex required".into()));
        }
        let degree = vertex_actions[0].degree();
        for (v, act) in vertex_actions.iter().enumerate() {
            if **act.group() != **gog.vertex_group(v) {
                return Err(GogError::Incompatible(format!(
                    "action at vertex {v} belongs to a different group"
                )));
            }
            if act.degree() != degree {
                return Err(GogError::Incompatible("vertex actions have mixed degrees".into()));
            }
        }
        let oriented = gog.oriented_edges();
        if letters.len() != oriented.len() {
            return Err(GogError::Incompatible(
                "one permutation per oriented edge required".into(),
            ));
        }
        if letters.iter().any(|p| p.degree() != degree) {
            return Err(GogError::Incompatible("letter permutation has wrong degree".into()));
        }
        Ok(AlmostAction { gog, degree, vertex_actions, letters })
    }

    /// All stable letters set to the identity.
    pub fn with_identity_letters(
        gog: Arc<GraphOfGroups>,
        vertex_actions: Vec<FiniteAction>,
    ) -> Result<AlmostAction, GogError> {
        let degree = vertex_actions.first().map(FiniteAction::degree).unwrap_or(1);
        let letters = vec![Perm::identity(degree); gog.oriented_edges().len()];
        AlmostAction::new(gog, vertex_actions, letters)
    }

    pub fn gog(&self) -> &Arc<GraphOfGroups> {
        &self.gog
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_action(&self, v: usize) -> &FiniteAction {
        &self.vertex_actions[v]
    }

    pub fn vertex_actions(&self) -> &[FiniteAction] {
        &self.vertex_actions
    }

    /// Letters in `oriented_edges()` order.
    pub fn letters(&self) -> &[Perm] {
        &self.letters
    }

    /// The permutation assigned to the stable letter of any directed edge;
    /// reversed edges act by the inverse of their oriented partner.
    pub fn letter(&self, e: usize) -> Perm {
        let oriented = self.gog.oriented_edges();
        match oriented.iter().position(|&o| o == e) {
            Some(i) => self.letters[i].clone(),
            None => {
                let b = self.gog.graph().bar(e);
                let i = oriented.iter().position(|&o| o == b).expect("bar of edge is oriented");
                self.letters[i].inverse()
            }
        }
    }

    /// Evaluates a relation word to a permutation (identity iff the relation
    /// holds everywhere).
    pub fn eval_relation(&self, rel: &Relation) -> Perm {
        match rel {
            Relation::Tree { edge } => self.letter(*edge),
            Relation::Conjugation { edge, element } => {
                let e = *edge;
                let g = *element;
                let s = self.letter(e);
                let graph = self.gog.graph();
                let a = self.vertex_actions[graph.terminus(e)]
                    .perm(self.gog.inclusion(e).apply(g));
                let b = self.vertex_actions[graph.origin(e)]
                    .perm(self.gog.inclusion(graph.bar(e)).apply(g));
                s.inverse().compose(a).compose(&s).compose(&b.inverse())
            }
        }
    }

    /// The total relation defect `Σ_r d_X(ρ(r), id)`, an exact rational.
    /// Conjugation relations for the identity element are skipped (they hold
    /// identically). Zero exactly when the data is an honest action of the
    /// fundamental group.
    pub fn defect(&self) -> Rat {
        let mut total = rat_int(0);
        let graph = self.gog.graph();
        for e in self.gog.oriented_tree_edges() {
            total += normalized_hamming(&self.letter(e), &Perm::identity(self.degree));
        }
        for e in self.gog.oriented_edges() {
            let s = self.letter(e);
            for g in 1..self.gog.edge_group(e).order() {
                let a = self.vertex_actions[graph.terminus(e)]
                    .perm(self.gog.inclusion(e).apply(g));
                let b = self.vertex_actions[graph.origin(e)]
                    .perm(self.gog.inclusion(graph.bar(e)).apply(g));
                // d(s^{-1} a s b^{-1}, id) = d(a s, s b) by bi-invariance
                total += normalized_hamming(&a.compose(&s), &s.compose(b));
            }
        }
        total
    }

    pub fn is_honest(&self) -> bool {
        self.defect() == rat_int(0)
    }

    /// Conjugates every assigned permutation by `pi`.
    pub fn conjugate(&self, pi: &Perm) -> AlmostAction {
        let pi_inv = pi.inverse();
        AlmostAction {
            gog: Arc::clone(&self.gog),
            degree: self.degree,
            vertex_actions: self.vertex_actions.iter().map(|a| a.conjugate(pi)).collect(),
            letters: self.letters.iter().map(|p| pi.compose(p).compose(&pi_inv)).collect(),
        }
    }
}

/// Distance between two almost-actions over the same graph of groups on the
/// same set: the sum over the whole generating set (every vertex-group
/// element and every oriented stable letter) of normalized Hamming
/// distances.
pub fn almost_action_distance(a: &AlmostAction, b: &AlmostAction) -> Rat {
    assert!(Arc::ptr_eq(a.gog(), b.gog()), "almost-actions over different graphs of groups");
    assert_eq!(a.degree(), b.degree());
    let mut total = rat_int(0);
    for v in 0..a.gog().graph().n_vertices() {
        total += action_distance(a.vertex_action(v), b.vertex_action(v));
    }
    for (p, q) in a.letters().iter().zip(b.letters()) {
        total += normalized_hamming(p, q);
    }
    total
}

//! Labelled Schreier graphs and almost-automorphisms of almost order `n`.
//!
//! A Schreier graph of a rank-`d` free group is stored as `d` permutations
//! of the vertex set: label `i` contributes the directed edges
//! `v → labels[i](v)`, one out-edge and one in-edge of each label at every
//! vertex. An almost-automorphism is a vertex bijection together with an
//! edge bijection and a target order `n`; the repair pipeline translates
//! it into an almost-action of the group `F_d × ℤ/n`, corrects that, and
//! reads back a genuine automorphism `α′` with `α′ⁿ = id` on a nearby
//! graph.

use std::sync::Arc;

use crate::action::{invariant_shrink_perms, FiniteAction};
use crate::correct::{stabilize_with_budget, CorrectionReport};
use crate::cone::DEFAULT_BUDGET;
use crate::gog::AlmostAction;
use crate::harness::fd_zn_gog;
use crate::perm::Perm;

#[derive(Debug, thiserror::Error)]
pub enum SchreierError {
    #[error("a Schreier graph needs at least one vertex and one label")]
    Empty,
    #[error("label {index} acts on {got} points, the graph has {want} vertices")]
    LabelDegree { index: usize, got: usize, want: usize },
    #[error("vertex map acts on {got} points, the graph has {want} vertices")]
    VertexDegree { got: usize, want: usize },
    #[error("edge map has {got} entries, the graph has {want} edges")]
    EdgeCount { got: usize, want: usize },
    #[error("edge map is not a bijection")]
    EdgeMapNotBijective,
    #[error("target order must be at least 1")]
    BadOrder,
    #[error("the almost-automorphism is not strict")]
    NotStrict,
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

/// A finite graph edge-labelled by free generators `s_1, …, s_d`, in
/// permutation form. Edge ids are `v·d + i` for the label-`i` edge leaving
/// vertex `v`; its terminus is `labels[i](v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGraph {
    n_vertices: usize,
    labels: Vec<Perm>,
}

impl SchreierGraph {
    pub fn new(n_vertices: usize, labels: Vec<Perm>) -> Result<SchreierGraph, SchreierError> {
        if n_vertices == 0 || labels.is_empty() {
            return Err(SchreierError::Empty);
        }
        for (index, l) in labels.iter().enumerate() {
            if l.degree() != n_vertices {
                return Err(SchreierError::LabelDegree {
                    index,
                    got: l.degree(),
                    want: n_vertices,
                });
            }
        }
        Ok(SchreierGraph { n_vertices, labels })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of labels `d`.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_vertices * self.rank()
    }

    pub fn label(&self, i: usize) -> &Perm {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[Perm] {
        &self.labels
    }

    pub fn edge_id(&self, v: usize, i: usize) -> usize {
        debug_assert!(v < self.n_vertices && i < self.rank());
        v * self.rank() + i
    }

    pub fn origin(&self, e: usize) -> usize {
        e / self.rank()
    }

    /// The label ("colour") of an edge.
    pub fn color(&self, e: usize) -> usize {
        e % self.rank()
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.labels[self.color(e)].apply(self.origin(e))
    }
}

/// A pair of bijections (vertices, edges) meant to be an automorphism of
/// order `n`, but allowed to fail on some edges and some vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostAutomorphism {
    pub vertex_map: Perm,
    /// Image edge id per edge id.
    pub edge_map: Vec<usize>,
    /// Target order: the repaired automorphism must satisfy `αⁿ = id`.
    pub n: usize,
}

impl AlmostAutomorphism {
    pub fn new(
        vertex_map: Perm,
        edge_map: Vec<usize>,
        n: usize,
    ) -> Result<AlmostAutomorphism, SchreierError> {
        if n == 0 {
            return Err(SchreierError::BadOrder);
        }
        let m = edge_map.len();
        let mut seen = vec![false; m];
        for &f in &edge_map {
            if f >= m || seen[f] {
                return Err(SchreierError::EdgeMapNotBijective);
            }
            seen[f] = true;
        }
        Ok(AlmostAutomorphism { vertex_map, edge_map, n })
    }

    /// The strict almost-automorphism induced by a vertex map: every edge
    /// goes to the unique out-edge at the image vertex with the same label.
    pub fn strict(
        graph: &SchreierGraph,
        vertex_map: Perm,
        n: usize,
    ) -> Result<AlmostAutomorphism, SchreierError> {
        if vertex_map.degree() != graph.n_vertices() {
            return Err(SchreierError::VertexDegree {
                got: vertex_map.degree(),
                want: graph.n_vertices(),
            });
        }
        let edge_map = (0..graph.n_edges())
            .map(|e| graph.edge_id(vertex_map.apply(graph.origin(e)), graph.color(e)))
            .collect();
        AlmostAutomorphism::new(vertex_map, edge_map, n)
    }

    fn check_shape(&self, graph: &SchreierGraph) -> Result<(), SchreierError> {
        if self.vertex_map.degree() != graph.n_vertices() {
            return Err(SchreierError::VertexDegree {
                got: self.vertex_map.degree(),
                want: graph.n_vertices(),
            });
        }
        if self.edge_map.len() != graph.n_edges() {
            return Err(SchreierError::EdgeCount {
                got: self.edge_map.len(),
                want: graph.n_edges(),
            });
        }
        Ok(())
    }

    /// Edges where the map fails to behave as a graph automorphism: the
    /// image has a different label, the wrong origin, or the wrong
    /// terminus.
    pub fn defect_edges(&self, graph: &SchreierGraph) -> Vec<usize> {
        assert!(self.check_shape(graph).is_ok(), "almost-automorphism does not fit the graph");
        let a = &self.vertex_map;
        (0..graph.n_edges())
            .filter(|&e| {
                let f = self.edge_map[e];
                graph.color(f) != graph.color(e)
                    || graph.origin(f) != a.apply(graph.origin(e))
                    || graph.terminus(f) != a.apply(graph.terminus(e))
            })
            .collect()
    }

    /// Vertices where `αⁿ(v) ≠ v`.
    pub fn order_defect_vertices(&self) -> Vec<usize> {
        let power = self.vertex_map.pow(self.n);
        (0..self.vertex_map.degree()).filter(|&v| power.apply(v) != v).collect()
    }

    /// Whether every edge image has the right label and origin (the
    /// terminus may still fail).
    pub fn is_strict(&self, graph: &SchreierGraph) -> bool {
        assert!(self.check_shape(graph).is_ok(), "almost-automorphism does not fit the graph");
        (0..graph.n_edges()).all(|e| {
            self.edge_map[e]
                == graph.edge_id(self.vertex_map.apply(graph.origin(e)), graph.color(e))
        })
    }

    /// A genuine automorphism with `αⁿ = id`: strict, no defect edges, no
    /// order-defect vertices.
    pub fn is_exact(&self, graph: &SchreierGraph) -> bool {
        self.is_strict(graph)
            && self.defect_edges(graph).is_empty()
            && self.order_defect_vertices().is_empty()
    }
}

/// Forces the label and origin conditions on every edge image, leaving
/// the vertex map untouched. Returns the strict map and the number of
/// edited edges; an edge is edited only if it was a defect edge, so the
/// edit count never exceeds the defect-edge count.
pub fn normalize_weak(
    graph: &SchreierGraph,
    am: &AlmostAutomorphism,
) -> Result<(AlmostAutomorphism, usize), SchreierError> {
    am.check_shape(graph)?;
    let strict = AlmostAutomorphism::strict(graph, am.vertex_map.clone(), am.n)?;
    let edits = strict.edge_map.iter().zip(&am.edge_map).filter(|(a, b)| a != b).count();
    Ok((strict, edits))
}

/// A strict almost-automorphism translated into an almost-action of
/// `F_d × ℤ/n` on the vertex set, with the translation's own repair cost.
#[derive(Debug)]
pub struct Conversion {
    pub action: AlmostAction,
    /// Vertices where the synthesized order-`n` approximant had to differ
    /// from the input vertex map.
    pub vertex_edits: usize,
}

/// Translates `(graph, α)` into an almost-action of `F_d × ℤ/n`.
///
/// The graph of groups has one vertex with group `ℤ/n` and `d` loops with
/// edge group `ℤ/n` and identity inclusions; its fundamental group is
/// `F_d × ℤ/n`. The stable letters are the label permutations. The vertex
/// `ℤ/n`-action comes from `α`: since `α` need only have almost order `n`,
/// it is restricted to the `αⁿ`-fixed part (shrunk to `α`-invariance,
/// which is automatic but re-checked) and completed by the identity
/// elsewhere, so the synthesized generator genuinely has `σⁿ = id`.
pub fn to_almost_action(
    graph: &SchreierGraph,
    am: &AlmostAutomorphism,
) -> Result<Conversion, SchreierError> {
    am.check_shape(graph)?;
    if !am.is_strict(graph) {
        return Err(SchreierError::NotStrict);
    }
    let m = graph.n_vertices();
    let d = graph.rank();
    let n = am.n;
    let gog = fd_zn_gog(d, n);
    let tau = &am.vertex_map;
    let (sigma, vertex_action) = if n == 1 {
        // the group is trivial; the approximant is the identity
        let sigma = Perm::identity(m);
        (sigma, FiniteAction::trivial(Arc::clone(gog.vertex_group(0)), m))
    } else {
        let power = tau.pow(n);
        let fixed: Vec<bool> = (0..m).map(|v| power.apply(v) == v).collect();
        let keep = invariant_shrink_perms(&[tau], &fixed);
        let mut map: Vec<usize> = (0..m).collect();
        for (v, slot) in map.iter_mut().enumerate() {
            if keep[v] {
                *slot = tau.apply(v);
            }
        }
        let sigma = Perm::new(map).ok_or_else(|| {
            SchreierError::Internal("order-n approximant is not a permutation".into())
        })?;
        let action =
            FiniteAction::from_generator_images(Arc::clone(gog.vertex_group(0)), &[(1, sigma.clone())])
                .map_err(|e| {
                    SchreierError::Internal(format!("approximant does not generate ℤ/n: {e}"))
                })?;
        (sigma, action)
    };
    let vertex_edits = (0..m).filter(|&v| sigma.apply(v) != tau.apply(v)).count();
    let letters = graph.labels().to_vec();
    let action = AlmostAction::new(gog, vec![vertex_action], letters)
        .map_err(|e| SchreierError::Internal(format!("conversion is malformed: {e}")))?;
    Ok(Conversion { action, vertex_edits })
}

/// What [`repair`] produced and how far it moved.
#[derive(Debug)]
pub struct RepairOutcome {
    pub graph: SchreierGraph,
    /// Exact automorphism of the output graph with `αⁿ = id`.
    pub automorphism: AlmostAutomorphism,
    /// `|E(A) △ E(A′)|` over labelled directed edges.
    pub edge_diff: usize,
    /// Vertices where the output vertex map differs from the input's.
    pub vertex_diff: usize,
    /// Exact order of the output vertex map (divides `n`).
    pub alpha_order: usize,
    /// Edges edited by [`normalize_weak`] before conversion.
    pub normalize_edits: usize,
    /// Vertices edited while synthesizing the order-`n` approximant.
    pub vertex_edits: usize,
    /// Full diagnostics of the underlying correction.
    pub report: CorrectionReport,
}

/// Repairs a weak almost-automorphism into a genuine automorphism of a
/// nearby Schreier graph, with the default search budget.
pub fn repair(
    graph: &SchreierGraph,
    am: &AlmostAutomorphism,
) -> Result<RepairOutcome, SchreierError> {
    repair_with_budget(graph, am, DEFAULT_BUDGET)
}

/// [`repair`] with an explicit branch-and-bound node budget.
///
/// Pipeline: normalize the edge map, translate to an almost-action of
/// `F_d × ℤ/n`, correct it, and read the repaired graph off the corrected
/// stable letters and the repaired vertex map off the corrected `ℤ/n`
/// generator. Exactness of the output is re-checked edge by edge.
pub fn repair_with_budget(
    graph: &SchreierGraph,
    am: &AlmostAutomorphism,
    budget: u64,
) -> Result<RepairOutcome, SchreierError> {
    let (strict, normalize_edits) = normalize_weak(graph, am)?;
    let conversion = to_almost_action(graph, &strict)?;
    let report = stabilize_with_budget(&conversion.action, budget);
    let m = graph.n_vertices();
    let labels: Vec<Perm> = report.output.letters().to_vec();
    let new_graph = SchreierGraph::new(m, labels)?;
    let alpha_prime = if am.n == 1 {
        Perm::identity(m)
    } else {
        report.output.vertex_action(0).perm(1).clone()
    };
    let automorphism = AlmostAutomorphism::strict(&new_graph, alpha_prime.clone(), am.n)?;
    if !automorphism.is_exact(&new_graph) {
        return Err(SchreierError::Internal(
            "repaired automorphism failed the exactness re-check".into(),
        ));
    }
    let changed_edges: usize = (0..graph.rank())
        .map(|i| {
            (0..m)
                .filter(|&v| graph.label(i).apply(v) != new_graph.label(i).apply(v))
                .count()
        })
        .sum();
    let vertex_diff =
        (0..m).filter(|&v| alpha_prime.apply(v) != am.vertex_map.apply(v)).count();
    Ok(RepairOutcome {
        alpha_order: alpha_prime.order(),
        automorphism,
        edge_diff: 2 * changed_edges,
        vertex_diff,
        normalize_edits,
        vertex_edits: conversion.vertex_edits,
        report,
        graph: new_graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};

    /// Two-level honest structure: vertices are `(y, level)` with
    /// `v = y + level·half`, the automorphism swaps levels, and each label
    /// acts by the same permutation on both levels.
    fn two_level(half: usize, base_labels: &[Perm]) -> (SchreierGraph, Perm) {
        let m = 2 * half;
        let labels: Vec<Perm> = base_labels
            .iter()
            .map(|p| {
                let mut map = Vec::with_capacity(m);
                for v in 0..m {
                    let (y, level) = (v % half, v / half);
                    map.push(p.apply(y) + level * half);
                }
                Perm::new(map).unwrap()
            })
            .collect();
        let swap = Perm::new((0..m).map(|v| (v + half) % m).collect()).unwrap();
        (SchreierGraph::new(m, labels).unwrap(), swap)
    }

    #[test]
    fn edge_ids_round_trip() {
        let g = SchreierGraph::new(
            3,
            vec![Perm::new(vec![1, 2, 0]).unwrap(), Perm::identity(3)],
        )
        .unwrap();
        assert_eq!(g.n_edges(), 6);
        for v in 0..3 {
            for i in 0..2 {
                let e = g.edge_id(v, i);
                assert_eq!(g.origin(e), v);
                assert_eq!(g.color(e), i);
            }
        }
        assert_eq!(g.terminus(g.edge_id(1, 0)), 2);
        assert_eq!(g.terminus(g.edge_id(1, 1)), 1);
    }

    #[test]
    fn strict_of_honest_swap_is_exact() {
        let (graph, swap) = two_level(4, &[Perm::new(vec![1, 2, 3, 0]).unwrap()]);
        let am = AlmostAutomorphism::strict(&graph, swap, 2).unwrap();
        assert!(am.is_strict(&graph));
        assert!(am.defect_edges(&graph).is_empty());
        assert!(am.order_defect_vertices().is_empty());
        assert!(am.is_exact(&graph));
    }

    #[test]
    fn normalize_leaves_strict_maps_alone() {
        let (graph, swap) = two_level(3, &[Perm::new(vec![2, 0, 1]).unwrap()]);
        let am = AlmostAutomorphism::strict(&graph, swap, 2).unwrap();
        let (normalized, edits) = normalize_weak(&graph, &am).unwrap();
        assert_eq!(edits, 0);
        assert_eq!(normalized, am);
    }

    #[test]
    fn normalize_repairs_a_swapped_pair_of_images() {
        // bijectivity of the edge map means a single mislabelled image
        // forces a partner; the minimal weak map swaps the two same-vertex
        // out-edges, and normalization restores exactly those two entries
        let (graph, swap) =
            two_level(3, &[Perm::new(vec![2, 0, 1]).unwrap(), Perm::identity(3)]);
        let strict = AlmostAutomorphism::strict(&graph, swap, 2).unwrap();
        let mut weak_map = strict.edge_map.clone();
        weak_map.swap(0, 1);
        let weak = AlmostAutomorphism::new(strict.vertex_map.clone(), weak_map, 2).unwrap();
        let defects = weak.defect_edges(&graph);
        assert_eq!(defects, vec![0, 1], "both swapped edges are defect edges");
        let (normalized, edits) = normalize_weak(&graph, &weak).unwrap();
        assert_eq!(edits, 2);
        assert_eq!(normalized.edge_map, strict.edge_map);
        assert!(edits <= 2 * defects.len());
    }

    #[test]
    fn normalize_edit_count_is_bounded_by_defects() {
        use rand::SeedableRng;
        let (graph, swap) = two_level(
            6,
            &[Perm::new(vec![1, 2, 3, 4, 5, 0]).unwrap(), Perm::new(vec![1, 0, 3, 2, 5, 4]).unwrap()],
        );
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let scrambled = crate::perm::random_perm(graph.n_edges(), &mut rng);
            let weak =
                AlmostAutomorphism::new(swap.clone(), scrambled.images().to_vec(), 2).unwrap();
            let defects = weak.defect_edges(&graph).len();
            let (normalized, edits) = normalize_weak(&graph, &weak).unwrap();
            assert!(normalized.is_strict(&graph));
            assert!(edits <= defects, "edits {edits} exceed defect count {defects}");
            assert!(edits <= 2 * defects);
        }
    }

    #[test]
    fn conversion_of_exact_input_has_defect_zero() {
        let (graph, swap) = two_level(
            4,
            &[Perm::new(vec![1, 2, 3, 0]).unwrap(), Perm::new(vec![1, 0, 2, 3]).unwrap()],
        );
        let am = AlmostAutomorphism::strict(&graph, swap.clone(), 2).unwrap();
        let conv = to_almost_action(&graph, &am).unwrap();
        assert_eq!(conv.vertex_edits, 0);
        assert_eq!(conv.action.defect(), rat_int(0));
        // round trip: the letters are the labels and the generator is α
        assert_eq!(conv.action.letters(), graph.labels());
        assert_eq!(*conv.action.vertex_action(0).perm(1), swap);
    }

    #[test]
    fn conversion_at_order_one_is_always_honest() {
        let labels = vec![Perm::new(vec![2, 0, 1, 3]).unwrap(), Perm::new(vec![3, 2, 1, 0]).unwrap()];
        let graph = SchreierGraph::new(4, labels).unwrap();
        // α = id: nothing to edit
        let id = AlmostAutomorphism::strict(&graph, Perm::identity(4), 1).unwrap();
        let conv = to_almost_action(&graph, &id).unwrap();
        assert_eq!(conv.vertex_edits, 0);
        assert_eq!(conv.action.defect(), rat_int(0));
        // a moving α still converts to the (trivial) honest action, with
        // the whole map charged as edits
        let moved =
            AlmostAutomorphism::strict(&graph, Perm::new(vec![1, 0, 3, 2]).unwrap(), 1).unwrap();
        let conv = to_almost_action(&graph, &moved).unwrap();
        assert_eq!(conv.vertex_edits, 4);
        assert_eq!(conv.action.defect(), rat_int(0));
    }

    /// Frozen oracle: one broken 3-cycle. σ = (0 1 2)(3 4 5) commutes with
    /// L = (0 3)(1 4)(2 5), so (L, σ) is an honest pair. Taking
    /// τ = σ∘(0 1) breaks one 3-cycle; the synthesized approximant fixes
    /// the broken cycle pointwise and keeps (3 4 5). The identity block
    /// and the 3-cycle block then disagree everywhere L couples them:
    /// every one of the 6 points violates both nontrivial commuting
    /// relations, and the conversion defect is exactly 2 — meeting the
    /// provable bound (relations)·2·(broken points)/|X| = 2·(2·3)/6·… = 2
    /// with equality.
    #[test]
    fn conversion_defect_of_broken_cycle_matches_hand_count() {
        let ell = Perm::new(vec![3, 4, 5, 0, 1, 2]).unwrap();
        let graph = SchreierGraph::new(6, vec![ell]).unwrap();
        let tau = Perm::new(vec![2, 1, 0, 4, 5, 3]).unwrap();
        let am = AlmostAutomorphism::strict(&graph, tau, 3).unwrap();
        assert_eq!(am.order_defect_vertices(), vec![0, 2]);
        let conv = to_almost_action(&graph, &am).unwrap();
        assert_eq!(conv.vertex_edits, 2);
        let sigma = conv.action.vertex_action(0).perm(1);
        assert_eq!(sigma.images(), &[0, 1, 2, 4, 5, 3]);
        let defect = conv.action.defect();
        assert_eq!(defect, rat_int(2), "both relations fail at all six points");
        // broken points: the three where the approximant differs from the
        // unbroken template; each relation can fail only at such a point
        // or an L-preimage of one, giving defect ≤ 2·(2·3)/6 exactly
        assert!(defect <= rat(2 * (2 * 3), 6));
    }

    #[test]
    fn repair_of_exact_input_is_identity() {
        let (graph, swap) = two_level(
            4,
            &[Perm::new(vec![1, 2, 3, 0]).unwrap(), Perm::new(vec![1, 0, 2, 3]).unwrap()],
        );
        let am = AlmostAutomorphism::strict(&graph, swap, 2).unwrap();
        let out = repair(&graph, &am).unwrap();
        assert_eq!(out.edge_diff, 0);
        assert_eq!(out.vertex_diff, 0);
        assert_eq!(out.normalize_edits, 0);
        assert_eq!(out.vertex_edits, 0);
        assert_eq!(out.graph, graph);
        assert_eq!(out.automorphism, am);
        assert_eq!(out.alpha_order, 2);
    }

    #[test]
    fn repair_rebuilds_the_broken_cycle_exactly() {
        let ell = Perm::new(vec![3, 4, 5, 0, 1, 2]).unwrap();
        let graph = SchreierGraph::new(6, vec![ell]).unwrap();
        let tau = Perm::new(vec![2, 1, 0, 4, 5, 3]).unwrap();
        let am = AlmostAutomorphism::strict(&graph, tau, 3).unwrap();
        let out = repair(&graph, &am).unwrap();
        assert!(out.automorphism.is_exact(&out.graph));
        assert_eq!(out.vertex_diff, 2, "the two broken-cycle movers are reset");
        assert_eq!(out.alpha_order, 3);
        assert!(out.edge_diff > 0, "the label cannot commute with (3 4 5) unchanged");
        assert!(out.edge_diff <= 12);
        assert_eq!(out.edge_diff % 2, 0, "symmetric differences are even");
        assert_eq!(out.report.output_defect, rat_int(0));
    }

    #[test]
    fn repair_of_perturbed_hundred_vertex_pair_stays_local() {
        let base: Vec<usize> = (0..50).map(|y| (y + 7) % 50).collect();
        let (graph, swap) = two_level(
            50,
            &[Perm::new(base).unwrap(), Perm::new((0..50).map(|y| (y * 3) % 50).collect()).unwrap()],
        );
        // perturb the automorphism on two vertices
        let tau = swap.compose(&Perm::transposition(100, 0, 1));
        let am = AlmostAutomorphism::strict(&graph, tau, 2).unwrap();
        assert!(!am.order_defect_vertices().is_empty());
        let out = repair(&graph, &am).unwrap();
        assert!(out.automorphism.is_exact(&out.graph));
        // exhaustive exactness: every edge, all three conditions
        let a = &out.automorphism.vertex_map;
        for e in 0..out.graph.n_edges() {
            let f = out.automorphism.edge_map[e];
            assert_eq!(out.graph.color(f), out.graph.color(e));
            assert_eq!(out.graph.origin(f), a.apply(out.graph.origin(e)));
            assert_eq!(out.graph.terminus(f), a.apply(out.graph.terminus(e)));
        }
        assert!(a.pow(2).is_identity());
        assert_eq!(out.vertex_diff, 4, "the four order-broken vertices are reset");
        assert!(out.edge_diff <= 64, "repair stays near the perturbation");
        assert_eq!(out.report.output_defect, rat_int(0));
    }

    #[test]
    fn repair_accepts_lower_order_than_target() {
        // α of exact order 2 with target order 4: α⁴ = id already, so the
        // conversion is honest and nothing moves
        let (graph, swap) = two_level(3, &[Perm::new(vec![1, 2, 0]).unwrap()]);
        let am = AlmostAutomorphism::strict(&graph, swap, 4).unwrap();
        let out = repair(&graph, &am).unwrap();
        assert_eq!(out.edge_diff, 0);
        assert_eq!(out.vertex_diff, 0);
        assert_eq!(out.alpha_order, 2, "the exact order divides 4 without equalling it");
        assert!(out.automorphism.vertex_map.pow(4).is_identity());
    }

    #[test]
    fn repair_at_order_one_resets_alpha_only() {
        let labels = vec![Perm::new(vec![2, 0, 1, 3]).unwrap()];
        let graph = SchreierGraph::new(4, labels).unwrap();
        let moved =
            AlmostAutomorphism::strict(&graph, Perm::new(vec![1, 0, 3, 2]).unwrap(), 1).unwrap();
        let out = repair(&graph, &moved).unwrap();
        assert_eq!(out.graph, graph, "labels are untouched at order one");
        assert_eq!(out.edge_diff, 0);
        assert!(out.automorphism.vertex_map.is_identity());
        assert_eq!(out.vertex_diff, 4);
        assert_eq!(out.alpha_order, 1);
    }

    #[test]
    fn shape_mismatches_are_rejected() {
        let graph = SchreierGraph::new(3, vec![Perm::new(vec![1, 2, 0]).unwrap()]).unwrap();
        assert!(matches!(
            AlmostAutomorphism::strict(&graph, Perm::identity(4), 2),
            Err(SchreierError::VertexDegree { .. })
        ));
        assert!(matches!(
            AlmostAutomorphism::new(Perm::identity(3), vec![0, 0, 1], 2),
            Err(SchreierError::EdgeMapNotBijective)
        ));
        assert!(matches!(
            AlmostAutomorphism::new(Perm::identity(3), vec![0, 1, 2], 0),
            Err(SchreierError::BadOrder)
        ));
        let am = AlmostAutomorphism::new(Perm::identity(3), vec![0, 1, 2, 3], 2).unwrap();
        assert!(matches!(
            to_almost_action(&graph, &am),
            Err(SchreierError::EdgeCount { .. })
        ));
    }
}

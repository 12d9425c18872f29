//! Experiment plumbing: a zoo of graphs of groups, honest-action sampling,
//! perturbation models, a brute-force oracle, and a seeded trial runner.
//!
//! Everything here is deterministic given its seed: the RNG is ChaCha8,
//! a fixed portable algorithm, so trial streams and CSV outputs reproduce
//! bit-for-bit across platforms.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action::FiniteAction;
use crate::cone::enumerate_cone_kernel_points;
use crate::correct::{realize_action, stabilize_with_budget};
use crate::gog::{AlmostAction, GraphOfGroups, SerreGraph};
use crate::group::{FiniteGroup, GroupHom};
use crate::lattice::{dg_matrix, Basis, OrbitVector};
use crate::perm::{all_perms, random_perm, Perm};
use crate::ratio::{format_rat, Rat};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(
        "brute force is limited to degree ≤ 6 and vertex groups of order ≤ 6 \
         (got degree {degree}, max vertex order {max_order})"
    )]
    TooLarge { degree: usize, max_order: usize },
    #[error("unknown graph-of-groups name: {0}")]
    UnknownGog(String),
    #[error("bad trial config: {0}")]
    BadConfig(String),
}

// ---------------------------------------------------------------------------
// zoo

/// Names accepted by [`zoo_gog`], in the order used by the test sweeps.
pub const ZOO: &[&str] = &["sl2z", "f2_x_z2", "f2_x_z3", "z2_star_z3", "two_edge", "f1_x_z2"];

fn cyclic_hom(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    gen_image: usize,
) -> GroupHom {
    let mut image = Vec::with_capacity(source.order());
    let mut acc = 0usize;
    for _ in 0..source.order() {
        image.push(acc);
        acc = target.mul(acc, gen_image);
    }
    GroupHom::new(Arc::clone(source), Arc::clone(target), image)
        .expect("powers of an element form a homomorphism")
}

/// The amalgam `ℤ/4 ∗_{ℤ/2} ℤ/6`: two vertices joined by one edge pair
/// whose group `ℤ/2` includes as the unique order-2 subgroup on both
/// sides. Its fundamental group is `SL₂(ℤ)`.
pub fn sl2z_gog() -> Arc<GraphOfGroups> {
    let z4 = FiniteGroup::cyclic(4);
    let z6 = FiniteGroup::cyclic(6);
    let z2 = FiniteGroup::cyclic(2);
    let graph = SerreGraph::new(2, vec![0, 1], vec![1, 0], vec![1, 0])
        .expect("two vertices, one edge pair");
    GraphOfGroups::new(
        graph,
        vec![Arc::clone(&z4), Arc::clone(&z6)],
        vec![Arc::clone(&z2), Arc::clone(&z2)],
        vec![cyclic_hom(&z2, &z6, 3), cyclic_hom(&z2, &z4, 2)],
        Some(vec![0, 1]),
    )
    .expect("amalgam structure is valid")
}

/// One vertex with group `ℤ/n` and `d` loop pairs with edge group `ℤ/n`
/// and identity inclusions on both sides. Its fundamental group is
/// `F_d × ℤ/n`.
pub fn fd_zn_gog(d: usize, n: usize) -> Arc<GraphOfGroups> {
    let zn = FiniteGroup::cyclic(n);
    let m = 2 * d;
    let graph = SerreGraph::new(1, vec![0; m], vec![0; m], {
        let mut bar = Vec::with_capacity(m);
        for i in 0..d {
            bar.push(2 * i + 1);
            bar.push(2 * i);
        }
        bar
    })
    .expect("loop pairs are valid");
    GraphOfGroups::new(
        graph,
        vec![Arc::clone(&zn)],
        vec![Arc::clone(&zn); m],
        (0..m).map(|_| GroupHom::identity(&zn)).collect(),
        Some(vec![]),
    )
    .expect("product structure is valid")
}

/// The free product `ℤ/2 ∗ ℤ/3`: two vertices joined by one edge pair
/// with trivial edge group.
pub fn z2_star_z3_gog() -> Arc<GraphOfGroups> {
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let triv = FiniteGroup::trivial();
    let graph = SerreGraph::new(2, vec![0, 1], vec![1, 0], vec![1, 0])
        .expect("two vertices, one edge pair");
    GraphOfGroups::new(
        graph,
        vec![Arc::clone(&z2), Arc::clone(&z3)],
        vec![Arc::clone(&triv), Arc::clone(&triv)],
        vec![GroupHom::from_trivial(&z3), GroupHom::from_trivial(&z2)],
        Some(vec![0, 1]),
    )
    .expect("free product structure is valid")
}

/// Two vertices `ℤ/4` and `ℤ/2` joined by a tree edge (edge group `ℤ/2`,
/// identity into `ℤ/2` and `1 ↦ 2` into `ℤ/4`) plus a loop pair at the
/// first vertex with both inclusions `1 ↦ 2`.
pub fn two_edge_gog() -> Arc<GraphOfGroups> {
    let z4 = FiniteGroup::cyclic(4);
    let z2 = FiniteGroup::cyclic(2);
    let graph = SerreGraph::new(2, vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![1, 0, 3, 2])
        .expect("tree pair plus loop pair");
    GraphOfGroups::new(
        graph,
        vec![Arc::clone(&z4), Arc::clone(&z2)],
        vec![Arc::clone(&z2); 4],
        vec![
            GroupHom::identity(&z2),
            cyclic_hom(&z2, &z4, 2),
            cyclic_hom(&z2, &z4, 2),
            cyclic_hom(&z2, &z4, 2),
        ],
        Some(vec![0, 1]),
    )
    .expect("two-edge structure is valid")
}

/// One vertex carrying `group`, no edges.
pub fn single_vertex_gog(group: Arc<FiniteGroup>) -> Arc<GraphOfGroups> {
    let graph = SerreGraph::new(1, vec![], vec![], vec![]).expect("a lone vertex is valid");
    GraphOfGroups::new(graph, vec![group], vec![], vec![], Some(vec![]))
        .expect("single-vertex structure is valid")
}

/// Resolves a zoo name (see [`ZOO`]) to its graph of groups.
pub fn zoo_gog(name: &str) -> Option<Arc<GraphOfGroups>> {
    match name {
        "sl2z" => Some(sl2z_gog()),
        "f2_x_z2" => Some(fd_zn_gog(2, 2)),
        "f2_x_z3" => Some(fd_zn_gog(2, 3)),
        "z2_star_z3" => Some(z2_star_z3_gog()),
        "two_edge" => Some(two_edge_gog()),
        "f1_x_z2" => Some(fd_zn_gog(1, 2)),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// random and honest sampling

/// A uniformly-typed random action: a random packing of transitive coset
/// models, conjugated by a random permutation.
pub fn random_action<R: Rng + ?Sized>(
    group: &Arc<FiniteGroup>,
    degree: usize,
    rng: &mut R,
) -> FiniteAction {
    let cat = group.subgroup_classes().expect("vertex group within the catalogue bound");
    let mut acc: Option<FiniteAction> = None;
    let mut remaining = degree;
    while remaining > 0 {
        let fits: Vec<usize> =
            (0..cat.classes.len()).filter(|&i| cat.classes[i].degree <= remaining).collect();
        let class = &cat.classes[fits[rng.gen_range(0..fits.len())]];
        let piece = FiniteAction::coset(group, &class.stabilizer);
        remaining -= class.degree;
        acc = Some(match acc {
            None => piece,
            Some(a) => a.disjoint_union(&piece),
        });
    }
    let base = acc.expect("degree is at least one");
    base.conjugate(&random_perm(degree, rng))
}

/// The canonical action with a prescribed orbit-type vector: coset models
/// concatenated in basis order.
fn action_with_type(group: &Arc<FiniteGroup>, counts: &[i64]) -> FiniteAction {
    let cat = group.subgroup_classes().expect("vertex group within the catalogue bound");
    let mut acc: Option<FiniteAction> = None;
    for (count, class) in counts.iter().zip(&cat.classes) {
        for _ in 0..*count {
            let piece = FiniteAction::coset(group, &class.stabilizer);
            acc = Some(match acc {
                None => piece,
                Some(a) => a.disjoint_union(&piece),
            });
        }
    }
    acc.expect("positive total weight")
}

/// Samples honest actions of one graph of groups at any degree. The
/// kernel-cone generating pool is enumerated once at construction, so
/// repeated sampling is cheap.
pub struct HonestSampler {
    gog: Arc<GraphOfGroups>,
    basis: Arc<Basis>,
    /// Nonzero integer points of `Λ⁺ ∩ ker 𝐝` with per-vertex norm below
    /// twice the largest vertex-group order, paired with that norm.
    pool: Vec<(OrbitVector, usize)>,
}

impl HonestSampler {
    pub fn new(gog: &Arc<GraphOfGroups>) -> HonestSampler {
        let dg = dg_matrix(gog).expect("vertex groups within the catalogue bound");
        let basis = Arc::clone(&dg.col_basis);
        let weights = basis.weights();
        let nv = gog.graph().n_vertices();
        let max_order =
            (0..nv).map(|v| gog.vertex_group(v).order()).max().expect("at least one vertex");
        let cap = 2 * max_order as i64 * nv as i64;
        let pool = enumerate_cone_kernel_points(&dg.entries, &weights, cap)
            .into_iter()
            .filter(|x| x.iter().any(|&c| c != 0))
            .map(|coords| {
                let size: i64 = basis
                    .block_range(0)
                    .map(|i| coords[i].abs() * weights[i])
                    .sum();
                (OrbitVector::new(Arc::clone(&basis), coords), size as usize)
            })
            .collect();
        HonestSampler { gog: Arc::clone(gog), basis, pool }
    }

    /// A random kernel-cone point of per-vertex norm exactly `degree`,
    /// greedily packed from the pool. The singleton vector has norm 1 and
    /// is always in the pool, so any degree ≥ 1 is reachable.
    fn random_type(&self, degree: usize, rng: &mut ChaCha8Rng) -> OrbitVector {
        let mut lambda = OrbitVector::zero(&self.basis);
        let mut remaining = degree;
        while remaining > 0 {
            let fits: Vec<usize> =
                (0..self.pool.len()).filter(|&i| self.pool[i].1 <= remaining).collect();
            let (v, size) = &self.pool[fits[rng.gen_range(0..fits.len())]];
            lambda = lambda.add(v);
            remaining -= size;
        }
        lambda
    }

    /// A seeded honest action of the given degree: random orbit types from
    /// the kernel cone, random stable letters re-soldered into exact
    /// intertwiners, and a final random conjugation.
    pub fn sample(&self, degree: usize, seed: u64) -> AlmostAction {
        assert!(degree >= 1, "degree must be at least 1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = self.random_type(degree, &mut rng);
        let nv = self.gog.graph().n_vertices();
        let actions: Vec<FiniteAction> = (0..nv)
            .map(|v| action_with_type(self.gog.vertex_group(v), lambda.block_coords(v)))
            .collect();
        let letters: Vec<Perm> = self
            .gog
            .oriented_edges()
            .iter()
            .map(|&e| {
                if self.gog.in_tree(e) {
                    Perm::identity(degree)
                } else {
                    random_perm(degree, &mut rng)
                }
            })
            .collect();
        let candidate = AlmostAction::new(Arc::clone(&self.gog), actions, letters)
            .expect("canonical actions fit the graph of groups");
        let realized = realize_action(&candidate, &lambda)
            .expect("kernel-cone types are always realizable");
        let out = realized.action.conjugate(&random_perm(degree, &mut rng));
        debug_assert!(out.is_honest());
        out
    }
}

/// A seeded honest action: convenience wrapper building a fresh
/// [`HonestSampler`]. For many samples of the same graph of groups, build
/// the sampler once instead.
pub fn random_honest_action(gog: &Arc<GraphOfGroups>, degree: usize, seed: u64) -> AlmostAction {
    HonestSampler::new(gog).sample(degree, seed)
}

// ---------------------------------------------------------------------------
// perturbation

/// How stable letters are damaged. Vertex actions are never touched: the
/// almost-action representation keeps them honest by construction, and
/// the defect lives entirely on the relations involving letters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbModel {
    /// Compose every stable letter with this many random transpositions
    /// (disjoint supports whenever they fit, so `k` transpositions edit
    /// exactly `2k` points).
    Transpositions { per_letter: usize },
    /// Rewire each letter at a random point set of this expected density
    /// by shuffling the images among the chosen points.
    Rewire { rate: f64 },
}

impl PerturbModel {
    /// Compact label for CSV output.
    pub fn label(&self) -> String {
        match self {
            PerturbModel::Transpositions { per_letter } => format!("transpositions:{per_letter}"),
            PerturbModel::Rewire { rate } => format!("rewire:{rate}"),
        }
    }
}

/// A perturbed action and the number of letter entries actually changed.
#[derive(Debug)]
pub struct Perturbed {
    pub action: AlmostAction,
    pub intended_edits: usize,
}

/// Damages the stable letters of an honest action.
pub fn perturb(rho: &AlmostAction, model: &PerturbModel, seed: u64) -> Perturbed {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rho.degree();
    let mut edits = 0usize;
    let letters: Vec<Perm> = rho
        .letters()
        .iter()
        .map(|s| {
            let mut out = s.clone();
            match model {
                PerturbModel::Transpositions { per_letter } => {
                    let k = *per_letter;
                    if k == 0 {
                        return out;
                    }
                    if 2 * k <= n {
                        // pairwise-disjoint supports: exactly 2k edits
                        let support = rand::seq::index::sample(&mut rng, n, 2 * k).into_vec();
                        for pair in support.chunks_exact(2) {
                            out = out.compose(&Perm::transposition(n, pair[0], pair[1]));
                        }
                    } else {
                        for _ in 0..k {
                            let a = rng.gen_range(0..n);
                            let mut b = rng.gen_range(0..n - 1);
                            if b >= a {
                                b += 1;
                            }
                            out = out.compose(&Perm::transposition(n, a, b));
                        }
                    }
                }
                PerturbModel::Rewire { rate } => {
                    let marked: Vec<usize> = (0..n).filter(|_| rng.gen_bool(*rate)).collect();
                    if marked.len() >= 2 {
                        let images: Vec<usize> =
                            marked.iter().map(|&x| out.apply(x)).collect();
                        let shuffle = random_perm(marked.len(), &mut rng);
                        let mut map = out.images().to_vec();
                        for (j, &x) in marked.iter().enumerate() {
                            map[x] = images[shuffle.apply(j)];
                        }
                        out = Perm::new(map).expect("image shuffle stays bijective");
                    }
                }
            }
            edits += (0..n).filter(|&x| out.apply(x) != s.apply(x)).count();
            out
        })
        .collect();
    let action =
        AlmostAction::new(Arc::clone(rho.gog()), rho.vertex_actions().to_vec(), letters)
            .expect("perturbation preserves the shape");
    Perturbed { action, intended_edits: edits }
}

// ---------------------------------------------------------------------------
// brute force

/// Every action of `group` on `{0..degree-1}`, by enumerating generator
/// images exhaustively.
fn all_group_actions(group: &Arc<FiniteGroup>, degree: usize) -> Vec<FiniteAction> {
    if group.order() == 1 {
        return vec![FiniteAction::trivial(Arc::clone(group), degree)];
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![0usize];
    for a in 1..group.order() {
        if !span.contains(&a) {
            gens.push(a);
            span = group.generated_subgroup(&gens);
            if span.len() == group.order() {
                break;
            }
        }
    }
    let perms = all_perms(degree);
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    'outer: loop {
        let images: Vec<(usize, Perm)> =
            gens.iter().zip(&idx).map(|(&g, &i)| (g, perms[i].clone())).collect();
        if let Ok(action) = FiniteAction::from_generator_images(Arc::clone(group), &images) {
            out.push(action);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                break 'outer;
            }
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
    out
}

/// Exhaustively enumerates every honest action of the fundamental group
/// on `{0..degree-1}`: all vertex-action tuples compatible across tree
/// edges, with identity tree letters and every relation-compatible choice
/// of the remaining letters.
pub fn brute_force_actions(
    gog: &Arc<GraphOfGroups>,
    degree: usize,
) -> Result<Vec<AlmostAction>, HarnessError> {
    let graph = gog.graph();
    let nv = graph.n_vertices();
    let max_order = (0..nv).map(|v| gog.vertex_group(v).order()).max().unwrap_or(1);
    if degree > 6 || max_order > 6 {
        return Err(HarnessError::TooLarge { degree, max_order });
    }
    let per_vertex: Vec<Vec<FiniteAction>> =
        (0..nv).map(|v| all_group_actions(gog.vertex_group(v), degree)).collect();
    let perms = all_perms(degree);
    let oriented = gog.oriented_edges();
    let id = Perm::identity(degree);
    let mut out = Vec::new();

    let mut idx = vec![0usize; nv];
    'tuples: loop {
        let acts: Vec<&FiniteAction> =
            idx.iter().enumerate().map(|(v, &i)| &per_vertex[v][i]).collect();
        // tree edges force their letters to the identity, so the
        // conjugation relation degenerates to exact equality
        let tree_ok = oriented.iter().filter(|&&e| gog.in_tree(e)).all(|&e| {
            let (u, v) = (graph.origin(e), graph.terminus(e));
            let (inc_e, inc_eb) = (gog.inclusion(e), gog.inclusion(graph.bar(e)));
            (0..gog.edge_group(e).order())
                .all(|g| acts[v].perm(inc_e.apply(g)) == acts[u].perm(inc_eb.apply(g)))
        });
        if tree_ok {
            let choices: Vec<Vec<Perm>> = oriented
                .iter()
                .map(|&e| {
                    if gog.in_tree(e) {
                        return vec![id.clone()];
                    }
                    let (u, v) = (graph.origin(e), graph.terminus(e));
                    let (inc_e, inc_eb) = (gog.inclusion(e), gog.inclusion(graph.bar(e)));
                    perms
                        .iter()
                        .filter(|s| {
                            (0..gog.edge_group(e).order()).all(|g| {
                                acts[v].perm(inc_e.apply(g)).compose(s)
                                    == s.compose(acts[u].perm(inc_eb.apply(g)))
                            })
                        })
                        .cloned()
                        .collect()
                })
                .collect();
            if choices.iter().all(|c| !c.is_empty()) {
                let mut pick = vec![0usize; choices.len()];
                'letters: loop {
                    let letters: Vec<Perm> =
                        pick.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
                    let aa = AlmostAction::new(
                        Arc::clone(gog),
                        acts.iter().map(|a| (*a).clone()).collect(),
                        letters,
                    )
                    .expect("enumerated pieces fit the graph of groups");
                    debug_assert!(aa.is_honest());
                    out.push(aa);
                    let mut pos = 0;
                    loop {
                        if pos == pick.len() {
                            break 'letters;
                        }
                        pick[pos] += 1;
                        if pick[pos] < choices[pos].len() {
                            break;
                        }
                        pick[pos] = 0;
                        pos += 1;
                    }
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == nv {
                break 'tuples;
            }
            idx[pos] += 1;
            if idx[pos] < per_vertex[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// trial runner

/// One batch of randomized trials on a fixed graph of groups and degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub gog_name: String,
    pub degree: usize,
    pub model: PerturbModel,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_budget() -> u64 {
    crate::cone::DEFAULT_BUDGET
}

/// One trial's measurements, exact where the quantity is exact.
#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub gog_name: String,
    pub degree: usize,
    pub model: String,
    /// The per-trial derived seed.
    pub seed: u64,
    pub delta: Rat,
    pub kernel_defect: Rat,
    pub cone_ratio: Rat,
    pub distance: Rat,
    /// Wall clock; the only non-reproducible field.
    pub runtime_ms: u128,
    pub fallback: bool,
}

pub const CSV_HEADER: &str =
    "gog,|X|,model,seed,delta,kernel_defect,cone_ratio,distance,runtime_ms,fallback";

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.gog_name,
            self.degree,
            self.model,
            self.seed,
            format_rat(&self.delta),
            format_rat(&self.kernel_defect),
            format_rat(&self.cone_ratio),
            format_rat(&self.distance),
            self.runtime_ms,
            self.fallback
        )
    }

    /// Everything except the wall clock, for determinism comparisons.
    pub fn exact_fields(&self) -> (&str, usize, &str, u64, &Rat, &Rat, &Rat, &Rat, bool) {
        (
            &self.gog_name,
            self.degree,
            &self.model,
            self.seed,
            &self.delta,
            &self.kernel_defect,
            &self.cone_ratio,
            &self.distance,
            self.fallback,
        )
    }
}

/// Derives the i-th trial seed from the master seed.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    master.wrapping_add((index as u64).wrapping_mul(0x9E3779B97F4A7C15))
}

/// Runs `config.trials` independent sample→perturb→stabilize rounds and
/// records the measurements. Identical configs yield identical records
/// (up to `runtime_ms`).
pub fn run_trials(config: &TrialConfig) -> Result<Vec<TrialRecord>, HarnessError> {
    if config.degree < 1 {
        return Err(HarnessError::BadConfig("degree must be at least 1".into()));
    }
    if let PerturbModel::Rewire { rate } = config.model {
        if !(0.0..=1.0).contains(&rate) {
            return Err(HarnessError::BadConfig(format!("rewire rate {rate} outside [0,1]")));
        }
    }
    let gog = zoo_gog(&config.gog_name)
        .ok_or_else(|| HarnessError::UnknownGog(config.gog_name.clone()))?;
    let sampler = HonestSampler::new(&gog);
    let mut records = Vec::with_capacity(config.trials);
    for i in 0..config.trials {
        let seed = trial_seed(config.seed, i);
        let honest = sampler.sample(config.degree, seed);
        let perturbed = perturb(&honest, &config.model, seed ^ 0xD1B5_4A32_D192_ED03);
        let started = Instant::now();
        let report = stabilize_with_budget(&perturbed.action, config.budget);
        let runtime_ms = started.elapsed().as_millis();
        records.push(TrialRecord {
            gog_name: config.gog_name.clone(),
            degree: config.degree,
            model: config.model.label(),
            seed,
            delta: report.input_defect,
            kernel_defect: report.kernel_defect,
            cone_ratio: report.cone.achieved_ratio,
            distance: report.distance,
            runtime_ms,
            fallback: report.cone.fallback,
        });
    }
    Ok(records)
}

//! JSON file formats for every object the command line touches: groups,
//! actions, graphs of groups, almost-actions, Schreier graphs, vertex
//! automorphisms, cone problems, and the report structures.
//!
//! Exact rationals are serialized as `"p/q"` strings; orbit-type vectors
//! carry explicit basis descriptors (`vertex`/`edge`, stabilizer set,
//! degree) per coordinate so files cannot silently misalign.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{ActionError, FiniteAction};
use crate::cone::{ConeError, ConeProblem, ConeSolution};
use crate::correct::{CorrectionReport, StageOneRecord, StageTwoRecord};
use crate::gog::{AlmostAction, GogError, GraphOfGroups, SerreGraph};
use crate::group::{FiniteGroup, GroupError, GroupHom};
use crate::lattice::{OrbitVector, Space};
use crate::perm::Perm;
use crate::ratio::format_rat;
use crate::schreier::{AlmostAutomorphism, RepairOutcome, SchreierError, SchreierGraph};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("file: {0}")]
    File(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Schreier(#[from] SchreierError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("bad data: {0}")]
    BadData(String),
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::BadData(msg.into())
}

/// Parses a JSON file into any deserializable format type.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-prints a format type into a JSON file with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn perm_from_images(images: &[usize], what: &str) -> Result<Perm, IoError> {
    Perm::new(images.to_vec())
        .ok_or_else(|| bad(format!("{what} is not a permutation: {images:?}")))
}

// ---------------------------------------------------------------------------
// groups

/// A finite group as a multiplication table: `table[a][b]` is the element
/// id of the product `a·b`. Optional display labels, one per element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroupFile {
    pub fn from_group(group: &FiniteGroup) -> GroupFile {
        let n = group.order();
        let table = (0..n).map(|a| (0..n).map(|b| group.mul(a, b)).collect()).collect();
        GroupFile { order: n, table, labels: group.labels().map(<[String]>::to_vec) }
    }

    /// Validates the table as a group (identity relocated to id 0 if it
    /// sits elsewhere).
    pub fn to_group(&self) -> Result<Arc<FiniteGroup>, IoError> {
        if self.table.len() != self.order {
            return Err(bad(format!(
                "declared order {} does not match table size {}",
                self.order,
                self.table.len()
            )));
        }
        Ok(FiniteGroup::validate(self.table.clone(), self.labels.clone())?)
    }
}

/// A group referenced either inline or as a path to a group file,
/// resolved relative to the referring file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(GroupFile),
}

impl GroupRef {
    pub fn resolve(&self, base: &Path) -> Result<Arc<FiniteGroup>, IoError> {
        match self {
            GroupRef::Inline(file) => file.to_group(),
            GroupRef::Path(rel) => {
                let file: GroupFile = read_json(&base.join(rel))?;
                file.to_group()
            }
        }
    }
}

// ---------------------------------------------------------------------------
// single-group actions

/// An action of a group on `{0..degree-1}`, given by the images of a
/// generating set. Keys are `"g<k>"` where `k` is the element id in the
/// group's multiplication table; values are image lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub degree: usize,
    pub generators: BTreeMap<String, Vec<usize>>,
}

fn element_key(element: usize) -> String {
    format!("g{element}")
}

fn parse_element_key(key: &str, order: usize) -> Result<usize, IoError> {
    let idx: usize = key
        .strip_prefix('g')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad(format!("generator key {key:?} is not of the form \"g<k>\"")))?;
    if idx >= order {
        return Err(bad(format!("generator key {key:?} exceeds the group order {order}")));
    }
    Ok(idx)
}

impl ActionFile {
    /// Greedy minimal generating set, one entry per chosen generator.
    pub fn from_action(action: &FiniteAction) -> ActionFile {
        let group = action.group();
        let mut generators = BTreeMap::new();
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![0usize];
        for a in 1..group.order() {
            if !span.contains(&a) {
                gens.push(a);
                generators.insert(element_key(a), action.perm(a).images().to_vec());
                span = group.generated_subgroup(&gens);
                if span.len() == group.order() {
                    break;
                }
            }
        }
        ActionFile { degree: action.degree(), generators }
    }

    /// Reassembles the full action; the named elements must generate the
    /// group and their images must satisfy its multiplication table.
    pub fn to_action(&self, group: &Arc<FiniteGroup>) -> Result<FiniteAction, IoError> {
        if self.degree == 0 {
            return Err(bad("action degree must be at least 1"));
        }
        if group.order() == 1 {
            if !self.generators.is_empty() {
                return Err(bad("the trivial group admits no generator entries"));
            }
            return Ok(FiniteAction::trivial(Arc::clone(group), self.degree));
        }
        if self.generators.is_empty() {
            return Err(bad("a nontrivial group needs at least one generator entry"));
        }
        let mut pairs = Vec::with_capacity(self.generators.len());
        for (key, images) in &self.generators {
            let element = parse_element_key(key, group.order())?;
            if images.len() != self.degree {
                return Err(bad(format!(
                    "generator {key:?} has degree {} but the file declares {}",
                    images.len(),
                    self.degree
                )));
            }
            pairs.push((element, perm_from_images(images, &format!("generator {key:?}"))?));
        }
        Ok(FiniteAction::from_generator_images(Arc::clone(group), &pairs)?)
    }
}

// ---------------------------------------------------------------------------
// graphs of groups

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: usize,
    pub group: GroupRef,
}

/// One directed edge: its reverse `bar`, endpoints, the edge group
/// (shared with the reverse), and the inclusion into the terminal vertex
/// group as an image list over edge-group element ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: usize,
    pub bar: usize,
    pub origin: usize,
    pub terminus: usize,
    pub edge_group: GroupRef,
    pub inclusion_to_terminus: Vec<usize>,
}

/// A graph of groups. `tree` (directed edge ids, closed under reversal)
/// and `orientation` (the lower id of each edge pair) are optional; the
/// BFS tree and the canonical orientation are used when absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GogFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<usize>>,
}

impl GogFile {
    pub fn from_gog(gog: &GraphOfGroups) -> GogFile {
        let graph = gog.graph();
        let vertices = (0..graph.n_vertices())
            .map(|v| VertexEntry {
                id: v,
                group: GroupRef::Inline(GroupFile::from_group(gog.vertex_group(v))),
            })
            .collect();
        let edges = (0..graph.n_edges())
            .map(|e| EdgeEntry {
                id: e,
                bar: graph.bar(e),
                origin: graph.origin(e),
                terminus: graph.terminus(e),
                edge_group: GroupRef::Inline(GroupFile::from_group(gog.edge_group(e))),
                inclusion_to_terminus: gog.inclusion(e).image.clone(),
            })
            .collect();
        GogFile {
            vertices,
            edges,
            tree: Some(gog.tree().to_vec()),
            orientation: Some(gog.oriented_edges()),
        }
    }

    /// Validates and assembles the structure. Group path references are
    /// resolved relative to `base`.
    pub fn to_gog(&self, base: &Path) -> Result<Arc<GraphOfGroups>, IoError> {
        let nv = self.vertices.len();
        let m = self.edges.len();

        let mut vertex_groups: Vec<Option<Arc<FiniteGroup>>> = vec![None; nv];
        for entry in &self.vertices {
            if entry.id >= nv {
                return Err(bad(format!(
                    "vertex id {} outside 0..{nv} (ids must be contiguous)",
                    entry.id
                )));
            }
            if vertex_groups[entry.id].is_some() {
                return Err(bad(format!("vertex id {} appears twice", entry.id)));
            }
            vertex_groups[entry.id] = Some(entry.group.resolve(base)?);
        }
        let vertex_groups: Vec<Arc<FiniteGroup>> = vertex_groups.into_iter().flatten().collect();
        if vertex_groups.len() != nv {
            return Err(bad("vertex ids must cover 0..n exactly once"));
        }

        let mut records: Vec<Option<&EdgeEntry>> = vec![None; m];
        for entry in &self.edges {
            if entry.id >= m {
                return Err(bad(format!(
                    "edge id {} outside 0..{m} (ids must be contiguous)",
                    entry.id
                )));
            }
            if records[entry.id].is_some() {
                return Err(bad(format!("edge id {} appears twice", entry.id)));
            }
            records[entry.id] = Some(entry);
        }
        let records: Vec<&EdgeEntry> = records.into_iter().flatten().collect();
        if records.len() != m {
            return Err(bad("edge ids must cover 0..m exactly once"));
        }

        let graph = SerreGraph::new(
            nv,
            records.iter().map(|r| r.origin).collect(),
            records.iter().map(|r| r.terminus).collect(),
            records.iter().map(|r| r.bar).collect(),
        )?;

        // an edge and its reverse share one group object; resolve the lower
        // id of each pair and reuse its Arc after checking the other record
        // agrees
        let mut edge_groups: Vec<Option<Arc<FiniteGroup>>> = vec![None; m];
        for e in 0..m {
            if e < graph.bar(e) {
                let eb = graph.bar(e);
                let low = records[e].edge_group.resolve(base)?;
                let high = records[eb].edge_group.resolve(base)?;
                if *low != *high {
                    return Err(bad(format!(
                        "edges {e} and {eb} are reverses but carry different edge groups"
                    )));
                }
                edge_groups[e] = Some(Arc::clone(&low));
                edge_groups[eb] = Some(low);
            }
        }
        let edge_groups: Vec<Arc<FiniteGroup>> = edge_groups.into_iter().flatten().collect();

        let inclusions = (0..m)
            .map(|e| {
                GroupHom::new(
                    Arc::clone(&edge_groups[e]),
                    Arc::clone(&vertex_groups[graph.terminus(e)]),
                    records[e].inclusion_to_terminus.clone(),
                )
                .map_err(IoError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;

        if let Some(orientation) = &self.orientation {
            let mut seen = vec![false; m];
            for &e in orientation {
                if e >= m || seen[e] {
                    return Err(bad(format!("orientation lists edge {e} out of range or twice")));
                }
                seen[e] = true;
                if e > graph.bar(e) {
                    return Err(bad(format!(
                        "orientation must list the lower id of each edge pair (got {e}); \
                         stable letters are keyed to that canonical orientation"
                    )));
                }
            }
            if orientation.len() != m / 2 {
                return Err(bad("orientation must pick one direction of every edge pair"));
            }
        }

        Ok(GraphOfGroups::new(
            graph,
            vertex_groups,
            edge_groups,
            inclusions,
            self.tree.clone(),
        )?)
    }
}

/// Reads a graph-of-groups file, resolving group references relative to
/// the file's own directory.
pub fn load_gog(path: &Path) -> Result<Arc<GraphOfGroups>, IoError> {
    let file: GogFile = read_json(path)?;
    file.to_gog(path.parent().unwrap_or_else(|| Path::new(".")))
}

// ---------------------------------------------------------------------------
// almost-actions

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterEntry {
    /// Oriented edge id (the lower id of its pair).
    pub edge: usize,
    pub perm: Vec<usize>,
}

/// An almost-action of a fundamental group: one action file per vertex
/// (in vertex order) plus one stable-letter permutation per oriented
/// edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlmostActionFile {
    pub degree: usize,
    pub vertex_actions: Vec<ActionFile>,
    pub letters: Vec<LetterEntry>,
}

impl AlmostActionFile {
    pub fn from_almost_action(rho: &AlmostAction) -> AlmostActionFile {
        let letters = rho
            .gog()
            .oriented_edges()
            .iter()
            .zip(rho.letters())
            .map(|(&edge, perm)| LetterEntry { edge, perm: perm.images().to_vec() })
            .collect();
        AlmostActionFile {
            degree: rho.degree(),
            vertex_actions: rho.vertex_actions().iter().map(ActionFile::from_action).collect(),
            letters,
        }
    }

    pub fn to_almost_action(&self, gog: &Arc<GraphOfGroups>) -> Result<AlmostAction, IoError> {
        let nv = gog.graph().n_vertices();
        if self.vertex_actions.len() != nv {
            return Err(bad(format!(
                "{} vertex actions given, the graph of groups has {nv} vertices",
                self.vertex_actions.len()
            )));
        }
        let actions = self
            .vertex_actions
            .iter()
            .enumerate()
            .map(|(v, file)| {
                if file.degree != self.degree {
                    return Err(bad(format!(
                        "vertex {v} action has degree {} but the file declares {}",
                        file.degree, self.degree
                    )));
                }
                file.to_action(gog.vertex_group(v))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let oriented = gog.oriented_edges();
        let mut letters: Vec<Option<Perm>> = vec![None; oriented.len()];
        for entry in &self.letters {
            let pos = oriented
                .iter()
                .position(|&e| e == entry.edge)
                .ok_or_else(|| bad(format!("edge {} is not an oriented edge id", entry.edge)))?;
            if letters[pos].is_some() {
                return Err(bad(format!("edge {} has two letters", entry.edge)));
            }
            if entry.perm.len() != self.degree {
                return Err(bad(format!(
                    "letter at edge {} has degree {} but the file declares {}",
                    entry.edge,
                    entry.perm.len(),
                    self.degree
                )));
            }
            letters[pos] =
                Some(perm_from_images(&entry.perm, &format!("letter at edge {}", entry.edge))?);
        }
        let letters: Vec<Perm> = letters.into_iter().flatten().collect();
        if letters.len() != oriented.len() {
            return Err(bad("one letter per oriented edge required"));
        }
        Ok(AlmostAction::new(Arc::clone(gog), actions, letters)?)
    }
}

// ---------------------------------------------------------------------------
// Schreier graphs and automorphisms

/// A labelled Schreier graph: `labels` maps `"s1" .. "sd"` to the image
/// lists of the label permutations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchreierGraphFile {
    pub vertices: usize,
    pub rank: usize,
    pub labels: BTreeMap<String, Vec<usize>>,
}

impl SchreierGraphFile {
    pub fn from_graph(graph: &SchreierGraph) -> SchreierGraphFile {
        let labels = graph
            .labels()
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("s{}", i + 1), p.images().to_vec()))
            .collect();
        SchreierGraphFile { vertices: graph.n_vertices(), rank: graph.rank(), labels }
    }

    pub fn to_graph(&self) -> Result<SchreierGraph, IoError> {
        if self.labels.len() != self.rank {
            return Err(bad(format!(
                "{} labels given, rank {} declared",
                self.labels.len(),
                self.rank
            )));
        }
        let mut perms: Vec<Option<Perm>> = vec![None; self.rank];
        for (key, images) in &self.labels {
            let idx: usize = key
                .strip_prefix('s')
                .and_then(|s| s.parse().ok())
                .filter(|&i| 1 <= i && i <= self.rank)
                .ok_or_else(|| {
                    bad(format!("label key {key:?} is not \"s1\"..\"s{}\"", self.rank))
                })?;
            if perms[idx - 1].is_some() {
                return Err(bad(format!("label {key:?} appears twice")));
            }
            perms[idx - 1] = Some(perm_from_images(images, &format!("label {key:?}"))?);
        }
        let perms: Vec<Perm> = perms.into_iter().flatten().collect();
        Ok(SchreierGraph::new(self.vertices, perms)?)
    }
}

/// A candidate automorphism: the vertex permutation and the order `n` it
/// should have. The edge part is induced (each edge goes to the
/// same-colored edge at the image vertex).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismFile {
    pub vertex_map: Vec<usize>,
    pub n: usize,
}

impl AutomorphismFile {
    pub fn from_automorphism(am: &AlmostAutomorphism) -> AutomorphismFile {
        AutomorphismFile { vertex_map: am.vertex_map.images().to_vec(), n: am.n }
    }

    pub fn to_automorphism(&self, graph: &SchreierGraph) -> Result<AlmostAutomorphism, IoError> {
        let vertex_map = perm_from_images(&self.vertex_map, "vertex_map")?;
        Ok(AlmostAutomorphism::strict(graph, vertex_map, self.n)?)
    }
}

// ---------------------------------------------------------------------------
// cone problems

/// A standalone cone problem: minimize the weighted distance from
/// `lambda` to the kernel of `matrix` inside the positive cone. Missing
/// weights default to all ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeProblemFile {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_weights: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_weights: Option<Vec<i64>>,
    pub lambda: Vec<i64>,
}

impl ConeProblemFile {
    pub fn to_problem(&self) -> Result<ConeProblem, IoError> {
        let source = self.source_weights.clone().unwrap_or_else(|| vec![1; self.lambda.len()]);
        let target = self.target_weights.clone().unwrap_or_else(|| vec![1; self.matrix.len()]);
        Ok(ConeProblem::new(self.matrix.clone(), source, target, self.lambda.clone())?)
    }
}

// ---------------------------------------------------------------------------
// reports (output formats)

/// One orbit-type coordinate with its basis descriptor: which block it
/// belongs to (a vertex or an oriented edge), the canonical stabilizer of
/// its transitive class, and the class degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    pub stabilizer: Vec<usize>,
    pub degree: usize,
    pub count: i64,
}

/// An orbit-type vector with embedded basis descriptors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitVectorFile {
    pub coords: Vec<CoordEntry>,
}

impl OrbitVectorFile {
    pub fn from_vector(v: &OrbitVector) -> OrbitVectorFile {
        let coords = v
            .basis
            .items
            .iter()
            .zip(&v.coords)
            .map(|(item, &count)| {
                let (vertex, edge) = match v.basis.space {
                    Space::E => (None, Some(item.block)),
                    _ => (Some(item.block), None),
                };
                CoordEntry {
                    vertex,
                    edge,
                    stabilizer: item.class.stabilizer.clone(),
                    degree: item.class.degree,
                    count,
                }
            })
            .collect();
        OrbitVectorFile { coords }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSolutionFile {
    pub lambda_prime: Vec<i64>,
    pub distance: String,
    pub in_kernel: bool,
    pub in_cone: bool,
    pub norm_nonincreasing: bool,
    pub achieved_ratio: String,
    pub fallback: bool,
    pub theta: String,
    pub basis_bound: i64,
    pub nodes_explored: u64,
}

impl ConeSolutionFile {
    pub fn from_solution(s: &ConeSolution) -> ConeSolutionFile {
        ConeSolutionFile {
            lambda_prime: s.lambda_prime.clone(),
            distance: format_rat(&s.distance),
            in_kernel: s.in_kernel,
            in_cone: s.in_cone,
            norm_nonincreasing: s.norm_nonincreasing,
            achieved_ratio: format_rat(&s.achieved_ratio),
            fallback: s.fallback,
            theta: format_rat(&s.theta),
            basis_bound: s.basis_bound,
            nodes_explored: s.nodes_explored,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageOneFile {
    pub vertex: usize,
    pub effective_delta: String,
    pub distance: String,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTwoFile {
    pub edge: usize,
    pub in_tree: bool,
    pub distance: String,
    pub agreement: usize,
}

fn stage_one_file(r: &StageOneRecord) -> StageOneFile {
    StageOneFile {
        vertex: r.vertex,
        effective_delta: format_rat(&r.effective_delta),
        distance: format_rat(&r.distance),
        bound: format_rat(&r.bound),
    }
}

fn stage_two_file(r: &StageTwoRecord) -> StageTwoFile {
    StageTwoFile {
        edge: r.edge,
        in_tree: r.in_tree,
        distance: format_rat(&r.distance),
        agreement: r.agreement,
    }
}

/// The full diagnostics of one stabilization run. The corrected action
/// itself is written as a separate almost-action file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionReportFile {
    pub input_defect: String,
    pub kernel_defect: String,
    pub kernel_defect_bound: String,
    pub lambda: OrbitVectorFile,
    pub lambda_kernel: OrbitVectorFile,
    pub lambda_prime: OrbitVectorFile,
    pub cone: ConeSolutionFile,
    pub output_defect: String,
    pub distance: String,
    pub stage_one: Vec<StageOneFile>,
    pub stage_two: Vec<StageTwoFile>,
    pub warnings: Vec<String>,
}

impl CorrectionReportFile {
    pub fn from_report(r: &CorrectionReport) -> CorrectionReportFile {
        CorrectionReportFile {
            input_defect: format_rat(&r.input_defect),
            kernel_defect: format_rat(&r.kernel_defect),
            kernel_defect_bound: format_rat(&r.kernel_defect_bound),
            lambda: OrbitVectorFile::from_vector(&r.lambda),
            lambda_kernel: OrbitVectorFile::from_vector(&r.lambda_kernel),
            lambda_prime: OrbitVectorFile::from_vector(&r.lambda_prime),
            cone: ConeSolutionFile::from_solution(&r.cone),
            output_defect: format_rat(&r.output_defect),
            distance: format_rat(&r.distance),
            stage_one: r.stage_one.iter().map(stage_one_file).collect(),
            stage_two: r.stage_two.iter().map(stage_two_file).collect(),
            warnings: r.warnings.clone(),
        }
    }
}

/// Diff report of one Schreier-graph repair. The repaired graph and
/// automorphism are written as separate files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepairReportFile {
    pub edge_diff: usize,
    pub vertex_diff: usize,
    pub alpha_order: usize,
    pub normalize_edits: usize,
    pub vertex_edits: usize,
    pub correction: CorrectionReportFile,
}

impl RepairReportFile {
    pub fn from_outcome(o: &RepairOutcome) -> RepairReportFile {
        RepairReportFile {
            edge_diff: o.edge_diff,
            vertex_diff: o.vertex_diff,
            alpha_order: o.alpha_order,
            normalize_edits: o.normalize_edits,
            vertex_edits: o.vertex_edits,
            correction: CorrectionReportFile::from_report(&o.report),
        }
    }
}

//! Finite groups given by full multiplication tables, their subgroup
//! conjugacy classes, and homomorphisms between them.
//!
//! Elements are the ids `0, .., n-1` with the identity at id 0 (relocated on
//! validation if necessary). Conjugacy classes of subgroups index the
//! transitive actions of the group, so the catalogue built by
//! [`FiniteGroup::subgroup_classes`] doubles as the fixed basis of the
//! orbit-type module used throughout the crate: classes are ordered by
//! degree descending, ties broken by the canonical stabilizer encoding.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Hard cap on group orders accepted by the subgroup enumerator.
pub const MAX_GROUP_ORDER: usize = 255;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group of order {0} exceeds the supported bound {MAX_GROUP_ORDER}")]
    GroupTooLarge(usize),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
}

/// A finite group presented by its full multiplication table.
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>, // row-major: mult[a * order + b] = a * b
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
    catalogue: OnceLock<SubgroupCatalogue>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult
    }
}
impl Eq for FiniteGroup {}

/// One conjugacy class of subgroups, i.e. one isomorphism class of
/// transitive actions. `stabilizer` is the canonical representative: the
/// lexicographically least conjugate of the sorted element-id set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransClass {
    pub stabilizer: Vec<usize>,
    pub degree: usize,
}

/// The subgroup-conjugacy catalogue of a group: the ordered class list (the
/// basis of the orbit-type module) plus a lookup from every subgroup to its
/// class index.
pub struct SubgroupCatalogue {
    pub classes: Vec<TransClass>,
    by_subgroup: HashMap<Vec<usize>, usize>,
}

impl SubgroupCatalogue {
    /// Class index of an arbitrary subgroup (given as a sorted element set).
    pub fn class_of(&self, subgroup: &[usize]) -> Option<usize> {
        self.by_subgroup.get(subgroup).copied()
    }
}

impl FiniteGroup {
    /// Validates a multiplication table as a group: rows and columns are
    /// permutations, a two-sided identity exists, multiplication is
    /// associative, and every element has a two-sided inverse. The identity
    /// is relocated to id 0 if it sits elsewhere.
    pub fn validate(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<FiniteGroup>, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(GroupError::NotAGroup(format!("entry {x} out of range in row {i}")));
                }
            }
        }
        if let Some(ref ls) = labels {
            if ls.len() != n {
                return Err(GroupError::NotAGroup("label count differs from order".into()));
            }
        }

        // locate a two-sided identity
        let mut identity = None;
        'search: for e in 0..n {
            for x in 0..n {
                if table[e][x] != x || table[x][e] != x {
                    continue 'search;
                }
            }
            identity = Some(e);
            break;
        }
        let e = identity.ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;

        // relocate the identity to id 0 by swapping labels 0 <-> e
        let (table, labels) = if e == 0 {
            (table, labels)
        } else {
            let sw = |x: usize| if x == 0 { e } else if x == e { 0 } else { x };
            let mut t = vec![vec![0; n]; n];
            for a in 0..n {
                for b in 0..n {
                    t[a][b] = sw(table[sw(a)][sw(b)]);
                }
            }
            let labels = labels.map(|ls| (0..n).map(|i| ls[sw(i)].clone()).collect());
            (t, labels)
        };

        // rows and columns must be permutations (cancellation)
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                let r = table[a][b];
                let c = table[b][a];
                if seen_row[r] {
                    return Err(GroupError::NotAGroup(format!("row {a} repeats element {r}")));
                }
                if seen_col[c] {
                    return Err(GroupError::NotAGroup(format!("column {a} repeats element {c}")));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }

        // associativity
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }

        // two-sided inverses
        let mut inv = vec![0; n];
        for a in 0..n {
            let mut found = None;
            for b in 0..n {
                if table[a][b] == 0 && table[b][a] == 0 {
                    found = Some(b);
                    break;
                }
            }
            inv[a] = found
                .ok_or_else(|| GroupError::NotAGroup(format!("element {a} has no two-sided inverse")))?;
        }

        let mut mult = Vec::with_capacity(n * n);
        for row in &table {
            mult.extend_from_slice(row);
        }
        Ok(Arc::new(FiniteGroup { order: n, mult, inv, labels, catalogue: OnceLock::new() }))
    }

    /// The cyclic group of order `n` with elements `0, .., n-1` under
    /// addition mod `n`.
    pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
        assert!(n >= 1);
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mult.push((a + b) % n);
            }
        }
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Arc::new(FiniteGroup { order: n, mult, inv, labels: None, catalogue: OnceLock::new() })
    }

    pub fn trivial() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(1)
    }

    /// The symmetric group on `n` letters; element ids follow the
    /// lexicographic order of image lists, so id 0 is the identity.
    pub fn symmetric(n: usize) -> Arc<FiniteGroup> {
        let perms = crate::perm::all_perms(n);
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i)).collect();
        let m = perms.len();
        let mut mult = Vec::with_capacity(m * m);
        for a in &perms {
            for b in &perms {
                mult.push(index[a.compose(b).images()]);
            }
        }
        let inv = perms.iter().map(|p| index[p.inverse().images()]).collect();
        Arc::new(FiniteGroup { order: m, mult, inv, labels: None, catalogue: OnceLock::new() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn inv_of(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest element whose order equals the group order, when one exists.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&g| self.element_order(g) == self.order)
    }

    /// Subgroup generated by `gens`, as a sorted element set.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut elems = vec![0];
        let mut queue: Vec<usize> = Vec::new();
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                elems.push(g);
                queue.push(g);
            }
        }
        // close under products with all current elements
        let mut i = 0;
        while i < elems.len() {
            let a = elems[i];
            let mut j = 0;
            while j < elems.len() {
                let b = elems[j];
                for p in [self.mul(a, b), self.mul(b, a)] {
                    if !in_set[p] {
                        in_set[p] = true;
                        elems.push(p);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        let _ = queue;
        elems.sort_unstable();
        elems
    }

    pub fn conjugate_subgroup(&self, subgroup: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inv_of(g);
        let mut out: Vec<usize> =
            subgroup.iter().map(|&h| self.mul(self.mul(g, h), gi)).collect();
        out.sort_unstable();
        out
    }

    /// Lexicographically least conjugate of the sorted element set: the
    /// canonical representative of the subgroup's conjugacy class.
    pub fn canonical_conjugate(&self, subgroup: &[usize]) -> Vec<usize> {
        let mut best = subgroup.to_vec();
        best.sort_unstable();
        for g in 1..self.order {
            let cand = self.conjugate_subgroup(subgroup, g);
            if cand < best {
                best = cand;
            }
        }
        best
    }

    /// Every subgroup, enumerated by closure from below. Deterministic.
    fn enumerate_subgroups(&self) -> Vec<Vec<usize>> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let trivial = vec![0];
        all.insert(trivial.clone());
        let mut queue = vec![trivial];
        while let Some(h) = queue.pop() {
            for g in 1..self.order {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated_subgroup(&gens);
                if all.insert(k.clone()) {
                    queue.push(k);
                }
            }
        }
        all.into_iter().collect()
    }

    /// The conjugacy classes of subgroups, ordered by degree descending with
    /// ties broken by the canonical stabilizer encoding. This ordering is the
    /// fixed basis of the group's orbit-type module. Cached after the first
    /// call; errors if the order exceeds [`MAX_GROUP_ORDER`].
    pub fn subgroup_classes(&self) -> Result<&SubgroupCatalogue, GroupError> {
        if self.order > MAX_GROUP_ORDER {
            return Err(GroupError::GroupTooLarge(self.order));
        }
        Ok(self.catalogue.get_or_init(|| {
            let subs = self.enumerate_subgroups();
            let mut canon_of: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            let mut canons: BTreeSet<Vec<usize>> = BTreeSet::new();
            for s in &subs {
                let c = self.canonical_conjugate(s);
                canons.insert(c.clone());
                canon_of.insert(s.clone(), c);
            }
            let mut classes: Vec<TransClass> = canons
                .into_iter()
                .map(|stab| {
                    let degree = self.order / stab.len();
                    TransClass { stabilizer: stab, degree }
                })
                .collect();
            classes.sort_by(|a, b| {
                b.degree.cmp(&a.degree).then_with(|| a.stabilizer.cmp(&b.stabilizer))
            });
            let index: HashMap<Vec<usize>, usize> = classes
                .iter()
                .enumerate()
                .map(|(i, c)| (c.stabilizer.clone(), i))
                .collect();
            let by_subgroup = canon_of
                .into_iter()
                .map(|(s, c)| (s, index[&c]))
                .collect();
            SubgroupCatalogue { classes, by_subgroup }
        }))
    }
}

/// A homomorphism between finite groups, stored as the image of every
/// source element.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub image: Vec<usize>,
    pub injective: bool,
}

impl GroupHom {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        image: Vec<usize>,
    ) -> Result<GroupHom, GroupError> {
        if image.len() != source.order() {
            return Err(GroupError::NotAHomomorphism(format!(
                "image list has length {} for a group of order {}",
                image.len(),
                source.order()
            )));
        }
        for &y in &image {
            if y >= target.order() {
                return Err(GroupError::NotAHomomorphism(format!("image {y} out of range")));
            }
        }
        if image[0] != 0 {
            return Err(GroupError::NotAHomomorphism("identity not mapped to identity".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                    return Err(GroupError::NotAHomomorphism(format!(
                        "multiplicativity fails at ({a},{b})"
                    )));
                }
            }
        }
        let mut seen = vec![false; target.order()];
        let mut injective = true;
        for &y in &image {
            if seen[y] {
                injective = false;
                break;
            }
            seen[y] = true;
        }
        Ok(GroupHom { source, target, image, injective })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom {
            source: Arc::clone(g),
            target: Arc::clone(g),
            image: (0..g.order()).collect(),
            injective: true,
        }
    }

    /// The unique homomorphism from the trivial group.
    pub fn from_trivial(target: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom {
            source: FiniteGroup::trivial(),
            target: Arc::clone(target),
            image: vec![0],
            injective: true,
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }
}

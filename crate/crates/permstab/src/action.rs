//! Honest actions of finite groups on finite sets: orbit decomposition,
//! invariant shrinking, equivariant matching, and extension of actions from
//! subgroups along prescribed orbit types.
//!
//! An action is stored as one permutation per group element, so validation
//! is a direct check of the multiplication table. Orbit types are read off
//! by computing point stabilizers and looking them up in the group's
//! subgroup catalogue.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupHom, TransClass};
use crate::perm::{normalized_hamming, Perm};
use crate::ratio::Rat;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// An honest action of a finite group on `{0, .., degree-1}`, one
/// permutation per group element.
#[derive(Clone)]
pub struct FiniteAction {
    group: Arc<FiniteGroup>,
    degree: usize,
    perms: Vec<Perm>,
}

impl std::fmt::Debug for FiniteAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteAction(group order {}, degree {})", self.group.order(), self.degree)
    }
}

impl FiniteAction {
    /// Validates that `perms` defines a homomorphism into the symmetric
    /// group: identity goes to identity and composition follows the table.
    pub fn new(
        group: Arc<FiniteGroup>,
        perms: Vec<Perm>,
    ) -> Result<FiniteAction, ActionError> {
        if perms.len() != group.order() {
            return Err(ActionError::NotAnAction(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        let degree = perms.first().map(Perm::degree).unwrap_or(0);
        if degree == 0 {
            return Err(ActionError::NotAnAction("degree must be at least 1".into()));
        }
        if perms.iter().any(|p| p.degree() != degree) {
            return Err(ActionError::NotAnAction("mixed degrees".into()));
        }
        if !perms[0].is_identity() {
            return Err(ActionError::NotAnAction("identity element does not act trivially".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if perms[group.mul(a, b)] != perms[a].compose(&perms[b]) {
                    return Err(ActionError::NotAnAction(format!(
                        "composition fails at elements ({a},{b})"
                    )));
                }
            }
        }
        Ok(FiniteAction { group, degree, perms })
    }

    pub fn trivial(group: Arc<FiniteGroup>, degree: usize) -> FiniteAction {
        assert!(degree >= 1);
        let perms = vec![Perm::identity(degree); group.order()];
        FiniteAction { group, degree, perms }
    }

    /// The left-coset action of `group` on the cosets of `stabilizer`
    /// (a sorted subgroup element set). Cosets are indexed by ascending
    /// minimal representative; point 0 is the subgroup itself.
    pub fn coset(group: &Arc<FiniteGroup>, stabilizer: &[usize]) -> FiniteAction {
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &h in stabilizer {
                coset_of[group.mul(g, h)] = idx;
            }
        }
        let degree = reps.len();
        let perms = (0..n)
            .map(|a| {
                let map = reps.iter().map(|&r| coset_of[group.mul(a, r)]).collect();
                Perm::new(map).expect("coset action is a permutation")
            })
            .collect();
        FiniteAction { group: Arc::clone(group), degree, perms }
    }

    pub fn regular(group: &Arc<FiniteGroup>) -> FiniteAction {
        FiniteAction::coset(group, &[0])
    }

    /// Builds the action from images of a generating set by closing over the
    /// Cayley graph. Errors if the images do not generate consistently.
    pub fn from_generator_images(
        group: Arc<FiniteGroup>,
        gens: &[(usize, Perm)],
    ) -> Result<FiniteAction, ActionError> {
        let n = group.order();
        let degree = gens
            .first()
            .map(|(_, p)| p.degree())
            .ok_or_else(|| ActionError::Incompatible("no generators given".into()))?;
        let mut perms: Vec<Option<Perm>> = vec![None; n];
        perms[0] = Some(Perm::identity(degree));
        let mut queue = vec![0usize];
        while let Some(a) = queue.pop() {
            let pa = perms[a].clone().unwrap();
            for (g, pg) in gens {
                let b = group.mul(*g, a);
                let pb = pg.compose(&pa);
                match &perms[b] {
                    None => {
                        perms[b] = Some(pb);
                        queue.push(b);
                    }
                    Some(existing) => {
                        if *existing != pb {
                            return Err(ActionError::Incompatible(
                                "generator images are inconsistent".into(),
                            ));
                        }
                    }
                }
            }
        }
        if perms.iter().any(Option::is_none) {
            return Err(ActionError::Incompatible("generators do not generate the group".into()));
        }
        FiniteAction::new(group, perms.into_iter().map(Option::unwrap).collect())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, element: usize) -> &Perm {
        &self.perms[element]
    }

    pub fn apply(&self, element: usize, point: usize) -> usize {
        self.perms[element].apply(point)
    }

    /// Orbits as sorted point lists, ordered by their minimal point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.perms.iter().map(|p| p.apply(x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Sorted element set fixing `point`.
    pub fn point_stabilizer(&self, point: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.perms[g].apply(point) == point).collect()
    }

    /// Orbits together with their transitive-class indices in the group's
    /// subgroup catalogue.
    pub fn orbit_decompose(&self) -> Result<Vec<(Vec<usize>, usize)>, ActionError> {
        let cat = self.group.subgroup_classes()?;
        self.orbits()
            .into_iter()
            .map(|orbit| {
                let stab = self.point_stabilizer(orbit[0]);
                let class = cat.class_of(&stab).ok_or_else(|| {
                    ActionError::Incompatible("stabilizer missing from catalogue".into())
                })?;
                Ok((orbit, class))
            })
            .collect()
    }

    /// Orbit counts per transitive class, in catalogue order: the orbit-type
    /// vector of the action over the group's fixed basis.
    pub fn type_counts(&self) -> Result<Vec<i64>, ActionError> {
        let cat = self.group.subgroup_classes()?;
        let mut counts = vec![0i64; cat.classes.len()];
        for (_, class) in self.orbit_decompose()? {
            counts[class] += 1;
        }
        Ok(counts)
    }

    /// Restriction to an invariant subset (sorted points, re-indexed in
    /// order). Panics if the subset is not invariant.
    pub fn restrict(&self, points: &[usize]) -> FiniteAction {
        let mut pos = HashMap::with_capacity(points.len());
        for (i, &x) in points.iter().enumerate() {
            pos.insert(x, i);
        }
        let perms = self
            .perms
            .iter()
            .map(|p| {
                let map = points
                    .iter()
                    .map(|&x| *pos.get(&p.apply(x)).expect("subset not invariant"))
                    .collect();
                Perm::new(map).expect("restriction is a permutation")
            })
            .collect();
        FiniteAction { group: Arc::clone(&self.group), degree: points.len(), perms }
    }

    /// Disjoint union, with `other`'s points shifted past `self`'s.
    pub fn disjoint_union(&self, other: &FiniteAction) -> FiniteAction {
        assert!(Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group);
        let n = self.degree;
        let perms = self
            .perms
            .iter()
            .zip(&other.perms)
            .map(|(p, q)| {
                let mut map: Vec<usize> = p.images().to_vec();
                map.extend(q.images().iter().map(|&y| y + n));
                Perm::new(map).unwrap()
            })
            .collect();
        FiniteAction { group: Arc::clone(&self.group), degree: n + other.degree, perms }
    }

    /// The action of `hom.source` obtained by precomposition: `h` acts as
    /// `hom(h)` does. `self` must be an action of `hom.target`.
    pub fn pullback(&self, hom: &GroupHom) -> FiniteAction {
        assert!(*hom.target == *self.group, "pullback along a hom into a different group");
        let perms = hom.image.iter().map(|&g| self.perms[g].clone()).collect();
        FiniteAction { group: Arc::clone(&hom.source), degree: self.degree, perms }
    }

    /// Conjugates the whole action by a permutation of the underlying set.
    pub fn conjugate(&self, pi: &Perm) -> FiniteAction {
        assert_eq!(pi.degree(), self.degree);
        let pi_inv = pi.inverse();
        let perms = self.perms.iter().map(|p| pi.compose(p).compose(&pi_inv)).collect();
        FiniteAction { group: Arc::clone(&self.group), degree: self.degree, perms }
    }

    pub fn is_isomorphic_to(&self, other: &FiniteAction) -> Result<bool, ActionError> {
        if *self.group != *other.group || self.degree != other.degree {
            return Ok(false);
        }
        Ok(equivariant_bijection(self, other)?.is_some())
    }
}

/// Sum of normalized Hamming distances over all group elements:
/// `d_{X,G}(a, b) = Σ_g d_X(a(g), b(g))`.
pub fn action_distance(a: &FiniteAction, b: &FiniteAction) -> Rat {
    assert!(*a.group == *b.group && a.degree == b.degree);
    (0..a.group.order())
        .map(|g| normalized_hamming(a.perm(g), b.perm(g)))
        .fold(crate::ratio::rat_int(0), |acc, d| acc + d)
}

/// Largest invariant subset of `keep`: drops every orbit that meets the
/// complement. `|X - Y'| <= |G| * |X - Y|` since each dropped orbit has at
/// most `|G|` points.
pub fn invariant_shrink(action: &FiniteAction, keep: &[bool]) -> Vec<bool> {
    assert_eq!(keep.len(), action.degree());
    let mut out = keep.to_vec();
    for orbit in action.orbits() {
        if orbit.iter().any(|&x| !keep[x]) {
            for &x in &orbit {
                out[x] = false;
            }
        }
    }
    out
}

/// Variant of [`invariant_shrink`] for an arbitrary set of permutations:
/// orbits are the connected components under the listed maps and their
/// inverses.
pub fn invariant_shrink_perms(perms: &[&Perm], keep: &[bool]) -> Vec<bool> {
    let n = keep.len();
    let mut comp = vec![usize::MAX; n];
    let mut bad = Vec::new();
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = next;
        next += 1;
        let mut stack = vec![start];
        comp[start] = id;
        let mut hits_complement = false;
        while let Some(x) = stack.pop() {
            if !keep[x] {
                hits_complement = true;
            }
            for p in perms {
                for y in [p.apply(x), p.inverse().apply(x)] {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
        }
        if hits_complement {
            bad.push(id);
        }
    }
    (0..n).map(|x| keep[x] && !bad.contains(&comp[x])).collect()
}

/// Canonical equivariant bijection between two isomorphic actions of the
/// same group, or `None` when the orbit types differ.
///
/// Orbits of equal type are matched in order of minimal point; within a
/// matched pair the base point of the first orbit is sent to the least
/// point of the second orbit having exactly the same stabilizer, which pins
/// the bijection uniquely.
pub fn equivariant_bijection(
    a: &FiniteAction,
    b: &FiniteAction,
) -> Result<Option<Vec<usize>>, ActionError> {
    assert!(*a.group() == *b.group(), "actions of different groups");
    if a.degree() != b.degree() {
        return Ok(None);
    }
    let deco_a = a.orbit_decompose()?;
    let deco_b = b.orbit_decompose()?;
    let nclasses = a.group().subgroup_classes()?.classes.len();
    let mut by_class_a: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); nclasses];
    let mut by_class_b: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); nclasses];
    for (orbit, class) in &deco_a {
        by_class_a[*class].push(orbit);
    }
    for (orbit, class) in &deco_b {
        by_class_b[*class].push(orbit);
    }
    let mut map = vec![usize::MAX; a.degree()];
    for class in 0..nclasses {
        if by_class_a[class].len() != by_class_b[class].len() {
            return Ok(None);
        }
        for (oa, ob) in by_class_a[class].iter().zip(&by_class_b[class]) {
            let base = oa[0];
            let stab = a.point_stabilizer(base);
            let target = ob
                .iter()
                .copied()
                .find(|&y| b.point_stabilizer(y) == stab)
                .expect("conjugate stabilizer appears in matching orbit");
            for g in 0..a.group().order() {
                map[a.apply(g, base)] = b.apply(g, target);
            }
        }
    }
    debug_assert!(map.iter().all(|&y| y != usize::MAX));
    Ok(Some(map))
}

/// Extends an action of a subgroup to an action of the whole group with
/// prescribed orbit types.
///
/// Given an honest action `phi` of `H` on `X`, an injective `inc: H -> G`,
/// and a nonnegative orbit-type vector `lambda` over `G`'s basis whose
/// pullback along `inc` equals `phi`'s type vector (and whose total weight
/// is `|X|`), produces an action `rho` of `G` on the same set with
/// `rho ∘ inc = phi` pointwise and orbit types exactly `lambda`.
pub fn extend_action(
    phi: &FiniteAction,
    inc: &GroupHom,
    lambda: &[i64],
) -> Result<FiniteAction, ActionError> {
    assert!(*inc.source == **phi.group(), "inclusion source differs from phi's group");
    let g = &inc.target;
    let cat = g.subgroup_classes()?;
    if lambda.len() != cat.classes.len() {
        return Err(ActionError::Incompatible("type vector has wrong dimension".into()));
    }
    if lambda.iter().any(|&c| c < 0) {
        return Err(ActionError::Incompatible("type vector has a negative entry".into()));
    }
    let total: i64 = lambda
        .iter()
        .zip(&cat.classes)
        .map(|(&c, cl)| c * cl.degree as i64)
        .sum();
    if total != phi.degree() as i64 {
        return Err(ActionError::Incompatible(format!(
            "type vector has weight {total}, underlying set has {} points",
            phi.degree()
        )));
    }

    // canonical model: disjoint union of coset actions in basis order
    let mut model: Option<FiniteAction> = None;
    for (count, class) in lambda.iter().zip(&cat.classes) {
        for _ in 0..*count {
            let piece = FiniteAction::coset(g, &class.stabilizer);
            model = Some(match model {
                None => piece,
                Some(m) => m.disjoint_union(&piece),
            });
        }
    }
    let model = model.expect("weight |X| >= 1 forces at least one orbit");

    let model_h = model.pullback(inc);
    let bij = equivariant_bijection(&model_h, phi)?
        .ok_or_else(|| ActionError::Incompatible("pullback type vector differs from phi".into()))?;

    // transport the model action through the bijection
    let bij_perm = Perm::new(bij).expect("equivariant matching is a bijection");
    let rho = model.conjugate(&bij_perm);

    // re-check the defining property
    for h in 0..phi.group().order() {
        if rho.perm(inc.apply(h)) != phi.perm(h) {
            return Err(ActionError::Incompatible(
                "extension failed to restrict to phi".into(),
            ));
        }
    }
    Ok(rho)
}

/// Classes of `TransClass` metadata for an action's orbits, useful in tests.
pub fn orbit_classes(action: &FiniteAction) -> Result<Vec<TransClass>, ActionError> {
    let cat = action.group().subgroup_classes()?;
    Ok(action
        .orbit_decompose()?
        .into_iter()
        .map(|(_, c)| cat.classes[c].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::ratio::rat;

    fn z4_shift(points: usize) -> FiniteAction {
        // disjoint regular blocks of size 4
        assert_eq!(points % 4, 0);
        let g = FiniteGroup::cyclic(4);
        let map: Vec<usize> = (0..points).map(|x| x / 4 * 4 + (x + 1) % 4).collect();
        FiniteAction::from_generator_images(g, &[(1, Perm::new(map).unwrap())]).unwrap()
    }

    #[test]
    fn validates_and_rejects() {
        let z2 = FiniteGroup::cyclic(2);
        let good = FiniteAction::new(
            Arc::clone(&z2),
            vec![Perm::identity(3), Perm::new(vec![1, 0, 2]).unwrap()],
        );
        assert!(good.is_ok());
        let bad = FiniteAction::new(
            Arc::clone(&z2),
            vec![Perm::identity(3), Perm::new(vec![1, 2, 0]).unwrap()],
        );
        assert!(bad.is_err()); // a 3-cycle is not an involution
    }

    #[test]
    fn regular_z4_is_one_orbit() {
        let g = FiniteGroup::cyclic(4);
        let reg = FiniteAction::regular(&g);
        let deco = reg.orbit_decompose().unwrap();
        assert_eq!(deco.len(), 1);
        let cat = g.subgroup_classes().unwrap();
        assert_eq!(cat.classes[deco[0].1].degree, 4);
    }

    #[test]
    fn trivial_action_has_singleton_orbits() {
        let s3 = FiniteGroup::symmetric(3);
        let t = FiniteAction::trivial(Arc::clone(&s3), 5);
        let deco = t.orbit_decompose().unwrap();
        assert_eq!(deco.len(), 5);
        let cat = s3.subgroup_classes().unwrap();
        for (_, class) in deco {
            assert_eq!(cat.classes[class].degree, 1);
        }
    }

    #[test]
    fn z6_on_11_points_decomposes_as_6_3_2() {
        let g = FiniteGroup::cyclic(6);
        let cat = g.subgroup_classes().unwrap();
        let a = FiniteAction::coset(&g, &[0])
            .disjoint_union(&FiniteAction::coset(&g, &[0, 3]))
            .disjoint_union(&FiniteAction::coset(&g, &[0, 2, 4]));
        assert_eq!(a.degree(), 11);
        let degrees: Vec<usize> = a
            .orbit_decompose()
            .unwrap()
            .iter()
            .map(|(_, c)| cat.classes[*c].degree)
            .collect();
        assert_eq!(degrees, vec![6, 3, 2]);
        assert_eq!(a.type_counts().unwrap(), vec![1, 1, 1, 0]);
    }

    #[test]
    fn shrink_keeps_everything_when_nothing_is_dropped() {
        let a = z4_shift(8);
        let keep = vec![true; 8];
        assert_eq!(invariant_shrink(&a, &keep), keep);
    }

    #[test]
    fn shrink_drops_whole_orbits() {
        // Z/2 swapping 0<->1, fixing 2, 3
        let z2 = FiniteGroup::cyclic(2);
        let a = FiniteAction::new(
            Arc::clone(&z2),
            vec![Perm::identity(4), Perm::new(vec![1, 0, 2, 3]).unwrap()],
        )
        .unwrap();
        let keep = vec![false, true, true, true];
        let shrunk = invariant_shrink(&a, &keep);
        assert_eq!(shrunk, vec![false, false, true, true]);
        // |X - Y'| = 2 = |G| * |X - Y|
    }

    #[test]
    fn shrink_bound_holds_on_seeded_samples() {
        use rand::{Rng, SeedableRng};
        let g = FiniteGroup::cyclic(6);
        let a = FiniteAction::coset(&g, &[0])
            .disjoint_union(&FiniteAction::coset(&g, &[0, 3]))
            .disjoint_union(&FiniteAction::coset(&g, &[0, 2, 4]));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let keep: Vec<bool> = (0..11).map(|_| rng.gen_bool(0.8)).collect();
            let shrunk = invariant_shrink(&a, &keep);
            let dropped_before = keep.iter().filter(|k| !**k).count();
            let dropped_after = shrunk.iter().filter(|k| !**k).count();
            assert!(dropped_after <= 6 * dropped_before);
            // result is invariant and contained in keep
            for orbit in a.orbits() {
                let vals: Vec<bool> = orbit.iter().map(|&x| shrunk[x]).collect();
                assert!(vals.iter().all(|&v| v == vals[0]));
            }
            for x in 0..11 {
                assert!(!shrunk[x] || keep[x]);
            }
        }
    }

    #[test]
    fn extend_along_identity_returns_phi() {
        let g = FiniteGroup::cyclic(4);
        let phi = z4_shift(8);
        let lambda = phi.type_counts().unwrap();
        let rho = extend_action(&phi, &GroupHom::identity(&g), &lambda).unwrap();
        for e in 0..4 {
            assert_eq!(rho.perm(e), phi.perm(e));
        }
    }

    #[test]
    fn extend_from_trivial_group_realizes_any_type() {
        let z2 = FiniteGroup::cyclic(2);
        let triv = FiniteGroup::trivial();
        let phi = FiniteAction::trivial(triv, 2);
        let inc = GroupHom::from_trivial(&z2);
        // one free orbit of Z/2 on two points
        let rho = extend_action(&phi, &inc, &[1, 0]).unwrap();
        assert_eq!(rho.perm(1), &Perm::new(vec![1, 0]).unwrap());
    }

    #[test]
    fn extend_z2_to_z4_square_roots_phi() {
        // phi: Z/2 acting freely on 4 points by (01)(23)
        let z2 = FiniteGroup::cyclic(2);
        let z4 = FiniteGroup::cyclic(4);
        let phi = FiniteAction::new(
            Arc::clone(&z2),
            vec![Perm::identity(4), Perm::new(vec![1, 0, 3, 2]).unwrap()],
        )
        .unwrap();
        let inc = GroupHom::new(Arc::clone(&z2), Arc::clone(&z4), vec![0, 2]).unwrap();
        // lambda: one regular Z/4 orbit
        let rho = extend_action(&phi, &inc, &[1, 0, 0]).unwrap();
        // oracle: enumerate all of Sym(4), keep 4-cycles sigma with
        // sigma^2 = phi(1); the returned generator must be among them
        let valid: Vec<Perm> = crate::perm::all_perms(4)
            .into_iter()
            .filter(|s| s.order() == 4 && &s.compose(s) == phi.perm(1))
            .collect();
        assert!(!valid.is_empty());
        assert!(valid.contains(rho.perm(1)));
        // postconditions
        assert_eq!(rho.perm(2), phi.perm(1));
        assert_eq!(rho.type_counts().unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn extend_rejects_incompatible_types() {
        let z2 = FiniteGroup::cyclic(2);
        let z4 = FiniteGroup::cyclic(4);
        let phi = FiniteAction::trivial(Arc::clone(&z2), 4); // 4 fixed points
        let inc = GroupHom::new(Arc::clone(&z2), Arc::clone(&z4), vec![0, 2]).unwrap();
        // a regular Z/4 orbit restricts to a free Z/2 action: mismatch
        let err = extend_action(&phi, &inc, &[1, 0, 0]).unwrap_err();
        assert!(matches!(err, ActionError::Incompatible(_)));
    }

    #[test]
    fn isomorphism_iff_equal_type_vectors_small_degrees() {
        // brute-force conjugacy oracle on degree <= 6
        let g = FiniteGroup::cyclic(4);
        let candidates = vec![
            FiniteAction::coset(&g, &[0]).disjoint_union(&FiniteAction::coset(&g, &[0, 2])),
            FiniteAction::coset(&g, &[0, 2])
                .disjoint_union(&FiniteAction::coset(&g, &[0, 2]))
                .disjoint_union(&FiniteAction::coset(&g, &[0, 2])),
            FiniteAction::trivial(Arc::clone(&g), 6),
        ];
        for a in &candidates {
            for b in &candidates {
                let by_bijection = a.is_isomorphic_to(b).unwrap();
                let by_types = a.type_counts().unwrap() == b.type_counts().unwrap();
                let by_brute = crate::perm::all_perms(6)
                    .iter()
                    .any(|pi| (0..4).all(|e| &pi.compose(a.perm(e)).compose(&pi.inverse()) == b.perm(e)));
                assert_eq!(by_bijection, by_types);
                assert_eq!(by_bijection, by_brute);
            }
        }
    }

    #[test]
    fn sharp_is_additive_over_disjoint_union() {
        let g = FiniteGroup::cyclic(6);
        let a = FiniteAction::coset(&g, &[0, 3]);
        let b = FiniteAction::coset(&g, &[0, 2, 4]);
        let ta = a.type_counts().unwrap();
        let tb = b.type_counts().unwrap();
        let tu = a.disjoint_union(&b).type_counts().unwrap();
        let sum: Vec<i64> = ta.iter().zip(&tb).map(|(x, y)| x + y).collect();
        assert_eq!(tu, sum);
    }

    #[test]
    fn action_distance_counts_per_element() {
        let z2 = FiniteGroup::cyclic(2);
        let a = FiniteAction::new(
            Arc::clone(&z2),
            vec![Perm::identity(4), Perm::new(vec![1, 0, 3, 2]).unwrap()],
        )
        .unwrap();
        let b = FiniteAction::new(
            Arc::clone(&z2),
            vec![Perm::identity(4), Perm::new(vec![1, 0, 2, 3]).unwrap()],
        )
        .unwrap();
        assert_eq!(action_distance(&a, &b), rat(1, 2));
    }
}

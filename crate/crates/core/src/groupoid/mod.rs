//! Finite groupoids: translation groupoids of group actions, orbit spaces,
//! configuration groupoids, and checks for homomorphisms, coverings and
//! equivalences. Smooth conditions are replaced by their set-level shadows
//! (surjective submersion by surjection, fibered product of manifolds by a
//! bijection onto the set-theoretic fibered product).

mod config;
mod group;
mod hom;
mod morita;

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use config::{configuration_groupoid, configuration_hom, forget_map, ConfigurationGroupoid, ForgetMap};
pub use group::{ActionSpec, FiniteGroup, GroupAction, GroupSpec};
pub use hom::{
    identity_hom, is_covering_hom, is_equivalence, subgroup_inclusion, verify_hom, CoveringHomReport,
    EquivalenceReport, GroupoidHom,
};
pub use morita::{morita_candidate, morita_triple, normal_subgroups, MoritaModel, MoritaTriple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("configuration arity must be at least {min}, got {n}")]
    Arity { n: usize, min: usize },
}

/// One named condition with its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// First counterexample, if any.
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        Check {
            name,
            pass: failure.is_none(),
            detail: failure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl AxiomReport {
    fn new(checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        AxiomReport { checks, pass }
    }
}

/// A groupoid with finitely many objects and morphisms, stored as dense
/// source/target/identity/inverse maps and a table of composable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub object_labels: Vec<String>,
    pub morphism_labels: Vec<String>,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    /// `(g, f) ↦ g ∘ f` for `s(g) = t(f)`.
    composition: HashMap<(usize, usize), usize>,
    /// Morphisms leaving each object.
    outgoing: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from its structure maps; only index ranges are
    /// checked here, the axioms by [`FiniteGroupoid::check_axioms`].
    pub fn from_parts(
        object_labels: Vec<String>,
        morphism_labels: Vec<String>,
        source: Vec<usize>,
        target: Vec<usize>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
        composition: HashMap<(usize, usize), usize>,
    ) -> Result<Self, GroupoidError> {
        let (no, nm) = (object_labels.len(), morphism_labels.len());
        let bad = |m: &str| Err(GroupoidError::InvalidGroupoid(m.to_string()));
        if source.len() != nm || target.len() != nm || inverse.len() != nm || identity.len() != no {
            return bad("structure maps have the wrong length");
        }
        if source.iter().chain(&target).any(|&x| x >= no)
            || identity.iter().chain(&inverse).any(|&f| f >= nm)
            || composition.iter().any(|(&(g, f), &h)| g >= nm || f >= nm || h >= nm)
        {
            return bad("index out of range");
        }
        let mut outgoing = vec![Vec::new(); no];
        for (f, &s) in source.iter().enumerate() {
            outgoing[s].push(f);
        }
        Ok(FiniteGroupoid {
            object_labels,
            morphism_labels,
            source,
            target,
            identity,
            inverse,
            composition,
            outgoing,
        })
    }

    pub fn object_count(&self) -> usize {
        self.object_labels.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphism_labels.len()
    }

    pub fn source(&self, f: usize) -> usize {
        self.source[f]
    }

    pub fn target(&self, f: usize) -> usize {
        self.target[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    /// `g ∘ f`, defined when `s(g) = t(f)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.composition.get(&(g, f)).copied()
    }

    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.outgoing[x]
    }

    /// Morphisms from `x` to `y`.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.outgoing[x].iter().copied().filter(|&f| self.target[f] == y).collect()
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let nm = self.morphism_count();
        let first = |it: &mut dyn Iterator<Item = String>| it.next();

        let identities = first(&mut (0..self.object_count()).filter_map(|x| {
            let e = self.identity[x];
            (self.source[e] != x || self.target[e] != x).then(|| format!("identity of object {x}"))
        }));

        let mut closure = None;
        let mut endpoints = None;
        for f in 0..nm {
            for &g in &self.outgoing[self.target[f]] {
                match self.compose(g, f) {
                    None => {
                        closure.get_or_insert(format!("{g} ∘ {f} missing"));
                    }
                    Some(h) if self.source[h] != self.source[f] || self.target[h] != self.target[g] => {
                        endpoints.get_or_insert(format!("{g} ∘ {f} = {h} has wrong endpoints"));
                    }
                    Some(_) => {}
                }
            }
        }
        let spurious = self
            .composition
            .keys()
            .find(|(g, f)| self.source[*g] != self.target[*f])
            .map(|(g, f)| format!("{g} ∘ {f} defined for a non-composable pair"));
        let units = first(&mut (0..nm).filter_map(|f| {
            let left = self.compose(self.identity[self.target[f]], f);
            let right = self.compose(f, self.identity[self.source[f]]);
            (left != Some(f) || right != Some(f)).then(|| format!("unit law fails at {f}"))
        }));
        let inverses = first(&mut (0..nm).filter_map(|f| {
            let i = self.inverse[f];
            let ok = self.source[i] == self.target[f]
                && self.compose(i, f) == Some(self.identity[self.source[f]])
                && self.compose(f, i) == Some(self.identity[self.target[f]]);
            (!ok).then(|| format!("inverse law fails at {f}"))
        }));
        let mut assoc = None;
        if closure.is_none() {
            'outer: for f in 0..nm {
                for &g in &self.outgoing[self.target[f]] {
                    let gf = self.compose(g, f).expect("closed");
                    for &h in &self.outgoing[self.target[g]] {
                        let hg = self.compose(h, g).expect("closed");
                        if self.compose(h, gf) != self.compose(hg, f) {
                            assoc = Some(format!("({h} ∘ {g}) ∘ {f} != {h} ∘ ({g} ∘ {f})"));
                            break 'outer;
                        }
                    }
                }
            }
        } else {
            assoc = Some("skipped: composition not closed".into());
        }
        AxiomReport::new(vec![
            Check::new("identities have matching endpoints", identities),
            Check::new("composition defined on composable pairs", closure.or(spurious)),
            Check::new("s(g∘f) = s(f), t(g∘f) = t(g)", endpoints),
            Check::new("identity laws", units),
            Check::new("inverse laws", inverses),
            Check::new("associativity", assoc),
        ])
    }
}

/// Orbits of a groupoid: objects joined by some morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSpace {
    /// Blocks sorted by smallest element, each sorted.
    pub blocks: Vec<Vec<usize>>,
    /// Object ↦ block index.
    pub quotient: Vec<usize>,
}

impl OrbitSpace {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

pub fn orbit_space(g: &FiniteGroupoid) -> OrbitSpace {
    let n = g.object_count();
    let mut uf = UnionFind::<usize>::new(n);
    for f in 0..g.morphism_count() {
        uf.union(g.source(f), g.target(f));
    }
    let mut block_of_root: HashMap<usize, usize> = HashMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut quotient = vec![0; n];
    for (x, q) in quotient.iter_mut().enumerate() {
        let root = uf.find(x);
        let b = *block_of_root.entry(root).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(x);
        *q = b;
    }
    OrbitSpace { blocks, quotient }
}

/// The translation groupoid: objects the points, morphisms `(x, h)` from `x`
/// to `h·x`, with `(h·x, h') ∘ (x, h) = (x, h'h)`.
pub fn translation_groupoid(action: &GroupAction) -> FiniteGroupoid {
    let (n, k) = (action.size, action.group.order());
    let grp = &action.group;
    let idx = |x: usize, h: usize| x * k + h;
    let mut source = Vec::with_capacity(n * k);
    let mut target = Vec::with_capacity(n * k);
    let mut inverse = Vec::with_capacity(n * k);
    let mut labels = Vec::with_capacity(n * k);
    let mut composition = HashMap::with_capacity(n * k * k);
    for x in 0..n {
        for h in 0..k {
            let hx = action.act(h, x);
            source.push(x);
            target.push(hx);
            inverse.push(idx(hx, grp.inv(h)));
            labels.push(format!("({x},{h})"));
            for h2 in 0..k {
                composition.insert((idx(hx, h2), idx(x, h)), idx(x, grp.mul(h2, h)));
            }
        }
    }
    FiniteGroupoid::from_parts(
        (0..n).map(|x| x.to_string()).collect(),
        labels,
        source,
        target,
        (0..n).map(|x| idx(x, 0)).collect(),
        inverse,
        composition,
    )
    .expect("translation groupoid is well formed")
}

/// The groupoid with only identity morphisms.
pub fn unit_groupoid(n: usize) -> FiniteGroupoid {
    translation_groupoid(&GroupAction::trivial(FiniteGroup::cyclic(1), n))
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    s: usize,
    t: usize,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct GroupoidRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<u32>,
    objects: Vec<String>,
    morphisms: Vec<MorphismRepr>,
    identities: Vec<usize>,
    inverses: Vec<usize>,
    /// `[g, f, g∘f]`.
    composition: Vec<[usize; 3]>,
}

impl Serialize for FiniteGroupoid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut composition: Vec<[usize; 3]> =
            self.composition.iter().map(|(&(g, f), &h)| [g, f, h]).collect();
        composition.sort_unstable();
        GroupoidRepr {
            schema: None,
            objects: self.object_labels.clone(),
            morphisms: (0..self.morphism_count())
                .map(|f| MorphismRepr {
                    s: self.source[f],
                    t: self.target[f],
                    label: Some(self.morphism_labels[f].clone()),
                })
                .collect(),
            identities: self.identity.clone(),
            inverses: self.inverse.clone(),
            composition,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroupoid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = GroupoidRepr::deserialize(d)?;
        let mut composition = HashMap::new();
        for [g, f, h] in r.composition {
            if composition.insert((g, f), h).is_some() {
                return Err(serde::de::Error::custom(format!("{g} ∘ {f} listed twice")));
            }
        }
        FiniteGroupoid::from_parts(
            r.objects,
            r.morphisms
                .iter()
                .enumerate()
                .map(|(i, m)| m.label.clone().unwrap_or_else(|| i.to_string()))
                .collect(),
            r.morphisms.iter().map(|m| m.s).collect(),
            r.morphisms.iter().map(|m| m.t).collect(),
            r.identities,
            r.inverses,
            composition,
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// `ℤ/6` with `C2` acting by negation.
    pub(crate) fn negation() -> GroupAction {
        let table = vec![(0..6).collect(), (0..6).map(|x| (6 - x) % 6).collect()];
        GroupAction::new(FiniteGroup::cyclic(2), table).unwrap()
    }

    pub(crate) fn swap() -> GroupAction {
        GroupAction::regular(FiniteGroup::cyclic(2))
    }

    #[test]
    fn translation_examples() {
        let point = translation_groupoid(&GroupAction::trivial(FiniteGroup::cyclic(2), 1));
        assert_eq!((point.object_count(), point.morphism_count()), (1, 2));
        let sw = translation_groupoid(&swap());
        assert_eq!((sw.object_count(), sw.morphism_count()), (2, 4));
        assert_eq!(orbit_space(&sw).len(), 1);
        let c5 = translation_groupoid(&GroupAction::regular(FiniteGroup::cyclic(5)));
        assert_eq!((c5.object_count(), c5.morphism_count()), (5, 25));
        assert_eq!(orbit_space(&c5).len(), 1);
        assert_eq!(c5.hom(0, 0).len(), 1);
        for g in [point, sw, c5] {
            assert!(g.check_axioms().pass);
        }
    }

    #[test]
    fn inverse_is_not_the_literal_formula() {
        // (x, h)⁻¹ = (h·x, h⁻¹); (x, h⁻¹) would start at the wrong object
        let g = translation_groupoid(&swap());
        let f = 1; // (0, swap): 0 → 1
        assert_eq!(g.source(g.inverse(f)), 1);
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit_space(&unit_groupoid(3)).len(), 3);
        let neg = orbit_space(&translation_groupoid(&negation()));
        assert_eq!(neg.blocks, vec![vec![0], vec![1, 5], vec![2, 4], vec![3]]);
    }

    #[test]
    fn broken_groupoids_fail() {
        let g = translation_groupoid(&swap());
        let mut bad = g.clone();
        bad.inverse.swap(0, 1);
        assert!(!bad.check_axioms().pass);
        let mut bad = g.clone();
        let key = *bad.composition.keys().next().unwrap();
        bad.composition.remove(&key);
        assert!(!bad.check_axioms().pass);
    }

    #[test]
    fn json_round_trip() {
        let g = translation_groupoid(&negation());
        let s = serde_json::to_string(&g).unwrap();
        let back: FiniteGroupoid = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}

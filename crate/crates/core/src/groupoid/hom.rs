//! Homomorphisms between finite groupoids and the covering and equivalence
//! predicates.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{AxiomReport, Check, FiniteGroupoid, GroupAction, GroupoidError, translation_groupoid};

/// Object map `f0` and morphism map `f1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidHom {
    pub f0: Vec<usize>,
    pub f1: Vec<usize>,
}

pub fn identity_hom(g: &FiniteGroupoid) -> GroupoidHom {
    GroupoidHom {
        f0: (0..g.object_count()).collect(),
        f1: (0..g.morphism_count()).collect(),
    }
}

/// `G(S, H') → G(S, H)` for a subgroup `H' ≤ H`: the identity on objects and
/// `(x, h') ↦ (x, h')` on morphisms. Returns source, target and the map.
pub fn subgroup_inclusion(
    action: &GroupAction,
    sub: &[usize],
) -> Result<(FiniteGroupoid, FiniteGroupoid, GroupoidHom), GroupoidError> {
    let (h_sub, inclusion) = action.group.subgroup(sub)?;
    let restricted = action.restrict(h_sub, &inclusion)?;
    let source = translation_groupoid(&restricted);
    let target = translation_groupoid(action);
    let (k, k_sub) = (action.group.order(), inclusion.len());
    let f1 = (0..action.size)
        .flat_map(|x| inclusion.iter().map(move |&h| x * k + h))
        .collect::<Vec<_>>();
    debug_assert_eq!(f1.len(), action.size * k_sub);
    let f = GroupoidHom {
        f0: (0..action.size).collect(),
        f1,
    };
    Ok((source, target, f))
}

fn shape(src: &FiniteGroupoid, tgt: &FiniteGroupoid, f: &GroupoidHom) -> Option<String> {
    if f.f0.len() != src.object_count() || f.f1.len() != src.morphism_count() {
        return Some("maps have the wrong length".into());
    }
    if f.f0.iter().any(|&y| y >= tgt.object_count()) || f.f1.iter().any(|&g| g >= tgt.morphism_count()) {
        return Some("image index out of range".into());
    }
    None
}

/// Functoriality checked on every object, morphism and composable pair.
pub fn verify_hom(src: &FiniteGroupoid, tgt: &FiniteGroupoid, f: &GroupoidHom) -> AxiomReport {
    if let Some(e) = shape(src, tgt, f) {
        return AxiomReport::new(vec![Check::new("well-formed maps", Some(e))]);
    }
    let st = (0..src.morphism_count()).find_map(|h| {
        let g = f.f1[h];
        (tgt.source(g) != f.f0[src.source(h)] || tgt.target(g) != f.f0[src.target(h)])
            .then(|| format!("morphism {h}"))
    });
    let ids = (0..src.object_count()).find_map(|y| {
        (f.f1[src.identity(y)] != tgt.identity(f.f0[y])).then(|| format!("object {y}"))
    });
    let inv = (0..src.morphism_count())
        .find_map(|h| (f.f1[src.inverse(h)] != tgt.inverse(f.f1[h])).then(|| format!("morphism {h}")));
    let mut comp = None;
    'outer: for a in 0..src.morphism_count() {
        for &b in src.outgoing(src.target(a)) {
            let ba = src.compose(b, a).expect("source groupoid is closed");
            if tgt.compose(f.f1[b], f.f1[a]) != Some(f.f1[ba]) {
                comp = Some(format!("f({b} ∘ {a}) != f({b}) ∘ f({a})"));
                break 'outer;
            }
        }
    }
    AxiomReport::new(vec![
        Check::new("well-formed maps", None),
        Check::new("commutes with source and target", st),
        Check::new("preserves identities", ids),
        Check::new("preserves inverses", inv),
        Check::new("preserves composition", comp),
    ])
}

/// The two equivalence conditions, with set-level surjectivity in place of
/// surjective submersion and a bijection in place of a fibered product of
/// manifolds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Condition 1: `(y, g) ↦ t(g)` on `H0 ×_{G0} G1` is onto `G0`.
/// Condition 2: `h ↦ (s h, t h, f1 h)` is a bijection onto
/// `{(y, y', g) : g : f0 y → f0 y'}`.
pub fn is_equivalence(src: &FiniteGroupoid, tgt: &FiniteGroupoid, f: &GroupoidHom) -> EquivalenceReport {
    let hom = verify_hom(src, tgt, f);
    if !hom.pass {
        let failed = hom.checks.into_iter().find(|c| !c.pass).expect("some check failed");
        return EquivalenceReport {
            checks: vec![Check::new("homomorphism", failed.detail.map(|d| format!("{}: {d}", failed.name)))],
            pass: false,
        };
    }
    let mut reached = vec![false; tgt.object_count()];
    for &x in &f.f0 {
        for &g in tgt.outgoing(x) {
            reached[tgt.target(g)] = true;
        }
    }
    let cond1 = reached
        .iter()
        .position(|r| !r)
        .map(|z| format!("object {z} is not isomorphic to any image object"));

    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut cond2 = None;
    for h in 0..src.morphism_count() {
        let key = (src.source(h), src.target(h), f.f1[h]);
        if let Some(prev) = seen.insert(key, h) {
            cond2 = Some(format!("morphisms {prev} and {h} have the same image triple"));
            break;
        }
    }
    if cond2.is_none() {
        'outer: for y in 0..src.object_count() {
            for y2 in 0..src.object_count() {
                for g in tgt.hom(f.f0[y], f.f0[y2]) {
                    if !seen.contains_key(&(y, y2, g)) {
                        cond2 = Some(format!("morphism {g} from f({y}) to f({y2}) has no preimage"));
                        break 'outer;
                    }
                }
            }
        }
    }
    let checks = vec![
        Check::new("homomorphism", None),
        Check::new("condition 1: t on H0 ×_G0 G1 is surjective", cond1),
        Check::new("condition 2: H1 → (H0 × H0) ×_(G0 × G0) G1 is bijective", cond2),
    ];
    let pass = checks.iter().all(|c| c.pass);
    EquivalenceReport { checks, pass }
}

/// Covering-homomorphism verdict.
///
/// `f : H → G` is accepted when it is a faithful homomorphism, `f0` is onto,
/// the `f0`-fibers have constant size along every orbit of `G`, and `H` is
/// equivalent over `G` to the translation groupoid `G ⋉ X` of the `G`-set
/// `X = {(y, g) : s g = f0 y} / ~`, `(y, g) ~ (y', g ∘ f1(k)⁻¹)` for
/// `k : y → y'`, whose morphism space is literally `G1 ×_{G0} X`.
/// `literal_fibered_product` records whether already `H1 ≅ G1 ×_{G0} H0`
/// through `h ↦ (f1 h, s h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringHomReport {
    pub checks: Vec<Check>,
    pub literal_fibered_product: bool,
    pub pass: bool,
}

pub fn is_covering_hom(src: &FiniteGroupoid, tgt: &FiniteGroupoid, f: &GroupoidHom) -> CoveringHomReport {
    let hom = verify_hom(src, tgt, f);
    if !hom.pass {
        let failed = hom.checks.into_iter().find(|c| !c.pass).expect("some check failed");
        return CoveringHomReport {
            checks: vec![Check::new("homomorphism", failed.detail.map(|d| format!("{}: {d}", failed.name)))],
            literal_fibered_product: false,
            pass: false,
        };
    }
    let mut fiber = vec![0usize; tgt.object_count()];
    for &x in &f.f0 {
        fiber[x] += 1;
    }
    let onto = fiber.iter().position(|&c| c == 0).map(|x| format!("object {x} has an empty fiber"));
    let constant = (0..tgt.morphism_count()).find_map(|g| {
        let (a, b) = (tgt.source(g), tgt.target(g));
        (fiber[a] != fiber[b]).then(|| format!("fibers over {a} and {b} have sizes {} and {}", fiber[a], fiber[b]))
    });
    let mut triples = HashMap::new();
    let faithful = (0..src.morphism_count()).find_map(|h| {
        triples
            .insert((f.f1[h], src.source(h), src.target(h)), h)
            .map(|prev| format!("morphisms {prev} and {h} have the same image and endpoints"))
    });
    let factor = if faithful.is_none() {
        factorization(src, tgt, f)
    } else {
        Some("skipped: not faithful".into())
    };

    let mut pairs = HashSet::new();
    let injective = (0..src.morphism_count()).all(|h| pairs.insert((f.f1[h], src.source(h))));
    let fibered_size: usize = f.f0.iter().map(|&x| tgt.outgoing(x).len()).sum();
    let literal_fibered_product = injective && fibered_size == src.morphism_count();

    let checks = vec![
        Check::new("homomorphism", None),
        Check::new("f0 is surjective", onto),
        Check::new("f0-fibers are constant along orbits", constant),
        Check::new("faithful", faithful),
        Check::new("equivalent over the target to G ⋉ (G1 ×_G0 H0 / H)", factor),
    ];
    let pass = checks.iter().all(|c| c.pass);
    CoveringHomReport {
        checks,
        literal_fibered_product,
        pass,
    }
}

/// Builds `G ⋉ X` and checks that `H → G ⋉ X`, `y ↦ [y, 1]`,
/// `k ↦ ([s k, 1], f1 k)` is an equivalence and that its composite with the
/// projection `G ⋉ X → G` is `f`.
fn factorization(src: &FiniteGroupoid, tgt: &FiniteGroupoid, f: &GroupoidHom) -> Option<String> {
    // P = {(y, g) : s g = f0 y}
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for y in 0..src.object_count() {
        for &g in tgt.outgoing(f.f0[y]) {
            index.insert((y, g), pairs.len());
            pairs.push((y, g));
        }
    }
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(pairs.len());
    for (i, &(_, g)) in pairs.iter().enumerate() {
        let y = pairs[i].0;
        for &k in src.outgoing(y) {
            let moved = tgt.compose(g, tgt.inverse(f.f1[k])).expect("composable");
            uf.union(i, index[&(src.target(k), moved)]);
        }
    }
    let labels = uf.into_labeling();
    let mut class: HashMap<usize, usize> = HashMap::new();
    let mut anchor: Vec<usize> = Vec::new();
    let mut class_of = vec![0; pairs.len()];
    for (i, &(_, g)) in pairs.iter().enumerate() {
        let next = class.len();
        let c = *class.entry(labels[i]).or_insert(next);
        if c == anchor.len() {
            anchor.push(tgt.target(g));
        }
        class_of[i] = c;
    }
    // X with anchor t[y, g] = t g and action g'·[y, g] = [y, g' ∘ g]
    let xsize = anchor.len();
    let mut act: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, &(y, g)) in pairs.iter().enumerate() {
        for &g2 in tgt.outgoing(tgt.target(g)) {
            let moved = class_of[index[&(y, tgt.compose(g2, g).expect("composable"))]];
            if let Some(prev) = act.insert((class_of[i], g2), moved) {
                if prev != moved {
                    return Some("the G-action on X is not well defined".into());
                }
            }
        }
    }
    // morphisms of G ⋉ X: (x, g') with s g' = anchor x
    let mut morphisms = Vec::new();
    let mut m_index = HashMap::new();
    for x in 0..xsize {
        for &g in tgt.outgoing(anchor[x]) {
            m_index.insert((x, g), morphisms.len());
            morphisms.push((x, g));
        }
    }
    let mut composition = HashMap::new();
    let mut source = Vec::with_capacity(morphisms.len());
    let mut target = Vec::with_capacity(morphisms.len());
    let mut inverse = Vec::with_capacity(morphisms.len());
    for &(x, g) in &morphisms {
        let x2 = act[&(x, g)];
        source.push(x);
        target.push(x2);
        inverse.push(m_index[&(x2, tgt.inverse(g))]);
        for &g2 in tgt.outgoing(tgt.target(g)) {
            let gg = tgt.compose(g2, g).expect("composable");
            composition.insert((m_index[&(x2, g2)], m_index[&(x, g)]), m_index[&(x, gg)]);
        }
    }
    let identity = (0..xsize).map(|x| m_index[&(x, tgt.identity(anchor[x]))]).collect();
    let semidirect = FiniteGroupoid::from_parts(
        (0..xsize).map(|x| x.to_string()).collect(),
        morphisms.iter().map(|(x, g)| format!("({x},{g})")).collect(),
        source,
        target,
        identity,
        inverse,
        composition,
    )
    .expect("indices in range");
    if let Some(c) = semidirect.check_axioms().checks.into_iter().find(|c| !c.pass) {
        return Some(format!("G ⋉ X fails {}", c.name));
    }
    let point = |y: usize| class_of[index[&(y, tgt.identity(f.f0[y]))]];
    let lift = GroupoidHom {
        f0: (0..src.object_count()).map(point).collect(),
        f1: (0..src.morphism_count())
            .map(|k| m_index[&(point(src.source(k)), f.f1[k])])
            .collect(),
    };
    let report = is_equivalence(src, &semidirect, &lift);
    if let Some(c) = report.checks.into_iter().find(|c| !c.pass) {
        return Some(format!("H → G ⋉ X: {}", c.detail.unwrap_or(c.name.into())));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::tests::{negation, swap};
    use crate::groupoid::{forget_map, unit_groupoid, FiniteGroup};

    #[test]
    fn identity_is_everything() {
        for g in [translation_groupoid(&negation()), translation_groupoid(&swap()), unit_groupoid(3)] {
            let id = identity_hom(&g);
            assert!(verify_hom(&g, &g, &id).pass);
            assert!(is_equivalence(&g, &g, &id).pass);
            let c = is_covering_hom(&g, &g, &id);
            assert!(c.pass && c.literal_fibered_product);
        }
    }

    #[test]
    fn subgroup_quotients_are_coverings() {
        let action = GroupAction::regular(FiniteGroup::dihedral(3));
        for sub in action.group.subgroups() {
            let (s, t, f) = subgroup_inclusion(&action, &sub).unwrap();
            let r = is_covering_hom(&s, &t, &f);
            assert!(r.pass, "{sub:?}: {r:?}");
            assert_eq!(r.literal_fibered_product, sub.len() == 6);
        }
    }

    #[test]
    fn forget_on_negation_is_not_a_covering() {
        let fm = forget_map(&translation_groupoid(&negation()), 2).unwrap();
        let r = is_covering_hom(&fm.source.groupoid, &fm.target.groupoid, &fm.hom);
        assert!(!r.pass);
        assert!(!r.literal_fibered_product);
    }

    /// Full subgroupoid on the first object of each orbit.
    fn skeleton(g: &FiniteGroupoid) -> (FiniteGroupoid, GroupoidHom) {
        let orbits = crate::groupoid::orbit_space(g);
        let reps: Vec<usize> = orbits.blocks.iter().map(|b| b[0]).collect();
        full_subgroupoid(g, &reps)
    }

    fn full_subgroupoid(g: &FiniteGroupoid, objs: &[usize]) -> (FiniteGroupoid, GroupoidHom) {
        let mut f1 = Vec::new();
        for &x in objs {
            for &y in objs {
                f1.extend(g.hom(x, y));
            }
        }
        restrict_to(g, objs, &f1)
    }

    fn restrict_to(g: &FiniteGroupoid, objs: &[usize], f1: &[usize]) -> (FiniteGroupoid, GroupoidHom) {
        let opos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mpos: HashMap<usize, usize> = f1.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut composition = HashMap::new();
        for &a in f1 {
            for &b in f1 {
                if let Some(c) = g.compose(b, a) {
                    composition.insert((mpos[&b], mpos[&a]), mpos[&c]);
                }
            }
        }
        let sub = FiniteGroupoid::from_parts(
            objs.iter().map(|x| x.to_string()).collect(),
            f1.iter().map(|m| m.to_string()).collect(),
            f1.iter().map(|&m| opos[&g.source(m)]).collect(),
            f1.iter().map(|&m| opos[&g.target(m)]).collect(),
            objs.iter().map(|&x| mpos[&g.identity(x)]).collect(),
            f1.iter().map(|&m| mpos[&g.inverse(m)]).collect(),
            composition,
        )
        .unwrap();
        (sub, GroupoidHom { f0: objs.to_vec(), f1: f1.to_vec() })
    }

    #[test]
    fn skeleton_inclusion_is_an_equivalence() {
        for g in [translation_groupoid(&negation()), translation_groupoid(&swap())] {
            let (s, f) = skeleton(&g);
            assert!(s.check_axioms().pass);
            assert!(is_equivalence(&s, &g, &f).pass);
            // a skeleton misses objects, so it is no covering
            assert!(!is_covering_hom(&s, &g, &f).pass);
        }
    }

    #[test]
    fn non_full_inclusion_fails_condition_two() {
        // keep only identities of the negation groupoid
        let g = translation_groupoid(&negation());
        let objs: Vec<usize> = (0..6).collect();
        let ids: Vec<usize> = objs.iter().map(|&x| g.identity(x)).collect();
        let (s, f) = restrict_to(&g, &objs, &ids);
        let r = is_equivalence(&s, &g, &f);
        assert!(r.checks[1].pass);
        assert!(!r.checks[2].pass);
    }

    #[test]
    fn broken_hom_is_rejected() {
        let g = translation_groupoid(&swap());
        let mut f = identity_hom(&g);
        f.f1.swap(0, 1);
        assert!(!verify_hom(&g, &g, &f).pass);
        assert!(!is_equivalence(&g, &g, &f).pass);
        assert!(!is_covering_hom(&g, &g, &f).pass);
    }
}

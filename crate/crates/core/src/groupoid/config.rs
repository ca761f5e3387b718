//! Configuration groupoids: tuples of objects in pairwise distinct orbits.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use super::{orbit_space, FiniteGroupoid, GroupoidError, GroupoidHom};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationGroupoid {
    pub n: usize,
    pub groupoid: FiniteGroupoid,
    pub object_tuples: Vec<Vec<usize>>,
    pub morphism_tuples: Vec<Vec<usize>>,
    /// Set when the base has fewer than `n` orbits and the result is empty.
    pub warning: Option<String>,
}

pub fn configuration_groupoid(g: &FiniteGroupoid, n: usize) -> Result<ConfigurationGroupoid, GroupoidError> {
    if n == 0 {
        return Err(GroupoidError::Arity { n, min: 1 });
    }
    let orbits = orbit_space(g);
    let warning = (orbits.len() < n).then(|| format!("{} orbits, fewer than n = {n}; the groupoid is empty", orbits.len()));
    let object_tuples: Vec<Vec<usize>> = if warning.is_some() {
        Vec::new()
    } else {
        (0..n)
            .map(|_| 0..g.object_count())
            .multi_cartesian_product()
            .filter(|t| t.iter().map(|&x| orbits.quotient[x]).all_unique())
            .collect()
    };
    let obj_index: HashMap<&[usize], usize> =
        object_tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();

    let mut morphism_tuples: Vec<Vec<usize>> = Vec::new();
    let mut outgoing: Vec<Vec<usize>> = Vec::with_capacity(object_tuples.len());
    for t in &object_tuples {
        let start = morphism_tuples.len();
        morphism_tuples.extend(t.iter().map(|&x| g.outgoing(x).iter().copied()).multi_cartesian_product());
        outgoing.push((start..morphism_tuples.len()).collect());
    }
    let mor_index: HashMap<&[usize], usize> =
        morphism_tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let lookup = |t: Vec<usize>| mor_index[t.as_slice()];

    let ends = |t: &[usize], end: &dyn Fn(usize) -> usize| obj_index[end_tuple(t, end).as_slice()];
    let source: Vec<usize> = morphism_tuples.iter().map(|t| ends(t, &|f| g.source(f))).collect();
    let target: Vec<usize> = morphism_tuples.iter().map(|t| ends(t, &|f| g.target(f))).collect();
    let identity = object_tuples
        .iter()
        .map(|t| lookup(t.iter().map(|&x| g.identity(x)).collect()))
        .collect();
    let inverse = morphism_tuples
        .iter()
        .map(|t| lookup(t.iter().map(|&f| g.inverse(f)).collect()))
        .collect();
    let mut composition = HashMap::new();
    for (a, ta) in morphism_tuples.iter().enumerate() {
        for &b in &outgoing[target[a]] {
            let tb = &morphism_tuples[b];
            let c = ta.iter().zip(tb).map(|(&f, &h)| g.compose(h, f).expect("composable")).collect();
            composition.insert((b, a), lookup(c));
        }
    }
    let label = |t: &[usize], names: &[String]| format!("({})", t.iter().map(|&i| names[i].as_str()).join(","));
    let groupoid = FiniteGroupoid::from_parts(
        object_tuples.iter().map(|t| label(t, &g.object_labels)).collect(),
        morphism_tuples.iter().map(|t| label(t, &g.morphism_labels)).collect(),
        source,
        target,
        identity,
        inverse,
        composition,
    )?;
    Ok(ConfigurationGroupoid {
        n,
        groupoid,
        object_tuples,
        morphism_tuples,
        warning,
    })
}

fn end_tuple(t: &[usize], end: &dyn Fn(usize) -> usize) -> Vec<usize> {
    t.iter().map(|&f| end(f)).collect()
}

impl ConfigurationGroupoid {
    fn object_index(&self) -> HashMap<&[usize], usize> {
        self.object_tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect()
    }

    fn morphism_index(&self) -> HashMap<&[usize], usize> {
        self.morphism_tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect()
    }

    /// Objects over each base object under `f0`, for a map into another
    /// configuration groupoid.
    pub fn fiber_sizes(&self, f: &GroupoidHom, base: &ConfigurationGroupoid) -> Vec<usize> {
        let mut sizes = vec![0; base.object_tuples.len()];
        for &y in &f.f0 {
            sizes[y] += 1;
        }
        sizes
    }
}

/// The projection `PB_n → PB_{n−1}` dropping the last coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForgetMap {
    pub source: ConfigurationGroupoid,
    pub target: ConfigurationGroupoid,
    pub hom: GroupoidHom,
}

pub fn forget_map(g: &FiniteGroupoid, n: usize) -> Result<ForgetMap, GroupoidError> {
    if n < 2 {
        return Err(GroupoidError::Arity { n, min: 2 });
    }
    let source = configuration_groupoid(g, n)?;
    let target = configuration_groupoid(g, n - 1)?;
    let (oi, mi) = (target.object_index(), target.morphism_index());
    let hom = GroupoidHom {
        f0: source.object_tuples.iter().map(|t| oi[&t[..n - 1]]).collect(),
        f1: source.morphism_tuples.iter().map(|t| mi[&t[..n - 1]]).collect(),
    };
    Ok(ForgetMap { source, target, hom })
}

/// `PB_n(f)` for a homomorphism `f : G → G'` that sends distinct orbits to
/// distinct orbits (for instance an equivalence).
pub fn configuration_hom(
    src: &ConfigurationGroupoid,
    tgt: &ConfigurationGroupoid,
    f: &GroupoidHom,
) -> Result<GroupoidHom, GroupoidError> {
    if src.n != tgt.n {
        return Err(GroupoidError::InvalidHom(format!("arity {} vs {}", src.n, tgt.n)));
    }
    let (oi, mi) = (tgt.object_index(), tgt.morphism_index());
    let map = |tuples: &[Vec<usize>], m: &[usize], index: &HashMap<&[usize], usize>| {
        tuples
            .iter()
            .map(|t| {
                let image: Vec<usize> = t.iter().map(|&x| m[x]).collect();
                index.get(image.as_slice()).copied().ok_or_else(|| {
                    GroupoidError::InvalidHom(format!("{t:?} maps to {image:?}, which has repeated orbits"))
                })
            })
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(GroupoidHom {
        f0: map(&src.object_tuples, &f.f0, &oi)?,
        f1: map(&src.morphism_tuples, &f.f1, &mi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::tests::{negation, swap};
    use crate::groupoid::{
        morita_triple, translation_groupoid, unit_groupoid, verify_hom, FiniteGroup, GroupAction,
    };
    use proptest::prelude::*;

    #[test]
    fn unit_and_swap() {
        let c = configuration_groupoid(&unit_groupoid(2), 2).unwrap();
        assert_eq!(c.object_tuples, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(c.groupoid.morphism_count(), 2);
        assert!(c.warning.is_none());
        let c = configuration_groupoid(&translation_groupoid(&swap()), 2).unwrap();
        assert_eq!(c.groupoid.object_count(), 0);
        assert!(c.warning.is_some());
        assert!(configuration_groupoid(&unit_groupoid(2), 0).is_err());
    }

    #[test]
    fn negation_pairs() {
        let g = translation_groupoid(&negation());
        let orbits = orbit_space(&g);
        let c = configuration_groupoid(&g, 2).unwrap();
        let brute = (0..6)
            .flat_map(|x| (0..6).map(move |y| (x, y)))
            .filter(|&(x, y)| orbits.quotient[x] != orbits.quotient[y])
            .count();
        assert_eq!(c.groupoid.object_count(), brute);
        assert!(c.groupoid.check_axioms().pass);
        // 4 orbits: 4·3 ordered orbit pairs
        assert_eq!(orbit_space(&c.groupoid).len(), 12);
    }

    #[test]
    fn forget_fibers() {
        let g = translation_groupoid(&negation());
        let orbit_len = |x: usize| if x == 0 || x == 3 { 1 } else { 2 };
        let fm = forget_map(&g, 3).unwrap();
        assert!(verify_hom(&fm.source.groupoid, &fm.target.groupoid, &fm.hom).pass);
        let sizes = fm.source.fiber_sizes(&fm.hom, &fm.target);
        for (i, t) in fm.target.object_tuples.iter().enumerate() {
            assert_eq!(sizes[i], 6 - orbit_len(t[0]) - orbit_len(t[1]));
        }
        let fm = forget_map(&unit_groupoid(3), 2).unwrap();
        assert!(fm.source.fiber_sizes(&fm.hom, &fm.target).iter().all(|&s| s == 2));
        assert!(verify_hom(&fm.source.groupoid, &fm.target.groupoid, &fm.hom).pass);
        assert!(forget_map(&g, 1).is_err());
    }

    #[test]
    fn unit_forget_fibers_on_two_points_have_size_one() {
        let fm = forget_map(&unit_groupoid(2), 2).unwrap();
        assert!(fm.source.fiber_sizes(&fm.hom, &fm.target).iter().all(|&s| s == 1));
    }

    fn cyclic_action(n: usize, k: usize) -> GroupAction {
        // ℤ/n acting on ℤ/n ⊔ (k fixed points)
        let g = FiniteGroup::cyclic(n);
        let regular = GroupAction::regular(g.clone());
        regular.disjoint_union(&GroupAction::trivial(g, k)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn orbit_count_of_configurations(n in 1usize..=4, k in 0usize..=3, arity in 1usize..=3) {
            let g = translation_groupoid(&cyclic_action(n, k));
            let orbits = orbit_space(&g).len();
            let c = configuration_groupoid(&g, arity).unwrap();
            prop_assert!(c.groupoid.check_axioms().pass);
            let expected = if orbits < arity { 0 } else { (orbits - arity + 1..=orbits).product::<usize>() };
            prop_assert_eq!(orbit_space(&c.groupoid).len(), expected);
        }
    }

    #[test]
    fn forget_commutes_with_equivalence_induced_maps() {
        let gamma = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let action = GroupAction::regular(gamma.clone())
            .disjoint_union(&GroupAction::regular(gamma.clone()))
            .unwrap()
            .disjoint_union(&GroupAction::cosets(gamma, &[0, 3]).unwrap())
            .unwrap();
        let t = morita_triple(&action, &[0, 1], &[0, 2]).unwrap();
        for (e, g) in [(&t.e1, &t.g1), (&t.e2, &t.g2)] {
            for n in 2..=3 {
                let up_k = forget_map(&t.k, n).unwrap();
                let up_g = forget_map(g, n).unwrap();
                let top = configuration_hom(&up_k.source, &up_g.source, e).unwrap();
                let bottom = configuration_hom(&up_k.target, &up_g.target, e).unwrap();
                for x in 0..up_k.source.object_tuples.len() {
                    let a = &up_g.target.object_tuples[up_g.hom.f0[top.f0[x]]];
                    let b = &up_g.target.object_tuples[bottom.f0[up_k.hom.f0[x]]];
                    assert_eq!(a, b);
                }
                assert!(verify_hom(&up_k.source.groupoid, &up_g.source.groupoid, &top).pass);
            }
        }
    }
}

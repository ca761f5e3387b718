//! A common refinement of two quotient translation groupoids of one action.
//!
//! For `Γ` acting on `S` with normal subgroups `N1, N2`, the groupoids
//! `G_i = G(S/N_i, Γ/N_i)` both receive a map from
//! `K = G(S/N, Γ/N)`, `N = N1 ∩ N2`, induced by the quotient maps. The map
//! `K → G_i` is an equivalence exactly when `N_i/N` acts freely on `S/N`.

use serde::{Deserialize, Serialize};

use super::{
    is_equivalence, translation_groupoid, ActionSpec, EquivalenceReport, FiniteGroup, FiniteGroupoid, GroupAction,
    GroupSpec, GroupoidError, GroupoidHom,
};

/// Model file: `Γ`, its action and the two normal subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoritaModel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub group: GroupSpec,
    pub action: ActionSpec,
    pub n1: Vec<usize>,
    pub n2: Vec<usize>,
}

impl MoritaModel {
    pub fn build(&self) -> Result<GroupAction, GroupoidError> {
        self.action.build(self.group.build()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaTriple {
    pub intersection: Vec<usize>,
    pub k: FiniteGroupoid,
    pub g1: FiniteGroupoid,
    pub g2: FiniteGroupoid,
    pub e1: GroupoidHom,
    pub e2: GroupoidHom,
    pub e1_report: EquivalenceReport,
    pub e2_report: EquivalenceReport,
}

/// `G(S/N, Γ/N)` with the point and group projections.
struct Quotient {
    action: GroupAction,
    points: Vec<usize>,
    group: Vec<usize>,
}

fn quotient(action: &GroupAction, n: &[usize]) -> Result<Quotient, GroupoidError> {
    let (q, group) = action.group.quotient(n)?;
    let points = action.suborbits(n);
    let count = points.iter().max().map_or(0, |&m| m + 1);
    let mut point_rep = vec![usize::MAX; count];
    for (x, &p) in points.iter().enumerate() {
        if point_rep[p] == usize::MAX {
            point_rep[p] = x;
        }
    }
    let mut group_rep = vec![usize::MAX; q.order()];
    for (g, &c) in group.iter().enumerate() {
        if group_rep[c] == usize::MAX {
            group_rep[c] = g;
        }
    }
    let table = group_rep
        .iter()
        .map(|&g| point_rep.iter().map(|&x| points[action.act(g, x)]).collect())
        .collect();
    Ok(Quotient {
        action: GroupAction::new(q, table)?,
        points,
        group,
    })
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut n: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
    n.sort_unstable();
    n
}

/// The map `K → G_i` on morphism indices `(x̄, γ̄) ↦ (p x̄, ρ γ̄)`.
fn projection(top: &Quotient, bottom: &Quotient) -> GroupoidHom {
    let to_bottom_point = |xbar: usize| {
        let x = top.points.iter().position(|&p| p == xbar).expect("onto");
        bottom.points[x]
    };
    let to_bottom_group = |gbar: usize| {
        let g = top.group.iter().position(|&c| c == gbar).expect("onto");
        bottom.group[g]
    };
    let (nk, kk) = (top.action.size, top.action.group.order());
    let kb = bottom.action.group.order();
    let f0: Vec<usize> = (0..nk).map(to_bottom_point).collect();
    let rho: Vec<usize> = (0..kk).map(to_bottom_group).collect();
    let f1 = (0..nk).flat_map(|x| rho.iter().map(move |&g| (x, g))).map(|(x, g)| f0[x] * kb + g).collect();
    GroupoidHom { f0, f1 }
}

/// Builds the triple for normal `N1`, `N2` without checking freeness, so the
/// reports may fail.
pub fn morita_candidate(action: &GroupAction, n1: &[usize], n2: &[usize]) -> Result<MoritaTriple, GroupoidError> {
    for (name, n) in [("N1", n1), ("N2", n2)] {
        if !action.group.is_normal(n) {
            return Err(GroupoidError::InvalidModel(format!("{name} = {n:?} is not a normal subgroup")));
        }
    }
    let n = intersect(n1, n2);
    let (qk, q1, q2) = (quotient(action, &n)?, quotient(action, n1)?, quotient(action, n2)?);
    let k = translation_groupoid(&qk.action);
    let g1 = translation_groupoid(&q1.action);
    let g2 = translation_groupoid(&q2.action);
    let e1 = projection(&qk, &q1);
    let e2 = projection(&qk, &q2);
    let e1_report = is_equivalence(&k, &g1, &e1);
    let e2_report = is_equivalence(&k, &g2, &e2);
    Ok(MoritaTriple {
        intersection: n,
        k,
        g1,
        g2,
        e1,
        e2,
        e1_report,
        e2_report,
    })
}

/// Whether `N_i` acts on `S/N` with stabilizers inside `N`.
fn acts_freely_mod(action: &GroupAction, ni: &[usize], n: &[usize]) -> Option<(usize, usize)> {
    let orbit = action.suborbits(n);
    ni.iter()
        .filter(|g| !n.contains(g))
        .find_map(|&g| (0..action.size).find(|&x| orbit[action.act(g, x)] == orbit[x]).map(|x| (g, x)))
}

/// The triple `(K, K → G1, K → G2)`. Models where `N_i/N` does not act
/// freely on `S/N` are rejected, since the quotient map then collapses
/// isotropy and cannot be an equivalence.
pub fn morita_triple(action: &GroupAction, n1: &[usize], n2: &[usize]) -> Result<MoritaTriple, GroupoidError> {
    for (name, ni) in [("N1", n1), ("N2", n2)] {
        if !action.group.is_normal(ni) {
            return Err(GroupoidError::InvalidModel(format!("{name} = {ni:?} is not a normal subgroup")));
        }
    }
    let n = intersect(n1, n2);
    for (name, ni) in [("N1", n1), ("N2", n2)] {
        if let Some((g, x)) = acts_freely_mod(action, ni, &n) {
            return Err(GroupoidError::InvalidModel(format!(
                "{name}/(N1 ∩ N2) does not act freely: element {g} fixes the class of point {x}"
            )));
        }
    }
    morita_candidate(action, n1, n2)
}

/// Normal subgroups of `group`.
pub fn normal_subgroups(group: &FiniteGroup) -> Vec<Vec<usize>> {
    group.subgroups().into_iter().filter(|h| group.is_normal(h)).collect()
}

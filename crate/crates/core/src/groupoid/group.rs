use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::GroupoidError;

/// A finite group as a multiplication table on `0..order`; 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    pub name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Checks identity, inverses and associativity of `table`.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let n = table.len();
        let bad = |msg: &str| Err(GroupoidError::InvalidGroup(msg.to_string()));
        if n == 0 {
            return bad("empty table");
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table is not square over 0..n");
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return bad("element 0 is not the identity");
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverse[a] = b,
                None => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            table,
            inverse,
        })
    }

    /// The group generated by permutations of `0..degree`, elements listed
    /// in breadth-first order from the identity.
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<Self, GroupoidError> {
        let degree = gens.first().map_or(0, Vec::len);
        for g in gens {
            let mut seen = g.clone();
            seen.sort_unstable();
            if g.len() != degree || seen != (0..degree).collect::<Vec<_>>() {
                return Err(GroupoidError::InvalidGroup("generator is not a permutation".into()));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elems = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        // composition `a·b` means apply b, then a
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p = compose(g, &elems[i]);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        Self::from_table(name, table)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("C{n}"), table).expect("cyclic table")
    }

    /// Dihedral group of order `2n`: element `r^k` is `k`, `s r^k` is `n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral group needs n >= 1");
        let mul = |a: usize, b: usize| -> usize {
            let (sa, ka) = (a / n, a % n);
            let (sb, kb) = (b / n, b % n);
            // s^sa r^ka s^sb r^kb = s^(sa+sb) r^(±ka + kb)
            let k = if sb == 0 { ka + kb } else { n - ka + kb };
            ((sa + sb) % 2) * n + k % n
        };
        let table = (0..2 * n).map(|a| (0..2 * n).map(|b| mul(a, b)).collect()).collect();
        Self::from_table(format!("D{}", 2 * n), table).expect("dihedral table")
    }

    /// Direct product; `(a, b)` is `a * |B| + b`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order();
        let n = a.order() * nb;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::from_table(format!("{}x{}", a.name, b.name), table).expect("product table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Smallest subgroup containing `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([0usize]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        !h.is_empty()
            && h.contains(&0)
            && h.iter().all(|&a| a < self.order())
            && h.iter().all(|&a| h.iter().all(|&b| h.contains(&self.mul(a, self.inv(b)))))
    }

    /// Every subgroup, each as a sorted element list, sorted by size.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0]]);
        let mut queue = VecDeque::from([vec![0usize]]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.contains(&g) {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by_key(|h| (h.len(), h.clone()));
        out
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        self.is_subgroup(h)
            && (0..self.order()).all(|g| {
                h.iter()
                    .all(|&x| h.contains(&self.mul(self.mul(g, x), self.inv(g))))
            })
    }

    /// The subgroup `h` as a group of its own, with its inclusion map.
    pub fn subgroup(&self, h: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupoidError> {
        if !self.is_subgroup(h) {
            return Err(GroupoidError::InvalidGroup(format!("{h:?} is not a subgroup")));
        }
        let mut elems = h.to_vec();
        elems.sort_unstable();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let sub = Self::from_table(format!("{}<{}", h.len(), self.name), table)?;
        Ok((sub, elems))
    }

    /// `G/N` with the projection; cosets are numbered by their smallest element.
    pub fn quotient(&self, n: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupoidError> {
        if !self.is_normal(n) {
            return Err(GroupoidError::InvalidModel(format!("{n:?} is not a normal subgroup of {}", self.name)));
        }
        let mut projection = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if projection[g] != usize::MAX {
                continue;
            }
            for &x in n {
                projection[self.mul(g, x)] = reps.len();
            }
            reps.push(g);
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| projection[self.mul(a, b)]).collect())
            .collect();
        let q = Self::from_table(format!("{}/{}", self.name, n.len()), table)?;
        Ok((q, projection))
    }
}

/// A left action `g · x = table[g][x]` on `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub size: usize,
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, table: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let size = table.first().map_or(0, Vec::len);
        let bad = |msg: String| Err(GroupoidError::InvalidAction(msg));
        if table.len() != group.order() {
            return bad(format!("{} rows for a group of order {}", table.len(), group.order()));
        }
        if table.iter().any(|r| r.len() != size || r.iter().any(|&x| x >= size)) {
            return bad("rows must map 0..size into itself".into());
        }
        if (0..size).any(|x| table[0][x] != x) {
            return bad("identity does not act trivially".into());
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if let Some(x) = (0..size).find(|&x| table[gh][x] != table[g][table[h][x]]) {
                    return bad(format!("(g·h)·{x} != g·(h·{x}) for g = {g}, h = {h}"));
                }
            }
        }
        Ok(GroupAction { group, size, table })
    }

    /// Left multiplication on the group itself.
    pub fn regular(group: FiniteGroup) -> Self {
        let table = group.table.clone();
        GroupAction::new(group, table).expect("left multiplication is an action")
    }

    pub fn trivial(group: FiniteGroup, size: usize) -> Self {
        let table = vec![(0..size).collect(); group.order()];
        GroupAction::new(group, table).expect("trivial action")
    }

    /// Left multiplication on the left cosets `gK`.
    pub fn cosets(group: FiniteGroup, k: &[usize]) -> Result<Self, GroupoidError> {
        if !group.is_subgroup(k) {
            return Err(GroupoidError::InvalidGroup(format!("{k:?} is not a subgroup")));
        }
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut reps = Vec::new();
        for g in 0..group.order() {
            if coset_of[g] == usize::MAX {
                for &x in k {
                    coset_of[group.mul(g, x)] = reps.len();
                }
                reps.push(g);
            }
        }
        let table = (0..group.order())
            .map(|g| reps.iter().map(|&r| coset_of[group.mul(g, r)]).collect())
            .collect();
        GroupAction::new(group, table)
    }

    /// Disjoint union; points of `other` come after those of `self`.
    pub fn disjoint_union(&self, other: &GroupAction) -> Result<Self, GroupoidError> {
        if self.group != other.group {
            return Err(GroupoidError::InvalidAction("actions of different groups".into()));
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&x| x + self.size)).collect())
            .collect();
        GroupAction::new(self.group.clone(), table)
    }

    /// The action restricted to a subgroup, given by its inclusion map.
    pub fn restrict(&self, sub: FiniteGroup, inclusion: &[usize]) -> Result<Self, GroupoidError> {
        let table = inclusion.iter().map(|&g| self.table[g].clone()).collect();
        GroupAction::new(sub, table)
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Orbits of the subgroup `n` on the points, numbered by smallest element.
    pub fn suborbits(&self, n: &[usize]) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.size];
        let mut next = 0;
        for x in 0..self.size {
            if label[x] == usize::MAX {
                for &g in n {
                    label[self.act(g, x)] = next;
                }
                next += 1;
            }
        }
        label
    }
}

/// How a group is described in model files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Product { factors: Vec<GroupSpec> },
    Table { table: Vec<Vec<usize>> },
    Permutations { generators: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, GroupoidError> {
        Ok(match self {
            GroupSpec::Cyclic { n } if *n >= 1 => FiniteGroup::cyclic(*n),
            GroupSpec::Dihedral { n } if *n >= 1 => FiniteGroup::dihedral(*n),
            GroupSpec::Cyclic { .. } | GroupSpec::Dihedral { .. } => {
                return Err(GroupoidError::InvalidGroup("order parameter must be >= 1".into()))
            }
            GroupSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it
                    .next()
                    .ok_or_else(|| GroupoidError::InvalidGroup("empty product".into()))?
                    .build()?;
                it.try_fold(first, |acc, f| Ok::<_, GroupoidError>(FiniteGroup::product(&acc, &f.build()?)))?
            }
            GroupSpec::Table { table } => FiniteGroup::from_table("table", table.clone())?,
            GroupSpec::Permutations { generators } => FiniteGroup::from_permutations("perm", generators)?,
        })
    }
}

/// How an action is described in model files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionSpec {
    Regular,
    Trivial { size: usize },
    Cosets { subgroup: Vec<usize> },
    Table { table: Vec<Vec<usize>> },
}

impl ActionSpec {
    pub fn build(&self, group: FiniteGroup) -> Result<GroupAction, GroupoidError> {
        match self {
            ActionSpec::Regular => Ok(GroupAction::regular(group)),
            ActionSpec::Trivial { size } => Ok(GroupAction::trivial(group, *size)),
            ActionSpec::Cosets { subgroup } => GroupAction::cosets(group, subgroup),
            ActionSpec::Table { table } => GroupAction::new(group, table.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn quaternion() -> FiniteGroup {
        // regular representation of Q8 on {±1, ±i, ±j, ±k} = 0..8
        // order: 1, -1, i, -i, j, -j, k, -k; left multiplication by i and j
        let i = vec![2, 3, 1, 0, 6, 7, 5, 4];
        let j = vec![4, 5, 7, 6, 1, 0, 2, 3];
        FiniteGroup::from_permutations("Q8", &[i, j]).unwrap()
    }

    #[test]
    fn constructors() {
        assert_eq!(FiniteGroup::cyclic(5).order(), 5);
        let d = FiniteGroup::dihedral(4);
        assert_eq!(d.order(), 8);
        // s r s = r⁻¹
        assert_eq!(d.mul(d.mul(4, 1), 4), 3);
        let v = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert!((0..4).all(|g| v.mul(g, g) == 0));
        let q = quaternion();
        assert_eq!(q.order(), 8);
        assert_eq!((0..8).filter(|&g| q.mul(g, g) == 0).count(), 2);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::cyclic(6).subgroups().len(), 4);
        assert_eq!(FiniteGroup::dihedral(3).subgroups().len(), 6);
        assert_eq!(FiniteGroup::dihedral(4).subgroups().len(), 10);
        assert_eq!(quaternion().subgroups().len(), 6);
        let c2c2c2 = GroupSpec::Product {
            factors: vec![GroupSpec::Cyclic { n: 2 }; 3],
        }
        .build()
        .unwrap();
        assert_eq!(c2c2c2.subgroups().len(), 16);
    }

    #[test]
    fn normality_and_quotients() {
        let d = FiniteGroup::dihedral(3);
        let rotations = vec![0, 1, 2];
        assert!(d.is_normal(&rotations));
        assert!(!d.is_normal(&[0, 3]));
        let (q, proj) = d.quotient(&rotations).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj[4], proj[3]);
        assert!(matches!(d.quotient(&[0, 3]), Err(GroupoidError::InvalidModel(_))));
    }

    #[test]
    fn actions() {
        let c6 = FiniteGroup::cyclic(6);
        let cosets = GroupAction::cosets(c6.clone(), &[0, 3]).unwrap();
        assert_eq!(cosets.size, 3);
        let bad = GroupAction::new(FiniteGroup::cyclic(2), vec![vec![0, 1], vec![0, 0]]);
        assert!(matches!(bad, Err(GroupoidError::InvalidAction(_))));
        let u = cosets.disjoint_union(&GroupAction::trivial(c6, 2)).unwrap();
        assert_eq!(u.size, 5);
        assert_eq!(u.act(1, 3), 3);
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupSpec::Table { table: vec![vec![0, 1], vec![1, 0]] }.build().is_ok());
    }
}

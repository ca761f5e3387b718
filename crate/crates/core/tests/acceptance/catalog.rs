//! Every group of order at most 16, up to isomorphism.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use orbconf::groupoid::{normal_subgroups, FiniteGroup};

/// Closes `gens` under multiplication; the identity becomes element 0.
fn generated<T: Clone + Eq + Hash>(name: &str, identity: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> FiniteGroup {
    let mut elems = vec![identity];
    let mut index: HashMap<T, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut next = 0;
    while next < elems.len() {
        for g in gens {
            let x = mul(g, &elems[next]);
            if !index.contains_key(&x) {
                index.insert(x.clone(), elems.len());
                elems.push(x);
            }
        }
        next += 1;
    }
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
        .collect();
    FiniteGroup::from_table(name, table).expect("closure of a group")
}

/// `⟨a, b | aⁿ = 1, bᵏ = aˢ, b a b⁻¹ = aʳ⟩` on pairs `aⁱ bʲ`.
fn metacyclic(name: &str, n: i64, k: i64, r: i64, s: i64) -> FiniteGroup {
    let pow_r = |j: i64| (0..j).fold(1, |acc, _| acc * r % n);
    let mul = |x: &(i64, i64), y: &(i64, i64)| {
        let e = x.0 + pow_r(x.1) * y.0;
        let j = x.1 + y.1;
        if j < k {
            (e.rem_euclid(n), j)
        } else {
            ((e + s).rem_euclid(n), j - k)
        }
    };
    generated(name, (0, 0), &[(1, 0), (0, 1)], mul)
}

fn c(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n)
}

fn prod(gs: &[FiniteGroup]) -> FiniteGroup {
    gs[1..].iter().fold(gs[0].clone(), |acc, g| FiniteGroup::product(&acc, g))
}

/// 2×2 matrices over ℤ[i] as `[re, im]` pairs, entries in `{0, ±1, ±i}`.
type M2 = [[(i64, i64); 2]; 2];

fn mat_mul(a: &M2, b: &M2) -> M2 {
    let m = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let add = |x: (i64, i64), y: (i64, i64)| (x.0 + y.0, x.1 + y.1);
    let mut out = [[(0, 0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = add(m(a[i][0], b[0][j]), m(a[i][1], b[1][j]));
        }
    }
    out
}

pub fn groups() -> Vec<(&'static str, FiniteGroup)> {
    let id: M2 = [[(1, 0), (0, 0)], [(0, 0), (1, 0)]];
    let px: M2 = [[(0, 0), (1, 0)], [(1, 0), (0, 0)]];
    let py: M2 = [[(0, 0), (0, -1)], [(0, 1), (0, 0)]];
    let pz: M2 = [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]];
    // (C4 × C2) ⋊ C2 with the generator sending (x, y) to (x, y + x)
    let semi = |u: &(i64, i64, i64), v: &(i64, i64, i64)| {
        let (x, y) = if u.2 == 1 { (v.0, v.1 + v.0) } else { (v.0, v.1) };
        ((u.0 + x).rem_euclid(4), (u.1 + y).rem_euclid(2), (u.2 + v.2) % 2)
    };
    let a4 = FiniteGroup::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap();
    let q8 = metacyclic("Q8", 4, 2, 3, 2);
    let d4 = FiniteGroup::dihedral(4);
    vec![
        ("C1", c(1)),
        ("C2", c(2)),
        ("C3", c(3)),
        ("C4", c(4)),
        ("C2xC2", prod(&[c(2), c(2)])),
        ("C5", c(5)),
        ("C6", c(6)),
        ("D3", FiniteGroup::dihedral(3)),
        ("C7", c(7)),
        ("C8", c(8)),
        ("C4xC2", prod(&[c(4), c(2)])),
        ("C2^3", prod(&[c(2), c(2), c(2)])),
        ("D4", d4.clone()),
        ("Q8", q8.clone()),
        ("C9", c(9)),
        ("C3xC3", prod(&[c(3), c(3)])),
        ("C10", c(10)),
        ("D5", FiniteGroup::dihedral(5)),
        ("C11", c(11)),
        ("C12", c(12)),
        ("C6xC2", prod(&[c(6), c(2)])),
        ("D6", FiniteGroup::dihedral(6)),
        ("A4", a4),
        ("Dic3", metacyclic("Dic3", 6, 2, 5, 3)),
        ("C13", c(13)),
        ("C14", c(14)),
        ("D7", FiniteGroup::dihedral(7)),
        ("C15", c(15)),
        ("C16", c(16)),
        ("C8xC2", prod(&[c(8), c(2)])),
        ("C4xC4", prod(&[c(4), c(4)])),
        ("C4xC2xC2", prod(&[c(4), c(2), c(2)])),
        ("C2^4", prod(&[c(2), c(2), c(2), c(2)])),
        ("D8", FiniteGroup::dihedral(8)),
        ("Q16", metacyclic("Q16", 8, 2, 7, 4)),
        ("SD16", metacyclic("SD16", 8, 2, 3, 0)),
        ("M16", metacyclic("M16", 8, 2, 5, 0)),
        ("C4:C4", metacyclic("C4:C4", 4, 4, 3, 0)),
        ("D4xC2", prod(&[d4, c(2)])),
        ("Q8xC2", prod(&[q8, c(2)])),
        ("Pauli", generated("Pauli", id, &[px, py, pz], mat_mul)),
        ("(C4xC2):C2", generated("(C4xC2):C2", (0, 0, 0), &[(1, 0, 0), (0, 1, 0), (0, 0, 1)], semi)),
    ]
}

/// Isomorphism invariants: element-order profile, subgroup and normal
/// subgroup counts, commutativity, center size.
fn invariants(g: &FiniteGroup) -> (Vec<usize>, usize, usize, bool, usize) {
    let n = g.order();
    let order_of = |x: usize| {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = g.mul(x, y);
            k += 1;
        }
        k
    };
    let mut orders: Vec<usize> = (0..n).map(order_of).collect();
    orders.sort_unstable();
    let central = |x: usize| (0..n).all(|y| g.mul(x, y) == g.mul(y, x));
    let center = (0..n).filter(|&x| central(x)).count();
    (orders, g.subgroups().len(), normal_subgroups(g).len(), center == n, center)
}

/// Checks the catalog has the known number of groups of each order and that
/// no two are isomorphic.
pub fn check_complete(groups: &[(&str, FiniteGroup)]) -> Result<(), String> {
    const COUNTS: [usize; 16] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];
    let mut by_order: BTreeMap<usize, Vec<(&str, _)>> = BTreeMap::new();
    for (name, g) in groups {
        by_order.entry(g.order()).or_default().push((*name, invariants(g)));
    }
    for (order, expected) in (1..=16).zip(COUNTS) {
        let found = by_order.get(&order).map_or(&[][..], Vec::as_slice);
        if found.len() != expected {
            return Err(format!("order {order}: {} groups in the catalog, expected {expected}", found.len()));
        }
        for (i, (a, ia)) in found.iter().enumerate() {
            if let Some((b, _)) = found[i + 1..].iter().find(|(_, ib)| ib == ia) {
                return Err(format!("{a} and {b} share all invariants"));
            }
        }
    }
    Ok(())
}

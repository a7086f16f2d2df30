//! Representatives of the conjugacy classes of nontrivial perfect subgroups
//! of `Sym(n)` for `n ≤ 10`.
//!
//! Through degree 9 a perfect permutation group has at most one nontrivial
//! orbit (every nontrivial orbit has length at least 5), so the catalog is
//! the list of transitive perfect groups of degree at most `n`, padded with
//! fixed points. Degree 10 adds the groups with two orbits of length 5.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Largest degree covered by [`perfect_catalog`].
pub const CATALOG_MAX_DEGREE: usize = 10;

/// A catalog entry before padding.
#[derive(Clone, Debug)]
pub struct PerfectGroup {
    pub name: &'static str,
    pub group: PermGroup,
}

fn perm(images: &[usize]) -> Perm {
    Perm::from_images(images).expect("bijection")
}

fn group(n: usize, gens: Vec<Perm>) -> PermGroup {
    PermGroup::from_generators(n, gens).expect("valid generators")
}

fn cycles(n: usize, text: &str) -> Perm {
    Perm::parse(text, n).expect("valid literal")
}

/// Matrices over `F2` acting on row vectors, encoded as the images of the
/// basis vectors `1, 2, 4`.
fn gl32_generators() -> Vec<[usize; 3]> {
    // Coordinate cycle and an elementary transvection.
    vec![[2, 4, 1], [3, 2, 4]]
}

fn apply_linear(m: &[usize; 3], v: usize) -> usize {
    (0..3).filter(|&i| v >> i & 1 == 1).fold(0, |acc, i| acc ^ m[i])
}

/// `GL(3,2) ≅ PSL(2,7)` on the seven nonzero vectors of `F2^3`.
fn psl27_on_7() -> PermGroup {
    let gens = gl32_generators()
        .iter()
        .map(|m| perm(&(1..8).map(|v| apply_linear(m, v) - 1).collect::<Vec<_>>()))
        .collect();
    group(7, gens)
}

/// `AGL(3,2) = 2^3 : GL(3,2)` on the eight vectors of `F2^3`.
fn agl32() -> PermGroup {
    let mut gens: Vec<Perm> = gl32_generators()
        .iter()
        .map(|m| perm(&(0..8).map(|v| apply_linear(m, v)).collect::<Vec<_>>()))
        .collect();
    gens.push(perm(&(0..8).map(|v| v ^ 1).collect::<Vec<_>>()));
    group(8, gens)
}

/// `PSL(2,7)` on the projective line over `F7`, `∞` being the last point.
fn psl27_on_8() -> PermGroup {
    group(8, vec![cycles(8, "(1 2 3 4 5 6 7)"), cycles(8, "(1 8)(2 7)(3 4)(5 6)")])
}

/// `PSL(2,5) ≅ A5` on the projective line over `F5`.
fn a5_on_6() -> PermGroup {
    group(6, vec![cycles(6, "(1 2 3 4 5)"), cycles(6, "(1 6)(2 5)")])
}

fn f8_mul(a: usize, b: usize) -> usize {
    let mut r = 0;
    for i in 0..3 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    for i in (3..5).rev() {
        if r >> i & 1 == 1 {
            r ^= 0b1011 << (i - 3);
        }
    }
    r
}

/// `PSL(2,8)` on the projective line over `F8 = F2[t]/(t^3+t+1)`.
fn psl28_on_9() -> PermGroup {
    const INF: usize = 8;
    let inv = |x: usize| (1..8).find(|&y| f8_mul(x, y) == 1).unwrap();
    let translate: Vec<usize> = (0..9).map(|x| if x == INF { INF } else { x ^ 1 }).collect();
    let scale: Vec<usize> = (0..9).map(|x| if x == INF { INF } else { f8_mul(x, 2) }).collect();
    let invert: Vec<usize> = (0..9)
        .map(|x| match x {
            INF => 0,
            0 => INF,
            _ => inv(x),
        })
        .collect();
    group(9, vec![perm(&translate), perm(&scale), perm(&invert)])
}

fn pairs_of_5() -> Vec<(usize, usize)> {
    (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect()
}

/// `A5` on the ten 2-subsets of five points.
fn a5_on_10() -> PermGroup {
    let pairs = pairs_of_5();
    let gens = PermGroup::alternating(5)
        .generators()
        .iter()
        .map(|g| {
            perm(
                &pairs
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (g.image(a), g.image(b));
                        pairs.iter().position(|&p| p == (x.min(y), x.max(y))).unwrap()
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    group(10, gens)
}

/// `A6 ≅ PSL(2,9)` on the ten partitions of six points into two triples.
fn a6_on_10() -> PermGroup {
    let triples: Vec<u32> = (0u32..64).filter(|m| m.count_ones() == 3 && m & 1 == 1).collect();
    let canon = |m: u32| if m & 1 == 1 { m } else { !m & 63 };
    let gens = PermGroup::alternating(6)
        .generators()
        .iter()
        .map(|g| {
            perm(
                &triples
                    .iter()
                    .map(|&m| {
                        let img = (0..6)
                            .filter(|&i| m >> i & 1 == 1)
                            .fold(0u32, |acc, i| acc | 1 << g.image(i));
                        triples.iter().position(|&t| t == canon(img)).unwrap()
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    group(10, gens)
}

/// `A5` acting on `{0..5}` and `{5..10}`, diagonally when `diagonal`.
fn a5_on_5_plus_5(diagonal: bool) -> PermGroup {
    let a5 = PermGroup::alternating(5);
    let mut gens = Vec::new();
    for g in a5.generators() {
        let left = g.shifted(0, 10);
        let right = g.shifted(5, 10);
        if diagonal {
            gens.push(&left * &right);
        } else {
            gens.push(left);
            gens.push(right);
        }
    }
    group(10, gens)
}

/// `2^4 : A5`: even pair swaps on the pairs `{i, i+5}` with `A5` permuting
/// the pairs.
fn two4_a5() -> PermGroup {
    let mut gens: Vec<Perm> = a5_on_5_plus_5(true).generators().to_vec();
    gens.push(cycles(10, "(1 6)(2 7)"));
    group(10, gens)
}

/// Transitive nontrivial perfect groups of degree at most `n`, unpadded.
pub fn transitive_perfect_groups(n: usize) -> Result<Vec<PerfectGroup>> {
    if n > CATALOG_MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let mut out = Vec::new();
    let mut add = |deg: usize, name: &'static str, g: fn() -> PermGroup| {
        if deg <= n {
            out.push(PerfectGroup { name, group: g() });
        }
    };
    add(5, "A5", || PermGroup::alternating(5));
    add(6, "A5 on 6", a5_on_6);
    add(6, "A6", || PermGroup::alternating(6));
    add(7, "PSL(2,7) on 7", psl27_on_7);
    add(7, "A7", || PermGroup::alternating(7));
    add(8, "PSL(2,7) on 8", psl27_on_8);
    add(8, "AGL(3,2)", agl32);
    add(8, "A8", || PermGroup::alternating(8));
    add(9, "PSL(2,8)", psl28_on_9);
    add(9, "A9", || PermGroup::alternating(9));
    add(10, "A5 on 10", a5_on_10);
    add(10, "A6 on 10", a6_on_10);
    add(10, "2^4:A5", two4_a5);
    add(10, "A10", || PermGroup::alternating(10));
    Ok(out)
}

/// Representatives of the `Sym(n)`-classes of nontrivial perfect subgroups
/// of `Sym(n)`, each padded with fixed points to degree `n`.
pub fn perfect_catalog(n: usize) -> Result<Vec<PerfectGroup>> {
    let mut out: Vec<PerfectGroup> = transitive_perfect_groups(n)?
        .into_iter()
        .map(|p| PerfectGroup {
            name: p.name,
            group: pad(&p.group, n),
        })
        .collect();
    if n >= 10 {
        out.push(PerfectGroup {
            name: "A5 x A5",
            group: pad(&a5_on_5_plus_5(false), n),
        });
        out.push(PerfectGroup {
            name: "A5 diagonal on 5+5",
            group: pad(&a5_on_5_plus_5(true), n),
        });
    }
    Ok(out)
}

fn pad(g: &PermGroup, n: usize) -> PermGroup {
    group(n, g.generators().iter().map(|x| x.shifted(0, n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{is_transitive, orbits};
    use crate::iso::sym_conjugate;
    use crate::structure::is_perfect;

    #[test]
    fn orders_and_perfectness() {
        let expect = [
            ("A5", 60),
            ("A5 on 6", 60),
            ("A6", 360),
            ("PSL(2,7) on 7", 168),
            ("A7", 2520),
            ("PSL(2,7) on 8", 168),
            ("AGL(3,2)", 1344),
            ("A8", 20160),
            ("PSL(2,8)", 504),
            ("A9", 181440),
            ("A5 on 10", 60),
            ("A6 on 10", 360),
            ("2^4:A5", 960),
            ("A10", 1814400),
        ];
        let cat = transitive_perfect_groups(10).unwrap();
        assert_eq!(cat.len(), expect.len());
        for (p, (name, order)) in cat.iter().zip(expect) {
            assert_eq!(p.name, name);
            assert_eq!(p.group.order(), order, "{name}");
            assert!(is_transitive(&p.group), "{name}");
            assert!(is_perfect(&p.group), "{name}");
        }
    }

    #[test]
    fn small_degrees() {
        assert!(perfect_catalog(4).unwrap().is_empty());
        let five = perfect_catalog(5).unwrap();
        assert_eq!(five.len(), 1);
        assert_eq!(five[0].group.order(), 60);
    }

    #[test]
    fn degree_seven_entries_are_pairwise_non_conjugate() {
        let cat = perfect_catalog(7).unwrap();
        let names: Vec<&str> = cat.iter().map(|p| p.name).collect();
        assert_eq!(names, vec!["A5", "A5 on 6", "A6", "PSL(2,7) on 7", "A7"]);
        for (i, a) in cat.iter().enumerate() {
            assert!(is_perfect(&a.group));
            for b in &cat[i + 1..] {
                assert!(sym_conjugate(&a.group, &b.group).unwrap().is_none());
            }
        }
        let sizes: Vec<usize> = orbits(&cat[1].group).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![6, 1]);
    }
}

//! Groups referred to by name throughout the crate.

use crate::actions::{external_direct_product, wreath_product};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Keys accepted by [`named_group`] besides the parameterised families.
pub const NAMED_KEYS: &[&str] = &["H7", "K8", "L8", "H7xC2_9", "C3wrS3", "G225", "G225xC2"];

fn gp(n: usize, gens: &[&str]) -> PermGroup {
    PermGroup::from_generators(
        n,
        gens.iter().map(|t| Perm::parse(t, n).expect("valid literal")).collect(),
    )
    .expect("valid generators")
}

/// `⟨(1 2 3), (1 2)(4 5 6 7)⟩ ≅ C3 ⋊ C4` on 7 points.
pub fn h7() -> PermGroup {
    gp(7, &["(1 2 3)", "(1 2)(4 5 6 7)"])
}

/// `(C2)^3 ⋊ C7 = AGL(1, 8)` on 8 points.
pub fn k8() -> PermGroup {
    gp(
        8,
        &[
            "(1 2)(3 4)(5 6)(7 8)",
            "(1 3)(2 4)(5 7)(6 8)",
            "(1 5)(2 6)(3 7)(4 8)",
            "(2 3 5 4 7 8 6)",
        ],
    )
}

/// `K8` extended by the Frobenius map, `(C2)^3 ⋊ (C7 ⋊ C3)`.
pub fn l8() -> PermGroup {
    k8().with_element(&Perm::parse("(3 5 7)(4 6 8)", 8).unwrap())
}

/// `H7 × C2` on 9 points.
pub fn h7_x_c2() -> PermGroup {
    gp(9, &["(1 2 3)", "(1 3)(4 5 6 7)", "(8 9)"])
}

pub fn c3_wr_s3() -> PermGroup {
    wreath_product(&PermGroup::cyclic(3), &PermGroup::symmetric(3)).unwrap()
}

/// `(C2)^4 ⋊ C5` on 10 points: the sum-zero submodule of `(C2)^5` acting
/// on five pairs `{i, i+5}`, extended by the 5-cycle on the pairs.
pub fn g225() -> PermGroup {
    gp(10, &["(1 2 3 4 5)(6 7 8 9 10)", "(1 6)(2 7)"])
}

/// The central involution swapping every pair of [`g225`].
pub fn g225_centralizing_involution() -> Perm {
    Perm::parse("(1 6)(2 7)(3 8)(4 9)(5 10)", 10).unwrap()
}

/// `⟨G225, z⟩` with `z` the central involution, an internal direct
/// product `G225 × C2` on 10 points.
pub fn g225_x_c2() -> PermGroup {
    g225().with_element(&g225_centralizing_involution())
}

/// Element of the pair-swapping base `(C2)^5` flipping the pairs `i` with
/// `flips[i]` set.
pub fn pair_swap(flips: [bool; 5]) -> Perm {
    let cycles: Vec<Vec<usize>> = (0..5).filter(|&i| flips[i]).map(|i| vec![i, i + 5]).collect();
    Perm::from_cycles(10, &cycles).unwrap()
}

/// Membership of a pair swap in [`g225`]: an even number of pairs flipped.
pub fn in_deleted_module(flips: [bool; 5]) -> bool {
    flips.iter().filter(|&&f| f).count() % 2 == 0
}

/// Resolves a named key or a parameterised family `Sym(n)`, `Alt(n)`,
/// `C(n)`, `Dih(order)`.
pub fn named_group(key: &str) -> Result<PermGroup> {
    let key = key.trim();
    let family = |prefix: &str| -> Option<usize> { key.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok() };
    if let Some(n) = family("Sym(") {
        return check_degree(n).map(|_| PermGroup::symmetric(n));
    }
    if let Some(n) = family("Alt(") {
        return check_degree(n).map(|_| PermGroup::alternating(n));
    }
    if let Some(n) = family("C(") {
        return check_degree(n).map(|_| PermGroup::cyclic(n));
    }
    if let Some(n) = family("Dih(") {
        return PermGroup::dihedral(n);
    }
    Ok(match key {
        "H7" => h7(),
        "K8" => k8(),
        "L8" => l8(),
        "H7xC2_9" => h7_x_c2(),
        "C3wrS3" => c3_wr_s3(),
        "G225" => g225(),
        "G225xC2" => g225_x_c2(),
        "C2xC2xC2" => external_direct_product(
            &external_direct_product(&PermGroup::cyclic(2), &PermGroup::cyclic(2))?,
            &PermGroup::cyclic(2),
        )?,
        _ => return Err(Error::UnknownGroup(key.to_string())),
    })
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    if n > crate::perm::MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{is_transitive, minimal_block_systems};

    #[test]
    fn orders() {
        assert_eq!(h7().order(), 12);
        assert_eq!(k8().order(), 56);
        assert_eq!(l8().order(), 168);
        assert_eq!(h7_x_c2().order(), 24);
        assert_eq!(c3_wr_s3().order(), 162);
        assert_eq!(g225().order(), 80);
        assert_eq!(g225_x_c2().order(), 160);
    }

    #[test]
    fn k8_and_l8_are_primitive() {
        for g in [k8(), l8()] {
            assert!(is_transitive(&g));
            assert!(minimal_block_systems(&g).unwrap().is_empty());
        }
    }

    #[test]
    fn g225_base_is_the_sum_zero_code() {
        let g = g225();
        assert_eq!(g.orbit(0).len(), 10);
        for mask in 0u32..32 {
            let flips: [bool; 5] = std::array::from_fn(|i| mask >> i & 1 == 1);
            assert_eq!(g.contains(&pair_swap(flips)), in_deleted_module(flips), "{mask:05b}");
        }
        let t = Perm::parse("(1 2 3 4 5)(6 7 8 9 10)", 10).unwrap();
        let base = PermGroup::generated_reduced(
            10,
            (0u32..32)
                .map(|m| std::array::from_fn(|i| m >> i & 1 == 1))
                .filter(|f| in_deleted_module(*f))
                .map(pair_swap),
        );
        assert_eq!(base.order(), 16);
        assert!(base.conjugate_by(&t).same_group(&base));
        let z = g225_centralizing_involution();
        assert!(g.generators().iter().all(|h| h * &z == &z * h));
        assert!(!g.contains(&z));
    }

    #[test]
    fn families_and_unknown_keys() {
        assert_eq!(named_group("Sym(5)").unwrap().order(), 120);
        assert_eq!(named_group("Alt(6)").unwrap().order(), 360);
        assert_eq!(named_group("C(7)").unwrap().order(), 7);
        assert_eq!(named_group("Dih(8)").unwrap().order(), 8);
        assert!(matches!(named_group("Dih(7)"), Err(Error::Invalid(_))));
        assert!(matches!(named_group("M11"), Err(Error::UnknownGroup(_))));
        assert_eq!(named_group("C2xC2xC2").unwrap().order(), 8);
    }
}

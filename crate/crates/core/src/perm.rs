//! Permutations of `{0, .., n-1}`.
//!
//! Conventions: points are 0-based inside the crate and 1-based in every
//! textual form (cycle notation, reports). Permutations act on the right, so
//! `a.compose(&b)` (also `&a * &b`) applies `a` first and then `b`, and the
//! conjugate `a^g` is `g⁻¹ a g`. This matches exponent notation `x^g`; note
//! that several computer algebra systems use the opposite order.

use std::fmt;
use std::ops::Mul;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest degree accepted from user input.
pub const MAX_DEGREE: usize = 32;

/// Largest degree used for auxiliary actions built internally (graphs of
/// homomorphisms, coset actions).
pub const INTERNAL_MAX_DEGREE: usize = 255;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: SmallVec<[u8; 16]>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        assert!(degree <= INTERNAL_MAX_DEGREE, "degree {degree} too large");
        Perm {
            images: (0..degree).map(|i| i as u8).collect(),
        }
    }

    /// Builds a permutation from its image table (0-based).
    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        if n > INTERNAL_MAX_DEGREE {
            return Err(Error::DegreeTooLarge(n));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n {
                return Err(Error::PointOutOfRange {
                    point: x + 1,
                    degree: n,
                });
            }
            if seen[x] {
                return Err(Error::RepeatedPoint(x + 1));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&x| x as u8).collect(),
        })
    }

    pub(crate) fn from_images_unchecked(images: SmallVec<[u8; 16]>) -> Perm {
        debug_assert!({
            let mut seen = vec![false; images.len()];
            images.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true))
        });
        Perm { images }
    }

    /// Builds a permutation from disjoint 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        if degree > INTERNAL_MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        let mut images: SmallVec<[u8; 16]> = (0..degree).map(|i| i as u8).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x + 1, degree });
                }
                if used[x] {
                    return Err(Error::RepeatedPoint(x + 1));
                }
                used[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()] as u8;
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation such as `"(1 2 3)(4 5)"` or `"(1,2)"` on
    /// `degree` points. The empty string and `"()"` denote the identity.
    pub fn parse(text: &str, degree: usize) -> Result<Perm> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        let cycles = parse_cycle_list(text, 0)?;
        Perm::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `x`.
    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`: `x ↦ (x^self)^other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv: SmallVec<[u8; 16]> = SmallVec::from_elem(0, self.degree());
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_lengths().fold(1u64, |acc, l| lcm(acc, l as u64))
    }

    /// `g⁻¹ self g`, so that `(x^g)^(self^g) = (x^self)^g`.
    pub fn conjugate(&self, g: &Perm) -> Result<Perm> {
        if self.degree() != g.degree() {
            return Err(Error::DegreeMismatch(self.degree(), g.degree()));
        }
        Ok(self.conj(g))
    }

    #[inline]
    pub(crate) fn conj(&self, g: &Perm) -> Perm {
        let mut out: SmallVec<[u8; 16]> = SmallVec::from_elem(0, self.degree());
        for (x, &ax) in self.images.iter().enumerate() {
            out[g.images[x] as usize] = g.images[ax as usize];
        }
        Perm { images: out }
    }

    /// `self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        &(&self.inverse() * &other.inverse()) * &(self * other)
    }

    /// Nontrivial cycles, each starting at its least point, sorted by that
    /// point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            out.push(cycle);
        }
        out
    }

    fn cycle_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.degree();
        let mut seen = vec![false; n];
        (0..n).filter_map(move |start| {
            if seen[start] {
                return None;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.image(x);
            }
            Some(len)
        })
    }

    /// Cycle lengths including fixed points, in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycle_lengths().collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Moved points, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&x| self.image(x) != x).collect()
    }

    pub fn is_even(&self) -> bool {
        self.cycle_lengths().filter(|l| l % 2 == 0).count() % 2 == 0
    }

    /// Relabels into degree `degree`, sending point `x` to `x + offset`; all
    /// other points are fixed.
    pub fn shifted(&self, offset: usize, degree: usize) -> Perm {
        assert!(offset + self.degree() <= degree);
        let mut images: SmallVec<[u8; 16]> = (0..degree).map(|i| i as u8).collect();
        for (x, &y) in self.images.iter().enumerate() {
            images[x + offset] = (y as usize + offset) as u8;
        }
        Perm { images }
    }

    /// Restriction to an invariant set of points, relabelled `0..points.len()`
    /// in the given order.
    pub fn restricted(&self, points: &[usize]) -> Option<Perm> {
        let mut index = vec![usize::MAX; self.degree()];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i;
        }
        let images = points
            .iter()
            .map(|&p| {
                let q = index[self.image(p)];
                (q != usize::MAX).then_some(q as u8)
            })
            .collect::<Option<SmallVec<[u8; 16]>>>()?;
        Some(Perm { images })
    }
}

impl Mul for &Perm {
    type Output = Perm;

    #[inline]
    fn mul(self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm {
            images: self.images.iter().map(|&x| rhs.images[x as usize]).collect(),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Parses a product of cycles into 0-based point lists. `offset` is added
/// to reported error positions.
pub(crate) fn parse_cycle_list(text: &str, offset: usize) -> Result<Vec<Vec<usize>>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut cycles = Vec::new();
    let err = |pos: usize, msg: &str| Error::Parse {
        pos: pos + offset,
        msg: msg.to_string(),
    };
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i == bytes.len() {
            break;
        }
        if bytes[i] != b'(' {
            return Err(err(i, "expected `(`"));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b',') {
                i += 1;
            }
            if i == bytes.len() {
                return Err(err(i, "unterminated cycle"));
            }
            if bytes[i] == b')' {
                i += 1;
                break;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(err(i, "expected a point number"));
            }
            let value: usize = text[start..i]
                .parse()
                .map_err(|_| err(start, "point number too large"))?;
            if value == 0 {
                return Err(err(start, "points are numbered from 1"));
            }
            cycle.push(value - 1);
        }
        match cycle.len() {
            0 => {}
            1 => return Err(err(i - 1, "a cycle needs at least two points")),
            _ => cycles.push(cycle),
        }
    }
    Ok(cycles)
}

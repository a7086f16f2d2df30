//! A small language for naming groups.
//!
//! ```text
//! spec  := term ("x" term)*
//! term  := "S"n | "A"n | "C"n | "Dih"order | named-key
//!        | "deg" n ":" perm ("," perm)*
//!        | "wr(" spec "," spec ")" | "(" spec ")"
//! ```
//!
//! `x` is the external direct product, `wr(B, T)` the imprimitive wreath
//! product `B ≀ T`, and `Dih` takes the group order. Named keys are those of
//! [`crate::named::named_group`], including `Sym(n)`, `Alt(n)`, `C(n)` and
//! `Dih(order)`.

use std::fmt;

use crate::actions::{external_direct_product, wreath_product};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::named::{named_group, NAMED_KEYS};
use crate::perm::{Perm, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    Dihedral(usize),
    Named(String),
    Literal { degree: usize, perms: Vec<Perm> },
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Wreath(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut p = Parser { src: text, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(spec)
    }

    pub fn resolve(&self) -> Result<PermGroup> {
        match self {
            GroupSpec::Symmetric(n) => Ok(PermGroup::symmetric(*n)),
            GroupSpec::Alternating(n) => Ok(PermGroup::alternating(*n)),
            GroupSpec::Cyclic(n) => Ok(PermGroup::cyclic(*n)),
            GroupSpec::Dihedral(order) => PermGroup::dihedral(*order),
            GroupSpec::Named(key) => named_group(key),
            GroupSpec::Literal { degree, perms } => PermGroup::from_generators(*degree, perms.clone()),
            GroupSpec::Product(a, b) => external_direct_product(&a.resolve()?, &b.resolve()?),
            GroupSpec::Wreath(a, b) => wreath_product(&a.resolve()?, &b.resolve()?),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        GroupSpec::parse(s)
    }
}

/// Parses and resolves in one step.
pub fn parse_group(text: &str) -> Result<PermGroup> {
    GroupSpec::parse(text)?.resolve()
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "Dih{n}"),
            GroupSpec::Named(k) => f.write_str(k),
            GroupSpec::Literal { degree, perms } => {
                let list: Vec<String> = perms.iter().map(Perm::to_string).collect();
                write!(f, "(deg {degree}: {})", list.join(", "))
            }
            GroupSpec::Product(a, b) => {
                write!(f, "{a} x ")?;
                match **b {
                    GroupSpec::Product(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            GroupSpec::Wreath(a, b) => write!(f, "wr({a}, {b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        let value = self.rest()[..digits]
            .parse()
            .map_err(|_| self.error("number too large"))?;
        self.pos += digits;
        Ok(value)
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let mut left = self.term()?;
        loop {
            self.skip_ws();
            let after = &self.rest()[self.rest().len().min(1)..];
            let is_times = self.peek() == Some('x')
                && after
                    .chars()
                    .next()
                    .is_none_or(|c| c.is_whitespace() || c == '(' || c.is_ascii_uppercase() || c == 'd' || c == 'w');
            if !is_times {
                return Ok(left);
            }
            self.pos += 1;
            let right = self.term()?;
            left = GroupSpec::Product(Box::new(left), Box::new(right));
        }
    }

    fn term(&mut self) -> Result<GroupSpec> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("wr(") {
            let base = self.spec()?;
            self.expect(",")?;
            let top = self.spec()?;
            self.expect(")")?;
            return Ok(GroupSpec::Wreath(Box::new(base), Box::new(top)));
        }
        if self.rest().starts_with("deg") && !self.rest()[3..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            self.pos += 3;
            return self.literal();
        }
        if self.eat("(") {
            let inner = self.spec()?;
            self.expect(")")?;
            return Ok(inner);
        }
        let word_len = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '(' || c == ')'))
            .map_or(self.rest().len(), |(i, _)| i);
        let word = self.word_candidate(word_len);
        if word.is_empty() {
            return Err(self.error("expected a group"));
        }
        self.pos += word.len();
        self.atom(&word, start)
    }

    /// Longest prefix that forms a balanced family call such as `Sym(5)` or a
    /// plain identifier.
    fn word_candidate(&self, limit: usize) -> String {
        let text = &self.rest()[..limit];
        let mut depth = 0i32;
        let mut end = 0;
        for (i, c) in text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        break;
                    }
                }
                _ => {}
            }
            end = i + c.len_utf8();
            if c == ')' && depth == 0 {
                break;
            }
        }
        text[..end].to_string()
    }

    fn atom(&self, word: &str, start: usize) -> Result<GroupSpec> {
        let err = |msg: String| Error::Parse { pos: start, msg };
        if NAMED_KEYS.contains(&word) || word == "C2xC2xC2" {
            return Ok(GroupSpec::Named(word.to_string()));
        }
        if word.contains('(') {
            named_group(word).map_err(|e| err(e.to_string()))?;
            return Ok(GroupSpec::Named(word.to_string()));
        }
        if word.contains('x') {
            let mut parts = word.split('x');
            let first = parts.next().unwrap_or_default();
            let mut spec = self.atom(first, start)?;
            for part in parts {
                spec = GroupSpec::Product(Box::new(spec), Box::new(self.atom(part, start)?));
            }
            return Ok(spec);
        }
        let family = |prefix: &str| -> Option<Result<usize>> {
            let digits = word.strip_prefix(prefix)?;
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            Some(digits.parse::<usize>().map_err(|_| err("number too large".into())))
        };
        let degree = |n: usize| -> Result<usize> {
            if n == 0 {
                Err(err("degree must be positive".into()))
            } else if n > MAX_DEGREE {
                Err(err(format!("degree {n} exceeds {MAX_DEGREE}")))
            } else {
                Ok(n)
            }
        };
        if let Some(n) = family("Dih") {
            let n = n?;
            if n == 0 || n % 2 == 1 {
                return Err(err(format!("dihedral order must be even, got {n}")));
            }
            degree(n / 2)?;
            return Ok(GroupSpec::Dihedral(n));
        }
        if let Some(n) = family("S") {
            return Ok(GroupSpec::Symmetric(degree(n?)?));
        }
        if let Some(n) = family("A") {
            return Ok(GroupSpec::Alternating(degree(n?)?));
        }
        if let Some(n) = family("C") {
            return Ok(GroupSpec::Cyclic(degree(n?)?));
        }
        Err(err(format!("unknown group '{word}'")))
    }

    fn literal(&mut self) -> Result<GroupSpec> {
        let degree = self.number()?;
        if degree == 0 || degree > MAX_DEGREE {
            return Err(self.error(&format!("degree must be between 1 and {MAX_DEGREE}")));
        }
        self.expect(":")?;
        let mut perms = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let mut depth = 0;
            let mut end = start;
            for (i, c) in self.rest().char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' if depth > 0 => depth -= 1,
                    ',' if depth > 0 => {}
                    c if depth == 0 && !c.is_whitespace() => break,
                    _ => {}
                }
                end = start + i + c.len_utf8();
            }
            let text = self.src[start..end].trim_end();
            if text.is_empty() {
                return Err(self.error("expected a permutation"));
            }
            let perm = Perm::parse(text, degree).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: start + pos, msg },
                other => other,
            })?;
            perms.push(perm);
            self.pos = start + text.len();
            let before_comma = self.pos;
            if !self.eat(",") {
                break;
            }
            self.skip_ws();
            if self.peek() != Some('(') {
                self.pos = before_comma;
                break;
            }
        }
        Ok(GroupSpec::Literal { degree, perms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::h7;

    #[test]
    fn literals_and_families() {
        let g = parse_group("deg 7: (1 2 3), (1 2)(4 5 6 7)").unwrap();
        assert!(g.same_group(&h7()));
        let p = parse_group("C3 x C4").unwrap();
        assert_eq!(p.order(), 12);
        assert!(p.is_abelian());
        let w = parse_group("wr(C3, S3)").unwrap();
        assert_eq!((w.order(), w.degree()), (162, 9));
        assert_eq!(parse_group("Dih8").unwrap().order(), 8);
        assert_eq!(parse_group("Sym(4) x C2").unwrap().order(), 48);
        assert_eq!(parse_group("H7xC2_9").unwrap().order(), 24);
        assert_eq!(parse_group("C2xC3").unwrap().order(), 6);
        assert_eq!(parse_group("deg 3: (1,2), (2 3) x A4").unwrap().order(), 72);
        assert_eq!(parse_group("wr(deg 2: (1 2), S3)").unwrap().order(), 48);
        assert_eq!(parse_group("deg 4: ()").unwrap().order(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(GroupSpec::parse("Dih7"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(GroupSpec::parse("C3 x Q8"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(
            GroupSpec::parse("deg 3: (1 y)"),
            Err(Error::Parse { pos: 10, .. })
        ));
        assert!(matches!(
            GroupSpec::parse("deg 3: (1 4)"),
            Err(Error::PointOutOfRange { .. })
        ));
        assert!(matches!(GroupSpec::parse("wr(C3, S3"), Err(Error::Parse { .. })));
        assert!(matches!(GroupSpec::parse("S3 S4"), Err(Error::Parse { pos: 3, .. })));
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "S5",
            "A4 x C2",
            "wr(C3, S3)",
            "C2 x (C3 x C4)",
            "deg 7: (1 2 3), (1 2)(4 5 6 7)",
            "H7xC2_9",
            "Dih18",
        ] {
            let spec = GroupSpec::parse(text).unwrap();
            let again = GroupSpec::parse(&spec.to_string()).unwrap();
            assert_eq!(spec, again, "{text}");
            assert_eq!(spec.to_string(), again.to_string());
        }
    }
}

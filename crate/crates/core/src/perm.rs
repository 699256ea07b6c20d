//! Permutations of `0..n` with cycle-notation parsing and printing.
//!
//! A [`Perm`] is stored as an image array: `images[i]` is the image of
//! point `i`. Composition is right-to-left: `p.compose(&q)` applies `q`
//! first and then `p`, so `p.compose(&q).apply(i) == p.apply(q.apply(i))`.
//! Cycle notation in the textual interface is 1-based; image arrays are
//! 0-based.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation of the points `0..degree`, as an image array.
///
/// The derived ordering is lexicographic on the image array, which makes
/// the identity the smallest permutation of each degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    /// The identity permutation on `degree` points.
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from an image array, checking it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} out of range for degree {n}"
                )));
            }
            if seen[img] {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} repeated; not a bijection"
                )));
            }
            seen[img] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `0..degree` from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let from = cycle[window];
                let to = cycle[(window + 1) % cycle.len()];
                if from >= degree || to >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle point out of range for degree {degree}"
                    )));
                }
                if moved[from] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} appears in more than one cycle",
                        from + 1
                    )));
                }
                moved[from] = true;
                images[from] = to;
            }
        }
        Perm::from_images(images)
    }

    /// Parses 1-based cycle notation, e.g. `(12)(354)`. The identity is
    /// written `e` or `()`. Within a cycle, points are single digits unless
    /// separated by commas or spaces, so `(1 10 2)` and `(1,10,2)` are the
    /// multi-digit forms.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        if s == "e" || s == "()" || s == "id" {
            return Ok(Perm::identity(degree));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| {
                Error::Parse(format!("expected '(' in permutation {s:?}"))
            })?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::Parse(format!(
                    "unexpected text {:?} in permutation {s:?}",
                    &rest[..open]
                )));
            }
            let close = rest.find(')').ok_or_else(|| {
                Error::Parse(format!("unbalanced '(' in permutation {s:?}"))
            })?;
            if close < open {
                return Err(Error::Parse(format!("unbalanced ')' in permutation {s:?}")));
            }
            let body = &rest[open + 1..close];
            rest = &rest[close + 1..];
            let points = parse_cycle_body(body, s)?;
            if points.is_empty() {
                continue;
            }
            let mut cycle = Vec::with_capacity(points.len());
            for p in points {
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!(
                        "point {p} out of range 1..={degree} in {s:?}"
                    )));
                }
                cycle.push(p - 1);
            }
            cycles.push(cycle);
        }
        Perm::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(
            self.degree(),
            other.degree(),
            "composition requires equal degree"
        );
        Perm {
            images: (0..self.degree())
                .map(|i| self.images[other.images[i]])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Perm { images }
    }

    /// Disjoint cycles of 0-based points, each starting at its smallest
    /// point, ordered by that point. Fixed points are omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }
}

fn parse_cycle_body(body: &str, whole: &str) -> Result<Vec<usize>> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let parse_point = |tok: &str| -> Result<usize> {
        tok.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad point {tok:?} in {whole:?}")))
    };
    if body.contains(',') || body.contains(char::is_whitespace) {
        body.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(parse_point)
            .collect()
    } else {
        body.chars()
            .map(|c| parse_point(&c.to_string()))
            .collect()
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation with fixed points omitted; the identity
    /// prints as `e`. Points are run together for degree at most 9 and
    /// comma-separated beyond that.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 && self.degree() > 9 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = p("(13)", 3);
        let b = p("(12)", 3);
        assert_eq!(a.compose(&b), p("(123)", 3));
    }

    #[test]
    fn identity_and_involution() {
        let a = p("(12)", 3);
        let e = Perm::identity(3);
        assert_eq!(a.compose(&e), a);
        assert_eq!(e.compose(&a), a);
        assert!(a.compose(&a).is_identity());
    }

    #[test]
    fn parse_multi_cycle() {
        let a = p("(12)(354)", 5);
        assert_eq!(a.images(), &[1, 0, 4, 2, 3]);
        assert_eq!(a.to_string(), "(12)(354)");
    }

    #[test]
    fn parse_separated_points() {
        let a = Perm::parse("(1 10 2)", 10).unwrap();
        assert_eq!(a.apply(0), 9);
        assert_eq!(a.apply(9), 1);
        assert_eq!(a.to_string(), "(1,10,2)");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Perm::parse("(14)", 3).is_err());
        assert!(Perm::parse("(12", 3).is_err());
        assert!(Perm::parse("(11)", 3).is_err());
        assert!(Perm::parse("x(12)", 3).is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["e", "(12)", "(123)", "(12)(354)", "(2534)"] {
            let a = p(s, 5);
            assert_eq!(Perm::parse(&a.to_string(), 5).unwrap(), a);
        }
    }

    #[test]
    fn inverse_law() {
        let a = p("(14253)", 5);
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(a.inverse().compose(&a).is_identity());
    }
}

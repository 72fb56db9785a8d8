//! Classical Brauer diagrams on `m` strands, the monoid of type `A_{m-1}`:
//! `r_i` is the crossing of strands `i`, `i+1` and `e_i` the cup-cap.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rewrite::{Gen, Word};

/// A perfect matching on `top_1..top_m, bot_1..bot_m` with a count of closed
/// loops (the δ-exponent).
///
/// Points are numbered `0..m` on top and `m..2m` on the bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BrauerDiagram {
    m: usize,
    partner: Vec<usize>,
    pub loops: i64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

impl BrauerDiagram {
    pub fn identity(m: usize) -> Self {
        let partner = (0..2 * m).map(|p| if p < m { p + m } else { p - m }).collect();
        Self { m, partner, loops: 0 }
    }

    /// Diagram from a partner table; `partner[partner[p]] = p` is required.
    pub fn from_partners(m: usize, partner: Vec<usize>, loops: i64) -> Result<Self> {
        if partner.len() != 2 * m {
            return Err(Error::DimensionMismatch { expected: 2 * m, found: partner.len() });
        }
        for (p, &q) in partner.iter().enumerate() {
            if q >= 2 * m || q == p || partner[q] != p {
                return Err(Error::Parse(format!("point {p} is not properly matched")));
            }
        }
        Ok(Self { m, partner, loops })
    }

    pub fn strands(&self) -> usize {
        self.m
    }

    pub fn partner(&self, point: usize) -> usize {
        self.partner[point]
    }

    /// Diagram of one generator; `node` ranges over `1..m`.
    pub fn generator(m: usize, g: Gen) -> Result<Self> {
        let i = g.node() as usize;
        if i == 0 || i >= m {
            return Err(Error::NodeOutOfRange { node: i, rank: m.saturating_sub(1) });
        }
        let mut d = Self::identity(m);
        let (a, b) = (i - 1, i);
        match g {
            Gen::R(_) => {
                d.partner[a] = b + m;
                d.partner[b + m] = a;
                d.partner[b] = a + m;
                d.partner[a + m] = b;
            }
            Gen::E(_) => {
                d.partner[a] = b;
                d.partner[b] = a;
                d.partner[a + m] = b + m;
                d.partner[b + m] = a + m;
            }
        }
        Ok(d)
    }

    /// `self` stacked above `other`; closed loops in the middle add to the
    /// loop count.
    pub fn compose(&self, other: &BrauerDiagram) -> Result<BrauerDiagram> {
        let m = self.m;
        if other.m != m {
            return Err(Error::StrandMismatch(m, other.m));
        }
        // self on 0..2m, other on 2m..4m; self's bottom glued to other's top
        let mut uf = UnionFind::new(4 * m);
        for p in 0..2 * m {
            uf.union(p, self.partner[p]);
            uf.union(2 * m + p, 2 * m + other.partner[p]);
        }
        for j in 0..m {
            uf.union(m + j, 2 * m + j);
        }
        let outer = |p: usize| if p < m { p } else { p + 2 * m };
        let mut first: Vec<Option<usize>> = vec![None; 4 * m];
        let mut partner = vec![0; 2 * m];
        for p in 0..2 * m {
            let r = uf.find(outer(p));
            match first[r] {
                None => first[r] = Some(p),
                Some(q) => {
                    partner[p] = q;
                    partner[q] = p;
                }
            }
        }
        let mut closed = 0;
        let mut counted = vec![false; 4 * m];
        for p in m..3 * m {
            let r = uf.find(p);
            if first[r].is_none() && !counted[r] {
                counted[r] = true;
                closed += 1;
            }
        }
        Ok(BrauerDiagram { m, partner, loops: self.loops + other.loops + closed })
    }

    /// Sorted pairs of 1-based labels such as `("t1", "b3")`.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let label = |p: usize| if p < self.m { format!("t{}", p + 1) } else { format!("b{}", p - self.m + 1) };
        (0..2 * self.m).filter(|&p| p < self.partner[p]).map(|p| (label(p), label(self.partner[p]))).collect()
    }
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().into_iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "[{}] loops={}", pairs.join(" "), self.loops)
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    m: usize,
    pairs: Vec<(String, String)>,
    loops: i64,
}

impl Serialize for BrauerDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson { m: self.m, pairs: self.pairs(), loops: self.loops }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BrauerDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DiagramJson::deserialize(d)?;
        let m = raw.m;
        let point = |s: &str| -> std::result::Result<usize, String> {
            let (side, n) = s.split_at(1);
            let n: usize = n.parse().map_err(|_| format!("bad point `{s}`"))?;
            match side {
                "t" if (1..=m).contains(&n) => Ok(n - 1),
                "b" if (1..=m).contains(&n) => Ok(m + n - 1),
                _ => Err(format!("bad point `{s}`")),
            }
        };
        let mut partner = vec![usize::MAX; 2 * m];
        for (a, b) in &raw.pairs {
            let (a, b) = (point(a).map_err(serde::de::Error::custom)?, point(b).map_err(serde::de::Error::custom)?);
            partner[a] = b;
            partner[b] = a;
        }
        BrauerDiagram::from_partners(m, partner, raw.loops).map_err(serde::de::Error::custom)
    }
}

/// Diagram of a word of type `A_{m-1}`, composed left to right; the word's
/// own δ-power is added to the loop count.
pub fn eval_word_a(m: usize, w: &Word) -> Result<BrauerDiagram> {
    let mut d = BrauerDiagram::identity(m);
    for &g in &w.tokens {
        d = d.compose(&BrauerDiagram::generator(m, g)?)?;
    }
    d.loops += w.delta as i64;
    Ok(d)
}

/// `(2m-1)!!`, the number of Brauer diagrams on `m` strands.
pub fn diagram_count(m: usize) -> u128 {
    (1..=m as u128).map(|k| 2 * k - 1).product()
}

/// All perfect matchings on `2m` points, as loop-free diagrams.
pub fn all_diagrams(m: usize) -> Vec<BrauerDiagram> {
    fn go(partner: &mut Vec<usize>, m: usize, out: &mut Vec<BrauerDiagram>) {
        let Some(p) = partner.iter().position(|&q| q == usize::MAX) else {
            out.push(BrauerDiagram { m, partner: partner.clone(), loops: 0 });
            return;
        };
        for q in p + 1..2 * m {
            if partner[q] == usize::MAX {
                partner[p] = q;
                partner[q] = p;
                go(partner, m, out);
                partner[p] = usize::MAX;
                partner[q] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![usize::MAX; 2 * m], m, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(eval_word_a(4, &Word::identity()).unwrap(), BrauerDiagram::identity(4));
    }

    #[test]
    fn cup_cap_squared_closes_a_loop() {
        let e1 = eval_word_a(2, &w("e1")).unwrap();
        let d = eval_word_a(2, &w("e1 e1")).unwrap();
        assert_eq!(d.loops, 1);
        assert_eq!(d.pairs(), e1.pairs());
        assert_eq!(e1.compose(&e1).unwrap(), d);
    }

    #[test]
    fn erase_through_neighbour() {
        let d = eval_word_a(3, &w("e1 r2 e1")).unwrap();
        assert_eq!(d, eval_word_a(3, &w("e1")).unwrap());
    }

    #[test]
    fn crossings_are_involutions() {
        let r1 = BrauerDiagram::generator(3, Gen::R(1)).unwrap();
        assert_eq!(r1.compose(&r1).unwrap(), BrauerDiagram::identity(3));
        let id = BrauerDiagram::identity(3);
        assert_eq!(id.compose(&r1).unwrap(), r1);
    }

    #[test]
    fn counts() {
        assert_eq!(diagram_count(1), 1);
        for m in 1..=5 {
            assert_eq!(all_diagrams(m).len() as u128, diagram_count(m));
        }
        assert_eq!(diagram_count(3), 15);
        assert_eq!(diagram_count(5), 945);
    }

    #[test]
    fn errors() {
        assert!(eval_word_a(3, &w("e3")).is_err());
        let a = BrauerDiagram::identity(2);
        assert!(matches!(a.compose(&BrauerDiagram::identity(3)), Err(Error::StrandMismatch(2, 3))));
    }

    #[test]
    fn json_round_trip() {
        let d = eval_word_a(4, &w("d^2 e1 r2 e3")).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.starts_with(r#"{"m":4,"pairs":[["#));
        assert_eq!(serde_json::from_str::<BrauerDiagram>(&s).unwrap(), d);
    }
}

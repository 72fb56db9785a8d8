//! Weyl groups of simply laced diagrams in their reflection representation.
//!
//! Elements are integer matrices acting on coefficient vectors in the basis
//! of simple roots; column `j` holds the image of `α_j`.

use std::fmt;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsystem::CoxeterDiagram;

pub const MAX_RANK: usize = 8;

/// A Weyl group element as a matrix of rank at most [`MAX_RANK`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WMat {
    n: u8,
    m: [i8; MAX_RANK * MAX_RANK],
}

impl fmt::Debug for WMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<i8>> = (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.get(i, j)).collect()).collect();
        write!(f, "WMat{rows:?}")
    }
}

impl WMat {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_RANK, "rank {n} exceeds {MAX_RANK}");
        let mut m = [0; MAX_RANK * MAX_RANK];
        for i in 0..n {
            m[i * MAX_RANK + i] = 1;
        }
        Self { n: n as u8, m }
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Entry in row `i`, column `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.m[j * MAX_RANK + i]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: i8) {
        self.m[j * MAX_RANK + i] = v;
    }

    pub fn column(&self, j: usize) -> &[i8] {
        &self.m[j * MAX_RANK..j * MAX_RANK + self.dim()]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    /// Reflection in the root `beta` for the form given by `gram`.
    pub fn reflection(gram: &[Vec<i8>], beta: &[i8]) -> Self {
        let n = gram.len();
        let mut r = Self::identity(n);
        for j in 0..n {
            let c: i32 = (0..n).map(|i| beta[i] as i32 * gram[i][j] as i32).sum();
            for i in 0..n {
                let v = r.get(i, j) as i32 - c * beta[i] as i32;
                r.set(i, j, v as i8);
            }
        }
        r
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &WMat) -> WMat {
        let n = self.dim();
        debug_assert_eq!(n, other.dim());
        let mut out = WMat { n: self.n, m: [0; MAX_RANK * MAX_RANK] };
        for j in 0..n {
            for k in 0..n {
                let b = other.get(k, j) as i32;
                if b == 0 {
                    continue;
                }
                for i in 0..n {
                    let v = out.get(i, j) as i32 + self.get(i, k) as i32 * b;
                    out.set(i, j, v as i8);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i8]) -> Vec<i8> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|k| self.get(i, k) as i32 * v[k] as i32).sum::<i32>() as i8).collect()
    }

    /// Index of a simple root sent to a negative root, if any.
    fn right_descent(&self) -> Option<usize> {
        (0..self.dim()).find(|&j| self.column(j).iter().any(|&x| x < 0))
    }
}

/// A Weyl group with its simple reflections, for any simply laced diagram.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    diagram: CoxeterDiagram,
    gram: Vec<Vec<i8>>,
    gens: Vec<WMat>,
}

impl WeylGroup {
    pub fn new(diagram: &CoxeterDiagram) -> Result<Self> {
        let n = diagram.len();
        if n > MAX_RANK {
            return Err(Error::UnsupportedType(format!("Weyl group arithmetic above rank {MAX_RANK}")));
        }
        diagram.classify()?;
        let gram: Vec<Vec<i8>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 } else if diagram.adjacent_at(i, j) { -1 } else { 0 }).collect())
            .collect();
        let gens = (0..n)
            .map(|i| {
                let mut e = vec![0i8; n];
                e[i] = 1;
                WMat::reflection(&gram, &e)
            })
            .collect();
        Ok(Self { diagram: diagram.clone(), gram, gens })
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn gram(&self) -> &[Vec<i8>] {
        &self.gram
    }

    pub fn identity(&self) -> WMat {
        WMat::identity(self.rank())
    }

    /// Simple reflection by 0-based position.
    pub fn gen(&self, i: usize) -> &WMat {
        &self.gens[i]
    }

    pub fn from_word(&self, word: &[u8]) -> WMat {
        word.iter().fold(self.identity(), |acc, &i| acc.mul(&self.gens[i as usize]))
    }

    /// Reduced expression: peels right descents, then reverses. The result
    /// depends only on the element.
    pub fn reduced_word(&self, w: &WMat) -> Vec<u8> {
        let mut cur = *w;
        let mut word = Vec::new();
        while let Some(j) = cur.right_descent() {
            cur = cur.mul(&self.gens[j]);
            word.push(j as u8);
        }
        word.reverse();
        word
    }

    pub fn length(&self, w: &WMat) -> usize {
        self.reduced_word(w).len()
    }

    pub fn inverse(&self, w: &WMat) -> WMat {
        let mut word = self.reduced_word(w);
        word.reverse();
        self.from_word(&word)
    }

    /// Group order by orbit–stabilizer along the chain of parabolic
    /// subgroups fixing the last fundamental weight.
    pub fn order(&self) -> u128 {
        parabolic_order(&self.gram)
    }
}

fn parabolic_order(gram: &[Vec<i8>]) -> u128 {
    let n = gram.len();
    if n == 0 {
        return 1;
    }
    // orbit of the last fundamental weight, in weight coordinates
    let mut start = vec![0i32; n];
    start[n - 1] = 1;
    let mut seen: FxHashSet<Vec<i32>> = FxHashSet::from_iter([start.clone()]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for i in 0..n {
            if v[i] == 0 {
                continue;
            }
            let c = v[i];
            let next: Vec<i32> = (0..n).map(|j| v[j] - c * gram[i][j] as i32).collect();
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    let sub: Vec<Vec<i8>> = gram[..n - 1].iter().map(|row| row[..n - 1].to_vec()).collect();
    seen.len() as u128 * parabolic_order(&sub)
}

/// An element of a Weyl group `W(M)` with a reduced expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterElement {
    matrix: WMat,
    word: Vec<u8>,
}

impl CoxeterElement {
    pub fn identity(group: &WeylGroup) -> Self {
        Self { matrix: group.identity(), word: Vec::new() }
    }

    pub fn from_matrix(group: &WeylGroup, matrix: WMat) -> Self {
        Self { word: group.reduced_word(&matrix), matrix }
    }

    /// Element of an arbitrary (not necessarily reduced) word of 0-based
    /// generator positions.
    pub fn from_word(group: &WeylGroup, word: &[u8]) -> Result<Self> {
        if let Some(&bad) = word.iter().find(|&&i| i as usize >= group.rank()) {
            return Err(Error::NodeOutOfRange { node: bad as usize, rank: group.rank() });
        }
        Ok(Self::from_matrix(group, group.from_word(word)))
    }

    pub fn matrix(&self) -> &WMat {
        &self.matrix
    }

    /// Canonical reduced expression.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn mul(&self, group: &WeylGroup, other: &CoxeterElement) -> CoxeterElement {
        Self::from_matrix(group, self.matrix.mul(&other.matrix))
    }

    pub fn inverse(&self, group: &WeylGroup) -> CoxeterElement {
        Self::from_matrix(group, group.inverse(&self.matrix))
    }
}

impl Serialize for CoxeterElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.word.serialize(s)
    }
}

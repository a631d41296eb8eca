//! Positive braids: Lorenz braids of words, reduced Burau, genus.

use serde::{Deserialize, Serialize};

use super::poly::{determinant, Poly, PolyMatrix};
use super::{AlexanderPoly, KnotError, Letter, LorenzWord};

/// Positive braid word; generator `i` (1-based) is σᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Braid {
    pub strands: usize,
    pub word: Vec<usize>,
}

impl Braid {
    pub fn new(strands: usize, word: Vec<usize>) -> Result<Self, KnotError> {
        if strands == 0 {
            return Err(KnotError::BadGenerator { gen: 0, strands });
        }
        if let Some(&gen) = word.iter().find(|&&g| g == 0 || g >= strands) {
            return Err(KnotError::BadGenerator { gen, strands });
        }
        Ok(Self { strands, word })
    }

    pub fn crossings(&self) -> usize {
        self.word.len()
    }

    /// Strand permutation: `perm[i]` is where the strand starting at
    /// position i ends.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &g in &self.word {
            at.swap(g - 1, g);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &start) in at.iter().enumerate() {
            perm[start] = pos;
        }
        perm
    }

    /// Number of components of the closure.
    pub fn components(&self) -> usize {
        cycle_count(&self.permutation())
    }
}

pub(crate) fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            cycles += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
    }
    cycles
}

/// Compares the periodic sequences w^∞ starting at rotations i and j.
fn cmp_rotations(w: &[Letter], i: usize, j: usize) -> std::cmp::Ordering {
    let n = w.len();
    for k in 0..n {
        let o = w[(i + k) % n].cmp(&w[(j + k) % n]);
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Lorenz braid of a primitive word. The n rotations of w are ordered on the
/// branch line by the lexicographic order of their itineraries (L < R, both
/// branches orientation preserving); the orbit moves rotation k to k + 1.
/// L-strands keep their order, R-strands keep theirs, and every L-strand
/// crossing an R-strand passes over it, which gives a positive permutation
/// braid.
pub fn lorenz_braid(w: &LorenzWord) -> Result<Braid, KnotError> {
    if !w.is_primitive() {
        return Err(KnotError::NotPrimitive(w.to_string()));
    }
    let n = w.len();
    let letters = w.letters();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| cmp_rotations(letters, i, j));
    let mut rank = vec![0; n];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r;
    }
    // target[p]: position at the bottom of the strand that starts at p.
    let mut target = vec![0; n];
    for k in 0..n {
        target[rank[k]] = rank[(k + 1) % n];
    }
    // Bubble sort of the targets; each swap of adjacent positions is one
    // positive crossing.
    let mut arr = target;
    let mut word = Vec::new();
    loop {
        let mut swapped = false;
        for j in 0..n.saturating_sub(1) {
            if arr[j] > arr[j + 1] {
                arr.swap(j, j + 1);
                word.push(j + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    Braid::new(n, word)
}

/// Reduced Burau matrix of σᵢ on n strands, size n − 1.
fn burau_generator(i: usize, n: usize) -> PolyMatrix {
    let m = n - 1;
    let mut a: PolyMatrix = (0..m)
        .map(|r| (0..m).map(|c| if r == c { Poly::one() } else { Poly::zero() }).collect())
        .collect();
    let r = i - 1;
    a[r][r] = -&Poly::t();
    if r > 0 {
        a[r][r - 1] = Poly::t();
    }
    if r + 1 < m {
        a[r][r + 1] = Poly::one();
    }
    a
}

fn mat_mul(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Poly::zero(), |acc, k| {
                        if x[i][k].is_zero() || y[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&x[i][k] * &y[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Reduced Burau representation of the braid.
pub fn burau_reduced(b: &Braid) -> PolyMatrix {
    let m = b.strands - 1;
    let mut acc: PolyMatrix = (0..m)
        .map(|r| (0..m).map(|c| if r == c { Poly::one() } else { Poly::zero() }).collect())
        .collect();
    for &g in &b.word {
        acc = mat_mul(&acc, &burau_generator(g, b.strands));
    }
    acc
}

/// Δ(t) ≐ det(I − B(t))·(1 − t)/(1 − tⁿ) for a knot closure.
pub fn alexander_from_braid(b: &Braid) -> Result<AlexanderPoly, KnotError> {
    let comps = b.components();
    if comps != 1 {
        return Err(KnotError::NotAKnot(comps));
    }
    let n = b.strands;
    if n == 1 {
        return Ok(AlexanderPoly::unknot());
    }
    let bm = burau_reduced(b);
    let m: PolyMatrix = bm
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, e)| if i == j { &Poly::one() - e } else { -e })
                .collect()
        })
        .collect();
    let det = determinant(&m);
    // (1 − tⁿ)/(1 − t) = 1 + t + … + t^{n−1}
    let geom = Poly::from_i64(&vec![1; n]);
    let q = det
        .div_exact(&geom)
        .ok_or_else(|| KnotError::BadDiagram("Burau determinant not divisible by [n]_t".into()))?;
    Ok(AlexanderPoly::new(&q))
}

/// Genus of a positive braid knot closure, (c − n + 1)/2.
pub fn genus_positive_braid(b: &Braid) -> Result<i64, KnotError> {
    let v = b.crossings() as i64 - b.strands as i64 + 1;
    if v % 2 != 0 {
        return Err(KnotError::Parity(v));
    }
    Ok(v / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_knots() {
        let b = |k| Braid::new(2, vec![1; k]).unwrap();
        assert_eq!(alexander_from_braid(&b(1)).unwrap(), AlexanderPoly::unknot());
        assert_eq!(alexander_from_braid(&b(3)).unwrap(), AlexanderPoly::trefoil());
        assert_eq!(
            alexander_from_braid(&b(5)).unwrap(),
            AlexanderPoly::from_i64(&[1, -1, 1, -1, 1])
        );
        assert_eq!(genus_positive_braid(&b(1)).unwrap(), 0);
        assert_eq!(genus_positive_braid(&b(3)).unwrap(), 1);
        assert_eq!(genus_positive_braid(&b(5)).unwrap(), 2);
        assert!(matches!(alexander_from_braid(&b(2)), Err(KnotError::NotAKnot(2))));
        assert!(genus_positive_braid(&b(2)).is_err());
    }

    #[test]
    fn lorenz_braids_of_short_words() {
        let lb = |s: &str| lorenz_braid(&s.parse().unwrap()).unwrap();
        assert_eq!(lb("LR"), Braid::new(2, vec![1]).unwrap());
        assert_eq!(lb("R").strands, 1);
        let t = lb("LRLRR");
        assert_eq!((t.strands, t.crossings()), (5, 6));
        assert_eq!(alexander_from_braid(&t).unwrap(), AlexanderPoly::trefoil());
        assert!(lorenz_braid(&"LRLR".parse().unwrap()).is_err());
    }

    #[test]
    fn three_strand_trefoil() {
        // σ₁σ₂σ₁σ₂ closes to the trefoil
        let b = Braid::new(3, vec![1, 2, 1, 2]).unwrap();
        assert_eq!(alexander_from_braid(&b).unwrap(), AlexanderPoly::trefoil());
    }
}

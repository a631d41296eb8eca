//! Planar diagrams as PD codes, the crossing-matrix Alexander polynomial and
//! Seifert-circle genus.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::braid::Braid;
use super::poly::{determinant, Poly, PolyMatrix};
use super::{AlexanderPoly, KnotError};

/// One crossing. `pd = [i, j, k, l]` lists the edge labels counterclockwise
/// starting from the incoming under-edge, so the under-strand runs i → k.
/// For `sign = +1` the over-strand runs l → j, for `sign = −1` it runs j → l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub pd: [usize; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> usize {
        self.pd[0]
    }

    pub fn under_out(&self) -> usize {
        self.pd[2]
    }

    pub fn over_in(&self) -> usize {
        if self.sign > 0 {
            self.pd[3]
        } else {
            self.pd[1]
        }
    }

    pub fn over_out(&self) -> usize {
        if self.sign > 0 {
            self.pd[1]
        } else {
            self.pd[3]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct KnotDiagram {
    pub crossings: Vec<Crossing>,
    /// Components with no crossings at all (circles disjoint from the rest).
    #[serde(default)]
    pub free_loops: usize,
}

/// For each edge: (crossing, slot) where it enters a crossing, and where it
/// leaves one. Slots: 0 under, 1 over.
struct Incidence {
    head: HashMap<usize, (usize, u8)>,
    tail: HashMap<usize, (usize, u8)>,
}

impl KnotDiagram {
    pub fn unknot() -> Self {
        Self { crossings: Vec::new(), free_loops: 1 }
    }

    pub fn from_pd(pd: &[[usize; 4]], signs: &[i8]) -> Result<Self, KnotError> {
        if pd.len() != signs.len() {
            return Err(KnotError::BadDiagram("sign count differs from crossing count".into()));
        }
        let crossings = pd.iter().zip(signs).map(|(&pd, &sign)| Crossing { pd, sign }).collect();
        let d = Self { crossings, free_loops: 0 };
        d.validate()?;
        Ok(d)
    }

    fn incidence(&self) -> Result<Incidence, KnotError> {
        let mut head = HashMap::new();
        let mut tail = HashMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            if c.sign != 1 && c.sign != -1 {
                return Err(KnotError::BadDiagram(format!("crossing {x} has sign {}", c.sign)));
            }
            for (e, slot, into) in [
                (c.under_in(), 0u8, true),
                (c.under_out(), 0, false),
                (c.over_in(), 1, true),
                (c.over_out(), 1, false),
            ] {
                let map = if into { &mut head } else { &mut tail };
                if map.insert(e, (x, slot)).is_some() {
                    return Err(KnotError::BadDiagram(format!(
                        "edge {e} {} more than one crossing",
                        if into { "enters" } else { "leaves" }
                    )));
                }
            }
        }
        Ok(Incidence { head, tail })
    }

    /// Every label appears exactly twice, once entering and once leaving a
    /// crossing.
    pub fn validate(&self) -> Result<(), KnotError> {
        let inc = self.incidence()?;
        for e in inc.head.keys() {
            if !inc.tail.contains_key(e) {
                return Err(KnotError::BadDiagram(format!("edge {e} never leaves a crossing")));
            }
        }
        if inc.head.len() != inc.tail.len() {
            return Err(KnotError::BadDiagram("edge count mismatch".into()));
        }
        Ok(())
    }

    /// Number of link components.
    pub fn components(&self) -> Result<usize, KnotError> {
        let inc = self.incidence()?;
        let next = |e: usize| -> usize {
            let (x, slot) = inc.head[&e];
            let c = &self.crossings[x];
            if slot == 0 {
                c.under_out()
            } else {
                c.over_out()
            }
        };
        let mut seen = std::collections::HashSet::new();
        let mut comps = self.free_loops;
        let mut edges: Vec<usize> = inc.head.keys().copied().collect();
        edges.sort_unstable();
        for e0 in edges {
            if seen.contains(&e0) {
                continue;
            }
            comps += 1;
            let mut e = e0;
            while seen.insert(e) {
                e = next(e);
            }
        }
        Ok(comps)
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Closure of a braid drawn bottom to top, strands at positions 0..n.
    pub fn from_braid(b: &Braid, signs_positive: bool) -> Self {
        let n = b.strands;
        let mut current: Vec<usize> = (0..n).collect();
        let mut next = n;
        let mut crossings = Vec::new();
        for &g in &b.word {
            let (l, r) = (g - 1, g);
            let (in_left, in_right) = (current[l], current[r]);
            let (out_l, out_r) = (next, next + 1);
            next += 2;
            // Positive: the strand from the left goes over to the right.
            // Negative: the strand from the right goes over to the left.
            let c = if signs_positive {
                Crossing { pd: [in_right, out_r, out_l, in_left], sign: 1 }
            } else {
                Crossing { pd: [in_left, in_right, out_r, out_l], sign: -1 }
            };
            crossings.push(c);
            current[l] = out_l;
            current[r] = out_r;
        }
        // Close up: the final label at position p is the starting label p.
        let rename: HashMap<usize, usize> = current.iter().enumerate().map(|(p, &e)| (e, p)).collect();
        for c in &mut crossings {
            for e in &mut c.pd {
                if let Some(&p) = rename.get(e) {
                    *e = p;
                }
            }
        }
        let touched: std::collections::HashSet<usize> =
            crossings.iter().flat_map(|c| c.pd).collect();
        // Strands with no crossings are loops when their position is fixed.
        let perm = b.permutation();
        let free_loops = (0..n).filter(|&p| perm[p] == p && !touched.contains(&p)).count();
        Self { crossings, free_loops }
    }
}

/// Alexander polynomial from the Wirtinger/Fox crossing matrix with one row
/// and one column deleted.
pub fn alexander_from_diagram(d: &KnotDiagram) -> Result<AlexanderPoly, KnotError> {
    d.validate()?;
    let comps = d.components()?;
    if comps != 1 {
        return Err(KnotError::NotAKnot(comps));
    }
    let n = d.crossings.len();
    if n == 0 {
        return Ok(AlexanderPoly::unknot());
    }
    // Arcs: edges joined through over-passes.
    let mut labels: Vec<usize> = d.crossings.iter().flat_map(|c| c.pd).collect();
    labels.sort_unstable();
    labels.dedup();
    let idx: HashMap<usize, usize> = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in &d.crossings {
        let a = find(&mut parent, idx[&c.over_in()]);
        let b = find(&mut parent, idx[&c.over_out()]);
        parent[a] = b;
    }
    let mut arc_of = HashMap::new();
    for e in 0..labels.len() {
        let r = find(&mut parent, e);
        let next = arc_of.len();
        arc_of.entry(r).or_insert(next);
    }
    let arc = |e: usize, parent: &mut Vec<usize>| arc_of[&find(parent, idx[&e])];
    if arc_of.len() != n {
        return Err(KnotError::BadDiagram(format!("{} arcs for {n} crossings", arc_of.len())));
    }
    let one_minus_t = Poly::from_i64(&[1, -1]);
    let mut m: PolyMatrix = vec![vec![Poly::zero(); n]; n];
    for (row, c) in d.crossings.iter().enumerate() {
        let k = arc(c.over_in(), &mut parent);
        let i = arc(c.under_in(), &mut parent);
        let j = arc(c.under_out(), &mut parent);
        let (ci, cj) = if c.sign > 0 {
            (Poly::t(), Poly::constant(-1))
        } else {
            (Poly::constant(-1), Poly::t())
        };
        m[row][k] = &m[row][k] + &one_minus_t;
        m[row][i] = &m[row][i] + &ci;
        m[row][j] = &m[row][j] + &cj;
    }
    let minor: PolyMatrix = m[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
    Ok(AlexanderPoly::new(&determinant(&minor)))
}

/// Number of Seifert circles from the oriented smoothing.
pub fn seifert_circles(d: &KnotDiagram) -> Result<usize, KnotError> {
    d.validate()?;
    let inc_head: HashMap<usize, (usize, u8)> = {
        let mut h = HashMap::new();
        for (x, c) in d.crossings.iter().enumerate() {
            h.insert(c.under_in(), (x, 0u8));
            h.insert(c.over_in(), (x, 1u8));
        }
        h
    };
    // Smoothing joins each incoming edge to the outgoing edge of the other strand.
    let next = |e: usize| {
        let (x, slot) = inc_head[&e];
        let c = &d.crossings[x];
        if slot == 0 {
            c.over_out()
        } else {
            c.under_out()
        }
    };
    let mut keys: Vec<usize> = inc_head.keys().copied().collect();
    keys.sort_unstable();
    let mut seen = std::collections::HashSet::new();
    let mut circles = d.free_loops;
    for e0 in keys {
        if seen.contains(&e0) {
            continue;
        }
        circles += 1;
        let mut e = e0;
        while seen.insert(e) {
            e = next(e);
        }
    }
    Ok(circles)
}

/// Genus of the canonical Seifert surface, (c − s + 1)/2.
pub fn seifert_genus(d: &KnotDiagram) -> Result<i64, KnotError> {
    let s = seifert_circles(d)? as i64;
    let v = d.crossings.len() as i64 - s + 1;
    if v % 2 != 0 {
        return Err(KnotError::Parity(v));
    }
    Ok(v / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_pd() -> KnotDiagram {
        KnotDiagram::from_pd(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]], &[1, 1, 1]).unwrap()
    }

    #[test]
    fn textbook_trefoil() {
        let d = trefoil_pd();
        assert_eq!(d.components().unwrap(), 1);
        assert_eq!(alexander_from_diagram(&d).unwrap(), AlexanderPoly::trefoil());
        assert_eq!(seifert_genus(&d).unwrap(), 1);
    }

    #[test]
    fn figure_eight() {
        let d = KnotDiagram::from_pd(
            &[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]],
            &[1, 1, -1, -1],
        )
        .unwrap();
        assert_eq!(alexander_from_diagram(&d).unwrap(), AlexanderPoly::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn unknot_and_bad_codes() {
        assert_eq!(alexander_from_diagram(&KnotDiagram::unknot()).unwrap(), AlexanderPoly::unknot());
        assert!(KnotDiagram::from_pd(&[[1, 2, 3, 4]], &[1]).is_err());
    }

    #[test]
    fn braid_closure_diagrams() {
        for k in [1usize, 3, 5, 7] {
            let b = Braid::new(2, vec![1; k]).unwrap();
            let d = KnotDiagram::from_braid(&b, true);
            assert_eq!(d.components().unwrap(), 1);
            let a = alexander_from_diagram(&d).unwrap();
            assert_eq!(a, super::super::alexander_from_braid(&b).unwrap());
            assert_eq!(seifert_genus(&d).unwrap(), (k as i64 - 1) / 2);
            let mirror = KnotDiagram::from_braid(&b, false);
            assert_eq!(alexander_from_diagram(&mirror).unwrap(), a);
        }
    }
}

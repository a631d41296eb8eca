//! Integer polynomials in one variable with arbitrary-precision coefficients,
//! and the determinant of a polynomial matrix by fraction-free elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Σ coeffs[k]·t^k, trailing zeros trimmed (the zero polynomial is empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(c)])
    }

    /// c·t^k
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::from(c);
        Self::from_coeffs(v)
    }

    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        let t = BigInt::from(t);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &t + c)
    }

    /// Exact quotient. Returns `None` if `d` does not divide `self` in Z[t].
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let lead = &d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n < dd + 1 {
            return None;
        }
        let mut q = vec![BigInt::zero(); n - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd];
            if c.is_zero() {
                continue;
            }
            let (qq, r) = c.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &qq * di;
            }
            q[k] = qq;
        }
        rem.iter().all(Zero::is_zero).then(|| Poly::from_coeffs(q))
    }

    /// Divides out the largest power of t and makes the leading coefficient
    /// positive. This is the representative of the class modulo ±t^k.
    pub fn normalized(&self) -> Poly {
        let first = self.coeffs.iter().position(|c| !c.is_zero());
        let Some(first) = first else { return Poly::zero() };
        let mut v: Vec<BigInt> = self.coeffs[first..].to_vec();
        if v.last().is_some_and(|c| c.is_negative()) {
            for c in &mut v {
                *c = -c.clone();
            }
        }
        Poly::from_coeffs(v)
    }

    /// t^deg·p(1/t) equals p, i.e. the coefficient list is a palindrome.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Coefficients as i64, if they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = o.coeffs.get(i).cloned().unwrap_or_default();
                a + b
            })
            .collect();
        Poly::from_coeffs(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Square matrix of polynomials, row-major.
pub type PolyMatrix = Vec<Vec<Poly>>;

/// Determinant by Bareiss elimination; every division is exact in Z[t].
pub fn determinant(m: &PolyMatrix) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Poly::zero();
            };
            a.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a = Poly::from_i64(&[1, -1, 1]);
        let b = Poly::from_i64(&[1, 1]);
        assert_eq!(&a * &b, Poly::from_i64(&[1, 0, 0, 1]));
        assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        assert_eq!(Poly::from_i64(&[1, 0, 1]).div_exact(&b), None);
        assert_eq!(a.to_string(), "t^2 - t + 1");
        assert_eq!(Poly::from_i64(&[0, 0, -1, 3, -1]).normalized(), Poly::from_i64(&[-1, 3, -1]).normalized());
        assert_eq!(Poly::from_i64(&[0, 0, -1, 3, -1]).normalized().to_string(), "t^2 - 3t + 1");
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let p = |c: &[i64]| Poly::from_i64(c);
        let m = vec![
            vec![p(&[1, -1]), p(&[0, 1]), p(&[-1])],
            vec![p(&[-1]), p(&[1, -1]), p(&[0, 1])],
            vec![p(&[0, 1]), p(&[-1]), p(&[1, -1])],
        ];
        let cof = |r: usize, c: usize| {
            let minor: PolyMatrix = (0..3)
                .filter(|&i| i != r)
                .map(|i| (0..3).filter(|&j| j != c).map(|j| m[i][j].clone()).collect())
                .collect();
            &(&minor[0][0] * &minor[1][1]) - &(&minor[0][1] * &minor[1][0])
        };
        let mut expect = Poly::zero();
        for (c, entry) in m[0].iter().enumerate() {
            let term = entry * &cof(0, c);
            expect = if c % 2 == 0 { &expect + &term } else { &expect - &term };
        }
        assert_eq!(determinant(&m), expect);
    }

    #[test]
    fn singular_and_pivoting() {
        let m = vec![vec![Poly::zero(), Poly::one()], vec![Poly::one(), Poly::zero()]];
        assert_eq!(determinant(&m), Poly::constant(-1));
        let s = vec![vec![Poly::t(), Poly::t()], vec![Poly::one(), Poly::one()]];
        assert!(determinant(&s).is_zero());
    }
}

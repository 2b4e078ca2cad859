//! Monomials in `x_0..x_N` with the graded reverse lexicographic order.

use smallvec::SmallVec;
use std::cmp::Ordering;
use std::fmt;

/// Exponent vector with cached total degree. The `Ord` impl is grevlex, so
/// `max` picks lead terms and sorted containers iterate in term order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn new(exps: impl Into<SmallVec<[u16; 8]>>) -> Self {
        let exps = exps.into();
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { deg, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(SmallVec::from_elem(0u16, nvars))
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut exps = SmallVec::from_elem(0u16, nvars);
        exps[i] = 1;
        Monomial::new(exps)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps: SmallVec<[u16; 8]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, if divisible.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let exps: SmallVec<[u16; 8]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a - b)
            .collect();
        Some(Monomial { deg: self.deg - other.deg, exps })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 8]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::new(exps)
    }

    pub fn is_coprime_to(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic: higher degree wins; on equal degree the
    /// monomial with the smaller exponent at the rightmost differing variable
    /// is the larger one.
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.nvars(), other.nvars());
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.exps.iter().zip(&other.exps).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of the given degree in `nvars` variables, descending grevlex.
pub fn monomials_of_degree(nvars: usize, deg: i64) -> Vec<Monomial> {
    if deg < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = SmallVec::from_elem(0u16, nvars);
    gen_rec(&mut out, &mut cur, 0, deg as u16);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn gen_rec(out: &mut Vec<Monomial>, cur: &mut SmallVec<[u16; 8]>, pos: usize, rem: u16) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(Monomial::new(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=rem).rev() {
        cur[pos] = e;
        gen_rec(out, cur, pos + 1, rem - e);
        cur[pos] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::new(SmallVec::from_slice(e))
    }

    #[test]
    fn grevlex_basics() {
        // x0 > x1 > x2
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[0, 1, 0]) > m(&[0, 0, 1]));
        // degree dominates
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
        // x0^2 > x1*x2 in grevlex
        assert!(m(&[2, 0, 0]) > m(&[0, 1, 1]));
        // x1^3 > x0^2*x2 (rightmost difference at x2)
        assert!(m(&[0, 3, 0]) > m(&[2, 0, 1]));
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 1, 0]);
        assert!(b.divides(&a));
        assert!(!a.divides(&b));
        assert_eq!(a.checked_div(&b), Some(m(&[1, 0, 0])));
        assert_eq!(a.lcm(&m(&[0, 2, 1])), m(&[2, 2, 1]));
        assert!(m(&[1, 0, 0]).is_coprime_to(&m(&[0, 2, 1])));
        assert!(!m(&[1, 1, 0]).is_coprime_to(&m(&[0, 2, 1])));
    }

    #[test]
    fn degree_enumeration() {
        let ms = monomials_of_degree(3, 3);
        assert_eq!(ms.len(), 10); // C(5,2)
        // strictly descending
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(ms[0], m(&[3, 0, 0]));
        assert_eq!(ms[9], m(&[0, 0, 3]));
        assert!(monomials_of_degree(3, -1).is_empty());
        assert_eq!(monomials_of_degree(4, 3).len(), 20); // C(6,3)
    }
}

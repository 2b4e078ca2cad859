//! Elements of graded free modules `⊕_i S(-a_i)`.

use crate::field::{FieldSpec, Scalar};
use crate::monomial::Monomial;
use crate::poly::HPoly;
use crate::{Error, Result};
use std::fmt;

/// The ambient graded free module: ring data plus one twist per component.
/// A component polynomial of degree `e` sitting in slot `i` has total degree
/// `e + twists[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAmbient {
    pub field: FieldSpec,
    pub nvars: usize,
    pub twists: Vec<i64>,
}

impl FreeAmbient {
    pub fn new(field: FieldSpec, nvars: usize, twists: Vec<i64>) -> Self {
        FreeAmbient { field, nvars, twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn zero_elem(&self, deg: i64) -> FreeModuleElem {
        let comps = self
            .twists
            .iter()
            .map(|a| HPoly::zero(self.field, self.nvars, deg - a))
            .collect();
        FreeModuleElem { comps, deg }
    }

    /// Wraps component polynomials, checking module homogeneity.
    pub fn elem(&self, comps: Vec<HPoly>) -> Result<FreeModuleElem> {
        if comps.len() != self.rank() {
            return Err(Error::RingMismatch(format!(
                "{} components for ambient of rank {}",
                comps.len(),
                self.rank()
            )));
        }
        let mut deg = None;
        for (c, a) in comps.iter().zip(&self.twists) {
            if c.field() != self.field || c.nvars() != self.nvars {
                return Err(Error::RingMismatch("component from a different ring".into()));
            }
            if c.is_zero() {
                continue;
            }
            let d = c.degree() + a;
            match deg {
                None => deg = Some(d),
                Some(existing) if existing == d => {}
                Some(existing) => {
                    return Err(Error::Homogeneity(format!(
                        "module element mixes total degrees {existing} and {d}"
                    )))
                }
            }
        }
        let deg = deg.unwrap_or(0);
        // retag zero components so every slot agrees with the element degree
        let comps = comps
            .into_iter()
            .zip(&self.twists)
            .map(|(c, a)| {
                if c.is_zero() {
                    HPoly::zero(self.field, self.nvars, deg - a)
                } else {
                    c
                }
            })
            .collect();
        Ok(FreeModuleElem { comps, deg })
    }

    /// Rank-1 ambient for ideal computations.
    pub fn for_ideal(field: FieldSpec, nvars: usize) -> Self {
        FreeAmbient::new(field, nvars, vec![0])
    }
}

/// A homogeneous element of the ambient free module. Lead terms use the
/// position-over-term order: lower component index wins, ties broken by
/// grevlex on the monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModuleElem {
    comps: Vec<HPoly>,
    deg: i64,
}

impl FreeModuleElem {
    pub fn from_poly(p: HPoly) -> Self {
        let deg = p.degree();
        FreeModuleElem { comps: vec![p], deg }
    }

    pub fn components(&self) -> &[HPoly] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &HPoly {
        &self.comps[i]
    }

    pub fn into_components(self) -> Vec<HPoly> {
        self.comps
    }

    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Lead term `(component, monomial, coefficient)` in the
    /// position-over-term order.
    pub fn lead(&self) -> Option<(usize, &Monomial, &Scalar)> {
        self.comps
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let (m, s) = c.lead_term().expect("nonzero polynomial");
                (i, m, s)
            })
    }

    /// `self - c * mono * other`, componentwise.
    pub fn sub_scaled(&self, c: &Scalar, mono: &Monomial, other: &FreeModuleElem) -> FreeModuleElem {
        debug_assert_eq!(self.comps.len(), other.comps.len());
        let comps: Vec<HPoly> = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.sub_scaled(c, mono, b))
            .collect();
        FreeModuleElem { comps, deg: self.deg }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> FreeModuleElem {
        let comps: Vec<HPoly> = self.comps.iter().map(|p| p.mul_term(mono, c)).collect();
        FreeModuleElem { comps, deg: self.deg + mono.degree() as i64 }
    }

    pub fn monic(&self, field: FieldSpec) -> FreeModuleElem {
        match self.lead() {
            None => self.clone(),
            Some((_, _, c)) => {
                if field.is_one(c) {
                    self.clone()
                } else {
                    let inv = field.inv(c).expect("lead coefficient nonzero");
                    let comps = self.comps.iter().map(|p| p.scalar_mul(&inv)).collect();
                    FreeModuleElem { comps, deg: self.deg }
                }
            }
        }
    }

    pub fn neg(&self) -> FreeModuleElem {
        FreeModuleElem { comps: self.comps.iter().map(|p| p.neg()).collect(), deg: self.deg }
    }
}

impl fmt::Display for FreeModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GF: FieldSpec = FieldSpec::Fp(32003);

    #[test]
    fn homogeneity_with_twists() {
        let amb = FreeAmbient::new(GF, 3, vec![1, 2]);
        let a = HPoly::parse("x0^2", GF, 3).unwrap();
        let b = HPoly::parse("x1", GF, 3).unwrap();
        let e = amb.elem(vec![a.clone(), b]).unwrap();
        assert_eq!(e.degree(), 3);
        let bad = amb.elem(vec![a.clone(), a]);
        assert!(bad.is_err());
    }

    #[test]
    fn pot_lead() {
        let amb = FreeAmbient::new(GF, 3, vec![0, 0]);
        let z = HPoly::zero(GF, 3, 1);
        let x2 = HPoly::var(GF, 2, 3);
        let e = amb.elem(vec![z, x2]).unwrap();
        let (comp, m, _) = e.lead().unwrap();
        assert_eq!(comp, 1);
        assert_eq!(m, &Monomial::var(2, 3));

        let x0 = HPoly::var(GF, 0, 3);
        let x1 = HPoly::var(GF, 1, 3);
        let e2 = amb.elem(vec![x1, x0]).unwrap();
        assert_eq!(e2.lead().unwrap().0, 0);
    }
}

//! Homogeneous multivariate polynomials over an exact field.

use crate::field::{FieldSpec, Scalar};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::{Error, Result};
use rand_core::{RngCore, SeedableRng};
use std::collections::BTreeMap;
use std::fmt;

/// A homogeneous polynomial. Terms are kept sorted in descending grevlex
/// order with no zero coefficients; the zero polynomial has empty terms and
/// carries a degree tag.
#[derive(Debug, Clone)]
pub struct HPoly {
    field: FieldSpec,
    nvars: usize,
    deg: i64,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for HPoly {
    fn eq(&self, other: &Self) -> bool {
        // zero polynomials of different degree tags are the same element
        self.field == other.field
            && self.nvars == other.nvars
            && self.terms == other.terms
            && (self.is_zero() || self.deg == other.deg)
    }
}

impl Eq for HPoly {}

impl HPoly {
    pub fn zero(field: FieldSpec, nvars: usize, deg: i64) -> Self {
        HPoly { field, nvars, deg, terms: Vec::new() }
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        HPoly::term(field, nvars, Monomial::one(nvars), field.one())
    }

    pub fn var(field: FieldSpec, i: usize, nvars: usize) -> Self {
        HPoly::term(field, nvars, Monomial::var(i, nvars), field.one())
    }

    pub fn term(field: FieldSpec, nvars: usize, mono: Monomial, coeff: Scalar) -> Self {
        assert_eq!(mono.nvars(), nvars);
        let deg = mono.degree() as i64;
        if field.is_zero(&coeff) {
            return HPoly::zero(field, nvars, deg);
        }
        HPoly { field, nvars, deg, terms: vec![(mono, coeff)] }
    }

    /// Builds a polynomial from arbitrary (monomial, coefficient) pairs,
    /// canonicalizing and enforcing homogeneity.
    pub fn from_terms(
        field: FieldSpec,
        nvars: usize,
        deg: i64,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::RingMismatch(format!(
                    "monomial in {} variables, ring has {}",
                    m.nvars(),
                    nvars
                )));
            }
            if field.is_zero(&c) {
                continue;
            }
            if m.degree() as i64 != deg {
                return Err(Error::Homogeneity(format!(
                    "term {m} has degree {}, expected {deg}",
                    m.degree()
                )));
            }
            let entry = map.entry(m).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        let mut terms: Vec<(Monomial, Scalar)> =
            map.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.reverse();
        Ok(HPoly { field, nvars, deg, terms })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn lead_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn coeff_of(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    fn check_same_ring(&self, other: &HPoly) -> Result<()> {
        if self.field != other.field || self.nvars != other.nvars {
            return Err(Error::RingMismatch(format!(
                "({}, {} vars) vs ({}, {} vars)",
                self.field, self.nvars, other.field, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HPoly) -> Result<HPoly> {
        self.check_same_ring(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.deg != other.deg {
            return Err(Error::Homogeneity(format!(
                "cannot add degree {} to degree {}",
                self.deg, other.deg
            )));
        }
        Ok(self.merged(other, None))
    }

    /// `self - c * mono * other`; the workhorse of polynomial reduction.
    /// Degrees must line up: `deg self = deg other + deg mono` (or a zero side).
    pub fn sub_scaled(&self, c: &Scalar, mono: &Monomial, other: &HPoly) -> HPoly {
        debug_assert_eq!(self.field, other.field);
        let scaled: Vec<(Monomial, Scalar)> = other
            .terms
            .iter()
            .map(|(m, k)| (m.mul(mono), self.field.neg(&self.field.mul(k, c))))
            .collect();
        let deg = if self.is_zero() {
            other.deg + mono.degree() as i64
        } else {
            self.deg
        };
        let rhs = HPoly { field: self.field, nvars: self.nvars, deg, terms: scaled };
        debug_assert!(self.is_zero() || rhs.is_zero() || self.deg == rhs.deg);
        self.merged(&rhs, Some(deg))
    }

    fn merged(&self, other: &HPoly, deg: Option<i64>) -> HPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match mb.cmp(ma) {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = self.field.add(ca, cb);
                    if !self.field.is_zero(&s) {
                        out.push((ma.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        HPoly {
            field: self.field,
            nvars: self.nvars,
            deg: deg.unwrap_or(self.deg),
            terms: out,
        }
    }

    pub fn neg(&self) -> HPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.neg(c)))
            .collect();
        HPoly { terms, ..self.clone() }
    }

    pub fn sub(&self, other: &HPoly) -> Result<HPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &HPoly) -> Result<HPoly> {
        self.check_same_ring(other)?;
        let deg = self.deg + other.deg;
        if self.is_zero() || other.is_zero() {
            return Ok(HPoly::zero(self.field, self.nvars, deg));
        }
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let p = self.field.mul(ca, cb);
                let entry = map.entry(m).or_insert_with(|| self.field.zero());
                *entry = self.field.add(entry, &p);
            }
        }
        let mut terms: Vec<(Monomial, Scalar)> =
            map.into_iter().filter(|(_, c)| !self.field.is_zero(c)).collect();
        terms.reverse();
        Ok(HPoly { field: self.field, nvars: self.nvars, deg, terms })
    }

    pub fn scalar_mul(&self, c: &Scalar) -> HPoly {
        if self.field.is_zero(c) {
            return HPoly::zero(self.field, self.nvars, self.deg);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), self.field.mul(k, c)))
            .collect();
        HPoly { terms, ..self.clone() }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> HPoly {
        let deg = self.deg + mono.degree() as i64;
        if self.field.is_zero(c) {
            return HPoly::zero(self.field, self.nvars, deg);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.mul(mono), self.field.mul(k, c)))
            .collect();
        HPoly { field: self.field, nvars: self.nvars, deg, terms }
    }

    /// Scales to lead coefficient one.
    pub fn monic(&self) -> HPoly {
        match self.lead_term() {
            None => self.clone(),
            Some((_, c)) => {
                if self.field.is_one(c) {
                    self.clone()
                } else {
                    let inv = self.field.inv(c).expect("lead coefficient nonzero");
                    self.scalar_mul(&inv)
                }
            }
        }
    }

    pub fn partial(&self, var: usize) -> HPoly {
        let deg = (self.deg - 1).max(0);
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let k = self.field.mul(c, &self.field.from_i64(e as i64));
            if self.field.is_zero(&k) {
                continue;
            }
            let mut exps = smallvec::SmallVec::<[u16; 8]>::from_slice(m.exps());
            exps[var] -= 1;
            terms.push((Monomial::new(exps), k));
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        HPoly { field: self.field, nvars: self.nvars, deg, terms }
    }

    /// Substitutes `forms[i]` for variable `i`. All forms must live in a
    /// common target ring and share one degree `d`; the result is homogeneous
    /// of degree `deg(self) * d`.
    pub fn substitute(&self, forms: &[HPoly]) -> Result<HPoly> {
        if forms.len() != self.nvars {
            return Err(Error::RingMismatch(format!(
                "{} forms supplied for {} variables",
                forms.len(),
                self.nvars
            )));
        }
        let first = &forms[0];
        let d = first.degree();
        for f in forms {
            first.check_same_ring(f)?;
            if f.degree() != d {
                return Err(Error::Homogeneity(format!(
                    "substitution forms of mixed degrees {} and {}",
                    d,
                    f.degree()
                )));
            }
            if f.field != self.field {
                return Err(Error::RingMismatch("substitution across fields".into()));
            }
        }
        let out_deg = self.deg * d;
        let mut acc = HPoly::zero(first.field, first.nvars, out_deg);
        // cache powers of each form up to the largest exponent used
        let mut powers: Vec<Vec<HPoly>> = forms
            .iter()
            .map(|f| vec![HPoly::one(f.field, f.nvars), f.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut prod = HPoly::term(first.field, first.nvars, Monomial::one(first.nvars), c.clone());
            for (i, pows) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                while pows.len() <= e {
                    let next = pows.last().unwrap().mul(&forms[i])?;
                    pows.push(next);
                }
                if e > 0 {
                    prod = prod.mul(&pows[e])?;
                }
            }
            // prod is homogeneous of degree deg(m) * d = out_deg
            let prod = HPoly { deg: out_deg, ..prod };
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }

    /// Dense random polynomial: every monomial of the degree present, with a
    /// nonzero coefficient drawn from a stream seeded by `seed`.
    pub fn random(field: FieldSpec, degree: i64, nvars: usize, seed: u64) -> HPoly {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Self::random_from_rng(field, degree, nvars, &mut rng)
    }

    pub fn random_from_rng(
        field: FieldSpec,
        degree: i64,
        nvars: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> HPoly {
        assert!(degree >= 1, "random polynomials have degree >= 1");
        let monos = monomials_of_degree(nvars, degree);
        let terms: Vec<(Monomial, Scalar)> = monos
            .into_iter()
            .map(|m| {
                let c = match field {
                    FieldSpec::Fp(p) => field.from_i64((1 + rng.next_u64() % (p - 1)) as i64),
                    FieldSpec::Rational => {
                        let v = (rng.next_u64() % 40) as i64 - 20;
                        field.from_i64(if v >= 0 { v + 1 } else { v })
                    }
                };
                (m, c)
            })
            .collect();
        HPoly { field, nvars, deg: degree, terms }
    }

    /// Parses the canonical text grammar: a signed sum of
    /// `coefficient*monomial` terms with `^` powers and `*` products.
    pub fn parse(text: &str, field: FieldSpec, nvars: usize) -> Result<HPoly> {
        parse_hpoly(text, field, nvars)
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = self.field.is_display_negative(c);
            let mag = if neg { self.field.neg(c) } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = self.field.is_one(&mag);
            if m.is_one() {
                write!(f, "{}", self.field.fmt_scalar(&mag))?;
            } else if coeff_is_one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", self.field.fmt_scalar(&mag))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Int(i64),
    Frac(i64, i64),
    Var(usize),
    Pow(u16),
}

fn lex(text: &str, nvars: usize) -> Result<Vec<Tok>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut toks = Vec::new();
    let read_uint = |i: &mut usize| -> Result<i64> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(Error::Parse(format!("expected digits at byte {start} in `{text}`")));
        }
        text[start..*i]
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("integer overflow in `{text}`")))
    };
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            b'-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            b'*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            b'^' => {
                i += 1;
                let e = read_uint(&mut i)?;
                if e < 0 || e > u16::MAX as i64 {
                    return Err(Error::Parse(format!("exponent {e} out of range")));
                }
                toks.push(Tok::Pow(e as u16));
            }
            b'x' => {
                i += 1;
                let v = read_uint(&mut i)?;
                if v < 0 || v as usize >= nvars {
                    return Err(Error::Parse(format!(
                        "variable x{v} out of range for {nvars} variables"
                    )));
                }
                toks.push(Tok::Var(v as usize));
            }
            b'0'..=b'9' => {
                let n = read_uint(&mut i)?;
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let d = read_uint(&mut i)?;
                    toks.push(Tok::Frac(n, d));
                } else {
                    toks.push(Tok::Int(n));
                }
            }
            c => {
                return Err(Error::Parse(format!(
                    "unexpected character `{}` in `{text}`",
                    c as char
                )))
            }
        }
    }
    Ok(toks)
}

fn parse_hpoly(text: &str, field: FieldSpec, nvars: usize) -> Result<HPoly> {
    let toks = lex(text, nvars)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms: Vec<(Monomial, Scalar)> = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < toks.len() {
        let mut sign = 1i64;
        if !first {
            match toks[i] {
                Tok::Plus => i += 1,
                Tok::Minus => {
                    sign = -1;
                    i += 1;
                }
                _ => return Err(Error::Parse(format!("expected + or - in `{text}`"))),
            }
        } else if toks[i] == Tok::Minus {
            sign = -1;
            i += 1;
        } else if toks[i] == Tok::Plus {
            i += 1;
        }
        first = false;

        let mut coeff = field.from_i64(sign);
        let mut exps = smallvec::SmallVec::<[u16; 8]>::from_elem(0u16, nvars);
        let mut saw_factor;
        loop {
            match toks.get(i) {
                Some(Tok::Int(n)) => {
                    coeff = field.mul(&coeff, &field.from_i64(*n));
                    i += 1;
                    saw_factor = true;
                }
                Some(Tok::Frac(n, d)) => {
                    coeff = field.mul(&coeff, &field.from_ratio(*n, *d)?);
                    i += 1;
                    saw_factor = true;
                }
                Some(Tok::Var(v)) => {
                    let v = *v;
                    i += 1;
                    let mut e = 1u16;
                    if let Some(Tok::Pow(p)) = toks.get(i) {
                        e = *p;
                        i += 1;
                    }
                    exps[v] = exps[v].checked_add(e).ok_or_else(|| {
                        Error::Parse(format!("exponent overflow in `{text}`"))
                    })?;
                    saw_factor = true;
                }
                _ => return Err(Error::Parse(format!("expected a factor in `{text}`"))),
            }
            if let Some(Tok::Star) = toks.get(i) {
                i += 1;
                continue;
            }
            break;
        }
        if !saw_factor {
            return Err(Error::Parse(format!("empty term in `{text}`")));
        }
        terms.push((Monomial::new(exps), coeff));
    }
    let nonzero: Vec<&(Monomial, Scalar)> =
        terms.iter().filter(|(_, c)| !field.is_zero(c)).collect();
    let deg = match nonzero.first() {
        None => 0,
        Some((m, _)) => m.degree() as i64,
    };
    for (m, _) in &nonzero {
        if m.degree() as i64 != deg {
            return Err(Error::Homogeneity(format!(
                "`{text}` mixes degrees {} and {}",
                deg,
                m.degree()
            )));
        }
    }
    HPoly::from_terms(field, nvars, deg, terms.into_iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GF: FieldSpec = FieldSpec::Fp(32003);

    fn p(s: &str, n: usize) -> HPoly {
        HPoly::parse(s, GF, n).unwrap()
    }

    #[test]
    fn add_and_mul_examples() {
        let x0 = HPoly::var(GF, 0, 3);
        let x1 = HPoly::var(GF, 1, 3);
        assert_eq!(x0.add(&x1).unwrap(), p("x0 + x1", 3));

        let q = FieldSpec::Rational;
        let a = HPoly::parse("x0 + x1", q, 3).unwrap();
        let b = HPoly::parse("x0 - x1", q, 3).unwrap();
        assert_eq!(a.mul(&b).unwrap(), HPoly::parse("x0^2 - x1^2", q, 3).unwrap());

        // over GF(2) the cross terms vanish
        let f2 = FieldSpec::gf(2).unwrap();
        let s = HPoly::parse("x0 + x1", f2, 3).unwrap();
        assert_eq!(s.mul(&s).unwrap(), HPoly::parse("x0^2 + x1^2", f2, 3).unwrap());
    }

    #[test]
    fn degree_mismatch_rejected() {
        let a = p("x0", 3);
        let b = p("x0^2", 3);
        assert!(matches!(a.add(&b), Err(Error::Homogeneity(_))));
        // adding zero of any tag is fine
        let z = HPoly::zero(GF, 3, 5);
        assert_eq!(a.add(&z).unwrap(), a);
    }

    #[test]
    fn parse_examples() {
        let f = p("x0^2 + 3*x1*x2", 3);
        assert_eq!(f.degree(), 2);
        assert_eq!(f.num_terms(), 2);
        assert!(matches!(
            HPoly::parse("x0 + x1^2", GF, 3),
            Err(Error::Homogeneity(_))
        ));
        let g = p("-x2^3", 3);
        assert_eq!(g.degree(), 3);
        assert_eq!(g.lead_term().unwrap().1, &Scalar::Fp(32002));
        assert!(HPoly::parse("x3", GF, 3).is_err());
        assert!(HPoly::parse("x0 + + x1", GF, 3).is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in ["x0^2 + 3*x1*x2", "-x2^3", "x0*x1 - 2*x2^2", "0"] {
            for field in [GF, FieldSpec::Rational] {
                let f = HPoly::parse(s, field, 3).unwrap();
                let printed = f.to_string();
                let g = HPoly::parse(&printed, field, 3).unwrap();
                assert_eq!(f, g, "roundtrip failed for `{printed}`");
                assert_eq!(printed, g.to_string());
            }
        }
    }

    #[test]
    fn substitute_examples() {
        // identity coordinates
        let f = p("x0^2 + 3*x1*x2", 3);
        let id: Vec<HPoly> = (0..3).map(|i| HPoly::var(GF, i, 3)).collect();
        assert_eq!(f.substitute(&id).unwrap(), f);

        // coordinate permutation: y0*y1 with [x1, x0, x2] -> x0*x1
        let g = p("x0*x1", 3);
        let perm = vec![HPoly::var(GF, 1, 3), HPoly::var(GF, 0, 3), HPoly::var(GF, 2, 3)];
        assert_eq!(g.substitute(&perm).unwrap(), p("x0*x1", 3));

        // squares: y0^2 + y1*y2 -> x0^4 + x1^2*x2^2
        let h = p("x0^2 + x1*x2", 3);
        let sq = vec![p("x0^2", 3), p("x1^2", 3), p("x2^2", 3)];
        assert_eq!(h.substitute(&sq).unwrap(), p("x0^4 + x1^2*x2^2", 3));

        // mixed-degree forms rejected
        let bad = vec![p("x0", 3), p("x1^2", 3), p("x2", 3)];
        assert!(h.substitute(&bad).is_err());
    }

    #[test]
    fn substitute_is_degree_e_times_d() {
        let f = p("x0*x1^2", 3);
        let forms = vec![p("x0^2", 3), p("x1^2", 3), p("x2^2", 3)];
        let out = f.substitute(&forms).unwrap();
        assert_eq!(out.degree(), 6);
    }

    #[test]
    fn random_determinism_and_density() {
        let a = HPoly::random(GF, 1, 3, 42);
        let b = HPoly::random(GF, 1, 3, 42);
        assert_eq!(a, b);
        let c = HPoly::random(GF, 1, 3, 43);
        assert_ne!(a, c);
        // dense cubic in 4 variables has C(6,3) = 20 terms
        let d = HPoly::random(GF, 3, 4, 7);
        assert_eq!(d.num_terms(), 20);
        assert_eq!(d.degree(), 3);
    }

    #[test]
    fn partial_derivative() {
        let f = p("x0^3 + x0*x1^2", 3);
        assert_eq!(f.partial(0), p("3*x0^2 + x1^2", 3));
        assert_eq!(f.partial(2), HPoly::zero(GF, 3, 2));
        // characteristic kills exponents divisible by p
        let f3 = FieldSpec::gf(3).unwrap();
        let g = HPoly::parse("x0^3", f3, 2).unwrap();
        assert!(g.partial(0).is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn substitution_is_a_ring_map(sa in 0u64..1000, sb in 0u64..1000, sf in 0u64..1000) {
            let a = HPoly::random(GF, 2, 3, sa);
            let b = HPoly::random(GF, 2, 3, sb);
            let forms: Vec<HPoly> = (0..3)
                .map(|i| HPoly::random(GF, 2, 3, sf.wrapping_add(i)))
                .collect();
            let lhs_mul = a.mul(&b).unwrap().substitute(&forms).unwrap();
            let rhs_mul = a.substitute(&forms).unwrap().mul(&b.substitute(&forms).unwrap()).unwrap();
            prop_assert_eq!(lhs_mul, rhs_mul);
            let lhs_add = a.add(&b).unwrap().substitute(&forms).unwrap();
            let rhs_add = a.substitute(&forms).unwrap().add(&b.substitute(&forms).unwrap()).unwrap();
            prop_assert_eq!(lhs_add, rhs_add);
        }

        #[test]
        fn homogeneity_preserved(sa in 0u64..1000, sb in 0u64..1000) {
            let a = HPoly::random(GF, 2, 3, sa);
            let b = HPoly::random(GF, 3, 3, sb);
            let prod = a.mul(&b).unwrap();
            prop_assert_eq!(prod.degree(), 5);
            for (m, _) in prod.terms() {
                prop_assert_eq!(m.degree(), 5);
            }
        }

        #[test]
        fn rational_ops_agree_with_gf_after_reduction(sa in 0u64..1000, sb in 0u64..1000) {
            let q = FieldSpec::Rational;
            let a = HPoly::random(q, 2, 3, sa);
            let b = HPoly::random(q, 2, 3, sb);
            let prod = a.mul(&b).unwrap();
            let reduce = |f: &HPoly| -> HPoly {
                HPoly::from_terms(
                    GF,
                    3,
                    f.degree(),
                    f.terms().iter().map(|(m, c)| {
                        (m.clone(), FieldSpec::rat_to_fp(c, 32003).unwrap())
                    }),
                ).unwrap()
            };
            prop_assert_eq!(reduce(&prod), reduce(&a).mul(&reduce(&b)).unwrap());
        }
    }
}

//! Hilbert series numerators of monomial quotients and the associated
//! Hilbert polynomials with their binomial-basis expansion.

use crate::linalg::binom;
use crate::module::{FreeAmbient, FreeModuleElem};
use crate::monomial::Monomial;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// Numerator `h(t)` of the Hilbert series `h(t)/(1-t)^nvars` of the quotient
/// `F/m`, computed from the lead-term module of a Groebner basis. Lead terms
/// never mix components, so the quotient splits per slot.
pub fn quotient_numerator(ambient: &FreeAmbient, gb_gens: &[FreeModuleElem]) -> Vec<i64> {
    let mut memo: HashMap<Vec<Vec<u16>>, Vec<i64>> = HashMap::new();
    let mut acc: Vec<i64> = Vec::new();
    for (i, a) in ambient.twists.iter().enumerate() {
        assert!(*a >= 0, "negative ambient twists are not supported");
        let leads: Vec<Monomial> = gb_gens
            .iter()
            .filter_map(|g| {
                let (c, m, _) = g.lead()?;
                (c == i).then(|| m.clone())
            })
            .collect();
        let hn = monomial_numerator(&leads, ambient.nvars, &mut memo);
        add_shifted(&mut acc, &hn, *a as usize);
    }
    trim(&mut acc);
    acc
}

/// Hilbert numerator of `S/I` for a monomial ideal, by pivot recursion on the
/// most frequent variable, memoized on the minimal generating set.
pub fn monomial_numerator(
    gens: &[Monomial],
    nvars: usize,
    memo: &mut HashMap<Vec<Vec<u16>>, Vec<i64>>,
) -> Vec<i64> {
    let min = minimal_monomials(gens.to_vec());
    let key: Vec<Vec<u16>> = min.iter().map(|m| m.exps().to_vec()).collect();
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let result = (|| {
        if min.is_empty() {
            return vec![1];
        }
        if min.iter().any(|m| m.is_one()) {
            return vec![0];
        }
        let pairwise_coprime = (0..min.len()).all(|i| {
            (i + 1..min.len()).all(|j| min[i].is_coprime_to(&min[j]))
        });
        if pairwise_coprime {
            let mut acc = vec![1i64];
            for m in &min {
                // multiply by (1 - t^deg)
                let d = m.degree() as usize;
                let mut next = vec![0i64; acc.len() + d];
                for (e, c) in acc.iter().enumerate() {
                    next[e] += c;
                    next[e + d] -= c;
                }
                acc = next;
            }
            trim(&mut acc);
            return acc;
        }
        // pivot: the variable hitting the most generators
        let mut counts = vec![0usize; nvars];
        for m in &min {
            for (v, count) in counts.iter_mut().enumerate() {
                if m.exp(v) > 0 {
                    *count += 1;
                }
            }
        }
        let pivot = counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(v, _)| v)
            .expect("at least one variable");
        // I + (x_pivot)
        let mut plus: Vec<Monomial> = min.iter().filter(|m| m.exp(pivot) == 0).cloned().collect();
        plus.push(Monomial::var(pivot, nvars));
        // I : x_pivot
        let colon: Vec<Monomial> = min
            .iter()
            .map(|m| {
                if m.exp(pivot) == 0 {
                    m.clone()
                } else {
                    let mut exps = smallvec::SmallVec::<[u16; 8]>::from_slice(m.exps());
                    exps[pivot] -= 1;
                    Monomial::new(exps)
                }
            })
            .collect();
        let hn_plus = monomial_numerator(&plus, nvars, memo);
        let hn_colon = monomial_numerator(&colon, nvars, memo);
        let mut acc = hn_plus;
        add_shifted(&mut acc, &hn_colon, 1);
        trim(&mut acc);
        acc
    })();
    memo.insert(key, result.clone());
    result
}

fn minimal_monomials(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_unstable();
    gens.dedup();
    let mut keep = vec![true; gens.len()];
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j && keep[j] && gens[j].divides(&gens[i]) && gens[j] != gens[i] {
                keep[i] = false;
                break;
            }
        }
    }
    gens.into_iter().zip(keep).filter_map(|(m, k)| k.then_some(m)).collect()
}

fn add_shifted(acc: &mut Vec<i64>, src: &[i64], shift: usize) {
    if acc.len() < src.len() + shift {
        acc.resize(src.len() + shift, 0);
    }
    for (e, c) in src.iter().enumerate() {
        acc[e + shift] += c;
    }
}

fn trim(v: &mut Vec<i64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Value of the Hilbert function of `F/m` at degree `j`, straight from the
/// series: `sum_e c_e * C(j - e + N, N)` with vanishing binomials dropped.
pub fn series_coefficient(numer: &[i64], nvars: usize, j: i64) -> i64 {
    let n = nvars as i64 - 1;
    numer
        .iter()
        .enumerate()
        .map(|(e, c)| c * binom(j - e as i64 + n, n))
        .sum()
}

/// Polynomial in `t` with exact rational coefficients, index = power.
pub type QPoly = Vec<BigRational>;

fn qzero() -> BigRational {
    BigRational::zero()
}

pub fn poly_degree(p: &QPoly) -> Option<i64> {
    p.iter().rposition(|c| !c.is_zero()).map(|d| d as i64)
}

pub fn poly_eval(p: &QPoly, t: i64) -> BigRational {
    let tb = BigRational::from_integer(BigInt::from(t));
    let mut acc = qzero();
    for c in p.iter().rev() {
        acc = acc * &tb + c;
    }
    acc
}

/// `C(t + shift, k)` as a polynomial in `t`.
pub fn binomial_poly(shift: i64, k: i64) -> QPoly {
    assert!(k >= 0);
    let mut p: QPoly = vec![BigRational::one()];
    for i in 0..k {
        // multiply by (t + shift - i)
        let c = BigRational::from_integer(BigInt::from(shift - i));
        let mut next: QPoly = vec![qzero(); p.len() + 1];
        for (e, coeff) in p.iter().enumerate() {
            next[e + 1] += coeff;
            next[e] += coeff * &c;
        }
        p = next;
    }
    let fact: BigInt = (1..=k).map(BigInt::from).product();
    let fact = BigRational::from_integer(fact);
    for c in p.iter_mut() {
        *c /= &fact;
    }
    p
}

/// Hilbert polynomial of the quotient with numerator `numer` over a ring in
/// `nvars` variables: `P(t) = sum_e c_e * C(t - e + N, N)`, `N = nvars - 1`.
/// Agrees with the Hilbert function for `t >= deg(numer) - N`.
pub fn numerator_to_polynomial(numer: &[i64], nvars: usize) -> QPoly {
    let n = nvars as i64 - 1;
    let mut acc: QPoly = vec![qzero(); nvars];
    for (e, c) in numer.iter().enumerate() {
        if *c == 0 {
            continue;
        }
        let b = binomial_poly(n - e as i64, n);
        let cb = BigRational::from_integer(BigInt::from(*c));
        if acc.len() < b.len() {
            acc.resize(b.len(), qzero());
        }
        for (k, coeff) in b.iter().enumerate() {
            acc[k] += coeff * &cb;
        }
    }
    acc
}

pub fn poly_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), qzero());
    }
    for (k, c) in b.iter().enumerate() {
        out[k] -= c;
    }
    out
}

/// Expands `P` in the binomial basis `C(t + N - i, N - i)`, `i = 0..=N`.
/// Returns `(b_0, .., b_N)`; the coefficients of genuine Hilbert polynomials
/// are integers and the expansion is exact.
pub fn binomial_expansion(p: &QPoly, n: i64) -> Option<Vec<BigInt>> {
    if poly_degree(p).unwrap_or(-1) > n {
        return None;
    }
    let mut rem = p.clone();
    let mut out = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let d = n - i;
        let coeff = rem.get(d as usize).cloned().unwrap_or_else(qzero);
        let fact: BigInt = (1..=d).map(BigInt::from).product();
        let b = coeff * BigRational::from_integer(fact);
        if !b.denom().is_one() {
            return None;
        }
        let bi = b.numer().clone();
        let basis = binomial_poly(d, d);
        let scaled: QPoly = basis
            .iter()
            .map(|c| c * BigRational::from_integer(bi.clone()))
            .collect();
        rem = poly_sub(&rem, &scaled);
        out.push(bi);
    }
    if poly_degree(&rem).is_some() {
        return None;
    }
    Some(out)
}

pub fn poly_to_string(p: &QPoly) -> String {
    match poly_degree(p) {
        None => "0".to_string(),
        Some(d) => {
            let mut s = String::new();
            for k in (0..=d).rev() {
                let c = &p[k as usize];
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                let mag = c.abs();
                if s.is_empty() {
                    if neg {
                        s.push('-');
                    }
                } else {
                    s.push_str(if neg { " - " } else { " + " });
                }
                let coeff_one = mag.is_one();
                let mag_str = if mag.denom().is_one() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                };
                match k {
                    0 => s.push_str(&mag_str),
                    1 => {
                        if coeff_one {
                            s.push('t');
                        } else {
                            s.push_str(&format!("{mag_str}*t"));
                        }
                    }
                    _ => {
                        if coeff_one {
                            s.push_str(&format!("t^{k}"));
                        } else {
                            s.push_str(&format!("{mag_str}*t^{k}"));
                        }
                    }
                }
            }
            s
        }
    }
}

pub fn big_to_i64(b: &BigInt) -> i64 {
    b.to_i64().expect("invariant fits i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::groebner::buchberger;
    use crate::module::FreeModuleElem;
    use crate::poly::HPoly;

    const GF: FieldSpec = FieldSpec::Fp(32003);

    fn quotient_numer(strs: &[&str], nvars: usize) -> Vec<i64> {
        let amb = FreeAmbient::for_ideal(GF, nvars);
        let gens: Vec<FreeModuleElem> = strs
            .iter()
            .map(|s| FreeModuleElem::from_poly(HPoly::parse(s, GF, nvars).unwrap()))
            .collect();
        let gb = buchberger(&amb, &gens);
        gb.quotient_hilbert_numerator()
    }

    #[test]
    fn numerator_examples() {
        // zero submodule of S on P^2
        let amb = FreeAmbient::for_ideal(GF, 3);
        let gb = buchberger(&amb, &[]);
        assert_eq!(gb.quotient_hilbert_numerator(), vec![1]);
        // principal ideals and a complete intersection
        assert_eq!(quotient_numer(&["x0"], 3), vec![1, -1]);
        assert_eq!(quotient_numer(&["x0", "x1^2"], 3), vec![1, -1, -1, 1]); // (1-t)(1-t^2)
    }

    #[test]
    fn series_matches_brute_force_dimensions() {
        // S/(x0^2, x0*x1, x0*x2) on P^2 has dimensions 1, 3, then j+1
        let numer = quotient_numer(&["x0^2", "x0*x1", "x0*x2"], 3);
        let expect = |j: i64| if j == 0 { 1 } else { j + 1 + i64::from(j == 1) };
        for j in 0..10 {
            assert_eq!(series_coefficient(&numer, 3, j), expect(j), "degree {j}");
        }
    }

    #[test]
    fn polynomial_and_expansion() {
        // quotient by (x0) on P^2: P(t) = t + 1
        let numer = quotient_numer(&["x0"], 3);
        let p = numerator_to_polynomial(&numer, 3);
        assert_eq!(poly_to_string(&p), "t + 1");
        // expansion of C(t+2,2) - (t+1) = its submodule complement
        let full = numerator_to_polynomial(&[1], 3);
        let sub = poly_sub(&full, &p);
        // sub = C(t+1,2), the Hilbert polynomial of the ideal (x0) = S(-1)
        let b = binomial_expansion(&sub, 2).unwrap();
        assert_eq!(b, vec![BigInt::from(1), BigInt::from(-1), BigInt::from(0)]);
    }

    #[test]
    fn expansion_of_lm_kernel_polynomial() {
        // t^2 + 2t = 2*C(t+2,2) - C(t+1,1) - 1
        let p: QPoly = vec![
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(2)),
            BigRational::from_integer(BigInt::from(1)),
        ];
        let b = binomial_expansion(&p, 2).unwrap();
        assert_eq!(b, vec![BigInt::from(2), BigInt::from(-1), BigInt::from(-1)]);
    }

    #[test]
    fn polynomial_agrees_with_function_eventually() {
        let numer = quotient_numer(&["x0^2", "x0*x1", "x0*x2"], 3);
        let p = numerator_to_polynomial(&numer, 3);
        let bound = numer.len() as i64 - 1 - 2; // deg h - N
        for j in bound.max(0)..bound.max(0) + 5 {
            assert_eq!(
                poly_eval(&p, j),
                BigRational::from_integer(BigInt::from(series_coefficient(&numer, 3, j)))
            );
        }
    }
}

//! Dense exact linear algebra over the coefficient field.

use crate::field::{FieldSpec, Scalar};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::HPoly;
use crate::{Error, Result};

/// Row-major dense matrix over a single field.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    a: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, a: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        DenseMatrix { field, rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.a[i * self.cols + j]
    }

    /// Reduced row echelon form and the (strictly increasing) pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !f.is_zero(m.at(r, col))) else {
                continue;
            };
            if piv != row {
                for j in 0..m.cols {
                    m.a.swap(piv * m.cols + j, row * m.cols + j);
                }
            }
            let inv = f.inv(m.at(row, col)).expect("pivot nonzero");
            for j in col..m.cols {
                *m.at_mut(row, j) = f.mul(m.at(row, j), &inv);
            }
            for r in 0..m.rows {
                if r == row || f.is_zero(m.at(r, col)) {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in col..m.cols {
                    let v = f.sub(m.at(r, j), &f.mul(&factor, m.at(row, j)));
                    *m.at_mut(r, j) = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, in ascending
    /// free-column order. Every vector is verified to map to zero.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.at(i, free));
            }
            debug_assert!(self.apply(&v).iter().all(|x| f.is_zero(x)));
            basis.push(v);
        }
        basis
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    if !f.is_zero(self.at(i, j)) && !f.is_zero(&v[j]) {
                        acc = f.add(&acc, &f.mul(self.at(i, j), &v[j]));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Monomial basis of the degree-`k` piece of `S/(f)`: the degree-`k`
/// monomials not divisible by the lead monomial of `f`, descending.
pub fn standard_monomials_mod(nvars: usize, k: i64, modulus: Option<&HPoly>) -> Vec<Monomial> {
    let all = monomials_of_degree(nvars, k);
    match modulus.and_then(|f| f.lead_term()) {
        None => all,
        Some((lm, _)) => all.into_iter().filter(|m| !lm.divides(m)).collect(),
    }
}

/// Reduces `p` modulo the single relation `f` (monic division), leaving only
/// standard monomials.
fn reduce_mod(p: &HPoly, f: &HPoly) -> HPoly {
    let Some((lm, lc)) = f.lead_term() else {
        return p.clone();
    };
    let field = p.field();
    let mut cur = p.clone();
    loop {
        let hit = cur
            .terms()
            .iter()
            .find(|(m, _)| lm.divides(m))
            .map(|(m, c)| (m.clone(), c.clone()));
        let Some((m, c)) = hit else {
            return cur;
        };
        let q = m.checked_div(lm).expect("divisibility checked");
        let factor = field.div(&c, lc).expect("lead coefficient invertible");
        cur = cur.sub_scaled(&factor, &q, f);
    }
}

/// The degree-`k` matrix of `(a_1..a_r) -> sum a_i * g_i (mod f)`, mapping
/// `⊕ S_{k - a_i}` to the degree-`(k + l)` piece of `S/(f)` (or of `S` when no
/// modulus is given), where `l = deg g_i - a_i` is required to be constant.
///
/// Rows are indexed by the codomain standard-monomial basis and columns by the
/// domain monomial bases, both in descending order, generators in input order.
#[derive(Debug)]
pub struct GradedMap {
    pub matrix: DenseMatrix,
    /// (twist a_i, monomial basis of S_{k - a_i}) per generator.
    pub domain: Vec<(i64, Vec<Monomial>)>,
    pub codomain: Vec<Monomial>,
    pub k: i64,
}

pub fn graded_mult_matrix(
    gens: &[(HPoly, i64)],
    modulus: Option<&HPoly>,
    k: i64,
) -> Result<GradedMap> {
    let Some((g0, a0)) = gens.first() else {
        return Err(Error::Precondition("graded map needs at least one generator".into()));
    };
    let field = g0.field();
    let nvars = g0.nvars();
    let l = g0.degree() - a0;
    for (g, a) in gens {
        if g.field() != field || g.nvars() != nvars {
            return Err(Error::RingMismatch("generators from different rings".into()));
        }
        if g.degree() - a != l {
            return Err(Error::Homogeneity(format!(
                "generator twists inconsistent: deg {} - twist {} != {}",
                g.degree(),
                a,
                l
            )));
        }
    }
    if let Some(f) = modulus {
        if f.field() != field || f.nvars() != nvars {
            return Err(Error::RingMismatch("modulus from a different ring".into()));
        }
    }
    let codomain = standard_monomials_mod(nvars, k + l, modulus);
    let mut row_of = std::collections::BTreeMap::new();
    for (i, m) in codomain.iter().enumerate() {
        row_of.insert(m.clone(), i);
    }
    let mut domain = Vec::new();
    let mut total_cols = 0usize;
    for (_, a) in gens {
        let basis = monomials_of_degree(nvars, k - a);
        total_cols += basis.len();
        domain.push((*a, basis));
    }
    let mut matrix = DenseMatrix::zeros(field, codomain.len(), total_cols);
    let mut col = 0;
    for ((g, _), (_, basis)) in gens.iter().zip(&domain) {
        for mono in basis {
            let image = g.mul_term(mono, &field.one());
            let image = match modulus {
                Some(f) if !f.is_zero() => reduce_mod(&image, f),
                _ => image,
            };
            for (m, c) in image.terms() {
                let row = row_of[m];
                *matrix.at_mut(row, col) = c.clone();
            }
            col += 1;
        }
    }
    Ok(GradedMap { matrix, domain, codomain, k })
}

impl GradedMap {
    /// Kernel vectors regrouped per generator as polynomial coefficients.
    pub fn kernel_elements(&self, field: FieldSpec, nvars: usize) -> Vec<Vec<HPoly>> {
        self.matrix
            .kernel_basis()
            .into_iter()
            .map(|v| {
                let mut comps = Vec::with_capacity(self.domain.len());
                let mut off = 0;
                for (a, basis) in &self.domain {
                    let terms = basis
                        .iter()
                        .cloned()
                        .zip(v[off..off + basis.len()].iter().cloned());
                    off += basis.len();
                    comps.push(
                        HPoly::from_terms(field, nvars, self.k - a, terms)
                            .expect("kernel slice is homogeneous"),
                    );
                }
                comps
            })
            .collect()
    }
}

/// `C(n, k)` as i64, 0 when `n < k` or arguments are negative.
pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || n < k {
        return 0;
    }
    num::integer::binomial(n as u128, k as u128) as i64
}

/// Dimension of the degree-`k` piece of `S = k[x_0..x_N]`.
pub fn dim_s(nvars: usize, k: i64) -> i64 {
    binom(k + nvars as i64 - 1, nvars as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GF: FieldSpec = FieldSpec::Fp(32003);

    fn s(v: i64) -> Scalar {
        GF.from_i64(v)
    }

    #[test]
    fn rref_examples() {
        let id = DenseMatrix::identity(GF, 3);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);

        let z = DenseMatrix::zeros(GF, 2, 3);
        let (r, p) = z.rref();
        assert_eq!(r, z);
        assert!(p.is_empty());

        let q = FieldSpec::Rational;
        let m = DenseMatrix::from_rows(
            q,
            vec![
                vec![q.from_i64(1), q.from_i64(2)],
                vec![q.from_i64(2), q.from_i64(4)],
            ],
        );
        let (r, p) = m.rref();
        assert_eq!(p, vec![0]);
        assert_eq!(r.at(0, 0), &q.from_i64(1));
        assert_eq!(r.at(0, 1), &q.from_i64(2));
        assert!(q.is_zero(r.at(1, 0)) && q.is_zero(r.at(1, 1)));
    }

    #[test]
    fn kernel_examples() {
        assert!(DenseMatrix::identity(GF, 4).kernel_basis().is_empty());
        let m = DenseMatrix::from_rows(GF, vec![vec![s(1), s(-1)]]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![s(1), s(1)]]);
    }

    #[test]
    fn graded_mult_matrix_examples() {
        // gens (x1, x2) mod x0 in degree k=1 on P^2: 3x6 of rank 3
        let x1 = HPoly::var(GF, 1, 3);
        let x2 = HPoly::var(GF, 2, 3);
        let x0 = HPoly::var(GF, 0, 3);
        let gm = graded_mult_matrix(&[(x1.clone(), 0), (x2.clone(), 0)], Some(&x0), 1).unwrap();
        assert_eq!((gm.matrix.rows(), gm.matrix.cols()), (3, 6));
        assert_eq!(gm.matrix.rank(), 3);

        // single generator 1, no modulus, k=0: 1x1 identity
        let one = HPoly::one(GF, 3);
        let gm = graded_mult_matrix(&[(one, 0)], None, 0).unwrap();
        assert_eq!((gm.matrix.rows(), gm.matrix.cols()), (1, 1));
        assert_eq!(gm.matrix.at(0, 0), &s(1));

        // x0 mod x0 is the zero map
        let gm = graded_mult_matrix(&[(x0.clone(), 0)], Some(&x0), 3).unwrap();
        assert_eq!(gm.matrix.rank(), 0);
        assert!(gm.matrix.rows() > 0 && gm.matrix.cols() > 0);
    }

    #[test]
    fn graded_dimension_formulas() {
        // dim S_{k-a} columns and dim (S/f)_{k+l} rows
        let f = HPoly::random(GF, 2, 3, 5);
        let g = HPoly::random(GF, 1, 3, 6);
        for k in 0..6 {
            let gm = graded_mult_matrix(&[(g.clone(), 0)], Some(&f), k).unwrap();
            assert_eq!(gm.matrix.cols() as i64, binom(k + 2, 2));
            assert_eq!(
                gm.matrix.rows() as i64,
                binom(k + 1 + 2, 2) - binom(k + 1 - 2 + 2, 2)
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn rank_nullity_and_idempotence(seed in 0u64..5000, r in 1usize..6, c in 1usize..6) {
            use rand_core::{RngCore, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<Scalar>> = (0..r)
                .map(|_| (0..c).map(|_| s((rng.next_u64() % 5) as i64)).collect())
                .collect();
            let m = DenseMatrix::from_rows(GF, rows);
            let (rr, piv) = m.rref();
            prop_assert_eq!(piv.len() + m.kernel_basis().len(), c);
            let (rr2, piv2) = rr.rref();
            prop_assert_eq!(rr2, rr);
            prop_assert_eq!(piv2, piv);
            for v in m.kernel_basis() {
                prop_assert!(m.apply(&v).iter().all(|x| GF.is_zero(x)));
            }
        }
    }
}

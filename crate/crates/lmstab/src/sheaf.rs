//! Graded submodules of free modules viewed as coherent sheaves on `P^N`:
//! Hilbert polynomial, rank and first Chern class, twisted global sections,
//! normalization, and the splitting type on a random line.

use crate::field::FieldSpec;
use crate::groebner::{self, GroebnerBasis};
use crate::hilbert::{self, QPoly};
use crate::linalg::{dim_s, graded_mult_matrix, DenseMatrix};
use crate::module::{FreeAmbient, FreeModuleElem};
use crate::monomial::monomials_of_degree;
use crate::poly::HPoly;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use once_cell::sync::OnceCell;
use rand_core::{RngCore, SeedableRng};

/// Numeric slope payload: `slope * rank = c1` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChernSlopeData {
    pub rank: i64,
    pub c1: i64,
    pub slope: Ratio<i64>,
}

impl ChernSlopeData {
    pub fn new(rank: i64, c1: i64) -> Self {
        ChernSlopeData { rank, c1, slope: Ratio::new(c1, rank) }
    }
}

/// Hilbert polynomial of a submodule, with its expansion in the binomial
/// basis `C(t + N - i, N - i)`; `b_0` is the rank and `b_1` the first Chern
/// class.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertPoly {
    pub nvars: usize,
    pub coeffs: QPoly,
    pub binom: Vec<BigInt>,
}

impl HilbertPoly {
    pub fn eval(&self, t: i64) -> BigRational {
        hilbert::poly_eval(&self.coeffs, t)
    }

    pub fn to_display(&self) -> String {
        hilbert::poly_to_string(&self.coeffs)
    }
}

/// Twist `k_E` with `c1 + 2 k_E` in `{0, -1}`.
pub fn normalize_twist(c1: i64) -> i64 {
    if c1 % 2 == 0 {
        -c1 / 2
    } else {
        -(c1 + 1) / 2
    }
}

/// Result of restricting to a line: splitting degrees `a_1 >= .. >= a_rho`
/// of the free part, plus the length of any torsion picked up (zero for
/// kernel-presented modules, which restrict kernel-to-kernel).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub degrees: Vec<i64>,
    pub torsion_length: i64,
    pub attempts: u32,
}

impl std::fmt::Display for Splitting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Kernel presentation `m = ker(S^r -> (S/f)(l))`, `e_i -> forms[i]`; the
/// twisted sections of such kernels are exact linear algebra.
#[derive(Debug, Clone)]
pub struct KernelPresentation {
    pub forms: Vec<HPoly>,
    pub modulus: Option<HPoly>,
}

/// A finitely generated graded submodule of `⊕ S(-a_i)` with cached Groebner
/// data. Immutable after construction; the basis is computed lazily once.
#[derive(Debug)]
pub struct GradedSubmodule {
    ambient: FreeAmbient,
    gens: Vec<FreeModuleElem>,
    kernel_pres: Option<KernelPresentation>,
    saturated: bool,
    gb: OnceCell<GroebnerBasis>,
}

impl Clone for GradedSubmodule {
    fn clone(&self) -> Self {
        GradedSubmodule {
            ambient: self.ambient.clone(),
            gens: self.gens.clone(),
            kernel_pres: self.kernel_pres.clone(),
            saturated: self.saturated,
            gb: self.gb.clone(),
        }
    }
}

impl GradedSubmodule {
    /// Submodule spanned by explicit generators; saturation status unknown.
    pub fn from_generators(ambient: FreeAmbient, gens: Vec<FreeModuleElem>) -> Self {
        GradedSubmodule { ambient, gens, kernel_pres: None, saturated: false, gb: OnceCell::new() }
    }

    /// The whole free module `⊕ S(-a_i)` (unit vector generators).
    pub fn free(ambient: FreeAmbient) -> Self {
        let field = ambient.field;
        let nvars = ambient.nvars;
        let gens = (0..ambient.rank())
            .map(|i| {
                let comps: Vec<HPoly> = (0..ambient.rank())
                    .map(|j| {
                        if i == j {
                            HPoly::one(field, nvars)
                        } else {
                            HPoly::zero(field, nvars, 0)
                        }
                    })
                    .collect();
                ambient.elem(comps).expect("unit vectors are homogeneous")
            })
            .collect();
        GradedSubmodule { ambient, gens, kernel_pres: None, saturated: true, gb: OnceCell::new() }
    }

    /// Kernel of `S^r -> (S/f)(l)`, `e_i -> forms[i]`, as the projection of
    /// the syzygies of `(forms, f)` to the form coordinates. These kernels
    /// are saturated: `S/(f)` (and `S` itself) have no submodule killed by a
    /// power of the irrelevant ideal, so a section of a twist defined off the
    /// irrelevant locus extends uniquely.
    pub fn from_kernel(field: FieldSpec, nvars: usize, forms: Vec<HPoly>, modulus: Option<HPoly>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::Precondition("kernel presentation needs forms".into()));
        }
        let l = forms[0].degree();
        for g in &forms {
            if g.field() != field || g.nvars() != nvars {
                return Err(Error::RingMismatch("kernel forms from a different ring".into()));
            }
            if g.degree() != l {
                return Err(Error::Homogeneity("kernel forms of mixed degree".into()));
            }
        }
        let r = forms.len();
        let ideal_amb = FreeAmbient::for_ideal(field, nvars);
        let mut combined: Vec<FreeModuleElem> =
            forms.iter().map(|g| FreeModuleElem::from_poly(g.clone())).collect();
        if let Some(f) = &modulus {
            if f.field() != field || f.nvars() != nvars {
                return Err(Error::RingMismatch("modulus from a different ring".into()));
            }
            if f.is_zero() {
                return Err(Error::Precondition("zero modulus".into()));
            }
            combined.push(FreeModuleElem::from_poly(f.clone()));
        }
        let (_, syz) = groebner::syzygies(&ideal_amb, &combined)?;
        let ambient = FreeAmbient::new(field, nvars, vec![0; r]);
        let mut gens = Vec::with_capacity(syz.len());
        for s in syz {
            let comps: Vec<HPoly> = s.components()[..r].to_vec();
            let e = ambient.elem(comps)?;
            if !e.is_zero() {
                gens.push(e);
            }
        }
        let gens = groebner::minimalize(&ambient, gens);
        Ok(GradedSubmodule {
            ambient,
            gens,
            kernel_pres: Some(KernelPresentation { forms, modulus }),
            saturated: true,
            gb: OnceCell::new(),
        })
    }

    pub fn ambient(&self) -> &FreeAmbient {
        &self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.ambient.field
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars
    }

    /// Projective dimension of the ambient space (`N` for `P^N`).
    pub fn proj_dim(&self) -> i64 {
        self.ambient.nvars as i64 - 1
    }

    pub fn generators(&self) -> &[FreeModuleElem] {
        &self.gens
    }

    pub fn kernel_presentation(&self) -> Option<&KernelPresentation> {
        self.kernel_pres.as_ref()
    }

    pub fn is_saturated_flag(&self) -> bool {
        self.saturated
    }

    pub fn gb(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| groebner::buchberger(&self.ambient, &self.gens))
    }

    /// Recomputes the saturation; for saturated modules this returns a module
    /// with the same reduced basis.
    pub fn saturate(&self) -> Result<GradedSubmodule> {
        let sat = groebner::saturate(&self.ambient, &self.gens)?;
        Ok(GradedSubmodule {
            ambient: self.ambient.clone(),
            gens: sat,
            kernel_pres: None,
            saturated: true,
            gb: OnceCell::new(),
        })
    }

    pub fn same_submodule_as(&self, other: &GradedSubmodule) -> bool {
        self.ambient == other.ambient && self.gb().gens == other.gb().gens
    }

    /// Hilbert polynomial of the submodule itself: ambient minus quotient.
    pub fn hilbert_polynomial(&self) -> HilbertPoly {
        let nvars = self.ambient.nvars;
        let n = nvars as i64 - 1;
        let quotient_numer = self.gb().quotient_hilbert_numerator();
        let p_quot = hilbert::numerator_to_polynomial(&quotient_numer, nvars);
        let mut p_amb: QPoly = Vec::new();
        for a in &self.ambient.twists {
            let b = hilbert::binomial_poly(n - a, n);
            if p_amb.len() < b.len() {
                p_amb.resize(b.len(), BigRational::from_integer(BigInt::from(0)));
            }
            for (k, c) in b.iter().enumerate() {
                p_amb[k] += c;
            }
        }
        let coeffs = hilbert::poly_sub(&p_amb, &p_quot);
        let binom = hilbert::binomial_expansion(&coeffs, n)
            .expect("Hilbert polynomial expands integrally in the binomial basis");
        HilbertPoly { nvars, coeffs, binom }
    }

    /// Rank and first Chern class from the binomial expansion. The zero
    /// module is flagged distinctly.
    pub fn rank_c1(&self) -> Result<ChernSlopeData> {
        let hp = self.hilbert_polynomial();
        let rank = hilbert::big_to_i64(&hp.binom[0]);
        if rank == 0 {
            return Err(Error::ZeroModule);
        }
        let c1 = hilbert::big_to_i64(&hp.binom[1]);
        Ok(ChernSlopeData::new(rank, c1))
    }

    /// Dimension of the degree-`k` graded piece. For saturated modules this
    /// is `h^0` of the `k`-th twist of the associated sheaf. Kernel-presented
    /// modules go through the graded multiplication matrix; otherwise the
    /// count comes from Groebner standard monomials.
    pub fn h0_twist(&self, k: i64) -> i64 {
        match &self.kernel_pres {
            Some(pres) => {
                let pairs: Vec<(HPoly, i64)> =
                    pres.forms.iter().map(|g| (g.clone(), 0)).collect();
                let gm = graded_mult_matrix(&pairs, pres.modulus.as_ref(), k)
                    .expect("presentation is consistent");
                gm.matrix.kernel_basis().len() as i64
            }
            None => self.h0_twist_via_gb(k),
        }
    }

    /// Same dimension through the lead-term module; the independent route
    /// used to cross-check `h0_twist`.
    pub fn h0_twist_via_gb(&self, k: i64) -> i64 {
        self.gb().submodule_dim(k)
    }

    /// `(k, h^0(m(k)))` over a degree window.
    pub fn h0_window(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let ks: Vec<i64> = (lo..=hi).collect();
        crate::par::map_maybe_par(ks, |k| (k, self.h0_twist(k)))
    }

    /// Sequential variant, kept callable for benchmarks.
    pub fn h0_window_seq(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let ks: Vec<i64> = (lo..=hi).collect();
        crate::par::map_seq(ks, |k| (k, self.h0_twist(k)))
    }

    #[cfg(feature = "parallel")]
    pub fn h0_window_par(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let ks: Vec<i64> = (lo..=hi).collect();
        crate::par::map_par(ks, |k| (k, self.h0_twist(k)))
    }

    /// Splitting type on a random line through `P^N`. The module must either
    /// be a twisted free module or carry a kernel presentation; in the kernel
    /// case the restriction is re-derived as a kernel over the line's
    /// coordinate ring, so it is free and the probe reports zero torsion.
    /// Degenerate lines are resampled with the next seed, boundedly.
    pub fn restrict_to_line(&self, seed: u64, max_attempts: u32) -> Result<Splitting> {
        if self.proj_dim() < 2 {
            return Err(Error::Precondition("line restriction needs N >= 2".into()));
        }
        // a twisted free module restricts slot by slot
        if self.kernel_pres.is_none() {
            if !self.is_whole_free_module() {
                return Err(Error::Precondition(
                    "line restriction needs a kernel presentation or a free module".into(),
                ));
            }
            let mut degrees: Vec<i64> = self.ambient.twists.iter().map(|a| -a).collect();
            degrees.sort_unstable_by(|a, b| b.cmp(a));
            return Ok(Splitting { degrees, torsion_length: 0, attempts: 0 });
        }
        let data = self.rank_c1()?;
        let mut last_err = String::from("no attempts made");
        for attempt in 0..max_attempts {
            match self.try_line(seed.wrapping_add(attempt as u64), &data) {
                Ok(degrees) => {
                    return Ok(Splitting { degrees, torsion_length: 0, attempts: attempt + 1 })
                }
                Err(e) => last_err = e.to_string(),
            }
        }
        Err(Error::Sampling { predicate: format!("nondegenerate line ({last_err})"), attempts: max_attempts })
    }

    fn is_whole_free_module(&self) -> bool {
        let free = GradedSubmodule::free(self.ambient.clone());
        self.gb().gens == free.gb().gens
    }

    fn try_line(&self, seed: u64, data: &ChernSlopeData) -> Result<Vec<i64>> {
        let field = self.field();
        let nvars = self.nvars();
        let pres = self.kernel_pres.as_ref().expect("checked by caller");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || match field {
            FieldSpec::Fp(p) => field.from_i64((rng.next_u64() % p) as i64),
            FieldSpec::Rational => field.from_i64((rng.next_u64() % 41) as i64 - 20),
        };
        // parametrize x_i = alpha_i s + beta_i t
        let alpha: Vec<_> = (0..nvars).map(|_| draw()).collect();
        let beta: Vec<_> = (0..nvars).map(|_| draw()).collect();
        let param = DenseMatrix::from_rows(field, vec![alpha.clone(), beta.clone()]);
        if param.rank() != 2 {
            return Err(Error::Precondition("parametrization is not a line".into()));
        }
        let line_forms: Vec<HPoly> = (0..nvars)
            .map(|i| {
                HPoly::from_terms(
                    field,
                    2,
                    1,
                    [
                        (crate::monomial::Monomial::var(0, 2), alpha[i].clone()),
                        (crate::monomial::Monomial::var(1, 2), beta[i].clone()),
                    ],
                )
                .expect("linear form")
            })
            .collect();
        let restricted_forms: Vec<HPoly> = pres
            .forms
            .iter()
            .map(|g| g.substitute(&line_forms))
            .collect::<Result<_>>()?;
        let restricted_modulus = match &pres.modulus {
            None => None,
            Some(f) => {
                let fl = f.substitute(&line_forms)?;
                if fl.is_zero() {
                    return Err(Error::Precondition("line lies inside the divisor".into()));
                }
                Some(fl)
            }
        };
        // minimal generator degrees of the restricted kernel, degreewise:
        // new generators in degree k = dim M_k - dim (R_1 * M_{k-1})
        let pairs: Vec<(HPoly, i64)> = restricted_forms.iter().map(|g| (g.clone(), 0)).collect();
        let rank = data.rank;
        let cap = (-data.c1).max(0) + 2;
        let mut found: Vec<i64> = Vec::new();
        let mut prev_basis: Vec<Vec<HPoly>> = Vec::new();
        let mut k = 0i64;
        while (found.len() as i64) < rank && k <= cap {
            let gm = graded_mult_matrix(&pairs, restricted_modulus.as_ref(), k)
                .expect("restricted presentation is consistent");
            let basis = gm.kernel_elements(field, 2);
            let dim_k = basis.len() as i64;
            let span = span_dim_of_shifts(field, &prev_basis, k, restricted_forms.len());
            let new = dim_k - span;
            debug_assert!(new >= 0);
            for _ in 0..new {
                found.push(k);
            }
            prev_basis = basis;
            k += 1;
        }
        if found.len() as i64 != rank || found.iter().sum::<i64>() != -data.c1 {
            return Err(Error::Precondition(format!(
                "degenerate restriction: generator degrees {found:?} against rank {rank}, c1 {}",
                data.c1
            )));
        }
        let mut degrees: Vec<i64> = found.into_iter().map(|b| -b).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(degrees)
    }
}

/// Rank of the span of `s * v, t * v` for the degree-`(k-1)` basis vectors
/// `v`, inside the degree-`k` coordinate space of `R^r`, `R = k[s, t]`.
fn span_dim_of_shifts(
    field: FieldSpec,
    prev_basis: &[Vec<HPoly>],
    k: i64,
    r: usize,
) -> i64 {
    if prev_basis.is_empty() || k == 0 {
        return 0;
    }
    let basis_monos = monomials_of_degree(2, k);
    let cols = basis_monos.len() * r;
    let mut rows: Vec<Vec<crate::field::Scalar>> = Vec::with_capacity(prev_basis.len() * 2);
    for v in prev_basis {
        for var in 0..2 {
            let xv = HPoly::var(field, var, 2);
            let mut row = vec![field.zero(); cols];
            for (slot, comp) in v.iter().enumerate() {
                let shifted = comp.mul(&xv).expect("same ring");
                for (m, c) in shifted.terms() {
                    let idx = basis_monos
                        .iter()
                        .position(|b| b == m)
                        .expect("monomial in degree basis");
                    row[slot * basis_monos.len() + idx] = c.clone();
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return 0;
    }
    DenseMatrix::from_rows(field, rows).rank() as i64
}

/// Convenience: `dim S_k` for the ambient of a module, exposed for tests.
pub fn ambient_piece_dim(ambient: &FreeAmbient, k: i64) -> i64 {
    ambient.twists.iter().map(|a| dim_s(ambient.nvars, k - a)).sum()
}

/// Brute-force dimension of the degree-`k` piece of the span of `gens`:
/// the rank of all monomial shifts, computed without Groebner data. Used as
/// an independent oracle in tests.
pub fn piece_dim_by_span(ambient: &FreeAmbient, gens: &[FreeModuleElem], k: i64) -> i64 {
    let field = ambient.field;
    let mut rows: Vec<Vec<crate::field::Scalar>> = Vec::new();
    let slot_bases: Vec<Vec<crate::monomial::Monomial>> = ambient
        .twists
        .iter()
        .map(|a| monomials_of_degree(ambient.nvars, k - a))
        .collect();
    let offsets: Vec<usize> = slot_bases
        .iter()
        .scan(0usize, |acc, b| {
            let off = *acc;
            *acc += b.len();
            Some(off)
        })
        .collect();
    let cols: usize = slot_bases.iter().map(|b| b.len()).sum();
    for g in gens {
        let shift = k - g.degree();
        if shift < 0 {
            continue;
        }
        for mono in monomials_of_degree(ambient.nvars, shift) {
            let shifted = g.mul_term(&mono, &field.one());
            let mut row = vec![field.zero(); cols];
            for (slot, comp) in shifted.components().iter().enumerate() {
                for (m, c) in comp.terms() {
                    let idx = slot_bases[slot]
                        .iter()
                        .position(|b| b == m)
                        .expect("monomial of the right degree");
                    row[offsets[slot] + idx] = c.clone();
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return 0;
    }
    DenseMatrix::from_rows(field, rows).rank() as i64
}

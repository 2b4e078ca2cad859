//! Groebner bases for submodules of graded free modules, syzygies by the
//! lifted Buchberger method, colon/intersection/saturation, and dimension of
//! projective support.
//!
//! The ring order is fixed to graded reverse lexicographic; module terms are
//! compared position-over-term with component 0 strongest. Pair selection is
//! the normal strategy (smallest lcm first), deterministic for a fixed input
//! order, so reduced bases are canonical and reproducible.

use crate::field::{FieldSpec, Scalar};
use crate::hilbert;
use crate::module::{FreeAmbient, FreeModuleElem};
use crate::monomial::Monomial;
use crate::poly::HPoly;
use crate::{Error, Result};
use std::collections::BTreeSet;

/// A Groebner basis of a submodule, stored reduced (monic, interreduced,
/// sorted by decreasing lead term) unless produced by the tracked variant.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    pub ambient: FreeAmbient,
    pub gens: Vec<FreeModuleElem>,
    pub reduced: bool,
}

fn pot_cmp(a: (usize, &Monomial), b: (usize, &Monomial)) -> std::cmp::Ordering {
    // position-over-term, lower component index first
    match b.0.cmp(&a.0) {
        std::cmp::Ordering::Equal => a.1.cmp(b.1),
        ord => ord,
    }
}

/// Locates the first reducible term of `e` in component-then-term order and
/// the first basis element whose lead divides it; deterministic.
fn find_reduction(
    e: &FreeModuleElem,
    basis: &[FreeModuleElem],
) -> Option<(Scalar, Monomial, usize)> {
    for comp in 0..e.components().len() {
        let poly = e.component(comp);
        if poly.is_zero() {
            continue;
        }
        for (m, c) in poly.terms() {
            for (gi, g) in basis.iter().enumerate() {
                let Some((gc, gm, _)) = g.lead() else { continue };
                if gc == comp && gm.divides(m) {
                    let q = m.checked_div(gm).expect("divisibility checked");
                    return Some((c.clone(), q, gi));
                }
            }
        }
    }
    None
}

/// Full normal form: no term of the result is divisible by a lead term of
/// `basis` in the same component.
fn reduce_full(e: &FreeModuleElem, basis: &[FreeModuleElem]) -> FreeModuleElem {
    let mut cur = e.clone();
    while let Some((c, q, gi)) = find_reduction(&cur, basis) {
        cur = cur.sub_scaled(&c, &q, &basis[gi]);
    }
    cur
}

/// Normal form tracking the consumed multiples: returns the remainder plus,
/// for each basis index, the cofactor polynomial `q_i` with
/// `e = sum q_i * basis_i + remainder`.
fn reduce_tracked(
    field: FieldSpec,
    nvars: usize,
    e: &FreeModuleElem,
    basis: &[FreeModuleElem],
) -> (FreeModuleElem, Vec<HPoly>) {
    let mut cofs: Vec<HPoly> = basis
        .iter()
        .map(|g| HPoly::zero(field, nvars, e.degree() - g.degree()))
        .collect();
    let mut cur = e.clone();
    while let Some((c, q, gi)) = find_reduction(&cur, basis) {
        cur = cur.sub_scaled(&c, &q, &basis[gi]);
        cofs[gi] = cofs[gi].sub_scaled(&field.neg(&c), &q, &HPoly::one(field, nvars));
    }
    (cur, cofs)
}

fn spoly(
    field: FieldSpec,
    gi: &FreeModuleElem,
    gj: &FreeModuleElem,
) -> Option<(FreeModuleElem, Monomial, Monomial)> {
    let (ci, mi, _) = gi.lead()?;
    let (cj, mj, _) = gj.lead()?;
    if ci != cj {
        return None;
    }
    let w = mi.lcm(mj);
    let ui = w.checked_div(mi)?;
    let uj = w.checked_div(mj)?;
    // both elements monic: spoly = u_i g_i - u_j g_j
    let one = field.one();
    let lhs = gi.mul_term(&ui, &one);
    let s = lhs.sub_scaled(&one, &uj, gj);
    Some((s, ui, uj))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Buchberger with the normal selection strategy. The product criterion is
/// applied only in rank-1 ambients (it is not valid for module terms); the
/// chain criterion only fires when both sibling pairs were already reduced.
pub fn buchberger(ambient: &FreeAmbient, gens: &[FreeModuleElem]) -> GroebnerBasis {
    let (basis, _) = buchberger_core(ambient, gens, false);
    let gens = interreduce(ambient.field, basis);
    GroebnerBasis { ambient: ambient.clone(), gens, reduced: true }
}

/// Buchberger keeping cofactor representations of every basis element over
/// the input generators. Used by the syzygy computation; the basis is monic
/// but not interreduced.
fn buchberger_tracked(
    ambient: &FreeAmbient,
    gens: &[FreeModuleElem],
) -> (Vec<FreeModuleElem>, Vec<Vec<HPoly>>) {
    buchberger_core(ambient, gens, true)
}

fn buchberger_core(
    ambient: &FreeAmbient,
    gens: &[FreeModuleElem],
    track: bool,
) -> (Vec<FreeModuleElem>, Vec<Vec<HPoly>>) {
    let field = ambient.field;
    let nvars = ambient.nvars;
    let rank1 = ambient.rank() == 1;
    let mut basis: Vec<FreeModuleElem> = Vec::new();
    // cofactors[k][s] expresses basis[k] over gens[s]
    let mut cofactors: Vec<Vec<HPoly>> = Vec::new();
    for (s, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let lc = g.lead().expect("nonzero").2.clone();
        basis.push(g.monic(field));
        if track {
            let inv = field.inv(&lc).expect("lead nonzero");
            let cof: Vec<HPoly> = gens
                .iter()
                .enumerate()
                .map(|(t, h)| {
                    if t == s {
                        HPoly::term(field, nvars, Monomial::one(nvars), inv.clone())
                    } else {
                        HPoly::zero(field, nvars, g.degree() - h.degree())
                    }
                })
                .collect();
            cofactors.push(cof);
        }
    }

    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    let lead = |b: &[FreeModuleElem], k: usize| -> (usize, Monomial) {
        let (c, m, _) = b[k].lead().expect("basis elements nonzero");
        (c, m.clone())
    };
    let push_pairs = |queue: &mut BTreeSet<PairKey>, b: &[FreeModuleElem], j: usize| {
        let (cj, mj) = lead(b, j);
        for i in 0..j {
            let (ci, mi) = lead(b, i);
            if ci != cj {
                continue;
            }
            queue.insert(PairKey { lcm: mi.lcm(&mj), i, j });
        }
    };
    for j in 0..basis.len() {
        push_pairs(&mut queue, &basis, j);
    }

    while let Some(pair) = queue.iter().next().cloned() {
        queue.remove(&pair);
        let PairKey { lcm, i, j } = pair;
        done.insert((i, j));
        let (_, mi) = lead(&basis, i);
        let (_, mj) = lead(&basis, j);
        if rank1 && mi.is_coprime_to(&mj) {
            continue;
        }
        // chain criterion: a third lead dividing the lcm, with both sibling
        // pairs already treated and strictly smaller lcms
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            let (ck, mk) = lead(&basis, k);
            let (ci, _) = lead(&basis, i);
            if ck != ci || !mk.divides(&lcm) {
                continue;
            }
            let (a, b) = (i.min(k), i.max(k));
            let (c, d) = (j.min(k), j.max(k));
            let lcm_ik = mi.lcm(&mk);
            let lcm_jk = mj.lcm(&mk);
            if lcm_ik != lcm && lcm_jk != lcm && done.contains(&(a, b)) && done.contains(&(c, d)) {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }
        let Some((s, ui, uj)) = spoly(field, &basis[i], &basis[j]) else {
            continue;
        };
        if track {
            let (rem, cofs) = reduce_tracked(field, nvars, &s, &basis);
            if rem.is_zero() {
                continue;
            }
            let lc = rem.lead().expect("nonzero").2.clone();
            let inv = field.inv(&lc).expect("lead nonzero");
            // representation of rem over the original gens:
            // rem = u_i b_i - u_j b_j - sum q_k b_k
            let mut rep: Vec<HPoly> = gens
                .iter()
                .map(|h| HPoly::zero(field, nvars, rem.degree() - h.degree()))
                .collect();
            accumulate(field, &mut rep, &cofactors[i], &ui, false);
            accumulate(field, &mut rep, &cofactors[j], &uj, true);
            for (k, q) in cofs.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                accumulate_poly(field, &mut rep, &cofactors[k], q, true);
            }
            for r in rep.iter_mut() {
                *r = r.scalar_mul(&inv);
            }
            cofactors.push(rep);
            basis.push(rem.monic(field));
        } else {
            let rem = reduce_full(&s, &basis);
            if rem.is_zero() {
                continue;
            }
            basis.push(rem.monic(field));
        }
        let new = basis.len() - 1;
        push_pairs(&mut queue, &basis, new);
    }
    (basis, cofactors)
}

/// `rep += (sign) * mono * src`, componentwise over original-generator slots.
fn accumulate(field: FieldSpec, rep: &mut [HPoly], src: &[HPoly], mono: &Monomial, negate: bool) {
    let one = field.one();
    let c = if negate { field.neg(&one) } else { one };
    for (r, s) in rep.iter_mut().zip(src) {
        if s.is_zero() {
            continue;
        }
        *r = r.sub_scaled(&field.neg(&c), mono, s);
    }
}

/// `rep += (sign) * q * src` for a polynomial multiplier.
fn accumulate_poly(field: FieldSpec, rep: &mut [HPoly], src: &[HPoly], q: &HPoly, negate: bool) {
    for (m, c) in q.terms() {
        let c = if negate { field.neg(c) } else { c.clone() };
        for (r, s) in rep.iter_mut().zip(src) {
            if s.is_zero() {
                continue;
            }
            *r = r.sub_scaled(&field.neg(&c), m, s);
        }
    }
}

/// Interreduction to the canonical reduced basis: minimal lead terms, monic,
/// fully tail-reduced, sorted by decreasing lead.
fn interreduce(field: FieldSpec, mut basis: Vec<FreeModuleElem>) -> Vec<FreeModuleElem> {
    basis.retain(|g| !g.is_zero());
    // drop elements whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (ci, mi, _) = basis[i].lead().expect("nonzero");
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (cj, mj, _) = basis[j].lead().expect("nonzero");
            if ci == cj && mj.divides(mi) && (mj != mi || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<FreeModuleElem> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<FreeModuleElem> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then(|| g.clone()))
            .collect();
        let r = reduce_full(&minimal[i], &others);
        debug_assert!(!r.is_zero(), "minimal basis element reduced away");
        reduced.push(r.monic(field));
    }
    reduced.sort_by(|a, b| {
        let (ca, ma, _) = a.lead().expect("nonzero");
        let (cb, mb, _) = b.lead().expect("nonzero");
        pot_cmp((cb, mb), (ca, ma))
    });
    reduced
}

impl GroebnerBasis {
    /// Remainder of `e` modulo the basis; `e - result` lies in the submodule.
    pub fn normal_form(&self, e: &FreeModuleElem) -> Result<FreeModuleElem> {
        if e.components().len() != self.ambient.rank() {
            return Err(Error::RingMismatch(format!(
                "element of rank {} against ambient of rank {}",
                e.components().len(),
                self.ambient.rank()
            )));
        }
        Ok(reduce_full(e, &self.gens))
    }

    pub fn contains(&self, e: &FreeModuleElem) -> Result<bool> {
        Ok(self.normal_form(e)?.is_zero())
    }

    /// Re-checks the Buchberger criterion from scratch: every S-pair of basis
    /// elements reduces to zero.
    pub fn verify_spairs(&self) -> bool {
        for i in 0..self.gens.len() {
            for j in (i + 1)..self.gens.len() {
                if let Some((s, _, _)) = spoly(self.ambient.field, &self.gens[i], &self.gens[j]) {
                    if !reduce_full(&s, &self.gens).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Dimension of the degree-`d` piece of the submodule, counted through
    /// lead terms: total monomials minus standard monomials.
    pub fn submodule_dim(&self, d: i64) -> i64 {
        let mut total = 0i64;
        for (i, a) in self.ambient.twists.iter().enumerate() {
            let e = d - a;
            if e < 0 {
                continue;
            }
            let leads: Vec<&Monomial> = self
                .gens
                .iter()
                .filter_map(|g| {
                    let (c, m, _) = g.lead()?;
                    (c == i).then_some(m)
                })
                .collect();
            for m in crate::monomial::monomials_of_degree(self.ambient.nvars, e) {
                if leads.iter().any(|l| l.divides(&m)) {
                    total += 1;
                }
            }
        }
        total
    }

    /// Numerator `h(t)` of the Hilbert series `h(t)/(1-t)^nvars` of the
    /// quotient `F/m`.
    pub fn quotient_hilbert_numerator(&self) -> Vec<i64> {
        hilbert::quotient_numerator(&self.ambient, &self.gens)
    }
}

/// Generators of the syzygy module `{(c_1..c_m) : sum c_i g_i = 0}` of the
/// given module elements, inside a free module with one slot per generator,
/// twisted by the generator degrees. The returned set is minimalized and
/// every element back-substitutes to zero.
pub fn syzygies(
    ambient: &FreeAmbient,
    gens: &[FreeModuleElem],
) -> Result<(FreeAmbient, Vec<FreeModuleElem>)> {
    let field = ambient.field;
    let nvars = ambient.nvars;
    let syz_ambient = FreeAmbient::new(field, nvars, gens.iter().map(|g| g.degree()).collect());
    if gens.is_empty() {
        return Ok((syz_ambient, Vec::new()));
    }
    let (basis, cofactors) = buchberger_tracked(ambient, gens);
    let mut raw: Vec<FreeModuleElem> = Vec::new();
    // Schreyer generators: one relation per same-component S-pair of the
    // final basis, pushed down to the original generators through the
    // tracked cofactors.
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let Some((s, ui, uj)) = spoly(field, &basis[i], &basis[j]) else {
                continue;
            };
            let (rem, cofs) = reduce_tracked(field, nvars, &s, &basis);
            debug_assert!(rem.is_zero(), "S-pair of a Groebner basis must reduce to zero");
            let deg = basis[i].degree() + ui.degree() as i64;
            let mut rep: Vec<HPoly> = gens
                .iter()
                .map(|h| HPoly::zero(field, nvars, deg - h.degree()))
                .collect();
            accumulate(field, &mut rep, &cofactors[i], &ui, false);
            accumulate(field, &mut rep, &cofactors[j], &uj, true);
            for (k, q) in cofs.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                accumulate_poly(field, &mut rep, &cofactors[k], q, true);
            }
            let elem = syz_ambient.elem(rep)?;
            if !elem.is_zero() {
                raw.push(elem);
            }
        }
    }
    let minimal = minimalize(&syz_ambient, raw);
    if cfg!(debug_assertions) {
        for s in &minimal {
            debug_assert!(back_substitutes(ambient, gens, s), "syzygy fails back-substitution");
        }
    }
    Ok((syz_ambient, minimal))
}

/// Checks `sum c_i g_i = 0` exactly.
pub fn back_substitutes(ambient: &FreeAmbient, gens: &[FreeModuleElem], syz: &FreeModuleElem) -> bool {
    let mut acc = ambient.zero_elem(syz.degree());
    for (c, g) in syz.components().iter().zip(gens) {
        for (m, k) in c.terms() {
            acc = acc.sub_scaled(&ambient.field.neg(k), m, g);
        }
    }
    acc.is_zero()
}

/// Greedy minimal generating set: process candidates by increasing degree and
/// keep the ones not generated by previously kept elements. For graded
/// modules this yields a minimal generating set.
pub fn minimalize(ambient: &FreeAmbient, mut cands: Vec<FreeModuleElem>) -> Vec<FreeModuleElem> {
    cands.retain(|e| !e.is_zero());
    cands.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| {
            let (ca, ma, _) = a.lead().expect("nonzero");
            let (cb, mb, _) = b.lead().expect("nonzero");
            pot_cmp((ca, ma), (cb, mb)).reverse()
        })
    });
    let mut kept: Vec<FreeModuleElem> = Vec::new();
    let mut gb: Option<GroebnerBasis> = None;
    for cand in cands {
        let redundant = match &gb {
            None => false,
            Some(g) => g.contains(&cand).expect("same ambient"),
        };
        if redundant {
            continue;
        }
        kept.push(cand);
        gb = Some(buchberger(ambient, &kept));
    }
    kept
}

/// Colon module `m : f = {e in F : f e in m}` by the syzygy trick.
pub fn colon_elem(
    ambient: &FreeAmbient,
    gens: &[FreeModuleElem],
    f: &HPoly,
) -> Result<Vec<FreeModuleElem>> {
    let field = ambient.field;
    let nvars = ambient.nvars;
    let rank = ambient.rank();
    let mut combined: Vec<FreeModuleElem> = gens.to_vec();
    // f * e_j for each free-module slot
    for j in 0..rank {
        let mut comps: Vec<HPoly> = (0..rank)
            .map(|_| HPoly::zero(field, nvars, f.degree()))
            .collect();
        comps[j] = f.clone();
        combined.push(ambient.elem(comps)?);
    }
    let (_, syz) = syzygies(ambient, &combined)?;
    let mut out = Vec::new();
    for s in syz {
        let comps = s.components();
        let tail = &comps[gens.len()..];
        if tail.iter().all(|c| c.is_zero()) {
            continue;
        }
        let elem = ambient.elem(tail.to_vec())?;
        out.push(elem);
    }
    Ok(minimalize(ambient, out))
}

/// Intersection of two submodules of the same free module.
pub fn intersect(
    ambient: &FreeAmbient,
    a: &[FreeModuleElem],
    b: &[FreeModuleElem],
) -> Result<Vec<FreeModuleElem>> {
    let field = ambient.field;
    let mut combined: Vec<FreeModuleElem> = a.to_vec();
    combined.extend_from_slice(b);
    let (_, syz) = syzygies(ambient, &combined)?;
    let mut out = Vec::new();
    for s in syz {
        // sum over the a-part gives an element of m_a ∩ m_b (it equals minus
        // the b-part combination)
        let mut acc = ambient.zero_elem(s.degree());
        for (c, g) in s.components().iter().take(a.len()).zip(a) {
            for (m, k) in c.terms() {
                acc = acc.sub_scaled(&field.neg(k), m, g);
            }
        }
        if !acc.is_zero() {
            out.push(acc);
        }
    }
    Ok(minimalize(ambient, out))
}

/// Saturation `m : (x_0..x_N)^infty` by stabilizing colon-by-variables
/// passes; stabilization is detected through reduced-basis equality.
pub fn saturate(ambient: &FreeAmbient, gens: &[FreeModuleElem]) -> Result<Vec<FreeModuleElem>> {
    let field = ambient.field;
    let mut current: Vec<FreeModuleElem> = minimalize(ambient, gens.to_vec());
    let mut current_gb = buchberger(ambient, &current);
    loop {
        let mut step: Option<Vec<FreeModuleElem>> = None;
        for v in 0..ambient.nvars {
            let xi = HPoly::var(field, v, ambient.nvars);
            let quot = colon_elem(ambient, &current, &xi)?;
            step = Some(match step {
                None => quot,
                Some(acc) => intersect(ambient, &acc, &quot)?,
            });
        }
        let next = step.unwrap_or_default();
        let next_gb = buchberger(ambient, &next);
        if next_gb.gens == current_gb.gens {
            return Ok(current);
        }
        current = next;
        current_gb = next_gb;
    }
}

/// Outcome of the projective support dimension computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportDim {
    Empty,
    Dim(i64),
}

impl std::fmt::Display for SupportDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SupportDim::Empty => write!(f, "empty"),
            SupportDim::Dim(d) => write!(f, "{d}"),
        }
    }
}

/// Dimension of `V(I)` inside `P^N`, read off the degree of the Hilbert
/// polynomial of `S/I`. Saturating first is unnecessary: the Hilbert
/// polynomial of `S/I` and of `S/sat(I)` coincide, and `V(I)` is empty
/// exactly when that polynomial vanishes.
pub fn proj_dim_of_support(field: FieldSpec, nvars: usize, ideal: &[HPoly]) -> Result<SupportDim> {
    let ambient = FreeAmbient::for_ideal(field, nvars);
    let gens: Vec<FreeModuleElem> = ideal
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| FreeModuleElem::from_poly(f.clone()))
        .collect();
    let gb = buchberger(&ambient, &gens);
    let numer = gb.quotient_hilbert_numerator();
    let poly = hilbert::numerator_to_polynomial(&numer, nvars);
    match hilbert::poly_degree(&poly) {
        None => Ok(SupportDim::Empty),
        Some(d) => Ok(SupportDim::Dim(d)),
    }
}

/// Jacobian smoothness certificate for a hypersurface `V(f)`: true exactly
/// when the partials have empty common projective zero locus. Refused when
/// the characteristic divides `deg f` (the Euler relation would be lost).
pub fn smoothness_certificate(f: &HPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Precondition("smoothness of the zero polynomial".into()));
    }
    let d = f.degree();
    let p = f.field().characteristic();
    if p != 0 && (d as u64) % p == 0 {
        return Err(Error::CharDividesDegree { p, d });
    }
    let partials: Vec<HPoly> = (0..f.nvars()).map(|i| f.partial(i)).collect();
    Ok(proj_dim_of_support(f.field(), f.nvars(), &partials)? == SupportDim::Empty)
}

//! Constructors for Lazarsfeld-Mukai kernel instances on `P^N`: direct,
//! seeded-random, pulled back along a finite self-map of projective space,
//! plus kernel bundles of linear systems and the explicit destabilizing
//! subsheaf when the slope inequality admits one.

use crate::field::FieldSpec;
use crate::groebner::{self, SupportDim};
use crate::linalg::{dim_s, graded_mult_matrix};
use crate::poly::HPoly;
use crate::sheaf::{ChernSlopeData, GradedSubmodule};
use crate::{Error, Result};
use num::rational::Ratio;
use rand_core::SeedableRng;

/// Bounded deterministic retry budget for genericity failures.
pub const MAX_SAMPLING_ATTEMPTS: u32 = 32;

/// Codimension of the base locus `Z(V)` inside the divisor `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodimZd {
    Empty,
    Codim(i64),
}

impl std::fmt::Display for CodimZd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CodimZd::Empty => write!(f, "empty"),
            CodimZd::Codim(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothStatus {
    Verified,
    Overridden,
}

/// Verified facts recorded at construction time.
#[derive(Debug, Clone)]
pub struct PreconditionRecord {
    pub smooth_f: SmoothStatus,
    pub independent_mod_f: bool,
    pub codim_zd: CodimZd,
    pub retries: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Direct,
    Pullback { d_map: i64, m: i64 },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Direct => write!(f, "direct"),
            Provenance::Pullback { d_map, m } => write!(f, "pullback dmap={d_map} m={m}"),
        }
    }
}

/// A constructed kernel instance: the triple `(D = V(f), O(l)|_D, span g_i)`
/// together with the kernel module for the associated rank-`r` sheaf.
#[derive(Debug, Clone)]
pub struct LmInstance {
    pub n: i64,
    pub d: i64,
    pub l: i64,
    pub r: i64,
    pub field: FieldSpec,
    pub f: HPoly,
    pub gens: Vec<HPoly>,
    pub kernel: GradedSubmodule,
    pub chern: ChernSlopeData,
    pub tag: Provenance,
    pub seed: Option<u64>,
    pub preconditions: PreconditionRecord,
}

/// Kernel bundle data `ker(S^{|W|} -> S(d))` for a subsystem `W` of degree-`d`
/// forms.
#[derive(Debug, Clone)]
pub struct KernelBundleInstance {
    pub n: i64,
    pub d: i64,
    pub w: Vec<HPoly>,
    pub module: GradedSubmodule,
    pub chern: ChernSlopeData,
    pub basepoint_free: bool,
    pub full_w: bool,
    pub seed: Option<u64>,
}

fn nvars_of(n: i64) -> usize {
    (n + 1) as usize
}

/// Linear independence of the generator classes modulo `f`, via the degree-0
/// kernel of the evaluation matrix.
fn independent_mod_f(gens: &[HPoly], f: &HPoly) -> Result<bool> {
    let pairs: Vec<(HPoly, i64)> = gens.iter().map(|g| (g.clone(), 0)).collect();
    let gm = graded_mult_matrix(&pairs, Some(f), 0)?;
    Ok(gm.matrix.kernel_basis().is_empty())
}

/// Codimension of `Z_D(V) = V(f, g_1..g_r)` inside the hypersurface `D`.
pub fn codim_zd_of(field: FieldSpec, n: i64, f: &HPoly, gens: &[HPoly]) -> Result<CodimZd> {
    let mut ideal = vec![f.clone()];
    ideal.extend_from_slice(gens);
    match groebner::proj_dim_of_support(field, nvars_of(n), &ideal)? {
        SupportDim::Empty => Ok(CodimZd::Empty),
        SupportDim::Dim(dim) => Ok(CodimZd::Codim(n - 1 - dim)),
    }
}

/// Builds and verifies an instance from explicit data. The kernel is the
/// projection of the syzygies of `(g_1..g_r, f)` to the first `r`
/// coordinates, i.e. exactly `{(a_1..a_r) : sum a_i g_i in (f)}`.
/// The constructor refuses data violating the structural facts
/// (rank `r`, `c1 = -d`, no sections) rather than returning a bad instance.
pub fn construct_lm(
    field: FieldSpec,
    n: i64,
    d: i64,
    l: i64,
    r: i64,
    f: HPoly,
    gens: Vec<HPoly>,
    allow_singular: bool,
) -> Result<LmInstance> {
    construct_lm_tagged(field, n, d, l, r, f, gens, allow_singular, Provenance::Direct, None, 0)
}

#[allow(clippy::too_many_arguments)]
fn construct_lm_tagged(
    field: FieldSpec,
    n: i64,
    d: i64,
    l: i64,
    r: i64,
    f: HPoly,
    gens: Vec<HPoly>,
    allow_singular: bool,
    tag: Provenance,
    seed: Option<u64>,
    retries: u32,
) -> Result<LmInstance> {
    if n < 2 {
        return Err(Error::Precondition(format!("need N >= 2, got {n}")));
    }
    if d < 1 || l < 1 {
        return Err(Error::Precondition(format!("need d >= 1 and l >= 1, got d={d}, l={l}")));
    }
    if r < 2 || gens.len() as i64 != r {
        return Err(Error::Precondition(format!(
            "need r >= 2 generators, got r={r} with {} generators",
            gens.len()
        )));
    }
    let nvars = nvars_of(n);
    if f.is_zero() || f.degree() != d || f.nvars() != nvars || f.field() != field {
        return Err(Error::Precondition(format!(
            "f must be a nonzero degree-{d} form on P^{n} over {field}"
        )));
    }
    for g in &gens {
        if g.is_zero() || g.degree() != l || g.nvars() != nvars || g.field() != field {
            return Err(Error::Precondition(format!(
                "generators must be nonzero degree-{l} forms on P^{n} over {field}"
            )));
        }
    }
    let smooth_f = if allow_singular {
        SmoothStatus::Overridden
    } else if groebner::smoothness_certificate(&f)? {
        SmoothStatus::Verified
    } else {
        return Err(Error::Precondition("f is not smooth (pass the reduced-irreducible override to proceed)".into()));
    };
    if !independent_mod_f(&gens, &f)? {
        return Err(Error::Precondition("generators are linearly dependent modulo f".into()));
    }
    let codim_zd = codim_zd_of(field, n, &f, &gens)?;
    let kernel = GradedSubmodule::from_kernel(field, nvars, gens.clone(), Some(f.clone()))?;
    let chern = kernel.rank_c1()?;
    if chern.rank != r || chern.c1 != -d {
        return Err(Error::Inconsistency(format!(
            "kernel invariants (rank, c1) = ({}, {}) off the expected ({r}, {})",
            chern.rank, chern.c1, -d
        )));
    }
    if kernel.h0_twist(0) != 0 {
        return Err(Error::Inconsistency("kernel has unexpected global sections".into()));
    }
    Ok(LmInstance {
        n,
        d,
        l,
        r,
        field,
        f,
        gens,
        kernel,
        chern,
        tag,
        seed,
        preconditions: PreconditionRecord {
            smooth_f,
            independent_mod_f: true,
            codim_zd,
            retries,
        },
    })
}

/// Codimension of the base locus of the instance inside `D`.
pub fn codim_zd(inst: &LmInstance) -> CodimZd {
    inst.preconditions.codim_zd
}

/// Seeded random instance over the locus where all genericity preconditions
/// hold: smooth `f`, independent generators mod `f`, and base-locus
/// codimension `r` in `D` (empty when `r` exceeds `dim D`). Failed draws
/// advance deterministically through the seed stream, boundedly.
pub fn sample_lm(field: FieldSpec, n: i64, d: i64, l: i64, r: i64, seed: u64) -> Result<LmInstance> {
    if n < 2 || d < 1 || l < 1 || r < 2 {
        return Err(Error::Precondition(format!(
            "parameter sanity failed: n={n}, d={d}, l={l}, r={r}"
        )));
    }
    let nvars = nvars_of(n);
    let dim_sfl = dim_s(nvars, l) - dim_s(nvars, l - d);
    if r > dim_sfl {
        return Err(Error::Sampling {
            predicate: format!("r = {r} exceeds dim (S/f)_{l} = {dim_sfl}; independence impossible"),
            attempts: 0,
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut last_failure = String::new();
    for attempt in 0..MAX_SAMPLING_ATTEMPTS {
        let f = HPoly::random_from_rng(field, d, nvars, &mut rng);
        let gens: Vec<HPoly> = (0..r)
            .map(|_| HPoly::random_from_rng(field, l, nvars, &mut rng))
            .collect();
        match groebner::smoothness_certificate(&f) {
            Err(e @ Error::CharDividesDegree { .. }) => return Err(e),
            Err(e) => return Err(e),
            Ok(false) => {
                last_failure = "smoothness of f".into();
                continue;
            }
            Ok(true) => {}
        }
        if !independent_mod_f(&gens, &f)? {
            last_failure = "independence of generators mod f".into();
            continue;
        }
        let codim = codim_zd_of(field, n, &f, &gens)?;
        let expected_ok = if r <= n - 1 {
            codim == CodimZd::Codim(r)
        } else {
            codim == CodimZd::Empty
        };
        if !expected_ok {
            last_failure = format!("codim_D Z(V) = {codim}, expected {}", if r <= n - 1 {
                r.to_string()
            } else {
                "empty".to_string()
            });
            continue;
        }
        return construct_lm_tagged(
            field,
            n,
            d,
            l,
            r,
            f,
            gens,
            false,
            Provenance::Direct,
            Some(seed),
            attempt,
        );
    }
    Err(Error::Sampling { predicate: last_failure, attempts: MAX_SAMPLING_ATTEMPTS })
}

/// Which sections span a kernel bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WSpec {
    /// The complete system: every degree-`d` monomial.
    Full,
    /// `k` random degree-`d` forms.
    Random(usize),
}

/// Kernel bundle `ker(W ⊗ S -> S(d))` of a subsystem `W`. Construction
/// succeeds even with base points, but the basepoint-free flag gates the
/// stability rules downstream.
pub fn construct_kernel_bundle(
    field: FieldSpec,
    n: i64,
    d: i64,
    spec: WSpec,
    seed: u64,
) -> Result<KernelBundleInstance> {
    if n < 2 || d < 1 {
        return Err(Error::Precondition(format!("need N >= 2 and d >= 1, got {n}, {d}")));
    }
    let nvars = nvars_of(n);
    let full_count = dim_s(nvars, d) as usize;
    let (w, full_w) = match spec {
        WSpec::Full => {
            let w: Vec<HPoly> = crate::monomial::monomials_of_degree(nvars, d)
                .into_iter()
                .map(|m| HPoly::term(field, nvars, m, field.one()))
                .collect();
            (w, true)
        }
        WSpec::Random(k) => {
            if k < 2 {
                return Err(Error::Precondition("need |W| >= 2".into()));
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut last = String::new();
            let mut found: Option<Vec<HPoly>> = None;
            for _ in 0..MAX_SAMPLING_ATTEMPTS {
                let w: Vec<HPoly> = (0..k)
                    .map(|_| HPoly::random_from_rng(field, d, nvars, &mut rng))
                    .collect();
                // demand linear independence of the span
                let pairs: Vec<(HPoly, i64)> = w.iter().map(|g| (g.clone(), 0)).collect();
                let gm = graded_mult_matrix(&pairs, None, 0)?;
                if !gm.matrix.kernel_basis().is_empty() {
                    last = "independence of W".into();
                    continue;
                }
                found = Some(w);
                break;
            }
            let w = found.ok_or(Error::Sampling { predicate: last, attempts: MAX_SAMPLING_ATTEMPTS })?;
            (w, k == full_count)
        }
    };
    let basepoint_free =
        groebner::proj_dim_of_support(field, nvars, &w)? == SupportDim::Empty;
    let module = GradedSubmodule::from_kernel(field, nvars, w.clone(), None)?;
    let chern = module.rank_c1()?;
    if basepoint_free && chern.rank != w.len() as i64 - 1 {
        return Err(Error::Inconsistency(format!(
            "basepoint-free kernel bundle of rank {}, expected {}",
            chern.rank,
            w.len() - 1
        )));
    }
    if basepoint_free && chern.c1 != -d {
        return Err(Error::Inconsistency(format!(
            "kernel bundle c1 = {}, expected {}",
            chern.c1, -d
        )));
    }
    Ok(KernelBundleInstance {
        n,
        d,
        w,
        module,
        chern,
        basepoint_free,
        full_w,
        seed: Some(seed),
    })
}

/// Instance pulled back along a finite self-map of `P^N` given by `N + 1`
/// degree-`d_map` forms with empty common zero locus. The hyperplane datum is
/// `r` independent degree-`m` forms in the last `N` dummy coordinates; their
/// substitution gives the generators, `f = s_0`, `l = m * d_map`.
pub fn construct_pullback_instance(
    field: FieldSpec,
    n: i64,
    d_map: i64,
    m: i64,
    r: i64,
    seed: u64,
) -> Result<LmInstance> {
    if n < 2 || d_map < 1 || m < 1 {
        return Err(Error::Precondition(format!(
            "parameter sanity failed: n={n}, dmap={d_map}, m={m}"
        )));
    }
    let bound = crate::linalg::binom(n - 1 + m, m);
    if r < 2 || r > bound {
        return Err(Error::Precondition(format!(
            "need 2 <= r <= C(N-1+m, m) = {bound}, got r = {r}"
        )));
    }
    let nvars = nvars_of(n);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut last_failure = String::new();
    for attempt in 0..MAX_SAMPLING_ATTEMPTS {
        let maps: Vec<HPoly> = (0..nvars)
            .map(|_| HPoly::random_from_rng(field, d_map, nvars, &mut rng))
            .collect();
        if groebner::proj_dim_of_support(field, nvars, &maps)? != SupportDim::Empty {
            last_failure = "finiteness of the map (common zeros of s_0..s_N)".into();
            continue;
        }
        match groebner::smoothness_certificate(&maps[0]) {
            Err(e) => return Err(e),
            Ok(false) => {
                last_failure = "smoothness of s_0".into();
                continue;
            }
            Ok(true) => {}
        }
        // r independent degree-m forms avoiding the first dummy coordinate
        let hyperplane_forms: Option<Vec<HPoly>> = (|| {
            for _ in 0..MAX_SAMPLING_ATTEMPTS {
                let small: Vec<HPoly> = (0..r)
                    .map(|_| HPoly::random_from_rng(field, m, nvars - 1, &mut rng))
                    .collect();
                let lifted: Vec<HPoly> = small
                    .iter()
                    .map(|p| {
                        HPoly::from_terms(
                            field,
                            nvars,
                            m,
                            p.terms().iter().map(|(mono, c)| {
                                let mut exps = vec![0u16];
                                exps.extend_from_slice(mono.exps());
                                (crate::monomial::Monomial::new(smallvec::SmallVec::from_vec(exps)), c.clone())
                            }),
                        )
                        .expect("lift is homogeneous")
                    })
                    .collect();
                let pairs: Vec<(HPoly, i64)> = lifted.iter().map(|g| (g.clone(), 0)).collect();
                let gm = graded_mult_matrix(&pairs, None, 0).expect("consistent");
                if gm.matrix.kernel_basis().is_empty() {
                    return Some(lifted);
                }
            }
            None
        })();
        let Some(vprime) = hyperplane_forms else {
            last_failure = "independence of the hyperplane forms".into();
            continue;
        };
        let gens: Vec<HPoly> = vprime
            .iter()
            .map(|p| p.substitute(&maps))
            .collect::<Result<_>>()?;
        let f = maps[0].clone();
        match construct_lm_tagged(
            field,
            n,
            d_map,
            m * d_map,
            r,
            f,
            gens,
            false,
            Provenance::Pullback { d_map, m },
            Some(seed),
            attempt,
        ) {
            Ok(inst) => return Ok(inst),
            Err(Error::Precondition(msg)) => {
                last_failure = format!("pullback instance precondition: {msg}");
                continue;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Sampling { predicate: last_failure, attempts: MAX_SAMPLING_ATTEMPTS })
}

/// An explicit destabilizing subsheaf with its slope comparison.
#[derive(Debug, Clone)]
pub struct DestabilizerWitness {
    pub module: GradedSubmodule,
    pub witness_chern: ChernSlopeData,
    pub mu_witness: Ratio<i64>,
    pub mu_kernel: Ratio<i64>,
}

/// When `0 < l < d (r-1) / r`, the syzygy module of the generators alone is a
/// rank-`(r-1)` subsheaf of slope `-l/(r-1)`, strictly above the kernel's
/// `-d/r`. Needs the ambient base locus `Z_X(V)` to have codimension `r`
/// (empty when `r > N`); returns `None` when the slope inequality fails.
pub fn destabilizer_witness(inst: &LmInstance) -> Result<Option<DestabilizerWitness>> {
    if inst.l * inst.r >= inst.d * (inst.r - 1) {
        return Ok(None);
    }
    let nvars = nvars_of(inst.n);
    let codim_ok = match groebner::proj_dim_of_support(inst.field, nvars, &inst.gens)? {
        SupportDim::Empty => inst.r >= inst.n + 1,
        SupportDim::Dim(dim) => inst.n - dim == inst.r,
    };
    if !codim_ok {
        return Err(Error::WitnessUnavailable(
            "ambient base locus has codimension below r; resample the instance".into(),
        ));
    }
    let module = GradedSubmodule::from_kernel(inst.field, nvars, inst.gens.clone(), None)?;
    let wc = module.rank_c1()?;
    if wc.rank != inst.r - 1 || wc.c1 != -inst.l {
        return Err(Error::WitnessUnavailable(format!(
            "witness invariants (rank, c1) = ({}, {}), expected ({}, {})",
            wc.rank,
            wc.c1,
            inst.r - 1,
            -inst.l
        )));
    }
    // membership: every witness generator lies in the kernel
    for g in module.generators() {
        if !inst.kernel.gb().contains(g)? {
            return Err(Error::Inconsistency(
                "witness generator escapes the kernel module".into(),
            ));
        }
    }
    let mu_witness = Ratio::new(-inst.l, inst.r - 1);
    let mu_kernel = Ratio::new(-inst.d, inst.r);
    debug_assert!(mu_witness > mu_kernel);
    Ok(Some(DestabilizerWitness { module, witness_chern: wc, mu_witness, mu_kernel }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalFreeness {
    LocallyFree,
    Undetermined,
}

impl std::fmt::Display for LocalFreeness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LocalFreeness::LocallyFree => write!(f, "LocallyFree"),
            LocalFreeness::Undetermined => write!(f, "Undetermined"),
        }
    }
}

/// One-sided probe: an empty base locus certifies local freeness; anything
/// else stays undetermined.
pub fn local_freeness_probe(inst: &LmInstance) -> LocalFreeness {
    match inst.preconditions.codim_zd {
        CodimZd::Empty => LocalFreeness::LocallyFree,
        CodimZd::Codim(_) => LocalFreeness::Undetermined,
    }
}

/// Canonical plain-text serialization of an instance; `read_instance` is its
/// exact inverse.
pub fn write_instance(inst: &LmInstance) -> String {
    let mut s = String::new();
    s.push_str("lm-instance v1\n");
    s.push_str(&format!("field {}\n", inst.field));
    s.push_str(&format!("n {}\n", inst.n));
    s.push_str(&format!("d {}\n", inst.d));
    s.push_str(&format!("l {}\n", inst.l));
    s.push_str(&format!("r {}\n", inst.r));
    if let Some(seed) = inst.seed {
        s.push_str(&format!("seed {seed}\n"));
    }
    s.push_str(&format!("tag {}\n", inst.tag));
    if inst.preconditions.smooth_f == SmoothStatus::Overridden {
        s.push_str("allow-singular true\n");
    }
    s.push_str(&format!("f {}\n", inst.f));
    for g in &inst.gens {
        s.push_str(&format!("g {g}\n"));
    }
    s
}

/// Parses the instance format and reconstructs (and so re-verifies) the
/// instance.
pub fn read_instance(text: &str) -> Result<LmInstance> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    if header.trim() != "lm-instance v1" {
        return Err(Error::Parse(format!("bad header `{header}`")));
    }
    let mut field = None;
    let mut n = None;
    let mut d = None;
    let mut l = None;
    let mut r = None;
    let mut seed = None;
    let mut tag = Provenance::Direct;
    let mut allow_singular = false;
    let mut f_text: Option<String> = None;
    let mut g_texts: Vec<String> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("bad instance line `{line}`")))?;
        let value = value.trim();
        let parse_i64 = |v: &str| {
            v.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer `{v}`")))
        };
        match key {
            "field" => field = Some(FieldSpec::parse(value)?),
            "n" => n = Some(parse_i64(value)?),
            "d" => d = Some(parse_i64(value)?),
            "l" => l = Some(parse_i64(value)?),
            "r" => r = Some(parse_i64(value)?),
            "seed" => {
                seed = Some(value.parse::<u64>().map_err(|_| {
                    Error::Parse(format!("bad seed `{value}`"))
                })?)
            }
            "tag" => {
                tag = if value == "direct" {
                    Provenance::Direct
                } else if let Some(rest) = value.strip_prefix("pullback ") {
                    let mut d_map = None;
                    let mut m = None;
                    for part in rest.split_whitespace() {
                        if let Some(v) = part.strip_prefix("dmap=") {
                            d_map = Some(parse_i64(v)?);
                        } else if let Some(v) = part.strip_prefix("m=") {
                            m = Some(parse_i64(v)?);
                        }
                    }
                    match (d_map, m) {
                        (Some(d_map), Some(m)) => Provenance::Pullback { d_map, m },
                        _ => return Err(Error::Parse(format!("bad pullback tag `{value}`"))),
                    }
                } else {
                    return Err(Error::Parse(format!("bad tag `{value}`")));
                }
            }
            "allow-singular" => allow_singular = value == "true",
            "f" => f_text = Some(value.to_string()),
            "g" => g_texts.push(value.to_string()),
            other => return Err(Error::Parse(format!("unknown instance key `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| Error::Parse("missing field".into()))?;
    let n = n.ok_or_else(|| Error::Parse("missing n".into()))?;
    let d = d.ok_or_else(|| Error::Parse("missing d".into()))?;
    let l = l.ok_or_else(|| Error::Parse("missing l".into()))?;
    let r = r.ok_or_else(|| Error::Parse("missing r".into()))?;
    let f_text = f_text.ok_or_else(|| Error::Parse("missing f".into()))?;
    let nvars = nvars_of(n);
    let f = HPoly::parse(&f_text, field, nvars)?;
    let gens = g_texts
        .iter()
        .map(|t| HPoly::parse(t, field, nvars))
        .collect::<Result<Vec<_>>>()?;
    let mut inst =
        construct_lm_tagged(field, n, d, l, r, f, gens, allow_singular, tag, seed, 0)?;
    inst.seed = seed;
    Ok(inst)
}

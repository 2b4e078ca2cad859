//! Certificate-producing slope-stability verdicts. Each rule either declines
//! or emits a certificate whose recorded evidence suffices to re-derive its
//! status without recomputing Groebner data; the verdict merges certificate
//! statuses and treats any Stable/Semistable vs NotSemistable clash as an
//! internal error.

use crate::lm::{self, KernelBundleInstance, LmInstance, Provenance};
use crate::linalg::binom;
use crate::sheaf::{normalize_twist, ChernSlopeData, GradedSubmodule, Splitting};
use crate::{Error, Result};
use num::integer::gcd;
use num::rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Stable,
    Semistable,
    NotSemistable,
    Undetermined,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Stable => write!(f, "Stable"),
            Status::Semistable => write!(f, "Semistable"),
            Status::NotSemistable => write!(f, "NotSemistable"),
            Status::Undetermined => write!(f, "Undetermined"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    CyclicD1,
    OkonekRank2,
    Destabilizer,
    Pullback,
    CoprimeUpgrade,
    LineProbe,
    KernelBundleD1,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RuleId::CyclicD1 => write!(f, "R1_CyclicD1"),
            RuleId::OkonekRank2 => write!(f, "R2_OkonekRank2"),
            RuleId::Destabilizer => write!(f, "R3_Destabilizer"),
            RuleId::Pullback => write!(f, "R4_Pullback"),
            RuleId::CoprimeUpgrade => write!(f, "R5_CoprimeUpgrade"),
            RuleId::LineProbe => write!(f, "R6_LineProbe"),
            RuleId::KernelBundleD1 => write!(f, "R7_KernelBundleD1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvVal {
    Int(i64),
    Rat(Ratio<i64>),
    IntList(Vec<i64>),
    Bool(bool),
    Text(String),
}

impl std::fmt::Display for EvVal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvVal::Int(v) => write!(f, "{v}"),
            EvVal::Rat(r) => {
                if *r.denom() == 1 {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            EvVal::IntList(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            EvVal::Bool(b) => write!(f, "{b}"),
            EvVal::Text(t) => write!(f, "{t}"),
        }
    }
}

/// A fired rule with its computed evidence. `status` is `None` for
/// corroboration-only certificates (the untrusted line probe).
#[derive(Debug, Clone)]
pub struct Certificate {
    pub rule: RuleId,
    pub status: Option<Status>,
    pub citation: String,
    pub evidence: Vec<(&'static str, EvVal)>,
}

impl Certificate {
    pub fn evidence_int(&self, key: &str) -> Option<i64> {
        self.evidence.iter().find_map(|(k, v)| match v {
            EvVal::Int(x) if *k == key => Some(*x),
            _ => None,
        })
    }

    pub fn evidence_rat(&self, key: &str) -> Option<Ratio<i64>> {
        self.evidence.iter().find_map(|(k, v)| match v {
            EvVal::Rat(x) if *k == key => Some(*x),
            _ => None,
        })
    }

    pub fn evidence_list(&self, key: &str) -> Option<&[i64]> {
        self.evidence.iter().find_map(|(k, v)| match v {
            EvVal::IntList(x) if *k == key => Some(x.as_slice()),
            _ => None,
        })
    }

    /// Rederives the status from the stored evidence alone (gcds, slopes and
    /// section counts are recomputed, no Groebner data touched).
    pub fn reverify(&self) -> bool {
        match self.rule {
            RuleId::CyclicD1 => {
                self.evidence_int("h0_at_0") == Some(0)
                    && self.evidence_int("c1") == Some(-1)
                    && self.status == Some(Status::Stable)
            }
            RuleId::OkonekRank2 => {
                let (Some(c1), Some(k), Some(h_norm)) = (
                    self.evidence_int("c1"),
                    self.evidence_int("k_norm"),
                    self.evidence_int("h0_norm"),
                ) else {
                    return false;
                };
                if normalize_twist(c1) != k {
                    return false;
                }
                let expected = if h_norm == 0 {
                    Status::Stable
                } else if c1 % 2 == 0 {
                    match self.evidence_int("h0_semi") {
                        Some(0) => Status::Semistable,
                        Some(_) => Status::NotSemistable,
                        None => return false,
                    }
                } else {
                    Status::NotSemistable
                };
                self.status == Some(expected)
            }
            RuleId::Destabilizer => {
                let (Some(rw), Some(cw), Some(rk), Some(ck), Some(mw), Some(mk)) = (
                    self.evidence_int("witness_rank"),
                    self.evidence_int("witness_c1"),
                    self.evidence_int("rank"),
                    self.evidence_int("c1"),
                    self.evidence_rat("mu_witness"),
                    self.evidence_rat("mu_kernel"),
                ) else {
                    return false;
                };
                rw < rk
                    && mw == Ratio::new(cw, rw)
                    && mk == Ratio::new(ck, rk)
                    && mw > mk
                    && self.status == Some(Status::NotSemistable)
            }
            RuleId::Pullback => {
                let (Some(n), Some(m), Some(r)) = (
                    self.evidence_int("n"),
                    self.evidence_int("m"),
                    self.evidence_int("r"),
                ) else {
                    return false;
                };
                r >= 2 && r <= binom(n - 1 + m, m) && self.status == Some(Status::Semistable)
            }
            RuleId::CoprimeUpgrade => {
                let (Some(r), Some(d)) = (self.evidence_int("rank"), self.evidence_int("d"))
                else {
                    return false;
                };
                gcd(r, d) == 1 && self.status == Some(Status::Stable)
            }
            RuleId::LineProbe => {
                let Some(split) = self.evidence_list("splitting") else {
                    return false;
                };
                let gap = max_gap(split);
                let all_equal = split.windows(2).all(|w| w[0] == w[1]);
                if gap >= 2 {
                    self.evidence_int("max_gap") == Some(gap)
                        && matches!(self.status, None | Some(Status::NotSemistable))
                } else if all_equal {
                    matches!(self.status, None | Some(Status::Semistable))
                } else {
                    false
                }
            }
            RuleId::KernelBundleD1 => {
                let (Some(d), Some(wlen), Some(n)) = (
                    self.evidence_int("d"),
                    self.evidence_int("w_len"),
                    self.evidence_int("n"),
                ) else {
                    return false;
                };
                let full = self.evidence_int("full_w") == Some(1);
                let expected = if d == 1 && full {
                    Status::Stable
                } else if wlen == n + 1 || full {
                    Status::Semistable
                } else {
                    return false;
                };
                if expected == Status::Stable && self.evidence_int("h0_at_0") != Some(0) {
                    return false;
                }
                self.status == Some(expected)
            }
        }
    }
}

/// Final verdict: merged status, every fired certificate, and the slope data
/// that is always part of the evidence.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub certificates: Vec<Certificate>,
    pub chern: ChernSlopeData,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    /// Number of random lines for the splitting probe; 0 disables it.
    pub trials: u32,
    pub probe_seed: u64,
    /// Let the line probe contribute a status instead of evidence only.
    pub trust_line_probe: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { trials: 0, probe_seed: 1, trust_line_probe: false }
    }
}

pub enum CertifyTarget<'a> {
    Lm(&'a LmInstance),
    KernelBundle(&'a KernelBundleInstance),
}

/// Degree-one instances on projective space are stable: the kernel is
/// reflexive with determinant the dual of the ample generator, its dual
/// receives a generically surjective map from a trivial bundle, and it has
/// no sections.
pub fn rule_cyclic_d1(inst: &LmInstance) -> Option<Certificate> {
    if inst.d != 1 {
        return None;
    }
    let h0 = inst.kernel.h0_twist(0);
    Some(Certificate {
        rule: RuleId::CyclicD1,
        status: Some(Status::Stable),
        citation: "cyclic Picard group: reflexive sheaf with det O(-1), a generically \
                   surjective trivial bundle onto its dual, and no sections is mu-stable"
            .into(),
        evidence: vec![
            ("c1", EvVal::Int(inst.chern.c1)),
            ("rank", EvVal::Int(inst.chern.rank)),
            ("h0_at_0", EvVal::Int(h0)),
        ],
    })
}

/// Rank-2 normalized section test, an if-and-only-if criterion for reflexive
/// sheaves on projective space (Okonek-Schneider-Spindler II.1.2.5).
pub fn rule_okonek_rank2(module: &GradedSubmodule, chern: &ChernSlopeData) -> Option<Certificate> {
    if chern.rank != 2 || !module.is_saturated_flag() {
        return None;
    }
    let c1 = chern.c1;
    let k = normalize_twist(c1);
    let h_norm = module.h0_twist(k);
    let mut evidence = vec![
        ("c1", EvVal::Int(c1)),
        ("rank", EvVal::Int(2)),
        ("k_norm", EvVal::Int(k)),
        ("h0_norm", EvVal::Int(h_norm)),
    ];
    let status = if h_norm == 0 {
        if c1 % 2 == 0 {
            evidence.push(("h0_semi", EvVal::Int(module.h0_twist(k - 1))));
        }
        Status::Stable
    } else if c1 % 2 == 0 {
        let h_semi = module.h0_twist(k - 1);
        evidence.push(("h0_semi", EvVal::Int(h_semi)));
        if h_semi == 0 {
            Status::Semistable
        } else {
            Status::NotSemistable
        }
    } else {
        // odd c1: rank and degree coprime, so semistable and stable coincide
        Status::NotSemistable
    };
    Some(Certificate {
        rule: RuleId::OkonekRank2,
        status: Some(status),
        citation: "rank-2 normalized section test: stable iff H^0(E_norm) = 0; for even c1, \
                   semistable iff H^0(E_norm(-1)) = 0 (Okonek-Schneider-Spindler II.1.2.5)"
            .into(),
        evidence,
    })
}

/// Explicit destabilizing subsheaf when `0 < l < d(r-1)/r`.
pub fn rule_destabilizer(inst: &LmInstance) -> Result<Option<Certificate>> {
    let witness = match lm::destabilizer_witness(inst) {
        Ok(w) => w,
        Err(Error::WitnessUnavailable(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some(w) = witness else {
        return Ok(None);
    };
    Ok(Some(Certificate {
        rule: RuleId::Destabilizer,
        status: Some(Status::NotSemistable),
        citation: "explicit destabilizer: the syzygy subsheaf of the generators has rank r-1, \
                   c1 = -l, and slope -l/(r-1) > -d/r"
            .into(),
        evidence: vec![
            ("witness_rank", EvVal::Int(w.witness_chern.rank)),
            ("witness_c1", EvVal::Int(w.witness_chern.c1)),
            ("rank", EvVal::Int(inst.chern.rank)),
            ("c1", EvVal::Int(inst.chern.c1)),
            ("mu_witness", EvVal::Rat(w.mu_witness)),
            ("mu_kernel", EvVal::Rat(w.mu_kernel)),
            ("membership_checked", EvVal::Bool(true)),
        ],
    }))
}

/// Pullback instances inherit semistability from the stable hyperplane datum
/// along the finite flat covering map.
pub fn rule_pullback(inst: &LmInstance) -> Option<Certificate> {
    let Provenance::Pullback { d_map, m } = inst.tag else {
        return None;
    };
    let bound = binom(inst.n - 1 + m, m);
    if inst.r > bound {
        return None;
    }
    Some(Certificate {
        rule: RuleId::Pullback,
        status: Some(Status::Semistable),
        citation: "pullback of a mu-stable sheaf along a finite flat morphism of projective \
                   spaces is mu-semistable (Maruyama, Lemma 1.17)"
            .into(),
        evidence: vec![
            ("n", EvVal::Int(inst.n)),
            ("d_map", EvVal::Int(d_map)),
            ("m", EvVal::Int(m)),
            ("r", EvVal::Int(inst.r)),
            ("bound", EvVal::Int(bound)),
        ],
    })
}

/// Coprime rank and degree upgrade semistable to stable.
pub fn rule_coprime(rank: i64, d: i64) -> Option<Certificate> {
    if gcd(rank, d) != 1 {
        return None;
    }
    Some(Certificate {
        rule: RuleId::CoprimeUpgrade,
        status: Some(Status::Stable),
        citation: "rank and degree coprime: mu-semistable implies mu-stable \
                   (Huybrechts-Lehn 1.2.14)"
            .into(),
        evidence: vec![
            ("rank", EvVal::Int(rank)),
            ("d", EvVal::Int(d)),
            ("gcd", EvVal::Int(gcd(rank, d))),
        ],
    })
}

fn max_gap(degrees: &[i64]) -> i64 {
    degrees
        .windows(2)
        .map(|w| w[0] - w[1])
        .max()
        .unwrap_or(0)
}

/// Splitting-type probe over random lines. The lexicographically maximal
/// splitting across the trials is taken as the generic one; a gap of two or
/// more is evidence against semistability, a balanced type is evidence for
/// it. Corroboration only unless explicitly trusted.
pub fn rule_line_probe(
    module: &GradedSubmodule,
    chern: &ChernSlopeData,
    trials: u32,
    seed: u64,
    trusted: bool,
) -> Option<Certificate> {
    if trials == 0 {
        return None;
    }
    let splittings: Vec<Splitting> = (0..trials)
        .filter_map(|t| {
            module
                .restrict_to_line(seed.wrapping_add(1000 * t as u64), 8)
                .ok()
        })
        .collect();
    if splittings.is_empty() {
        return None;
    }
    let generic = splittings
        .iter()
        .map(|s| s.degrees.clone())
        .max()
        .expect("nonempty");
    let torsion: i64 = splittings
        .iter()
        .find(|s| s.degrees == generic)
        .map(|s| s.torsion_length)
        .unwrap_or(0);
    let gap = max_gap(&generic);
    let all_equal = generic.windows(2).all(|w| w[0] == w[1]);
    let implied = if gap >= 2 {
        Status::NotSemistable
    } else if all_equal {
        Status::Semistable
    } else {
        return None;
    };
    Some(Certificate {
        rule: RuleId::LineProbe,
        status: trusted.then_some(implied),
        citation: "generic line splitting probe: a semistable sheaf restricts to a general \
                   line with consecutive gaps at most one (Grauert-Muelich)"
            .into(),
        evidence: vec![
            ("splitting", EvVal::IntList(generic)),
            ("max_gap", EvVal::Int(gap)),
            ("torsion_length", EvVal::Int(torsion)),
            ("trials", EvVal::Int(splittings.len() as i64)),
            ("c1", EvVal::Int(chern.c1)),
            ("implied", EvVal::Text(implied.to_string())),
        ],
    })
}

/// Kernel bundles of basepoint-free systems: the complete linear system in
/// degree one gives a stable bundle; a general `(N+1)`-dimensional system is
/// polystable (reported as semistable; polystability is not machine-checked);
/// complete systems in higher degree are semistable.
pub fn rule_kernel_bundle(kb: &KernelBundleInstance) -> Option<Certificate> {
    if !kb.basepoint_free {
        return None;
    }
    let mut evidence = vec![
        ("n", EvVal::Int(kb.n)),
        ("d", EvVal::Int(kb.d)),
        ("w_len", EvVal::Int(kb.w.len() as i64)),
        ("full_w", EvVal::Int(i64::from(kb.full_w))),
        ("rank", EvVal::Int(kb.chern.rank)),
        ("c1", EvVal::Int(kb.chern.c1)),
    ];
    let (status, citation) = if kb.d == 1 && kb.full_w {
        evidence.push(("h0_at_0", EvVal::Int(kb.module.h0_twist(0))));
        (
            Status::Stable,
            "kernel bundle of the coordinate system: det O(-1), trivial bundle onto the \
             dual, no sections, hence mu-stable",
        )
    } else if kb.w.len() as i64 == kb.n + 1 {
        (
            Status::Semistable,
            "kernel bundle of a general (N+1)-dimensional basepoint-free system is \
             mu-polystable (Kempf-type pullback of the coordinate kernel), hence semistable",
        )
    } else if kb.full_w {
        (
            Status::Semistable,
            "kernel bundle of the complete degree-d system is mu-semistable (Flenner)",
        )
    } else {
        return None;
    };
    Some(Certificate {
        rule: RuleId::KernelBundleD1,
        status: Some(status),
        citation: citation.into(),
        evidence,
    })
}

/// Arithmetic identity behind the even-degree restriction argument: on a
/// degree-`d = 2l` divisor both the dual twist and the kernel determinant
/// restrict with the same degree `-l*d`.
pub fn restriction_slope_identity(d: i64, l: i64) -> Result<(i64, i64)> {
    if d != 2 * l {
        return Err(Error::Precondition(format!(
            "restriction slope identity needs d = 2l, got d = {d}, l = {l}"
        )));
    }
    let deg_dual = -l * d;
    let deg_det_k = (l - 2 * l) * d;
    debug_assert_eq!(deg_dual, deg_det_k);
    Ok((deg_dual, deg_det_k))
}

fn merge(certs: Vec<Certificate>, chern: ChernSlopeData) -> Result<Verdict> {
    let statuses: Vec<Status> = certs.iter().filter_map(|c| c.status).collect();
    let any_not = statuses.contains(&Status::NotSemistable);
    let any_pos = statuses
        .iter()
        .any(|s| matches!(s, Status::Stable | Status::Semistable));
    if any_not && any_pos {
        let summary: Vec<String> = certs
            .iter()
            .filter_map(|c| c.status.map(|s| format!("{} -> {s}", c.rule)))
            .collect();
        return Err(Error::Inconsistency(format!(
            "certificates disagree: {}",
            summary.join(", ")
        )));
    }
    let status = if statuses.contains(&Status::Stable) {
        Status::Stable
    } else if statuses.contains(&Status::Semistable) {
        Status::Semistable
    } else if any_not {
        Status::NotSemistable
    } else {
        Status::Undetermined
    };
    Ok(Verdict { status, certificates: certs, chern })
}

/// Applies every applicable rule and merges. The coprime upgrade is scoped to
/// kernel instances, matching the stated coprimality remark; rule disagreement
/// is an internal error, never a user outcome.
pub fn certify(target: CertifyTarget<'_>, options: &CertifyOptions) -> Result<Verdict> {
    match target {
        CertifyTarget::Lm(inst) => {
            let mut certs = Vec::new();
            if let Some(c) = rule_cyclic_d1(inst) {
                certs.push(c);
            }
            if let Some(c) = rule_okonek_rank2(&inst.kernel, &inst.chern) {
                certs.push(c);
            }
            if let Some(c) = rule_destabilizer(inst)? {
                certs.push(c);
            }
            if let Some(c) = rule_pullback(inst) {
                certs.push(c);
            }
            let has_semistable = certs.iter().any(|c| c.status == Some(Status::Semistable));
            let has_not = certs.iter().any(|c| c.status == Some(Status::NotSemistable));
            if has_semistable && !has_not {
                if let Some(c) = rule_coprime(inst.r, inst.d) {
                    certs.push(c);
                }
            }
            if let Some(c) = rule_line_probe(
                &inst.kernel,
                &inst.chern,
                options.trials,
                options.probe_seed,
                options.trust_line_probe,
            ) {
                certs.push(c);
            }
            merge(certs, inst.chern)
        }
        CertifyTarget::KernelBundle(kb) => {
            let mut certs = Vec::new();
            if let Some(c) = rule_kernel_bundle(kb) {
                certs.push(c);
            }
            if let Some(c) = rule_okonek_rank2(&kb.module, &kb.chern) {
                certs.push(c);
            }
            if let Some(c) = rule_line_probe(
                &kb.module,
                &kb.chern,
                options.trials,
                options.probe_seed,
                options.trust_line_probe,
            ) {
                certs.push(c);
            }
            merge(certs, kb.chern)
        }
    }
}

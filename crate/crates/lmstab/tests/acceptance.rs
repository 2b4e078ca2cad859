//! Acceptance suite. Every criterion is exact (no tolerances: the arithmetic
//! is over GF(32003) or the rationals) and prints one PASS/FAIL line; the
//! test fails if any criterion does.

use lmstab::certify::{self, CertifyOptions, CertifyTarget, RuleId, Status, Verdict};
use lmstab::field::FieldSpec;
use lmstab::groebner;
use lmstab::hilbert;
use lmstab::linalg;
use lmstab::lm::{self, CodimZd, LmInstance, WSpec};
use lmstab::module::{FreeAmbient, FreeModuleElem};
use lmstab::poly::HPoly;
use lmstab::sheaf;
use lmstab::Error;

const GF: FieldSpec = FieldSpec::Fp(32003);

struct CriterionOutcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

enum RunError {
    Inconsistency(String),
    Other(String),
}

fn build_and_certify(
    n: i64,
    d: i64,
    l: i64,
    r: i64,
    seed: u64,
) -> Result<(LmInstance, Verdict), RunError> {
    let inst = lm::sample_lm(GF, n, d, l, r, seed).map_err(|e| match e {
        Error::Inconsistency(m) => RunError::Inconsistency(m),
        other => RunError::Other(other.to_string()),
    })?;
    let verdict =
        certify::certify(CertifyTarget::Lm(&inst), &CertifyOptions::default()).map_err(|e| {
            match e {
                Error::Inconsistency(m) => RunError::Inconsistency(m),
                other => RunError::Other(other.to_string()),
            }
        })?;
    Ok((inst, verdict))
}

fn rule_cert<'a>(v: &'a Verdict, rule: RuleId) -> Option<&'a certify::Certificate> {
    v.certificates.iter().find(|c| c.rule == rule)
}

fn lmstab_bin(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_lmstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn acceptance_criteria() {
    let mut results: Vec<CriterionOutcome> = Vec::new();
    let mut inconsistencies: Vec<String> = Vec::new();

    // Shared corpus: the full feasible (N, d, l, r) grid, one seed per combo.
    let mut grid: Vec<(i64, i64, i64, i64, u64)> = Vec::new();
    let mut next_seed = 1000u64;
    for n in [2i64, 3] {
        for d in 1..=4i64 {
            for l in [1i64, 2] {
                for r in [2i64, 3] {
                    let nvars = (n + 1) as usize;
                    let dim = linalg::dim_s(nvars, l) - linalg::dim_s(nvars, l - d);
                    if r > dim {
                        continue; // independence impossible; outside the family
                    }
                    grid.push((n, d, l, r, next_seed));
                    next_seed += 1;
                }
            }
        }
    }
    let corpus: Vec<((i64, i64, i64, i64, u64), Result<(LmInstance, Verdict), RunError>)> =
        lmstab::par::map_maybe_par(grid, |p| {
            let (n, d, l, r, seed) = p;
            (p, build_and_certify(n, d, l, r, seed))
        });
    for (_, res) in &corpus {
        if let Err(RunError::Inconsistency(m)) = res {
            inconsistencies.push(m.clone());
        }
    }

    // Criterion 1: structural facts for every sampled instance:
    // rank = r, c1 = -d, no sections, base-locus codimension in {r, empty}.
    {
        let mut failures = Vec::new();
        for ((n, d, l, r, seed), res) in &corpus {
            match res {
                Err(RunError::Other(m)) | Err(RunError::Inconsistency(m)) => {
                    failures.push(format!("({n},{d},{l},{r})@{seed}: {m}"));
                }
                Ok((inst, verdict)) => {
                    let codim_ok = match inst.preconditions.codim_zd {
                        CodimZd::Codim(c) => c == *r,
                        CodimZd::Empty => true,
                    };
                    // the rank-2 section test is an iff, so rank-2 instances
                    // always get a definitive status
                    let rank2_definitive = *r != 2 || verdict.status != Status::Undetermined;
                    if inst.chern.rank != *r
                        || inst.chern.c1 != -d
                        || inst.kernel.h0_twist(0) != 0
                        || !codim_ok
                        || !rank2_definitive
                    {
                        failures.push(format!(
                            "({n},{d},{l},{r})@{seed}: rank {}, c1 {}, h0 {}, codim {}, status {}",
                            inst.chern.rank,
                            inst.chern.c1,
                            inst.kernel.h0_twist(0),
                            inst.preconditions.codim_zd,
                            verdict.status
                        ));
                    }
                }
            }
        }
        results.push(CriterionOutcome {
            name: "1 structural-facts suite",
            pass: corpus.len() >= 20 && failures.is_empty(),
            detail: if failures.is_empty() {
                format!("{} sampled instances verified, zero failures", corpus.len())
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 2: every d = 1 instance is Stable via R1 with h0 evidence 0.
    {
        let mut checked = 0;
        let mut failures = Vec::new();
        for ((n, d, l, r, seed), res) in &corpus {
            if *d != 1 {
                continue;
            }
            checked += 1;
            let ok = match res {
                Ok((_, v)) => {
                    v.status == Status::Stable
                        && rule_cert(v, RuleId::CyclicD1)
                            .is_some_and(|c| c.evidence_int("h0_at_0") == Some(0))
                }
                Err(_) => false,
            };
            if !ok {
                failures.push(format!("({n},{d},{l},{r})@{seed}"));
            }
        }
        results.push(CriterionOutcome {
            name: "2 degree-one instances stable",
            pass: checked > 0 && failures.is_empty(),
            detail: if failures.is_empty() {
                format!("{checked} instances Stable via R1_CyclicD1")
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 3: every d = 2, r = 2 instance passes the rank-2 test at the
    // semistable level with H^0(K) = 0.
    {
        let mut checked = 0;
        let mut failures = Vec::new();
        for ((n, d, l, r, seed), res) in &corpus {
            if *d != 2 || *r != 2 {
                continue;
            }
            checked += 1;
            let ok = match res {
                Ok((_, v)) => {
                    matches!(v.status, Status::Stable | Status::Semistable)
                        && rule_cert(v, RuleId::OkonekRank2).is_some_and(|c| {
                            c.evidence_int("k_norm") == Some(1)
                                && c.evidence_int("h0_semi") == Some(0)
                        })
                }
                Err(_) => false,
            };
            if !ok {
                failures.push(format!("({n},{d},{l},{r})@{seed}"));
            }
        }
        results.push(CriterionOutcome {
            name: "3 degree-two rank-two semistable",
            pass: checked > 0 && failures.is_empty(),
            detail: if failures.is_empty() {
                format!("{checked} instances pass the normalized section test")
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 4: (N=2, d=4, l=2, r=2) over five seeds: Semistable via R2,
    // with the frozen section counts h0(K(1)) = 0 and h0(K(2)) = 1 confirmed
    // along both computation routes.
    {
        let mut failures = Vec::new();
        for seed in 40..45u64 {
            match build_and_certify(2, 4, 2, 2, seed) {
                Err(RunError::Inconsistency(m)) => {
                    inconsistencies.push(m.clone());
                    failures.push(format!("seed {seed}: inconsistency"));
                }
                Err(RunError::Other(m)) => failures.push(format!("seed {seed}: {m}")),
                Ok((inst, v)) => {
                    let h1_a = inst.kernel.h0_twist(1);
                    let h1_b = inst.kernel.h0_twist_via_gb(1);
                    let h2 = inst.kernel.h0_twist(2);
                    let ok = v.status == Status::Semistable
                        && rule_cert(&v, RuleId::OkonekRank2).is_some_and(|c| {
                            c.status == Some(Status::Semistable)
                                && c.evidence_int("k_norm") == Some(2)
                                && c.evidence_int("h0_semi") == Some(0)
                        })
                        && h1_a == 0
                        && h1_b == 0
                        && h2 == 1;
                    if !ok {
                        failures.push(format!(
                            "seed {seed}: status {}, h0(1) = {h1_a}/{h1_b}, h0(2) = {h2}",
                            v.status
                        ));
                    }
                }
            }
        }
        results.push(CriterionOutcome {
            name: "4 even-degree restriction family",
            pass: failures.is_empty(),
            detail: if failures.is_empty() {
                "5 seeds Semistable via R2 with frozen section counts".into()
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 5: (N=2, d=3, l=1, r=2) over five seeds: NotSemistable with
    // exact witness slopes -1 > -3/2 and independent rank-2 agreement
    // (h0(K(1)) >= 1); the boundary (d=2, l=1, r=2) has no witness.
    {
        let mut failures = Vec::new();
        for seed in 50..55u64 {
            match build_and_certify(2, 3, 1, 2, seed) {
                Err(RunError::Inconsistency(m)) => {
                    inconsistencies.push(m.clone());
                    failures.push(format!("seed {seed}: inconsistency"));
                }
                Err(RunError::Other(m)) => failures.push(format!("seed {seed}: {m}")),
                Ok((inst, v)) => {
                    use num::rational::Ratio;
                    let ok = v.status == Status::NotSemistable
                        && rule_cert(&v, RuleId::Destabilizer).is_some_and(|c| {
                            c.evidence_rat("mu_witness") == Some(Ratio::new(-1, 1))
                                && c.evidence_rat("mu_kernel") == Some(Ratio::new(-3, 2))
                        })
                        && rule_cert(&v, RuleId::OkonekRank2)
                            .is_some_and(|c| c.status == Some(Status::NotSemistable))
                        && inst.kernel.h0_twist(1) >= 1;
                    if !ok {
                        failures.push(format!("seed {seed}: status {}", v.status));
                    }
                }
            }
        }
        match lm::sample_lm(GF, 2, 2, 1, 2, 60).map(|i| lm::destabilizer_witness(&i)) {
            Ok(Ok(None)) => {}
            other => failures.push(format!(
                "boundary d=2,l=1,r=2 produced a witness or failed: {:?}",
                other.map(|r| r.map(|w| w.map(|x| (x.witness_chern.rank, x.witness_chern.c1))))
            )),
        }
        results.push(CriterionOutcome {
            name: "5 destabilizer family",
            pass: failures.is_empty(),
            detail: if failures.is_empty() {
                "5 seeds NotSemistable via R3 + R2; boundary case has no witness".into()
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 6: pullback instances carry an R4 Semistable certificate;
    // the rank-2 even-c1 case passes the R2 semistable test; the rank bound
    // is enforced.
    {
        let mut failures = Vec::new();
        let opts = CertifyOptions::default();
        match lm::construct_pullback_instance(GF, 2, 2, 1, 2, 3) {
            Err(e) => failures.push(format!("(dmap=2,m=1,r=2): {e}")),
            Ok(inst) => match certify::certify(CertifyTarget::Lm(&inst), &opts) {
                Err(Error::Inconsistency(m)) => {
                    inconsistencies.push(m.clone());
                    failures.push("(dmap=2,m=1,r=2): inconsistency".into());
                }
                Err(e) => failures.push(format!("(dmap=2,m=1,r=2): {e}")),
                Ok(v) => {
                    let ok = rule_cert(&v, RuleId::Pullback)
                        .is_some_and(|c| c.status == Some(Status::Semistable))
                        && rule_cert(&v, RuleId::OkonekRank2)
                            .is_some_and(|c| c.evidence_int("h0_semi") == Some(0))
                        && matches!(v.status, Status::Stable | Status::Semistable);
                    if !ok {
                        failures.push(format!("(dmap=2,m=1,r=2): status {}", v.status));
                    }
                }
            },
        }
        for r in [2i64, 3] {
            match lm::construct_pullback_instance(GF, 2, 1, 2, r, 5) {
                Err(e) => failures.push(format!("(dmap=1,m=2,r={r}): {e}")),
                Ok(inst) => match certify::certify(CertifyTarget::Lm(&inst), &opts) {
                    Err(Error::Inconsistency(m)) => {
                        inconsistencies.push(m.clone());
                        failures.push(format!("(dmap=1,m=2,r={r}): inconsistency"));
                    }
                    Err(e) => failures.push(format!("(dmap=1,m=2,r={r}): {e}")),
                    Ok(v) => {
                        let ok = rule_cert(&v, RuleId::Pullback)
                            .is_some_and(|c| c.status == Some(Status::Semistable))
                            && matches!(v.status, Status::Stable | Status::Semistable);
                        if !ok {
                            failures.push(format!("(dmap=1,m=2,r={r}): status {}", v.status));
                        }
                    }
                },
            }
        }
        if !matches!(
            lm::construct_pullback_instance(GF, 2, 2, 1, 3, 1),
            Err(Error::Precondition(_))
        ) {
            failures.push("r = 3 > C(N-1+m, m) = 2 was not refused".into());
        }
        results.push(CriterionOutcome {
            name: "6 pullback family",
            pass: failures.is_empty(),
            detail: if failures.is_empty() {
                "R4 certificates present, rank-2 cross-check passes, bound enforced".into()
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 7: kernel bundles: coordinates Stable; complete degree-2
    // system rank 5, c1 = -2, Semistable; three general conics rank 2,
    // c1 = -2, Semistable with the rank-2 cross-check H^0(M) = 0.
    {
        let mut failures = Vec::new();
        let opts = CertifyOptions::default();
        let mut check = |label: &str, spec: WSpec, d: i64, want: &dyn Fn(&lm::KernelBundleInstance, &Verdict) -> bool| {
            match lm::construct_kernel_bundle(GF, 2, d, spec, 11) {
                Err(e) => failures.push(format!("{label}: {e}")),
                Ok(kb) => match certify::certify(CertifyTarget::KernelBundle(&kb), &opts) {
                    Err(Error::Inconsistency(m)) => {
                        inconsistencies.push(m.clone());
                        failures.push(format!("{label}: inconsistency"));
                    }
                    Err(e) => failures.push(format!("{label}: {e}")),
                    Ok(v) => {
                        if !want(&kb, &v) {
                            failures.push(format!(
                                "{label}: status {}, rank {}, c1 {}",
                                v.status, v.chern.rank, v.chern.c1
                            ));
                        }
                    }
                },
            }
        };
        check("d=1 full", WSpec::Full, 1, &|kb, v| {
            v.status == Status::Stable
                && kb.chern.rank == 2
                && kb.chern.c1 == -1
                && rule_cert(v, RuleId::KernelBundleD1)
                    .is_some_and(|c| c.status == Some(Status::Stable))
        });
        check("d=2 full", WSpec::Full, 2, &|kb, v| {
            v.status == Status::Semistable
                && kb.chern.rank == 5
                && kb.chern.c1 == -2
                && rule_cert(v, RuleId::KernelBundleD1)
                    .is_some_and(|c| c.status == Some(Status::Semistable))
        });
        check("d=2 |W|=3", WSpec::Random(3), 2, &|kb, v| {
            let h0_both = kb.module.h0_twist(0) == 0 && kb.module.h0_twist_via_gb(0) == 0;
            matches!(v.status, Status::Stable | Status::Semistable)
                && kb.chern.rank == 2
                && kb.chern.c1 == -2
                && kb.basepoint_free
                && rule_cert(v, RuleId::KernelBundleD1)
                    .is_some_and(|c| c.status == Some(Status::Semistable))
                && rule_cert(v, RuleId::OkonekRank2)
                    .is_some_and(|c| c.evidence_int("h0_semi") == Some(0))
                && h0_both
        });
        results.push(CriterionOutcome {
            name: "7 kernel bundles",
            pass: failures.is_empty(),
            detail: if failures.is_empty() {
                "coordinate system Stable; complete and general systems Semistable".into()
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 8: engine-level properties, all exact.
    {
        let mut failures = Vec::new();
        // Buchberger re-check on assorted bases
        let ideal_amb = FreeAmbient::for_ideal(GF, 3);
        let random_ideal: Vec<FreeModuleElem> = (0..2)
            .map(|i| FreeModuleElem::from_poly(HPoly::random(GF, 2, 3, 900 + i)))
            .collect();
        let gb = groebner::buchberger(&ideal_amb, &random_ideal);
        if !gb.verify_spairs() {
            failures.push("S-pair re-check failed on a random ideal".into());
        }
        if let Some(((_, _, _, _, _), Ok((inst, _)))) = corpus.first().map(|(p, r)| (*p, r.as_ref()))
        {
            if !inst.kernel.gb().verify_spairs() {
                failures.push("S-pair re-check failed on a kernel basis".into());
            }
        }
        // syzygy back-substitution
        let gens: Vec<FreeModuleElem> = (0..3)
            .map(|i| FreeModuleElem::from_poly(HPoly::random(GF, 2, 3, 910 + i)))
            .collect();
        match groebner::syzygies(&ideal_amb, &gens) {
            Err(e) => failures.push(format!("syzygy computation failed: {e}")),
            Ok((_, syz)) => {
                if syz.is_empty()
                    || !syz.iter().all(|s| groebner::back_substitutes(&ideal_amb, &gens, s))
                {
                    failures.push("syzygy back-substitution failed".into());
                }
            }
        }
        // saturation idempotence
        let unsat: Vec<FreeModuleElem> = ["x0^2", "x0*x1", "x0*x2"]
            .iter()
            .map(|s| FreeModuleElem::from_poly(HPoly::parse(s, GF, 3).unwrap()))
            .collect();
        match groebner::saturate(&ideal_amb, &unsat) {
            Err(e) => failures.push(format!("saturation failed: {e}")),
            Ok(once) => match groebner::saturate(&ideal_amb, &once) {
                Err(e) => failures.push(format!("second saturation failed: {e}")),
                Ok(twice) => {
                    let a = groebner::buchberger(&ideal_amb, &once);
                    let b = groebner::buchberger(&ideal_amb, &twice);
                    if a.gens != b.gens {
                        failures.push("saturation is not idempotent".into());
                    }
                }
            },
        }
        // sampled kernels are saturated as constructed
        if let Some((_, Ok((inst, _)))) = corpus.iter().find(|((_, d, _, _, _), r)| *d == 2 && r.is_ok())
        {
            match inst.kernel.saturate() {
                Err(e) => failures.push(format!("kernel saturation failed: {e}")),
                Ok(sat) => {
                    if !inst.kernel.same_submodule_as(&sat) {
                        failures.push("sampled kernel is not saturated".into());
                    }
                }
            }
        }
        // Hilbert series against direct linear algebra on 10 degrees
        let gb2 = groebner::buchberger(&ideal_amb, &random_ideal);
        let numer = gb2.quotient_hilbert_numerator();
        for j in 0..10i64 {
            let lhs = hilbert::series_coefficient(&numer, 3, j);
            let rhs = linalg::dim_s(3, j)
                - sheaf::piece_dim_by_span(&ideal_amb, &random_ideal, j);
            if lhs != rhs {
                failures.push(format!("Hilbert series mismatch at degree {j}: {lhs} vs {rhs}"));
            }
        }
        // graded piece dimension formulas
        let f = HPoly::random(GF, 2, 3, 920);
        let g = HPoly::random(GF, 1, 3, 921);
        for k in 0..6i64 {
            let gm = linalg::graded_mult_matrix(&[(g.clone(), 0)], Some(&f), k).unwrap();
            let cols = linalg::binom(k + 2, 2);
            let rows = linalg::binom(k + 1 + 2, 2) - linalg::binom(k + 1 - 2 + 2, 2);
            if gm.matrix.cols() as i64 != cols || gm.matrix.rows() as i64 != rows {
                failures.push(format!("graded dimension formula failed at degree {k}"));
            }
        }
        results.push(CriterionOutcome {
            name: "8 engine properties",
            pass: failures.is_empty(),
            detail: if failures.is_empty() {
                "S-pairs, syzygies, saturation, Hilbert series, dimension formulas all exact"
                    .into()
            } else {
                failures.join("; ")
            },
        });
    }

    // Criterion 9: no certificate disagreement anywhere in this suite.
    results.push(CriterionOutcome {
        name: "9 cross-rule consistency",
        pass: inconsistencies.is_empty(),
        detail: if inconsistencies.is_empty() {
            "zero internal inconsistency events".into()
        } else {
            inconsistencies.join("; ")
        },
    });

    // Criterion 10: two runs of the full batch produce byte-identical
    // reports, through the real binary.
    {
        let dir = tempfile::tempdir().expect("tempdir");
        let manifest = dir.path().join("table.txt");
        std::fs::write(
            &manifest,
            "lm n=2 d=1 l=1 r=2 seed=11\n\
             lm n=2 d=2 l=1 r=2 seed=11\n\
             lm n=2 d=4 l=2 r=2 seed=11\n\
             pullback n=2 dmap=2 m=1 r=2 seed=3\n\
             lm n=2 d=3 l=1 r=2 seed=11\n\
             kernel-bundle n=2 d=2 w=full seed=0\n",
        )
        .expect("write manifest");
        let args = ["batch", "--manifest", manifest.to_str().unwrap(), "--jobs", "2"];
        let a = lmstab_bin(&args);
        let b = lmstab_bin(&args);
        let sa = String::from_utf8(a.stdout.clone()).expect("utf8");
        let mut failures = Vec::new();
        if a.stdout != b.stdout {
            failures.push("batch runs differ byte-for-byte".to_string());
        }
        for needle in [
            "row-0 lm n=2 d=1 l=1 r=2 seed=11 status=Stable",
            "row-1 lm n=2 d=2 l=1 r=2 seed=11 status=Semistable",
            "row-2 lm n=2 d=4 l=2 r=2 seed=11 status=Semistable",
            "row-4 lm n=2 d=3 l=1 r=2 seed=11 status=NotSemistable",
            "row-5 kernel-bundle n=2 d=2 w=full seed=0 status=Semistable",
        ] {
            if !sa.contains(needle) {
                failures.push(format!("missing summary line `{needle}`"));
            }
        }
        if !(sa.contains("row-3 pullback n=2 dmap=2 m=1 r=2 seed=3 status=Stable")
            || sa.contains("row-3 pullback n=2 dmap=2 m=1 r=2 seed=3 status=Semistable"))
        {
            failures.push("pullback row not certified semistable-or-better".into());
        }
        results.push(CriterionOutcome {
            name: "10 deterministic batch reports",
            pass: failures.is_empty(),
            detail: if failures.is_empty() {
                "byte-identical reruns with the expected verdict table".into()
            } else {
                failures.join("; ")
            },
        });
    }

    let mut all_pass = true;
    for r in &results {
        println!(
            "ACCEPTANCE {}: {} - {}",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
        all_pass &= r.pass;
    }
    assert!(all_pass, "acceptance criteria failed; see the lines above");
}

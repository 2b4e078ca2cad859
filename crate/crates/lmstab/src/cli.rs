//! Batch driver: construct instances, certify them, cross-check with the
//! line probe, and emit structured reports. Reports are deterministic for a
//! fixed configuration; timing goes to stderr only.

use crate::certify::{self, CertifyOptions, CertifyTarget, Status, Verdict};
use crate::field::FieldSpec;
use crate::lm::{self, KernelBundleInstance, LmInstance, WSpec};
use crate::report::{self, ReportWriter};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDETERMINED: i32 = 10;
pub const EXIT_PRECONDITION: i32 = 20;
pub const EXIT_INCONSISTENCY: i32 = 30;

#[derive(Parser, Debug)]
#[command(
    name = "lmstab",
    about = "Exact construction and slope-stability certification of kernel sheaves on P^N",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct an instance and report its invariants (no verdict).
    Construct(ConstructArgs),
    /// Construct (or load) an instance and certify its stability.
    Certify(CertifyArgs),
    /// Run a manifest of parameter rows and print one report per row.
    Batch(BatchArgs),
    /// Construct and certify a kernel bundle of a degree-d system.
    KernelBundle(KernelBundleArgs),
    /// Construct and certify a pullback instance along a finite self-map.
    Pullback(PullbackArgs),
    /// Record splitting types of an instance on random lines.
    ProbeLine(ProbeLineArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Coefficient field: `gf:<p>` or `rational`.
    #[arg(long, default_value = "gf:32003")]
    field: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    l: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    /// Sampling seed (ignored when --gens-file is given).
    #[arg(long)]
    seed: Option<u64>,
    /// File with explicit `f <poly>` and `g <poly>` lines.
    #[arg(long)]
    gens_file: Option<std::path::PathBuf>,
    /// Accept a non-smooth f (reduced-irreducible attestation).
    #[arg(long)]
    allow_singular: bool,
    /// Also write the instance file here for later `certify --instance`.
    #[arg(long)]
    save_instance: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Instance file written by `construct`/this tool.
    #[arg(long)]
    instance: Option<std::path::PathBuf>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    l: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gens_file: Option<std::path::PathBuf>,
    #[arg(long)]
    allow_singular: bool,
    /// Random lines for the splitting probe (0 disables it).
    #[arg(long, default_value_t = 0)]
    trials: u32,
    #[arg(long, default_value_t = 1)]
    probe_seed: u64,
    /// Let the line probe contribute a status (documented heuristic).
    #[arg(long)]
    trust_line_probe: bool,
    /// Re-derive every certificate status from its recorded evidence.
    #[arg(long)]
    reverify: bool,
}

#[derive(Args, Debug)]
struct BatchArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Manifest: one parameter row per line, `#` comments.
    #[arg(long)]
    manifest: std::path::PathBuf,
    /// Worker threads for the row pool (0 = default).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    trials: u32,
    #[arg(long, default_value_t = 1)]
    probe_seed: u64,
    #[arg(long)]
    trust_line_probe: bool,
}

#[derive(Args, Debug)]
struct KernelBundleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: i64,
    #[arg(long)]
    d: i64,
    /// `full` for the complete system, or a count of random forms.
    #[arg(long, default_value = "full")]
    w: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    trials: u32,
    #[arg(long, default_value_t = 1)]
    probe_seed: u64,
    #[arg(long)]
    trust_line_probe: bool,
}

#[derive(Args, Debug)]
struct PullbackArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n: i64,
    #[arg(long)]
    dmap: i64,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    r: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    trials: u32,
    #[arg(long, default_value_t = 1)]
    probe_seed: u64,
    #[arg(long)]
    trust_line_probe: bool,
}

#[derive(Args, Debug)]
struct ProbeLineArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    instance: Option<std::path::PathBuf>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    l: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 5)]
    trials: u32,
    #[arg(long, default_value_t = 1)]
    probe_seed: u64,
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let outcome = dispatch(cli);
    let code = match outcome {
        Ok((text, out, code)) => {
            let write_result = match &out {
                Some(path) => std::fs::write(path, &text).map_err(Error::Io),
                None => {
                    print!("{text}");
                    std::io::stdout().flush().map_err(Error::Io)
                }
            };
            match write_result {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_PRECONDITION
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    eprintln!("# elapsed {} ms", started.elapsed().as_millis());
    code
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Inconsistency(_) => EXIT_INCONSISTENCY,
        _ => EXIT_PRECONDITION,
    }
}

type CmdOutput = (String, Option<std::path::PathBuf>, i32);

fn dispatch(cli: Cli) -> Result<CmdOutput> {
    match cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Batch(a) => cmd_batch(a),
        Command::KernelBundle(a) => cmd_kernel_bundle(a),
        Command::Pullback(a) => cmd_pullback(a),
        Command::ProbeLine(a) => cmd_probe_line(a),
    }
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Precondition(format!("missing required flag --{name}")))
}

/// Reads `f <poly>` / `g <poly>` lines (comments and blanks allowed).
fn read_gens_file(
    path: &std::path::Path,
    field: FieldSpec,
    nvars: usize,
) -> Result<(crate::poly::HPoly, Vec<crate::poly::HPoly>)> {
    let text = std::fs::read_to_string(path)?;
    let mut f = None;
    let mut gens = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("f ") {
            f = Some(crate::poly::HPoly::parse(rest, field, nvars)?);
        } else if let Some(rest) = line.strip_prefix("g ") {
            gens.push(crate::poly::HPoly::parse(rest, field, nvars)?);
        } else {
            return Err(Error::Parse(format!("unexpected gens-file line `{line}`")));
        }
    }
    let f = f.ok_or_else(|| Error::Parse("gens-file is missing the `f` line".into()))?;
    Ok((f, gens))
}

#[allow(clippy::too_many_arguments)]
fn build_lm_instance(
    field: FieldSpec,
    n: Option<i64>,
    d: Option<i64>,
    l: Option<i64>,
    r: Option<i64>,
    seed: Option<u64>,
    gens_file: Option<&std::path::Path>,
    instance: Option<&std::path::Path>,
    allow_singular: bool,
) -> Result<LmInstance> {
    if let Some(path) = instance {
        let text = std::fs::read_to_string(path)?;
        return lm::read_instance(&text);
    }
    let n = require(n, "n")?;
    let d = require(d, "d")?;
    let l = require(l, "l")?;
    let r = require(r, "r")?;
    if let Some(path) = gens_file {
        let (f, gens) = read_gens_file(path, field, (n + 1) as usize)?;
        return lm::construct_lm(field, n, d, l, r, f, gens, allow_singular);
    }
    let seed = require(seed, "seed")?;
    lm::sample_lm(field, n, d, l, r, seed)
}

fn lm_extra_invariants(inst: &LmInstance) -> Vec<(&'static str, String)> {
    vec![
        ("codim-zd", inst.preconditions.codim_zd.to_string()),
        ("local-freeness", lm::local_freeness_probe(inst).to_string()),
    ]
}

fn write_config_open(w: &mut ReportWriter, command: &str, field: FieldSpec) {
    w.open("report");
    w.open("config");
    w.kv("command", command);
    w.kv("field", field);
}

fn verdict_exit(v: &Verdict) -> i32 {
    if v.status == Status::Undetermined {
        EXIT_UNDETERMINED
    } else {
        EXIT_OK
    }
}

fn reverify_section(w: &mut ReportWriter, verdict: &Verdict) -> bool {
    let mut ok = true;
    w.open("reverify");
    for cert in &verdict.certificates {
        let good = cert.reverify();
        ok &= good;
        w.kv(&cert.rule.to_string(), if good { "ok" } else { "MISMATCH" });
    }
    w.close();
    ok
}

fn cmd_construct(a: ConstructArgs) -> Result<CmdOutput> {
    let field = FieldSpec::parse(&a.common.field)?;
    let inst = build_lm_instance(
        field,
        a.n,
        a.d,
        a.l,
        a.r,
        a.seed,
        a.gens_file.as_deref(),
        None,
        a.allow_singular,
    )?;
    let mut w = ReportWriter::new();
    write_config_open(&mut w, "construct", field);
    w.kv("n", inst.n);
    w.kv("d", inst.d);
    w.kv("l", inst.l);
    w.kv("r", inst.r);
    if let Some(seed) = inst.seed {
        w.kv("seed", seed);
    }
    w.close();
    report::write_instance_section(&mut w, &inst);
    let verdict = Verdict { status: Status::Undetermined, certificates: vec![], chern: inst.chern };
    report::write_invariants_section(&mut w, &inst.kernel, &verdict, &lm_extra_invariants(&inst));
    w.open("instance-file");
    for line in lm::write_instance(&inst).lines() {
        w.kv("|", line);
    }
    w.close();
    w.close();
    if let Some(path) = &a.save_instance {
        std::fs::write(path, lm::write_instance(&inst))?;
    }
    Ok((w.finish(), a.common.out, EXIT_OK))
}

fn certify_lm_report(
    command: &str,
    field: FieldSpec,
    inst: &LmInstance,
    options: &CertifyOptions,
    reverify: bool,
) -> Result<(String, i32)> {
    let verdict = certify::certify(CertifyTarget::Lm(inst), options)?;
    let mut w = ReportWriter::new();
    write_config_open(&mut w, command, field);
    w.kv("n", inst.n);
    w.kv("d", inst.d);
    w.kv("l", inst.l);
    w.kv("r", inst.r);
    if let Some(seed) = inst.seed {
        w.kv("seed", seed);
    }
    w.kv("trials", options.trials);
    w.kv("trust-line-probe", options.trust_line_probe);
    w.close();
    report::write_instance_section(&mut w, inst);
    report::write_invariants_section(&mut w, &inst.kernel, &verdict, &lm_extra_invariants(inst));
    report::write_verdict_section(&mut w, &verdict);
    let mut code = verdict_exit(&verdict);
    if reverify && !reverify_section(&mut w, &verdict) {
        code = EXIT_INCONSISTENCY;
    }
    w.close();
    Ok((w.finish(), code))
}

fn cmd_certify(a: CertifyArgs) -> Result<CmdOutput> {
    let field = FieldSpec::parse(&a.common.field)?;
    let inst = build_lm_instance(
        field,
        a.n,
        a.d,
        a.l,
        a.r,
        a.seed,
        a.gens_file.as_deref(),
        a.instance.as_deref(),
        a.allow_singular,
    )?;
    let options = CertifyOptions {
        trials: a.trials,
        probe_seed: a.probe_seed,
        trust_line_probe: a.trust_line_probe,
    };
    let (text, code) = certify_lm_report("certify", field, &inst, &options, a.reverify)?;
    Ok((text, a.common.out, code))
}

fn certify_kb_report(
    field: FieldSpec,
    kb: &KernelBundleInstance,
    options: &CertifyOptions,
) -> Result<(String, i32)> {
    let verdict = certify::certify(CertifyTarget::KernelBundle(kb), options)?;
    let mut w = ReportWriter::new();
    write_config_open(&mut w, "kernel-bundle", field);
    w.kv("n", kb.n);
    w.kv("d", kb.d);
    w.kv("w", if kb.full_w { "full".to_string() } else { kb.w.len().to_string() });
    if let Some(seed) = kb.seed {
        w.kv("seed", seed);
    }
    w.kv("trials", options.trials);
    w.close();
    w.open("instance");
    w.kv("kind", "kernel-bundle");
    w.kv("n", kb.n);
    w.kv("d", kb.d);
    w.kv("w-len", kb.w.len());
    w.kv("full-w", kb.full_w);
    w.kv("basepoint-free", kb.basepoint_free);
    for (i, wi) in kb.w.iter().enumerate() {
        w.kv(&format!("w{}", i + 1), wi);
    }
    w.close();
    report::write_invariants_section(&mut w, &kb.module, &verdict, &[]);
    report::write_verdict_section(&mut w, &verdict);
    let code = verdict_exit(&verdict);
    w.close();
    Ok((w.finish(), code))
}

fn cmd_kernel_bundle(a: KernelBundleArgs) -> Result<CmdOutput> {
    let field = FieldSpec::parse(&a.common.field)?;
    let spec = parse_wspec(&a.w)?;
    let kb = lm::construct_kernel_bundle(field, a.n, a.d, spec, a.seed)?;
    let options = CertifyOptions {
        trials: a.trials,
        probe_seed: a.probe_seed,
        trust_line_probe: a.trust_line_probe,
    };
    let (text, code) = certify_kb_report(field, &kb, &options)?;
    Ok((text, a.common.out, code))
}

fn parse_wspec(text: &str) -> Result<WSpec> {
    if text == "full" {
        Ok(WSpec::Full)
    } else {
        let k: usize = text
            .parse()
            .map_err(|_| Error::Parse(format!("bad --w value `{text}` (use `full` or a count)")))?;
        Ok(WSpec::Random(k))
    }
}

fn cmd_pullback(a: PullbackArgs) -> Result<CmdOutput> {
    let field = FieldSpec::parse(&a.common.field)?;
    let inst = lm::construct_pullback_instance(field, a.n, a.dmap, a.m, a.r, a.seed)?;
    let options = CertifyOptions {
        trials: a.trials,
        probe_seed: a.probe_seed,
        trust_line_probe: a.trust_line_probe,
    };
    let (text, code) = certify_lm_report("pullback", field, &inst, &options, false)?;
    Ok((text, a.common.out, code))
}

fn cmd_probe_line(a: ProbeLineArgs) -> Result<CmdOutput> {
    let field = FieldSpec::parse(&a.common.field)?;
    let inst = build_lm_instance(
        field,
        a.n,
        a.d,
        a.l,
        a.r,
        a.seed,
        None,
        a.instance.as_deref(),
        false,
    )?;
    let mut w = ReportWriter::new();
    write_config_open(&mut w, "probe-line", field);
    w.kv("n", inst.n);
    w.kv("d", inst.d);
    w.kv("l", inst.l);
    w.kv("r", inst.r);
    if let Some(seed) = inst.seed {
        w.kv("seed", seed);
    }
    w.kv("trials", a.trials);
    w.kv("probe-seed", a.probe_seed);
    w.close();
    report::write_instance_section(&mut w, &inst);
    w.open("probe");
    let mut splittings = Vec::new();
    for t in 0..a.trials {
        let seed = a.probe_seed.wrapping_add(1000 * t as u64);
        match inst.kernel.restrict_to_line(seed, 8) {
            Ok(s) => {
                w.kv(&format!("trial-{t}"), &s);
                splittings.push(s);
            }
            Err(_) => {
                w.kv(&format!("trial-{t}"), "degenerate");
            }
        }
    }
    if let Some(generic) = splittings.iter().map(|s| s.degrees.clone()).max() {
        let torsion = splittings
            .iter()
            .find(|s| s.degrees == generic)
            .map(|s| s.torsion_length)
            .unwrap_or(0);
        let gap = generic.windows(2).map(|p| p[0] - p[1]).max().unwrap_or(0);
        let fmt: Vec<String> = generic.iter().map(|d| d.to_string()).collect();
        w.kv("generic", format!("[{}]", fmt.join(", ")));
        w.kv("max-gap", gap);
        w.kv("torsion-length", torsion);
        w.kv("c1-check", generic.iter().sum::<i64>() == inst.chern.c1 - torsion);
    } else {
        w.kv("generic", "unavailable");
    }
    w.close();
    w.close();
    Ok((w.finish(), a.common.out, EXIT_OK))
}

// ---- batch ----

#[derive(Debug, Clone, PartialEq, Eq)]
enum RowSpec {
    Lm { n: i64, d: i64, l: i64, r: i64, seed: u64 },
    Pullback { n: i64, dmap: i64, m: i64, r: i64, seed: u64 },
    KernelBundle { n: i64, d: i64, w: String, seed: u64 },
}

impl std::fmt::Display for RowSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowSpec::Lm { n, d, l, r, seed } => {
                write!(f, "lm n={n} d={d} l={l} r={r} seed={seed}")
            }
            RowSpec::Pullback { n, dmap, m, r, seed } => {
                write!(f, "pullback n={n} dmap={dmap} m={m} r={r} seed={seed}")
            }
            RowSpec::KernelBundle { n, d, w, seed } => {
                write!(f, "kernel-bundle n={n} d={d} w={w} seed={seed}")
            }
        }
    }
}

fn parse_row(line: &str) -> Result<RowSpec> {
    let mut parts = line.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| Error::Parse("empty manifest row".into()))?;
    let mut kv = std::collections::BTreeMap::new();
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad manifest token `{part}`")))?;
        kv.insert(k.to_string(), v.to_string());
    }
    let get_i64 = |kv: &std::collections::BTreeMap<String, String>, key: &str| -> Result<i64> {
        kv.get(key)
            .ok_or_else(|| Error::Parse(format!("manifest row missing `{key}=`")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer for `{key}`")))
    };
    let get_seed = |kv: &std::collections::BTreeMap<String, String>| -> Result<u64> {
        match kv.get("seed") {
            None => Ok(0),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse("bad integer for `seed`".into())),
        }
    };
    match kind {
        "lm" => Ok(RowSpec::Lm {
            n: get_i64(&kv, "n")?,
            d: get_i64(&kv, "d")?,
            l: get_i64(&kv, "l")?,
            r: get_i64(&kv, "r")?,
            seed: get_seed(&kv)?,
        }),
        "pullback" => Ok(RowSpec::Pullback {
            n: get_i64(&kv, "n")?,
            dmap: get_i64(&kv, "dmap")?,
            m: get_i64(&kv, "m")?,
            r: get_i64(&kv, "r")?,
            seed: get_seed(&kv)?,
        }),
        "kernel-bundle" => Ok(RowSpec::KernelBundle {
            n: get_i64(&kv, "n")?,
            d: get_i64(&kv, "d")?,
            w: kv.get("w").cloned().unwrap_or_else(|| "full".into()),
            seed: get_seed(&kv)?,
        }),
        other => Err(Error::Parse(format!("unknown manifest row kind `{other}`"))),
    }
}

struct RowOutcome {
    spec: RowSpec,
    body: String,
    status: String,
    code: i32,
}

fn run_row(field: FieldSpec, options: &CertifyOptions, spec: RowSpec) -> RowOutcome {
    let result: Result<(String, i32, Status)> = (|| {
        match &spec {
            RowSpec::Lm { n, d, l, r, seed } => {
                let inst = lm::sample_lm(field, *n, *d, *l, *r, *seed)?;
                let verdict = certify::certify(CertifyTarget::Lm(&inst), options)?;
                let mut w = ReportWriter::new();
                report::write_instance_section(&mut w, &inst);
                report::write_invariants_section(
                    &mut w,
                    &inst.kernel,
                    &verdict,
                    &lm_extra_invariants(&inst),
                );
                report::write_verdict_section(&mut w, &verdict);
                Ok((w.finish(), verdict_exit(&verdict), verdict.status))
            }
            RowSpec::Pullback { n, dmap, m, r, seed } => {
                let inst = lm::construct_pullback_instance(field, *n, *dmap, *m, *r, *seed)?;
                let verdict = certify::certify(CertifyTarget::Lm(&inst), options)?;
                let mut w = ReportWriter::new();
                report::write_instance_section(&mut w, &inst);
                report::write_invariants_section(
                    &mut w,
                    &inst.kernel,
                    &verdict,
                    &lm_extra_invariants(&inst),
                );
                report::write_verdict_section(&mut w, &verdict);
                Ok((w.finish(), verdict_exit(&verdict), verdict.status))
            }
            RowSpec::KernelBundle { n, d, w: wspec, seed } => {
                let kb = lm::construct_kernel_bundle(field, *n, *d, parse_wspec(wspec)?, *seed)?;
                let verdict = certify::certify(CertifyTarget::KernelBundle(&kb), options)?;
                let mut w = ReportWriter::new();
                w.open("instance");
                w.kv("kind", "kernel-bundle");
                w.kv("n", kb.n);
                w.kv("d", kb.d);
                w.kv("w-len", kb.w.len());
                w.kv("full-w", kb.full_w);
                w.kv("basepoint-free", kb.basepoint_free);
                w.close();
                report::write_invariants_section(&mut w, &kb.module, &verdict, &[]);
                report::write_verdict_section(&mut w, &verdict);
                Ok((w.finish(), verdict_exit(&verdict), verdict.status))
            }
        }
    })();
    match result {
        Ok((body, code, status)) => RowOutcome { spec, body, status: status.to_string(), code },
        Err(e) => {
            let code = exit_code_for(&e);
            RowOutcome {
                spec,
                body: format!("error {e}\n"),
                status: format!("error({code})"),
                code,
            }
        }
    }
}

fn indent_block(text: &str, levels: usize) -> String {
    let pad = "  ".repeat(levels);
    let mut out = String::new();
    for line in text.lines() {
        out.push_str(&pad);
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn cmd_batch(a: BatchArgs) -> Result<CmdOutput> {
    let field = FieldSpec::parse(&a.common.field)?;
    let options = CertifyOptions {
        trials: a.trials,
        probe_seed: a.probe_seed,
        trust_line_probe: a.trust_line_probe,
    };
    let text = std::fs::read_to_string(&a.manifest)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let spec = parse_row(line)
            .map_err(|e| Error::Parse(format!("manifest line {}: {e}", lineno + 1)))?;
        rows.push(spec);
    }
    let outcomes: Vec<RowOutcome> = crate::par::with_jobs(a.jobs, || {
        crate::par::map_maybe_par(rows, |spec| run_row(field, &options, spec))
    });
    let mut out = String::new();
    out.push_str("report\n");
    out.push_str("  config\n");
    out.push_str("    command batch\n");
    out.push_str(&format!("    field {field}\n"));
    out.push_str(&format!("    trials {}\n", a.trials));
    out.push_str("  rows\n");
    for (i, o) in outcomes.iter().enumerate() {
        out.push_str(&format!("    row {i}\n"));
        out.push_str(&format!("      spec {}\n", o.spec));
        out.push_str(&indent_block(&o.body, 3));
    }
    out.push_str("  summary\n");
    let mut counts = std::collections::BTreeMap::new();
    for (i, o) in outcomes.iter().enumerate() {
        out.push_str(&format!("    row-{i} {} status={}\n", o.spec, o.status));
        *counts.entry(o.status.clone()).or_insert(0usize) += 1;
    }
    let counts_line: Vec<String> = counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    out.push_str(&format!("    counts {}\n", counts_line.join(" ")));
    let code = outcomes.iter().map(|o| o.code).max().unwrap_or(EXIT_OK);
    Ok((out, a.common.out, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_row_parsing() {
        assert_eq!(
            parse_row("lm n=2 d=1 l=1 r=2 seed=11").unwrap(),
            RowSpec::Lm { n: 2, d: 1, l: 1, r: 2, seed: 11 }
        );
        assert_eq!(
            parse_row("pullback n=2 dmap=2 m=1 r=2 seed=3").unwrap(),
            RowSpec::Pullback { n: 2, dmap: 2, m: 1, r: 2, seed: 3 }
        );
        assert_eq!(
            parse_row("kernel-bundle n=2 d=2 w=full").unwrap(),
            RowSpec::KernelBundle { n: 2, d: 2, w: "full".into(), seed: 0 }
        );
        assert!(parse_row("mystery n=2").is_err());
        assert!(parse_row("lm n=2 d=1").is_err());
    }
}

//! Structured plain-text reports: an indented key/value tree with stable key
//! order, exact numbers only, reproducible byte-for-byte for a fixed
//! configuration and build.

use crate::certify::{Certificate, Verdict};
use crate::lm::{LmInstance, SmoothStatus};
use crate::sheaf::GradedSubmodule;
use num::rational::Ratio;

/// Indented tree writer; two spaces per level.
#[derive(Debug, Default)]
pub struct ReportWriter {
    buf: String,
    depth: usize,
}

impl ReportWriter {
    pub fn new() -> Self {
        ReportWriter::default()
    }

    fn pad(&mut self) {
        for _ in 0..self.depth {
            self.buf.push_str("  ");
        }
    }

    pub fn open(&mut self, key: &str) -> &mut Self {
        self.pad();
        self.buf.push_str(key);
        self.buf.push('\n');
        self.depth += 1;
        self
    }

    pub fn close(&mut self) -> &mut Self {
        assert!(self.depth > 0, "unbalanced report tree");
        self.depth -= 1;
        self
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.pad();
        self.buf.push_str(key);
        self.buf.push(' ');
        self.buf.push_str(&value.to_string());
        self.buf.push('\n');
        self
    }

    pub fn finish(self) -> String {
        assert_eq!(self.depth, 0, "unbalanced report tree");
        self.buf
    }
}

pub fn ratio_string(r: Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Degree window for the section table: small, deterministic in the
/// instance, and wide enough to cover the normalized twists used by the
/// rank-2 test.
pub fn h0_window_bounds(c1: i64) -> (i64, i64) {
    (0, (-c1).max(2) + 1)
}

pub fn write_instance_section(w: &mut ReportWriter, inst: &LmInstance) {
    w.open("instance");
    w.kv("kind", "lm");
    w.kv("tag", inst.tag);
    w.kv("n", inst.n);
    w.kv("d", inst.d);
    w.kv("l", inst.l);
    w.kv("r", inst.r);
    if let Some(seed) = inst.seed {
        w.kv("seed", seed);
    }
    w.kv("f", &inst.f);
    for (i, g) in inst.gens.iter().enumerate() {
        w.kv(&format!("g{}", i + 1), g);
    }
    w.open("preconditions");
    w.kv(
        "smooth-f",
        match inst.preconditions.smooth_f {
            SmoothStatus::Verified => "verified",
            SmoothStatus::Overridden => "overridden",
        },
    );
    w.kv("independent-mod-f", inst.preconditions.independent_mod_f);
    w.kv("codim-zd", inst.preconditions.codim_zd);
    w.kv("retries", inst.preconditions.retries);
    w.close();
    w.close();
}

pub fn write_invariants_section(
    w: &mut ReportWriter,
    module: &GradedSubmodule,
    verdict: &Verdict,
    extra: &[(&str, String)],
) {
    let hp = module.hilbert_polynomial();
    w.open("invariants");
    w.kv("rank", verdict.chern.rank);
    w.kv("c1", verdict.chern.c1);
    w.kv("slope", ratio_string(verdict.chern.slope));
    w.kv("hilbert-poly", hp.to_display());
    let binom_strs: Vec<String> = hp.binom.iter().map(|b| b.to_string()).collect();
    w.kv("hilbert-binomial", binom_strs.join(" "));
    let (lo, hi) = h0_window_bounds(verdict.chern.c1);
    w.open("h0");
    for (k, dim) in module.h0_window(lo, hi) {
        w.kv(&format!("k={k}"), dim);
    }
    w.close();
    for (k, v) in extra {
        w.kv(k, v);
    }
    w.close();
}

pub fn write_verdict_section(w: &mut ReportWriter, verdict: &Verdict) {
    w.open("verdict");
    w.kv("status", verdict.status);
    for cert in &verdict.certificates {
        write_certificate(w, cert);
    }
    w.close();
}

fn write_certificate(w: &mut ReportWriter, cert: &Certificate) {
    w.open(&format!("certificate {}", cert.rule));
    match cert.status {
        Some(s) => w.kv("status", s),
        None => w.kv("status", "evidence-only"),
    };
    w.kv("citation", &cert.citation);
    w.open("evidence");
    for (k, v) in &cert.evidence {
        w.kv(k, v);
    }
    w.close();
    w.close();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_shape() {
        let mut w = ReportWriter::new();
        w.open("report");
        w.kv("a", 1);
        w.open("inner");
        w.kv("b", "x y");
        w.close();
        w.close();
        assert_eq!(w.finish(), "report\n  a 1\n  inner\n    b x y\n");
    }

    #[test]
    fn ratio_formatting() {
        assert_eq!(ratio_string(Ratio::new(-3, 2)), "-3/2");
        assert_eq!(ratio_string(Ratio::new(4, 2)), "2");
    }
}

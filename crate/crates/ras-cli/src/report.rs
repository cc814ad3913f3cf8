//! Structured run reports: JSON document, CSV samples table, and the
//! human-readable rendering. Field names and order are stable; floats are
//! written with round-trip formatting so reports are byte-stable across
//! runs on identical configuration.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub sup: f64,
    pub rms: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub family: String,
    pub n: usize,
    pub m: Option<usize>,
    pub signature: String,
    pub alphas: Option<Vec<f64>>,
    pub eps_i0: Option<f64>,
    pub c: f64,
    pub k: f64,
    pub base: f64,
    pub profile: String,
    pub window: [f64; 2],
    pub samples: usize,
    pub grid_box: [f64; 2],
    pub per_axis: usize,
    pub checks: Vec<CheckSummary>,
    pub skipped_points: usize,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        fs::write(path, text)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "family {}  n {}", self.family, self.n);
        if let Some(m) = self.m {
            let _ = write!(out, "  m {m}");
        }
        let _ = write!(out, "  signature {}", self.signature);
        if let Some(alphas) = &self.alphas {
            let joined: Vec<String> = alphas.iter().map(|a| a.to_string()).collect();
            let _ = write!(out, "  alphas {}", joined.join(","));
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "profile {}  window [{}, {}]  c {}  k {}  base {}",
            self.profile, self.window[0], self.window[1], self.c, self.k, self.base
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "check {:<8} sup {:<24e} rms {:<24e} tol {:<10e} {}",
                c.name,
                c.sup,
                c.rms,
                c.tol,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        if self.skipped_points > 0 {
            let _ = writeln!(out, "skipped {} near-singular points", self.skipped_points);
        }
        let _ = writeln!(out, "verdict: {}", if self.all_pass() { "pass" } else { "FAIL" });
        out
    }
}

/// One row of the samples table, written in the fixed column order
/// `invariant,phi,dphi,ddphi,f,df,rho,res1,res2,res3`.
#[derive(Clone, Debug)]
pub struct SampleRow {
    pub invariant: f64,
    pub phi: [f64; 3],
    pub f: [f64; 2],
    pub rho: f64,
    pub res: [f64; 3],
}

pub fn write_csv(rows: &[SampleRow], path: &Path) -> io::Result<()> {
    let mut text = String::from("invariant,phi,dphi,ddphi,f,df,rho,res1,res2,res3\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            r.invariant,
            r.phi[0],
            r.phi[1],
            r.phi[2],
            r.f[0],
            r.f[1],
            r.rho,
            r.res[0],
            r.res[1],
            r.res[2]
        );
    }
    fs::write(path, text)
}

//! The example gallery: one translation case in dimensions 3 and 4, one
//! warped case, one radial case, each with default constants. A signature
//! and direction override applies to the translation case, replacing the
//! default pair.

use ras_core::construct::Family;
use ras_core::Result;

use crate::runner::{build_construct, family_name, run_checks, RunSpec};

pub struct GalleryOptions {
    pub signature: Option<String>,
    pub alphas: Option<String>,
    pub tol: f64,
    pub tensor_tol: f64,
}

struct Case {
    label: &'static str,
    spec: RunSpec,
}

fn base_spec(opts: &GalleryOptions, family: Family, profile: &str) -> RunSpec {
    RunSpec {
        family,
        profile: profile.into(),
        n: None,
        m: None,
        signature: None,
        alphas: None,
        c: 1.0,
        k: 0.0,
        base: None,
        window: None,
        samples: 256,
        grid_box: (-1.0, 1.0),
        per_axis: 3,
        tol: opts.tol,
        tensor_tol: opts.tensor_tol,
    }
}

fn cases(opts: &GalleryOptions) -> Vec<Case> {
    let mut list = Vec::new();
    if opts.signature.is_some() || opts.alphas.is_some() {
        let mut spec = base_spec(opts, Family::Translation, "paperA");
        spec.window = Some((-3.0, 3.0));
        spec.signature = opts.signature.clone();
        spec.alphas = opts.alphas.clone();
        list.push(Case { label: "A (variant)", spec });
    } else {
        for n in [3usize, 4] {
            let mut spec = base_spec(opts, Family::Translation, "paperA");
            spec.window = Some((-3.0, 3.0));
            spec.n = Some(n);
            spec.grid_box = (-0.9, 0.9);
            list.push(Case { label: if n == 3 { "A" } else { "A (n=4)" }, spec });
        }
    }
    let mut b = base_spec(opts, Family::Warped, "paperB");
    b.window = Some((-2.0, 2.0));
    b.m = Some(2);
    b.grid_box = (-0.8, 0.8);
    list.push(Case { label: "B", spec: b });
    let mut c = base_spec(opts, Family::Radial, "paperC");
    c.window = Some((0.1, 4.0));
    c.grid_box = (-0.85, 0.85);
    c.per_axis = 5;
    list.push(Case { label: "C", spec: c });
    list
}

pub fn run(opts: &GalleryOptions) -> Result<bool> {
    println!(
        "{:<12} {:<12} {:>2} {:>2}  {:>12} {:>12} {:>12}  status",
        "case", "family", "n", "m", "system", "pde", "tensor"
    );
    let mut first_failure: Option<String> = None;
    for case in cases(opts) {
        let sd = build_construct(&case.spec)?;
        let outcome = run_checks(&sd, &case.spec)?;
        let r = &outcome.report;
        let sup = |name: &str| {
            r.checks
                .iter()
                .find(|c| c.name == name)
                .map(|c| format!("{:.3e}", c.sup))
                .unwrap_or_default()
        };
        let pass = r.all_pass();
        println!(
            "{:<12} {:<12} {:>2} {:>2}  {:>12} {:>12} {:>12}  {}",
            case.label,
            family_name(case.spec.family),
            r.n,
            r.m.map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
            sup("system"),
            sup("pde"),
            sup("tensor"),
            if pass { "pass" } else { "FAIL" }
        );
        if !pass && first_failure.is_none() {
            first_failure = Some(case.label.to_string());
        }
    }
    match first_failure {
        Some(label) => {
            println!("first failing case: {label}");
            Ok(false)
        }
        None => Ok(true),
    }
}

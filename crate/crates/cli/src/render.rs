//! Human-readable reports.

use std::fmt::Write;

use kmlat::coxeter::{GeneralizedCartanMatrix, WeylGroup};
use kmlat::descent::{RelativeData, Su3Report};
use kmlat::growth::{approx, partial_sum, LatticeReport, RationalSeries};
use kmlat::roots::{IntervalResult, Root};
use kmlat::sl::{BruhatFactorization, PanelReport, RefinedBruhatReport, TwinSl};

pub fn analyze(
    gcm: &GeneralizedCartanMatrix,
    coeffs: &[u64],
    rational: Option<&RationalSeries>,
    report: &LatticeReport,
    q: u64,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "GCM ({}x{}):\n{gcm}", gcm.rank(), gcm.rank());
    let _ = writeln!(out, "growth to depth {}: {:?}", report.depth, coeffs);
    if let Some(r) = rational {
        let _ = writeln!(out, "rational form: {r}");
    }
    let _ = writeln!(out, "partial sums of d_n / {q}^n:");
    for n in 0..coeffs.len() {
        let s = partial_sum(&coeffs[..=n], q);
        let _ = writeln!(out, "  N = {n:>3}: {}", approx(&s, 9));
    }
    let (lo, hi) = &report.growth_rate_bounds;
    let _ = writeln!(out, "growth rate in [{}, {}]", approx(lo, 6), approx(hi, 6));
    let _ = writeln!(out, "covolume bound: {}", approx(&report.covolume_bound, 9));
    let _ = writeln!(out, "verdict at q = {q}: {}", report.verdict);
    out
}

pub fn roots(
    gcm: &GeneralizedCartanMatrix,
    group: &WeylGroup,
    roots: &[Root],
    height: usize,
) -> String {
    let mut out = format!(
        "positive real roots of height <= {height} ({} of rank {}):\n",
        roots.len(),
        gcm.rank()
    );
    for r in roots {
        let _ = writeln!(
            out,
            "  {:<16} height {:<3} reflection {}",
            r.vector().to_string(),
            r.height(),
            group.format(r.reflection())
        );
    }
    out
}

pub fn interval(interval: &IntervalResult, linear: &[Root]) -> String {
    let show = |rs: &[Root]| {
        rs.iter()
            .map(|r| r.vector().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "  interval: {{{}}} ({}, search radius {})\n  linear interval: {{{}}}\n",
        show(&interval.members),
        if interval.certified {
            "certified"
        } else {
            "uncertified"
        },
        interval.search_radius,
        show(linear)
    )
}

pub fn bruhat(twin: &TwinSl, f: &BruhatFactorization) -> String {
    let word = twin.weyl_group().format(&f.word);
    format!(
        "w = {word} (window {}, length {})\nu =\n{}b =\n{}",
        f.w,
        f.w.length(),
        f.u,
        f.b
    )
}

pub fn thickness(report: &PanelReport) -> String {
    let mut out = format!(
        "panel of type {}: {} chambers\n",
        report.panel, report.thickness
    );
    for (i, c) in report.chambers.iter().enumerate() {
        let _ = write!(out, "chamber {i}:\n{c}");
    }
    out
}

pub fn refined(report: &RefinedBruhatReport) -> String {
    let mut out = format!(
        "refined Bruhat decomposition, q = {}, lengths <= {}\n",
        report.q, report.max_len
    );
    for c in &report.cells {
        let _ = writeln!(
            out,
            "  w = {:<14} |U_w| = {:<4} expected {}",
            c.w, c.size, c.expected
        );
    }
    let _ = writeln!(out, "coset collisions: {}", report.collisions);
    let _ = writeln!(
        out,
        "sampled factorization mismatches: {} of {}",
        report.mismatches, report.samples
    );
    let _ = writeln!(out, "{}", if report.passed() { "passed" } else { "FAILED" });
    out
}

pub fn descend(report: &RelativeData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "q = {}", report.q);
    let _ = writeln!(out, "orbits:");
    for o in &report.orbits {
        let _ = writeln!(out, "  {:<10} {:?}", o.label, o.kind);
    }
    let _ = writeln!(
        out,
        "fixed-point equations: solution space of dimension {}",
        report.apartment_dim
    );
    let _ = writeln!(out, "relative building dimension: {}", report.geometric_dim);
    let _ = writeln!(
        out,
        "relative generators: {}",
        report.relative_generators.join(", ")
    );
    for (label, row) in report.relative_labels.iter().zip(&report.relative_coxeter) {
        let cells: Vec<String> = row
            .iter()
            .map(|e| serde_json::to_string(e).unwrap_or_default())
            .collect();
        let _ = writeln!(out, "  {label:<10} {}", cells.join(" "));
    }
    for (label, t) in &report.panel_thickness {
        let _ = writeln!(out, "thickness {label}: {t}");
    }
    if !report.valency_sequence.is_empty() {
        let _ = writeln!(out, "tree with valencies {:?}", report.valency_sequence);
    }
    if report.split {
        let _ = writeln!(out, "split form");
    }
    out
}

pub fn su3(r: &Su3Report) -> String {
    format!(
        "unitary involution over GF({}): involutive {}, root formulas literal {} / with sign {}, torus formula {}\n\
         fixed points: {} of {} in the A2-orbit group, {} of {} in the singleton-orbit group\n",
        r.q * r.q,
        r.involutive,
        r.root_formulas_literal,
        r.root_formulas_signed,
        r.torus_formula,
        r.a2_fixed,
        r.a2_group_order,
        r.singleton_fixed,
        r.singleton_group_order
    )
}

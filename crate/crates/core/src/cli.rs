//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification or I/O error, 2 invalid
//! parameters, 3 modulus outside the admissible range for a requested decision.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::is_admissible;
use crate::classify::{
    classify_collection, soul_obstruction_report, verify_theorem1, FamilySpec,
    FamilyVerification,
};
use crate::error::Error;
use crate::homogeneous::{
    curvature_report_with_bound, diameter_bound, kernel_basis, universal_bound, CurvatureReport,
    KernelBasis, UniversalBound, LABELS,
};
use crate::homotopy::{homotopy_certificate, homotopy_equivalent_with, HomotopyCertificate, HomotopyVerdict, RankPolicy};
use crate::invariants::{
    basic_invariants, invariant_set, invariant_triple, BasicInvariants, BundleParams,
    InvariantTriple, SmoothingChoice,
};
use crate::report::Table;
use crate::rho::{distinguish, rho_profile_with, DistinctnessVerdict, RhoPrecision, RhoRecord};

/// Largest `r` for which `invariants` lists the ρ-profile.
const RHO_LISTING_LIMIT: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lpq", version, about = "Invariants of circle bundles L^{p,q} over S2 x S2")]
pub struct RunConfig {
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random planes sampled by `curvature`.
    #[arg(long, global = true, default_value_t = 20_000)]
    pub samples: u64,
    /// Starting precision of the ρ interval arithmetic.
    #[arg(long, global = true, default_value_t = 128)]
    pub precision_bits: u32,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basic invariants, fingerprint size and ρ-profile of one bundle.
    Invariants {
        #[arg(allow_negative_numbers = true)]
        p: BigInt,
        #[arg(allow_negative_numbers = true)]
        q: BigInt,
    },
    /// Homotopy and homeomorphism comparison of two bundles.
    Compare {
        #[arg(allow_negative_numbers = true)]
        p1: BigInt,
        #[arg(allow_negative_numbers = true)]
        q1: BigInt,
        #[arg(allow_negative_numbers = true)]
        p2: BigInt,
        #[arg(allow_negative_numbers = true)]
        q2: BigInt,
    },
    /// The family L^{r,(t+kr)r} over a range of k.
    Family {
        #[arg(long)]
        r: u64,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        /// Inclusive range `LO..HI`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        k: (i64, i64),
        /// Check every pair is homotopy equivalent and ρ-distinct; exit 1 otherwise
        #[arg(long)]
        verify: bool,
    },
    /// Partition `P,Q` items into homotopy classes and |pq| subclasses.
    Classify {
        #[arg(required = true, allow_hyphen_values = true, value_parser = parse_pair)]
        items: Vec<(BigInt, BigInt)>,
    },
    /// Sampled sectional curvature bounds of the homogeneous metric.
    Curvature {
        #[arg(allow_negative_numbers = true)]
        p: BigInt,
        #[arg(allow_negative_numbers = true)]
        q: BigInt,
        /// First kernel vector `A1,A2,A3`; defaults to (1, 0, -p).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, requires = "b")]
        a: Option<[i64; 3]>,
        /// Second kernel vector; defaults to (0, 1, -q).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple, requires = "a")]
        b: Option<[i64; 3]>,
    },
    /// Soul obstructions implied by ρ-distinctness among `P,Q` items.
    SoulReport {
        #[arg(required = true, allow_hyphen_values = true, value_parser = parse_pair)]
        items: Vec<(BigInt, BigInt)>,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn parse_pair(s: &str) -> Result<(BigInt, BigInt), String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected P,Q, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<BigInt>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(p)?, parse(q)?))
}

fn parse_triple(s: &str) -> Result<[i64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated integers, got {s:?}"));
    };
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok([parse(a)?, parse(b)?, parse(c)?])
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotAdmissible { .. } => 3,
        Error::PrecisionExhausted { .. } => 1,
        _ => 2,
    }
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn key_values(rows: &[(&str, String)]) -> String {
    let mut t = Table::new(["key", "value"]);
    for (k, v) in rows {
        t.push([k.to_string(), v.clone()]);
    }
    t.to_csv()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn threads() -> Option<usize> {
    std::env::var("LPQ_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Parses `args`, runs the command and writes the report to `out` (or `--out`).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads() {
        builder = builder.num_threads(n);
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| execute(&config)),
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return 1;
        }
    };

    let output = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, output.text.as_bytes()),
        None => out.write_all(output.text.as_bytes()).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return 1;
    }
    output.code
}

fn execute(config: &RunConfig) -> crate::Result<Output> {
    let fmt = config.format;
    match &config.command {
        Command::Invariants { p, q } => {
            let params = BundleParams::new(p.clone(), q.clone())?;
            invariants(&params, fmt, config.precision_bits).map(Output::ok)
        }
        Command::Compare { p1, q1, p2, q2 } => {
            let a = BundleParams::new(p1.clone(), q1.clone())?;
            let b = BundleParams::new(p2.clone(), q2.clone())?;
            compare(&a, &b, fmt).map(Output::ok)
        }
        Command::Family { r, t, k, verify } => {
            let spec = FamilySpec::new(*r, *t, k.0, k.1)?;
            family(&spec, *verify, fmt)
        }
        Command::Classify { items } => {
            let items = to_params(items)?;
            Ok(Output::ok(classify(&items, fmt)))
        }
        Command::Curvature { p, q, a, b } => {
            let params = BundleParams::new(p.clone(), q.clone())?;
            let basis = match (a, b) {
                (Some(a), Some(b)) => {
                    let basis = KernelBasis::new(*a, *b);
                    basis.validate(&params)?;
                    basis
                }
                _ => kernel_basis(&params),
            };
            curvature(&basis, config.samples, config.seed, fmt).map(Output::ok)
        }
        Command::SoulReport { items } => {
            let items = to_params(items)?;
            Ok(Output::ok(soul_report(&items, fmt)))
        }
    }
}

fn to_params(items: &[(BigInt, BigInt)]) -> crate::Result<Vec<BundleParams>> {
    items.iter().map(|(p, q)| BundleParams::new(p.clone(), q.clone())).collect()
}

#[derive(Serialize)]
struct InvariantsOutput {
    params: BundleParams,
    basic: BasicInvariants,
    #[serde(with = "crate::bigint_serde")]
    abs_pq: BigInt,
    admissible: bool,
    invariant_set_size: Option<usize>,
    identity_triple: Option<InvariantTriple>,
    precision_bits: u32,
    rho: Option<Vec<RhoRecord>>,
}

fn invariants(params: &BundleParams, fmt: Format, bits: u32) -> crate::Result<String> {
    let basic = basic_invariants(params);
    let admissible = is_admissible(params.r());
    let (set_size, identity) = if admissible {
        let set = invariant_set(params)?;
        let id = SmoothingChoice::identity(params)?;
        (Some(set.len()), Some(invariant_triple(params, &id)?))
    } else {
        (None, None)
    };
    let rho = match params.modulus() {
        Ok(r) if (2..=RHO_LISTING_LIMIT).contains(&r) => {
            let precision = RhoPrecision { start_bits: bits.max(16), ..RhoPrecision::default() };
            Some(rho_profile_with(params, precision)?.records())
        }
        _ => None,
    };
    let o = InvariantsOutput {
        params: params.clone(),
        abs_pq: params.abs_pq(),
        basic,
        admissible,
        invariant_set_size: set_size,
        identity_triple: identity,
        precision_bits: bits,
        rho,
    };
    let b = &o.basic;
    Ok(match fmt {
        Format::Json => json(&o),
        Format::Csv => {
            let mut rows = vec![
                ("p", params.p().to_string()),
                ("q", params.q().to_string()),
                ("pi1_order", b.pi1_order.to_string()),
                ("universal_cover", b.universal_cover.clone()),
                ("h2", b.h2.clone()),
                ("stably_parallelizable", b.stably_parallelizable.to_string()),
                ("reidemeister_torsion_trivial", b.reidemeister_torsion_trivial.to_string()),
                ("spin", b.spin.to_string()),
                ("abs_pq", o.abs_pq.to_string()),
                ("admissible", admissible.to_string()),
            ];
            if let (Some(n), Some(t)) = (o.invariant_set_size, &o.identity_triple) {
                rows.push(("invariant_set_size", n.to_string()));
                rows.push(("identity_triple", t.to_string()));
            }
            key_values(&rows)
        }
        Format::Md => {
            let mut s = format!("# {params}\n\n");
            let _ = writeln!(s, "- π₁ = Z/{}", b.pi1_order);
            let _ = writeln!(s, "- π₂ = {}, π₃ = {}", b.pi2, b.pi3);
            let _ = writeln!(s, "- universal cover S²×S³");
            let _ = writeln!(s, "- H² = {}", b.h2);
            if b.stably_parallelizable {
                let _ = writeln!(s, "- stably parallelizable");
            }
            if b.reidemeister_torsion_trivial {
                let _ = writeln!(s, "- Reidemeister torsion trivial");
            }
            let unique = if b.spin_structure_unique == Some(true) { ", unique spin structure" } else { "" };
            let _ = writeln!(s, "- spin: {}{unique}", yes_no(b.spin));
            let _ = writeln!(s, "- |pq| = {}", o.abs_pq);
            match (&o.invariant_set_size, &o.identity_triple) {
                (Some(n), Some(t)) => {
                    let _ = writeln!(s, "- invariant triples: {n} (identity smoothing gives {t})");
                }
                _ => {
                    let _ = writeln!(s, "- homotopy decision unavailable: r = {} is not admissible", b.pi1_order);
                }
            }
            if let Some(records) = &o.rho {
                let _ = writeln!(s, "\n## |ρ| (certified enclosures, start precision {bits} bits)\n");
                let mut t = Table::new(["g", "fold", "lower", "upper"]);
                for rec in records {
                    t.push([rec.g.to_string(), rec.m_fold.to_string(), rec.magnitude_lo.clone(), rec.magnitude_hi.clone()]);
                }
                s.push_str(&t.to_markdown());
            }
            s
        }
    })
}

#[derive(Serialize)]
struct CompareOutput {
    left: BundleParams,
    right: BundleParams,
    summary: String,
    homotopy: HomotopyVerdict,
    distinctness: Option<DistinctnessVerdict>,
    certificate: Option<HomotopyCertificate>,
}

fn compare(a: &BundleParams, b: &BundleParams, fmt: Format) -> crate::Result<String> {
    let homotopy = homotopy_equivalent_with(a, b, RankPolicy::ReportInequivalent)?;
    let (summary, distinctness, certificate) = if homotopy.equivalent {
        let d = distinguish(a, b)?;
        let tail = if d.is_distinct() {
            format!("non-homeomorphic ({})", d.reason)
        } else if a == b {
            "homeomorphic (identical parameters)".to_string()
        } else if a.swapped() == *b {
            "homeomorphic (factor swap, derived symmetry)".to_string()
        } else {
            format!("homeomorphism undecided ({})", d.reason)
        };
        let cert = homotopy_certificate(a, b)?;
        (format!("homotopy equivalent (simple, tangential); {tail}"), Some(d), Some(cert))
    } else {
        (format!("not homotopy equivalent ({})", homotopy.reason), None, None)
    };
    let o = CompareOutput {
        left: a.clone(),
        right: b.clone(),
        summary,
        homotopy,
        distinctness,
        certificate,
    };
    Ok(match fmt {
        Format::Json => json(&o),
        Format::Csv => {
            let mut t = Table::new(["p1", "q1", "p2", "q2", "equivalent", "triple", "distinct", "summary"]);
            t.push([
                a.p().to_string(),
                a.q().to_string(),
                b.p().to_string(),
                b.q().to_string(),
                o.homotopy.equivalent.to_string(),
                o.homotopy.witness.as_ref().map(|w| w.triple.to_string()).unwrap_or_default(),
                o.distinctness.as_ref().map(|d| d.is_distinct().to_string()).unwrap_or_default(),
                o.summary.clone(),
            ]);
            t.to_csv()
        }
        Format::Md => {
            let mut s = format!("{}\n", o.summary);
            if let Some(c) = &o.certificate {
                let _ = write!(s, "\n```text\n{c}```\n");
            }
            s
        }
    })
}

#[derive(Serialize)]
struct FamilyOutput {
    spec: FamilySpec,
    members: Vec<BundleParams>,
    verification: Option<FamilyVerification>,
}

fn family(spec: &FamilySpec, verify: bool, fmt: Format) -> crate::Result<Output> {
    let members = crate::classify::generate_family(spec)?;
    let verification = if verify { Some(verify_theorem1(spec)?) } else { None };
    let code = match &verification {
        Some(v) if !v.passed => 1,
        _ => 0,
    };
    let o = FamilyOutput { spec: *spec, members, verification };
    let mut table = Table::new(["k", "p", "q", "abs_pq"]);
    for (k, m) in (spec.k_lo..=spec.k_hi).zip(&o.members) {
        table.push([k.to_string(), m.p().to_string(), m.q().to_string(), m.abs_pq().to_string()]);
    }
    let text = match fmt {
        Format::Json => json(&o),
        Format::Csv => table.to_csv(),
        Format::Md => {
            let mut s = format!(
                "# L^{{{r},({t}+k·{r})·{r}}}, k ∈ [{lo}, {hi}]\n\n",
                r = spec.r,
                t = spec.t,
                lo = spec.k_lo,
                hi = spec.k_hi
            );
            s.push_str(&table.to_markdown());
            if let Some(v) = &o.verification {
                s.push('\n');
                match &v.counterexample {
                    None => {
                        let _ = writeln!(
                            s,
                            "PASS: {} pairs homotopy equivalent (simple, tangential) and ρ-distinct",
                            v.pairs_checked
                        );
                    }
                    Some(c) => {
                        let _ = writeln!(s, "FAIL: {} vs {}: {}", c.left, c.right, c.reason);
                    }
                }
            }
            s
        }
    };
    Ok(Output { text, code })
}

fn classify(items: &[BundleParams], fmt: Format) -> String {
    let rep = classify_collection(items);
    match fmt {
        Format::Json => json(&rep),
        Format::Csv | Format::Md => {
            let mut t = Table::new(["item", "p", "q", "r", "abs_pq", "class", "subclass", "status"]);
            for (i, p) in rep.items.iter().enumerate() {
                let c = rep.class_of(i).expect("partition covers every item");
                let class = &rep.classes[c];
                let (sub, status) = match class.undecided {
                    Some(_) => (String::new(), "undecided".to_string()),
                    None => {
                        let si = class.subclasses.iter().position(|s| s.members.contains(&i)).unwrap();
                        let st = serde_json::to_value(class.subclasses[si].status).unwrap();
                        (si.to_string(), st.as_str().unwrap_or_default().to_string())
                    }
                };
                t.push([
                    i.to_string(),
                    p.p().to_string(),
                    p.q().to_string(),
                    p.r().to_string(),
                    p.abs_pq().to_string(),
                    c.to_string(),
                    sub,
                    status,
                ]);
            }
            if fmt == Format::Csv {
                return t.to_csv();
            }
            let mut s = String::from("# Classification\n\n");
            s.push_str(&t.to_markdown());
            for (c, class) in rep.classes.iter().enumerate() {
                let _ = writeln!(s, "\n## Class {c} (π₁ = Z/{})\n", class.r);
                if let Some(reason) = &class.undecided {
                    let _ = writeln!(s, "- {}: {reason}", rep.items[class.members[0]]);
                    continue;
                }
                for w in &class.witnesses {
                    let _ = writeln!(
                        s,
                        "- {} ≃ {}: common triple {}",
                        rep.items[w.member], rep.items[w.representative], w.witness.triple
                    );
                }
                for e in &class.distinct_edges {
                    let _ = writeln!(s, "- subclass {} ≠ subclass {}: {}", e.left, e.right, e.reason);
                }
                for (si, sub) in class.subclasses.iter().enumerate() {
                    if let Some(note) = &sub.note {
                        let _ = writeln!(s, "- subclass {si}: {note}");
                    }
                }
            }
            for v in &rep.transitivity_violations {
                let _ = writeln!(s, "\nwarning: transitivity violated by items {}, {}, {}", v.a, v.b, v.c);
            }
            s
        }
    }
}

#[derive(Serialize)]
struct CurvatureOutput {
    seed: u64,
    samples: u64,
    report: CurvatureReport,
    universal_bound: UniversalBound,
    diameter_bound: f64,
}

fn curvature(basis: &KernelBasis, samples: u64, seed: u64, fmt: Format) -> crate::Result<String> {
    let samples = samples.max(1);
    let bound = universal_bound(samples, seed);
    let report = curvature_report_with_bound(basis, samples, seed, bound.value)?;
    let o = CurvatureOutput { seed, samples, report, universal_bound: bound, diameter_bound: diameter_bound() };
    let r = &o.report;
    let rows = [
        ("seed", seed.to_string()),
        ("samples", samples.to_string()),
        ("p", r.params.p().to_string()),
        ("q", r.params.q().to_string()),
        ("sec_min_sampled", format!("{:e}", r.sec_min_sampled)),
        ("sec_max_sampled", format!("{:e}", r.sec_max_sampled)),
        ("universal_bound", format!("{:e}", o.universal_bound.value)),
        ("normalization", format!("{:e}", r.normalization)),
        ("diameter_bound", format!("{:e}", o.diameter_bound)),
    ];
    Ok(match fmt {
        Format::Json => json(&o),
        Format::Csv => key_values(&rows),
        Format::Md => {
            let mut s = format!("# Curvature of {}\n\nseed: {seed}, samples: {samples}\n\n", r.params);
            let _ = writeln!(s, "embedding: {}\n", r.embedding);
            for (k, v) in &rows[2..] {
                let _ = writeln!(s, "- {k}: {v}");
            }
            let mut t = Table::new(std::iter::once("plane").chain(LABELS));
            for (name, plane) in [("max", &r.max_plane), ("min", &r.min_plane)] {
                for (j, v) in plane.iter().enumerate() {
                    t.push(std::iter::once(format!("{name} {}", ["X", "Y"][j])).chain(v.iter().cloned()));
                }
            }
            s.push('\n');
            s.push_str(&t.to_markdown());
            s
        }
    })
}

fn soul_report(items: &[BundleParams], fmt: Format) -> String {
    let rep = soul_obstruction_report(items);
    let list = |idx: &mut dyn Iterator<Item = usize>| {
        idx.map(|i| rep.items[i].to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut t = Table::new(["annotation", "items", "note"]);
    if let Some(a) = &rep.codim_one {
        let mut it = a.distinct_pairs.iter().flat_map(|&(i, j)| [i, j]);
        let mut seen: Vec<usize> = Vec::new();
        for i in &mut it {
            if !seen.contains(&i) {
                seen.push(i);
            }
        }
        seen.sort();
        t.push(["codim-1 souls".to_string(), list(&mut seen.into_iter()), a.note.clone()]);
    }
    if let Some(b) = &rep.codim_two {
        t.push(["codim-2 souls".to_string(), list(&mut b.representatives.iter().copied()), b.note.clone()]);
    }
    for (i, why) in &rep.skipped {
        t.push(["skipped".to_string(), rep.items[*i].to_string(), why.clone()]);
    }
    match fmt {
        Format::Json => json(&rep),
        Format::Csv => t.to_csv(),
        Format::Md => {
            let mut s = String::from("# Soul obstructions\n\n");
            if t.rows.is_empty() {
                s.push_str("No obstruction applies (vacuous).\n");
            } else {
                s.push_str(&t.to_markdown());
            }
            s
        }
    }
}

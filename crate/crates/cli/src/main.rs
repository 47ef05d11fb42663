use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dualbent_core::codes::{check_two_weight_projective, generator_text};
use dualbent_core::constructions::{expected_properties, instantiate, Construction};
use dualbent_core::hadamard::{
    check_components, check_generalized_hadamard, check_product_identity, check_unit_condition, matrix_text, GhMatrix,
};
use dualbent_core::io::{parse_function, parse_partition, parse_subset, write_function, write_partition};
use dualbent_core::partitions::{
    check_bent_partition_p2, check_condition_c, run_equivalence_harness, PartitionSpec,
};
use dualbent_core::pds::check_pds;
use dualbent_core::report::{self, int, parse_scheme_json, Check, RunReport};
use dualbent_core::reproduce::{reproduce, Options, Scope};
use dualbent_core::scheme::{build_translation_scheme, check_amorphy, class_pds};
use dualbent_core::vdb::{check_condition_a, check_vectorial_bent, component, punctured_preimage_sets, VFunc};
use dualbent_core::walsh::classify_bent;
use dualbent_core::{guards::Guards, selftest, Error, Result};

/// Exact verification of vectorial dual-bent functions and the objects they induce.
#[derive(Parser)]
#[command(name = "dualbent", version)]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Where to write the JSON report (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the table of a named construction in the function-file format.
    Construct {
        #[arg(long)]
        id: String,
        /// Write the induced partition (one part index per point) instead.
        #[arg(long)]
        partition: bool,
    },
    /// Run one module check on an input file.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        input: Input,
        /// Component c for `check bent` on a vectorial function.
        #[arg(long)]
        component: Option<u32>,
    },
    /// Build or verify a translation scheme certificate.
    Scheme {
        #[command(subcommand)]
        cmd: SchemeCmd,
    },
    /// Two-weight code checks.
    Code {
        #[command(subcommand)]
        cmd: CodeCmd,
    },
    /// Generalized Hadamard product identities.
    Hadamard {
        #[command(subcommand)]
        cmd: HadamardCmd,
    },
    /// Bent-partition certificates.
    Partition {
        #[command(subcommand)]
        cmd: PartitionCmd,
    },
    /// Reproduce the worked examples.
    Reproduce {
        /// example1, example2, example3, example4, example5-substitutes or all-desk.
        scope: String,
        /// Directory of `<name>.tbl` files used instead of the built-in tables.
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// Seeded quick checks of the fast routes against their oracles.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Bent,
    Vdb,
    Pds,
    Scheme,
    Code,
    Hadamard,
    Partition,
}

#[derive(Args, Clone, Default)]
struct Input {
    /// Function file.
    #[arg(long)]
    function: Option<PathBuf>,
    /// Partition file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Subset file.
    #[arg(long)]
    subset: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// Scheme on the nonempty punctured preimage sets of a function or the
    /// punctured parts of a partition.
    Build {
        #[command(flatten)]
        input: Input,
    },
    /// Rebuild the scheme from a certificate's classes and compare tensors.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Weight distribution of the projective code of a subset or a preimage class.
    Weights {
        #[command(flatten)]
        input: Input,
        /// Codomain index i of the class D*_{F,i} when reading a function.
        #[arg(long)]
        class: Option<u32>,
        /// Write the defining vectors, one per line.
        #[arg(long)]
        emit_generator: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HadamardCmd {
    /// Check the product identity for one pair of components.
    Verify {
        #[arg(long)]
        function: PathBuf,
        /// Distinct nonzero codomain indices `c,d`.
        #[arg(long)]
        pair: String,
        /// Write the exponent matrices of H_c, H_d and the target.
        #[arg(long)]
        materialize: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Cardinality, spectral and, within the guards, definitional checks of a partition file.
    Certify {
        #[arg(long)]
        file: PathBuf,
        /// Also run the five-statement equivalence harness.
        #[arg(long)]
        harness: bool,
    },
}

/// Exit codes: 0 all checks passed, 1 a check failed, 2 bad input or I/O,
/// 3 a size guard stopped the run.
fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::Guard { .. } => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn read(path: &Path, rep: &mut RunReport) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    rep.add_input(path.display().to_string(), &bytes);
    String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| Error::Invalid(format!("--{flag} is required")))
}

fn load_function(input: &Input, rep: &mut RunReport) -> Result<VFunc> {
    parse_function(&read(need(&input.function, "function")?, rep)?)
}

/// A function file or a partition file, whichever was given.
fn load_induced(input: &Input, rep: &mut RunReport) -> Result<VFunc> {
    match (&input.function, &input.file) {
        (Some(p), _) => parse_function(&read(p, rep)?),
        (None, Some(p)) => parse_partition(&read(p, rep)?),
        _ => Err(Error::Invalid("--function or --file is required".into())),
    }
}

fn nonempty_classes(f: &VFunc) -> Vec<Vec<u32>> {
    punctured_preimage_sets(f).into_iter().filter(|s| !s.is_empty()).collect()
}

fn scheme_check(f: &VFunc, seed: u64) -> Result<Check> {
    let cert = build_translation_scheme(&f.domain, &nonempty_classes(f))?;
    let ev = if cert.class_count() >= 3 && cert.is_scheme {
        let pds = class_pds(&f.domain, &cert)?;
        Some(check_amorphy(&cert, &pds, Guards::get().fusion_samples, seed)?)
    } else {
        None
    };
    let mut detail = report::scheme_json(&f.domain, &cert, ev.as_ref());
    detail["class_count"] = int(cert.class_count());
    detail["row_sums_hold"] = json!(cert.row_sums_hold());
    Ok(Check::new("scheme", cert.is_scheme && cert.row_sums_hold(), detail))
}

fn bent_check(f: &VFunc, c: Option<u32>) -> Result<Vec<Check>> {
    let comps: Vec<u32> = match c {
        Some(c) => vec![c],
        None if f.m() == 1 => vec![1],
        None => (1..f.codomain.size()).collect(),
    };
    comps
        .into_iter()
        .map(|c| {
            let spec = classify_bent(&component(f, c)?)?;
            let mut d = report::bent_json(&spec);
            d["component"] = int(c);
            Ok(Check::new(format!("bent[{c}]"), spec.bent, d))
        })
        .collect()
}

fn partition_checks(g: &PartitionSpec, seed: u64, harness: bool) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let f = &g.induced;
    if f.p() == 2 {
        let c = check_bent_partition_p2(g)?;
        out.push(Check::new("bent_partition", c.is_bent_partition, report::partition_json(&c)));
    } else {
        match check_condition_c(g) {
            Ok((ok, eps)) => out.push(Check::new("condition_c", ok, json!({"holds": ok, "eps": eps.map(int)}))),
            Err(e) => out.push(Check::failed("condition_c", &e)),
        }
    }
    let (ok, d) = report::definitional_json(g)?;
    out.push(Check::new("bent_partition_definitional", ok, d));
    if harness {
        let h = run_equivalence_harness(g, seed)?;
        out.push(Check::new("harness", h.consistent(), report::harness_json(&h)));
    }
    Ok(out)
}

fn parse_pair(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Invalid(format!("--pair expects `c,d`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Option<RunReport>> {
    let seed = cli.seed;
    let mut rep = RunReport::new("", seed);
    match &cli.cmd {
        Cmd::Construct { id, partition } => {
            let c = Construction::by_name(id)?;
            let f = instantiate(&c)?;
            let text = if *partition { write_partition(&f) } else { write_function(&f) };
            match &cli.out {
                Some(p) => write_out(p, &text)?,
                None => print!("{text}"),
            }
            let sheet = expected_properties(&c)?;
            eprintln!("{}: p={} n={} m={} ({})", c.name(), f.p(), f.n(), f.m(), sheet.feasibility.as_str());
            return Ok(None);
        }
        Cmd::Check { kind, input, component: comp } => {
            rep.command = format!("check {}", kind.to_possible_value().expect("named").get_name());
            match kind {
                CheckKind::Bent => {
                    let f = load_function(input, &mut rep)?;
                    for c in bent_check(&f, *comp)? {
                        rep.push(c);
                    }
                }
                CheckKind::Vdb => {
                    let f = load_function(input, &mut rep)?;
                    let vb = check_vectorial_bent(&f)?;
                    rep.push(Check::new("vectorial_bent", vb.all_bent, json!({"components": int(vb.spectra.len())})));
                    match check_condition_a(&f) {
                        Ok((cert, _)) => rep.push(Check::new("vectorial_dual_bent", cert.is_vectorial_dual_bent, report::vdb_json(&cert))),
                        Err(Error::Precondition(msg)) => {
                            let a = dualbent_core::vdb::analyze(&f)?;
                            let cert = dualbent_core::vdb::certificate(&f, &a)?;
                            let mut d = report::vdb_json(&cert);
                            d["condition_a_note"] = json!(msg);
                            rep.push(Check::new("vectorial_dual_bent", cert.is_vectorial_dual_bent, d));
                        }
                        Err(e) => return Err(e),
                    }
                }
                CheckKind::Pds => {
                    let (space, d) = parse_subset(&read(need(&input.subset, "subset")?, &mut rep)?)?;
                    let c = check_pds(&space, &d)?;
                    rep.push(Check::new("pds", c.is_some(), report::pds_json(&c)));
                }
                CheckKind::Scheme => {
                    let f = load_induced(input, &mut rep)?;
                    rep.push(scheme_check(&f, seed)?);
                }
                CheckKind::Code => {
                    let (space, d) = parse_subset(&read(need(&input.subset, "subset")?, &mut rep)?)?;
                    let r = check_two_weight_projective(&space, &d)?;
                    rep.push(Check::new("two_weight", r.two_weight, report::code_json(&r.code, r.scalar_closed)));
                }
                CheckKind::Hadamard => {
                    let f = load_function(input, &mut rep)?;
                    for (i, g) in check_components(&f)?.iter().enumerate() {
                        let c = i as u32 + 1;
                        rep.push(Check::new(format!("hadamard[{c}]"), g.generalized_hadamard, report::gh_json(c, g)));
                    }
                }
                CheckKind::Partition => {
                    let f = parse_partition(&read(need(&input.file, "file")?, &mut rep)?)?;
                    for c in partition_checks(&PartitionSpec::from_function(&f), seed, false)? {
                        rep.push(c);
                    }
                }
            }
        }
        Cmd::Scheme { cmd: SchemeCmd::Build { input } } => {
            rep.command = "scheme build".into();
            let f = load_induced(input, &mut rep)?;
            rep.push(scheme_check(&f, seed)?);
        }
        Cmd::Scheme { cmd: SchemeCmd::Verify { certificate } } => {
            rep.command = "scheme verify".into();
            let text = read(certificate, &mut rep)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
            let detail = v.get("checks").and_then(|c| c.get(0)).and_then(|c| c.get("detail")).unwrap_or(&v);
            let (space, classes, tensor) = parse_scheme_json(detail)?;
            let rest: Vec<Vec<u32>> = classes.into_iter().skip(1).collect();
            let cert = build_translation_scheme(&space, &rest)?;
            let same = cert.tensor == tensor;
            rep.push(Check::new("scheme_tensor_matches", same && cert.is_scheme, json!({"is_scheme": cert.is_scheme, "tensor_matches": same})));
        }
        Cmd::Code { cmd: CodeCmd::Weights { input, class, emit_generator } } => {
            rep.command = "code weights".into();
            let (space, d) = match (&input.subset, &input.function) {
                (Some(p), _) => parse_subset(&read(p, &mut rep)?)?,
                (None, Some(_)) => {
                    let f = load_function(input, &mut rep)?;
                    let i = class.ok_or_else(|| Error::Invalid("--class is required with --function".into()))?;
                    let sets = punctured_preimage_sets(&f);
                    let set = sets.get(i as usize).cloned().ok_or_else(|| Error::Invalid(format!("class {i} outside the codomain")))?;
                    (f.domain.clone(), set)
                }
                _ => return Err(Error::Invalid("--subset or --function is required".into())),
            };
            let r = check_two_weight_projective(&space, &d)?;
            if let Some(p) = emit_generator {
                write_out(p, &generator_text(&space, &r.code.defining_set))?;
            }
            rep.push(Check::new("two_weight", r.two_weight, report::code_json(&r.code, r.scalar_closed)));
        }
        Cmd::Hadamard { cmd: HadamardCmd::Verify { function, pair, materialize } } => {
            rep.command = "hadamard verify".into();
            let f = parse_function(&read(function, &mut rep)?)?;
            let (c, d) = parse_pair(pair)?;
            let vb = check_vectorial_bent(&f)?;
            let eps = if f.p() == 2 { Some(1) } else { check_unit_condition(&vb, f.p())?.1 };
            let r = check_product_identity(&f, &vb, c, d, eps)?;
            if let Some(p) = materialize {
                let mut text = String::new();
                for (label, x) in [("H_c", c), ("H_d", d), ("H_target", r.target)] {
                    let m = GhMatrix::new(component(&f, x)?).materialize()?;
                    text.push_str(&format!("# {label} (component {x})\n{}", matrix_text(&m)));
                }
                write_out(p, &text)?;
            }
            let gh = check_generalized_hadamard(&GhMatrix::new(component(&f, c)?))?;
            rep.push(Check::new("product_identity", r.holds, report::product_json(&r)));
            rep.push(Check::new("hadamard_c", gh.generalized_hadamard, report::gh_json(c, &gh)));
        }
        Cmd::Partition { cmd: PartitionCmd::Certify { file, harness } } => {
            rep.command = "partition certify".into();
            let f = parse_partition(&read(file, &mut rep)?)?;
            for c in partition_checks(&PartitionSpec::from_function(&f), seed, *harness)? {
                rep.push(c);
            }
        }
        Cmd::Reproduce { scope, from } => {
            let opts = Options { source: from.clone(), seed };
            rep = reproduce(Scope::parse(scope)?, &opts)?;
        }
        Cmd::Selftest => rep = selftest::run(seed)?,
    }
    Ok(Some(rep))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(rep)) => {
            let text = rep.to_json_string();
            match &cli.out {
                Some(p) => {
                    if let Err(e) = write_out(p, &text) {
                        eprintln!("error: {e}");
                        return exit_for(&e);
                    }
                }
                None => print!("{text}"),
            }
            eprint!("{}", rep.summary());
            eprintln!("{} in {:.2?}", if rep.passed() { "passed" } else { "FAILED" }, started.elapsed());
            if rep.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

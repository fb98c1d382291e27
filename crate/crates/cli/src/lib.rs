//! The `tsr` command line.
//!
//! Every command prints a deterministic report to stdout. Exit status is 0 on
//! success, 1 for bad input (including unknown flags) and 2 when a library
//! invariant fails.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tsr_core::bredon::{
    bredon_complex, bredon_homology_formula, chen_ruan_dims, homology, k_homology, split_blocks,
};
use tsr_core::complexes::{
    classify_component, connected_components, parse_complex, serialize_complex, torsion_subcomplex,
};
use tsr_core::groups::{catalog_group, mod_ell_homology_bruteforce};
use tsr_core::reduction::{merge_scripted, reduce, replay, MergeCandidate, MoveKind};
use tsr_core::series::{
    e2_page, equivariant_graph_cohomology_oracle, poincare_2torsion, poincare_3torsion, XsRows,
};
use tsr_core::{AbelianGroup, Error, GroupTag, OrbitComplex, ReductionLog, SubgroupCensus};

#[derive(Parser, Debug)]
#[command(name = "tsr", version, about = "Torsion subcomplex reduction and derived invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Directory searched for relative input paths that do not exist as given.
    #[arg(long, global = true, env = "TSR_FIXTURES")]
    fixtures_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the ℓ-torsion subcomplex and its components.
    Extract {
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce the ℓ-torsion subcomplex to its fixpoint.
    Reduce {
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        input: PathBuf,
        /// Scripted moves (JSON lines) applied after the fixpoint.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Write the move log (JSON lines) here.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Replay this log and check it reaches the same result.
        #[arg(long)]
        check_log: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Mod-ℓ Poincaré series from a subgroup census.
    Poincare {
        #[arg(long)]
        prime: u32,
        /// Census file or inline JSON.
        #[arg(long)]
        census: String,
        /// Highest degree of the coefficient table.
        #[arg(long, default_value_t = 10)]
        degrees: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Bredon homology of an orbit complex, split into its three parts.
    Bredon {
        #[arg(long)]
        input: PathBuf,
        /// Compare with the homology predicted from this census.
        #[arg(long)]
        census: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Equivariant K-homology from a census.
    KHomology {
        #[arg(long)]
        census: String,
        /// First homology of the orbit space, e.g. "Z^2 ⊕ Z/2".
        #[arg(long, default_value = "0")]
        h1_orbit: String,
        /// Second Betti number of the orbit space; defaults to the census β2.
        #[arg(long)]
        beta2: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Chen–Ruan orbifold cohomology dimensions.
    ChenRuan {
        #[arg(long)]
        census: String,
        /// Real instead of complexified orbifold.
        #[arg(long)]
        real: bool,
        /// Quotient-space dimensions as "degree:dim,...".
        #[arg(long, default_value = "")]
        quotient_dims: String,
        #[command(flatten)]
        common: Common,
    },
    /// The mod-2 E2 page for SL2 over imaginary quadratic integers.
    E2Page {
        #[arg(long)]
        census: String,
        /// Euler characteristic of the quotient of X_s.
        #[arg(long, allow_hyphen_values = true)]
        chi_xs: i64,
        /// X_s contributions as a file or inline JSON with keys E01, E11, E03, E13, H2Xsprime.
        #[arg(long, default_value = "{}")]
        xs_rows: String,
        #[command(flatten)]
        common: Common,
    },
    /// Independent oracles: bar-complex homology of a catalog group, or the
    /// equivariant cohomology of a graph of groups.
    Oracle {
        #[arg(long)]
        prime: u32,
        #[arg(long, conflicts_with = "input")]
        group: Option<GroupTag>,
        #[arg(long, required_unless_present = "group")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        degrees: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check that an input file or census parses and satisfies its invariants.
    Validate {
        #[arg(long, required_unless_present_any = ["census", "log"])]
        input: Option<PathBuf>,
        #[arg(long)]
        census: Option<String>,
        /// A reduction log to check for well-formedness.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Errors from the command layer: library errors plus I/O.
#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn resolve(path: &Path, common: &Common) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match &common.fixtures_dir {
        Some(dir) => dir.join(path),
        None => path.to_path_buf(),
    }
}

fn read(path: &Path, common: &Common) -> CliResult<String> {
    let p = resolve(path, common);
    std::fs::read_to_string(&p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
}

fn load_complex(path: &Path, common: &Common) -> CliResult<OrbitComplex> {
    Ok(parse_complex(&read(path, common)?)?)
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
fn inline_or_file(arg: &str, common: &Common) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read(Path::new(arg), common)
    }
}

fn load_census(arg: &str, common: &Common) -> CliResult<SubgroupCensus> {
    Ok(SubgroupCensus::from_json(&inline_or_file(arg, common)?)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values print") + "\n"
}

fn homology_line(h: &[AbelianGroup]) -> String {
    h.iter()
        .enumerate()
        .map(|(n, g)| format!("H_{n} = {g}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn dims_table(from: usize, dims: &[u64]) -> String {
    let qs: Vec<String> = (from..from + dims.len()).map(|q| q.to_string()).collect();
    let ds: Vec<String> = dims.iter().map(u64::to_string).collect();
    format!("q: {}\ndim: {}\n", qs.join(" "), ds.join(" "))
}

fn component_summary(x: &OrbitComplex, prime: u32) -> Vec<(usize, String)> {
    connected_components(x)
        .iter()
        .map(|c| {
            let kind = classify_component(c, prime)
                .map(|t| format!("{t:?}"))
                .unwrap_or_else(|_| "Unclassified".to_string());
            (c.cells().len(), kind)
        })
        .collect()
}

fn extract(prime: u32, input: &Path, common: &Common) -> CliResult<String> {
    let x = torsion_subcomplex(&load_complex(input, common)?, prime)?;
    if common.json {
        return Ok(serialize_complex(&x));
    }
    let mut out = String::new();
    for d in 0..=x.dimension().unwrap_or(0) {
        let _ = writeln!(out, "{d}-cells: {}", x.cells_of_dim(d).count());
    }
    let comps = component_summary(&x, prime);
    let _ = writeln!(out, "components: {}", comps.len());
    for (k, (n, kind)) in comps.iter().enumerate() {
        let _ = writeln!(out, "component {}: {kind} ({n} cells)", k + 1);
    }
    Ok(out)
}

fn apply_script(x: OrbitComplex, text: &str, log: &mut ReductionLog) -> CliResult<OrbitComplex> {
    let mut current = x;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let v: Value = serde_json::from_str(line)
            .map_err(|e| Error::Schema(format!("script line: {e}")))?;
        let kind = v.get("kind").and_then(Value::as_str);
        let cells: Vec<String> = v
            .get("cells")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(|c| c.as_str().map(String::from)).collect())
            .unwrap_or_default();
        let stabilizer = v
            .get("stabilizer")
            .and_then(Value::as_str)
            .map(str::parse::<GroupTag>)
            .transpose()?;
        match (kind, cells.as_slice(), stabilizer) {
            (Some("ScriptedMerge"), [s, t1, t2], Some(tag)) => {
                let c = MergeCandidate {
                    sigma: s.clone(),
                    tau1: t1.clone(),
                    tau2: t2.clone(),
                };
                let (next, mv) = merge_scripted(&current, &c, tag)?;
                log.moves.push(mv);
                current = next;
            }
            _ => {
                return Err(Error::Schema(format!(
                    "script lines must be ScriptedMerge moves with three cells and a stabilizer: {line}"
                ))
                .into())
            }
        }
    }
    Ok(current)
}

fn reduce_cmd(
    prime: u32,
    input: &Path,
    script: Option<&Path>,
    log_path: Option<&Path>,
    check_log: Option<&Path>,
    common: &Common,
) -> CliResult<String> {
    let x = load_complex(input, common)?;
    let (mut reduced, mut log) = reduce(&x, prime)?;
    if let Some(s) = script {
        reduced = apply_script(reduced, &read(s, common)?, &mut log)?;
    }
    if let Some(p) = log_path {
        std::fs::write(p, log.to_json_lines())
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    if let Some(p) = check_log {
        let given = ReductionLog::from_json_lines(&read(p, common)?)?;
        let replayed = replay(&x, &given, prime)?;
        if replayed != reduced {
            return Err(Error::Precondition("the log does not reproduce the reduced complex".into()).into());
        }
        return Ok(if common.json {
            pretty(&json!({"log_verified": true}))
        } else {
            "log verified\n".to_string()
        });
    }
    if common.json {
        let moves: Vec<Value> = log.moves.iter().map(|m| serde_json::to_value(m).expect("moves serialize")).collect();
        let comps: Vec<Value> = component_summary(&reduced, prime)
            .into_iter()
            .map(|(n, kind)| json!({"cells": n, "type": kind}))
            .collect();
        let complex: Value = serde_json::from_str(&serialize_complex(&reduced)).expect("complex JSON");
        return Ok(pretty(&json!({
            "complex": complex,
            "log": moves,
            "components": comps,
        })));
    }
    Ok(serialize_complex(&reduced))
}

fn poincare(prime: u32, census: &str, degrees: usize, common: &Common) -> CliResult<String> {
    let c = load_census(census, common)?;
    let series = match prime {
        2 => poincare_2torsion(&c)?,
        3 => poincare_3torsion(&c)?,
        _ => return Err(Error::InvalidArgument(format!("--prime must be 2 or 3, got {prime}")).into()),
    };
    let dims = series.expand_dims(degrees.max(3))?;
    let table: Vec<u64> = dims[3..].to_vec();
    if common.json {
        let by_degree: BTreeMap<String, u64> = table
            .iter()
            .enumerate()
            .map(|(k, d)| ((k + 3).to_string(), *d))
            .collect();
        return Ok(pretty(&json!({
            "prime": prime,
            "series": series.to_string(),
            "dims": by_degree,
        })));
    }
    Ok(format!("P(t) = {series}\n{}", dims_table(3, &table)))
}

fn bredon(input: &Path, census: Option<&str>, common: &Common) -> CliResult<String> {
    let x = load_complex(input, common)?;
    let b = bredon_complex(&x)?;
    let s = split_blocks(&b)?;
    let parts = [
        ("orbit space", homology(&s.trivial)?),
        ("2-part", homology(&s.two)?),
        ("3-part", homology(&s.three)?),
    ];
    let total = homology(&b.complex)?;
    let formula = census
        .map(|c| -> CliResult<_> { Ok(bredon_homology_formula(&load_census(c, common)?)?) })
        .transpose()?;
    if common.json {
        let mut v = json!({
            "homology": total.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "orbit_space": parts[0].1.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "two_part": parts[1].1.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "three_part": parts[2].1.iter().map(ToString::to_string).collect::<Vec<_>>(),
        });
        if let Some(f) = &formula {
            v["formula"] = json!({
                "two_part": [f.h0_2.to_string(), f.h1_2.to_string()],
                "three_part": [f.h0_3.to_string(), f.h1_3.to_string()],
            });
        }
        return Ok(pretty(&v));
    }
    let mut out = format!("total: {}\n", homology_line(&total));
    for (name, h) in &parts {
        let _ = writeln!(out, "{name}: {}", homology_line(h));
    }
    if let Some(f) = formula {
        let _ = writeln!(out, "formula 2-part: H_0 = {}, H_1 = {}", f.h0_2, f.h1_2);
        let _ = writeln!(out, "formula 3-part: H_0 = {}, H_1 = {}", f.h0_3, f.h1_3);
    }
    Ok(out)
}

fn parse_dims(text: &str) -> CliResult<BTreeMap<usize, u64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::InvalidArgument(format!("expected degree:dim, got {item:?}"));
        let (d, n) = item.split_once(':').ok_or_else(bad)?;
        let d: usize = d.trim().parse().map_err(|_| bad())?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        out.insert(d, n);
    }
    Ok(out)
}

fn run_command(cmd: &Command) -> CliResult<String> {
    match cmd {
        Command::Extract { prime, input, common } => extract(*prime, input, common),
        Command::Reduce {
            prime,
            input,
            script,
            log,
            check_log,
            common,
        } => reduce_cmd(
            *prime,
            input,
            script.as_deref(),
            log.as_deref(),
            check_log.as_deref(),
            common,
        ),
        Command::Poincare {
            prime,
            census,
            degrees,
            common,
        } => poincare(*prime, census, *degrees, common),
        Command::Bredon { input, census, common } => bredon(input, census.as_deref(), common),
        Command::KHomology {
            census,
            h1_orbit,
            beta2,
            common,
        } => {
            let c = load_census(census, common)?;
            let h1: AbelianGroup = h1_orbit.parse()?;
            let k = k_homology(&c, &h1, beta2.unwrap_or(c.beta2))?;
            Ok(if common.json {
                pretty(&json!({"K0": k.k0.to_string(), "K1": k.k1.to_string()}))
            } else {
                format!("K_0 = {}\nK_1 = {}\n", k.k0, k.k1)
            })
        }
        Command::ChenRuan {
            census,
            real,
            quotient_dims,
            common,
        } => {
            let c = load_census(census, common)?;
            let dims = chen_ruan_dims(&c, &parse_dims(quotient_dims)?, !real)?;
            Ok(if common.json {
                let m: BTreeMap<String, u64> = dims.iter().map(|(d, n)| (d.to_string(), *n)).collect();
                pretty(&json!({"dims": m}))
            } else {
                dims.iter().map(|(d, n)| format!("d={d}: {n}\n")).collect()
            })
        }
        Command::E2Page {
            census,
            chi_xs,
            xs_rows,
            common,
        } => {
            let c = load_census(census, common)?;
            let rows: XsRows = serde_json::from_str(&inline_or_file(xs_rows, common)?)
                .map_err(|e| Error::Schema(format!("xs rows: {e}")))?;
            let page = e2_page(&c, *chi_xs, &rows)?;
            if common.json {
                return Ok(pretty(&serde_json::to_value(&page).expect("E2 page serializes")));
            }
            let mut out = String::new();
            for r in [3, 2, 1, 0] {
                let row = page.rows[r];
                let _ = writeln!(out, "q=4k+{r}: {} {} {}", row[0], row[1], row[2]);
            }
            let _ = writeln!(out, "a1 = {}, a2 = {}, a3 = {}", page.a1, page.a2, page.a3);
            Ok(out)
        }
        Command::Oracle {
            prime,
            group,
            input,
            degrees,
            common,
        } => {
            let dims: Vec<u64> = match (group, input) {
                (Some(tag), _) => mod_ell_homology_bruteforce(&catalog_group(*tag), *prime, *degrees)?
                    .dims
                    .into_values()
                    .collect(),
                (None, Some(path)) => {
                    equivariant_graph_cohomology_oracle(&load_complex(path, common)?, *prime, 0..=*degrees)?
                }
                (None, None) => unreachable!("clap requires --group or --input"),
            };
            Ok(if common.json {
                pretty(&json!({"prime": prime, "dims": dims}))
            } else {
                dims_table(0, &dims)
            })
        }
        Command::Validate {
            input,
            census,
            log,
            common,
        } => {
            if let Some(path) = input {
                let text = read(path, common)?;
                let x = parse_complex(&text)?;
                if serialize_complex(&x) != text {
                    return Err(Error::Schema(
                        "file is valid but not in canonical form (serialize it to normalize)".into(),
                    )
                    .into());
                }
            }
            if let Some(c) = census {
                load_census(c, common)?;
            }
            if let Some(path) = log {
                let l = ReductionLog::from_json_lines(&read(path, common)?)?;
                if l.moves.iter().any(|m| m.kind == MoveKind::ScriptedMerge && m.stabilizer.is_none()) {
                    return Err(Error::Schema("scripted merge without stabilizer".into()).into());
                }
            }
            Ok("OK\n".to_string())
        }
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run_command(&cli.command) {
        Ok(report) => {
            let _ = out.write_all(report.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CliError::Lib(e) if e.is_internal() => 2,
                _ => 1,
            }
        }
    }
}

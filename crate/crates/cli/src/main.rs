use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rankmetric::codes::CodeJson;
use rankmetric::families::FamilySpec;
use rankmetric::invariants::{
    gabidulin_index, h_invariant, is_equiv_gabidulin_with, is_equiv_twisted_with, left_idealiser,
    mrd_fraction, right_idealiser,
};
use rankmetric::table::{self, RowSpec, Verdict};
use rankmetric::{Exec, FieldContext, MrdStatus, RdCode, Search};

#[derive(Parser)]
#[command(name = "rankmetric", version, about = "Construct and distinguish rank-metric codes")]
struct Cli {
    /// Field size q (a prime power); with --e, the prime p of q = p^e.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Extension degree of F_q over its prime field.
    #[arg(long, global = true)]
    e: Option<u32>,
    /// Extension degree n of F_{q^n} over F_q.
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of projective points enumerated before sampling.
    #[arg(long, global = true, env = "RANKMETRIC_BUDGET", default_value_t = 10_000_000)]
    budget: u64,
    /// Sample count when a search falls back to sampling.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: u64,
    /// Worker threads (1 forces the sequential path).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from a family spec such as `G:k=3,s=1` or `C3`.
    Construct { code: String },
    /// h, Gabidulin index, idealisers and MRD status.
    Invariants { code: String },
    /// Recompute the invariant table and diff it against the fixture.
    Table1 {
        /// Also run valid twisted codes at q = 3.
        #[arg(long)]
        supplementary: bool,
    },
    /// Is the code equivalent to a generalized Gabidulin code?
    CheckGab { code: String },
    /// Is the code equivalent to a generalized twisted Gabidulin code?
    CheckTwisted { code: String },
    /// Delsarte dual.
    Dual { code: String },
    /// Adjoint code.
    Adjoint { code: String },
    /// Rank distribution (exact within budget, else sampled).
    Rankdist { code: String },
    /// Fraction of random k-dimensional codes that are MRD.
    SampleMrd {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
    },
    /// Minimum rank distance with a witness.
    Mindist { code: String },
}

/// `CODE` arguments: a family spec, or a path to a JSON code file.
fn load_code(cli: &Cli, arg: &str) -> Result<(Option<FamilySpec>, RdCode)> {
    if arg.ends_with(".json") || arg.starts_with('@') {
        let path = arg.trim_start_matches('@');
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let j: CodeJson = serde_json::from_str(&text).context("parsing code JSON")?;
        return Ok((None, RdCode::from_json(&j)?));
    }
    let spec = FamilySpec::parse(arg)?;
    let ctx = context_for(cli, &spec)?;
    let code = spec.build(&ctx, cli.budget)?;
    Ok((Some(spec), code))
}

fn context_for(cli: &Cli, spec: &FamilySpec) -> Result<Arc<FieldContext>> {
    let q = match (cli.q, cli.e) {
        (Some(p), Some(e)) => p.checked_pow(e).context("q overflows")?,
        (Some(q), None) => q,
        (None, _) => spec.family.default_q() as u64,
    };
    Ok(spec.context(q, cli.n)?)
}

fn search(cli: &Cli) -> Search {
    Search {
        budget: cli.budget,
        samples: cli.samples,
        seed: cli.seed,
        exec: if cli.workers == Some(1) {
            Exec::Sequential
        } else {
            Exec::default()
        },
    }
}

fn code_json(code: &RdCode) -> Value {
    serde_json::to_value(code.to_json()).expect("serializable")
}

fn code_table(code: &RdCode) -> String {
    let ctx = code.ctx();
    let mut s = format!(
        "F_{}^{} over F_{}, {:?}-linear, dim {} (F_q-dim {})\n",
        ctx.q(),
        ctx.n(),
        ctx.q(),
        code.scalars(),
        code.dim(),
        code.dim_fq()
    );
    for f in code.basis() {
        s.push_str(&format!("  {}\n", f.to_strings().join(" ")));
    }
    s
}

fn mrd_json(st: &MrdStatus) -> Value {
    match st {
        MrdStatus::SampledConsistent { samples } => json!({"status": st.label(), "samples": samples}),
        MrdStatus::VerifiedFalse { witness } => json!({
            "status": st.label(),
            "witness": witness.as_ref().map(|w| w.to_strings()),
        }),
        MrdStatus::VerifiedTrue => json!({"status": st.label()}),
    }
}

/// Renders a flat JSON object as `key: value` lines or as a one-row CSV.
fn render(format: Format, v: &Value) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        Format::Csv => {
            let obj = v.as_object().expect("object");
            let keys: Vec<_> = obj.keys().cloned().collect();
            let vals: Vec<_> = obj.values().map(csv_cell).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        Format::Table => {
            let obj = v.as_object().expect("object");
            obj.iter()
                .map(|(k, v)| format!("{k:<16} {}\n", plain(v)))
                .collect()
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_cell(v: &Value) -> String {
    let s = plain(v);
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn run(cli: &Cli) -> Result<(String, bool)> {
    let search = search(cli);
    let mut ok = true;
    let text = match &cli.command {
        Command::Construct { code } => {
            let (_, c) = load_code(cli, code)?;
            match cli.format {
                Format::Table => code_table(&c),
                _ => serde_json::to_string_pretty(&code_json(&c))? + "\n",
            }
        }
        Command::Dual { code } | Command::Adjoint { code } => {
            let (_, c) = load_code(cli, code)?;
            let out = if matches!(cli.command, Command::Dual { .. }) {
                c.delsarte_dual()
            } else {
                c.adjoint_code()
            };
            match cli.format {
                Format::Table => code_table(&out),
                _ => serde_json::to_string_pretty(&code_json(&out))? + "\n",
            }
        }
        Command::Invariants { code } => {
            let (spec, c) = load_code(cli, code)?;
            let h = h_invariant(&c);
            let ind = c.k_fqn().map(|_| gabidulin_index(&c, &search)).transpose()?;
            let (l, r) = (left_idealiser(&c), right_idealiser(&c));
            let mut v = json!({
                "family": spec.as_ref().map(|s| s.to_string()),
                "q": c.ctx().q(),
                "n": c.n(),
                "k": c.dim(),
                "h": h.value,
                "h_arg": h.arg,
                "ind": ind.as_ref().map(|i| [i.lower, i.upper]),
                "ind_status": ind.as_ref().map(|i| i.status),
                "L_exp": l.order_exponent,
                "R_exp": r.order_exponent,
                "L_is_field": l.is_field,
                "R_is_field": r.is_field,
                "mrd": mrd_json(&c.is_mrd_in(&search)),
            });
            if let (Some(spec), Some(ind)) = (&spec, &ind) {
                let e = RowSpec::new(spec.clone(), c.ctx().q() as u64, None).expected(c.ctx());
                let matches = c.dim() == e.k
                    && h.value == e.h
                    && r.order_exponent == e.r_exp
                    && (ind.lower..=ind.upper).contains(&e.ind);
                v["fixture_match"] = json!(matches);
            }
            render(cli.format, &v)
        }
        Command::Table1 { supplementary } => {
            let mut rows = table::default_rows();
            if *supplementary {
                rows.extend(table::supplementary_rows());
            }
            let reports = rows
                .iter()
                .map(|r| table::table1_row(r, &search))
                .collect::<rankmetric::Result<Vec<_>>>()?;
            ok = reports.iter().all(|r| r.verdict != Verdict::Mismatch);
            match cli.format {
                Format::Json => serde_json::to_string_pretty(&reports)? + "\n",
                Format::Csv => {
                    let mut s = String::from("family,spec,q,n,k,h,h_arg,ind_lo,ind_hi,ind_status,L_exp,R_exp,fixture_match,verdict\n");
                    for r in &reports {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                            r.family,
                            csv_cell(&json!(r.spec)),
                            r.q,
                            r.n,
                            r.k,
                            r.h,
                            r.h_arg.map_or(String::new(), |a| a.to_string()),
                            r.ind[0],
                            r.ind[1],
                            plain(&json!(r.ind_status)),
                            r.l_exp,
                            r.r_exp,
                            r.fixture_match,
                            r.verdict
                        ));
                    }
                    s
                }
                Format::Table => {
                    let mut s = format!(
                        "{:<24} {:>2} {:>7} {:>3} {:>7} {:<14} {:>3} {:>3}  {}\n",
                        "code", "q", "[n,k]", "h", "ind", "status", "L", "R", "verdict"
                    );
                    for r in &reports {
                        s.push_str(&format!(
                            "{:<24} {:>2} {:>7} {:>3} {:>7} {:<14} {:>3} {:>3}  {}{}\n",
                            r.spec,
                            r.q,
                            format!("[{},{}]", r.n, r.k),
                            r.h,
                            format!("[{},{}]", r.ind[0], r.ind[1]),
                            plain(&json!(r.ind_status)),
                            r.l_exp,
                            r.r_exp,
                            r.verdict,
                            if r.mismatches.is_empty() {
                                String::new()
                            } else {
                                format!(" ({})", r.mismatches.join("; "))
                            }
                        ));
                    }
                    s
                }
            }
        }
        Command::CheckGab { code } => {
            let (_, c) = load_code(cli, code)?;
            let res = is_equiv_gabidulin_with(&c, c.is_mrd_in(&search))?;
            render(
                cli.format,
                &json!({
                    "equivalent": res.s.is_some(),
                    "s": res.s,
                    "mrd": res.mrd.label(),
                }),
            )
        }
        Command::CheckTwisted { code } => {
            let (_, c) = load_code(cli, code)?;
            let res = is_equiv_twisted_with(&c, c.is_mrd_in(&search))?;
            let ctx = c.ctx();
            let w = res.witness.as_ref();
            render(
                cli.format,
                &json!({
                    "equivalent": w.is_some(),
                    "s": w.map(|w| w.s),
                    "eta": w.map(|w| ctx.element_to_string(w.eta)),
                    "eta_norm": w.map(|w| ctx.element_to_string(ctx.rel_norm(w.eta))),
                    "p": w.map(|w| w.p.to_strings().join(" ")),
                    "rejected": res.rejected.iter().map(|(s, st)| json!({"s": s, "step": st})).collect::<Vec<_>>(),
                    "mrd": res.mrd.label(),
                }),
            )
        }
        Command::Rankdist { code } => {
            let (_, c) = load_code(cli, code)?;
            let (exact, dist) = match c.rank_distribution_in(&search) {
                Ok(d) => (true, d),
                Err(rankmetric::Error::BudgetExceeded(_)) => {
                    (false, c.sampled_rank_profile(search.samples, search.seed)?)
                }
                Err(e) => return Err(e.into()),
            };
            match cli.format {
                Format::Csv => dist.to_csv(),
                Format::Json => {
                    serde_json::to_string_pretty(&json!({"exact": exact, "counts": dist.counts}))?
                        + "\n"
                }
                Format::Table => {
                    let mut s = format!("{} rank distribution\n", if exact { "exact" } else { "sampled" });
                    for (r, n) in dist.counts.iter().enumerate() {
                        s.push_str(&format!("{r:>4} {n}\n"));
                    }
                    s
                }
            }
        }
        Command::SampleMrd { k, trials } => {
            let p = cli.q.unwrap_or(2);
            let q = match cli.e {
                Some(e) => p.pow(e),
                None => p,
            };
            let (p, e) = rankmetric::arith::prime_power(q).context("q is not a prime power")?;
            let ctx = Arc::new(FieldContext::new(p, e, cli.n.unwrap_or(4))?);
            let f = mrd_fraction(&ctx, *k, *trials, &search)?;
            render(
                cli.format,
                &json!({"q": q, "n": ctx.n(), "k": k, "trials": trials, "seed": cli.seed, "mrd_fraction": f}),
            )
        }
        Command::Mindist { code } => {
            let (_, c) = load_code(cli, code)?;
            let v = match c.min_distance_in(&search) {
                Ok((d, w)) => json!({"exact": true, "d": d, "witness": w.to_strings().join(" ")}),
                Err(rankmetric::Error::BudgetExceeded(_)) => {
                    let d = c.sample_min_rank(search.samples, search.seed)?;
                    json!({"exact": false, "d_upper": d, "samples": search.samples})
                }
                Err(e) => return Err(e.into()),
            };
            render(cli.format, &v)
        }
    };
    Ok((text, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_workers(&cli) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
                None => io::stdout().write_all(text.as_bytes()).map_err(Into::into),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("fixture mismatch");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_workers(cli: &Cli) -> Result<()> {
    if let Some(w) = cli.workers {
        if w == 0 {
            bail!("--workers must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global()?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_workers(cli: &Cli) -> Result<()> {
    if cli.workers.is_some_and(|w| w != 1) {
        bail!("built without the parallel feature; only --workers 1 is available");
    }
    Ok(())
}

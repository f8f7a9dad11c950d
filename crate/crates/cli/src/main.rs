use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncchrom::chromatic::{is_epositive, is_semisym_epositive, x_e, y_p_dc, y_semisym_main};
use ncchrom::diagrams::{enumerate_arcs, for_each_labeled};
use ncchrom::involution::{case_census, trace_case, verify, verify_sample};
use ncchrom::{parse_graph, CaseId, CommExpr, NCExpr, SemiSymE, UnitIntervalGraph};
use serde_json::{json, Value};

const MAX_SEMISYM: usize = 7;
const MAX_P: usize = 9;
const MAX_SWEEP: usize = 6;

#[derive(Parser)]
#[command(name = "ncchrom", version, about = "Chromatic symmetric functions in non-commuting variables")]
struct Cli {
    /// Worker threads for the parallel sums
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Run past the resource guards
    #[arg(long, global = true)]
    force: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    P,
    E,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// 𝒜(G): arc diagrams
    Arcs,
    /// 𝒜′(G): tic'd arc diagrams
    Tics,
    /// 𝒜′_L(G): labeled, starred tic'd arc diagrams
    Labeled,
}

#[derive(Subcommand)]
enum Cmd {
    /// Y_G (or X_G with --commutative) in the p- or e-basis
    Expand {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = BasisArg::E)]
        basis: BasisArg,
        /// Sum e-coefficients over ≡ₙ classes
        #[arg(long, conflicts_with = "commutative")]
        semisym: bool,
        /// Apply ρ and expand X_G
        #[arg(long)]
        commutative: bool,
    },
    /// e-positivity of X_G and semi-symmetrized e-positivity of Y_G
    CheckEpositive {
        #[arg(long)]
        graph: String,
    },
    /// Count or list arc diagrams
    Diagrams {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Kind::Labeled)]
        kind: Kind,
        #[arg(long)]
        list: bool,
    },
    /// Check φ on 𝒜′_L(TL_n)
    VerifyInvolution {
        #[arg(long)]
        n: usize,
        /// Check K random diagrams instead of the full sweep
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the first diagram of this case and its image
        #[arg(long)]
        trace: Option<String>,
    },
    /// X_G(1^k) against proper k-colorings
    Oracle {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 6)]
        max_colors: u64,
        #[arg(long)]
        colors: Option<u64>,
    },
    /// Case census over 𝒜′_L(TL_n)
    Cases {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Parse(String),
    Guard(String),
    Violation,
}

fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

fn guard(force: bool, n: usize, max: usize, what: &str, cost: String) -> Result<(), Failure> {
    if n > max && !force {
        return Err(Failure::Guard(format!(
            "refusing {what} at n={n} (limit {max}); estimated cost {cost}; pass --force to run anyway"
        )));
    }
    Ok(())
}

fn p_cost(n: usize) -> String {
    format!("≤ {} set partitions per term", bell(n))
}

fn tic_cost(n: usize) -> String {
    format!("≤ {} tic'd arc diagrams", bell(n) << n.saturating_sub(1))
}

fn graph(spec: &str) -> Result<UnitIntervalGraph, Failure> {
    parse_graph(spec).map_err(|e| Failure::Parse(format!("--graph {spec:?}: {e}")))
}

fn nc_terms(x: &NCExpr) -> Value {
    x.terms().map(|(pi, c)| json!({"pi": pi.to_string(), "coeff": c.to_string()})).collect()
}

fn semisym_terms(x: &SemiSymE) -> Value {
    x.terms().map(|(k, c)| json!({"lambda": k.lambda.parts(), "last": k.last, "coeff": c.to_string()})).collect()
}

fn comm_terms(x: &CommExpr) -> Value {
    let mut v: Vec<_> = x.terms().collect();
    v.reverse();
    v.into_iter().map(|(l, c)| json!({"lambda": l.parts(), "coeff": c.to_string()})).collect()
}

fn emit(format: Format, v: &Value, text: String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(v).expect("serializable")),
        Format::Text => println!("{text}"),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let force = cli.force;
    match &cli.cmd {
        Cmd::Expand { graph: spec, basis, semisym, commutative } => {
            let g = graph(spec)?;
            let n = g.n();
            let name = if *basis == BasisArg::P { "p" } else { "e" };
            let (terms, text, nonneg) = if *semisym {
                if *basis == BasisArg::P {
                    return Err(Failure::Parse("--semisym needs --basis e".into()));
                }
                guard(force, n, MAX_SEMISYM, "the semi-symmetrized expansion", tic_cost(n))?;
                let y = y_semisym_main(&g);
                (semisym_terms(&y), y.to_string(), y.is_nonnegative())
            } else {
                guard(force, n, MAX_P, "the p-expansion", p_cost(n))?;
                let y = y_p_dc(&g);
                if *commutative {
                    let x = y.rho();
                    let x = if *basis == BasisArg::E { x.p_to_e().expect("p-basis") } else { x };
                    (comm_terms(&x), x.to_string(), x.is_nonnegative())
                } else {
                    let y = if *basis == BasisArg::E { y.p_to_e().expect("p-basis") } else { y };
                    let nonneg = y.terms().all(|(_, c)| *c >= num_zero());
                    (nc_terms(&y), y.to_string(), nonneg)
                }
            };
            let mut v = json!({"graph": spec, "expansion": {name: terms}});
            if *basis == BasisArg::E {
                v["epositive"] = json!(nonneg);
            }
            emit(cli.format, &v, text);
        }
        Cmd::CheckEpositive { graph: spec } => {
            let g = graph(spec)?;
            let n = g.n();
            guard(force, n, MAX_P, "X_G", p_cost(n))?;
            guard(force, n, MAX_SEMISYM, "the semi-symmetrized expansion", tic_cost(n))?;
            let (e, s) = (is_epositive(&g), is_semisym_epositive(&g));
            let v = json!({"graph": spec, "epositive": e, "semisym_epositive": s});
            emit(cli.format, &v, format!("epositive {e}\nsemisym_epositive {s}"));
        }
        Cmd::Diagrams { graph: spec, kind, list } => {
            let g = graph(spec)?;
            let n = g.n();
            if *kind == Kind::Labeled {
                guard(force, n, MAX_SEMISYM, "labeled diagram enumeration", tic_cost(n))?;
            }
            let arcs = enumerate_arcs(&g);
            let mut lines = Vec::new();
            let count: u64 = match kind {
                Kind::Arcs => {
                    if *list {
                        lines = arcs.iter().map(arc_text).collect();
                    }
                    arcs.len() as u64
                }
                Kind::Tics => {
                    if *list {
                        for a in &arcs {
                            let heads: Vec<(usize, usize)> = a.arcs();
                            for mask in 0u64..1 << heads.len() {
                                let s: Vec<String> = heads
                                    .iter()
                                    .enumerate()
                                    .map(|(b, (i, j))| {
                                        format!("({i},{j}){}", if mask >> b & 1 == 1 { "!" } else { "" })
                                    })
                                    .collect();
                                lines.push(if s.is_empty() { "-".into() } else { s.join(" ") });
                            }
                        }
                    }
                    arcs.iter().map(|a| 1u64 << a.num_arcs()).sum()
                }
                Kind::Labeled => {
                    let mut c = 0u64;
                    for a in &arcs {
                        for_each_labeled(a, |d| {
                            c += 1;
                            if *list {
                                lines.push(d.to_string());
                            }
                        });
                    }
                    c
                }
            };
            let kind_name = match kind {
                Kind::Arcs => "arcs",
                Kind::Tics => "tics",
                Kind::Labeled => "labeled",
            };
            let mut v = json!({"graph": spec, "kind": kind_name, "count": count});
            if *list {
                v["diagrams"] = json!(lines);
            }
            let text = if *list { lines.join("\n") } else { count.to_string() };
            emit(cli.format, &v, text);
        }
        Cmd::VerifyInvolution { n, sample, seed, trace } => {
            if *n == 0 {
                return Err(Failure::Parse("--n must be ≥ 1".into()));
            }
            if let Some(t) = trace {
                let case: CaseId = t.parse().map_err(|e| Failure::Parse(format!("--trace {t:?}: {e}")))?;
                guard(force, *n, MAX_SWEEP, "a case trace", tic_cost(*n))?;
                match trace_case(*n, case) {
                    Some((d, img)) => {
                        let v =
                            json!({"n": n, "case": case.name(), "diagram": d.to_string(), "image": img.to_string()});
                        emit(cli.format, &v, format!("{case}\n{d}\n{img}"));
                    }
                    None => {
                        let v = json!({"n": n, "case": case.name(), "diagram": null});
                        emit(cli.format, &v, format!("{case}: none in TL_{n}"));
                    }
                }
                return Ok(());
            }
            let report = match sample {
                Some(k) => verify_sample(*n, *k, *seed),
                None => {
                    guard(force, *n, MAX_SWEEP, "a full involution sweep", tic_cost(*n))?;
                    verify(*n)
                }
            };
            let v = serde_json::to_value(&report).expect("serializable");
            let text = format!(
                "n {}\ntotal {}\npairs {}\nfixed {}\nviolations {}{}",
                report.n,
                report.total,
                report.pairs,
                report.fixed,
                report.violation_count,
                report.violations.iter().map(|s| format!("\n  {s}")).collect::<String>()
            );
            emit(cli.format, &v, text);
            if !report.ok() {
                return Err(Failure::Violation);
            }
        }
        Cmd::Oracle { graph: spec, max_colors, colors } => {
            let g = graph(spec)?;
            let n = g.n();
            guard(force, n, MAX_P, "X_G", p_cost(n))?;
            let x = x_e(&g);
            let ks: Vec<u64> = match colors {
                Some(k) => vec![*k],
                None => (0..=*max_colors).collect(),
            };
            let mut all_ok = true;
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for k in ks {
                let spec_val = x.specialize_ones(k);
                let count = g.count_colorings(k as usize);
                let ok = spec_val == num_int(count);
                all_ok &= ok;
                rows.push(json!({"k": k, "specialization": spec_val.to_string(), "colorings": count, "ok": ok}));
                text.push(format!("k={k} X(1^k)={spec_val} colorings={count} {}", if ok { "ok" } else { "MISMATCH" }));
            }
            let v = json!({"graph": spec, "checks": rows, "ok": all_ok});
            emit(cli.format, &v, text.join("\n"));
            if !all_ok {
                return Err(Failure::Violation);
            }
        }
        Cmd::Cases { n } => {
            if *n == 0 {
                return Err(Failure::Parse("--n must be ≥ 1".into()));
            }
            guard(force, *n, MAX_SWEEP, "a case census", tic_cost(*n))?;
            let census = case_census(*n);
            let mut cases = serde_json::Map::new();
            let mut text = Vec::new();
            for c in CaseId::ALL {
                let k = census.get(&c).copied().unwrap_or(0);
                cases.insert(c.name().to_string(), json!(k));
                text.push(format!("{:<10} {k}", c.name()));
            }
            let v = json!({"n": n, "cases": cases});
            emit(cli.format, &v, text.join("\n"));
        }
    }
    Ok(())
}

fn arc_text(a: &ncchrom::ArcDiagram) -> String {
    let s: Vec<String> = a.arcs().iter().map(|(i, j)| format!("({i},{j})")).collect();
    if s.is_empty() {
        "-".into()
    } else {
        s.join(" ")
    }
}

fn num_zero() -> ncchrom::ncsym::Coeff {
    num_int(0)
}

fn num_int(k: u64) -> ncchrom::ncsym::Coeff {
    ncchrom::ncsym::int(k as i64)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Violation) => ExitCode::from(1),
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fermiwig::expr::{parse_functional, parse_operator};
use fermiwig::overlaps::{h_closed_form, overlap_analytic, overlap_direct};
use fermiwig::ring::parse_rational;
use fermiwig::scenario::SUITES;
use fermiwig::serialize::TextForm;
use fermiwig::wigner::{star2, star3, weyl_transform, wigner_transform, PhaseSpace};
use fermiwig::{run_scenario, Coeff, Error, GenClass, ModeSet, ParamFn, Qs2, Registry, RingName, Scenario};

#[derive(Parser)]
#[command(name = "fermiwig", version, about = "Exact checks for fermionic Wigner functionals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and report every check.
    Verify(VerifyArgs),
    /// List the registered suites.
    Suites,
    /// h-functions and the eigenstate overlap at one `t`.
    Overlap {
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        c2: i64,
        /// Rational `t`, e.g. `1/2`.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        modes: ModesArg,
    },
    /// Wigner functional of an operator expression.
    Wigner {
        /// e.g. `a+0 a0`, `q0 p1 + 1/2`, or canonical `op M | …`.
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[command(flatten)]
        modes: ModesArg,
    },
    /// Weyl operator of a phase-space expression in `q`k, `p`k.
    Weyl {
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[command(flatten)]
        modes: ModesArg,
    },
    /// Star product of two or three operators' Wigner functionals.
    Star {
        /// Comma-separated operator expressions.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        ops: Vec<String>,
        #[command(flatten)]
        modes: ModesArg,
    },
}

#[derive(Args)]
struct ModesArg {
    /// `K,S`: k-points and spin components.
    #[arg(long, default_value = "1,2")]
    modes: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON scenario; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    modes: Option<String>,
    #[arg(long)]
    ring: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit wall-clock timings from the JSON report.
    #[arg(long)]
    no_timings: bool,
    /// Print the JSON report to stdout instead of the summary.
    #[arg(long)]
    json: bool,
}

fn parse_modes(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Config(format!("--modes expects `K,S`, got `{s}`"));
    let (k, sp) = s.split_once(',').ok_or_else(bad)?;
    Ok((k.trim().parse().map_err(|_| bad())?, sp.trim().parse().map_err(|_| bad())?))
}

fn mode_set(arg: &ModesArg) -> Result<ModeSet, Error> {
    let (k, s) = parse_modes(&arg.modes)?;
    let mut sc = Scenario::default();
    sc.modes.k_points = k;
    sc.modes.spins = s;
    sc.mode_set()
}

fn verify(a: VerifyArgs) -> Result<bool, Error> {
    let mut sc = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            Scenario::from_json(&text)?
        }
        None => Scenario::default(),
    };
    if !a.suites.is_empty() {
        sc.suites = a.suites;
    }
    if let Some(m) = &a.modes {
        let (k, s) = parse_modes(m)?;
        sc.modes.k_points = k;
        sc.modes.spins = s;
    }
    if let Some(r) = &a.ring {
        sc.ring = r.parse::<RingName>()?;
    }
    if let Some(s) = a.seed {
        sc.seed = s;
    }
    if let Some(n) = a.samples {
        sc.samples = n;
    }
    let mut report = run_scenario(&sc)?;
    if a.no_timings {
        report = report.without_timings();
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = a.out.or(sc.output.map(PathBuf::from)) {
        std::fs::write(&path, format!("{json}\n")).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    if a.json {
        println!("{json}");
    } else {
        for c in report.checks.iter().filter(|c| !c.passed()) {
            println!("FAIL [{}] {}: {}", c.suite, c.id, c.anchor);
            if let Some(d) = &c.detail {
                println!("     {d}");
            }
        }
        for t in &report.timings {
            let n = report.checks.iter().filter(|c| c.suite == t.suite).count();
            let bad = report.checks.iter().filter(|c| c.suite == t.suite && !c.passed()).count();
            println!("{:<16} {:>5} checks {:>3} failed {:>7} ms", t.suite, n, bad, t.wall_ms);
        }
        let s = &report.summary;
        println!("{} ring, M = {}: {} checks, {} passed, {} failed", report.ring, report.modes.0 * report.modes.1, s.total, s.passed, s.failed);
    }
    Ok(report.all_passed())
}

fn overlap(c1: i64, c2: i64, t: &str, modes: &ModesArg) -> Result<bool, Error> {
    let modes = mode_set(modes)?;
    let t = Qs2::from_rational(&parse_rational(t).map_err(Error::Config)?);
    let h = h_closed_form::<Qs2>(c1, c2, &t)?;
    println!("c1 = {c1}, c2 = {c2}, t = {}", t.to_text());
    println!("d   = {}", h.d.to_text());
    for (name, v) in [
        ("h0[A*◇B]", &h.h0[0]),
        ("h0[B f◇ B]", &h.h0[1]),
        ("h0[A* f◇ A*]", &h.h0[2]),
        ("h1", &h.h1),
        ("h2", &h.h2),
        ("h3", &h.h3),
        ("h5", &h.h5),
        ("h6", &h.h6),
        ("h7", &h.h7),
    ] {
        println!("{name:<13} = {}", v.to_text());
    }
    println!("h4 = -ln d");
    let reg = Registry::new();
    let astar = ParamFn::fresh(&reg, "A*", &modes, GenClass::FockParameter)?;
    let b = ParamFn::fresh(&reg, "B", &modes, GenClass::FockParameter)?;
    let analytic = overlap_analytic(c1, c2, &astar, &b, &t, &modes)?;
    let direct = overlap_direct(c1, c2, &astar, &b, &t, &modes)?;
    println!("overlap  = {}", analytic.to_text(Some(&reg)));
    let ok = analytic == direct;
    println!("direct {} analytic", if ok { "==" } else { "!=" });
    Ok(ok)
}

fn wigner(op: &str, modes: &ModesArg) -> Result<bool, Error> {
    let modes = mode_set(modes)?;
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg)?;
    let op = parse_operator::<Qs2>(op, &modes)?;
    let w = wigner_transform(&op, &ps)?;
    println!("W = {}", w.value.to_text(Some(&reg)));
    println!("{}", w.to_canonical());
    let back = weyl_transform(&w, &ps)?;
    let ok = back.action_eq(&op);
    println!("weyl roundtrip {}", if ok { "ok" } else { "MISMATCH" });
    Ok(ok)
}

fn weyl(w: &str, modes: &ModesArg) -> Result<bool, Error> {
    let modes = mode_set(modes)?;
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg)?;
    let w = parse_functional(w, &ps)?;
    let op = weyl_transform(&w, &ps)?;
    println!("{}", op.to_canonical());
    let again = wigner_transform(&op, &ps)?;
    let ok = again.value == w.value;
    println!("wigner roundtrip {}", if ok { "ok" } else { "MISMATCH" });
    Ok(ok)
}

fn star(ops: &[String], modes: &ModesArg) -> Result<bool, Error> {
    let modes = mode_set(modes)?;
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg)?;
    let parsed = ops.iter().map(|s| parse_operator::<Qs2>(s, &modes)).collect::<Result<Vec<_>, _>>()?;
    let ws = parsed.iter().map(|o| wigner_transform(o, &ps)).collect::<Result<Vec<_>, _>>()?;
    let product = parsed[1..].iter().fold(parsed[0].clone(), |acc, o| acc.mul(o));
    let starred = match ws.as_slice() {
        [a, b] => star2(a, b, &ps)?,
        [a, b, c] => star3(a, b, c, &ps)?,
        _ => return Err(Error::Config("--ops takes two or three operators".into())),
    };
    let direct = wigner_transform(&product, &ps)?;
    println!("star    = {}", starred.value.to_text(Some(&reg)));
    println!("W[prod] = {}", direct.value.to_text(Some(&reg)));
    let ok = starred.value == direct.value;
    println!("star product {} Wigner of the operator product", if ok { "==" } else { "!=" });
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Suites => {
            for s in SUITES {
                let rings: Vec<_> = s.rings.iter().map(|r| r.as_str()).collect();
                println!("{:<16} M ≤ {:<2} [{}]  {}", s.name, s.max_m, rings.join(", "), s.about);
            }
            Ok(true)
        }
        Cmd::Overlap { c1, c2, t, modes } => overlap(c1, c2, &t, &modes),
        Cmd::Wigner { op, modes } => wigner(&op, &modes),
        Cmd::Weyl { w, modes } => weyl(&w, &modes),
        Cmd::Star { ops, modes } => star(&ops, &modes),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

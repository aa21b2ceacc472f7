mod documents;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use descent_core::bicomplex::Page;
use descent_core::descent::{
    betti_of_image, betti_of_image_with, descent_inequality, direct_betti, e2_degeneration_report,
    verify_mv_exactness, DescentProblem,
};
use descent_core::scaffold::{
    assemble_from_provider, emit_bundle, emit_system, generate_fibered_systems, infer_arity,
    mock_bundle,
};
use descent_core::simpsets::CochainModel;
use serde_json::{json, Value};

use documents::{load_bundle, load_polynomials, ProblemDocument};
use report::{pass_fail, Report};

/// Betti numbers of the image of a simplicial map via cohomological descent.
#[derive(Debug, Parser)]
#[command(name = "descent", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct OutputOpts {
    /// Omit the timing line/field so output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Betti numbers b_0..b_q of the image, from the descent double complex.
    BettiImage {
        problem: PathBuf,
        /// Betti range; overrides the document's `q`.
        #[arg(long)]
        q: Option<usize>,
        /// Also compute the image cohomology directly and compare.
        #[arg(long)]
        direct: bool,
        /// Also assemble from unnormalized cochains and compare.
        #[arg(long)]
        unnormalized: bool,
        /// Print the E_1 and E_2 pages of the row filtration.
        #[arg(long)]
        pages: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run the structural checks on a problem.
    Check {
        problem: PathBuf,
        #[arg(value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long)]
        q: Option<usize>,
        /// Print page tables for the pages check.
        #[arg(long)]
        pages: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Emit the fibered systems S_0..S_{q+1} for a list of quadratic polynomials.
    Scaffold {
        /// Text file, one polynomial in X1..Xk, Y1..Ym per line.
        polys: PathBuf,
        #[arg(long, default_value_t = 0)]
        q: usize,
        /// Number of X variables (default: largest index used).
        #[arg(long)]
        k: Option<usize>,
        /// Number of Y variables (default: largest index used).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Assemble the truncated double complex from a provider bundle.
    Assemble {
        bundle: PathBuf,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Write the provider bundle a simplicial problem induces (ℓ = 1).
    MockBundle {
        problem: PathBuf,
        #[arg(long)]
        q: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Exactness,
    Pages,
    Inequality,
    All,
}

/// Exit statuses.
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn load_problem(path: &Path, q: Option<usize>) -> Result<DescentProblem> {
    ProblemDocument::load(path)?
        .to_problem(q)
        .with_context(|| path.display().to_string())
}

fn betti_json(values: &[usize]) -> Value {
    json!(values)
}

fn page_lines(report: &mut Report, page: &Page) {
    report.line(format!(
        "E_{} (row filtration), rows n top to bottom, columns p:",
        page.r
    ));
    for l in page.render().lines() {
        report.line(format!("  {l}"));
    }
}

fn page_json(page: &Page) -> Value {
    let cells: Vec<Value> = page
        .dims
        .iter()
        .map(|(&(p, n), &d)| json!({"p": p, "n": n, "dim": d}))
        .collect();
    json!(cells)
}

fn cmd_betti_image(
    prob: &DescentProblem,
    direct: bool,
    unnormalized: bool,
    pages: bool,
    report: &mut Report,
) -> Result<()> {
    let b = betti_of_image(prob)?;
    report.line(b.to_string());
    report.result("betti", betti_json(&b.values));
    if direct {
        let d = direct_betti(prob)?;
        let agree = d == b;
        report.line(format!(
            "direct: {d} ({})",
            if agree { "agrees" } else { "DISAGREES" }
        ));
        report.result("direct", betti_json(&d.values));
        if !agree {
            report.fail();
        }
    }
    if unnormalized {
        let u = betti_of_image_with(prob, CochainModel::Unnormalized)?;
        let agree = u == b;
        report.line(format!(
            "unnormalized: {u} ({})",
            if agree { "agrees" } else { "DISAGREES" }
        ));
        report.result("unnormalized", betti_json(&u.values));
        if !agree {
            report.fail();
        }
    }
    if pages {
        let r = e2_degeneration_report(prob)?;
        page_lines(report, &r.e1);
        page_lines(report, &r.e2);
        report.result("e1", page_json(&r.e1));
        report.result("e2", page_json(&r.e2));
    }
    Ok(())
}

fn cmd_check(prob: &DescentProblem, which: Which, pages: bool, report: &mut Report) -> Result<()> {
    let run = |w: Which| which == Which::All || which == w;
    if run(Which::Exactness) {
        let r = verify_mv_exactness(prob)?;
        let ok = r.passed();
        report.line(format!(
            "exactness: {} ({} positions)",
            pass_fail(ok),
            r.entries.len()
        ));
        for e in r.failures() {
            report.line(format!(
                "  degree {} at {}: kernel {} but image {}",
                e.degree, e.position, e.kernel, e.image
            ));
        }
        let entries: Vec<Value> = r
            .entries
            .iter()
            .map(|e| {
                json!({"degree": e.degree, "position": e.position.to_string(),
                       "kernel": e.kernel, "image": e.image, "pass": e.pass})
            })
            .collect();
        report.result("exactness", json!({"pass": ok, "entries": entries}));
        if !ok {
            report.fail();
        }
    }
    if run(Which::Pages) {
        let r = e2_degeneration_report(prob)?;
        let ok = r.passed();
        let col: Vec<String> = r.column0.iter().map(usize::to_string).collect();
        report.line(format!(
            "pages: {} (E_2 column 0 = {})",
            pass_fail(ok),
            col.join(" ")
        ));
        if r.column0 != r.direct {
            let d: Vec<String> = r.direct.iter().map(usize::to_string).collect();
            report.line(format!("  direct image cohomology is {}", d.join(" ")));
        }
        for (p, n) in &r.nonzero_off_column {
            report.line(format!("  E_2 at (p={p}, n={n}) is nonzero"));
        }
        if pages {
            page_lines(report, &r.e1);
            page_lines(report, &r.e2);
        }
        report.result(
            "pages",
            json!({"pass": ok, "column0": r.column0, "direct": r.direct,
                   "e1": page_json(&r.e1), "e2": page_json(&r.e2)}),
        );
        if !ok {
            report.fail();
        }
    }
    if run(Which::Inequality) {
        let mut all = true;
        let mut parts = Vec::new();
        let mut rows = Vec::new();
        for n in 0..=prob.q() {
            let i = descent_inequality(prob, n)?;
            all &= i.holds();
            parts.push(format!("n={n}: {} <= {}", i.lhs, i.rhs));
            rows.push(json!({"n": n, "lhs": i.lhs, "rhs": i.rhs, "pass": i.holds()}));
        }
        report.line(format!(
            "inequality: {} ({})",
            pass_fail(all),
            parts.join(", ")
        ));
        report.result("inequality", json!({"pass": all, "degrees": rows}));
        if !all {
            report.fail();
        }
    }
    Ok(())
}

/// What a command produced: a report, or a document to print verbatim.
enum Outcome {
    Report(Report, OutputOpts, Value),
    Document(String),
}

fn run(cli: Cli) -> Result<Outcome> {
    Ok(match cli.command {
        Command::BettiImage {
            problem,
            q,
            direct,
            unnormalized,
            pages,
            out,
        } => {
            let prob = load_problem(&problem, q)?;
            let mut report = Report::default();
            cmd_betti_image(&prob, direct, unnormalized, pages, &mut report)?;
            let echo = json!({"name": "betti-image", "input": problem.display().to_string(),
                              "q": prob.q(), "direct": direct, "unnormalized": unnormalized});
            Outcome::Report(report, out, echo)
        }
        Command::Check {
            problem,
            which,
            q,
            pages,
            out,
        } => {
            let prob = load_problem(&problem, q)?;
            let mut report = Report::default();
            cmd_check(&prob, which, pages, &mut report)?;
            let which_name = format!("{which:?}").to_lowercase();
            let echo = json!({"name": "check", "input": problem.display().to_string(),
                              "q": prob.q(), "which": which_name});
            Outcome::Report(report, out, echo)
        }
        Command::Scaffold { polys, q, k, m } => {
            let polys = load_polynomials(&polys)?;
            let (k0, m0) = infer_arity(&polys)?;
            let fs = generate_fibered_systems(&polys, k.unwrap_or(k0), m.unwrap_or(m0), q)?;
            Outcome::Document(emit_system(&fs))
        }
        Command::Assemble { bundle, q, out } => {
            let b = load_bundle(&bundle)?;
            let betti =
                assemble_from_provider(&b, q).with_context(|| bundle.display().to_string())?;
            let mut report = Report::default();
            report.line(betti.to_string());
            report.result("betti", betti_json(&betti.values));
            let echo = json!({"name": "assemble", "input": bundle.display().to_string(), "q": q});
            Outcome::Report(report, out, echo)
        }
        Command::MockBundle { problem, q } => {
            let prob = load_problem(&problem, q)?;
            Outcome::Document(emit_bundle(&mock_bundle(&prob)?))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli) {
        Ok(Outcome::Document(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(report, out, echo)) => {
            let timing = (!out.no_timing).then(|| start.elapsed());
            if out.json {
                print!("{}", report.render_json(echo, timing));
            } else {
                print!("{}", report.render_text(timing));
            }
            if report.failed {
                ExitCode::from(EXIT_CHECK_FAILED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hermform_core::algebra::Model;
use hermform_core::formality::{self, Requirement, Witness};
use hermform_core::hodge::{render_diamond, CohomologyTable};
use hermform_core::massey::{self, MasseyError};
use hermform_core::notation::{format_form, Notation};
use hermform_core::obstruction::{analyze, Verdict};
use hermform_core::{catalog, Degree, DimTable, Error, Form, Hodge, HodgeError, Notion, Scalar, Theory};
use rand::{Rng, SeedableRng};

static ASCII: AtomicBool = AtomicBool::new(false);

/// `println!` that transliterates to ASCII when asked to.
macro_rules! say {
    ($($arg:tt)*) => {
        println!("{}", render(&format!($($arg)*)))
    };
}

fn render(s: &str) -> String {
    if !ASCII.load(Ordering::Relaxed) {
        return s.to_string();
    }
    const TABLE: [(&str, &str); 13] = [
        ("∂∂̄", "ddbar"),
        ("∂̄", "dbar"),
        ("∂", "del"),
        ("ℋ", "H"),
        ("≠", "!="),
        ("⊆", "<="),
        ("∧", "^"),
        ("·", "*"),
        ("⟨", "<"),
        ("⟩", ">"),
        ("α", "a"),
        ("β", "b"),
        ("γ", "c"),
    ];
    TABLE
        .iter()
        .fold(s.to_string(), |acc, (from, to)| acc.replace(from, to))
}

#[derive(Parser)]
#[command(
    name = "hermform",
    version,
    about = "Exact Hermitian cohomology and formality of nilmanifold models"
)]
struct Cli {
    /// Plain ASCII output (also set by HERMFORM_ASCII=1).
    #[arg(long, global = true)]
    ascii: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Catalog id (see `list`) or path to a model file.
    #[arg(long)]
    model: String,
    /// Model parameter, e.g. `alpha=2` or `beta=1-i`.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog ids.
    List,
    /// Print cohomology diamonds.
    Cohomology {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated subset of dbar, del, bc, a, dr.
        #[arg(long, default_value = "dbar,bc,a,dr")]
        theories: String,
        /// Print the table as JSON instead.
        #[arg(long)]
        json: bool,
    },
    /// Check a geometric formality notion for the model's metric.
    Formality {
        #[command(flatten)]
        model: ModelArgs,
        /// dolbeault, bott-chern, abc, aeppli, de-rham or all.
        #[arg(long, default_value = "all")]
        notion: String,
    },
    /// Triple ABC-Massey product of three Bott-Chern harmonic forms.
    Massey {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        /// Also re-run with this many random choices of potentials.
        #[arg(long, default_value_t = 0)]
        perturb: usize,
    },
    /// Recompute the reference table of nonzero Massey products on Nakamura manifolds.
    VerifyAppendix {
        /// A single case such as `V.9`.
        #[arg(long)]
        case: Option<String>,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        perturb: usize,
    },
    /// Calabi-Eckmann model M_{u,v}.
    Ce {
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
        /// Add witnesses, the ∂∂̄ rows and the dimension obstructions.
        #[arg(long)]
        all_checks: bool,
    },
    /// Run the dimension obstructions on a JSON table.
    Obstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Parse a model file and print it back in normal form.
    Parse {
        file: PathBuf,
        /// Also build the model and check d² = 0 and the real structure.
        #[arg(long)]
        validate: bool,
    },
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, Scalar>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .with_context(|| format!("parameter `{kv}` is not of the form k=v"))?;
            let value: Scalar = v.trim().parse().map_err(|e| anyhow::anyhow!("parameter `{k}`: {e}"))?;
            Ok((k.trim().to_string(), value))
        })
        .collect()
}

fn load_model(args: &ModelArgs) -> Result<Model> {
    let params = parse_params(&args.params)?;
    let path = Path::new(&args.model);
    if path.is_file() {
        let source = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let spec = catalog::parse_with_params(&source, &params).map_err(Error::from)?;
        return Ok(Model::new(spec).map_err(HodgeError::from).map_err(Error::from)?);
    }
    let cm = catalog::load(&args.model, &params).map_err(Error::from)?;
    Ok(cm.model().map_err(HodgeError::from).map_err(Error::from)?)
}

fn hodge_of(model: Model) -> Result<Hodge> {
    Ok(Hodge::new(model).map_err(Error::from)?)
}

fn parse_theories(list: &str) -> Result<Vec<Theory>> {
    list.split(',')
        .map(|t| match t.trim().to_ascii_lowercase().as_str() {
            "dbar" | "dolbeault" => Ok(Theory::Dolbeault),
            "del" => Ok(Theory::ConjDolbeault),
            "bc" | "bott-chern" => Ok(Theory::BottChern),
            "a" | "aeppli" => Ok(Theory::Aeppli),
            "dr" | "de-rham" => Ok(Theory::DeRham),
            other => bail!("unknown theory `{other}` (expected dbar, del, bc, a or dr)"),
        })
        .collect()
}

fn symbol(theory: Theory) -> &'static str {
    match theory {
        Theory::Dolbeault => "h_dbar",
        Theory::ConjDolbeault => "h_del",
        Theory::BottChern => "h_BC",
        Theory::Aeppli => "h_A",
        Theory::DeRham => "b",
    }
}

fn print_diamonds(table: &CohomologyTable, theories: &[Theory]) {
    for (k, &t) in theories.iter().enumerate() {
        if k > 0 {
            say!("");
        }
        say!("{t} ({}) of {}:", symbol(t), table.model);
        say!("{}", render_diamond(table, t).trim_end_matches('\n'));
    }
}

struct Printer<'a> {
    model: &'a Model,
    notation: Notation,
}

impl Printer<'_> {
    fn form(&self, f: &Form) -> String {
        format_form(self.model.algebra(), f, self.notation)
    }

    /// Wraps sums, and everything in ASCII mode, in parentheses so they can be an operand.
    fn operand(&self, f: &Form) -> String {
        let s = self.form(f);
        if self.notation == Notation::Ascii || f.terms().count() > 1 || s.starts_with('-') {
            format!("({s})")
        } else {
            s
        }
    }

    fn degree(&self, d: Degree) -> String {
        match d {
            Degree::Bi(p, q) => format!("({p},{q})"),
            Degree::Total(k) => format!("{k}"),
        }
    }

    fn witness(&self, w: &Witness) {
        let left = self.operand(&w.left);
        let what = match (&w.operation, &w.right) {
            (formality::Operation::Wedge, Some((r, _))) => format!("{left} ∧ {}", self.operand(r)),
            (formality::Operation::Del, _) => format!("∂{left}"),
            (formality::Operation::Dbar, _) => format!("∂̄{left}"),
            (formality::Operation::Wedge, None) => left,
        };
        say!(
            "  witness: {what} = {} in degree {}",
            self.form(&w.result),
            self.degree(w.result_degree)
        );
        match w.requirement {
            Requirement::Equation(e) => say!("  fails {e} = 0: gives {}", self.form(&w.violation)),
            Requirement::OutsideAbcSpace => say!("  not in ℋ_A + ℋ_BC: off-space part {}", self.form(&w.violation)),
        }
        if let Some(x) = &w.exact_part {
            say!(
                "  exact part: ∂∂̄{} = {}",
                self.operand(&x.potential),
                self.form(&x.image)
            );
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_formality(hodge: &Hodge, notions: &[Notion], notation: Notation, details: bool) -> Result<()> {
    let pr = Printer {
        model: hodge.model(),
        notation,
    };
    for &notion in notions {
        if notion == Notion::BottChern {
            if let Some(h) = formality::holomorphic_closedness_obstruction(hodge).map_err(Error::from)? {
                let form = pr.operand(&h.form);
                say!("obstructed: holomorphic form {form} with ∂{form} ≠ 0");
            }
        }
        let r = formality::check_formality(hodge, notion).map_err(Error::from)?;
        say!("{notion}: {}", yes_no(r.formal));
        if let Some(w) = &r.witness {
            if details {
                pr.witness(w);
            }
        }
        if let (Some(a), true) = (&r.aeppli, details) {
            say!("  ℋ_A·ℋ_BC ⊆ ℋ_A: {}", yes_no(a.module_condition));
            say!("  ℋ_∂̄ = ℋ_BC = ℋ_A: {}", yes_no(a.spaces_coincide));
            say!(
                "  de Rham harmonic forms split by bidegree: {}",
                yes_no(a.de_rham_decomposes)
            );
            say!("  closed under wedge: {}", yes_no(a.closed_under_wedge));
        }
        if let (Some(note), true) = (r.note, details) {
            say!("  note: {note}");
        }
    }
    Ok(())
}

fn random_scalar(rng: &mut impl Rng) -> Scalar {
    Scalar::gaussian(rng.gen_range(-5..=5), rng.gen_range(-5..=5))
}

fn run_massey(hodge: &Hodge, exprs: [&str; 3], perturb: usize, seed: u64, notation: Notation) -> Result<()> {
    let model = hodge.model();
    let [a, b, c] = exprs.map(|e| massey::parse_form(model, e));
    let (a, b, c) = (
        a.map_err(Error::from)?,
        b.map_err(Error::from)?,
        c.map_err(Error::from)?,
    );
    let v = massey::triple_abc_massey(hodge, &a, &b, &c).map_err(Error::from)?;
    let pr = Printer { model, notation };
    say!(
        "⟨α, β, γ⟩_ABC in bidegree {}: {}",
        pr.degree(Degree::Bi(v.degree.0, v.degree.1)),
        if v.nonzero { "nonzero" } else { "zero" }
    );
    say!("representative: {}", pr.form(&v.representative));
    say!("Aeppli harmonic part: {}", pr.form(&v.harmonic));
    say!(
        "indeterminacy dimension: {} of {}",
        v.indeterminacy.dim(),
        v.coordinates.len()
    );
    if perturb > 0 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        massey::perturbation_check(hodge, [&a, &b, &c], &v, perturb, || random_scalar(&mut rng))
            .map_err(Error::from)?;
        say!("{perturb} random choices of potentials agree");
    }
    Ok(())
}

fn verify_appendix(
    case: Option<String>,
    params: &[String],
    perturb: usize,
    seed: u64,
    notation: Notation,
) -> Result<()> {
    let params = parse_params(params)?;
    let runs = match case {
        Some(case) => {
            let mut p = params.clone();
            if case == "V.17" && p.is_empty() {
                p = [
                    ("alpha".to_string(), Scalar::one()),
                    ("beta".to_string(), Scalar::one()),
                ]
                .into();
            }
            vec![(case, p)]
        }
        None => {
            if !params.is_empty() {
                bail!("--param needs --case");
            }
            massey::appendix_suite()
        }
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cases: BTreeMap<String, bool> = BTreeMap::new();
    let total_runs = runs.len();
    for (case, params) in runs {
        let r = massey::verify_appendix_case(&case, &params).map_err(Error::from)?;
        let model = catalog::load(&format!("nakamura:{case}"), &params)
            .map_err(Error::from)?
            .model()
            .map_err(HodgeError::from)
            .map_err(Error::from)?;
        let pr = Printer {
            model: &model,
            notation,
        };
        let label = if params.is_empty() {
            case.clone()
        } else {
            let kv: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{case} ({})", kv.join(", "))
        };
        let mut verified = r.verified;
        let mut line = format!(
            "{} {label}: {} in {}, harmonic part {}",
            if verified { "ok  " } else { "FAIL" },
            if r.verdict.nonzero { "nonzero" } else { "zero" },
            pr.degree(Degree::Bi(r.verdict.degree.0, r.verdict.degree.1)),
            pr.form(&r.verdict.harmonic)
        );
        if let Some(c) = &r.scalar {
            line.push_str(&format!(", {c} times the listed form"));
        }
        if let Some((p, q)) = r.listed_bidegree_mismatch {
            line.push_str(&format!(
                " [table lists a ({p},{q}) form; compared with {}]",
                pr.form(&r.expected)
            ));
        }
        say!("{line}");
        if perturb > 0 {
            let hodge = hodge_of(model.clone())?;
            let [a, b, c] = r.case.triple.map(|e| massey::parse_form(hodge.model(), e));
            let (a, b, c) = (
                a.map_err(Error::from)?,
                b.map_err(Error::from)?,
                c.map_err(Error::from)?,
            );
            match massey::perturbation_check(&hodge, [&a, &b, &c], &r.verdict, perturb, || random_scalar(&mut rng)) {
                Ok(()) => {}
                Err(e @ MasseyError::Hodge(HodgeError::Invariant(_))) => {
                    say!("     {e}");
                    verified = false;
                }
                Err(e) => return Err(Error::from(e).into()),
            }
        }
        *cases.entry(case).or_insert(true) &= verified;
    }
    let good = cases.values().filter(|v| **v).count();
    say!("{good}/{} cases verified ({total_runs} runs)", cases.len());
    Ok(())
}

fn run_ce(u: u32, v: u32, all_checks: bool, notation: Notation) -> Result<()> {
    let model = catalog::load(&format!("ce:u={u},v={v}"), &BTreeMap::new()).map_err(Error::from)?;
    let hodge = hodge_of(model.model().map_err(HodgeError::from).map_err(Error::from)?)?;
    let table = hodge.table().map_err(Error::from)?;
    print_diamonds(
        &table,
        &[Theory::Dolbeault, Theory::BottChern, Theory::Aeppli, Theory::DeRham],
    );
    say!("");
    print_formality(&hodge, &Notion::ALL, notation, all_checks)?;
    if all_checks {
        say!("");
        say!("∂∂̄-lemma rows (BC = dbar on (p,0), BC = del on (0,p), A = dbar on (p,n), A = del on (n,p)):");
        for row in formality::ddbar_p0_report(&hodge).map_err(Error::from)? {
            let flags = [row.bc_dbar, row.bc_del, row.aeppli_dbar, row.aeppli_del].map(yes_no);
            say!("  p = {}: {}", row.p, flags.join(" "));
        }
        say!("");
        print_obstructions(&DimTable::from(&table))?;
    }
    Ok(())
}

fn print_obstructions(table: &DimTable) -> Result<()> {
    let r = analyze(table).map_err(Error::from)?;
    for (target, verdict) in &r.verdicts {
        let v = match verdict {
            Verdict::Obstructed => "obstructed",
            Verdict::NotObstructedByTheseTests => "not obstructed by these tests",
        };
        say!("{target}: {v}");
    }
    for t in &r.fired {
        say!("  fails {t}");
    }
    for s in &r.skipped {
        say!("  skipped {s}");
    }
    say!(
        "{} tests held, {} failed, {} skipped",
        r.passed.len(),
        r.fired.len(),
        r.skipped.len()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let notation = if cli.ascii {
        Notation::Ascii
    } else {
        Notation::from_env()
    };
    ASCII.store(notation == Notation::Ascii, Ordering::Relaxed);
    match cli.command {
        Command::List => {
            for id in catalog::list() {
                say!("{id}");
            }
        }
        Command::Cohomology { model, theories, json } => {
            let theories = parse_theories(&theories)?;
            let hodge = hodge_of(load_model(&model)?)?;
            let table = hodge.table().map_err(Error::from)?;
            if json {
                say!("{}", serde_json::to_string_pretty(&table)?);
            } else {
                print_diamonds(&table, &theories);
            }
        }
        Command::Formality { model, notion } => {
            let notions = if notion == "all" {
                Notion::ALL.to_vec()
            } else {
                vec![notion.parse::<Notion>()?]
            };
            let hodge = hodge_of(load_model(&model)?)?;
            print_formality(&hodge, &notions, notation, true)?;
        }
        Command::Massey {
            model,
            a,
            b,
            c,
            perturb,
        } => {
            let hodge = hodge_of(load_model(&model)?)?;
            run_massey(&hodge, [&a, &b, &c], perturb, cli.seed, notation)?;
        }
        Command::VerifyAppendix { case, params, perturb } => {
            verify_appendix(case, &params, perturb, cli.seed, notation)?
        }
        Command::Ce { u, v, all_checks } => run_ce(u, v, all_checks, notation)?,
        Command::Obstruct { input, json } => {
            let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let table: DimTable =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display()))?;
            if json {
                let r = analyze(&table).map_err(Error::from)?;
                say!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                print_obstructions(&table)?;
            }
        }
        Command::Parse { file, validate } => {
            let source = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let spec = catalog::parse(&source).map_err(Error::from)?;
            if validate {
                let model = Model::new(spec.clone())
                    .map_err(HodgeError::from)
                    .map_err(Error::from)?;
                hodge_of(model)?;
                eprintln!("{}: valid", file.display());
            }
            say!("{}", catalog::print(&spec).trim_end_matches('\n'));
        }
    }
    Ok(())
}

fn is_internal(e: &anyhow::Error) -> bool {
    e.chain()
        .any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_internal))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", render(&format!("{e:#}")));
            ExitCode::from(if is_internal(&e) { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn internal_errors_are_told_apart() {
        let bug = anyhow::Error::from(Error::from(HodgeError::Invariant("x".into()))).context("while checking");
        assert!(is_internal(&bug));
        let nested = anyhow::Error::from(Error::from(MasseyError::Hodge(HodgeError::Invariant("x".into()))));
        assert!(is_internal(&nested));
        let user = anyhow::Error::from(Error::from(MasseyError::NotHarmonic { which: "α" }));
        assert!(!is_internal(&user));
        assert!(!is_internal(&anyhow::anyhow!("plain")));
    }
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use smallcancel::{
    apply_sigma, check_inclusion, closure_enumerate, distinct_letter_count, greendlinger_certificate, is_epsilon_dense,
    make_relator, parse_word, prefix_patterns, reduce, unique_exponent_scan, verify_cprime, Perm, PrefixPattern,
    Rational, RelatorFamily, Sampler, Source, Status, Word,
};

mod input;

use input::{load_family_or_group, load_group, solver, FamilyArgs, ParamArgs, WordArgs};

const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "smallcancel", version, about = "Small cancellation relator families over free products of ℤ/3")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Print nothing on stdout; the exit code carries the result.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Worker threads.
    #[arg(long, env = "SMALLCANCEL_THREADS", global = true)]
    threads: Option<usize>,
    /// Seed for sampled inputs.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand base relators, from explicit prefixes or a family.
    GenRelators {
        /// Prefix such as `0,1,2`; repeatable.
        #[arg(long)]
        prefix: Vec<PrefixPattern>,
        /// Report lengths only.
        #[arg(long)]
        no_words: bool,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Size of the symmetrized closure, optionally listing every member.
    Symmetrize {
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Check the C'(λ) condition.
    VerifyCprime {
        #[arg(long)]
        lambda: Rational,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Free reduction, or Dehn reduction when a family is given.
    Reduce {
        #[command(flatten)]
        word: WordArgs,
        /// Print the status and every replacement step.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value = "1/6")]
        lambda: Rational,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Find a subword longer than (1 - 3λ) of a family member.
    Greendlinger {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value = "1/6")]
        lambda: Rational,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// ε-density of a word, or of sampled reduced words.
    Dense {
        #[arg(long)]
        epsilon: Rational,
        #[command(flatten)]
        word: WordArgs,
        /// Number of words to sample instead of reading one.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 32)]
        len: usize,
        #[arg(long, default_value_t = 8)]
        gens: u32,
    },
    /// Which generators occur with both exponents in every cyclic window.
    ScanUnique {
        #[arg(long, default_value = "7/10")]
        ratio: Rational,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Enumerate a permutation group.
    PermClosure {
        #[arg(long)]
        group: PathBuf,
        /// Override the group file's depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Also list the prefix patterns of this length.
        #[arg(long)]
        prefix_k: Option<usize>,
    },
    /// Build the truncated family of a group.
    Family {
        /// Write the manifest here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Whether every base relator of A is one of B. Each path is a group file or a manifest.
    FamilyDiff {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Apply x_i -> x_σ(i) to a word, or check that a family is σ-invariant.
    Act {
        #[arg(long)]
        sigma: Perm,
        #[arg(long, value_parser = parse_word)]
        word: Option<Word>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Consequences of the presentation checked by Dehn reduction.
    Probe {
        #[command(subcommand)]
        probe: Probe,
    },
}

#[derive(Subcommand, Debug)]
enum Probe {
    /// Order of each x_i, i ≤ max-gen.
    Order {
        #[arg(long, default_value_t = 10)]
        max_gen: u32,
        #[arg(long, default_value = "1/6")]
        lambda: Rational,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Whether z x_i z⁻¹ x_i² is trivial.
    Commute {
        #[arg(long, value_parser = parse_word)]
        z: Word,
        #[arg(long)]
        gen: u32,
        #[arg(long, default_value = "1/6")]
        lambda: Rational,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// u x_i u⁻¹ x_j² is nontrivial for all i ≠ j and short u.
    Conjugacy {
        #[arg(long, default_value_t = 5)]
        max_gen: u32,
        #[arg(long, default_value_t = 2)]
        max_conjugator: usize,
        #[arg(long, default_value = "1/6")]
        lambda: Rational,
        #[command(flatten)]
        family: FamilyArgs,
    },
}

struct Report {
    pass: bool,
    json: Value,
    text: String,
}

impl Report {
    fn new(pass: bool, json: impl Serialize, text: String) -> Result<Report> {
        Ok(Report { pass, json: serde_json::to_value(json)?, text })
    }
}

fn relator_label(family: &RelatorFamily, i: usize) -> String {
    match &family.base()[i].source {
        Source::Generated { prefix, .. } => prefix.to_string(),
        Source::Supplied => format!("custom#{i}"),
    }
}

fn gen_relators(prefixes: &[PrefixPattern], no_words: bool, family: &FamilyArgs) -> Result<Report> {
    let rows: Vec<(String, usize, Word)> = if prefixes.is_empty() {
        let f = family.load()?;
        (0..f.base().len()).map(|i| (relator_label(&f, i), f.base()[i].k(), f.base()[i].word.clone())).collect()
    } else {
        prefixes
            .iter()
            .map(|p| Ok((p.to_string(), p.k(), make_relator(p.values(), family.params.nrep)?)))
            .collect::<Result<_>>()?
    };
    let mut text = String::new();
    let mut json = Vec::new();
    for (label, k, word) in &rows {
        if no_words {
            writeln!(text, "{label} k={k} len={}", word.len())?;
            json.push(json!({ "prefix": label, "k": k, "length": word.len() }));
        } else {
            writeln!(text, "{label} k={k} | {word}")?;
            json.push(json!({ "prefix": label, "k": k, "length": word.len(), "word": word }));
        }
    }
    Report::new(true, json, text)
}

fn symmetrize(list: bool, family: &FamilyArgs) -> Result<Report> {
    let f = family.load()?;
    let mut json = json!({
        "base_relators": f.base().len(),
        "members": f.symmetrized_len(),
        "min_length": f.min_length(),
        "max_length": f.max_length(),
    });
    let mut text = format!("base relators: {}\nmembers: {}\n", f.base().len(), f.symmetrized_len());
    if list {
        let words = f.symmetrized_words();
        for w in &words {
            writeln!(text, "{w}")?;
        }
        json["list"] = serde_json::to_value(&words)?;
    }
    Ok(Report { pass: true, json, text })
}

fn verify(lambda: Rational, family: &FamilyArgs) -> Result<Report> {
    let f = family.load()?;
    let c = verify_cprime(&f, lambda)?;
    let mut text = format!(
        "C'({}) {}\nmax piece ratio: {} (piece length {})\nmin relator length: {}\nmembers: {} from {} base relators\n",
        c.lambda,
        if c.pass { "PASS" } else { "FAIL" },
        c.max_piece_ratio,
        c.max_piece_length,
        c.min_length,
        c.members,
        c.base_relators
    );
    if !c.length_condition {
        writeln!(text, "length condition fails: some relator has length ≤ 1/λ")?;
    }
    for w in &c.witnesses {
        let show = |l: Option<smallcancel::MemberLabel>| l.map_or_else(|| "?".to_string(), |l| l.to_string());
        writeln!(text, "witness: host {} other {} piece {}", show(w.host_label), show(w.other_label), w.piece.len())?;
    }
    Report::new(c.pass, &c, text)
}

fn reduce_cmd(word: &WordArgs, trace: bool, lambda: Rational, family: &FamilyArgs) -> Result<Report> {
    let w = word.load()?;
    if !family.given() {
        let r = reduce(&w);
        return Report::new(true, json!({ "input_len": w.len(), "final_word": r }), format!("{r}\n"));
    }
    let f = family.load()?;
    let s = match solver(&f, lambda)? {
        Ok(s) => s,
        Err(e) => return Report::new(false, json!({ "error": e }), format!("{e}\n")),
    };
    let v = s.dehn_reduce(&w);
    let mut text = format!("{}\n", v.final_word);
    if trace {
        writeln!(text, "status: {}", v.status)?;
        for step in &v.trace {
            writeln!(text, "{step}")?;
        }
    }
    Report::new(v.status != Status::NontrivialTruncationLimited, &v, text)
}

fn greendlinger(word: &WordArgs, lambda: Rational, family: &FamilyArgs) -> Result<Report> {
    let w = word.load()?;
    let f = family.load()?;
    let bound = lambda.greendlinger_bound();
    let m = greendlinger_certificate(&w, &f, bound)?;
    let text = match &m {
        Some(m) => format!(
            "subword at {} of length {} inside member {} ({} > {})\n",
            m.start, m.len, m.member, m.ratio, bound
        ),
        None => format!("no subword longer than {bound} of a member\n"),
    };
    Report::new(m.is_some(), json!({ "bound": bound, "match": m }), text)
}

fn dense(epsilon: Rational, word: &WordArgs, sample: Option<usize>, len: usize, gens: u32, seed: u64) -> Result<Report> {
    if let Some(n) = sample {
        if gens == 0 {
            bail!("--gens must be positive");
        }
        let mut sampler = Sampler::new(seed);
        let mut dense = 0;
        for _ in 0..n {
            dense += is_epsilon_dense(&sampler.reduced_word(len, gens), epsilon)? as usize;
        }
        let text = format!("{dense} of {n} sampled words are {epsilon}-dense\n");
        return Report::new(true, json!({ "epsilon": epsilon, "sampled": n, "len": len, "gens": gens, "dense": dense }), text);
    }
    let w = word.load()?;
    let d = is_epsilon_dense(&w, epsilon)?;
    let distinct = distinct_letter_count(&w);
    let text = format!("{distinct} distinct of {} letters: {}\n", w.len(), if d { "dense" } else { "not dense" });
    Report::new(d, json!({ "epsilon": epsilon, "len": w.len(), "distinct": distinct, "dense": d }), text)
}

fn scan_unique(ratio: Rational, family: &FamilyArgs) -> Result<Report> {
    let f = family.load()?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut pass = true;
    for (i, b) in f.base().iter().enumerate() {
        let r = unique_exponent_scan(&b.word, ratio)?;
        pass &= r.pass;
        let label = relator_label(&f, i);
        writeln!(
            text,
            "{label}: {} windows of length {}, expected x{}, {} failing: {}",
            r.word_length,
            r.window_length,
            r.expected,
            r.failing_windows,
            if r.pass { "PASS" } else { "FAIL" }
        )?;
        let first_failure = r.windows.iter().find(|w| w.both_exponents != [r.expected]);
        rows.push(json!({
            "relator": label,
            "word_length": r.word_length,
            "window_length": r.window_length,
            "expected": r.expected,
            "scope": r.scope,
            "failing_windows": r.failing_windows,
            "first_failure": first_failure,
            "pass": r.pass,
        }));
    }
    Report::new(pass, json!({ "ratio": ratio, "pass": pass, "relators": rows }), text)
}

fn perm_closure(group: &Path, depth: Option<usize>, prefix_k: Option<usize>) -> Result<Report> {
    let mut spec = load_group(group)?;
    if let Some(d) = depth {
        spec.closure_depth = d;
    }
    let c = closure_enumerate(&spec);
    let mut text = format!("{} elements, {}\n", c.elements.len(), if c.complete { "complete" } else { "incomplete" });
    for e in &c.elements {
        writeln!(text, "{e}")?;
    }
    let mut json = serde_json::to_value(&c)?;
    if let Some(k) = prefix_k {
        let pats = prefix_patterns(&c.elements, k)?;
        for p in &pats {
            writeln!(text, "prefix {p}")?;
        }
        json["prefixes"] = serde_json::to_value(&pats)?;
    }
    Ok(Report { pass: true, json, text })
}

fn family_cmd(output: Option<&PathBuf>, family: &FamilyArgs) -> Result<Report> {
    let f = family.load()?;
    let manifest = f.to_manifest();
    let summary = json!({
        "fingerprint": f.fingerprint(),
        "params": f.params(),
        "provenance": f.provenance(),
        "excluded_min_length": f.excluded_min_length(),
        "base_relators": f.base().len(),
        "members": f.symmetrized_len(),
        "min_length": f.min_length(),
        "max_length": f.max_length(),
        "relators": (0..f.base().len()).map(|i| json!({
            "prefix": relator_label(&f, i),
            "k": f.base()[i].k(),
            "length": f.base()[i].word.len(),
        })).collect::<Vec<_>>(),
    });
    let text = match output {
        Some(path) => {
            std::fs::write(path, &manifest).with_context(|| format!("writing {}", path.display()))?;
            format!("{} base relators, fingerprint {}, written to {}\n", f.base().len(), f.fingerprint(), path.display())
        }
        None => manifest,
    };
    Ok(Report { pass: true, json: summary, text })
}

fn family_diff(a: &Path, b: &Path, params: &ParamArgs) -> Result<Report> {
    let fa = load_family_or_group(a, params)?;
    let fb = load_family_or_group(b, params)?;
    let r = check_inclusion(&fa, &fb)?;
    let mut text = format!("subset={}\n", r.subset);
    for m in &r.missing {
        writeln!(text, "missing {m}")?;
    }
    Report::new(r.subset, &r, text)
}

fn act(sigma: &Perm, word: Option<&Word>, family: &FamilyArgs) -> Result<Report> {
    if let Some(w) = word {
        let out = apply_sigma(sigma, w);
        return Report::new(true, json!({ "sigma": sigma, "word": out }), format!("{out}\n"));
    }
    let f = family.load()?;
    let invariant = f.is_invariant_under(sigma);
    Report::new(invariant, json!({ "sigma": sigma, "invariant": invariant }), format!("invariant={invariant}\n"))
}

fn probe(p: &Probe) -> Result<Report> {
    let (lambda, family) = match p {
        Probe::Order { lambda, family, .. } | Probe::Commute { lambda, family, .. } | Probe::Conjugacy { lambda, family, .. } => {
            (*lambda, family)
        }
    };
    let f = family.load()?;
    let s = match solver(&f, lambda)? {
        Ok(s) => s,
        Err(e) => return Report::new(false, json!({ "error": e }), format!("{e}\n")),
    };
    match p {
        Probe::Order { max_gen, .. } => {
            let orders: Vec<u32> = (0..=*max_gen).map(|i| s.order_probe(i)).collect();
            let pass = orders.iter().all(|&o| o == 3);
            let mut text = String::new();
            for (i, o) in orders.iter().enumerate() {
                writeln!(text, "x{i}: order {o}")?;
            }
            Report::new(pass, json!({ "orders": orders, "pass": pass }), text)
        }
        Probe::Commute { z, gen, .. } => match s.commutes_probe(z, *gen) {
            Ok(c) => Report::new(true, json!({ "commutes": c }), format!("commutes={c}\n")),
            Err(e) => Report::new(false, json!({ "error": e.to_string() }), format!("{e}\n")),
        },
        Probe::Conjugacy { max_gen, max_conjugator, .. } => {
            let r = s.conjugacy_probe(*max_gen, *max_conjugator);
            let mut text = format!(
                "{} words checked over {} conjugators: {}\n",
                r.checked,
                r.conjugators,
                if r.pass { "PASS" } else { "FAIL" }
            );
            for fl in &r.failures {
                writeln!(text, "i={} j={} u={} status={}", fl.i, fl.j, fl.conjugator, fl.status)?;
            }
            Report::new(r.pass, &r, text)
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::GenRelators { prefix, no_words, family } => gen_relators(prefix, *no_words, family),
        Command::Symmetrize { list, family } => symmetrize(*list, family),
        Command::VerifyCprime { lambda, family } => verify(*lambda, family),
        Command::Reduce { word, trace, lambda, family } => reduce_cmd(word, *trace, *lambda, family),
        Command::Greendlinger { word, lambda, family } => greendlinger(word, *lambda, family),
        Command::Dense { epsilon, word, sample, len, gens } => dense(*epsilon, word, *sample, *len, *gens, cli.seed),
        Command::ScanUnique { ratio, family } => scan_unique(*ratio, family),
        Command::PermClosure { group, depth, prefix_k } => perm_closure(group, *depth, *prefix_k),
        Command::Family { output, family } => family_cmd(output.as_ref(), family),
        Command::FamilyDiff { a, b, params } => family_diff(a, b, params),
        Command::Act { sigma, word, family } => act(sigma, word.as_ref(), family),
        Command::Probe { probe: p } => probe(p),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(report) => {
            if !cli.quiet {
                match cli.format {
                    Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable")),
                    Format::Text => print!("{}", report.text),
                }
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

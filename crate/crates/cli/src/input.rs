//! Loading words, groups and families from the command line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Args;
use smallcancel::{
    materialize_family, parse_word, verify_cprime, ConstructionParams, DehnSolver, GroupSpec, Rational, RelatorFamily,
    Word,
};

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Largest k in the truncation.
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    #[arg(long, default_value_t = 2)]
    pub kmin: usize,
    /// Repetition count n of each relator.
    #[arg(long, default_value_t = ConstructionParams::DEFAULT_N_REP)]
    pub nrep: usize,
}

impl ParamArgs {
    pub fn params(&self) -> ConstructionParams {
        ConstructionParams { n_rep: self.nrep, k_min: self.kmin, k_max: self.kmax, ..ConstructionParams::standard(self.kmax) }
    }
}

/// Where a relator family comes from. Without any of `--family`,
/// `--relator` or `--group` the trivial group is used.
#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Family manifest, as written by `family --output`.
    #[arg(long, conflicts_with_all = ["group", "relator"])]
    pub family: Option<std::path::PathBuf>,
    /// Group file: one generator per line in cycle notation, optional `depth=<n>`.
    #[arg(long, conflicts_with = "relator")]
    pub group: Option<std::path::PathBuf>,
    /// Custom base relator; repeatable.
    #[arg(long, value_parser = parse_word)]
    pub relator: Vec<Word>,
    #[command(flatten)]
    pub params: ParamArgs,
}

impl FamilyArgs {
    pub fn given(&self) -> bool {
        self.family.is_some() || self.group.is_some() || !self.relator.is_empty()
    }

    pub fn load(&self) -> Result<RelatorFamily> {
        if let Some(path) = &self.family {
            return RelatorFamily::from_manifest(&read(path)?).with_context(|| format!("parsing {}", path.display()));
        }
        if !self.relator.is_empty() {
            return Ok(RelatorFamily::from_words(self.relator.clone())?);
        }
        let spec = match &self.group {
            Some(path) => load_group(path)?,
            None => GroupSpec::trivial(),
        };
        Ok(materialize_family(&spec, self.params.params())?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct WordArgs {
    #[arg(long, value_parser = parse_word, conflicts_with = "word_file")]
    pub word: Option<Word>,
    /// File holding the word; `-` reads stdin.
    #[arg(long)]
    pub word_file: Option<std::path::PathBuf>,
}

impl WordArgs {
    pub fn load(&self) -> Result<Word> {
        if let Some(w) = &self.word {
            return Ok(w.clone());
        }
        let Some(path) = &self.word_file else { bail!("one of --word or --word-file is required") };
        let text = if path.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin()).context("reading stdin")?
        } else {
            read(path)?
        };
        Ok(parse_word(&text)?)
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_group(path: &Path) -> Result<GroupSpec> {
    GroupSpec::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A manifest if any line carries a `|`, otherwise a group file.
pub fn load_family_or_group(path: &Path, params: &ParamArgs) -> Result<RelatorFamily> {
    let text = read(path)?;
    if text.lines().any(|l| l.contains('|')) {
        Ok(RelatorFamily::from_manifest(&text).with_context(|| format!("parsing {}", path.display()))?)
    } else {
        let spec = GroupSpec::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(materialize_family(&spec, params.params())?)
    }
}

/// Certifies the family at `lambda` and wraps it in a solver. `None` when
/// the certificate fails.
pub fn solver<'a>(family: &'a RelatorFamily, lambda: Rational) -> Result<std::result::Result<DehnSolver<'a>, String>> {
    if lambda > Rational::new(1, 6) {
        bail!("Dehn reduction needs λ ≤ 1/6, got {lambda}");
    }
    let cert = verify_cprime(family, lambda)?;
    log::info!("certificate at λ = {}: pass={} max piece ratio {}", lambda, cert.pass, cert.max_piece_ratio);
    Ok(DehnSolver::new(family, &cert).map_err(|e| e.to_string()))
}

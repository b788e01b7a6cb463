//! The `toresolve` command line: read cones from a JSON file, run one core
//! computation per cone, write a JSON report (and optionally an SVG).
//!
//! Exit status 2 means the input or the arguments could not be parsed,
//! 1 a domain error from the core library or an output write failure.

pub mod input;
pub mod json;
pub mod report;
pub mod svg;

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use toresolve_core::resolve3d::completions;
use toresolve_core::{
    cf_expansion, classify, hilbert_basis, minimal_resolution, resolve_with, toric_relations, CFExpansion, Cone,
};

use crate::input::{ConeInput, InputDoc};
use crate::report::{Classification, CompletionOut, Expansion, FanOut, HilbertReport, PieceOut, Resolution2d, Resolution3d, StepOut};
use crate::svg::Panel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Singularity classification of every cone.
    Classify,
    /// Hilbert bases of each cone and its dual.
    Hilbert,
    /// Minimal resolutions of rank-2 cones.
    Resolve2d,
    /// Crepant resolutions of rank-3 cones with their traces.
    Resolve3d,
    /// SVG of the resolved height-one polygons of rank-3 cones.
    Render,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionChoice {
    Index(usize),
    All,
}

impl FromStr for CompletionChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(CompletionChoice::All);
        }
        s.parse().map(CompletionChoice::Index).map_err(|_| format!("expected a completion index or `all`, found `{s}`"))
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "toresolve", version, about = "Classify and resolve toric singularities with exact arithmetic")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Input JSON: {"lattice_rank": r, "cones": [{"generators": [[...], ...]}, ...]}.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// JSON report, or the SVG itself for `render`.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Also draw the resolved polygons (`resolve3d` only).
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Completion used for the final fan; `all` also lists every completion.
    #[arg(long, value_name = "INDEX|all")]
    pub completion: Option<CompletionChoice>,
    /// Emit binomial relations up to this total degree (`hilbert` only).
    #[arg(long, value_name = "N")]
    pub degree_bound: Option<u32>,
    /// Pixels per lattice step in SVG output.
    #[arg(long, value_name = "PX", default_value_t = 40)]
    pub scale: u32,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Failure {
    Parse(String),
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Domain(m) => m,
        }
    }
}

fn check_flags(cli: &Cli) -> Result<(), Failure> {
    let bad = |flag: &str, cmds: &str| Err(Failure::Parse(format!("{flag} applies to {cmds} only")));
    if cli.svg.is_some() && cli.command != Command::Resolve3d {
        return bad("--svg", "resolve3d");
    }
    if cli.completion.is_some() && !matches!(cli.command, Command::Resolve3d | Command::Render) {
        return bad("--completion", "resolve3d and render");
    }
    if cli.completion == Some(CompletionChoice::All) && cli.command == Command::Render {
        return bad("--completion all", "resolve3d");
    }
    if cli.degree_bound.is_some() && cli.command != Command::Hilbert {
        return bad("--degree-bound", "hilbert");
    }
    if cli.scale == 0 {
        return Err(Failure::Parse("--scale must be positive".into()));
    }
    Ok(())
}

fn domain(i: usize, c: &ConeInput) -> impl Fn(toresolve_core::Error) -> Failure + '_ {
    move |e| Failure::Domain(format!("cone #{i} {}: {e}", c.describe()))
}

fn cones(doc: &InputDoc) -> Result<Vec<Cone>, Failure> {
    doc.cones.iter().enumerate().map(|(i, c)| c.to_cone().map_err(domain(i, c))).collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("reports serialize");
    s.push('\n');
    s
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn run_classify(doc: &InputDoc) -> Result<String, Failure> {
    let mut out = Vec::new();
    for (i, (c, given)) in cones(doc)?.iter().zip(&doc.cones).enumerate() {
        let r = classify(c).map_err(domain(i, given))?;
        out.push(Classification::new(c.rays(), c.dim(), &r));
    }
    Ok(to_json(&out))
}

fn run_hilbert(doc: &InputDoc, degree_bound: Option<u32>) -> Result<String, Failure> {
    let mut out = Vec::new();
    for (i, (c, given)) in cones(doc)?.iter().zip(&doc.cones).enumerate() {
        let err = domain(i, given);
        let basis = hilbert_basis(c).map_err(&err)?;
        let dual = if c.is_full_dimensional() {
            Some(hilbert_basis(&c.dual().to_cone().map_err(&err)?).map_err(&err)?)
        } else {
            None
        };
        let relations = match degree_bound {
            Some(d) => Some(toric_relations(c, d).map_err(&err)?.1),
            None => None,
        };
        out.push(HilbertReport::new(c.rays(), &basis, dual.as_ref(), relations.as_deref()));
    }
    Ok(to_json(&out))
}

fn run_resolve2d(doc: &InputDoc) -> Result<String, Failure> {
    let mut out = Vec::new();
    for (i, (c, given)) in cones(doc)?.iter().zip(&doc.cones).enumerate() {
        let err = domain(i, given);
        let r = minimal_resolution(c).map_err(&err)?;
        let expansion = if r.exceptional.is_empty() {
            None
        } else {
            let terms: Vec<BigInt> = r.exceptional.iter().map(|e| -e.self_intersection.clone()).collect();
            let value = CFExpansion { p: BigInt::from(0), q: BigInt::from(0), terms }.value();
            let cf = cf_expansion(value.numer(), value.denom()).map_err(&err)?;
            Some(Expansion { p: (&cf.p).into(), q: (&cf.q).into(), terms: cf.terms.iter().map(Into::into).collect() })
        };
        out.push(Resolution2d::new(c.rays(), &r, expansion));
    }
    Ok(to_json(&out))
}

/// The JSON report and the SVG panels of every piece.
fn run_resolve3d(doc: &InputDoc, choice: CompletionChoice) -> Result<(String, Vec<Panel>), Failure> {
    let index = match choice {
        CompletionChoice::Index(i) => i,
        CompletionChoice::All => 0,
    };
    let mut out = Vec::new();
    let mut panels = Vec::new();
    for (i, (c, given)) in cones(doc)?.iter().zip(&doc.cones).enumerate() {
        let err = domain(i, given);
        let r = resolve_with(c, index).map_err(&err)?;
        let listed = match choice {
            CompletionChoice::Index(_) => None,
            CompletionChoice::All => {
                let mut all = Vec::new();
                for (k, piece) in r.pieces.iter().enumerate() {
                    for (j, comp) in completions(&piece.cdv_complex).map_err(&err)?.iter().enumerate() {
                        all.push(CompletionOut::new(k, j, piece, comp).map_err(&err)?);
                    }
                }
                Some(all)
            }
        };
        for (k, piece) in r.pieces.iter().enumerate() {
            let title = format!("cone #{i} piece {k}: {}", piece.polygon);
            panels.push(Panel::from_piece(title, k, piece, &r.trace).map_err(&err)?);
        }
        out.push(Resolution3d {
            rays: json::vectors(c.rays()),
            canonical: FanOut::new(&r.canonical),
            pieces: r.pieces.iter().map(PieceOut::from).collect(),
            fan: FanOut::new(&r.fan),
            trace: r.trace.steps.iter().map(StepOut::from).collect(),
            completions: listed,
        });
    }
    Ok((to_json(&out), panels))
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    check_flags(cli)?;
    let text = fs::read_to_string(&cli.input).map_err(|e| Failure::Parse(format!("cannot read {}: {e}", cli.input.display())))?;
    let doc = input::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", cli.input.display())))?;
    let choice = cli.completion.unwrap_or(CompletionChoice::Index(0));
    match cli.command {
        Command::Classify => write(&cli.out, &run_classify(&doc)?),
        Command::Hilbert => write(&cli.out, &run_hilbert(&doc, cli.degree_bound)?),
        Command::Resolve2d => write(&cli.out, &run_resolve2d(&doc)?),
        Command::Resolve3d => {
            let (report, panels) = run_resolve3d(&doc, choice)?;
            write(&cli.out, &report)?;
            match &cli.svg {
                Some(path) => write(path, &svg::render(&panels, cli.scale.into())),
                None => Ok(()),
            }
        }
        Command::Render => {
            let (_, panels) = run_resolve3d(&doc, choice)?;
            write(&cli.out, &svg::render(&panels, cli.scale.into()))
        }
    }
}

//! Command-line surface. Exit codes: 0 success, 1 invalid input data or a
//! negative answer, 2 usage or parse error, 3 internal theorem violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::dissection::dissect;
use crate::error::Error;
use crate::generators::{gen_lattice_limited, gen_mcs_limited, GenKind, GenSpec, DEFAULT_MAX_SIZE};
use crate::gluing::glue;
use crate::io::{
    detect_kind, export_dot, parse_lattice, parse_mcs, serialize_lattice, serialize_mcs, FileKind,
};
use crate::iso::lattice_isomorphism;
use crate::mcs::mcs_isomorphic;
use crate::roundtrip::{dissection_of_glue, glue_of_dissection};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "modlat",
    version,
    about = "Finite modular lattices, their dissections and glued sums"
)]
pub struct Cli {
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest lattice a generator may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SIZE)]
    pub max_size: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a lattice (or, with --mcs, its dissection system).
    Gen {
        kind: String,
        params: Vec<usize>,
        #[arg(long)]
        mcs: bool,
    },
    /// Report lattice predicates or system axioms.
    Check { file: PathBuf },
    /// Dissect a lattice file into a system file.
    Dissect { file: PathBuf },
    /// Glue a system file into its sum lattice.
    Glue { file: PathBuf },
    /// Run and verify the round trip starting from either kind of file.
    Roundtrip { file: PathBuf },
    /// Decide isomorphism of two lattice files or two system files.
    Iso { first: PathBuf, second: PathBuf },
    /// Emit the Hasse diagram in DOT.
    Dot {
        file: PathBuf,
        #[arg(long)]
        blocks: bool,
    },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UnknownKind(_) => EXIT_USAGE,
            Error::InternalTheoremViolation(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs one command, writing results to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut text = String::new();
    let code = execute(&cli, &mut text)?;
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    })?;
    Ok(code)
}

fn execute(cli: &Cli, out: &mut String) -> Result<i32, Failure> {
    use std::fmt::Write as _;
    match &cli.command {
        Command::Gen { kind, params, mcs } => {
            let kind: GenKind = kind.parse()?;
            let spec = GenSpec {
                kind,
                params: params.clone(),
                seed: Some(cli.seed),
            };
            if *mcs || kind == GenKind::NonmonotoneExample {
                out.push_str(&serialize_mcs(&gen_mcs_limited(&spec, cli.max_size)?));
            } else {
                out.push_str(&serialize_lattice(&gen_lattice_limited(
                    &spec,
                    cli.max_size,
                )?));
            }
            Ok(EXIT_OK)
        }
        Command::Check { file } => {
            let text = read(file)?;
            match detect_kind(&text)? {
                FileKind::Lattice => {
                    let l = parse_lattice(&text)?;
                    let p = l.complemented_profile();
                    writeln!(
                        out,
                        "lattice: {} elements, {} covers",
                        l.size(),
                        l.covers().len()
                    )
                    .unwrap();
                    writeln!(out, "modular: {}", yes(l.is_modular())).unwrap();
                    writeln!(out, "distributive: {}", yes(l.is_distributive())).unwrap();
                    writeln!(out, "complemented: {}", yes(p.complemented)).unwrap();
                    writeln!(
                        out,
                        "relatively complemented: {}",
                        yes(p.relatively_complemented)
                    )
                    .unwrap();
                    writeln!(out, "atomistic: {}", yes(p.atomistic)).unwrap();
                    writeln!(out, "coatomistic: {}", yes(p.coatomistic)).unwrap();
                    Ok(EXIT_OK)
                }
                FileKind::System => {
                    let (c, report) = parse_mcs(&text)?;
                    writeln!(out, "system: {} blocks", c.skeleton().size()).unwrap();
                    write!(out, "{report}").unwrap();
                    writeln!(
                        out,
                        "axioms: {}",
                        if report.is_valid() { "pass" } else { "fail" }
                    )
                    .unwrap();
                    writeln!(out, "monotone: {}", yes(report.is_monotone())).unwrap();
                    Ok(if report.is_valid() {
                        EXIT_OK
                    } else {
                        EXIT_INVALID
                    })
                }
            }
        }
        Command::Dissect { file } => {
            let l = parse_lattice(&read(file)?)?;
            out.push_str(&serialize_mcs(dissect(&l)?.mcs()));
            Ok(EXIT_OK)
        }
        Command::Glue { file } => {
            let (c, _) = parse_mcs(&read(file)?)?;
            out.push_str(&serialize_lattice(glue(&c)?.lattice()));
            Ok(EXIT_OK)
        }
        Command::Roundtrip { file } => {
            let text = read(file)?;
            match detect_kind(&text)? {
                FileKind::Lattice => {
                    let l = parse_lattice(&text)?;
                    let iso = glue_of_dissection(&l)?;
                    writeln!(
                        out,
                        "lattice -> system -> lattice: isomorphism verified on {} elements",
                        l.size()
                    )
                    .unwrap();
                    writeln!(out, "map {}", join_ids(&iso.map)).unwrap();
                }
                FileKind::System => {
                    let (c, _) = parse_mcs(&text)?;
                    let iso = dissection_of_glue(&c)?;
                    writeln!(
                        out,
                        "system -> lattice -> system: isomorphism verified on {} blocks",
                        c.skeleton().size()
                    )
                    .unwrap();
                    writeln!(out, "skeleton {}", join_ids(&iso.skeleton_map)).unwrap();
                    for (x, m) in iso.block_maps.iter().enumerate() {
                        writeln!(out, "block {x} {}", join_ids(m)).unwrap();
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Iso { first, second } => {
            let (t1, t2) = (read(first)?, read(second)?);
            let found = match (detect_kind(&t1)?, detect_kind(&t2)?) {
                (FileKind::Lattice, FileKind::Lattice) => {
                    lattice_isomorphism(&parse_lattice(&t1)?, &parse_lattice(&t2)?)
                        .map(|i| format!("map {}\n", join_ids(&i.map)))
                }
                (FileKind::System, FileKind::System) => {
                    let (c1, _) = parse_mcs(&t1)?;
                    let (c2, _) = parse_mcs(&t2)?;
                    mcs_isomorphic(&c1, &c2).map(|i| {
                        let mut s = format!("skeleton {}\n", join_ids(&i.skeleton_map));
                        for (x, m) in i.block_maps.iter().enumerate() {
                            writeln!(s, "block {x} {}", join_ids(m)).unwrap();
                        }
                        s
                    })
                }
                _ => {
                    return Err(Failure {
                        code: EXIT_USAGE,
                        message: "cannot compare a lattice with a system".into(),
                    })
                }
            };
            match found {
                Some(w) => {
                    out.push_str("isomorphic\n");
                    out.push_str(&w);
                    Ok(EXIT_OK)
                }
                None => {
                    out.push_str("not isomorphic\n");
                    Ok(EXIT_INVALID)
                }
            }
        }
        Command::Dot { file, blocks } => {
            let l = parse_lattice(&read(file)?)?;
            if *blocks {
                let d = dissect(&l)?;
                out.push_str(&export_dot(&l, Some(&d)));
            } else {
                out.push_str(&export_dot(&l, None));
            }
            Ok(EXIT_OK)
        }
    }
}

fn join_ids(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

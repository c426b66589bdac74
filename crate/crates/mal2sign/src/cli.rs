use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use mal2sign_core::lexicon::serialize_lexicon;
use mal2sign_core::pipeline::parse_config;
use mal2sign_core::{
    fingerspell, load_lexicon, normalize_text, serialize_timeline, tokenize, translate,
    LexiconError, PipelineResources, ResourceError, ResourcePaths, Skeleton,
};

pub const EXIT_RESOURCE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "mal2sign", version, about = "Malayalam text to sign-language animation")]
pub struct Cli {
    /// Pipeline config (resource paths, timeline settings, drop policy).
    #[arg(long, global = true, env = "MAL2SIGN_CONFIG")]
    pub config: Option<PathBuf>,
    /// Rule table, overriding the config.
    #[arg(long, global = true)]
    pub rules: Option<PathBuf>,
    /// Lexicon, overriding the config.
    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Translate text and print the timeline, glosses or every stage.
    Translate {
        #[arg(long)]
        text: String,
        #[arg(long, value_enum, default_value_t = Format::Timeline)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory with the viewer bundle, served at `/`.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
    /// Lexicon maintenance.
    Lexicon {
        #[command(subcommand)]
        action: LexiconAction,
    },
    /// Print fingerspelling glosses for every word of the text.
    Fingerspell {
        #[arg(long)]
        text: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum LexiconAction {
    /// Exit 0 iff the lexicon file is valid; print each violation otherwise.
    Validate { path: PathBuf },
    /// Print the lexicon in canonical form.
    Dump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Gloss,
    Stages,
    Timeline,
}

impl Cli {
    fn paths(&self) -> ResourcePaths {
        ResourcePaths {
            config: self.config.clone(),
            rules: self.rules.clone(),
            lexicon: self.lexicon.clone(),
        }
    }
}

fn resource_failure(e: &ResourceError) -> ExitCode {
    for line in e.lines() {
        eprintln!("error: {line}");
    }
    ExitCode::from(EXIT_RESOURCE)
}

fn emit(text: &str, out: Option<&PathBuf>) -> ExitCode {
    let written = match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}

pub fn run(cli: Cli) -> ExitCode {
    if let Command::Lexicon {
        action: LexiconAction::Validate { path },
    } = &cli.command
    {
        return validate_lexicon(cli.config.as_ref(), path);
    }

    let resources = match PipelineResources::load(&cli.paths()) {
        Ok(r) => r,
        Err(e) => return resource_failure(&e),
    };

    match cli.command {
        Command::Translate { text, format, out } => {
            let result = translate(&text, &resources);
            let doc = match format {
                Format::Timeline => serialize_timeline(&result.timeline) + "\n",
                Format::Stages => result.to_document() + "\n",
                Format::Gloss => result.gloss_ids().iter().map(|g| format!("{g}\n")).collect(),
            };
            emit(&doc, out.as_ref())
        }
        Command::Fingerspell { text } => {
            let glosses: String = tokenize(&normalize_text(&text))
                .iter()
                .flat_map(|t| fingerspell(t, &resources.lexicon))
                .map(|g| format!("{g}\n"))
                .collect();
            emit(&glosses, None)
        }
        Command::Lexicon {
            action: LexiconAction::Dump,
        } => emit(
            &(serialize_lexicon(&resources.lexicon, &resources.skeleton) + "\n"),
            None,
        ),
        Command::Serve { port, static_dir } => {
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_RESOURCE);
                }
            };
            match runtime.block_on(crate::server::serve(Arc::new(resources), port, static_dir)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_RESOURCE)
                }
            }
        }
        Command::Lexicon {
            action: LexiconAction::Validate { .. },
        } => unreachable!("handled above"),
    }
}

fn validate_lexicon(config: Option<&PathBuf>, path: &PathBuf) -> ExitCode {
    let skeleton = match config {
        Some(p) => match std::fs::read_to_string(p)
            .map_err(|e| ResourceError::Io {
                path: p.clone(),
                source: e,
            })
            .and_then(|doc| parse_config(&doc))
        {
            Ok(cfg) => Skeleton::with_id(cfg.skeleton),
            Err(e) => return resource_failure(&e),
        },
        None => Skeleton::standard(),
    };
    let doc = match std::fs::read_to_string(path) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_RESOURCE);
        }
    };
    match load_lexicon(&doc, &skeleton) {
        Ok(lex) => {
            println!("ok: {} entries", lex.len());
            ExitCode::SUCCESS
        }
        Err(LexiconError::Invalid(violations)) => {
            for v in violations {
                println!("{v}");
            }
            ExitCode::from(EXIT_RESOURCE)
        }
        Err(e) => {
            println!("{e}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}

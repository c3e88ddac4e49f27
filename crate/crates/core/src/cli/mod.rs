//! Command-line surface. Exit codes: 0 success, 1 analysis or validation
//! failure, 2 usage or input error.

mod commands;
mod config;
mod inputs;

use clap::{Parser, Subcommand};

pub use config::{Measure, OutputFormat, RunConfig};
pub use inputs::TableRef;

use config::{AssortArgs, CommonArgs, CommunityArgs, IterArgs, Overrides, PagerankArgs, RankArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ionet", version, about = "Input-output network analysis")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check row and column balance of each table.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Per-node strengths, log-scale summaries and the edge list.
    Strengths {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Weighted directed assortativity profile.
    Assort {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        assort: AssortArgs,
    },
    /// Extended PageRank rank tables, one per gamma.
    Pagerank {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        pagerank: PagerankArgs,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        iter: IterArgs,
    },
    /// Weighted hub and authority rank tables.
    Hits {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        iter: IterArgs,
    },
    /// Greedy modularity communities.
    Communities {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        community: CommunityArgs,
    },
    /// Pairwise AMI matrix of partition files (`node,community`).
    Ami {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Community AMI between two year series in the triangle layout.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        community: CommunityArgs,
        #[arg(long)]
        series_a: Option<String>,
        #[arg(long)]
        series_b: Option<String>,
    },
    /// Run several measures over every table.
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
        /// Measures to run (default: all).
        #[arg(long = "measure", value_enum)]
        measures: Vec<Measure>,
        #[command(flatten)]
        assort: AssortArgs,
        #[command(flatten)]
        pagerank: PagerankArgs,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        iter: IterArgs,
        #[command(flatten)]
        community: CommunityArgs,
    },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (common, overrides, job) = split(cli.command);
    let cfg = match RunConfig::resolve(&common, overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    commands::execute(&cfg, job)
}

pub(crate) enum Job {
    Validate,
    Strengths,
    Assort,
    Pagerank,
    Hits,
    Communities,
    Ami,
    Compare {
        series_a: Option<String>,
        series_b: Option<String>,
    },
    Analyze,
}

fn split(command: Command) -> (CommonArgs, Overrides, Job) {
    let mut o = Overrides::default();
    let (common, job) = match command {
        Command::Validate { common } => (common, Job::Validate),
        Command::Strengths { common } => (common, Job::Strengths),
        Command::Assort { common, assort } => {
            o.assort = assort;
            (common, Job::Assort)
        }
        Command::Pagerank {
            common,
            pagerank,
            rank,
            iter,
        } => {
            o.pagerank = pagerank;
            o.rank = rank;
            o.iter = iter;
            (common, Job::Pagerank)
        }
        Command::Hits { common, rank, iter } => {
            o.rank = rank;
            o.iter = iter;
            (common, Job::Hits)
        }
        Command::Communities { common, community } => {
            o.community = community;
            (common, Job::Communities)
        }
        Command::Ami { common } => (common, Job::Ami),
        Command::Compare {
            common,
            community,
            series_a,
            series_b,
        } => {
            o.community = community;
            (common, Job::Compare { series_a, series_b })
        }
        Command::Analyze {
            common,
            measures,
            assort,
            pagerank,
            rank,
            iter,
            community,
        } => {
            o = Overrides {
                iter,
                rank,
                pagerank,
                assort,
                community,
                measures,
            };
            (common, Job::Analyze)
        }
    };
    (common, o, job)
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::settings::Settings;

#[derive(Parser, Debug)]
#[command(
    name = "racgdiv",
    version,
    about = "Divergence experiments in right-angled Coxeter groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, check or draw defining graphs
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Normal forms, geodesic tests and walls
    #[command(subcommand)]
    Word(WordCmd),
    /// Sphere sizes of a ball in the Cayley graph
    Ball(BallArgs),
    /// Divergence measurements
    #[command(subcommand)]
    Div(DivCmd),
    /// Fit growth exponents to a sample CSV
    Fit(FitArgs),
    /// Run a named experiment preset
    Experiment(ExperimentArgs),
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    /// Print a graph in the text format
    Gen(GraphArgs),
    /// Parse a graph file and summarise it
    Validate {
        /// Graph file
        path: PathBuf,
    },
    /// Print the defining graph as Graphviz DOT
    Dot(GraphArgs),
}

#[derive(Subcommand, Debug)]
pub enum WordCmd {
    /// Print the ShortLex normal form
    Reduce(WordArgs),
    /// Report whether the word is geodesic
    Geodesic(WordArgs),
    /// List the walls crossed by the word from the identity
    Walls(WordArgs),
}

#[derive(Subcommand, Debug)]
pub enum DivCmd {
    /// Divergence of two rays from a common point
    Pair(PairArgs),
    /// Divergence of a bi-infinite geodesic
    Geodesic(GeodesicArgs),
    /// Lower divergence of a bi-infinite geodesic over a window of centres
    Lower(LowerArgs),
    /// Gersten divergence of the whole group
    Gersten(GerstenArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// gamma:<m>, omega:<m> or file:<path>
    #[arg(long)]
    pub graph: Option<String>,
    /// Family parameter; selects gamma:<m> when --graph is absent
    #[arg(long)]
    pub m: Option<u32>,
    /// key = value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct WordArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Space-separated generator names
    #[arg(long)]
    pub word: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct GeodesicSel {
    /// periodic, gamma or support
    #[arg(long)]
    pub geodesic: Option<String>,
    /// Exponent parameter p/q of the gamma geodesic
    #[arg(long)]
    pub t: Option<String>,
    /// Period of a periodic geodesic
    #[arg(long)]
    pub word: Option<String>,
    /// Wall type of a support ray
    #[arg(long = "type")]
    pub ty: Option<String>,
    /// Link pair "u v" of a support ray
    #[arg(long)]
    pub pair: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct RadiusArgs {
    /// Single radius
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub r_min: Option<u32>,
    #[arg(long)]
    pub r_max: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct CapsArgs {
    /// Fixed cap radius (default: cap-factor times r)
    #[arg(long)]
    pub cap_radius: Option<u32>,
    /// Cap radius as a multiple of r
    #[arg(long)]
    pub cap_factor: Option<u32>,
    /// Node budget per search
    #[arg(long)]
    pub cap_nodes: Option<u64>,
    /// Extra cap radius for the stabilisation re-run
    #[arg(long)]
    pub stab_delta: Option<u32>,
    /// reduced or capped
    #[arg(long)]
    pub region: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Worker threads (0 = all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write DOT drawings
    #[arg(long)]
    pub emit_dot: bool,
}

#[derive(Args, Debug, Clone)]
pub struct FitOpts {
    /// lo:hi
    #[arg(long)]
    pub fit_range: Option<String>,
    /// Rational such as 5/2
    #[arg(long)]
    pub expected_exponent: Option<String>,
    /// Allowed distance between slope and expected exponent
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct BallArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub r: Option<u32>,
    /// Centre word (default: identity)
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long)]
    pub cap_nodes: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// periodic:<word> or support:<type>[:<u> <v>]
    #[arg(long)]
    pub ray1: Option<String>,
    #[arg(long)]
    pub ray2: Option<String>,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub caps: CapsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub fit: FitOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GeodesicArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub geodesic: GeodesicSel,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub caps: CapsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub fit: FitOpts,
}

#[derive(Args, Debug, Clone)]
pub struct LowerArgs {
    #[command(flatten)]
    pub inner: GeodesicArgs,
    /// Centres lo:hi
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct GerstenArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub caps: CapsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub fit: FitOpts,
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    /// Sample CSV
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub fit: FitOpts,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ExperimentArgs {
    /// paper-flat, paper-alpha, paper-gamma, paper-ldiv, paper-freeproduct or paper-gersten
    pub preset: String,
    #[command(flatten)]
    pub inner: GeodesicArgs,
    /// Centres lo:hi for lower divergence
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
}

impl GraphArgs {
    pub fn push(&self, s: &mut Settings) {
        s.set_opt("graph", &self.graph);
        s.set_opt("m", &self.m);
    }
}

impl GeodesicSel {
    pub fn push(&self, s: &mut Settings) {
        s.set_opt("geodesic", &self.geodesic);
        s.set_opt("t", &self.t);
        s.set_opt("word", &self.word);
        s.set_opt("type", &self.ty);
        s.set_opt("pair", &self.pair);
    }
}

impl RadiusArgs {
    pub fn push(&self, s: &mut Settings) {
        s.set_opt("r", &self.r);
        s.set_opt("r-min", &self.r_min);
        s.set_opt("r-max", &self.r_max);
    }
}

impl CapsArgs {
    pub fn push(&self, s: &mut Settings) {
        s.set_opt("cap-radius", &self.cap_radius);
        s.set_opt("cap-factor", &self.cap_factor);
        s.set_opt("cap-nodes", &self.cap_nodes);
        s.set_opt("stab-delta", &self.stab_delta);
        s.set_opt("region", &self.region);
    }
}

impl OutputArgs {
    pub fn push(&self, s: &mut Settings) {
        s.set_opt("workers", &self.workers);
        s.set_opt("out", &self.out.as_ref().map(|p| p.display().to_string()));
        if self.emit_dot {
            s.set("emit-dot", true);
        }
    }
}

impl FitOpts {
    pub fn push(&self, s: &mut Settings) {
        s.set_opt("fit-range", &self.fit_range);
        s.set_opt("expected-exponent", &self.expected_exponent);
        s.set_opt("tol", &self.tol);
    }
}

impl GeodesicArgs {
    pub fn push(&self, s: &mut Settings) {
        self.graph.push(s);
        self.geodesic.push(s);
        self.radius.push(s);
        self.caps.push(s);
        self.output.push(s);
        self.fit.push(s);
    }
}

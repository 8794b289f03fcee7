use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "frobstab", version, about = "Exact slope and instability invariants in characteristic p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    /// Evaluate bounds even when their hypotheses fail.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridName {
    Small,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank of the l-th truncated symmetric power, with the counting oracle.
    RankTl(RankTlArgs),
    /// Slope decomposition of T^l of a profile.
    DecompTl(TlArgs),
    /// Exact instability of T^l and its bounds.
    InstabTl(InstabTlArgs),
    /// Instability bounds for the Frobenius pushforward of E.
    Bounds(PushArgs),
    /// Slope, degree and filtration ledger of F_*E.
    Pushforward(PushforwardArgs),
    /// Rank/degree table of locally exact and closed forms.
    Forms(FormsArgs),
    /// Slope comparison B^i vs Ω^i inside Z^i.
    CheckZi(CheckZiArgs),
    /// Normalized profile, stats and HN polygon.
    Hnp(HnpArgs),
    /// Stability conclusions available for a variety.
    Advisor(AdvisorArgs),
    /// Run every oracle-equivalence suite on a parameter grid.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Args)]
pub struct RankTlArgs {
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub l: u64,
}

#[derive(Debug, Args)]
pub struct TlArgs {
    /// Profile JSON: a file path or an inline object.
    #[arg(long)]
    pub profile: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub l: u64,
}

#[derive(Debug, Args)]
pub struct InstabTlArgs {
    #[command(flatten)]
    pub tl: TlArgs,
    /// Variety context; enables the bound through L_max(Ω¹).
    #[arg(long)]
    pub ctx: Option<String>,
}

#[derive(Debug, Args)]
pub struct PushArgs {
    #[arg(long)]
    pub ctx: String,
    #[arg(long)]
    pub profile: String,
}

#[derive(Debug, Args)]
pub struct PushforwardArgs {
    #[command(flatten)]
    pub push: PushArgs,
    /// Frobenius iterate for the slope formula.
    #[arg(long, default_value_t = 1)]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct FormsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: u64,
    /// Rank of a subsheaf of B^n; adds the slope gap bound.
    #[arg(long)]
    pub r: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CheckZiArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: u64,
    /// Single form degree; all of 1..n-1 when omitted.
    #[arg(long)]
    pub i: Option<u64>,
}

#[derive(Debug, Args)]
pub struct HnpArgs {
    #[arg(long)]
    pub profile: String,
    /// Second profile to compare against.
    #[arg(long)]
    pub against: Option<String>,
}

#[derive(Debug, Args)]
pub struct AdvisorArgs {
    #[arg(long)]
    pub ctx: String,
    #[arg(long)]
    pub e_semistable: bool,
    #[arg(long)]
    pub e_strongly_semistable: bool,
    #[arg(long)]
    pub omega_mu_max_nonpositive: bool,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    #[arg(long, value_enum, default_value_t = GridName::Small)]
    pub grid: GridName,
}

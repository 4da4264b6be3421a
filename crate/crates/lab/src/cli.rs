use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sharkovsky_core::order::{forced_periods_upto, sharkovsky_compare};
use sharkovsky_core::pattern::{
    closed_walks, is_stefan_pattern, loop_to_intervals, markov_graph, realized_periods,
    stefan_pattern,
};
use sharkovsky_core::tent::{
    doubling_chain, minimal_diameter_orbit, period_spectrum, t_infinity_level, truncated_tent,
};
use sharkovsky_core::witness::{
    lemma2_period2, lemma4_nested_point, lemma4_periodic_point, prop3_period2, prop5_witness,
    Period2Case, Period2Witness, Prop5Trace,
};
use sharkovsky_core::{
    connect_the_dots, pattern_orbit, Interval, Limits, Orbit, PwlMap, Rational, SpectrumMethod,
    DEFAULT_PIECE_BUDGET, DEFAULT_WALK_BUDGET,
};

use crate::format::{self, document, rational, FormatError};

const AFTER_HELP: &str = "\
Output is JSON (tagged \"schema\": \"sharkovsky-lab/1\") unless --dot or --csv is given.
CSV spectra have the columns period,orbit_count,continuum.
Exit status: 0 on success, 2 on usage or precondition errors, 3 when a budget is exceeded.";

#[derive(Parser, Debug)]
#[command(name = "sharkovsky", version, about = "Exact periodic-orbit computations for interval maps", after_help = AFTER_HELP)]
pub struct Cli {
    /// Maximum number of breakpoints of any composed map
    #[arg(long, global = true, env = "SHARKOVSKY_PIECE_BUDGET", default_value_t = DEFAULT_PIECE_BUDGET)]
    pub piece_budget: usize,

    /// Maximum number of closed walks enumerated per length
    #[arg(long, global = true, env = "SHARKOVSKY_WALK_BUDGET", default_value_t = DEFAULT_WALK_BUDGET)]
    pub walk_budget: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compare M and N in the Sharkovsky order
    Compare {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Periods up to N forced by a period-M orbit
    Forced {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        upto: u64,
    },
    /// Orbit patterns and their Markov graphs
    #[command(subcommand)]
    Pattern(PatternCommand),
    /// Constructive periodic points
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Tent map orbits and truncations
    #[command(subcommand)]
    Tent(TentCommand),
    /// Number of least-period-k orbits of a map for each k up to K
    Spectrum {
        /// JSON map file, or - for stdin
        #[arg(long)]
        map: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        upto: u64,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Direct,
    Walks,
    Auto,
}

impl Method {
    fn core(self) -> SpectrumMethod {
        match self {
            Method::Direct => SpectrumMethod::Direct,
            Method::Walks => SpectrumMethod::Walks,
            Method::Auto => SpectrumMethod::Auto,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum PatternCommand {
    /// Markov graph of a pattern
    Graph {
        /// Cycle notation such as 1>3>2, or a JSON image list such as [3,1,2]
        pattern: String,
        #[arg(long)]
        dot: bool,
    },
    /// Least periods realized by the pattern's connect-the-dots map
    Spectrum {
        pattern: String,
        #[arg(long, default_value_t = 8)]
        upto: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Closed walks of a given length, up to rotation
    Walks {
        pattern: String,
        #[arg(long)]
        length: usize,
        /// Also list the interval loop of each walk
        #[arg(long)]
        intervals: bool,
    },
    /// Connect-the-dots map of a pattern
    Map { pattern: String },
    /// Size, images, mirror and Štefan status of a pattern
    Info { pattern: String },
    /// The Štefan pattern of odd size M
    Stefan { m: usize },
}

#[derive(Args, Debug)]
pub struct Source {
    /// Use the connect-the-dots map of this pattern and its orbit
    #[arg(long, conflicts_with = "map")]
    pub pattern: Option<String>,
    /// JSON map file, or - for stdin
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Periodic orbit of --map as a JSON array of rationals
    #[arg(long, requires = "map")]
    pub orbit: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum WitnessCommand {
    /// A point of least period 2, from an orbit of period >= 3 or from --c/--d
    Period2 {
        #[command(flatten)]
        source: Source,
        #[arg(long, requires_all = ["d", "map"])]
        c: Option<String>,
        #[arg(long, requires = "c")]
        d: Option<String>,
        /// Emit JSON (the default)
        #[arg(long)]
        json: bool,
    },
    /// A point of least period N from an orbit of odd period
    Prop5 {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        period: u64,
        /// Emit JSON (the default)
        #[arg(long)]
        json: bool,
    },
    /// A periodic point following the interval loop of a Markov-graph walk
    Loop {
        #[arg(long)]
        pattern: String,
        /// Node list such as 1,2,2
        #[arg(long)]
        walk: String,
        /// Require least period equal to the walk length
        #[arg(long, conflicts_with = "nested")]
        least_period: bool,
        /// Use the leftmost nested preimage instead of forward enumeration
        #[arg(long)]
        nested: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum TentCommand {
    /// Minimal-diameter orbit of least period K
    Pk {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Restrict to orbits inside LO,HI
        #[arg(long)]
        within: Option<String>,
    },
    /// Tent map clamped to the hull of its minimal-diameter period-K orbit
    Truncate {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Report orbit counts up to this period
        #[arg(long, default_value_t = 10)]
        spectrum: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Nested minimal-diameter orbits of periods 3, 6, 12, ...
    Chain {
        #[arg(long)]
        levels: usize,
        /// Orbit counts of the deepest clamp up to this period (0 to skip)
        #[arg(long, default_value_t = 8)]
        spectrum: usize,
        /// Emit JSON (the default)
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sharkovsky_core::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) | CliError::Format(FormatError::Core(e)) if e.is_budget() => 3,
            _ => 2,
        }
    }
}

type Result<T, E = CliError> = std::result::Result<T, E>;

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let limits = Limits {
        pieces: cli.piece_budget,
        walks: cli.walk_budget,
    };
    match cli.command {
        Command::Compare { m, n } => {
            let mut doc = document();
            doc.insert("m".into(), m.into());
            doc.insert("n".into(), n.into());
            doc.insert("order".into(), sharkovsky_compare(m, n).as_str().into());
            emit(out, doc)
        }
        Command::Forced { m, upto } => {
            let mut doc = document();
            doc.insert("m".into(), m.into());
            doc.insert("upto".into(), upto.into());
            doc.insert("periods".into(), forced_periods_upto(m, upto).into());
            emit(out, doc)
        }
        Command::Pattern(cmd) => pattern(cmd, &limits, out),
        Command::Witness(cmd) => witness(cmd, &limits, out),
        Command::Tent(cmd) => tent(cmd, &limits, out),
        Command::Spectrum { map, upto, csv } => {
            let f = format::parse_map(&read_input(&map)?)?;
            let entries = period_spectrum(&f, upto as usize, &limits)?;
            if csv {
                out.write_all(format::spectrum_csv(&entries).as_bytes())?;
                return Ok(());
            }
            let mut doc = document();
            doc.insert("map".into(), format::map(&f));
            doc.insert("spectrum".into(), format::spectrum(&entries));
            emit(out, doc)
        }
    }
}

fn emit(out: &mut dyn Write, doc: serde_json::Map<String, Value>) -> Result<()> {
    writeln!(out, "{}", Value::Object(doc))?;
    Ok(())
}

fn read_input(path: &Path) -> Result<String> {
    let failed = |source| CliError::Read {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(failed)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(failed)
    }
}

fn parse_rational(text: &str, what: &str) -> Result<Rational> {
    text.parse()
        .map_err(|e| CliError::Usage(format!("invalid rational for {what}: {text:?} ({e})")))
}

fn pattern(cmd: PatternCommand, limits: &Limits, out: &mut dyn Write) -> Result<()> {
    match cmd {
        PatternCommand::Graph { pattern, dot } => {
            let p = format::parse_pattern(&pattern)?;
            let g = markov_graph(&p);
            if dot {
                out.write_all(g.to_dot(&p.to_string()).as_bytes())?;
                return Ok(());
            }
            let mut doc = document();
            doc.insert("pattern".into(), p.to_string().into());
            doc.insert("nodes".into(), g.node_count().into());
            let edges: Vec<Value> = g.edges().map(|(a, b)| json!([a, b])).collect();
            doc.insert("edges".into(), edges.into());
            emit(out, doc)
        }
        PatternCommand::Spectrum {
            pattern,
            upto,
            method,
        } => {
            let p = format::parse_pattern(&pattern)?;
            let periods = realized_periods(&p, upto, method.core(), limits)?;
            let mut doc = document();
            doc.insert("pattern".into(), p.to_string().into());
            doc.insert("upto".into(), upto.into());
            doc.insert(
                "periods".into(),
                periods.into_iter().collect::<Vec<_>>().into(),
            );
            emit(out, doc)
        }
        PatternCommand::Walks {
            pattern,
            length,
            intervals,
        } => {
            let p = format::parse_pattern(&pattern)?;
            let walks = closed_walks(&markov_graph(&p), length, limits.walks)?;
            let mut list = Vec::with_capacity(walks.len());
            for w in &walks {
                if intervals {
                    let lp = loop_to_intervals(&p, w)?;
                    list.push(json!({ "nodes": w, "intervals": format::interval_loop(&lp) }));
                } else {
                    list.push(json!(w));
                }
            }
            let mut doc = document();
            doc.insert("pattern".into(), p.to_string().into());
            doc.insert("length".into(), length.into());
            doc.insert("walks".into(), list.into());
            emit(out, doc)
        }
        PatternCommand::Map { pattern } => {
            let p = format::parse_pattern(&pattern)?;
            let mut doc = document();
            doc.insert("pattern".into(), p.to_string().into());
            doc.insert("orbit".into(), format::orbit(&pattern_orbit(&p)));
            if let Value::Object(m) = format::map(&connect_the_dots(&p)) {
                doc.extend(m);
            }
            emit(out, doc)
        }
        PatternCommand::Info { pattern } => {
            let p = format::parse_pattern(&pattern)?;
            let stefan = if p.size() % 2 == 1 && p.size() >= 3 {
                Value::Bool(is_stefan_pattern(&p)?)
            } else {
                Value::Null
            };
            let mut doc = document();
            doc.insert("pattern".into(), p.to_string().into());
            doc.insert("size".into(), p.size().into());
            doc.insert("images".into(), p.images().into());
            doc.insert("mirror".into(), p.mirror().to_string().into());
            doc.insert("stefan".into(), stefan);
            emit(out, doc)
        }
        PatternCommand::Stefan { m } => {
            let p = stefan_pattern(m)?;
            let mut doc = document();
            doc.insert("pattern".into(), p.to_string().into());
            doc.insert("images".into(), p.images().into());
            emit(out, doc)
        }
    }
}

fn resolve(source: &Source) -> Result<(PwlMap, Option<Orbit>)> {
    match (&source.pattern, &source.map) {
        (Some(p), _) => {
            let p = format::parse_pattern(p)?;
            Ok((connect_the_dots(&p), Some(pattern_orbit(&p))))
        }
        (None, Some(path)) => {
            let f = format::parse_map(&read_input(path)?)?;
            let orbit = source
                .orbit
                .as_deref()
                .map(format::parse_orbit)
                .transpose()?;
            Ok((f, orbit))
        }
        (None, None) => Err(CliError::Usage(
            "one of --pattern or --map is required".into(),
        )),
    }
}

fn period2_json(w: &Period2Witness, f: &PwlMap) -> Value {
    let opt = |x: &Option<Rational>| x.as_ref().map(rational).unwrap_or(Value::Null);
    let case = match w.case {
        Period2Case::NoFixedPointLeft => "NoFixedPointLeft",
        Period2Case::FixedPointLeft => "FixedPointLeft",
    };
    json!({
        "c": rational(&w.c),
        "d": rational(&w.d),
        "w": rational(&w.w),
        "v": rational(&w.v),
        "t": opt(&w.t),
        "u": opt(&w.u),
        "case": case,
        "y": rational(&w.y),
        "y_orbit": format::orbit(&w.orbit(f)),
    })
}

fn trace_json(t: &Prop5Trace) -> Value {
    let opt = |x: &Option<Rational>| x.as_ref().map(rational).unwrap_or(Value::Null);
    json!({
        "orbit": format::orbit(&t.orbit),
        "case": t.case.name(),
        "mirrored": t.mirrored,
        "s": t.s,
        "t": t.t,
        "q": t.q,
        "k": t.k,
        "x_s": rational(&t.orbit.points()[t.s - 1]),
        "z": rational(&t.z),
        "u": opt(&t.u),
        "v": opt(&t.v),
        "w": opt(&t.w),
    })
}

fn witness(cmd: WitnessCommand, limits: &Limits, out: &mut dyn Write) -> Result<()> {
    match cmd {
        WitnessCommand::Period2 { source, c, d, .. } => {
            let (f, orbit) = resolve(&source)?;
            let mut doc = document();
            let w = match (c, d) {
                (Some(c), Some(d)) => {
                    let (c, d) = (parse_rational(&c, "--c")?, parse_rational(&d, "--d")?);
                    doc.insert("construction".into(), "lemma2".into());
                    lemma2_period2(&f, &c, &d, limits)?
                }
                _ => {
                    let orbit = orbit
                        .ok_or_else(|| CliError::Usage("--orbit is required with --map".into()))?;
                    doc.insert("construction".into(), "prop3".into());
                    doc.insert("orbit".into(), format::orbit(&orbit));
                    prop3_period2(&f, &orbit, limits)?
                }
            };
            if let Value::Object(m) = period2_json(&w, &f) {
                doc.extend(m);
            }
            emit(out, doc)
        }
        WitnessCommand::Prop5 { source, period, .. } => {
            let (f, orbit) = resolve(&source)?;
            let orbit =
                orbit.ok_or_else(|| CliError::Usage("--orbit is required with --map".into()))?;
            let n = period as usize;
            let w = prop5_witness(&f, &orbit, n, limits)?;
            let period3 = match &w.period3 {
                Some((y, t)) => json!({ "y": rational(y), "trace": trace_json(t) }),
                None => Value::Null,
            };
            let mut doc = document();
            doc.insert("period".into(), n.into());
            doc.insert("trace".into(), trace_json(&w.trace));
            doc.insert("period3".into(), period3);
            doc.insert("cycle".into(), format::interval_loop(&w.cycle));
            doc.insert("y".into(), rational(&w.y));
            doc.insert(
                "y_orbit".into(),
                format::orbit(&Orbit::generated_by(&f, &w.y, n)?),
            );
            emit(out, doc)
        }
        WitnessCommand::Loop {
            pattern,
            walk,
            least_period,
            nested,
        } => {
            let p = format::parse_pattern(&pattern)?;
            let f = connect_the_dots(&p);
            let lp = loop_to_intervals(&p, &format::parse_walk(&walk)?)?;
            let y = if nested {
                lemma4_nested_point(&f, &lp, limits)?
            } else {
                lemma4_periodic_point(&f, &lp, least_period, limits)?
            };
            let least = f.least_period(&y, lp.len()).unwrap_or(lp.len());
            let mut doc = document();
            doc.insert("pattern".into(), p.to_string().into());
            doc.insert("loop".into(), format::interval_loop(&lp));
            doc.insert("y".into(), rational(&y));
            doc.insert("least_period".into(), least.into());
            doc.insert(
                "y_orbit".into(),
                format::orbit(&Orbit::generated_by(&f, &y, least)?),
            );
            emit(out, doc)
        }
    }
}

fn parse_bounds(text: &str) -> Result<Interval> {
    let (lo, hi) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected LO,HI, got {text:?}")))?;
    Ok(Interval::new(
        parse_rational(lo, "--within")?,
        parse_rational(hi, "--within")?,
    )?)
}

fn tent(cmd: TentCommand, limits: &Limits, out: &mut dyn Write) -> Result<()> {
    let t = PwlMap::tent();
    match cmd {
        TentCommand::Pk { k, within } => {
            let within = match within {
                Some(w) => parse_bounds(&w)?,
                None => t.domain(),
            };
            let p = minimal_diameter_orbit(&t, k as usize, &within, limits)?;
            let mut doc = document();
            doc.insert("k".into(), k.into());
            doc.insert("orbit".into(), format::orbit(&p));
            doc.insert("diameter".into(), rational(&p.diameter()));
            emit(out, doc)
        }
        TentCommand::Truncate { k, spectrum, csv } => {
            let tk = truncated_tent(k as usize, limits)?;
            let entries = period_spectrum(&tk.map, spectrum, limits)?;
            if csv {
                out.write_all(format::spectrum_csv(&entries).as_bytes())?;
                return Ok(());
            }
            let mut doc = document();
            doc.insert("k".into(), k.into());
            doc.insert("anchor_orbit".into(), format::orbit(&tk.anchor_orbit));
            doc.insert("bounds".into(), format::interval(&tk.bounds));
            doc.insert("map".into(), format::map(&tk.map));
            doc.insert("spectrum".into(), format::spectrum(&entries));
            emit(out, doc)
        }
        TentCommand::Chain {
            levels, spectrum, ..
        } => {
            let chain = doubling_chain(levels, limits)?;
            let deepest = t_infinity_level(&chain)?;
            let list: Vec<Value> = chain
                .levels
                .iter()
                .map(|q| json!({ "period": q.period(), "orbit": format::orbit(q), "hull": format::interval(&q.hull()) }))
                .collect();
            let mut doc = document();
            doc.insert("depth".into(), chain.depth().into());
            doc.insert("levels".into(), list.into());
            doc.insert("q0".into(), rational(&chain.q0));
            doc.insert("q1".into(), rational(&chain.q1));
            doc.insert("t_infinity".into(), format::map(&deepest));
            if spectrum > 0 {
                let entries = period_spectrum(&deepest, spectrum, limits)?;
                doc.insert("t_infinity_spectrum".into(), format::spectrum(&entries));
            }
            emit(out, doc)
        }
    }
}

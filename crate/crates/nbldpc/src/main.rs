use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nbldpc::alist::{read_alistq, write_alistq};
use nbldpc::channel::{ChannelKind, LlrVector, Modulation};
use nbldpc::code::{random_regular, ParityCheckMatrix};
use nbldpc::complexity::{measure, predict, ModeledAlg, OpCounts};
use nbldpc::decoder::{build_lut, decode, Algorithm, DecoderConfig, FixedPointFormat};
use nbldpc::gf::GfContext;
use nbldpc::sim::{run, write_csv, write_report, SimConfig, StopRule};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "nbldpc", about = "Non-binary LDPC decoding toolkit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte-Carlo BER/BLER sweep over an SNR list
    Simulate(SimulateArgs),
    /// Decode LLR vectors from a file and print the result
    Decode(DecodeArgs),
    /// Print the pairwise XOR decomposition table for GF(2^p)
    Lut {
        #[arg(long)]
        p: u32,
    },
    /// Print modeled per-check-node operation counts
    Complexity(ComplexityArgs),
    /// Generate a random regular code and write it in alistq format
    GenCode(GenCodeArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// alistq file path, or "regular:n=..,dv=..,dc=..,p=..,seed=.."
    #[arg(long)]
    code: String,
    /// Comma-separated decoder names: qspa, emsa, mma, smsa1, smsa2
    #[arg(long, value_delimiter = ',')]
    alg: Vec<String>,
    /// Comma-separated Eb/N0 points in dB
    #[arg(long, value_delimiter = ',')]
    snr: Vec<f64>,
    /// Scaling factor; per-algorithm default when omitted
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 50)]
    kappa_max: usize,
    /// Quantize to I integer + F fractional bits, e.g. "3,2"
    #[arg(long)]
    fixed_point: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 100)]
    min_block_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_blocks: u64,
    #[arg(long, value_enum, default_value_t = ModArg::Bpsk)]
    modulation: ModArg,
    #[arg(long, value_enum, default_value_t = ChanArg::Awgn)]
    channel: ChanArg,
    /// Report path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write curve data as CSV next to the report
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    code: String,
    /// File of LLR vectors: one symbol per line, q whitespace-separated values
    #[arg(long)]
    llrs: PathBuf,
    #[arg(long, default_value = "smsa2")]
    alg: String,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 50)]
    kappa_max: usize,
    #[arg(long)]
    fixed_point: Option<String>,
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long)]
    alg: String,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    dc: usize,
    #[arg(long)]
    w: u32,
    /// Also verify the model against an instrumented decoder run
    #[arg(long)]
    measure: bool,
}

#[derive(Args)]
struct GenCodeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    dv: usize,
    #[arg(long)]
    dc: usize,
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ModArg {
    Bpsk,
    Qam64,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ChanArg {
    Awgn,
    Rayleigh,
}

fn parse_alg(name: &str) -> Result<Algorithm> {
    Ok(match name {
        "qspa" => Algorithm::Qspa,
        "emsa" => Algorithm::Emsa,
        "mma" => Algorithm::Mma,
        "smsa1" => Algorithm::Smsa1,
        "smsa2" => Algorithm::Smsa2,
        "oracle" => Algorithm::Oracle,
        other => bail!("unknown algorithm '{other}'"),
    })
}

fn default_scale(alg: Algorithm) -> f64 {
    match alg {
        Algorithm::Smsa1 => 0.60,
        Algorithm::Smsa2 => 0.75,
        Algorithm::Emsa | Algorithm::Mma => 0.73,
        Algorithm::Qspa | Algorithm::Oracle => 1.0,
    }
}

fn parse_fixed_point(s: &str) -> Result<FixedPointFormat> {
    let (i, f) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected --fixed-point I,F, got '{s}'"))?;
    Ok(FixedPointFormat::new(i.trim().parse()?, f.trim().parse()?))
}

fn decoder_config(
    alg: &str,
    c: Option<f64>,
    kappa_max: usize,
    fixed_point: &Option<String>,
) -> Result<DecoderConfig> {
    let alg = parse_alg(alg)?;
    let mut cfg = DecoderConfig::new(alg, c.unwrap_or_else(|| default_scale(alg)), kappa_max);
    if let Some(s) = fixed_point {
        cfg = cfg.fixed_point(parse_fixed_point(s)?);
    }
    Ok(cfg)
}

/// Loads "--code": either an alistq file or an inline
/// "regular:n=..,dv=..,dc=..,p=..[,seed=..]" construction spec.
fn load_code(spec: &str) -> Result<ParityCheckMatrix> {
    if let Some(body) = spec.strip_prefix("regular:") {
        let (mut n, mut dv, mut dc, mut p, mut seed) = (None, None, None, None, 1u64);
        for part in body.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("bad code spec field '{part}'"))?;
            match k.trim() {
                "n" => n = Some(v.trim().parse()?),
                "dv" => dv = Some(v.trim().parse()?),
                "dc" => dc = Some(v.trim().parse()?),
                "p" => p = Some(v.trim().parse()?),
                "seed" => seed = v.trim().parse()?,
                other => bail!("unknown code spec field '{other}'"),
            }
        }
        let (n, dv, dc, p) = (
            n.ok_or_else(|| anyhow!("code spec missing n"))?,
            dv.ok_or_else(|| anyhow!("code spec missing dv"))?,
            dc.ok_or_else(|| anyhow!("code spec missing dc"))?,
            p.ok_or_else(|| anyhow!("code spec missing p"))?,
        );
        let gf = Arc::new(GfContext::new(p, None)?);
        Ok(random_regular(n, dv, dc, gf, seed)?)
    } else {
        read_alistq(spec).with_context(|| format!("reading code file '{spec}'"))
    }
}

fn read_llr_file(path: &PathBuf, q: usize) -> Result<Vec<LlrVector>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (ln, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| anyhow!("line {}: {e}", ln + 1)))
            .collect::<Result<_>>()?;
        if vals.len() != q {
            bail!("line {}: expected {} values, got {}", ln + 1, q, vals.len());
        }
        out.push(LlrVector::from_raw(vals));
    }
    Ok(out)
}

fn print_counts(label: &str, q: usize, dc: usize, w: u32, c: &OpCounts) {
    println!(
        "alg={label} q={q} dc={dc} w={w}: field_adds={} summations={} compare_selects={} memory_bits={}",
        c.field_adds, c.summations, c.compare_selects, c.memory_bits
    );
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let h = load_code(&a.code)?;
    if a.alg.is_empty() {
        bail!("--alg requires at least one decoder name");
    }
    let decoders = a
        .alg
        .iter()
        .map(|name| decoder_config(name, a.c, a.kappa_max, &a.fixed_point))
        .collect::<Result<Vec<_>>>()?;
    let cfg = SimConfig {
        modulation: match a.modulation {
            ModArg::Bpsk => Modulation::Bpsk,
            ModArg::Qam64 => Modulation::Qam64Gray,
        },
        channel: match a.channel {
            ChanArg::Awgn => ChannelKind::Awgn,
            ChanArg::Rayleigh => ChannelKind::RayleighUncorrelated,
        },
        snr_db_list: a.snr.clone(),
        decoders,
        stop: StopRule { min_block_errors: a.min_block_errors, max_blocks: a.max_blocks },
        seed: a.seed,
        workers: a.workers,
    };
    let result = run(&h, &cfg)?;
    match &a.out {
        Some(path) => write_report(&result, File::create(path)?)?,
        None => write_report(&result, std::io::stdout().lock())?,
    }
    if let Some(path) = &a.csv {
        write_csv(&result, File::create(path)?)?;
    }
    Ok(())
}

fn cmd_decode(a: DecodeArgs) -> Result<()> {
    let h = load_code(&a.code)?;
    let llrs = read_llr_file(&a.llrs, h.gf().q())?;
    let cfg = decoder_config(&a.alg, a.c, a.kappa_max, &a.fixed_point)?;
    let outcome = decode(&h, &llrs, &cfg)?;
    let word: Vec<String> = outcome.word.iter().map(|s| s.to_string()).collect();
    println!("word: {}", word.join(" "));
    println!("converged: {}", outcome.converged);
    println!("iterations: {}", outcome.iterations_used);
    Ok(())
}

fn cmd_lut(p: u32) -> Result<()> {
    let gf = GfContext::new(p, None)?;
    let lut = build_lut(&gf);
    for delta in 1..gf.q() as u16 {
        let cells: Vec<String> = lut
            .row(delta as u8)
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        println!("delta={delta}: {}", cells.join(" "));
    }
    Ok(())
}

fn cmd_complexity(a: ComplexityArgs) -> Result<()> {
    let alg = match a.alg.as_str() {
        "smsa1" => ModeledAlg::Smsa1,
        "smsa2" => ModeledAlg::Smsa2,
        "emsa" => ModeledAlg::Emsa,
        other => bail!("complexity model covers smsa1, smsa2, emsa; got '{other}'"),
    };
    let predicted = predict(alg, a.q, a.dc, a.w)?;
    print_counts(&a.alg, a.q, a.dc, a.w, &predicted);
    if a.measure {
        let p = a.q.trailing_zeros();
        let gf = Arc::new(GfContext::new(p, None)?);
        let n = a.dc * 2;
        let h = random_regular(n, 2, a.dc, Arc::clone(&gf), 7)?;
        // an input guaranteed to fail the initial parity check
        let llrs: Vec<LlrVector> = (0..n)
            .map(|j| {
                let mut v = vec![4.0; a.q];
                v[usize::from(j == 0)] = 0.0;
                LlrVector::from_raw(v)
            })
            .collect();
        let alg = parse_alg(&a.alg)?;
        let cfg = DecoderConfig::new(alg, default_scale(alg), 1);
        let measured = measure(&h, &llrs, &cfg, a.w).map_err(|e| anyhow!("{e}"))?;
        print_counts(&format!("{}(measured)", a.alg), a.q, a.dc, a.w, &measured);
    }
    Ok(())
}

fn cmd_gen_code(a: GenCodeArgs) -> Result<()> {
    let gf = Arc::new(GfContext::new(a.p, None)?);
    let h = random_regular(a.n, a.dv, a.dc, gf, a.seed)?;
    write_alistq(&h, &a.out)?;
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "wrote {} ({}x{} over GF({}), rate {:.4}, {} 4-cycles, hash {:016x})",
        a.out.display(),
        h.m(),
        h.n(),
        h.gf().q(),
        h.rate(),
        h.count_4cycles(),
        h.content_hash()
    )?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Decode(a) => cmd_decode(a),
        Cmd::Lut { p } => cmd_lut(p),
        Cmd::Complexity(a) => cmd_complexity(a),
        Cmd::GenCode(a) => cmd_gen_code(a),
    }
}

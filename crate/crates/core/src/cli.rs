//! The `brauerlab` command line.
//!
//! Exit codes: 0 on success, 1 on domain errors and failed checks, 2 when a
//! search hit its caps.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{rngs::StdRng, RngExt, SeedableRng};
use serde_json::json;

use crate::admissible::{closure_roots, coclique_closure, count_containing, enumerate_orbit, is_admissible_roots, orbit_table, AdmissibleSet};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::normalform::{rank, tl_rank, BrauerMonoid, NormalForm};
use crate::oracle_a::eval_word_a;
use crate::rewrite::{act_word, homog_equiv, reduce, word_height, Equivalence, Gen, SearchCaps, Side, Word};
use crate::rootsystem::{CartanType, Root, RootSystem};

#[derive(Parser, Debug)]
#[command(name = "brauerlab", version, about = "Brauer monoids of simply laced type")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = SearchCaps::default().max_extra_length)]
    pub caps_extra_length: usize,
    #[arg(long, global = true, default_value_t = SearchCaps::default().max_visited)]
    pub caps_visited: usize,
    /// Worker threads; defaults to BRAUERLAB_THREADS or 1.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Positive roots in the simple basis, by height.
    Roots { cartan: CartanType },
    /// Orbits of admissible closures of cocliques.
    Orbits { cartan: CartanType },
    /// Admissible closure of a set of roots, e.g. "a4; 1,1,2,2,1,0".
    Closure { cartan: CartanType, set: String },
    /// Image of an admissible set under a word.
    Action {
        cartan: CartanType,
        word: String,
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Lowest-height form of a word found by rewriting.
    Reduce { cartan: CartanType, word: String },
    /// Homogeneous equivalence of two words after reduction.
    Equiv { cartan: CartanType, a: String, b: String },
    /// The canonical word a_B (or a_B^b with --back).
    Ab {
        cartan: CartanType,
        set: String,
        #[arg(long)]
        back: bool,
    },
    /// Normal form (Y, B, h, B', δ) of a word.
    Decompose { cartan: CartanType, word: String },
    /// Product of two words or normal-form JSON objects.
    Multiply { cartan: CartanType, x: String, y: String },
    /// Rank of the monoid algebra.
    Rank {
        cartan: CartanType,
        /// Rank of the Temperley–Lieb subalgebra instead.
        #[arg(long)]
        tl: bool,
    },
    /// Recompute the orbit table and check every cell.
    Tables { cartan: CartanType },
    /// Random words: reduce must not change the diagram (type A) or the
    /// normal form (types E).
    Fuzz {
        cartan: CartanType,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
}

struct Ctx {
    opts: GlobalOpts,
    out: Vec<u8>,
    status: i32,
}

impl Ctx {
    fn caps(&self) -> Result<SearchCaps> {
        SearchCaps::new(self.opts.caps_extra_length, self.opts.caps_visited)
    }

    fn threads(&self) -> usize {
        self.opts
            .threads
            .or_else(|| std::env::var("BRAUERLAB_THREADS").ok().and_then(|s| s.parse().ok()))
            .unwrap_or(1)
            .max(1)
    }

    fn cache(&self) -> Cache {
        if self.opts.no_cache {
            Cache::disabled()
        } else {
            Cache::from_env()
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.extend_from_slice(s.as_ref().as_bytes());
        self.out.push(b'\n');
    }

    fn emit(&mut self, value: serde_json::Value, human: impl FnOnce(&mut Self)) {
        if self.opts.json {
            let text = serde_json::to_string(&value).expect("json values serialize");
            self.line(text);
        } else {
            human(self);
        }
    }
}

fn parse_set(sys: &RootSystem, s: &str) -> Result<AdmissibleSet> {
    let roots = s.split(';').map(str::trim).filter(|t| !t.is_empty()).map(|t| Root::parse(t, sys.rank())).collect::<Result<Vec<_>>>()?;
    if !is_admissible_roots(sys, &roots)? {
        return Err(Error::Parse(format!("`{s}` is not admissible; see `closure`")));
    }
    AdmissibleSet::from_roots(sys, &roots)
}

fn set_json(sys: &RootSystem, set: &AdmissibleSet) -> serde_json::Value {
    json!(set.roots(sys).into_iter().map(|r| r.0).collect::<Vec<_>>())
}

fn parse_word(sys: &RootSystem, s: &str) -> Result<Word> {
    let w: Word = s.parse()?;
    w.validate(sys)?;
    Ok(w)
}

fn exceptional(t: CartanType) -> Result<()> {
    if t.is_exceptional() {
        Ok(())
    } else {
        Err(Error::UnsupportedType(format!("{t}: normal forms are implemented for E6, E7, E8")))
    }
}

/// Parses argv and runs one command, writing to the given streams.
pub fn run_with(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut ctx = Ctx { opts: cli.global.clone(), out: Vec::new(), status: 0 };
    let result = dispatch(&mut ctx, cli.command, stderr);
    let _ = stdout.write_all(&ctx.out);
    match result {
        Ok(()) => ctx.status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if matches!(e, Error::CapsExhausted(_)) {
                2
            } else {
                1
            }
        }
    }
}

/// Entry point of the binary.
pub fn run() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    run_with(&args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn dispatch(ctx: &mut Ctx, command: Command, stderr: &mut dyn Write) -> Result<()> {
    match command {
        Command::Roots { cartan } => {
            let sys = RootSystem::new(cartan)?;
            let roots: Vec<_> = sys.positive_roots().iter().enumerate().map(|(i, r)| json!({"index": i, "height": sys.height_of(i as u16), "coeffs": r.0})).collect();
            ctx.emit(json!({"type": cartan.to_string(), "roots": roots}), |c| {
                for (i, r) in sys.positive_roots().iter().enumerate() {
                    c.line(format!("{i:>4}  ht {:>2}  {}", sys.height_of(i as u16), r));
                }
            });
        }
        Command::Orbits { cartan } => {
            let sys = RootSystem::new(cartan)?;
            let rows = ctx.cache().orbit_summaries(&sys)?;
            ctx.emit(serde_json::to_value(&rows)?, |c| {
                c.line("Y          |B_Y|  orbit  ht0  maxht  perp        M_Y");
                for r in &rows {
                    c.line(format!(
                        "{:<10} {:>5} {:>6} {:>4} {:>6}  {:<11} {}",
                        r.coclique.to_string(),
                        r.set_size,
                        r.orbit_size,
                        r.height0,
                        r.max_height,
                        r.perp_type,
                        r.my_type
                    ));
                }
            });
        }
        Command::Closure { cartan, set } => {
            let sys = RootSystem::new(cartan)?;
            let roots = set.split(';').map(str::trim).filter(|t| !t.is_empty()).map(|t| Root::parse(t, sys.rank())).collect::<Result<Vec<_>>>()?;
            let cl = closure_roots(&sys, &roots)?;
            let orbit = enumerate_orbit(&sys, &cl)?;
            ctx.emit(json!({"closure": set_json(&sys, &cl), "orbit_size": orbit.len(), "height": orbit.height(orbit.index_of(&cl).unwrap_or(0))}), |c| {
                c.line(cl.display(&sys).to_string());
                c.line(format!("orbit size {}, height {}", orbit.len(), orbit.height(orbit.index_of(&cl).unwrap_or(0))));
            });
        }
        Command::Action { cartan, word, set, side } => {
            let sys = RootSystem::new(cartan)?;
            let w = parse_word(&sys, &word)?;
            let start = parse_set(&sys, &set)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let image = act_word(&sys, &w, side, &start)?;
            ctx.emit(json!({"set": set_json(&sys, &image)}), |c| c.line(image.display(&sys).to_string()));
        }
        Command::Reduce { cartan, word } => {
            let sys = RootSystem::new(cartan)?;
            let w = parse_word(&sys, &word)?;
            let r = reduce(&sys, &w, ctx.caps()?)?;
            ctx.emit(serde_json::to_value(&r.word)?, |c| c.line(r.word.to_string()));
            if r.saturated {
                let _ = writeln!(stderr, "search caps reached; the result may not have minimal height");
                ctx.status = 2;
            }
        }
        Command::Equiv { cartan, a, b } => {
            let sys = RootSystem::new(cartan)?;
            let (a, b) = (parse_word(&sys, &a)?, parse_word(&sys, &b)?);
            let caps = ctx.caps()?;
            let (ra, rb) = (reduce(&sys, &a, caps)?, reduce(&sys, &b, caps)?);
            let answer = if word_height(&ra.word) != word_height(&rb.word) && !ra.saturated && !rb.saturated {
                None
            } else {
                Some(homog_equiv(&sys, &ra.word, &rb.word, caps)?)
            };
            let model = if cartan.is_exceptional() {
                let m = BrauerMonoid::new(sys.clone())?;
                Some(m.decompose(&a)? == m.decompose(&b)?)
            } else if let CartanType::A(n) = cartan {
                Some(eval_word_a(n as usize + 1, &a)? == eval_word_a(n as usize + 1, &b)?)
            } else {
                None
            };
            let text = match answer {
                None => "different heights".to_string(),
                Some(Equivalence::Equivalent) => "equivalent".to_string(),
                Some(Equivalence::DeltaOffset(k)) => format!("delta offset {k}"),
                Some(Equivalence::NotFoundWithinCaps) => "not found within caps".to_string(),
            };
            ctx.emit(json!({"rewrite": text, "equal_in_monoid": model}), |c| {
                c.line(&text);
                if let Some(m) = model {
                    c.line(format!("equal in the monoid: {m}"));
                }
            });
            if answer == Some(Equivalence::NotFoundWithinCaps) {
                ctx.status = 2;
            }
        }
        Command::Ab { cartan, set, back } => {
            exceptional(cartan)?;
            let m = BrauerMonoid::of_type(cartan)?;
            let b = parse_set(m.sys(), &set)?;
            let c = if back { m.build_aback(&b)? } else { m.build_ab(&b)? };
            ctx.emit(json!({"word": serde_json::to_value(&c.word)?, "height": word_height(&c.word), "target": set_json(m.sys(), &b)}), |x| {
                x.line(c.word.to_string())
            });
        }
        Command::Decompose { cartan, word } => {
            exceptional(cartan)?;
            let m = BrauerMonoid::of_type(cartan)?;
            let w = parse_word(m.sys(), &word)?;
            let nf = m.decompose(&w)?;
            let synth = m.synthesize(&nf)?;
            ctx.emit(nf.to_json(m.sys()), |c| {
                c.line(format!("Y = {}", nf.coclique));
                c.line(format!("B  = {}", nf.b.display(m.sys())));
                c.line(format!("B' = {}", nf.bp.display(m.sys())));
                c.line(format!("h  = {:?}", nf.h.word()));
                c.line(format!("delta = {}", nf.delta));
                c.line(format!("word = {synth}"));
            });
        }
        Command::Multiply { cartan, x, y } => {
            exceptional(cartan)?;
            let m = BrauerMonoid::of_type(cartan)?;
            let parse = |s: &str| -> Result<NormalForm> {
                if s.trim_start().starts_with('{') {
                    NormalForm::from_json(&m, &serde_json::from_str(s)?)
                } else {
                    m.decompose(&parse_word(m.sys(), s)?)
                }
            };
            let nf = m.multiply(&parse(&x)?, &parse(&y)?)?;
            let synth = m.synthesize(&nf)?;
            ctx.emit(nf.to_json(m.sys()), |c| {
                c.line(nf.to_string());
                c.line(format!("word = {synth}"));
            });
        }
        Command::Rank { cartan, tl } => {
            let sys = RootSystem::new(cartan)?;
            if tl {
                let r = tl_rank(&sys)?;
                ctx.emit(json!({"type": cartan.to_string(), "tl_rank": r}), |c| c.line(r.to_string()));
            } else {
                let r = rank(&sys)?;
                ctx.emit(json!({"type": cartan.to_string(), "rank": r}), |c| c.line(r.to_string()));
            }
        }
        Command::Tables { cartan } => tables(ctx, cartan)?,
        Command::Fuzz { cartan, count, max_len } => fuzz(ctx, cartan, count, max_len)?,
    }
    Ok(())
}

fn tables(ctx: &mut Ctx, cartan: CartanType) -> Result<()> {
    let sys = RootSystem::new(cartan)?;
    let table = orbit_table(cartan)?;
    let summaries = ctx.cache().orbit_summaries(&sys)?;
    let monoid = BrauerMonoid::new(sys.clone())?;
    let caps = ctx.caps()?;
    let mut rows = Vec::new();
    let mut all = true;
    for (k, row) in table.iter().enumerate() {
        let s = &summaries[k + 1];
        let model = monoid.model(k + 1)?;
        let mt = monoid.verify_matsumoto_tits(model.coclique(), caps)?;
        let mut cells = vec![
            ("|B_Y|", row.set_size.to_string(), s.set_size.to_string()),
            ("B_Y^perp", row.perp_type.to_string(), s.perp_type.clone()),
            ("M_Y", row.my_type.to_string(), s.my_type.clone()),
            ("|(WB_Y)^0|", row.height0_count.to_string(), s.height0.to_string()),
            ("S_Y", row.my_type.to_string(), format!("{}{}", mt.my_type, if mt.passed() { "" } else { " (relations fail)" })),
        ];
        if let Some(n) = row.containing_last {
            let orbit = enumerate_orbit(&sys, &coclique_closure(&sys, row.coclique)?)?;
            cells.push(("|B^n|", n.to_string(), count_containing(&sys, &orbit, sys.rank() as u8).to_string()));
        }
        let cells: Vec<_> = cells.into_iter().map(|(name, expected, found)| (name, expected.clone(), found.clone(), expected == found)).collect();
        all &= cells.iter().all(|c| c.3);
        rows.push((model.coclique().clone(), cells));
    }
    let value = json!({
        "type": cartan.to_string(),
        "passed": all,
        "rows": rows.iter().map(|(y, cells)| json!({
            "Y": y,
            "cells": cells.iter().map(|(n, e, f, ok)| json!({"column": n, "expected": e, "found": f, "pass": ok})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    ctx.emit(value, |c| {
        for (y, cells) in &rows {
            c.line(format!("Y = {y}"));
            for (n, e, f, ok) in cells {
                c.line(format!("  {:<11} {:<4} expected {:<8} found {}", n, if *ok { "PASS" } else { "FAIL" }, e, f));
            }
        }
        c.line(if all { "all cells match" } else { "MISMATCH" });
    });
    if !all {
        ctx.status = 1;
    }
    Ok(())
}

fn random_word(rng: &mut StdRng, rank: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let tokens = (0..len)
        .map(|_| {
            let i = rng.random_range(1..=rank as u8);
            if rng.random_bool(0.5) {
                Gen::E(i)
            } else {
                Gen::R(i)
            }
        })
        .collect();
    Word::new(0, tokens)
}

#[derive(Default)]
struct FuzzTally {
    failures: Vec<String>,
    saturated: usize,
}

fn fuzz(ctx: &mut Ctx, cartan: CartanType, count: usize, max_len: usize) -> Result<()> {
    let sys = RootSystem::new(cartan)?;
    let monoid = if cartan.is_exceptional() {
        Some(BrauerMonoid::new(sys.clone())?)
    } else if matches!(cartan, CartanType::A(_)) {
        None
    } else {
        return Err(Error::UnsupportedType(format!("{cartan}: fuzzing needs type A or E")));
    };
    let caps = ctx.caps()?;
    let seed = ctx.opts.seed;
    let threads = ctx.threads().min(count.max(1));
    let check = |k: usize| -> Result<Option<(String, bool)>> {
        let mut rng = StdRng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let w = random_word(&mut rng, sys.rank(), max_len);
        let r = reduce(&sys, &w, caps)?;
        let same = match &monoid {
            Some(m) => m.decompose(&w)? == m.decompose(&r.word)?,
            None => eval_word_a(sys.rank() + 1, &w)? == eval_word_a(sys.rank() + 1, &r.word)?,
        };
        Ok(Some((if same { String::new() } else { format!("{w} -> {}", r.word) }, r.saturated)))
    };
    let chunks: Vec<Result<FuzzTally>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let check = &check;
                s.spawn(move || {
                    let mut tally = FuzzTally::default();
                    for k in (t..count).step_by(threads) {
                        if let Some((failure, sat)) = check(k)? {
                            if !failure.is_empty() {
                                tally.failures.push(format!("#{k}: {failure}"));
                            }
                            tally.saturated += sat as usize;
                        }
                    }
                    Ok(tally)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("fuzz worker panicked")).collect()
    });
    let mut failures = Vec::new();
    let mut saturated = 0;
    for c in chunks {
        let c = c?;
        failures.extend(c.failures);
        saturated += c.saturated;
    }
    failures.sort_by_key(|f| f[1..].split(':').next().and_then(|n| n.parse::<usize>().ok()));
    let value = json!({"type": cartan.to_string(), "count": count, "seed": seed, "failures": failures.len(), "saturated": saturated, "examples": failures.iter().take(5).collect::<Vec<_>>()});
    ctx.emit(value, |c| {
        c.line(format!("{count} words, {} failures, {saturated} searches capped", failures.len()));
        for f in failures.iter().take(5) {
            c.line(format!("  {f}"));
        }
    });
    if !failures.is_empty() {
        ctx.status = 1;
    }
    Ok(())
}

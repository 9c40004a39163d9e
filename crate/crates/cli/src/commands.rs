use crate::manifest::{self, ExperimentManifest};
use clap::{Args, Parser, Subcommand, ValueEnum};
use scl_core::congruence::{run_congruence_experiment, twist_exponent, WeightCongruenceCase};
use scl_core::eisenstein::{padic_limit_series, EisensteinKind, EisensteinSpec};
use scl_core::lfunctions::{
    bernoulli_number, generalized_bernoulli, inverse_pole_valuations, limit_report, padic_l, padic_l_exact, Character,
    LValueRequest, LimitSequence,
};
use scl_core::qexpansion::{self, FourierExpansion, HalfIntegralMatrix};
use scl_core::theta::{aut_count, level_and_char, theta_series, GramMatrix};
use scl_core::{split_prime, DirichletCharacter, IdealBranch};
use serde::Serialize;
use serde_json::json;
use std::fs;

#[derive(Debug, Parser)]
#[command(name = "scl", version, about = "Exact experiments with congruences of modular forms")]
pub struct Cli {
    /// Emit JSON instead of tables
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for enumeration; output does not depend on it
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Roots of Φ_{p−1} mod p labelling the primes above p
    Split {
        #[arg(long)]
        p: u64,
    },
    /// The character ψ attached to a branch
    Psi(BranchArgs),
    /// Bernoulli numbers B_n, or B_{n,χ} with χ = ω^alpha on a branch
    Bernoulli {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        branch: Option<u64>,
        #[arg(long, default_value_t = 0)]
        alpha: u64,
    },
    /// Kubota–Leopoldt value L_p(1−s, ω^beta)
    Lp {
        #[command(flatten)]
        at: BranchArgs,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        beta: i64,
        #[arg(long, default_value_t = 20)]
        prec: u32,
    },
    /// Degree-1 Eisenstein series as qexp-v1
    Eis {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        at: BranchArgs,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        alpha: u64,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        out: Option<String>,
    },
    /// p-adic limit experiments along l_m = l + a·p^m
    Limit {
        #[command(flatten)]
        at: BranchArgs,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        delta: u8,
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        steps: u32,
        #[arg(long, default_value_t = 20)]
        prec: u32,
        /// Compare Eisenstein series instead of L-values
        #[arg(long)]
        series: bool,
        /// Truncation for --series
        #[arg(long, default_value_t = 20)]
        bound: i64,
        /// Report v_p(L_p(1 + 2l − 2l_m, 1)^{-1}) instead
        #[arg(long, conflicts_with = "series")]
        pole: bool,
    },
    /// Theta series of an even lattice given as {"m", "twoS"}
    Theta {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        bound: i64,
        /// Prime tagging the coefficient field
        #[arg(long, default_value_t = 5)]
        p: u64,
        /// Print automorphism count, level and character instead
        #[arg(long)]
        info: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Keep the coefficients with T ≡ T0 mod R
    Sieve {
        #[arg(long)]
        input: String,
        #[arg(long)]
        r: i64,
        /// 2T0 as a JSON matrix, e.g. [[2,1],[1,0]]
        #[arg(long)]
        t0: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Degree-1 extract b(t) = Σ_{tr(2T·S0)=t} a(T)
    Specialize {
        #[arg(long)]
        input: String,
        /// 2S0 as a JSON matrix
        #[arg(long)]
        s0: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a pair of expansions against the weight congruence
    Verify {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long)]
        branch: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        k1: i64,
        #[arg(long)]
        k2: i64,
        /// a₁ with χ₁ = ψ^{a₁} on the branch (so χ₁^σ = ω^{−a₁})
        #[arg(long)]
        alpha1: u64,
        /// a₂ with χ₂ = ψ^{a₂}
        #[arg(long)]
        alpha2: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, default_value_t = 0)]
        s: u32,
        /// Also check the quadratic-twist corollary at every branch
        #[arg(long)]
        corollary: bool,
    },
    /// Minimum valuation per rank of T
    Profile {
        #[arg(long)]
        input: String,
        #[arg(long)]
        branch: u64,
        #[arg(long, default_value_t = 1)]
        r: i64,
    },
    /// Re-run an experiment manifest and compare exit codes
    Replay {
        #[arg(long)]
        manifest: String,
    },
}

#[derive(Debug, Args)]
pub struct BranchArgs {
    #[arg(long)]
    pub p: u64,
    /// Root d labelling the branch; defaults to the smallest
    #[arg(long)]
    pub branch: Option<u64>,
}

impl BranchArgs {
    fn resolve(&self) -> Result<IdealBranch, CliError> {
        Ok(match self.branch {
            Some(d) => IdealBranch::new(self.p, d)?,
            None => IdealBranch::first(self.p)?,
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    E1psi,
    Level1,
    Chi,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] scl_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub fn exit_code_for(e: &CliError) -> u8 {
    use scl_core::Error as E;
    match e {
        CliError::Core(E::Invariant(_)) => 3,
        CliError::Core(E::Pole(_) | E::Parity { .. } | E::NotQuadraticTwist { .. } | E::NotPositiveDefinite) => 2,
        _ => 1,
    }
}

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn read_expansion(path: &str) -> Result<FourierExpansion, CliError> {
    Ok(FourierExpansion::from_json_str(&read(path)?)?)
}

fn parse_matrix(raw: &str) -> Result<HalfIntegralMatrix, CliError> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(raw).map_err(|e| CliError::Usage(format!("matrix {raw:?}: {e}")))?;
    Ok(HalfIntegralMatrix::new(rows)?)
}

fn line(s: String) -> String {
    s + "\n"
}

fn to_json<T: Serialize>(v: &T) -> String {
    line(serde_json::to_string(v).expect("plain data"))
}

/// Writes a qexp-v1 file to `out` if given, else returns it for stdout.
fn emit_expansion(f: &FourierExpansion, out: &Option<String>) -> Result<Outcome, CliError> {
    let text = line(f.to_json_string());
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

#[derive(Serialize)]
struct SplitOut {
    p: u64,
    roots: Vec<u64>,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let json = cli.json;
    match &cli.command {
        Cmd::Split { p } => {
            let roots = split_prime(*p)?.roots();
            if json {
                Ok(Outcome::ok(to_json(&SplitOut { p: *p, roots })))
            } else {
                let list: Vec<String> = roots.iter().map(u64::to_string).collect();
                Ok(Outcome::ok(line(format!("p = {p}: {} primes above p, roots {}", roots.len(), list.join(" ")))))
            }
        }
        Cmd::Psi(at) => {
            let branch = at.resolve()?;
            let psi = DirichletCharacter::psi(branch);
            let values: Vec<_> = (1..at.p as i64).map(|m| (m, psi.value(m))).collect();
            if json {
                let values: Vec<_> = values.iter().map(|(m, v)| json!({"m": m, "value": v})).collect();
                Ok(Outcome::ok(to_json(&json!({
                    "character": psi,
                    "omega_exponent": psi.omega_exponent(),
                    "values": values,
                }))))
            } else {
                let mut s = format!("psi for branch d = {} (p = {}), omega exponent {}\n", branch.d(), branch.p(), psi.omega_exponent());
                for (m, v) in values {
                    s.push_str(&format!("psi({m}) = {v}\n"));
                }
                Ok(Outcome::ok(s))
            }
        }
        Cmd::Bernoulli { n, p, branch, alpha } => {
            if *n == 0 && p.is_some() {
                return Err(CliError::Usage("generalized Bernoulli numbers start at n = 1".into()));
            }
            match p {
                None => {
                    let b = bernoulli_number(*n);
                    if json {
                        Ok(Outcome::ok(to_json(&json!({"n": n, "value": b.to_string()}))))
                    } else {
                        Ok(Outcome::ok(line(format!("B_{n} = {b}"))))
                    }
                }
                Some(p) => {
                    let at = BranchArgs { p: *p, branch: *branch };
                    let chi = DirichletCharacter::from_omega_exponent(at.resolve()?, *alpha as i64);
                    let b = generalized_bernoulli(*n, &Character::Dirichlet(chi));
                    if json {
                        Ok(Outcome::ok(to_json(&json!({"n": n, "character": chi, "value": b}))))
                    } else {
                        Ok(Outcome::ok(line(format!("B_{{{n}, omega^{alpha}}} = {b}"))))
                    }
                }
            }
        }
        Cmd::Lp { at, s, beta, prec } => {
            let branch = at.resolve()?;
            let req = LValueRequest::new(*s, *beta, branch, *prec)?;
            let exact = padic_l_exact(*s, *beta, branch)?;
            let value = padic_l(&req)?;
            if json {
                Ok(Outcome::ok(to_json(&json!({
                    "p": at.p, "branch_d": branch.d(), "s": s, "beta": req.beta,
                    "exact": exact, "value": value,
                }))))
            } else {
                Ok(Outcome::ok(format!(
                    "L_p(1-{s}, omega^{}) at branch d = {}\nexact: {exact}\np-adic: {value}\n",
                    req.beta,
                    branch.d()
                )))
            }
        }
        Cmd::Eis { kind, at, k, alpha, bound, out } => {
            let branch = at.resolve()?;
            let spec = EisensteinSpec {
                kind: match kind {
                    Kind::E1psi => EisensteinKind::E1psi,
                    Kind::Level1 => EisensteinKind::Level1,
                    Kind::Chi => EisensteinKind::Chi,
                },
                p: at.p,
                branch_d: branch.d(),
                k: *k,
                alpha: *alpha,
                bound: *bound,
            };
            emit_expansion(&spec.build()?, out)
        }
        Cmd::Limit { at, l, delta, alpha, steps, prec, series, bound, pole } => {
            let branch = at.resolve()?;
            let seq = LimitSequence::new(at.p, *l, *delta, *alpha)?;
            if *pole {
                let rows = inverse_pole_valuations(&seq, branch, *steps)?;
                if json {
                    let rows: Vec<_> = rows.iter().map(|(m, s, v)| json!({"m": m, "s": s, "valuation": v})).collect();
                    return Ok(Outcome::ok(to_json(&rows)));
                }
                let mut s = String::from("m  s  v(L_p(1-s,1)^-1)\n");
                for (m, sv, v) in rows {
                    s.push_str(&format!("{m}  {sv}  {v}\n"));
                }
                return Ok(Outcome::ok(s));
            }
            if *series {
                let report = padic_limit_series(&seq, &branch, *steps, *bound)?;
                let code = if report.parity_ok { 0 } else { 2 };
                let text = if json { to_json(&report) } else { report.to_table() };
                return Ok(Outcome { stdout: text, code });
            }
            let report = limit_report(&seq, branch, *steps, *prec)?;
            if json {
                Ok(Outcome::ok(to_json(&report.to_json_rows())))
            } else {
                Ok(Outcome::ok(report.to_table()))
            }
        }
        Cmd::Theta { gram, degree, bound, p, info, out } => {
            let s = GramMatrix::from_json_str(&read(gram)?)?;
            if *info {
                let (level, chi) = level_and_char(&s)?;
                let eps = aut_count(&s);
                return Ok(Outcome::ok(if json {
                    to_json(&json!({"m": s.m(), "aut_count": eps, "level": level, "discriminant": chi.discriminant}))
                } else {
                    line(format!("m = {}, aut = {eps}, level = {level}, character of discriminant {}", s.m(), chi.discriminant))
                }));
            }
            emit_expansion(&theta_series(&s, *degree, *bound, *p)?, out)
        }
        Cmd::Sieve { input, r, t0, out } => {
            let f = read_expansion(input)?;
            emit_expansion(&qexpansion::sieve(&f, *r, &parse_matrix(t0)?)?, out)
        }
        Cmd::Specialize { input, s0, out } => {
            let f = read_expansion(input)?;
            emit_expansion(&qexpansion::specialize(&f, &parse_matrix(s0)?)?, out)
        }
        Cmd::Verify { f1, f2, branch, r, k1, k2, alpha1, alpha2, m, e, s, corollary } => {
            let f1 = read_expansion(f1)?;
            let f2 = read_expansion(f2)?;
            let p = f1.p();
            let b = IdealBranch::new(p, *branch)?;
            let case = WeightCongruenceCase { p, k1: *k1, k2: *k2, alpha1: *alpha1, alpha2: *alpha2, m: *m, r: *r, e: *e, s: *s };
            let report = run_congruence_experiment(&f1, &f2, &b, &case, *corollary)?;
            let code = report.verdict.exit_code() as u8;
            if json {
                return Ok(Outcome { stdout: to_json(&report), code });
            }
            let h = &report.hypotheses;
            let c = &report.conclusion;
            let mut text = format!(
                "bound {}  branch d = {}  r = {}\nnu(F1) = {}  nu(F2) = {}  nu(F1-F2) = {}\nhypotheses: integral {}  congruent {}  F1 nonzero mod p {}\n",
                report.bound, report.branch_d, r, report.nu_f1, report.nu_f2, report.nu_difference, h.integral, h.congruent, h.nonvanishing
            );
            text.push_str(&format!("weights: {} vs {} mod {}: {}\n", c.lhs, c.rhs, c.modulus, if c.holds { "holds" } else { "fails" }));
            if let Some(cor) = &report.corollary {
                let twist = twist_exponent(*alpha1, *alpha2, p).map_or("none".to_string(), |t| t.to_string());
                text.push_str(&format!(
                    "all branches congruent {}  products congruent {}  twist {}\n",
                    cor.congruent_at_all_branches, cor.products_congruent, twist
                ));
            }
            text.push_str(&format!("verdict: {:?}\n", report.verdict));
            Ok(Outcome { stdout: text, code })
        }
        Cmd::Profile { input, branch, r } => {
            let f = read_expansion(input)?;
            let b = IdealBranch::new(f.p(), *branch)?;
            let prof = qexpansion::singular_profile(&f, &b, *r)?;
            if json {
                return Ok(Outcome::ok(to_json(&json!({
                    "profile": prof,
                    "p_rank_below": prof.p_rank_below(),
                    "p_rank_above": prof.p_rank_above(),
                }))));
            }
            let mut text = String::from("rank  min valuation\n");
            for (rho, v) in prof.by_rank.iter().enumerate() {
                text.push_str(&format!("{rho}  {v}\n"));
            }
            let show = |x: Option<usize>| x.map_or("none".to_string(), |v| v.to_string());
            text.push_str(&format!(
                "p-rank (lower ranks vanish): {}\np-rank (higher ranks vanish): {}\n",
                show(prof.p_rank_below()),
                show(prof.p_rank_above())
            ));
            Ok(Outcome::ok(text))
        }
        Cmd::Replay { manifest } => {
            let m: ExperimentManifest =
                serde_json::from_str(&read(manifest)?).map_err(|e| CliError::Usage(format!("{manifest}: {e}")))?;
            let lines = manifest::replay(&m).map_err(|source| CliError::Io { path: manifest.clone(), source })?;
            let all = lines.iter().all(|l| l.pass);
            let text = if json {
                to_json(&json!({"name": m.name, "results": lines, "pass": all}))
            } else {
                let mut t = format!("{}\n", m.name);
                for l in &lines {
                    t.push_str(&format!(
                        "{} expected {} got {}: scl {}\n",
                        if l.pass { "PASS" } else { "FAIL" },
                        l.expected,
                        l.actual,
                        l.args.join(" ")
                    ));
                }
                t
            };
            Ok(Outcome { stdout: text, code: if all { 0 } else { 3 } })
        }
    }
}

//! Command line surface and dispatch.

use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::{debug, info};

use dmod::bfun::{b_function, BPolynomial};
use dmod::groebner::Variant;
use dmod::homology::{free_resolution, Presentation};
use dmod::isomorphism::{d_invariants, defect_ideal, is_isomorphic, poincare_of_blocks, summand_test, IsoAnswer};
use dmod::solutions::{
    ext_basis, hom_b_function, hom_basis, is_solution, polynomial_solutions, rational_solutions, solution_module,
    yoneda_extension, HomMatrix, SolutionBasis,
};
use dmod::text::parse_weyl;
use dmod::weyl::Ctx;
use dmod::Q;

use crate::doc::{matrix_text, Extension, Payload, ResultDocument, Witness};
use crate::problem::{parse, ProblemFile};

#[derive(Parser, Debug)]
#[command(name = "dmod", version, about = "Solutions, Hom, Ext and isomorphism tests for holonomic D-modules")]
pub struct Cli {
    /// Print the result document as JSON
    #[arg(long, global = true)]
    pub json: bool,
    /// Re-check the invariants of the result; failures change only the exit status
    #[arg(long, global = true)]
    pub verify: bool,
    /// Largest pole order tried when lifting localized solutions
    #[arg(long, global = true, default_value_t = 50)]
    pub lift_cap: u32,
    /// Record wall time in the result document
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Inputs are `file.dmod` or `file.dmod:Name`.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polynomial solutions
    Polysol { input: String },
    /// Rational solutions, using the `loc` blocks of the module
    Ratsol { input: String },
    /// A basis of Hom(M, N)
    Hom {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
    },
    /// Cocycles spanning Ext^i(M, N), optionally with a Yoneda extension
    Ext {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
        #[arg(short, long, default_value_t = 1)]
        degree: usize,
        /// Coefficients of the extension class, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        kappa: Option<Vec<String>>,
    },
    /// Decide whether M and N are isomorphic
    Iso {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
    },
    /// Decide whether either module is a direct summand of the other
    Summand {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
    },
    /// The defect ideal of End(M)
    Defect { input: String },
    /// Block sizes from Betti numbers of the parameter variety
    Dinv {
        input: Option<String>,
        #[arg(long, value_delimiter = ',')]
        betti: Option<Vec<u64>>,
    },
    /// The b-function of a module, of its solution module, or of Hom(M, N)
    Bfunction {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<String>,
        /// Integration instead of restriction
        #[arg(long)]
        integration: bool,
        /// Use the dual module whose integration gives the polynomial solutions
        #[arg(long)]
        dual: bool,
        /// Weight only the first d variables
        #[arg(short = 'd', long)]
        vars: Option<usize>,
    },
    /// A free resolution
    Resolve {
        input: String,
        #[arg(long)]
        length: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}:{col}: {msg}")]
    Parse { path: String, line: usize, col: usize, msg: String },
    #[error("{0}")]
    Engine(#[from] dmod::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } => 2,
            CliError::Engine(e) => match e {
                dmod::Error::Parse { .. } => 2,
                dmod::Error::NotHolonomic => 3,
                dmod::Error::LocalizationRequired => 4,
                _ => 5,
            },
        }
    }
}

pub struct Outcome {
    pub doc: ResultDocument,
    /// Invariants that failed under `--verify`.
    pub failures: Vec<String>,
}

struct Input {
    label: String,
    file: ProblemFile,
    presentation: Presentation,
}

fn load(path: &str) -> Result<ProblemFile, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    parse(&src).map_err(|e| match e {
        dmod::Error::Parse { line, col, msg } => CliError::Parse { path: path.into(), line, col, msg },
        other => CliError::Engine(other),
    })
}

/// Splits `file:Name` unless the whole argument names an existing file.
fn split_ref(arg: &str) -> (&str, Option<&str>) {
    if Path::new(arg).exists() {
        return (arg, None);
    }
    match arg.rsplit_once(':') {
        Some((p, n)) if !n.is_empty() && !n.contains(['/', '\\']) => (p, Some(n)),
        _ => (arg, None),
    }
}

/// The modules named by `args`; a bare file contributes all of its modules,
/// or only the first when a single module is wanted.
fn inputs(args: &[String], want: usize) -> Result<Vec<Input>, CliError> {
    let mut out = Vec::new();
    for a in args {
        let (path, name) = split_ref(a);
        let file = load(path)?;
        let chosen: Vec<_> = match name {
            Some(n) => vec![file.module(n).ok_or_else(|| CliError::Usage(format!("{path}: no module '{n}'")))?.clone()],
            None if want == 1 => file.modules.first().cloned().into_iter().collect(),
            None => file.modules.clone(),
        };
        for m in chosen {
            out.push(Input { label: m.name.clone(), file: file.clone(), presentation: m.presentation });
        }
    }
    if out.len() != want {
        return Err(CliError::Usage(format!("expected {want} module(s), found {}", out.len())));
    }
    if out.iter().any(|i| i.presentation.ctx != out[0].presentation.ctx) {
        return Err(CliError::Usage("inputs are declared over different variables".into()));
    }
    Ok(out)
}

fn solutions_payload(b: &SolutionBasis) -> Payload {
    Payload::Solutions {
        dim: b.dim(),
        basis: b.elements.iter().map(|v| v.iter().map(|f| f.to_string()).collect()).collect(),
    }
}

fn check_solutions(p: &Presentation, b: &SolutionBasis, failures: &mut Vec<String>) -> Result<(), CliError> {
    for (k, v) in b.elements.iter().enumerate() {
        if !is_solution(p, v)? {
            failures.push(format!("basis element {} is not annihilated", k + 1));
        }
    }
    Ok(())
}

fn check_homs(hs: &[HomMatrix], what: &str, failures: &mut Vec<String>) -> Result<(), CliError> {
    for (k, h) in hs.iter().enumerate() {
        if !h.is_valid()? {
            failures.push(format!("{what} {} does not respect the relations", k + 1));
        }
    }
    Ok(())
}

fn parse_q(ctx: &Ctx, s: &str) -> Result<Q, CliError> {
    parse_weyl(ctx, s)?
        .as_constant()
        .ok_or_else(|| CliError::Usage(format!("kappa entry '{s}' is not a rational number")))
}

fn bfun_payload(b: &BPolynomial, variant: Variant) -> Payload {
    Payload::BFunction {
        variant: match variant {
            Variant::Restriction => "restriction".into(),
            Variant::Integration => "integration".into(),
        },
        factored: b.to_string(),
        coefficients: b.coeffs().iter().map(|c| c.to_string()).collect(),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (name, args, result) = match &cli.command {
        Command::Polysol { input } => {
            let m = inputs(std::slice::from_ref(input), 1)?.remove(0);
            info!("polynomial solutions of {}", m.label);
            let b = polynomial_solutions(&m.presentation)?;
            if cli.verify {
                check_solutions(&m.presentation, &b, &mut failures)?;
            }
            ("polysol", vec![input.clone()], solutions_payload(&b))
        }
        Command::Ratsol { input } => {
            let m = inputs(std::slice::from_ref(input), 1)?.remove(0);
            let locs = m.file.localizations_of(&m.label);
            info!("rational solutions of {} with {} localization(s)", m.label, locs.len());
            let b = rational_solutions(&m.presentation, &locs, cli.lift_cap)?;
            if cli.verify {
                check_solutions(&m.presentation, &b, &mut failures)?;
            }
            ("ratsol", vec![input.clone()], solutions_payload(&b))
        }
        Command::Hom { inputs: args } => {
            let v = inputs(args, 2)?;
            info!("Hom({}, {})", v[0].label, v[1].label);
            let hs = hom_basis(&v[0].presentation, &v[1].presentation)?;
            if cli.verify {
                check_homs(&hs, "map", &mut failures)?;
            }
            let matrices: Vec<_> = hs.iter().map(|h| matrix_text(&h.a)).collect();
            ("hom", args.clone(), Payload::Hom { dim: matrices.len(), matrices })
        }
        Command::Ext { inputs: args, degree, kappa } => {
            let v = inputs(args, 2)?;
            let (m, n) = (&v[0].presentation, &v[1].presentation);
            info!("Ext^{degree}({}, {})", v[0].label, v[1].label);
            let ext = ext_basis(m, n, *degree)?;
            let extension = match kappa {
                None => None,
                Some(ks) => {
                    if *degree == 0 {
                        return Err(CliError::Usage("extensions need degree at least 1".into()));
                    }
                    if ks.len() != ext.classes.len() {
                        return Err(CliError::Usage(format!(
                            "{} kappa values for {} classes",
                            ks.len(),
                            ext.classes.len()
                        )));
                    }
                    let kq = ks.iter().map(|s| parse_q(&m.ctx, s)).collect::<Result<Vec<_>, _>>()?;
                    let y = yoneda_extension(n, &ext, &kq)?;
                    if cli.verify {
                        let inc = HomMatrix { a: y.from_n.clone(), source: n.clone(), target: y.q.clone() };
                        check_homs(std::slice::from_ref(&inc), "inclusion", &mut failures)?;
                    }
                    Some(Extension {
                        kappa: kq.iter().map(|q| q.to_string()).collect(),
                        rank: y.q.rank,
                        relations: y.q.relations.iter().map(|r| r.entries.iter().map(|e| e.to_string()).collect()).collect(),
                        from_n: matrix_text(&y.from_n),
                    })
                }
            };
            if cli.verify && *degree > 0 {
                let d = *degree as i32;
                let gb = n.gb();
                let inc = ext.resolution.map(-d - 1);
                for (k, a) in ext.classes.iter().enumerate() {
                    if !inc.mul(a)?.row_vectors().iter().all(|r| gb.is_member(r)) {
                        failures.push(format!("class {} is not a cocycle", k + 1));
                    }
                }
            }
            let classes: Vec<_> = ext.classes.iter().map(matrix_text).collect();
            ("ext", args.clone(), Payload::Ext { degree: *degree, dim: classes.len(), classes, extension })
        }
        Command::Iso { inputs: args } => {
            let v = inputs(args, 2)?;
            info!("iso({}, {})", v[0].label, v[1].label);
            let ans = is_isomorphic(&v[0].presentation, &v[1].presentation, None)?;
            let payload = match ans {
                IsoAnswer::No => Payload::Iso { verdict: "No".into(), witness: None },
                IsoAnswer::Yes(w) => {
                    if cli.verify && !w.verify()? {
                        failures.push("witness compositions are not identities".into());
                    }
                    Payload::Iso {
                        verdict: "Yes".into(),
                        witness: Some(Witness { forward: matrix_text(&w.forward.a), inverse: matrix_text(&w.inverse.a) }),
                    }
                }
            };
            ("iso", args.clone(), payload)
        }
        Command::Summand { inputs: args } => {
            let v = inputs(args, 2)?;
            let (a, b) = summand_test(&v[0].presentation, &v[1].presentation)?;
            let payload = Payload::Summand {
                first: v[0].label.clone(),
                second: v[1].label.clone(),
                first_summand_of_second: a,
                second_summand_of_first: b,
            };
            ("summand", args.clone(), payload)
        }
        Command::Defect { input } => {
            let m = inputs(std::slice::from_ref(input), 1)?.remove(0);
            info!("defect ideal of End({})", m.label);
            let d = defect_ideal(&m.presentation, None)?;
            let vanish = d.augmented_minors().iter().all(|g| g.is_zero());
            if cli.verify && !vanish {
                failures.push("augmented minors do not vanish".into());
            }
            let payload = Payload::Defect {
                variables: (0..d.ctx.n()).map(|i| d.ctx.x_name(i)).collect(),
                generators: d.generators.iter().map(|g| g.to_string()).collect(),
                augmented_minors_vanish: vanish,
            };
            ("defect", vec![input.clone()], payload)
        }
        Command::Dinv { input, betti } => {
            let (bs, args) = match (input, betti) {
                (_, Some(b)) => (b.clone(), vec![]),
                (Some(path), None) => {
                    let f = load(path)?;
                    let b = f.betti.first().cloned().ok_or_else(|| CliError::Usage(format!("{path}: no betti list")))?;
                    (b, vec![path.clone()])
                }
                (None, None) => return Err(CliError::Usage("give a file with a betti list or --betti".into())),
            };
            let d = d_invariants(&bs)?;
            if cli.verify {
                let mut p = poincare_of_blocks(&d);
                let mut want = bs.clone();
                while p.last() == Some(&0) {
                    p.pop();
                }
                while want.last() == Some(&0) {
                    want.pop();
                }
                if p != want {
                    failures.push("blocks do not reproduce the Betti numbers".into());
                }
            }
            ("dinv", args, Payload::DInvariants { betti: bs, d })
        }
        Command::Bfunction { inputs: args, integration, dual, vars } => {
            let variant = if *integration { Variant::Integration } else { Variant::Restriction };
            let payload = if args.len() == 2 {
                let v = inputs(args, 2)?;
                let b = hom_b_function(&v[0].presentation, &v[1].presentation)?
                    .ok_or_else(|| CliError::Usage("Hom(M, N) is zero".into()))?;
                bfun_payload(&b, Variant::Restriction)
            } else {
                let m = inputs(args, 1)?.remove(0);
                let p = if *dual {
                    solution_module(&m.presentation)?.ok_or_else(|| CliError::Usage("the dual module is zero".into()))?
                } else {
                    m.presentation
                };
                let d = vars.unwrap_or(p.ctx.n());
                if d == 0 || d > p.ctx.n() {
                    return Err(CliError::Usage(format!("-d must lie in 1..={}", p.ctx.n())));
                }
                let b = b_function(&p, d, &vec![0; p.rank], variant)?;
                bfun_payload(&b, variant)
            };
            ("bfunction", args.clone(), payload)
        }
        Command::Resolve { input, length } => {
            let m = inputs(std::slice::from_ref(input), 1)?.remove(0);
            let len = length.unwrap_or(m.presentation.ctx.n() + 1);
            let x = free_resolution(&m.presentation, len);
            if cli.verify && !x.composes_to_zero() {
                failures.push("consecutive maps do not compose to zero".into());
            }
            let payload = Payload::Resolution {
                lo: x.lo,
                ranks: x.ranks.clone(),
                shifts: x.shifts.clone(),
                maps: x.maps.iter().map(matrix_text).collect(),
            };
            ("resolve", vec![input.clone()], payload)
        }
    };
    let mut doc = ResultDocument::new(name, args, result);
    let elapsed = start.elapsed();
    debug!("{name} finished in {elapsed:?}");
    if cli.timing {
        doc.elapsed_ms = Some(elapsed.as_millis() as u64);
    }
    Ok(Outcome { doc, failures })
}

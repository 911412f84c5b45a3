//! Subcommands. Numeric inputs are inline JSON or `@path` to a JSON file.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rowcol_banach::{c_invariant, isometric, make_phi, phi_fn, weak_sup_check, BanachFrame, DEFAULT_ISOMETRY_TOL};
use rowcol_cbnorm::{cb_norm_diag_identity, cb_norm_general};
use rowcol_linalg::{ComplexMatrix, SingularSpectrum};
use rowcol_seqlab::{
    b_epsilon, base_sequence, borel2_phi, dominates, n_map, replay_domination, replay_equivalence, replay_star,
    seq_equivalent, star_equiv, y_map, AngleMode, BitSeq, GenIntSeq, IndexPartition, XiPoint,
};
use rowcol_subspaces::{
    canonical_basis, canonical_map_norms, noncomplemented_bound, not_subbasis_certificate, restricted_spectrum,
    subbasis_embed, subsequence_distortion, wielandt_check, FrameSpec, SplitCase, SubbasisSchedule, SubspaceFrame,
};
use rowcol_xspace::{concrete_rep_norm, norm_parts, xd_norm, MatElement, WeightSequence};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{run_criterion, CRITERIA};
use crate::report::{Format, RunReport};
use crate::{derive_seed, CliError, EXIT_OK, EXIT_VERIFY};

#[derive(Debug, Parser)]
#[command(name = "rowcol", version, about = "Weighted row/column operator spaces: norms, reductions and certificates")]
pub struct Cli {
    /// Master seed; stochastic tasks hash it with the subcommand path.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of an element of M_n(X(α)).
    Norm {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        element: String,
    },
    /// cb-norm of the formal identity X(α) → X(β), or of a map given by --map.
    Cbnorm {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        depth: u64,
        /// Matrix of the map in the canonical bases.
        #[arg(long)]
        map: Option<String>,
    },
    /// Whether β dominates α up to a constant.
    SeqDom(RatioArgs),
    /// Whether α and β are equivalent.
    SeqEquiv(RatioArgs),
    /// Whether two integer sequences are star-related.
    StarEquiv {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1000)]
        depth: u64,
        #[arg(long = "k-max", default_value_t = 16)]
        k_max: u64,
    },
    /// Integer sequence n attached to a spectrum.
    ReduceN {
        /// Nonincreasing singular values as a JSON array.
        #[arg(long)]
        spectrum: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Angles of the subspace attached to an integer sequence.
    ReduceY {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        spectrum: String,
        #[arg(long)]
        depth: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Centered)]
        mode: ModeArg,
    },
    /// Image of a point of the discrepancy space under the block reduction.
    ReducePhi {
        /// The point, as {"prefix": [...], "tail": ...}.
        #[arg(long)]
        xi: String,
        /// Base integer sequence.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        depth: u64,
    },
    /// The point b_ε for a bit sequence ε.
    BEpsilon {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        depth: u64,
    },
    /// Singular values of A restricted to a subspace, with interlacing.
    SubspaceSpectrum {
        #[arg(long)]
        frame: String,
    },
    /// Minimax check on random chains of subspaces.
    Wielandt {
        #[arg(long)]
        frame: String,
        /// 1-based strictly increasing indices as a JSON array.
        #[arg(long)]
        indices: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Canonical basis attached to a basis of a subspace.
    CanonicalBasis {
        #[arg(long)]
        frame: String,
        /// Basis vectors as ambient columns (matrix JSON); defaults to the frame's own.
        #[arg(long)]
        basis: Option<String>,
    },
    /// Embedding of a subspace into a subsequence of the canonical basis.
    Subbasis {
        /// Frame whose ambient weights are replaced by the schedule.
        #[arg(long)]
        frame: String,
        #[arg(long, default_value_t = 1.5)]
        a: f64,
        #[arg(long, default_value_t = 3)]
        ratio: u64,
    },
    /// Lower bound for projections onto span[f_i].
    Noncomplemented {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 0)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// Distortion bounds for maps onto subsequences of the basis.
    Distortion {
        #[arg(long)]
        n: u32,
        #[arg(long = "case", value_enum)]
        case: Option<CaseArg>,
    },
    /// The invariant c(Y) and φ(c(Y)).
    BanachC(BanachArgs),
    /// Isometry decision for two subspaces.
    BanachIsometric {
        #[command(flatten)]
        first: BanachArgs,
        #[arg(long)]
        other: Option<String>,
        #[arg(long = "other-phi-t")]
        other_phi_t: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Runs the acceptance suites.
    Verify {
        /// Criterion numbers to run, comma separated; all when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long, default_value_t = 1000)]
    depth: u64,
    #[arg(long = "k-max", default_value_t = 64)]
    k_max: u64,
}

#[derive(Debug, Args)]
pub struct BanachArgs {
    #[arg(long)]
    frame: Option<String>,
    /// Use the frame Φ(t) instead of --frame.
    #[arg(long = "phi-t")]
    phi_t: Option<f64>,
    #[arg(long, default_value_t = 50)]
    dim: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Centered,
    Literal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CaseArg {
    Inside,
    Outside,
}

type Res<T> = std::result::Result<T, CliError>;

fn pre<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> Res<T> {
    r.map_err(|e| CliError::Precondition(e.to_string()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize to JSON")
}

/// Inline JSON, or `@path` naming a JSON file.
fn load<T: DeserializeOwned>(flag: &str, raw: &str) -> Res<(T, Value)> {
    let text = match raw.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("--{flag}: cannot read {path}: {e}")))?,
        None => raw.to_string(),
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("--{flag}: {e}")))?;
    let parsed = serde_json::from_value(value.clone()).map_err(|e| CliError::Parse(format!("--{flag}: {e}")))?;
    Ok((parsed, value))
}

fn set(target: &mut Value, key: &str, v: Value) {
    target.as_object_mut().expect("report sections are objects").insert(key.to_string(), v);
}

fn banach_frame(args: &BanachArgs, inputs: &mut Value, prefix: &str) -> Res<BanachFrame> {
    match (&args.frame, args.phi_t) {
        (Some(raw), None) => {
            let (f, v) = load::<BanachFrame>("frame", raw)?;
            set(inputs, &format!("{prefix}frame"), v);
            Ok(f)
        }
        (None, Some(t)) => {
            set(inputs, &format!("{prefix}phi_t"), json!(t));
            set(inputs, "dim", json!(args.dim));
            pre(make_phi(t, args.dim))
        }
        _ => Err(CliError::Usage("give exactly one of --frame and --phi-t".into())),
    }
}

pub(crate) fn execute(cli: &Cli) -> Res<(RunReport, i32, String)> {
    let name = command_name(&cli.command);
    let mut r = RunReport::new(name, cli.seed);
    let mut code = EXIT_OK;
    let mut log = String::new();
    let task_seed = derive_seed(cli.seed, name);
    match &cli.command {
        Command::Norm { alpha, element } => {
            let (a, av) = load::<WeightSequence>("alpha", alpha)?;
            let (x, xv) = load::<MatElement>("element", element)?;
            r.inputs = json!({"alpha": av, "element": xv});
            let value = pre(xd_norm(&a, &x))?;
            r.outputs = json!({"value": value, "parts": to_value(&pre(norm_parts(&a, &x))?)});
            r.certificates = json!({"concrete_rep_norm": pre(concrete_rep_norm(&a, &x))?});
        }
        Command::Cbnorm { alpha, beta, depth, map } => {
            let (a, av) = load::<WeightSequence>("alpha", alpha)?;
            let (b, bv) = load::<WeightSequence>("beta", beta)?;
            r.inputs = json!({"alpha": av, "beta": bv, "depth": depth});
            let result = match map {
                None => pre(cb_norm_diag_identity(&a, &b, *depth))?,
                Some(raw) => {
                    let (t, tv) = load::<ComplexMatrix>("map", raw)?;
                    set(&mut r.inputs, "map", tv);
                    let da = ComplexMatrix::diag_real(&pre(a.materialize(*depth))?);
                    let db = ComplexMatrix::diag_real(&pre(b.materialize(*depth))?);
                    pre(cb_norm_general(&da, &db, &t))?
                }
            };
            r.certificates = json!({"witness": to_value(&result.witness), "certified": result.certified});
            r.outputs = to_value(&result);
        }
        Command::SeqDom(args) | Command::SeqEquiv(args) => {
            let (a, av) = load::<WeightSequence>("alpha", &args.alpha)?;
            let (b, bv) = load::<WeightSequence>("beta", &args.beta)?;
            r.inputs = json!({"alpha": av, "beta": bv, "depth": args.depth, "k_max": args.k_max});
            let dom = matches!(cli.command, Command::SeqDom(_));
            let v = if dom { pre(dominates(&a, &b, args.depth, args.k_max))? } else { pre(seq_equivalent(&a, &b, args.depth, args.k_max))? };
            if let Some(w) = v.witness() {
                let replay = if dom { replay_domination(&a, &b, w, args.depth) } else { replay_equivalence(&a, &b, w, args.depth) };
                r.certificates = json!({"replay": pre(replay)?});
            }
            r.outputs = to_value(&v);
        }
        Command::StarEquiv { beta, gamma, depth, k_max } => {
            let (b, bv) = load::<GenIntSeq>("beta", beta)?;
            let (g, gv) = load::<GenIntSeq>("gamma", gamma)?;
            r.inputs = json!({"beta": bv, "gamma": gv, "depth": depth, "k_max": k_max});
            let v = pre(star_equiv(&b, &g, *depth, *k_max))?;
            if let Some(w) = v.witness() {
                r.certificates = json!({"replay": pre(replay_star(&b, &g, w, *depth))?});
            }
            r.outputs = to_value(&v);
        }
        Command::ReduceN { spectrum, depth } => {
            let (vals, sv) = load::<Vec<f64>>("spectrum", spectrum)?;
            let s = pre(SingularSpectrum::new(vals))?;
            let d = depth.unwrap_or(s.len());
            r.inputs = json!({"spectrum": sv, "depth": d});
            r.outputs = json!({"n": to_value(&pre(base_sequence(&s, d))?)});
        }
        Command::ReduceY { beta, spectrum, depth, mode } => {
            let (b, bv) = load::<GenIntSeq>("beta", beta)?;
            let (vals, sv) = load::<Vec<f64>>("spectrum", spectrum)?;
            let s = pre(SingularSpectrum::new(vals))?;
            let mode = match mode {
                ModeArg::Centered => AngleMode::Centered,
                ModeArg::Literal => AngleMode::Literal,
            };
            r.inputs = json!({"beta": bv, "spectrum": sv, "depth": depth, "mode": to_value(&mode)});
            let angles = pre(y_map(&b, &s, *depth, mode))?;
            // A|_Y is diagonal in the frame: its singular values are s_i sin φ_i.
            let restricted: Vec<f64> = angles.iter().map(|a| s.get(a.i as usize) * a.sin).collect();
            let spec = pre(SingularSpectrum::from_unsorted(restricted))?;
            let recovered = (1..=*depth as usize).map(|k| pre(n_map(&spec, k))).collect::<Res<Vec<_>>>()?;
            r.outputs = json!({"angles": to_value(&angles)});
            r.certificates = json!({"restricted_spectrum": spec.values(), "n_of_restriction": to_value(&recovered)});
        }
        Command::ReducePhi { xi, alpha, depth } => {
            let (x, xv) = load::<XiPoint>("xi", xi)?;
            let (a, av) = load::<GenIntSeq>("alpha", alpha)?;
            r.inputs = json!({"xi": xv, "alpha": av, "depth": depth});
            let image = pre(borel2_phi(&x, &a, *depth))?;
            pre(image.check_dominates_base(&a, *depth))?;
            r.outputs = json!({"image": to_value(&image)});
            r.certificates = json!({"dominates_base": true});
        }
        Command::BEpsilon { eps, partition, depth } => {
            let (e, ev) = load::<BitSeq>("eps", eps)?;
            let (p, pv) = match partition {
                Some(raw) => load::<IndexPartition>("partition", raw)?,
                None => (IndexPartition::TwoAdic, to_value(&IndexPartition::TwoAdic)),
            };
            r.inputs = json!({"eps": ev, "partition": pv, "depth": depth});
            r.outputs = json!({"point": to_value(&pre(b_epsilon(&e, &p, *depth))?)});
        }
        Command::SubspaceSpectrum { frame } => {
            let (spec, fv) = load::<FrameSpec>("frame", frame)?;
            let y = pre(SubspaceFrame::from_spec(&spec))?;
            r.inputs = json!({"frame": fv});
            let s = pre(restricted_spectrum(&y))?;
            r.outputs = json!({"spectrum": s.values(), "dim": y.dim()});
            r.certificates = json!({"ambient": y.ambient_spectrum(), "interlacing_defect": y.interlacing_defect(&s)});
        }
        Command::Wielandt { frame, indices, trials, tol } => {
            let (spec, fv) = load::<FrameSpec>("frame", frame)?;
            let (idx, iv) = load::<Vec<usize>>("indices", indices)?;
            let y = pre(SubspaceFrame::from_spec(&spec))?;
            let tol = tol.unwrap_or(1e-9);
            r.inputs = json!({"frame": fv, "indices": iv, "trials": trials, "task_seed": task_seed, "tol": tol});
            let rep = pre(wielandt_check(&y, &idx, *trials, task_seed))?;
            r.certificates = json!({
                "oracle_below_closed_form": rep.best_oracle <= rep.closed_form + tol,
                "singular_chain_attains": (rep.singular_chain - rep.closed_form).abs() <= tol,
            });
            r.outputs = to_value(&rep);
        }
        Command::CanonicalBasis { frame, basis } => {
            let (spec, fv) = load::<FrameSpec>("frame", frame)?;
            let y = pre(SubspaceFrame::from_spec(&spec))?;
            r.inputs = json!({"frame": fv});
            let b = match basis {
                Some(raw) => {
                    let (m, mv) = load::<ComplexMatrix>("basis", raw)?;
                    set(&mut r.inputs, "basis", mv);
                    Some(m)
                }
                None => None,
            };
            let cb = pre(canonical_basis(&y, b.as_ref()))?;
            r.certificates = match canonical_map_norms(&y, &cb) {
                Ok(n) => to_value(&n),
                Err(e) => json!({"unavailable": e.to_string()}),
            };
            r.outputs = to_value(&cb);
        }
        Command::Subbasis { frame, a, ratio } => {
            let (mut spec, fv) = load::<FrameSpec>("frame", frame)?;
            let sched = pre(SubbasisSchedule::new(*a, *ratio))?;
            spec.ambient = sched.weights();
            let y = pre(SubspaceFrame::from_spec(&spec))?;
            r.inputs = json!({"frame": fv, "a": a, "ratio": ratio});
            let emb = pre(subbasis_embed(&sched, &y))?;
            r.certificates = json!({"distortion_at_most_a": emb.distortion <= sched.a + 1e-8, "certified": emb.certified});
            r.outputs = to_value(&emb);
        }
        Command::Noncomplemented { alpha, beta, k, n } => {
            let (a, av) = load::<WeightSequence>("alpha", alpha)?;
            let (b, bv) = load::<WeightSequence>("beta", beta)?;
            r.inputs = json!({"alpha": av, "beta": bv, "k": k, "n": n});
            let bound = pre(noncomplemented_bound(&a, &b, *k, *n))?;
            r.certificates = json!({"divergence": to_value(&bound.divergence)});
            r.outputs = to_value(&bound);
        }
        Command::Distortion { n, case } => {
            r.inputs = json!({"n": n});
            let cases: Vec<SplitCase> = match case {
                Some(CaseArg::Inside) => vec![SplitCase::Inside],
                Some(CaseArg::Outside) => vec![SplitCase::Outside],
                None => vec![SplitCase::Inside, SplitCase::Outside],
            };
            let bounds = cases.iter().map(|&c| pre(subsequence_distortion(*n, c))).collect::<Res<Vec<_>>>()?;
            r.outputs = json!({"bounds": to_value(&bounds)});
            if case.is_none() {
                r.certificates = json!({"not_subbasis": pre(not_subbasis_certificate(*n))?});
            }
        }
        Command::BanachC(args) => {
            let y = banach_frame(args, &mut r.inputs, "")?;
            let inv = pre(c_invariant(&y))?;
            r.outputs = json!({"c": inv.c, "phi_c": pre(phi_fn(inv.c))?});
            let mut cert = json!({"maximizer": inv.maximizer, "slice_min": inv.slice_min});
            if let Ok(w) = weak_sup_check(&y) {
                set(&mut cert, "weak_sup", to_value(&w));
            }
            r.certificates = cert;
        }
        Command::BanachIsometric { first, other, other_phi_t, tol } => {
            let y = banach_frame(first, &mut r.inputs, "")?;
            let second = BanachArgs { frame: other.clone(), phi_t: *other_phi_t, dim: first.dim };
            let z = banach_frame(&second, &mut r.inputs, "other_")?;
            let tol = tol.unwrap_or(DEFAULT_ISOMETRY_TOL);
            set(&mut r.inputs, "tol", json!(tol));
            let v = pre(isometric(&y, &z, tol))?;
            r.outputs = json!({"isometric": v.isometric});
            r.certificates = json!({"c_y": v.c_y, "c_z": v.c_z, "gap": (v.c_y - v.c_z).abs()});
        }
        Command::Verify { only } => {
            let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only.clone() };
            if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
                return Err(CliError::Usage(format!("no criterion {bad}")));
            }
            r.inputs = json!({"criteria": ids});
            let mut results = Vec::new();
            for id in ids {
                let o = run_criterion(id, cli.seed);
                log.push_str(&o.line());
                log.push('\n');
                if !o.passed {
                    code = EXIT_VERIFY;
                }
                results.push(o);
            }
            r.outputs = json!({"all_passed": code == EXIT_OK, "criteria": to_value(&results)});
        }
    }
    Ok((r, code, log))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Norm { .. } => "norm",
        Command::Cbnorm { .. } => "cbnorm",
        Command::SeqDom(_) => "seq-dom",
        Command::SeqEquiv(_) => "seq-equiv",
        Command::StarEquiv { .. } => "star-equiv",
        Command::ReduceN { .. } => "reduce-n",
        Command::ReduceY { .. } => "reduce-y",
        Command::ReducePhi { .. } => "reduce-phi",
        Command::BEpsilon { .. } => "b-epsilon",
        Command::SubspaceSpectrum { .. } => "subspace-spectrum",
        Command::Wielandt { .. } => "wielandt",
        Command::CanonicalBasis { .. } => "canonical-basis",
        Command::Subbasis { .. } => "subbasis",
        Command::Noncomplemented { .. } => "noncomplemented",
        Command::Distortion { .. } => "distortion",
        Command::BanachC(_) => "banach-c",
        Command::BanachIsometric { .. } => "banach-isometric",
        Command::Verify { .. } => "verify",
    }
}

//! Subcommand handlers. Each returns the text for stdout and an exit code.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sharp_order::commutant::DeltaSampler;
use sharp_order::equations::{count_solutions_for_matrix, ep_solution_members, solve_jordan_commuting_projectors};
use sharp_order::ginv::{group_inverse, moore_penrose};
use sharp_order::hs::hs_decompose;
use sharp_order::jordan::{nonzero_structure, similarity_to_jordan, validate_similarity};
use sharp_order::json::{hs_to_json, matrix_from_json, matrix_to_json, parse_rational, spec_to_json, AnyMatrix, JsonScalar};
use sharp_order::lattice::{boolean_center, classify_downset, max_chain, meet_in_c2, non_lattice_witness, strict_intermediates_sampled};
use sharp_order::linalg::rank;
use sharp_order::oracle::{brute_common_lower_bounds, enumerate_index1_jobs, verify_glb, DEFAULT_BUDGET};
use sharp_order::order::{conjecture_refutation, phi_inv, psi, sharp_leq};
use sharp_order::{
    Error, ExactMatrix, ExactScalar, FamilyKind, FloatMatrix, FloatScalar64, JordanSpec, Matrix, Rational, Scalar,
    Tolerance,
};

use crate::hasse;
use crate::input::{read_json, read_matrix, read_spec, AnySpec, CliError, CliResult};
use crate::{CheckKind, Command, DecomposeKind, DownsetKind, EquationsKind, Global, InverseKind, OracleKind, RefuteKind, WitnessKind};

pub struct Output {
    pub text: String,
    pub exit: i32,
}

fn emit(v: Value) -> CliResult<Output> {
    emit_with(v, 0)
}

fn emit_with(v: Value, exit: i32) -> CliResult<Output> {
    let mut text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    text.push('\n');
    Ok(Output { text, exit })
}

macro_rules! each_matrix {
    ($m:expr, $x:ident => $body:expr) => {
        match $m {
            AnyMatrix::Exact($x) => $body,
            AnyMatrix::Float($x) => $body,
        }
    };
}

macro_rules! each_spec {
    ($s:expr, $x:ident => $body:expr) => {
        match $s {
            AnySpec::Exact($x) => $body,
            AnySpec::Float($x) => $body,
        }
    };
}

fn tolerance(g: &Global) -> CliResult<Tolerance> {
    let base = Tolerance::default();
    Ok(Tolerance::new(
        g.tol.unwrap_or(base.rel),
        g.rank_tol.unwrap_or(base.rank_threshold_factor),
    )?)
}

pub fn run(command: &Command, g: &Global) -> CliResult<Output> {
    let tol = tolerance(g)?;
    match command {
        Command::Decompose { kind: DecomposeKind::Hs { input } } => {
            let b = read_matrix(input)?.to_float();
            emit(hs_to_json(&hs_decompose(&b, &tol)?))
        }
        Command::Inverse { kind } => {
            let (input, group) = match kind {
                InverseKind::Group { input } => (input, true),
                InverseKind::Mp { input } => (input, false),
            };
            let m = read_matrix(input)?;
            each_matrix!(&m, a => {
                let x = if group { group_inverse(a, &tol)? } else { moore_penrose(a, &tol) };
                emit(matrix_to_json(&x))
            })
        }
        Command::Check { kind: CheckKind::Order { a, b } } => {
            let leq = match (read_matrix(a)?, read_matrix(b)?) {
                (AnyMatrix::Exact(a), AnyMatrix::Exact(b)) => sharp_leq(&a, &b, &tol)?,
                (a, b) => sharp_leq(&a.to_float(), &b.to_float(), &tol)?,
            };
            emit_with(json!({ "leq": leq }), if leq { 0 } else { 1 })
        }
        Command::Downset { kind } => downset(kind, g, &tol),
        Command::Witness { kind: WitnessKind::Nonlattice { spec, screen } } => {
            let spec = read_spec(spec, &tol)?;
            each_spec!(&spec, s => witness(s, *screen, g.seed, &tol))
        }
        Command::Refute { kind: RefuteKind::Conjecture } => {
            let r = conjecture_refutation::<ExactScalar>();
            emit(json!({
                "B": matrix_to_json(&r.b),
                "A": matrix_to_json(&r.a),
                "leq": r.leq,
                "diagonal_form": r.diagonal_form,
                "forms_checked": r.forms_checked,
                "refutes": r.refutes(),
            }))
        }
        Command::Meet2 { b1, b2 } => {
            let meet = match (read_matrix(b1)?, read_matrix(b2)?) {
                (AnyMatrix::Exact(x), AnyMatrix::Exact(y)) => AnyMatrix::Exact(meet_in_c2(&x, &y)?),
                (x, y) => AnyMatrix::Float(meet_in_c2(&x.to_float(), &y.to_float())?),
            };
            emit(meet.to_json())
        }
        Command::Equations { kind } => equations(kind, g, &tol),
        Command::Hasse { spec, out, antichain_samples } => {
            let spec = read_spec(spec, &tol)?;
            let dot = each_spec!(&spec, s => hasse::render(s, *antichain_samples, g.seed, &tol)?);
            match out {
                Some(path) => {
                    fs::write(path, dot).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    Ok(Output { text: String::new(), exit: 0 })
                }
                None => Ok(Output { text: dot, exit: 0 }),
            }
        }
        Command::Oracle { kind } => oracle(kind, g),
    }
}

fn matrices_json<S: JsonScalar>(ms: &[Matrix<S>]) -> Value {
    Value::Array(ms.iter().map(matrix_to_json).collect())
}

/// `B` in float mode with the float spec of its core; any `P` in the spec
/// refers to a basis the caller cannot know, so it is dropped.
fn float_pair(b: &Path, spec: &Path, tol: &Tolerance) -> CliResult<(FloatMatrix, JordanSpec<FloatScalar64>)> {
    let b = read_matrix(b)?.to_float();
    let spec = read_spec(spec, tol)?.to_float().without_similarity();
    Ok((b, spec))
}

fn downset(kind: &DownsetKind, g: &Global, tol: &Tolerance) -> CliResult<Output> {
    match kind {
        DownsetKind::Classify { spec } => {
            let spec = read_spec(spec, tol)?;
            let d = each_spec!(&spec, s => classify_downset(s));
            emit(serde_json::to_value(d).expect("descriptor serializes"))
        }
        DownsetKind::Boolean { b, spec } => {
            let (b, spec) = float_pair(b, spec, tol)?;
            let hs = hs_decompose(&b, tol)?;
            if spec.r() != hs.r {
                return Err(Error::ShapeMismatch(format!("spec has dimension {} but rank is {}", spec.r(), hs.r)).into());
            }
            let p = similarity_to_jordan(&hs.sigma_k(), &spec, g.seed, tol)?;
            let preds = boolean_center(&spec)
                .iter()
                .map(|c| phi_inv(&psi(c.matrix(), &p, tol)?, &hs, tol))
                .collect::<sharp_order::Result<Vec<_>>>()?;
            emit(matrices_json(&preds))
        }
        DownsetKind::Sample { spec, count } => {
            let spec = read_spec(spec, tol)?;
            each_spec!(&spec, s => {
                let mut sampler = DeltaSampler::new(s, g.seed);
                let samples: Vec<Value> = (0..*count)
                    .map(|_| {
                        let t = sampler.sample();
                        json!({ "rank": t.rank(tol), "matrix": matrix_to_json(t.matrix()) })
                    })
                    .collect();
                emit(json!({ "spec": spec_to_json(s), "samples": samples }))
            })
        }
        DownsetKind::Chain { b, spec } => {
            let (b, spec) = float_pair(b, spec, tol)?;
            let hs = hs_decompose(&b, tol)?;
            emit(matrices_json(&max_chain(&hs, &spec, tol)?))
        }
    }
}

fn witness<S: JsonScalar>(spec: &JordanSpec<S>, screen: usize, seed: u64, tol: &Tolerance) -> CliResult<Output> {
    let w = non_lattice_witness(spec, tol)?;
    let found = strict_intermediates_sampled(spec, &w.t[1], &w.t[2], screen, seed, tol);
    emit(json!({
        "eigenvalue": w.eigenvalue,
        "T": matrices_json(&w.t),
        "checks": serde_json::to_value(&w.checks).expect("checks serialize"),
        "verified": w.checks.all(),
        "screen": { "samples": screen, "strict_intermediates_t2_t3": found },
    }))
}

/// `B` and its core spec in a common mode.
enum Pair {
    Exact(ExactMatrix, JordanSpec<ExactScalar>),
    Float(FloatMatrix, JordanSpec<FloatScalar64>),
}

fn is_triangular<S: Scalar>(m: &Matrix<S>) -> bool {
    let n = m.rows();
    let upper = (0..n).all(|i| (0..i).all(|j| m[(i, j)].is_zero()));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| m[(i, j)].is_zero()));
    upper || lower
}

fn resolve(b: &Path, spec: Option<&Path>, tol: &Tolerance) -> CliResult<Pair> {
    let b = read_matrix(b)?;
    match (b, spec) {
        (b, Some(spec)) => match (b, read_spec(spec, tol)?) {
            (AnyMatrix::Exact(b), AnySpec::Exact(s)) => Ok(Pair::Exact(b, s)),
            (b, s) => Ok(Pair::Float(b.to_float(), s.to_float())),
        },
        (AnyMatrix::Exact(b), None) if b.is_square() && is_triangular(&b) => {
            let diagonal: Vec<ExactScalar> = (0..b.rows()).map(|i| b[(i, i)].clone()).collect();
            let spec = nonzero_structure(&b, &diagonal)?;
            Ok(Pair::Exact(b, spec))
        }
        _ => Err(Error::PrecondViolated("--spec is required unless B is exact and triangular".into()).into()),
    }
}

/// All projectors commuting with a nonsingular `B`.
fn nonsingular_family<S: JsonScalar>(
    b: &Matrix<S>,
    spec: &JordanSpec<S>,
    count: usize,
    seed: u64,
    tol: &Tolerance,
) -> CliResult<Value> {
    let p = match spec.similarity() {
        Some(p) if validate_similarity(p, spec, b, tol) => p.clone(),
        Some(_) => return Err(Error::SimilarityMismatch("P J P⁻¹ differs from B".into()).into()),
        None => similarity_to_jordan(b, spec, seed, tol)?,
    };
    let family = solve_jordan_commuting_projectors(&p, spec, tol)?;
    let (r, c) = family.free_part_shape;
    let mut out = json!({
        "kind": serde_json::to_value(family.kind).expect("kind serializes"),
        "count": family.finite_count,
        "free_part_shape": [r, c],
        "members": family.members.as_deref().map(matrices_json),
    });
    if family.members.is_none() {
        out["samples"] = matrices_json(&family.sample(seed, count, tol)?);
    }
    Ok(out)
}

fn singular_family(b: &FloatMatrix, spec: &JordanSpec<FloatScalar64>, tol: &Tolerance) -> CliResult<Value> {
    let hs = hs_decompose(b, tol)?;
    let members = ep_solution_members(&hs, &spec.without_similarity(), tol)?;
    Ok(json!({
        "kind": serde_json::to_value(FamilyKind::EpCommuteIdempotent).expect("kind serializes"),
        "count": members.len(),
        "members": matrices_json(&members),
    }))
}

fn equations(kind: &EquationsKind, g: &Global, tol: &Tolerance) -> CliResult<Output> {
    match kind {
        EquationsKind::Count { b, spec } => {
            let count = match resolve(b, spec.as_deref(), tol)? {
                Pair::Exact(b, s) => count_solutions_for_matrix(&b, &s, tol)?,
                Pair::Float(b, s) => count_solutions_for_matrix(&b, &s, tol)?,
            };
            emit(json!({ "count": count }))
        }
        EquationsKind::Solve { b, spec, count } => {
            let pair = resolve(b, spec.as_deref(), tol)?;
            let nonsingular = match &pair {
                Pair::Exact(b, _) => rank(b, tol) == b.require_square()?,
                Pair::Float(b, _) => rank(b, tol) == b.require_square()?,
            };
            let v = match (pair, nonsingular) {
                (Pair::Exact(b, s), true) => nonsingular_family(&b, &s, *count, g.seed, tol)?,
                (Pair::Float(b, s), true) => nonsingular_family(&b, &s, *count, g.seed, tol)?,
                (Pair::Exact(b, s), false) => singular_family(&b.to_c64(), &s.convert(Scalar::to_c64), tol)?,
                (Pair::Float(b, s), false) => singular_family(&b, &s, tol)?,
            };
            emit(v)
        }
    }
}

fn parse_grid(grid: &[String]) -> CliResult<Vec<ExactScalar>> {
    if grid.is_empty() {
        return Err(Error::Parse("--grid needs at least one value".into()).into());
    }
    grid.iter()
        .map(|s| Ok(ExactScalar::new(Rational::from(parse_rational(s)?), Rational::from_integer(0))))
        .collect()
}

fn read_exact(path: &Path) -> CliResult<ExactMatrix> {
    Ok(matrix_from_json(&read_json(path)?)?)
}

fn oracle(kind: &OracleKind, g: &Global) -> CliResult<Output> {
    match kind {
        OracleKind::Enumerate { n, grid, list } => {
            let grid = parse_grid(grid)?;
            let all = enumerate_index1_jobs(*n, &grid, DEFAULT_BUDGET, g.jobs)?;
            let mut out = json!({
                "n": n,
                "grid": grid.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "count": all.len(),
            });
            if *list {
                out["matrices"] = matrices_json(&all);
            }
            emit(out)
        }
        OracleKind::Glb { b1, b2, grid } => {
            let grid = parse_grid(grid)?;
            let (b1, b2) = (read_exact(b1)?, read_exact(b2)?);
            let meet = meet_in_c2(&b1, &b2)?;
            let universe = enumerate_index1_jobs(2, &grid, DEFAULT_BUDGET, g.jobs)?;
            emit(json!({
                "meet": matrix_to_json(&meet),
                "common_lower_bounds": brute_common_lower_bounds(&b1, &b2, &universe).len(),
                "verified": verify_glb(&meet, &b1, &b2, &universe),
            }))
        }
    }
}

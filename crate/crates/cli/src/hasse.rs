//! DOT rendering of the finite skeleton of a down-set: the Boolean centre
//! plus sampled representatives of each intermediate rank class of the
//! factors with several Jordan blocks.

use std::fmt::Write;

use sharp_order::commutant::{proj_leq, DeltaSampler};
use sharp_order::lattice::boolean_center;
use sharp_order::linalg::approx_eq;
use sharp_order::{Error, JordanSpec, Matrix, Result, Scalar, Tolerance};

pub const MAX_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Bottom,
    Top,
    Center,
    Antichain,
    Ellipsis,
}

impl Role {
    fn name(self) -> &'static str {
        match self {
            Role::Bottom => "bottom",
            Role::Top => "top",
            Role::Center => "center",
            Role::Antichain => "antichain",
            Role::Ellipsis => "ellipsis",
        }
    }
}

struct Node<S> {
    role: Role,
    rank: usize,
    /// Eigenvalue index for antichain and ellipsis nodes.
    eigenvalue: Option<usize>,
    /// `None` for ellipsis nodes.
    matrix: Option<Matrix<S>>,
}

/// Rank classes of one factor, each with the block choices that reach it.
type RankClasses = Vec<(usize, Vec<Vec<bool>>)>;

/// Ranks strictly between `0` and `dim` reachable as sums of block sizes,
/// each with the block choices that reach it.
fn rank_classes(sizes: &[usize]) -> RankClasses {
    let dim: usize = sizes.iter().sum();
    let mut classes: RankClasses = Vec::new();
    for mask in 1..(1usize << sizes.len()) - 1 {
        let choice: Vec<bool> = (0..sizes.len()).map(|i| mask >> i & 1 == 1).collect();
        let rank: usize = sizes.iter().zip(&choice).filter(|(_, &c)| c).map(|(s, _)| s).sum();
        debug_assert!(rank > 0 && rank < dim);
        match classes.iter_mut().find(|(r, _)| *r == rank) {
            Some((_, choices)) => choices.push(choice),
            None => classes.push((rank, vec![choice])),
        }
    }
    classes.sort_by_key(|(r, _)| *r);
    classes
}

fn embed<S: Scalar>(block: &Matrix<S>, offset: usize, r: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(r, r);
    m.set_block(offset, offset, block);
    m
}

/// Nodes of the skeleton, in emission order.
fn skeleton<S: Scalar>(spec: &JordanSpec<S>, samples: usize, seed: u64, tol: &Tolerance) -> Result<Vec<Node<S>>> {
    let r = spec.r();
    let s = spec.s();
    let classes: Vec<(usize, RankClasses)> = spec
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.t() >= 2)
        .map(|(j, e)| (j, rank_classes(&e.sizes)))
        .collect();
    let class_count: usize = classes.iter().map(|(_, c)| c.len()).sum();
    let needed = (1u128 << s.min(100)) + (class_count * (samples + 1)) as u128;
    if needed > MAX_NODES as u128 {
        return Err(Error::PrecondViolated(format!(
            "skeleton needs {needed} nodes, the limit is {MAX_NODES}"
        )));
    }

    let dims: Vec<usize> = spec.eigenvalues().iter().map(|e| e.dim()).collect();
    let full = (1usize << s) - 1;
    let mut nodes: Vec<Node<S>> = boolean_center(spec)
        .into_iter()
        .enumerate()
        .map(|(mask, c)| Node {
            role: match mask {
                0 => Role::Bottom,
                m if m == full => Role::Top,
                _ => Role::Center,
            },
            rank: (0..s).filter(|j| mask >> j & 1 == 1).map(|j| dims[j]).sum(),
            eigenvalue: None,
            matrix: Some(c.into_matrix()),
        })
        .collect();

    let offsets = spec.eigen_offsets();
    for (j, rank_classes) in classes {
        let e = &spec.eigenvalues()[j];
        let sub = JordanSpec::new(vec![e.clone()])?;
        let mut sampler = DeltaSampler::new(&sub, seed.wrapping_add(j as u64));
        for (rank, choices) in rank_classes {
            let mut reps: Vec<Matrix<S>> = Vec::new();
            for attempt in 0..samples * 16 {
                if reps.len() == samples {
                    break;
                }
                let t = sampler.sample_with_choice(&choices[attempt % choices.len()])?;
                let t = embed(t.matrix(), offsets[j], r);
                if !reps.iter().any(|x| approx_eq(x, &t, tol).unwrap_or(false)) {
                    reps.push(t);
                }
            }
            for t in reps {
                nodes.push(Node {
                    role: Role::Antichain,
                    rank,
                    eigenvalue: Some(j),
                    matrix: Some(t),
                });
            }
            nodes.push(Node {
                role: Role::Ellipsis,
                rank,
                eigenvalue: Some(j),
                matrix: None,
            });
        }
    }
    Ok(nodes)
}

/// Covering pairs `(low, high)` among the nodes that carry matrices.
fn covers<S: Scalar>(nodes: &[Node<S>], tol: &Tolerance) -> Vec<(usize, usize)> {
    let n = nodes.len();
    let leq = |i: usize, k: usize| match (&nodes[i].matrix, &nodes[k].matrix) {
        (Some(a), Some(b)) => proj_leq(a, b, tol),
        _ => false,
    };
    let rel: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|k| leq(i, k)).collect()).collect();
    let below = |i: usize, k: usize| i != k && rel[i][k] && !rel[k][i];
    let mut out = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if below(i, k) && !(0..n).any(|m| below(i, m) && below(m, k)) {
                out.push((i, k));
            }
        }
    }
    out
}

fn label<S>(node: &Node<S>) -> String {
    let head = match node.role {
        Role::Ellipsis => "…".to_string(),
        _ => format!("rank {}", node.rank),
    };
    let tail = match (node.role, node.eigenvalue) {
        (Role::Ellipsis, Some(j)) => format!("rank {} of eigenvalue {j}", node.rank),
        (role, Some(j)) => format!("{} of eigenvalue {j}", role.name()),
        (role, None) => role.name().to_string(),
    };
    format!("{head}\\n{tail}")
}

/// DOT digraph with edges from lower to higher elements.
pub fn render<S: Scalar>(spec: &JordanSpec<S>, samples: usize, seed: u64, tol: &Tolerance) -> Result<String> {
    let nodes = skeleton(spec, samples, seed, tol)?;
    let edges = covers(&nodes, tol);
    let mut out = String::new();
    out.push_str("digraph downset {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, node) in nodes.iter().enumerate() {
        let style = if node.role == Role::Ellipsis { ", style=dashed" } else { "" };
        writeln!(out, "  n{i} [label=\"{}\", rank_value={}, role={}{style}];", label(node), node.rank, node.role.name())
            .expect("writing to a String");
    }
    for &(lo, hi) in &edges {
        writeln!(out, "  n{lo} -> n{hi};").expect("writing to a String");
    }
    // An ellipsis node stands for the unsampled rest of its class: it sits
    // between the union of the sampled members' lower and upper covers.
    for (i, node) in nodes.iter().enumerate().filter(|(_, n)| n.role == Role::Ellipsis) {
        let members: Vec<usize> = (0..nodes.len())
            .filter(|&k| {
                nodes[k].role == Role::Antichain && nodes[k].rank == node.rank && nodes[k].eigenvalue == node.eigenvalue
            })
            .collect();
        let mut lower: Vec<usize> = Vec::new();
        let mut upper: Vec<usize> = Vec::new();
        for &(lo, hi) in &edges {
            if members.contains(&hi) && !members.contains(&lo) && !lower.contains(&lo) {
                lower.push(lo);
            }
            if members.contains(&lo) && !members.contains(&hi) && !upper.contains(&hi) {
                upper.push(hi);
            }
        }
        if members.is_empty() {
            let j = node.eigenvalue.expect("ellipsis nodes belong to an eigenvalue");
            lower.push(0);
            upper.push(1 << j);
        }
        lower.sort_unstable();
        upper.sort_unstable();
        for lo in lower {
            writeln!(out, "  n{lo} -> n{i} [style=dashed];").expect("writing to a String");
        }
        for hi in upper {
            writeln!(out, "  n{i} -> n{hi} [style=dashed];").expect("writing to a String");
        }
    }
    out.push_str("}\n");
    Ok(out)
}

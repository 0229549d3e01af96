//! The conic lattice model: brute-force enumeration of colored path
//! configurations on the N x N cone lattice, with loop counting and
//! twist-weighted partition functions.
//!
//! The planar form of the cone is a staircase of N^2 crossings between
//! N open strands (entering at the base with colors alpha, leaving with
//! colors beta) and N seam strands whose top and bottom edges are
//! identified; winding multiplies a strand's spectral parameter by q.
//! Enumeration walks the crossings in a fixed row-major operator order
//! with early pruning on vertex admissibility; the vertex weights are
//! the table formulas, kept independent of the R-matrix constructors
//! (their agreement is an asserted invariant, not an assumption).

use crate::error::Error;
use crate::jet::JetScalar;
use crate::point::EvalPoint;
use crate::series::UMono;
use crate::space::GradedSpace;
use crate::Result;
use std::collections::BTreeMap;

/// One local Boltzmann weight: the colors around a crossing of a
/// horizontal line carrying x and a vertical line carrying y. Zero for
/// patterns outside the three allowed classes.
#[allow(clippy::too_many_arguments)]
pub fn vertex_weight(
    pt: &EvalPoint,
    space: &GradedSpace,
    left: usize,
    bottom: usize,
    top: usize,
    right: usize,
    x: &JetScalar,
    y: &JetScalar,
) -> Result<JetScalar> {
    for &l in [left, bottom, top, right].iter() {
        space.check_label(l)?;
    }
    let ratio = x.div(y)?;
    let one = JetScalar::one(pt.order);
    let denom = one.sub(&ratio);
    if denom.is_zero() {
        return Err(Error::PoleAtArgument);
    }
    let h = pt.t_half_pow(-1)?.sub(&pt.t_half);
    if left == bottom && bottom == top && top == right {
        let i = left;
        let v = if space.eps(i) == 1 {
            pt.t_half_pow(-1)?.sub(&pt.t_half.mul(&ratio))
        } else {
            pt.t_half_pow(-1)?.mul(&ratio).sub(&pt.t_half)
        };
        return v.div(&denom);
    }
    if left == top && bottom == right && left != bottom {
        let (i, j) = (left, bottom);
        let v = if i < j { h.mul(&ratio) } else { h };
        return v.div(&denom);
    }
    if left == right && bottom == top && left != bottom {
        return Ok(one);
    }
    Ok(JetScalar::zero(pt.order))
}

/// A path traced through one configuration.
#[derive(Clone, Debug)]
pub struct PathInfo {
    pub color: usize,
    pub seam_crossings: usize,
    pub closed: bool,
}

/// One weight-nonzero coloring of the cone lattice.
#[derive(Clone, Debug)]
pub struct LatticeConfig {
    pub seam: Vec<usize>,
    pub weight: JetScalar,
    pub paths: Vec<PathInfo>,
}

impl LatticeConfig {
    /// Loop counts per color.
    pub fn lambda(&self, dim: usize) -> Vec<usize> {
        let mut out = vec![0; dim];
        for p in &self.paths {
            if p.closed {
                out[p.color] += 1;
            }
        }
        out
    }

    pub fn twist_monomial(&self, dim: usize) -> UMono {
        let mut v = vec![0u32; dim];
        for &c in &self.seam {
            v[c] += 1;
        }
        UMono(v)
    }
}

struct FactorRecord {
    slot: usize,
    input: (usize, usize),
    output: (usize, usize),
}

fn trace_paths(n: usize, seam: &[usize], alpha: &[usize], records: &[FactorRecord], colors_start: &[usize]) -> Result<Vec<PathInfo>> {
    let _ = alpha;
    let total = 2 * n;
    // edges per slot: segment index increments at each factor touching
    // the slot; edge ids are (slot, segment)
    let mut seg = vec![0usize; total];
    let mut colors: Vec<Vec<usize>> = colors_start.iter().map(|&c| vec![c]).collect();
    // pairing: (slot, seg_in) -> (slot', seg_out) through each vertex
    let mut up: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for rec in records {
        let s = rec.slot;
        let (b, d) = rec.input;
        let (a, c) = rec.output;
        let in_l = (s, seg[s]);
        let in_r = (s + 1, seg[s + 1]);
        let out_l = (s, seg[s] + 1);
        let out_r = (s + 1, seg[s + 1] + 1);
        let crossing = a == d && c == b && b != d;
        if crossing {
            up.insert(in_l, out_r);
            up.insert(in_r, out_l);
        } else {
            up.insert(in_l, out_l);
            up.insert(in_r, out_r);
        }
        seg[s] += 1;
        seg[s + 1] += 1;
        colors[s].push(a);
        colors[s + 1].push(c);
    }
    // seam gluing: top edge of each traced slot continues at its bottom
    let mut glue: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for b in 0..n {
        let slot = n + b;
        glue.insert((slot, seg[slot]), (slot, 0));
    }
    let color_of = |e: (usize, usize)| colors[e.0][e.1];
    let mut visited: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut paths = Vec::new();
    // walk upward from every unvisited bottom edge or glued edge
    let starts: Vec<(usize, usize)> = (0..total).map(|s| (s, 0)).collect();
    for start in starts {
        if visited.get(&start).copied().unwrap_or(false) {
            continue;
        }
        let mut cur = start;
        let mut crossings = 0usize;
        let color = color_of(cur);
        let mut closed = false;
        loop {
            visited.insert(cur, true);
            if color_of(cur) != color {
                return Err(Error::Config("path changed color".into()));
            }
            if let Some(&next) = up.get(&cur) {
                cur = next;
                continue;
            }
            // top of a slot
            if let Some(&wrapped) = glue.get(&cur) {
                crossings += 1;
                if wrapped == start {
                    closed = true;
                    break;
                }
                cur = wrapped;
                continue;
            }
            break;
        }
        // open-strand starts that are actually mid-loop were marked
        // visited above; only record each component once
        if closed || start.0 < n {
            paths.push(PathInfo { color, seam_crossings: crossings, closed });
        }
    }
    let _ = seam;
    Ok(paths)
}

/// Enumerates all weight-nonzero configurations with the given boundary
/// colors. Capped at N <= 3 on spaces of dimension <= 2.
pub fn enumerate(
    pt: &EvalPoint,
    space: &GradedSpace,
    n: usize,
    alpha: &[usize],
    beta: &[usize],
) -> Result<Vec<LatticeConfig>> {
    if n > 3 || space.dim() > 2 {
        return Err(Error::BudgetExceeded(format!(
            "cone enumeration capped at N <= 3, dim <= 2 (asked N = {n}, dim = {})",
            space.dim()
        )));
    }
    if alpha.len() != n || beta.len() != n {
        return Err(Error::Config("boundary words must have length N".into()));
    }
    for &c in alpha.iter().chain(beta.iter()) {
        space.check_label(c)?;
    }
    if pt.zs.len() < n {
        return Err(Error::Config("evaluation point carries too few spectral values".into()));
    }
    let dim = space.dim();
    // operator-ordered factors: (slot, open-line index a, seam index b)
    // with argument z_a / (q z_b); the last listed acts first
    let mut factors = Vec::new();
    for j in 1..=n {
        for i in 1..=n {
            let slot = n + j - i - 1; // 0-based left slot
            factors.push((slot, n - i, j - 1));
        }
    }
    let mut out = Vec::new();
    let mut seam = vec![0usize; n];
    loop {
        // DFS over the factor list in reverse (action order)
        struct Dfs<'a> {
            pt: &'a EvalPoint,
            space: &'a GradedSpace,
            factors: &'a [(usize, usize, usize)],
            beta: &'a [usize],
            seam: &'a [usize],
            n: usize,
        }
        impl<'a> Dfs<'a> {
            fn run(
                &self,
                idx: usize,
                state: &mut Vec<usize>,
                weight: JetScalar,
                records: &mut Vec<FactorRecord>,
                start_colors: &[usize],
                out: &mut Vec<LatticeConfig>,
            ) -> Result<()> {
                if idx == 0 {
                    let target: Vec<usize> =
                        self.beta.iter().chain(self.seam.iter()).copied().collect();
                    if *state == target {
                        let paths =
                            trace_paths(self.n, self.seam, &[], records, start_colors)?;
                        out.push(LatticeConfig {
                            seam: self.seam.to_vec(),
                            weight: weight.clone(),
                            paths,
                        });
                    }
                    return Ok(());
                }
                let (slot, a_idx, b_idx) = self.factors[idx - 1];
                let x = self.pt.zs[a_idx].clone();
                let y = self.pt.q.mul(&self.pt.zs[b_idx]);
                let (b, d) = (state[slot], state[slot + 1]);
                let mut candidates: Vec<(usize, usize)> = Vec::new();
                if b == d {
                    candidates.push((b, d));
                } else {
                    candidates.push((b, d)); // corner
                    candidates.push((d, b)); // crossing
                }
                for (a, c) in candidates {
                    let w = vertex_weight(self.pt, self.space, a, c, b, d, &x, &y)?;
                    if w.is_zero() {
                        continue;
                    }
                    let (old_l, old_r) = (state[slot], state[slot + 1]);
                    state[slot] = a;
                    state[slot + 1] = c;
                    records.push(FactorRecord { slot, input: (b, d), output: (a, c) });
                    self.run(idx - 1, state, weight.mul(&w), records, start_colors, out)?;
                    records.pop();
                    state[slot] = old_l;
                    state[slot + 1] = old_r;
                }
                Ok(())
            }
        }
        let mut state: Vec<usize> = alpha.iter().chain(seam.iter()).copied().collect();
        let start_colors = state.clone();
        let dfs = Dfs { pt, space, factors: &factors, beta, seam: &seam, n };
        let mut records = Vec::new();
        dfs.run(
            factors.len(),
            &mut state,
            JetScalar::one(pt.order),
            &mut records,
            &start_colors,
            &mut out,
        )?;
        // next seam word
        let mut pos = n;
        while pos > 0 {
            seam[pos - 1] += 1;
            if seam[pos - 1] < dim {
                break;
            }
            seam[pos - 1] = 0;
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
    }
    Ok(out)
}

/// The partition function with exact twist-monomial bookkeeping: every
/// seam line contributes its twist variable, vacancies included.
pub fn partition_function(
    pt: &EvalPoint,
    space: &GradedSpace,
    n: usize,
    alpha: &[usize],
    beta: &[usize],
) -> Result<BTreeMap<UMono, JetScalar>> {
    let configs = enumerate(pt, space, n, alpha, beta)?;
    let mut out: BTreeMap<UMono, JetScalar> = BTreeMap::new();
    for c in configs {
        let mono = c.twist_monomial(space.dim());
        let entry = out.entry(mono).or_insert_with(|| JetScalar::zero(pt.order));
        *entry = entry.add(&c.weight);
    }
    Ok(out)
}

/// Structural invariants of a configuration list: every closed loop
/// crosses the seam exactly once, and per color the loop count matches
/// the seam occupancy.
pub fn check_loop_invariants(configs: &[LatticeConfig], dim: usize) -> bool {
    for c in configs {
        for p in &c.paths {
            if p.closed && p.seam_crossings != 1 {
                return false;
            }
        }
        let lambda = c.lambda(dim);
        let mut seam_counts = vec![0usize; dim];
        for &s in &c.seam {
            seam_counts[s] += 1;
        }
        if lambda != seam_counts {
            return false;
        }
    }
    true
}

//! Dense bounded-variable primal simplex.
//!
//! Every row `i` gets a logical variable `s_i = A_i·x` whose bounds encode the
//! row sense, so the working system is always `A·x − s = 0` with simple
//! bounds on all `n + m` variables. The all-logical basis is `−I`, and a
//! right-hand-side change only moves bounds, which is what makes warm starts
//! from a previous basis cheap. Phase 1 minimises the sum of bound
//! violations of the basic variables, so any starting basis is admissible.
//!
//! Pivoting follows Bland's smallest-index rule in both phases.

use crate::error::{Error, Result};
use crate::numerics::{dot, DenseMatrix, DenseVector};

/// Primal feasibility tolerance (absolute).
pub const FEAS_TOL: f64 = 1e-9;
/// Relative duality-gap tolerance used by [`certify`].
pub const GAP_TOL: f64 = 1e-8;
/// Reduced-cost tolerance, relative to `‖c‖∞`.
pub const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: DenseVector,
    pub constraints: DenseMatrix,
    pub rhs: DenseVector,
    pub senses: Vec<RowSense>,
    pub lower: DenseVector,
    pub upper: DenseVector,
}

impl LinearProgram {
    pub fn new(
        objective: DenseVector,
        constraints: DenseMatrix,
        rhs: DenseVector,
        senses: Vec<RowSense>,
        lower: DenseVector,
        upper: DenseVector,
    ) -> Result<Self> {
        let (m, n) = (constraints.rows(), constraints.cols());
        if objective.len() != n || lower.len() != n || upper.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} columns but objective/bounds of length {}/{}/{}",
                objective.len(),
                lower.len(),
                upper.len()
            )));
        }
        if rhs.len() != m || senses.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{m} rows but rhs/senses of length {}/{}",
                rhs.len(),
                senses.len()
            )));
        }
        if let Some(j) = (0..n).find(|&j| lower[j] > upper[j] || lower[j].is_nan() || upper[j].is_nan()) {
            return Err(Error::InvalidConfig(format!(
                "variable {j} has bounds [{}, {}]",
                lower[j], upper[j]
            )));
        }
        if !constraints.is_finite() || objective.iter().chain(&rhs).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite LP data".into()));
        }
        Ok(Self {
            objective,
            constraints,
            rhs,
            senses,
            lower,
            upper,
        })
    }

    pub fn rows(&self) -> usize {
        self.constraints.rows()
    }

    pub fn cols(&self) -> usize {
        self.constraints.cols()
    }

    fn row_bounds(&self, i: usize) -> (f64, f64) {
        match self.senses[i] {
            RowSense::Le => (f64::NEG_INFINITY, self.rhs[i]),
            RowSense::Ge => (self.rhs[i], f64::INFINITY),
            RowSense::Eq => (self.rhs[i], self.rhs[i]),
        }
    }

    /// Bounds on structural and logical variables, in that order.
    fn all_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.lower.clone();
        let mut up = self.upper.clone();
        for i in 0..self.rows() {
            let (l, u) = self.row_bounds(i);
            lo.push(l);
            up.push(u);
        }
        (lo, up)
    }

    fn objective_scale(&self) -> f64 {
        let c = self.objective.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if c > 0.0 {
            c
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable held at zero.
    Free,
}

/// Basis status of the `n` structural followed by the `m` logical variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub states: Vec<VarState>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: DenseVector,
    /// Row multipliers `y` with reduced costs `c − Aᵀy`. For an infeasible
    /// program these are the phase-1 multipliers.
    pub dual: DenseVector,
    pub objective_value: f64,
    pub degenerate_optimum: bool,
    pub basis: Basis,
    /// Improving direction on the structural variables when unbounded.
    pub ray: Option<DenseVector>,
    pub pivots: usize,
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_warm(lp, None)
}

/// Solves `lp`, starting from `warm` when it is a usable basis.
pub fn solve_lp_warm(lp: &LinearProgram, warm: Option<&Basis>) -> Result<LpSolution> {
    let mut s = Simplex::new(lp, warm)?;
    let status = s.run()?;
    let mut sol = s.solution(status);
    if status == LpStatus::Optimal {
        sol.degenerate_optimum = s.has_alternative_optimum();
    }
    Ok(sol)
}

/// Re-checks an optimal solution from scratch: primal feasibility, dual
/// feasibility and the duality gap.
pub fn certify(lp: &LinearProgram, sol: &LpSolution) -> bool {
    let (m, n) = (lp.rows(), lp.cols());
    if sol.status != LpStatus::Optimal || sol.primal.len() != n || sol.dual.len() != m {
        return false;
    }
    if sol.primal.iter().chain(&sol.dual).any(|v| !v.is_finite()) {
        return false;
    }
    let (lo, up) = lp.all_bounds();
    let activity = match lp.constraints.matvec(&sol.primal) {
        Ok(a) => a,
        Err(_) => return false,
    };
    let values: Vec<f64> = sol.primal.iter().chain(&activity).copied().collect();
    if (0..n + m).any(|k| values[k] < lo[k] - FEAS_TOL || values[k] > up[k] + FEAS_TOL) {
        return false;
    }
    let obj = dot(&lp.objective, &sol.primal);
    let scale = 1.0 + obj.abs();
    if (obj - sol.objective_value).abs() > GAP_TOL * scale {
        return false;
    }
    let dtol = DUAL_TOL * lp.objective_scale();
    let mut dual_obj = 0.0;
    for k in 0..n + m {
        let d = if k < n {
            lp.objective[k] - dot(&sol.dual, lp.constraints.col(k))
        } else {
            sol.dual[k - n]
        };
        let bound = if d > 0.0 { lo[k] } else { up[k] };
        if bound.is_finite() {
            dual_obj += d * bound;
        } else if d.abs() <= dtol {
            dual_obj += d * values[k];
        } else {
            return false;
        }
    }
    (obj - dual_obj).abs() <= GAP_TOL * scale
}

/// True when the optimum is not a unique vertex: some nonbasic variable
/// with zero reduced cost can move a positive distance without losing
/// feasibility or optimality.
pub fn detect_degenerate(lp: &LinearProgram, sol: &LpSolution) -> bool {
    if sol.status != LpStatus::Optimal {
        return false;
    }
    match Simplex::new(lp, Some(&sol.basis)) {
        Ok(mut s) if s.infeasibility() <= FEAS_TOL => s.has_alternative_optimum(),
        _ => false,
    }
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    m: usize,
    n: usize,
    cost: Vec<f64>,
    lo: Vec<f64>,
    up: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    /// `basic[r]` is the variable occupying basis position `r`.
    basic: Vec<usize>,
    /// Row-major explicit basis inverse.
    binv: Vec<f64>,
    since_refactor: usize,
    pivots: usize,
    dtol: f64,
    ray: Option<DenseVector>,
    phase1_dual: Option<DenseVector>,
}

enum Step {
    Flip,
    Pivot { row: usize, to: VarState },
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, warm: Option<&Basis>) -> Result<Self> {
        let (m, n) = (lp.rows(), lp.cols());
        let (lo, up) = lp.all_bounds();
        let mut cost = lp.objective.clone();
        cost.resize(n + m, 0.0);
        let mut s = Self {
            lp,
            m,
            n,
            cost,
            lo,
            up,
            x: vec![0.0; n + m],
            state: Vec::new(),
            basic: Vec::new(),
            binv: Vec::new(),
            since_refactor: 0,
            pivots: 0,
            dtol: DUAL_TOL * lp.objective_scale(),
            ray: None,
            phase1_dual: None,
        };
        let warm_ok = warm
            .filter(|b| b.states.len() == n + m)
            .filter(|b| b.states.iter().filter(|&&v| v == VarState::Basic).count() == m)
            .map(|b| s.install(&b.states).is_ok())
            .unwrap_or(false);
        if !warm_ok {
            let mut states = vec![VarState::AtLower; n + m];
            states[n..].iter_mut().for_each(|v| *v = VarState::Basic);
            s.install(&states)?;
        }
        Ok(s)
    }

    fn install(&mut self, states: &[VarState]) -> Result<()> {
        self.state = states
            .iter()
            .enumerate()
            .map(|(k, &st)| self.admissible_state(k, st))
            .collect();
        self.basic = (0..self.n + self.m)
            .filter(|&k| self.state[k] == VarState::Basic)
            .collect();
        for k in 0..self.n + self.m {
            self.x[k] = match self.state[k] {
                VarState::AtLower => self.lo[k],
                VarState::AtUpper => self.up[k],
                VarState::Free | VarState::Basic => 0.0,
            };
        }
        self.refactor()
    }

    /// Maps a requested nonbasic state onto one whose bound is finite.
    fn admissible_state(&self, k: usize, st: VarState) -> VarState {
        let (l, u) = (self.lo[k].is_finite(), self.up[k].is_finite());
        match st {
            VarState::Basic => VarState::Basic,
            VarState::AtLower if l => VarState::AtLower,
            VarState::AtUpper if u => VarState::AtUpper,
            _ if l => VarState::AtLower,
            _ if u => VarState::AtUpper,
            _ => VarState::Free,
        }
    }

    /// Writes column `k` of `[A −I]` into `out`.
    fn column(&self, k: usize, out: &mut [f64]) {
        if k < self.n {
            out.copy_from_slice(self.lp.constraints.col(k));
        } else {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[k - self.n] = -1.0;
        }
    }

    /// Rebuilds the basis inverse and the basic values from scratch.
    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut b = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for (r, &k) in self.basic.iter().enumerate() {
            self.column(k, &mut col);
            for i in 0..m {
                b[i * m + r] = col[i];
            }
        }
        self.binv = invert(&mut b, m).ok_or(Error::SingularBasis)?;
        // B·x_B = −N·x_N
        let mut rhs = vec![0.0; m];
        for k in 0..self.n + self.m {
            if self.state[k] == VarState::Basic || self.x[k] == 0.0 {
                continue;
            }
            self.column(k, &mut col);
            for i in 0..m {
                rhs[i] -= col[i] * self.x[k];
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            self.x[self.basic[r]] = dot(row, &rhs);
        }
        self.since_refactor = 0;
        Ok(())
    }

    /// Largest bound violation among basic variables.
    fn infeasibility(&self) -> f64 {
        self.basic.iter().fold(0.0, |s: f64, &k| {
            let v = self.x[k];
            s.max(self.lo[k] - v).max(v - self.up[k])
        })
    }

    fn phase1_costs(&self) -> Vec<f64> {
        self.basic
            .iter()
            .map(|&k| {
                if self.x[k] < self.lo[k] - FEAS_TOL {
                    -1.0
                } else if self.x[k] > self.up[k] + FEAS_TOL {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// `y = c_Bᵀ B⁻¹`.
    fn duals(&self, cb: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (r, &c) in cb.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let row = &self.binv[r * m..(r + 1) * m];
            for i in 0..m {
                y[i] += c * row[i];
            }
        }
        y
    }

    fn reduced_cost(&self, k: usize, y: &[f64], phase1: bool) -> f64 {
        let c = if phase1 { 0.0 } else { self.cost[k] };
        if k < self.n {
            c - dot(y, self.lp.constraints.col(k))
        } else {
            c + y[k - self.n]
        }
    }

    fn ftran(&self, k: usize) -> Vec<f64> {
        let m = self.m;
        if k < self.n {
            let a = self.lp.constraints.col(k);
            (0..m).map(|r| dot(&self.binv[r * m..(r + 1) * m], a)).collect()
        } else {
            let i = k - self.n;
            (0..m).map(|r| -self.binv[r * m + i]).collect()
        }
    }

    /// Direction (+1 increase, −1 decrease) in which nonbasic `k` may move
    /// to change the objective at rate `d`, if it is eligible to enter.
    fn improving_direction(&self, k: usize, d: f64, tol: f64) -> Option<f64> {
        match self.state[k] {
            VarState::AtLower if d < -tol => Some(1.0),
            VarState::AtUpper if d > tol => Some(-1.0),
            VarState::Free if d < -tol => Some(1.0),
            VarState::Free if d > tol => Some(-1.0),
            _ => None,
        }
    }

    /// Bounded ratio test for moving nonbasic `q` in direction `dir`.
    /// Returns the step length and the blocking event, or `None` if unbounded.
    fn ratio_test(&self, q: usize, dir: f64, alpha: &[f64]) -> Option<(f64, Step)> {
        // (step, variable index, event)
        let mut cands: Vec<(f64, usize, Step)> = Vec::new();
        if self.state[q] != VarState::Free && self.lo[q].is_finite() && self.up[q].is_finite() {
            cands.push((self.up[q] - self.lo[q], q, Step::Flip));
        }
        for (r, &k) in self.basic.iter().enumerate() {
            let rate = -dir * alpha[r];
            let v = self.x[k];
            if rate < -PIVOT_TOL {
                if v > self.up[k] + FEAS_TOL {
                    cands.push(((v - self.up[k]) / -rate, k, Step::Pivot { row: r, to: VarState::AtUpper }));
                } else if v >= self.lo[k] - FEAS_TOL && self.lo[k].is_finite() {
                    let t = ((v - self.lo[k]) / -rate).max(0.0);
                    cands.push((t, k, Step::Pivot { row: r, to: VarState::AtLower }));
                }
            } else if rate > PIVOT_TOL {
                if v < self.lo[k] - FEAS_TOL {
                    cands.push(((self.lo[k] - v) / rate, k, Step::Pivot { row: r, to: VarState::AtLower }));
                } else if v <= self.up[k] + FEAS_TOL && self.up[k].is_finite() {
                    let t = ((self.up[k] - v) / rate).max(0.0);
                    cands.push((t, k, Step::Pivot { row: r, to: VarState::AtUpper }));
                }
            }
        }
        let tmin = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        if !tmin.is_finite() {
            return None;
        }
        let slack = 1e-12 * (1.0 + tmin);
        cands
            .into_iter()
            .filter(|c| c.0 <= tmin + slack)
            .min_by_key(|c| c.1)
            .map(|(_, _, step)| (tmin, step))
    }

    fn apply(&mut self, q: usize, dir: f64, theta: f64, alpha: &[f64], step: Step) -> Result<()> {
        self.x[q] += dir * theta;
        for (r, &k) in self.basic.iter().enumerate() {
            self.x[k] -= dir * theta * alpha[r];
        }
        match step {
            Step::Flip => {
                self.state[q] = if dir > 0.0 {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                self.x[q] = if dir > 0.0 { self.up[q] } else { self.lo[q] };
            }
            Step::Pivot { row, to } => {
                let leaving = self.basic[row];
                self.state[leaving] = to;
                self.x[leaving] = match to {
                    VarState::AtLower => self.lo[leaving],
                    _ => self.up[leaving],
                };
                self.state[q] = VarState::Basic;
                self.basic[row] = q;
                self.pivot_inverse(row, alpha);
                self.since_refactor += 1;
                if self.since_refactor >= REFACTOR_EVERY {
                    self.refactor()?;
                }
            }
        }
        self.pivots += 1;
        Ok(())
    }

    fn pivot_inverse(&mut self, row: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[row];
        for v in &mut self.binv[row * m..(row + 1) * m] {
            *v /= piv;
        }
        let pivot_row: Vec<f64> = self.binv[row * m..(row + 1) * m].to_vec();
        for r in 0..m {
            if r == row || alpha[r] == 0.0 {
                continue;
            }
            let f = alpha[r];
            let dst = &mut self.binv[r * m..(r + 1) * m];
            for i in 0..m {
                dst[i] -= f * pivot_row[i];
            }
        }
    }

    fn run(&mut self) -> Result<LpStatus> {
        let limit = 50 * (self.m + self.n);
        loop {
            if self.pivots > limit {
                return Err(Error::IterationLimit(limit));
            }
            let phase1 = self.infeasibility() > FEAS_TOL;
            let cb: Vec<f64> = if phase1 {
                self.phase1_costs()
            } else {
                self.basic.iter().map(|&k| self.cost[k]).collect()
            };
            let y = self.duals(&cb);
            let tol = if phase1 { DUAL_TOL } else { self.dtol };
            let entering = (0..self.n + self.m)
                .filter(|&k| self.state[k] != VarState::Basic)
                .find_map(|k| {
                    let d = self.reduced_cost(k, &y, phase1);
                    self.improving_direction(k, d, tol).map(|dir| (k, dir))
                });
            let Some((q, dir)) = entering else {
                if phase1 {
                    // confirm on a fresh factorization before declaring infeasibility
                    if self.since_refactor > 0 {
                        self.refactor()?;
                        continue;
                    }
                    self.phase1_dual = Some(y);
                    return Ok(LpStatus::Infeasible);
                }
                if self.since_refactor > 0 {
                    self.refactor()?;
                    if self.infeasibility() > FEAS_TOL {
                        continue;
                    }
                    let cb: Vec<f64> = self.basic.iter().map(|&k| self.cost[k]).collect();
                    let y = self.duals(&cb);
                    let again = (0..self.n + self.m)
                        .filter(|&k| self.state[k] != VarState::Basic)
                        .any(|k| {
                            let d = self.reduced_cost(k, &y, false);
                            self.improving_direction(k, d, tol).is_some()
                        });
                    if again {
                        continue;
                    }
                }
                return Ok(LpStatus::Optimal);
            };
            let alpha = self.ftran(q);
            match self.ratio_test(q, dir, &alpha) {
                Some((theta, step)) => self.apply(q, dir, theta, &alpha, step)?,
                None if phase1 => {
                    // cannot happen with consistent data; restart from a fresh factorization
                    if self.since_refactor == 0 {
                        return Ok(LpStatus::Infeasible);
                    }
                    self.refactor()?;
                }
                None => {
                    let mut ray = vec![0.0; self.n];
                    if q < self.n {
                        ray[q] = dir;
                    }
                    for (r, &k) in self.basic.iter().enumerate() {
                        if k < self.n {
                            ray[k] = -dir * alpha[r];
                        }
                    }
                    self.ray = Some(ray);
                    return Ok(LpStatus::Unbounded);
                }
            }
        }
    }

    fn solution(&self, status: LpStatus) -> LpSolution {
        let primal = self.x[..self.n].to_vec();
        let dual = match status {
            LpStatus::Infeasible => self.phase1_dual.clone().unwrap_or_else(|| vec![0.0; self.m]),
            _ => {
                let cb: Vec<f64> = self.basic.iter().map(|&k| self.cost[k]).collect();
                self.duals(&cb)
            }
        };
        LpSolution {
            status,
            objective_value: dot(&self.lp.objective, &primal),
            primal,
            dual,
            degenerate_optimum: false,
            basis: Basis {
                states: self.state.clone(),
            },
            ray: self.ray.clone(),
            pivots: self.pivots,
        }
    }

    /// Explores optimal bases reachable by degenerate pivots on
    /// zero-reduced-cost columns, looking for an edge of positive length.
    fn has_alternative_optimum(&mut self) -> bool {
        const MAX_BASES: usize = 64;
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for _ in 0..MAX_BASES {
            let mut key = self.basic.clone();
            key.sort_unstable();
            if seen.contains(&key) {
                return false;
            }
            seen.push(key);
            let cb: Vec<f64> = self.basic.iter().map(|&k| self.cost[k]).collect();
            let y = self.duals(&cb);
            let mut blocked = None;
            for k in 0..self.n + self.m {
                if self.state[k] == VarState::Basic {
                    continue;
                }
                let d = self.reduced_cost(k, &y, false);
                if d.abs() > self.dtol {
                    continue;
                }
                let dirs: &[f64] = match self.state[k] {
                    VarState::AtLower => &[1.0],
                    VarState::AtUpper => &[-1.0],
                    _ => &[1.0, -1.0],
                };
                let alpha = self.ftran(k);
                for &dir in dirs {
                    match self.ratio_test(k, dir, &alpha) {
                        None => return true,
                        Some((t, _)) if t > FEAS_TOL => return true,
                        Some((_, Step::Pivot { row, to })) if blocked.is_none() => {
                            blocked = Some((k, dir, row, to, alpha.clone()));
                        }
                        _ => {}
                    }
                }
            }
            let Some((k, dir, row, to, alpha)) = blocked else {
                return false;
            };
            if self.apply(k, dir, 0.0, &alpha, Step::Pivot { row, to }).is_err() {
                return false;
            }
        }
        false
    }
}

/// Gauss–Jordan inverse with partial pivoting; `a` is row-major and is
/// destroyed. Returns `None` when singular.
fn invert(a: &mut [f64], m: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for c in 0..m {
        let p = (c..m).max_by(|&i, &j| a[i * m + c].abs().total_cmp(&a[j * m + c].abs()))?;
        if a[p * m + c].abs() < 1e-13 {
            return None;
        }
        if p != c {
            for k in 0..m {
                a.swap(p * m + k, c * m + k);
                inv.swap(p * m + k, c * m + k);
            }
        }
        let piv = a[c * m + c];
        for k in 0..m {
            a[c * m + k] /= piv;
            inv[c * m + k] /= piv;
        }
        for r in 0..m {
            if r == c {
                continue;
            }
            let f = a[r * m + c];
            if f == 0.0 {
                continue;
            }
            for k in 0..m {
                a[r * m + k] -= f * a[c * m + k];
                inv[r * m + k] -= f * inv[c * m + k];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(
        c: &[f64],
        a: &[&[f64]],
        b: &[f64],
        senses: &[RowSense],
        lo: &[f64],
        up: &[f64],
    ) -> LinearProgram {
        let rows: Vec<Vec<f64>> = a.iter().map(|r| r.to_vec()).collect();
        LinearProgram::new(
            c.to_vec(),
            DenseMatrix::from_rows(&rows).unwrap(),
            b.to_vec(),
            senses.to_vec(),
            lo.to_vec(),
            up.to_vec(),
        )
        .unwrap()
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn single_variable_lower_row() {
        let p = lp(&[1.0], &[&[1.0]], &[1.0], &[RowSense::Ge], &[-INF], &[INF]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.primal[0] - 1.0).abs() < 1e-12);
        assert!((s.objective_value - 1.0).abs() < 1e-12);
        assert!(certify(&p, &s));
        assert!(!s.degenerate_optimum);
    }

    #[test]
    fn parallel_objective_has_alternative_optima() {
        let p = lp(&[1.0, 1.0], &[&[1.0, 1.0]], &[2.0], &[RowSense::Ge], &[0.0, 0.0], &[INF, INF]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value - 2.0).abs() < 1e-12);
        assert!(s.degenerate_optimum);
        assert!(detect_degenerate(&p, &s));
        assert!(certify(&p, &s));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let p = lp(&[1.0], &[&[1.0]], &[-1.0], &[RowSense::Le], &[0.0], &[INF]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(!certify(&p, &s));
        assert!(!detect_degenerate(&p, &s));
    }

    #[test]
    fn unbounded_program_returns_ray() {
        let p = lp(&[-1.0, 0.0], &[&[1.0, -1.0]], &[1.0], &[RowSense::Le], &[0.0, 0.0], &[INF, INF]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        let ray = s.ray.unwrap();
        assert!(dot(&p.objective, &ray) < 0.0);
        assert!(ray.iter().all(|v| *v >= 0.0));
        assert!(ray[0] - ray[1] <= 1e-12);
    }

    #[test]
    fn unique_vertex_is_not_degenerate() {
        // min -x - 2y  s.t. x + y <= 4, x + 3y <= 6, x,y >= 0  ->  (3, 1)
        let p = lp(
            &[-1.0, -2.0],
            &[&[1.0, 1.0], &[1.0, 3.0]],
            &[4.0, 6.0],
            &[RowSense::Le, RowSense::Le],
            &[0.0, 0.0],
            &[INF, INF],
        );
        let s = solve_lp(&p).unwrap();
        assert!((s.primal[0] - 3.0).abs() < 1e-12 && (s.primal[1] - 1.0).abs() < 1e-12);
        assert!((s.objective_value + 5.0).abs() < 1e-12);
        assert!(!s.degenerate_optimum);
        assert!(certify(&p, &s));
    }

    #[test]
    fn certify_rejects_tampered_solutions() {
        let p = lp(
            &[-1.0, -2.0],
            &[&[1.0, 1.0], &[1.0, 3.0]],
            &[4.0, 6.0],
            &[RowSense::Le, RowSense::Le],
            &[0.0, 0.0],
            &[INF, INF],
        );
        let s = solve_lp(&p).unwrap();
        let mut bumped = s.clone();
        bumped.primal[1] += 1e-3;
        assert!(!certify(&p, &bumped));
        let mut misreported = s.clone();
        misreported.objective_value += 1.0;
        assert!(!certify(&p, &misreported));
    }

    #[test]
    fn equality_rows_and_boxed_variables() {
        // min x - y  s.t. x + y = 1, 0 <= x <= 0.3, -1 <= y <= 0.5 -> x = 0.5? no: y <= 0.5 forces x >= 0.5 > 0.3
        let p = lp(&[1.0, -1.0], &[&[1.0, 1.0]], &[1.0], &[RowSense::Eq], &[0.0, -1.0], &[0.3, 0.5]);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
        // widen y: optimum x = 0, y = 1
        let p = lp(&[1.0, -1.0], &[&[1.0, 1.0]], &[1.0], &[RowSense::Eq], &[0.0, -1.0], &[0.3, 2.0]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.primal[0].abs() < 1e-12 && (s.primal[1] - 1.0).abs() < 1e-12);
        assert!(certify(&p, &s));
    }

    #[test]
    fn warm_start_from_optimal_basis_needs_no_pivots() {
        let p = lp(
            &[-1.0, -2.0],
            &[&[1.0, 1.0], &[1.0, 3.0]],
            &[4.0, 6.0],
            &[RowSense::Le, RowSense::Le],
            &[0.0, 0.0],
            &[INF, INF],
        );
        let cold = solve_lp(&p).unwrap();
        let warm = solve_lp_warm(&p, Some(&cold.basis)).unwrap();
        assert_eq!(warm.pivots, 0);
        assert_eq!(warm.primal, cold.primal);
    }

    #[test]
    fn malformed_warm_basis_falls_back_to_slacks() {
        let p = lp(&[1.0], &[&[1.0]], &[1.0], &[RowSense::Ge], &[-INF], &[INF]);
        let bogus = Basis {
            states: vec![VarState::Basic, VarState::Basic],
        };
        let s = solve_lp_warm(&p, Some(&bogus)).unwrap();
        assert!((s.primal[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_shapes() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        assert!(LinearProgram::new(vec![1.0], a.clone(), vec![1.0], vec![RowSense::Le], vec![0.0], vec![1.0]).is_err());
        assert!(LinearProgram::new(
            vec![1.0, 1.0],
            a,
            vec![1.0],
            vec![RowSense::Le],
            vec![0.0, 2.0],
            vec![1.0, 1.0]
        )
        .is_err());
    }
}

//! The colour alignment problem and its reduction to involution matchings.
//!
//! `m` girls hold `n` balls each, with `m` balls of each of `n` colours.
//! An exchange plan is an involution on balls: each 2-cycle swaps the owners
//! of two balls, and fixed points are vacuous exchanges. The plan solves the
//! instance when every girl ends with one ball of every colour.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::ZeroRectBand;
use crate::matching::{verify_permutation_matching, InvolutionMatching, PermutationMatching};
use crate::semigroup::format::{content_lines, parse_numbers, syntax};
use crate::semigroup::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColourError {
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("ball index {index} out of range for {balls} balls")]
    IndexOutOfRange { index: usize, balls: usize },
    #[error("plan is not an involution on balls")]
    NotAnInvolution,
    #[error("not a permutation matching of the band: {0}")]
    NotAMatching(String),
    #[error("plan or instance does not belong to this band and matching: {0}")]
    PlanInstanceMismatch(String),
    #[error("exchange plan assigns two values to ({row}, {col})")]
    WellDefinednessViolation { row: usize, col: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ball {
    pub girl: usize,
    pub colour: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourInstance {
    girls: usize,
    colours: usize,
    balls: Vec<Ball>,
    /// `(row, column)` of the band element each ball was derived from.
    provenance: Option<Vec<(usize, usize)>>,
}

impl ColourInstance {
    pub fn new(girls: usize, colours: usize, balls: Vec<Ball>) -> Result<Self, ColourError> {
        if girls == 0 || colours == 0 {
            return Err(ColourError::MalformedInstance("need at least one girl and one colour".into()));
        }
        if balls.len() != girls * colours {
            return Err(ColourError::MalformedInstance(format!(
                "{} balls, expected {}",
                balls.len(),
                girls * colours
            )));
        }
        let mut per_girl = vec![0; girls];
        let mut per_colour = vec![0; colours];
        for b in &balls {
            if b.girl >= girls || b.colour >= colours {
                return Err(ColourError::MalformedInstance(format!("ball {b:?} out of range")));
            }
            per_girl[b.girl] += 1;
            per_colour[b.colour] += 1;
        }
        if let Some(g) = per_girl.iter().position(|&c| c != colours) {
            return Err(ColourError::MalformedInstance(format!("girl {g} holds {} balls", per_girl[g])));
        }
        if let Some(c) = per_colour.iter().position(|&k| k != girls) {
            return Err(ColourError::MalformedInstance(format!("colour {c} has {} balls", per_colour[c])));
        }
        Ok(Self { girls, colours, balls, provenance: None })
    }

    pub fn girls(&self) -> usize {
        self.girls
    }

    pub fn colours(&self) -> usize {
        self.colours
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn provenance(&self) -> Option<&[(usize, usize)]> {
        self.provenance.as_deref()
    }

    /// `counts[girl][colour]`.
    pub fn counts(&self) -> Vec<Vec<usize>> {
        let mut c = vec![vec![0; self.colours]; self.girls];
        for b in &self.balls {
            c[b.girl][b.colour] += 1;
        }
        c
    }

    pub fn is_aligned(&self) -> bool {
        self.counts().iter().flatten().all(|&k| k == 1)
    }
}

/// An involution on ball indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExchangePlan(Vec<usize>);

impl ExchangePlan {
    pub fn new(pairing: Vec<usize>) -> Result<Self, ColourError> {
        let n = pairing.len();
        for (i, &j) in pairing.iter().enumerate() {
            if j >= n {
                return Err(ColourError::IndexOutOfRange { index: j, balls: n });
            }
            if pairing[j] != i {
                return Err(ColourError::NotAnInvolution);
            }
        }
        Ok(Self(pairing))
    }

    pub fn vacuous(balls: usize) -> Self {
        Self((0..balls).collect())
    }

    pub fn from_exchanges(balls: usize, exchanges: &[(usize, usize)]) -> Result<Self, ColourError> {
        let mut pairing: Vec<usize> = (0..balls).collect();
        for &(i, j) in exchanges {
            for x in [i, j] {
                if x >= balls {
                    return Err(ColourError::IndexOutOfRange { index: x, balls });
                }
            }
            if pairing[i] != i || pairing[j] != j {
                return Err(ColourError::NotAnInvolution);
            }
            pairing[i] = j;
            pairing[j] = i;
        }
        Ok(Self(pairing))
    }

    pub fn pairing(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Non-vacuous exchanges `(i, j)` with `i < j`.
    pub fn exchanges(&self) -> Vec<(usize, usize)> {
        self.0.iter().enumerate().filter(|&(i, &j)| i < j).map(|(i, &j)| (i, j)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SolveOutcome {
    Solved { plan: ExchangePlan, nodes: u64 },
    /// The search space was exhausted without a solution.
    Unsolvable { nodes: u64 },
    /// The node budget ran out first; nothing is claimed.
    BudgetExhausted { nodes: u64 },
}

impl SolveOutcome {
    pub fn plan(&self) -> Option<&ExchangePlan> {
        match self {
            SolveOutcome::Solved { plan, .. } => Some(plan),
            _ => None,
        }
    }
}

/// Balls of the band matching's colour instance: girl `a` receives, for each
/// column `α`, a ball coloured by the column of `φ(a, α)`.
pub fn instance_from_matching(band: &ZeroRectBand, phi: &PermutationMatching) -> Result<ColourInstance, ColourError> {
    let s = band.to_semigroup();
    match verify_permutation_matching(&s, phi.images()) {
        Ok(true) => {}
        Ok(false) => return Err(ColourError::NotAMatching("some element is not sent to an inverse".into())),
        Err(e) => return Err(ColourError::NotAMatching(e.to_string())),
    }
    let (m, n) = (band.rows(), band.cols());
    let mut balls = Vec::with_capacity(m * n);
    let mut provenance = Vec::with_capacity(m * n);
    for a in 0..m {
        for alpha in 0..n {
            let image = phi.images()[band.element(a, alpha)];
            let (_, colour) = band
                .coords(image)
                .ok_or_else(|| ColourError::NotAMatching("nonzero element sent to zero".into()))?;
            balls.push(Ball { girl: a, colour });
            provenance.push((a, alpha));
        }
    }
    let mut inst = ColourInstance::new(m, n, balls)?;
    inst.provenance = Some(provenance);
    Ok(inst)
}

/// Applies the plan and checks every girl ends with exactly one ball of each colour.
pub fn verify_plan(instance: &ColourInstance, plan: &ExchangePlan) -> Result<bool, ColourError> {
    let balls = instance.balls.len();
    if plan.len() != balls {
        return Err(ColourError::IndexOutOfRange { index: plan.len(), balls });
    }
    let mut counts = vec![vec![0usize; instance.colours]; instance.girls];
    for (x, &y) in plan.pairing().iter().enumerate() {
        // ball x ends with the girl who held its partner
        let owner = instance.balls[y].girl;
        counts[owner][instance.balls[x].colour] += 1;
    }
    Ok(counts.iter().flatten().all(|&k| k == 1))
}

/// Exact backtracking search for an exchange plan.
///
/// Balls are decided in index order; the lowest undecided ball is either kept
/// (vacuous exchange) or swapped with a later undecided ball of another girl
/// and another colour. Partners with the same girl and colour as an already
/// tried partner are skipped, and a branch is cut as soon as some undecided
/// ball has no admissible move left.
pub fn solve(instance: &ColourInstance, budget: Option<u64>) -> SolveOutcome {
    let mut search = Search {
        inst: instance,
        pairing: vec![usize::MAX; instance.balls.len()],
        held: vec![vec![false; instance.colours]; instance.girls],
        nodes: 0,
        budget: budget.unwrap_or(u64::MAX),
    };
    match search.run() {
        Some(true) => SolveOutcome::Solved { plan: ExchangePlan(search.pairing), nodes: search.nodes },
        Some(false) => SolveOutcome::Unsolvable { nodes: search.nodes },
        None => SolveOutcome::BudgetExhausted { nodes: search.nodes },
    }
}

struct Search<'a> {
    inst: &'a ColourInstance,
    pairing: Vec<usize>,
    /// `held[g][c]`: girl `g` is already assigned a final ball of colour `c`.
    held: Vec<Vec<bool>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// `Some(found)`, or `None` when the budget ran out.
    fn run(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let Some(x) = self.pairing.iter().position(|&p| p == usize::MAX) else {
            return Some(true);
        };
        if !self.viable() {
            return Some(false);
        }
        let Ball { girl: g, colour: c } = self.inst.balls[x];
        if !self.held[g][c] {
            self.pairing[x] = x;
            self.held[g][c] = true;
            if self.run()? {
                return Some(true);
            }
            self.held[g][c] = false;
            self.pairing[x] = usize::MAX;
        }
        let mut tried: Vec<Ball> = Vec::new();
        for y in x + 1..self.pairing.len() {
            let other = self.inst.balls[y];
            let (h, d) = (other.girl, other.colour);
            if self.pairing[y] != usize::MAX || h == g || d == c || self.held[g][d] || self.held[h][c] {
                continue;
            }
            if tried.contains(&other) {
                continue;
            }
            tried.push(other);
            self.pairing[x] = y;
            self.pairing[y] = x;
            self.held[g][d] = true;
            self.held[h][c] = true;
            if self.run()? {
                return Some(true);
            }
            self.held[g][d] = false;
            self.held[h][c] = false;
            self.pairing[x] = usize::MAX;
            self.pairing[y] = usize::MAX;
        }
        Some(false)
    }

    /// Every undecided ball can still be kept or swapped.
    fn viable(&self) -> bool {
        let balls = &self.inst.balls;
        let open: Vec<usize> = (0..balls.len()).filter(|&i| self.pairing[i] == usize::MAX).collect();
        open.iter().all(|&x| {
            let Ball { girl: g, colour: c } = balls[x];
            !self.held[g][c]
                || open.iter().any(|&y| {
                    let Ball { girl: h, colour: d } = balls[y];
                    h != g && d != c && !self.held[g][d] && !self.held[h][c]
                })
        })
    }
}

/// Builds the involution matching `Φ(a, colour(y)) = (b, colour(x))` for each
/// exchange of ball `x` (origin `(a, α)`) with ball `y` (origin `(b, β)`),
/// with `Φ(0) = 0`. Vacuous exchanges give fixed points.
pub fn involution_from_plan(
    band: &ZeroRectBand,
    phi: &PermutationMatching,
    instance: &ColourInstance,
    plan: &ExchangePlan,
) -> Result<InvolutionMatching, ColourError> {
    let expected = instance_from_matching(band, phi)?;
    if &expected != instance {
        return Err(ColourError::PlanInstanceMismatch("instance was not derived from this matching".into()));
    }
    if plan.len() != instance.balls.len() {
        return Err(ColourError::PlanInstanceMismatch(format!(
            "plan covers {} balls, instance has {}",
            plan.len(),
            instance.balls.len()
        )));
    }
    let origin = expected.provenance.as_ref().expect("derived instances carry provenance");
    let mut images = vec![usize::MAX; band.order()];
    images[0] = 0;
    for (x, &y) in plan.pairing().iter().enumerate() {
        let (a, _) = origin[x];
        let (b, _) = origin[y];
        let cell = band.element(a, instance.balls[y].colour);
        if images[cell] != usize::MAX {
            return Err(ColourError::WellDefinednessViolation { row: a, col: instance.balls[y].colour });
        }
        images[cell] = band.element(b, instance.balls[x].colour);
    }
    if let Some(cell) = images.iter().position(|&v| v == usize::MAX) {
        let (row, col) = band.coords(cell).expect("zero is assigned");
        return Err(ColourError::WellDefinednessViolation { row, col });
    }
    InvolutionMatching::new(images).map_err(|e| ColourError::NotAMatching(e.to_string()))
}

/// Instance text format: `m n`, then `m·n` lines `girl colour`.
pub fn parse_instance(text: &str) -> Result<ColourInstance, ParseError> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.starts_with('#'));
    let (l0, header) = lines.next().ok_or_else(|| ParseError::Truncated("missing `m n` line".into()))?;
    let [m, n] = parse_numbers(l0, header)?[..] else {
        return Err(syntax(l0, "first line must be `m n`"));
    };
    let mut balls = Vec::new();
    for (ln, line) in lines {
        let [girl, colour] = parse_numbers(ln, line)?[..] else {
            return Err(syntax(ln, "expected `girl colour`"));
        };
        balls.push(Ball { girl, colour });
    }
    Ok(ColourInstance::new(m, n, balls)?)
}

pub fn write_instance(inst: &ColourInstance) -> String {
    let mut out = format!("{} {}\n", inst.girls, inst.colours);
    for b in &inst.balls {
        out.push_str(&format!("{} {}\n", b.girl, b.colour));
    }
    out
}

/// Plan text format: one `i j` line per non-vacuous exchange.
pub fn parse_plan(text: &str, balls: usize) -> Result<ExchangePlan, ParseError> {
    let mut exchanges = Vec::new();
    for (ln, line) in content_lines(text).filter(|(_, l)| !l.starts_with('#')) {
        let [i, j] = parse_numbers(ln, line)?[..] else {
            return Err(syntax(ln, "expected `i j`"));
        };
        exchanges.push((i, j));
    }
    Ok(ExchangePlan::from_exchanges(balls, &exchanges)?)
}

pub fn write_plan(plan: &ExchangePlan) -> String {
    plan.exchanges().iter().map(|(i, j)| format!("{i} {j}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{find_permutation_matching, verify_involution_matching};

    fn balls(pairs: &[(usize, usize)]) -> Vec<Ball> {
        pairs.iter().map(|&(girl, colour)| Ball { girl, colour }).collect()
    }

    #[test]
    fn full_two_by_two_identity_instance() {
        let band = ZeroRectBand::full(2, 2).unwrap();
        let phi = PermutationMatching::new((0..5).collect()).unwrap();
        let inst = instance_from_matching(&band, &phi).unwrap();
        assert_eq!(inst.counts(), vec![vec![1, 1], vec![1, 1]]);
        assert!(inst.is_aligned());
    }

    #[test]
    fn swap_needed_instance() {
        // girl 0 holds two colour-0 balls, girl 1 two colour-1 balls
        let inst = ColourInstance::new(2, 2, balls(&[(0, 0), (0, 0), (1, 1), (1, 1)])).unwrap();
        let out = solve(&inst, None);
        let plan = out.plan().unwrap();
        assert_eq!(plan.exchanges(), vec![(1, 2)]);
        assert!(verify_plan(&inst, plan).unwrap());
        assert!(!verify_plan(&inst, &ExchangePlan::vacuous(4)).unwrap());
    }

    #[test]
    fn aligned_instance_gets_vacuous_plan() {
        let inst = ColourInstance::new(2, 3, balls(&[(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (1, 0)])).unwrap();
        assert_eq!(solve(&inst, None).plan().unwrap(), &ExchangePlan::vacuous(6));
    }

    #[test]
    fn single_girl_is_always_aligned() {
        let inst = ColourInstance::new(1, 4, balls(&[(0, 3), (0, 1), (0, 0), (0, 2)])).unwrap();
        assert_eq!(solve(&inst, None).plan().unwrap().exchanges(), vec![]);
    }

    #[test]
    fn malformed_instance_rejected() {
        assert!(ColourInstance::new(2, 2, balls(&[(0, 0), (0, 0), (1, 0), (1, 1)])).is_err());
        assert!(ColourInstance::new(2, 2, balls(&[(0, 0), (0, 1), (0, 0), (1, 1)])).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let inst = ColourInstance::new(2, 2, balls(&[(0, 0), (0, 0), (1, 1), (1, 1)])).unwrap();
        assert!(matches!(solve(&inst, Some(1)), SolveOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn vacuous_plan_on_aligned_band_instance_fixes_idempotents() {
        let band = ZeroRectBand::full(2, 2).unwrap();
        let s = band.to_semigroup();
        let phi = PermutationMatching::new((0..5).collect()).unwrap();
        let inst = instance_from_matching(&band, &phi).unwrap();
        let inv = involution_from_plan(&band, &phi, &inst, &ExchangePlan::vacuous(4)).unwrap();
        assert_eq!(inv.images(), &[0, 1, 2, 3, 4]);
        assert!(inv.fixed_points().iter().all(|&x| s.is_idempotent(x)));
    }

    #[test]
    fn collision_is_a_well_definedness_violation() {
        // Brandt semigroup B_2: the unique matching gives girl 0 two balls of
        // colour 1 and girl 1 two of colour 0
        let band = ZeroRectBand::new(vec![vec![false, true], vec![true, false]]).unwrap();
        let s = band.to_semigroup();
        let phi = find_permutation_matching(&s).unwrap().unwrap();
        let inst = instance_from_matching(&band, &phi).unwrap();
        assert_eq!(inst.counts(), vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(
            involution_from_plan(&band, &phi, &inst, &ExchangePlan::vacuous(4)),
            Err(ColourError::WellDefinednessViolation { row: 0, col: 1 })
        );
        let plan = solve(&inst, None).plan().cloned().unwrap();
        let inv = involution_from_plan(&band, &phi, &inst, &plan).unwrap();
        assert!(verify_involution_matching(&s, inv.images()).unwrap());
    }

    #[test]
    fn text_formats_round_trip() {
        let inst = ColourInstance::new(2, 2, balls(&[(0, 0), (0, 0), (1, 1), (1, 1)])).unwrap();
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
        let plan = ExchangePlan::from_exchanges(4, &[(1, 2)]).unwrap();
        assert_eq!(write_plan(&plan), "1 2\n");
        assert_eq!(parse_plan("1 2\n", 4).unwrap(), plan);
        assert!(parse_plan("1 2\n2 3\n", 4).is_err());
    }
}

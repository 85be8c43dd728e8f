//! A three-round Ehrenfeucht–Fraïssé game between an atomic Boolean algebra
//! B and a non-atomic Boolean algebra B′, both with infinitely many atoms.
//!
//! Neither algebra is stored. Finitely many chosen elements generate a
//! finite subalgebra whose atoms partition the top, so a position is a list
//! of matched cell pairs and each cell is described only by its size. A B
//! cell is `n` atoms or infinite; a B′ cell has some number of atoms (finite
//! or infinite) and possibly a nonzero atomless part. Spoiler refines the
//! partition on one side, labeling each new part with the chosen elements
//! it lies under; duplicator refines the matched cells on the other side.
//!
//! Spoiler plays on B, then B′, then B.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A number of atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSize", into = "RawSize")]
pub enum Size {
    Finite(u32),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawSize {
    Finite(u32),
    Word(String),
}

impl TryFrom<RawSize> for Size {
    type Error = String;
    fn try_from(raw: RawSize) -> Result<Self, String> {
        match raw {
            RawSize::Finite(n) => Ok(Size::Finite(n)),
            RawSize::Word(w) if w == "inf" => Ok(Size::Infinite),
            RawSize::Word(w) => Err(format!("expected a count or \"inf\", found {w:?}")),
        }
    }
}

impl From<Size> for RawSize {
    fn from(s: Size) -> Self {
        match s {
            Size::Finite(n) => RawSize::Finite(n),
            Size::Infinite => RawSize::Word("inf".into()),
        }
    }
}

impl Size {
    pub fn is_finite(self) -> bool {
        matches!(self, Size::Finite(_))
    }

    fn plus(self, other: Size) -> Size {
        match (self, other) {
            (Size::Finite(a), Size::Finite(b)) => Size::Finite(a + b),
            _ => Size::Infinite,
        }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::Finite(n) => write!(f, "{n}"),
            Size::Infinite => f.write_str("inf"),
        }
    }
}

/// A cell of B: `Finite(n)` for a join of `n ≥ 1` atoms.
pub type CellB = Size;

/// A cell of B′.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellBPrime {
    pub atoms: Size,
    /// Whether the cell has a nonzero part with no atoms below it.
    pub atomless: bool,
}

impl CellBPrime {
    pub fn new(atoms: Size, atomless: bool) -> Self {
        CellBPrime { atoms, atomless }
    }

    pub fn is_nonzero(self) -> bool {
        self.atomless || self.atoms != Size::Finite(0)
    }

    /// Finite exactly when the cell is a join of finitely many atoms.
    pub fn matching_size(self) -> Size {
        if self.atomless {
            Size::Infinite
        } else {
            self.atoms
        }
    }
}

impl fmt::Display for CellBPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} atoms{})", self.atoms, if self.atomless { ", atomless" } else { "" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    B,
    BPrime,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("illegal split of cell {cell}: {reason}")]
    IllegalSplit { cell: usize, reason: String },
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("duplicator strategy has no reply: {0}")]
    StrategyUnavailable(String),
    #[error("the game is not over")]
    GameIncomplete,
    #[error("exploration exceeded {0} positions")]
    BudgetExceeded(u64),
}

/// A new part and the bitmask of this round's chosen elements above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Part<T> {
    pub cell: T,
    pub elements: u32,
}

/// How one cell is refined. Cells without a subdivision stay whole and lie
/// under none of this round's elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision<T> {
    pub cell: usize,
    pub parts: Vec<Part<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "side", content = "subdivisions", rename_all = "kebab-case")]
pub enum Move {
    B(Vec<Subdivision<CellB>>),
    BPrime(Vec<Subdivision<CellBPrime>>),
}

impl Move {
    pub fn side(&self) -> Side {
        match self {
            Move::B(_) => Side::B,
            Move::BPrime(_) => Side::BPrime,
        }
    }
}

/// One chosen element, as the set of current cells below it on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chosen {
    pub round: usize,
    pub index: u32,
    pub by: Side,
    pub b: BTreeSet<usize>,
    pub b_prime: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameState {
    rounds: [u32; 3],
    played: usize,
    cells: Vec<(CellB, CellBPrime)>,
    pending: Option<Move>,
    last_reply: Option<Move>,
    history: Vec<Chosen>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Winner {
    Duplicator,
    Spoiler,
}

/// The side spoiler plays on in round `r` (0-based).
pub fn spoiler_side(r: usize) -> Side {
    if r == 1 {
        Side::BPrime
    } else {
        Side::B
    }
}

/// Checks that `parts` is a legal refinement of a B cell.
pub fn check_split_b(cell: CellB, parts: &[CellB]) -> Result<(), String> {
    if parts.is_empty() {
        return Err("no parts".into());
    }
    if parts.contains(&Size::Finite(0)) {
        return Err("a part is empty".into());
    }
    match cell {
        Size::Finite(n) => {
            if parts.iter().any(|p| !p.is_finite()) {
                return Err(format!("a finite cell of size {n} has an infinite part"));
            }
            let total = parts.iter().fold(Size::Finite(0), |a, &b| a.plus(b));
            if total != cell {
                return Err(format!("parts sum to {total}, not {n}"));
            }
        }
        Size::Infinite => {
            if parts.iter().all(|p| p.is_finite()) {
                return Err("an infinite cell needs an infinite part".into());
            }
        }
    }
    Ok(())
}

/// Checks that `parts` is a legal refinement of a B′ cell: parts are
/// nonzero, atoms are conserved, and an atomless part exists exactly when
/// the cell has one.
pub fn check_split_b_prime(cell: CellBPrime, parts: &[CellBPrime]) -> Result<(), String> {
    if parts.is_empty() {
        return Err("no parts".into());
    }
    if parts.iter().any(|p| !p.is_nonzero()) {
        return Err("a part is zero".into());
    }
    match cell.atoms {
        Size::Finite(m) => {
            let total = parts.iter().fold(Size::Finite(0), |a, p| a.plus(p.atoms));
            if total != cell.atoms {
                return Err(format!("part atoms sum to {total}, not {m}"));
            }
        }
        Size::Infinite => {
            if parts.iter().all(|p| p.atoms.is_finite()) {
                return Err("infinitely many atoms vanished".into());
            }
        }
    }
    let any_atomless = parts.iter().any(|p| p.atomless);
    if cell.atomless && !any_atomless {
        return Err("the atomless part vanished".into());
    }
    if !cell.atomless && any_atomless {
        return Err("an atomless part appeared".into());
    }
    Ok(())
}

/// A rule for duplicator's refinements, applied cell by cell.
pub trait Duplicator {
    /// Refines the B′ cell `cell` to match spoiler's split of B into
    /// `parts`, returning one B′ part per B part.
    fn reply_on_b_prime(&self, parts: &[CellB], cell: CellBPrime) -> Result<Vec<CellBPrime>, GameError>;

    /// Refines the B cell `cell` to match spoiler's split of B′ into
    /// `parts`.
    fn reply_on_b(&self, parts: &[CellBPrime], cell: CellB) -> Result<Vec<CellB>, GameError>;
}

/// The matching strategy of the non-axiomatisability argument.
///
/// On B′ both variants match sizes, giving infinite B parts infinite-size
/// pieces. On B they differ only in what the parts other than the selected
/// infinite one receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatorStrategy {
    /// Every other part of an infinite B cell is a single atom.
    #[default]
    SingleAtoms,
    /// Finite-size B′ parts are matched size for size; the other
    /// infinite-size parts get single atoms.
    MatchFiniteSizes,
}

fn unavailable(msg: impl Into<String>) -> GameError {
    GameError::StrategyUnavailable(msg.into())
}

impl Duplicator for DuplicatorStrategy {
    fn reply_on_b_prime(&self, parts: &[CellB], cell: CellBPrime) -> Result<Vec<CellBPrime>, GameError> {
        let total = parts.iter().fold(Size::Finite(0), |a, &b| a.plus(b));
        if total > cell.matching_size() {
            return Err(unavailable(format!("a B cell of size {total} is matched with {cell}")));
        }
        if parts.len() == 1 {
            return Ok(vec![cell]);
        }
        let finite = |s: Size| match s {
            Size::Finite(n) => CellBPrime::new(Size::Finite(n), false),
            Size::Infinite => unreachable!("only finite parts are matched by size"),
        };
        let mut out: Vec<CellBPrime> = Vec::with_capacity(parts.len());
        match (cell.atoms, cell.atomless) {
            (Size::Infinite, atomless) => {
                // Infinite parts get infinite pieces; one of them keeps the
                // infinite atoms and the atomless mass. Without an infinite
                // part, the largest finite part takes the rest.
                let keeper = parts
                    .iter()
                    .position(|p| !p.is_finite())
                    .unwrap_or_else(|| largest(parts));
                for (i, &p) in parts.iter().enumerate() {
                    out.push(if i == keeper {
                        CellBPrime::new(Size::Infinite, atomless)
                    } else if p.is_finite() {
                        finite(p)
                    } else if atomless {
                        CellBPrime::new(Size::Finite(0), true)
                    } else {
                        CellBPrime::new(Size::Infinite, false)
                    });
                }
            }
            (Size::Finite(m), true) => {
                // The atomless mass splits into nonzero pieces, one per part.
                for i in 0..parts.len() {
                    let atoms = if i == 0 { m } else { 0 };
                    out.push(CellBPrime::new(Size::Finite(atoms), true));
                }
            }
            (Size::Finite(m), false) => {
                let Size::Finite(n) = total else {
                    unreachable!("checked against the matching size")
                };
                let spare = largest(parts);
                for (i, &p) in parts.iter().enumerate() {
                    let mut c = finite(p);
                    if i == spare {
                        c.atoms = c.atoms.plus(Size::Finite(m - n));
                    }
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    fn reply_on_b(&self, parts: &[CellBPrime], cell: CellB) -> Result<Vec<CellB>, GameError> {
        if parts.len() == 1 {
            return Ok(vec![cell]);
        }
        match cell {
            Size::Finite(n) => {
                let sizes: Vec<Size> = parts.iter().map(|p| p.matching_size()).collect();
                let total = sizes.iter().fold(Size::Finite(0), |a, &b| a.plus(b));
                if total != Size::Finite(n) {
                    return Err(unavailable(format!(
                        "a B cell of size {n} is matched with parts of total size {total}"
                    )));
                }
                Ok(sizes)
            }
            Size::Infinite => {
                // The selected part depends only on the multiset of parts.
                let chosen = parts
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.matching_size().is_finite())
                    .max_by_key(|(i, p)| (p.atomless, p.atoms, std::cmp::Reverse(*i)))
                    .map(|(i, _)| i)
                    .ok_or_else(|| unavailable("no infinite-size part to match the infinite cell"))?;
                Ok(parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        if i == chosen {
                            Size::Infinite
                        } else {
                            match (self, p.matching_size()) {
                                (DuplicatorStrategy::MatchFiniteSizes, s @ Size::Finite(_)) => s,
                                _ => Size::Finite(1),
                            }
                        }
                    })
                    .collect())
            }
        }
    }
}

/// Index of the largest finite part, first among equals.
fn largest(parts: &[CellB]) -> usize {
    let mut best = 0;
    for (i, p) in parts.iter().enumerate() {
        if p > &parts[best] {
            best = i;
        }
    }
    best
}

impl GameState {
    /// One matched pair: all of B against B′ with infinitely many atoms and
    /// an atomless part. Spoiler picks `rounds[r]` elements in round `r`.
    pub fn new(rounds: [u32; 3]) -> Self {
        GameState {
            rounds,
            played: 0,
            cells: vec![(Size::Infinite, CellBPrime::new(Size::Infinite, true))],
            pending: None,
            last_reply: None,
            history: Vec::new(),
        }
    }

    pub fn round(&self) -> usize {
        self.played + 1
    }

    pub fn rounds(&self) -> [u32; 3] {
        self.rounds
    }

    pub fn is_over(&self) -> bool {
        self.played == 3
    }

    pub fn cells(&self) -> &[(CellB, CellBPrime)] {
        &self.cells
    }

    pub fn history(&self) -> &[Chosen] {
        &self.history
    }

    pub fn pending(&self) -> Option<&Move> {
        self.pending.as_ref()
    }

    /// Duplicator's refinement in the last completed round.
    pub fn last_reply(&self) -> Option<&Move> {
        self.last_reply.as_ref()
    }

    fn max_parts(&self) -> usize {
        1usize << self.rounds[self.played].min(16)
    }

    /// Records spoiler's refinement for the current round.
    pub fn spoiler_move(&self, mv: Move) -> Result<GameState, GameError> {
        if self.is_over() {
            return Err(GameError::IllegalMove("the game is over".into()));
        }
        if self.pending.is_some() {
            return Err(GameError::IllegalMove("duplicator has not replied".into()));
        }
        let expected = spoiler_side(self.played);
        if mv.side() != expected {
            return Err(GameError::IllegalMove(format!(
                "round {} is played on {expected:?}",
                self.round()
            )));
        }
        let n = self.rounds[self.played];
        let mut seen = BTreeSet::new();
        let mut check = |cell: usize, codes: Vec<u32>, legal: Result<(), String>| {
            let illegal = |reason: String| GameError::IllegalSplit { cell, reason };
            if cell >= self.cells.len() {
                return Err(GameError::IllegalMove(format!("no cell {cell}")));
            }
            if !seen.insert(cell) {
                return Err(GameError::IllegalMove(format!("cell {cell} subdivided twice")));
            }
            if codes.len() > self.max_parts() {
                return Err(illegal(format!("{} parts, but {n} elements make at most {}", codes.len(), self.max_parts())));
            }
            if codes.iter().any(|&c| c >> n != 0) {
                return Err(illegal(format!("a part lies under an element beyond the {n} chosen")));
            }
            if codes.iter().collect::<BTreeSet<_>>().len() != codes.len() {
                return Err(illegal("two parts lie under the same chosen elements".into()));
            }
            legal.map_err(illegal)
        };
        match &mv {
            Move::B(subs) => {
                for s in subs {
                    let cell = self.cells.get(s.cell).map_or(Size::Infinite, |c| c.0);
                    let parts: Vec<CellB> = s.parts.iter().map(|p| p.cell).collect();
                    check(s.cell, s.parts.iter().map(|p| p.elements).collect(), check_split_b(cell, &parts))?;
                }
            }
            Move::BPrime(subs) => {
                for s in subs {
                    let cell = self.cells.get(s.cell).map_or(CellBPrime::new(Size::Infinite, true), |c| c.1);
                    let parts: Vec<CellBPrime> = s.parts.iter().map(|p| p.cell).collect();
                    check(s.cell, s.parts.iter().map(|p| p.elements).collect(), check_split_b_prime(cell, &parts))?;
                }
            }
        }
        let mut next = self.clone();
        next.pending = Some(mv);
        Ok(next)
    }

    /// Duplicator's refinement under `strategy`, copying spoiler's element
    /// labels part for part.
    pub fn duplicator_reply(&self, strategy: &impl Duplicator) -> Result<GameState, GameError> {
        let pending = self.pending.as_ref().ok_or_else(|| GameError::IllegalMove("no pending spoiler move".into()))?;
        let reply = match pending {
            Move::B(subs) => {
                let mut out = Vec::new();
                for s in subs {
                    let parts: Vec<CellB> = s.parts.iter().map(|p| p.cell).collect();
                    let cells = strategy.reply_on_b_prime(&parts, self.cells[s.cell].1)?;
                    out.push(Subdivision {
                        cell: s.cell,
                        parts: cells.into_iter().zip(&s.parts).map(|(cell, p)| Part { cell, elements: p.elements }).collect(),
                    });
                }
                Move::BPrime(out)
            }
            Move::BPrime(subs) => {
                let mut out = Vec::new();
                for s in subs {
                    let parts: Vec<CellBPrime> = s.parts.iter().map(|p| p.cell).collect();
                    let cells = strategy.reply_on_b(&parts, self.cells[s.cell].0)?;
                    out.push(Subdivision {
                        cell: s.cell,
                        parts: cells.into_iter().zip(&s.parts).map(|(cell, p)| Part { cell, elements: p.elements }).collect(),
                    });
                }
                Move::B(out)
            }
        };
        self.apply_reply(reply)
    }

    /// Applies an explicit duplicator refinement. It must subdivide the
    /// same cells into the same number of parts, legally; part `j` of a
    /// cell is matched with spoiler's part `j`.
    pub fn apply_reply(&self, reply: Move) -> Result<GameState, GameError> {
        let pending = self.pending.as_ref().ok_or_else(|| GameError::IllegalMove("no pending spoiler move".into()))?;
        if reply.side() == pending.side() {
            return Err(GameError::IllegalMove("duplicator replies on the other algebra".into()));
        }
        // Per cell: (B parts, B' parts), each with labels.
        let mut splits: HashMap<usize, (Vec<Part<CellB>>, Vec<Part<CellBPrime>>)> = HashMap::new();
        match (pending, &reply) {
            (Move::B(s), Move::BPrime(d)) | (Move::BPrime(d), Move::B(s)) => {
                if s.len() != d.len() || s.iter().zip(d).any(|(x, y)| x.cell != y.cell || x.parts.len() != y.parts.len()) {
                    return Err(GameError::IllegalMove("reply does not match spoiler's subdivisions".into()));
                }
                for (x, y) in s.iter().zip(d) {
                    splits.insert(x.cell, (x.parts.clone(), y.parts.clone()));
                }
            }
            _ => unreachable!("sides differ"),
        }
        for (&cell, (bs, bps)) in &splits {
            let (b, bp) = self.cells[cell];
            let bsz: Vec<CellB> = bs.iter().map(|p| p.cell).collect();
            let bpsz: Vec<CellBPrime> = bps.iter().map(|p| p.cell).collect();
            check_split_b(b, &bsz).map_err(|reason| GameError::IllegalSplit { cell, reason })?;
            check_split_b_prime(bp, &bpsz).map_err(|reason| GameError::IllegalSplit { cell, reason })?;
        }
        let round = self.played;
        let n = self.rounds[round];
        let mut next = GameState {
            rounds: self.rounds,
            played: round + 1,
            cells: Vec::new(),
            pending: None,
            last_reply: None,
            history: Vec::new(),
        };
        // New indices of each old cell, and the labels on each side.
        let mut children: Vec<Vec<usize>> = Vec::with_capacity(self.cells.len());
        let mut labels: Vec<(u32, u32)> = Vec::new();
        for (i, &(b, bp)) in self.cells.iter().enumerate() {
            let mut kids = Vec::new();
            match splits.get(&i) {
                Some((bs, bps)) => {
                    for (x, y) in bs.iter().zip(bps) {
                        kids.push(next.cells.len());
                        next.cells.push((x.cell, y.cell));
                        labels.push((x.elements, y.elements));
                    }
                }
                None => {
                    kids.push(next.cells.len());
                    next.cells.push((b, bp));
                    labels.push((0, 0));
                }
            }
            children.push(kids);
        }
        next.last_reply = Some(reply);
        let lift = |set: &BTreeSet<usize>| set.iter().flat_map(|&i| children[i].iter().copied()).collect();
        for c in &self.history {
            next.history.push(Chosen {
                b: lift(&c.b),
                b_prime: lift(&c.b_prime),
                ..c.clone()
            });
        }
        for e in 0..n {
            let under = |side: fn(&(u32, u32)) -> u32| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| side(l) >> e & 1 == 1)
                    .map(|(i, _)| i)
                    .collect()
            };
            next.history.push(Chosen {
                round: round + 1,
                index: e,
                by: pending.side(),
                b: under(|l| l.0),
                b_prime: under(|l| l.1),
            });
        }
        Ok(next)
    }

    /// Whether duplicator won the finished game: every matched pair is
    /// nonzero on both sides and size-respecting (a B cell is no larger
    /// than its partner, and infinite only against infinite), and every
    /// chosen element covers the same cells on both sides.
    pub fn winner(&self) -> Result<Winner, GameError> {
        if !self.is_over() {
            return Err(GameError::GameIncomplete);
        }
        let cells_ok = self.cells.iter().all(|&(b, bp)| b != Size::Finite(0) && bp.is_nonzero() && b <= bp.matching_size());
        let history_ok = self.history.iter().all(|c| c.b == c.b_prime);
        Ok(if cells_ok && history_ok { Winner::Duplicator } else { Winner::Spoiler })
    }

    /// Every B cell is no larger than its B′ partner.
    pub fn sizes_respected(&self) -> bool {
        self.cells.iter().all(|&(b, bp)| b <= bp.matching_size())
    }
}

/// Bounds for [`exhaustive_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameBudget {
    pub rounds: [u32; 3],
    /// Most parts spoiler may split one cell into.
    pub split_bound: usize,
    /// Largest finite size spoiler may give a part.
    pub max_finite: u32,
    pub node_cap: u64,
}

impl GameBudget {
    pub fn new(rounds: [u32; 3], split_bound: usize) -> Self {
        GameBudget {
            rounds,
            split_bound,
            max_finite: 4,
            node_cap: 50_000_000,
        }
    }
}

/// Outcome of an exhaustive check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub duplicator_wins: bool,
    /// Distinct (round, matched pair) positions examined.
    pub positions: u64,
    /// Spoiler splits examined.
    pub spoiler_moves: u64,
    /// A cell pair and the spoiler splits leading to a loss, if any.
    pub losing_line: Option<Vec<String>>,
}

/// Whether `strategy` beats every spoiler within `budget`.
///
/// Both the strategy and the winning condition act on each matched pair
/// separately, so the game is won iff it is won from every pair that can
/// arise; positions are memoized per (round, pair). Splits are taken up to
/// reordering of parts, and element labels are not enumerated since they
/// never constrain a duplicator that copies them.
pub fn exhaustive_check(budget: GameBudget, strategy: &impl Duplicator) -> Result<ExhaustiveReport, GameError> {
    let mut ex = Explorer {
        budget,
        strategy,
        memo: HashMap::new(),
        moves: 0,
    };
    let start = (Size::Infinite, CellBPrime::new(Size::Infinite, true));
    let line = ex.lost(start, 0)?;
    Ok(ExhaustiveReport {
        duplicator_wins: line.is_none(),
        positions: ex.memo.len() as u64,
        spoiler_moves: ex.moves,
        losing_line: line,
    })
}

/// Convenience wrapper with the default strategy and finite sizes up to 4.
pub fn exhaustive_check_rounds(n1: u32, n2: u32, n3: u32, split_bound: usize) -> Result<bool, GameError> {
    Ok(exhaustive_check(GameBudget::new([n1, n2, n3], split_bound), &DuplicatorStrategy::default())?.duplicator_wins)
}

struct Explorer<'a, D> {
    budget: GameBudget,
    strategy: &'a D,
    memo: HashMap<(usize, (CellB, CellBPrime)), Option<Vec<String>>>,
    moves: u64,
}

impl<D: Duplicator> Explorer<'_, D> {
    /// A losing line from `pair` at round `r`, or `None` if duplicator wins.
    fn lost(&mut self, pair: (CellB, CellBPrime), r: usize) -> Result<Option<Vec<String>>, GameError> {
        if r == 3 {
            let (b, bp) = pair;
            let ok = bp.is_nonzero() && b <= bp.matching_size();
            return Ok((!ok).then(|| vec![format!("final pair {b} vs {bp} is not size-respecting")]));
        }
        if let Some(v) = self.memo.get(&(r, pair)) {
            return Ok(v.clone());
        }
        let max_parts = self.budget.split_bound.min(1usize << self.budget.rounds[r].min(16)).max(1);
        let result = match spoiler_side(r) {
            Side::B => {
                let options = b_options(self.budget.max_finite);
                let mut found = None;
                for parts in splits(pair.0, &options, max_parts, |c, p| check_split_b(c, p).is_ok()) {
                    if let Some(line) = self.after(pair, r, || self.strategy.reply_on_b_prime(&parts, pair.1).map(|bp| parts.iter().copied().zip(bp).collect()), &format!("round {}: B {} -> {:?}", r + 1, pair.0, parts))? {
                        found = Some(line);
                        break;
                    }
                }
                found
            }
            Side::BPrime => {
                let options = b_prime_options(self.budget.max_finite);
                let mut found = None;
                for parts in splits(pair.1, &options, max_parts, |c, p| check_split_b_prime(c, p).is_ok()) {
                    let label = format!("round {}: B' {} -> [{}]", r + 1, pair.1, parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
                    if let Some(line) = self.after(pair, r, || self.strategy.reply_on_b(&parts, pair.0).map(|b| b.into_iter().zip(parts.iter().copied()).collect()), &label)? {
                        found = Some(line);
                        break;
                    }
                }
                found
            }
        };
        self.memo.insert((r, pair), result.clone());
        Ok(result)
    }

    fn after(
        &mut self,
        pair: (CellB, CellBPrime),
        r: usize,
        reply: impl FnOnce() -> Result<Vec<(CellB, CellBPrime)>, GameError>,
        label: &str,
    ) -> Result<Option<Vec<String>>, GameError> {
        self.moves += 1;
        if self.moves > self.budget.node_cap {
            return Err(GameError::BudgetExceeded(self.budget.node_cap));
        }
        let pairs = match reply() {
            Ok(p) => p,
            Err(GameError::StrategyUnavailable(why)) => {
                return Ok(Some(vec![label.to_string(), format!("no reply: {why}")]));
            }
            Err(e) => return Err(e),
        };
        let b: Vec<CellB> = pairs.iter().map(|p| p.0).collect();
        let bp: Vec<CellBPrime> = pairs.iter().map(|p| p.1).collect();
        if let Err(why) = check_split_b(pair.0, &b).and(check_split_b_prime(pair.1, &bp)) {
            return Ok(Some(vec![label.to_string(), format!("illegal reply: {why}")]));
        }
        for p in pairs {
            if let Some(mut line) = self.lost(p, r + 1)? {
                line.insert(0, label.to_string());
                return Ok(Some(line));
            }
        }
        Ok(None)
    }
}

fn b_options(max_finite: u32) -> Vec<CellB> {
    (1..=max_finite).map(Size::Finite).chain([Size::Infinite]).collect()
}

fn b_prime_options(max_finite: u32) -> Vec<CellBPrime> {
    let mut out = Vec::new();
    for atoms in (0..=max_finite).map(Size::Finite).chain([Size::Infinite]) {
        for atomless in [false, true] {
            let c = CellBPrime::new(atoms, atomless);
            if c.is_nonzero() {
                out.push(c);
            }
        }
    }
    out
}

/// Legal splits of `cell` into 1 to `max_parts` parts drawn from `options`,
/// one per multiset (parts in nondecreasing option order). The one-part
/// split is the cell itself.
fn splits<T: Copy + PartialEq>(cell: T, options: &[T], max_parts: usize, legal: impl Fn(T, &[T]) -> bool) -> Vec<Vec<T>> {
    let mut out = vec![vec![cell]];
    let mut current = Vec::new();
    fn go<T: Copy>(options: &[T], start: usize, k: usize, current: &mut Vec<T>, visit: &mut dyn FnMut(&[T])) {
        if current.len() == k {
            visit(current);
            return;
        }
        for i in start..options.len() {
            current.push(options[i]);
            go(options, i, k, current, visit);
            current.pop();
        }
    }
    for k in 2..=max_parts {
        go(options, 0, k, &mut current, &mut |parts| {
            if legal(cell, parts) {
                out.push(parts.to_vec());
            }
        });
    }
    out
}

/// Every labeled spoiler subdivision of one cell: a set of 1 to
/// `max_parts` distinct labels below `2^n`, each with a size from
/// `options`, legal for `cell`. Parts are listed in label order.
pub fn labeled_splits<T: Copy>(cell: T, options: &[T], n: u32, max_parts: usize, legal: impl Fn(T, &[T]) -> bool) -> Vec<Vec<Part<T>>> {
    let labels = 1u32 << n;
    let mut out = Vec::new();
    for set in 1u64..(1u64 << labels) {
        let codes: Vec<u32> = (0..labels).filter(|c| set >> c & 1 == 1).collect();
        if codes.len() > max_parts {
            continue;
        }
        let k = codes.len();
        let mut digits = vec![0usize; k];
        loop {
            let sizes: Vec<T> = digits.iter().map(|&d| options[d]).collect();
            if legal(cell, &sizes) {
                out.push(codes.iter().zip(&sizes).map(|(&elements, &cell)| Part { cell, elements }).collect());
            }
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                digits[i] += 1;
                if digits[i] < options.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    out
}

/// Plays every labeled spoiler move within `budget` jointly over all cells
/// through the [`GameState`] API and reports whether duplicator wins every
/// play. Exponential in the number of cells; meant for tiny budgets.
pub fn joint_check(budget: GameBudget, strategy: &impl Duplicator) -> Result<bool, GameError> {
    let mut nodes = 0u64;
    joint(&GameState::new(budget.rounds), budget, strategy, &mut nodes)
}

fn joint(state: &GameState, budget: GameBudget, strategy: &impl Duplicator, nodes: &mut u64) -> Result<bool, GameError> {
    if state.is_over() {
        return Ok(state.winner()? == Winner::Duplicator);
    }
    let r = state.played;
    let n = budget.rounds[r];
    let max_parts = budget.split_bound.min(1 << n.min(16)).max(1);
    let side = spoiler_side(r);
    // Per-cell options, then their product.
    let per_cell: Vec<Vec<Option<Move>>> = state
        .cells
        .iter()
        .enumerate()
        .map(|(i, &(b, bp))| match side {
            Side::B => labeled_splits(b, &b_options(budget.max_finite), n, max_parts, |c, p| check_split_b(c, p).is_ok())
                .into_iter()
                .map(|parts| Some(Move::B(vec![Subdivision { cell: i, parts }])))
                .collect(),
            Side::BPrime => labeled_splits(bp, &b_prime_options(budget.max_finite), n, max_parts, |c, p| check_split_b_prime(c, p).is_ok())
                .into_iter()
                .map(|parts| Some(Move::BPrime(vec![Subdivision { cell: i, parts }])))
                .collect(),
        })
        .map(|mut v: Vec<Option<Move>>| {
            // Leaving a cell alone is always possible.
            v.push(None);
            v
        })
        .collect();
    let mut digits = vec![0usize; per_cell.len()];
    loop {
        *nodes += 1;
        if *nodes > budget.node_cap {
            return Err(GameError::BudgetExceeded(budget.node_cap));
        }
        let mut b_subs = Vec::new();
        let mut bp_subs = Vec::new();
        for (opts, &d) in per_cell.iter().zip(&digits) {
            match &opts[d] {
                Some(Move::B(s)) => b_subs.extend(s.iter().cloned()),
                Some(Move::BPrime(s)) => bp_subs.extend(s.iter().cloned()),
                None => {}
            }
        }
        let mv = match side {
            Side::B => Move::B(b_subs),
            Side::BPrime => Move::BPrime(bp_subs),
        };
        let after = state.spoiler_move(mv)?;
        match after.duplicator_reply(strategy) {
            Ok(next) => {
                if !joint(&next, budget, strategy, nodes)? {
                    return Ok(false);
                }
            }
            Err(GameError::StrategyUnavailable(_)) | Err(GameError::IllegalSplit { .. }) => return Ok(false),
            Err(e) => return Err(e),
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(true);
            }
            digits[i] += 1;
            if digits[i] < per_cell[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// One line of an interactive script: a subdivision of one cell, or of
/// several. B parts give `size`; B′ parts give `atoms` and `atomless`.
/// `in` lists the chosen elements (0-based) above the part.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScriptLine {
    One(ScriptSubdivision),
    Many { subdivisions: Vec<ScriptSubdivision> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptSubdivision {
    pub cell: usize,
    pub parts: Vec<ScriptPart>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptPart {
    #[serde(default)]
    pub size: Option<Size>,
    #[serde(default)]
    pub atoms: Option<Size>,
    #[serde(default)]
    pub atomless: Option<bool>,
    #[serde(default, rename = "in")]
    pub elements: Vec<u32>,
}

impl ScriptLine {
    /// The move this line describes in the current round of `state`.
    pub fn to_move(&self, state: &GameState) -> Result<Move, GameError> {
        let subs = match self {
            ScriptLine::One(s) => std::slice::from_ref(s),
            ScriptLine::Many { subdivisions } => subdivisions.as_slice(),
        };
        if state.is_over() {
            return Err(GameError::IllegalMove("the game is over".into()));
        }
        let code = |p: &ScriptPart| -> Result<u32, GameError> {
            p.elements.iter().try_fold(0u32, |m, &e| {
                if e >= 32 {
                    Err(GameError::IllegalMove(format!("element index {e} is too large")))
                } else {
                    Ok(m | 1 << e)
                }
            })
        };
        match spoiler_side(state.played) {
            Side::B => subs
                .iter()
                .map(|s| {
                    let parts = s
                        .parts
                        .iter()
                        .map(|p| match (p.size, p.atoms, p.atomless) {
                            (Some(size), None, None) => Ok(Part { cell: size, elements: code(p)? }),
                            _ => Err(GameError::IllegalMove("parts on B give only \"size\"".into())),
                        })
                        .collect::<Result<_, _>>()?;
                    Ok(Subdivision { cell: s.cell, parts })
                })
                .collect::<Result<_, _>>()
                .map(Move::B),
            Side::BPrime => subs
                .iter()
                .map(|s| {
                    let parts = s
                        .parts
                        .iter()
                        .map(|p| match (p.size, p.atoms) {
                            (None, Some(atoms)) => Ok(Part {
                                cell: CellBPrime::new(atoms, p.atomless.unwrap_or(false)),
                                elements: code(p)?,
                            }),
                            _ => Err(GameError::IllegalMove("parts on B' give \"atoms\" and \"atomless\"".into())),
                        })
                        .collect::<Result<_, _>>()?;
                    Ok(Subdivision { cell: s.cell, parts })
                })
                .collect::<Result<_, _>>()
                .map(Move::BPrime),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(parts: &[(Size, u32)]) -> Vec<Part<CellB>> {
        parts.iter().map(|&(cell, elements)| Part { cell, elements }).collect()
    }

    const INF: Size = Size::Infinite;
    const fn fin(n: u32) -> Size {
        Size::Finite(n)
    }

    #[test]
    fn new_game() {
        let g = GameState::new([1, 1, 1]);
        assert_eq!(g.cells().len(), 1);
        assert_eq!(g.cells()[0].1.matching_size(), INF);
        assert_eq!(g.round(), 1);
    }

    #[test]
    fn split_legality() {
        assert!(check_split_b(INF, &[fin(2), INF]).is_ok());
        assert!(check_split_b(fin(3), &[fin(1), fin(1), fin(1)]).is_ok());
        assert!(check_split_b(fin(3), &[fin(2), fin(2)]).is_err());
        assert!(check_split_b(INF, &[fin(1), fin(1)]).is_err());
        let atomless = CellBPrime::new(INF, true);
        assert!(check_split_b_prime(atomless, &[CellBPrime::new(fin(3), false), CellBPrime::new(INF, false)]).is_err());
        assert!(check_split_b_prime(atomless, &[CellBPrime::new(fin(3), true), CellBPrime::new(INF, false)]).is_ok());
        assert!(check_split_b_prime(CellBPrime::new(fin(2), false), &[CellBPrime::new(fin(2), false), CellBPrime::new(fin(0), false)]).is_err());
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let g = GameState::new([1, 1, 1]);
        let err = g.spoiler_move(Move::B(vec![Subdivision { cell: 0, parts: b(&[(fin(1), 0), (fin(1), 1)]) }]));
        assert!(matches!(err, Err(GameError::IllegalSplit { cell: 0, .. })));
        let err = g.spoiler_move(Move::BPrime(vec![]));
        assert!(matches!(err, Err(GameError::IllegalMove(_))));
        let err = g.spoiler_move(Move::B(vec![Subdivision { cell: 0, parts: b(&[(fin(1), 0), (INF, 0)]) }]));
        assert!(matches!(err, Err(GameError::IllegalSplit { .. })));
        assert_eq!(g.winner(), Err(GameError::GameIncomplete));
    }

    #[test]
    fn round_one_matches_sizes() {
        let g = GameState::new([1, 1, 1]);
        let g = g
            .spoiler_move(Move::B(vec![Subdivision { cell: 0, parts: b(&[(fin(3), 1), (INF, 0)]) }]))
            .unwrap()
            .duplicator_reply(&DuplicatorStrategy::SingleAtoms)
            .unwrap();
        assert_eq!(g.cells()[0], (fin(3), CellBPrime::new(fin(3), false)));
        assert_eq!(g.cells()[1], (INF, CellBPrime::new(INF, true)));
        assert_eq!(g.history()[0].b, BTreeSet::from([0]));
    }

    #[test]
    fn round_two_strategies() {
        let parts = [CellBPrime::new(fin(2), false), CellBPrime::new(INF, true)];
        assert_eq!(DuplicatorStrategy::SingleAtoms.reply_on_b(&parts, INF).unwrap(), vec![fin(1), INF]);
        assert_eq!(DuplicatorStrategy::MatchFiniteSizes.reply_on_b(&parts, INF).unwrap(), vec![fin(2), INF]);
        let parts = [CellBPrime::new(fin(1), false), CellBPrime::new(fin(2), false)];
        assert_eq!(DuplicatorStrategy::SingleAtoms.reply_on_b(&parts, fin(3)).unwrap(), vec![fin(1), fin(2)]);
    }

    #[test]
    fn round_three_identical_finite_split() {
        let s = DuplicatorStrategy::SingleAtoms;
        let reply = s.reply_on_b_prime(&[fin(1), fin(2)], CellBPrime::new(fin(3), false)).unwrap();
        assert_eq!(reply, vec![CellBPrime::new(fin(1), false), CellBPrime::new(fin(2), false)]);
        // A larger partner absorbs the surplus in the largest part.
        let reply = s.reply_on_b_prime(&[fin(1), fin(2)], CellBPrime::new(fin(5), false)).unwrap();
        assert_eq!(reply, vec![CellBPrime::new(fin(1), false), CellBPrime::new(fin(4), false)]);
    }

    #[test]
    fn zero_move_game() {
        let mut g = GameState::new([0, 0, 0]);
        for r in 0..3 {
            let mv = match spoiler_side(r) {
                Side::B => Move::B(vec![]),
                Side::BPrime => Move::BPrime(vec![]),
            };
            g = g.spoiler_move(mv).unwrap().duplicator_reply(&DuplicatorStrategy::default()).unwrap();
        }
        assert_eq!(g.winner(), Ok(Winner::Duplicator));
        assert!(exhaustive_check_rounds(0, 0, 0, 4).unwrap());
    }

    /// Answers a finite B part with a single atom regardless of its size.
    struct Undersized;

    impl Duplicator for Undersized {
        fn reply_on_b_prime(&self, parts: &[CellB], cell: CellBPrime) -> Result<Vec<CellBPrime>, GameError> {
            let shrunk: Vec<CellB> = parts.iter().map(|&p| if p.is_finite() { fin(1) } else { p }).collect();
            DuplicatorStrategy::SingleAtoms.reply_on_b_prime(&shrunk, cell)
        }
        fn reply_on_b(&self, parts: &[CellBPrime], cell: CellB) -> Result<Vec<CellB>, GameError> {
            DuplicatorStrategy::SingleAtoms.reply_on_b(parts, cell)
        }
    }

    #[test]
    fn broken_strategy_loses() {
        let g = GameState::new([1, 0, 1])
            .spoiler_move(Move::B(vec![Subdivision { cell: 0, parts: b(&[(fin(3), 1), (INF, 0)]) }]))
            .unwrap()
            .duplicator_reply(&Undersized)
            .unwrap();
        assert_eq!(g.cells()[0], (fin(3), CellBPrime::new(fin(1), false)));
        let g = g.spoiler_move(Move::BPrime(vec![])).unwrap().duplicator_reply(&Undersized).unwrap();
        // Spoiler splits the mismatched cell; one atom cannot be split in three.
        let g = g.spoiler_move(Move::B(vec![Subdivision { cell: 0, parts: b(&[(fin(1), 0), (fin(2), 1)]) }])).unwrap();
        assert!(matches!(g.duplicator_reply(&Undersized), Err(GameError::StrategyUnavailable(_))));
        let budget = GameBudget { max_finite: 2, ..GameBudget::new([1, 0, 1], 2) };
        assert!(!exhaustive_check(budget, &Undersized).unwrap().duplicator_wins);
        assert!(!joint_check(budget, &Undersized).unwrap());
    }

    #[test]
    fn winner_checks_history() {
        let g = GameState::new([1, 0, 0])
            .spoiler_move(Move::B(vec![Subdivision { cell: 0, parts: b(&[(fin(1), 1), (INF, 0)]) }]))
            .unwrap();
        // Correct sizes, but the reply labels the wrong part as chosen.
        let reply = Move::BPrime(vec![Subdivision {
            cell: 0,
            parts: vec![
                Part { cell: CellBPrime::new(fin(1), false), elements: 0 },
                Part { cell: CellBPrime::new(INF, true), elements: 1 },
            ],
        }]);
        let mut g = g.apply_reply(reply).unwrap();
        for r in 1..3 {
            let mv = match spoiler_side(r) {
                Side::B => Move::B(vec![]),
                Side::BPrime => Move::BPrime(vec![]),
            };
            g = g.spoiler_move(mv).unwrap().duplicator_reply(&DuplicatorStrategy::default()).unwrap();
        }
        assert_eq!(g.winner(), Ok(Winner::Spoiler));
    }

    #[test]
    fn exhaustive_small_budgets() {
        assert!(exhaustive_check_rounds(1, 1, 1, 2).unwrap());
        let budget = GameBudget { max_finite: 2, ..GameBudget::new([1, 1, 1], 2) };
        assert!(joint_check(budget, &DuplicatorStrategy::SingleAtoms).unwrap());
        assert!(exhaustive_check(budget, &DuplicatorStrategy::SingleAtoms).unwrap().duplicator_wins);
        assert!(exhaustive_check(budget, &DuplicatorStrategy::MatchFiniteSizes).unwrap().duplicator_wins);
    }

    #[test]
    fn budget_exceeded() {
        let budget = GameBudget { node_cap: 3, ..GameBudget::new([2, 2, 2], 4) };
        assert_eq!(exhaustive_check(budget, &DuplicatorStrategy::default()), Err(GameError::BudgetExceeded(3)));
    }

    #[test]
    fn script_lines() {
        let g = GameState::new([1, 1, 1]);
        let line: ScriptLine = serde_json::from_str(r#"{"cell": 0, "parts": [{"size": 2, "in": [0]}, {"size": "inf"}]}"#).unwrap();
        let mv = line.to_move(&g).unwrap();
        let g = g.spoiler_move(mv).unwrap().duplicator_reply(&DuplicatorStrategy::default()).unwrap();
        let line: ScriptLine = serde_json::from_str(r#"{"cell": 1, "parts": [{"atoms": 2, "in": [0]}, {"atoms": "inf", "atomless": true}]}"#).unwrap();
        let mv = line.to_move(&g).unwrap();
        let g = g.spoiler_move(mv).unwrap().duplicator_reply(&DuplicatorStrategy::default()).unwrap();
        assert_eq!(g.cells()[1].0, fin(1));
        let bad: ScriptLine = serde_json::from_str(r#"{"cell": 0, "parts": [{"atoms": 2}]}"#).unwrap();
        assert!(bad.to_move(&g).is_err());
        let oversized: ScriptLine = serde_json::from_str(r#"{"cell": 0, "parts": [{"size": 1}, {"size": 2}]}"#).unwrap();
        let mv = oversized.to_move(&g).unwrap();
        assert!(matches!(g.spoiler_move(mv), Err(GameError::IllegalSplit { .. })));
    }

    fn arb_b_split(cell: CellB) -> impl Strategy<Value = Vec<CellB>> {
        let opts = b_options(4);
        proptest::collection::vec(proptest::sample::select(opts), 1..=4)
            .prop_filter("legal", move |p| check_split_b(cell, p).is_ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn replies_conserve_and_respect_sizes(
            first in arb_b_split(INF),
            second_pick in 0usize..64,
            third_pick in 0usize..64,
        ) {
            let s = DuplicatorStrategy::default();
            let bp = s.reply_on_b_prime(&first, CellBPrime::new(INF, true)).unwrap();
            prop_assert!(check_split_b_prime(CellBPrime::new(INF, true), &bp).is_ok());
            let pairs: Vec<(CellB, CellBPrime)> = first.iter().copied().zip(bp).collect();
            for &(b, bp) in &pairs {
                prop_assert!(b <= bp.matching_size());
                prop_assert_eq!(b.is_finite(), bp.matching_size().is_finite());
            }
            // Round 2 on one pair, round 3 on one resulting pair.
            let (b, bp) = pairs[second_pick % pairs.len()];
            let options = splits(bp, &b_prime_options(4), 4, |c, p| check_split_b_prime(c, p).is_ok());
            let split = &options[second_pick % options.len()];
            let reply = s.reply_on_b(split, b).unwrap();
            prop_assert!(check_split_b(b, &reply).is_ok());
            let pairs: Vec<(CellB, CellBPrime)> = reply.into_iter().zip(split.iter().copied()).collect();
            for &(b, bp) in &pairs {
                prop_assert!(b <= bp.matching_size());
            }
            let (b, bp) = pairs[third_pick % pairs.len()];
            let options = splits(b, &b_options(4), 4, |c, p| check_split_b(c, p).is_ok());
            let split = &options[third_pick % options.len()];
            let reply = s.reply_on_b_prime(split, bp).unwrap();
            prop_assert!(check_split_b_prime(bp, &reply).is_ok());
            for (b, bp) in split.iter().zip(&reply) {
                prop_assert!(*b <= bp.matching_size());
            }
        }
    }
}

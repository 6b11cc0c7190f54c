//! Exact `L* = max_D min_S |S|`.
//!
//! `L* ≥ k` is decided as a satisfiability problem over decoding choices.
//! Every move of the algorithm adds exactly one message, so a run is a walk
//! up the subset lattice. Variables:
//!
//! * `D(C, a)` for present `C` and `a ∉ C`: the adversary decodes `a` at `C`.
//! * `R(C, j)`: every run reaching `C` still skips at least `j` more messages.
//!
//! Clauses, for `j ≥ 1`:
//!
//! * `C` present: some `D(C, a)` holds, and `R(C, j) ∧ D(C, a) → R(C ∪ {a}, j)`.
//! * `C` absent: `R(C, j) → R(C ∪ {a}, j - 1)` for every `a ∉ C` (skip), and
//!   `R(C, j) ∧ D(B, a) → R(C ∪ {a}, j)` for every present `B ⊊ C` and
//!   `a ∉ C` (avoid).
//!
//! `R(C, j)` only exists for `j` up to the longest absent chain through `C`,
//! which bounds the skips left there. The clause set does not depend on `k`;
//! each threshold is one solve under the assumption `R(∅, k)`, so conflicts
//! learned at one threshold carry over to the next.

use varisat::{ExtendFormula, Lit, Solver, Var};

use super::{ChainError, DecodingChoice};
use crate::instance::{bits, MessageIndex, PliableInstance, ReceiverSet};
use crate::nested::{longest_chain_length, superset_chain_table};

/// Default cap on `m` for the exact search.
pub const L_STAR_MAX_M: usize = 12;

/// Exact `L*` over all decoding choices, with both algorithm options.
pub fn compute_l_star(inst: &PliableInstance) -> Result<usize, ChainError> {
    compute_l_star_capped(inst, L_STAR_MAX_M)
}

pub fn compute_l_star_capped(inst: &PliableInstance, cap: usize) -> Result<usize, ChainError> {
    solve(inst, cap, true, false).map(|(v, _)| v)
}

/// `L*` together with a total decoding choice attaining it.
pub fn l_star_witness(inst: &PliableInstance) -> Result<(usize, DecodingChoice), ChainError> {
    l_star_witness_capped(inst, L_STAR_MAX_M)
}

pub fn l_star_witness_capped(inst: &PliableInstance, cap: usize) -> Result<(usize, DecodingChoice), ChainError> {
    solve(inst, cap, true, true).map(|(v, d)| (v, d.expect("witness requested")))
}

/// `max_D min_S |S|` when only the skip option is allowed at absent
/// receivers.
pub fn l_star_option1_only(inst: &PliableInstance) -> Result<usize, ChainError> {
    solve(inst, L_STAR_MAX_M, false, false).map(|(v, _)| v)
}

fn solve(
    inst: &PliableInstance,
    cap: usize,
    allow_avoid: bool,
    want_witness: bool,
) -> Result<(usize, Option<DecodingChoice>), ChainError> {
    let m = inst.m();
    if m > cap {
        return Err(ChainError::TooLarge { m, cap });
    }
    let mut game = Game::new(inst, allow_avoid);
    let mut value = 0;
    let mut witness = None;
    for k in 1..=longest_chain_length(inst) {
        match game.feasible(k) {
            Some(choice) => {
                value = k;
                witness = Some(choice);
            }
            None => break,
        }
    }
    let choice = want_witness.then(|| game.complete(witness.as_deref()));
    Ok((value, choice))
}

struct Game<'a> {
    inst: &'a PliableInstance,
    full: u32,
    solver: Solver<'static>,
    /// `r_base[C] + j - 1` is `R(C, j)` for `1 ≤ j ≤ up[C]`.
    r_base: Vec<usize>,
    up: Vec<u8>,
    /// `d_base[C] + a` is `D(C, a)`; unused indices are never constrained.
    d_base: Vec<Option<usize>>,
}

impl<'a> Game<'a> {
    fn new(inst: &'a PliableInstance, allow_avoid: bool) -> Self {
        let m = inst.m();
        let size = 1usize << m;
        let full = inst.full().mask();
        let up = superset_chain_table(inst);
        let mut absent = vec![false; size];
        for h in inst.absent() {
            absent[h.mask() as usize] = true;
        }

        let mut next = 0usize;
        let mut r_base = vec![0; size];
        for (c, base) in r_base.iter_mut().enumerate() {
            *base = next;
            next += up[c] as usize;
        }
        let mut d_base = vec![None; size];
        for c in 0..full as usize {
            if !absent[c] {
                d_base[c] = Some(next);
                next += m;
            }
        }

        let mut solver = Solver::new();
        for _ in 0..next {
            solver.new_var();
        }
        let mut g = Game { inst, full, solver, r_base, up, d_base };
        let r = |g: &Game, c: u32, j: u8| g.r_lit(c, j);

        for c in 0..full {
            let free = !c & full;
            let top = g.up[c as usize];
            for j in 2..=top {
                g.solver.add_clause(&[!r(&g, c, j).unwrap(), r(&g, c, j - 1).unwrap()]);
            }
            if !absent[c as usize] {
                let choices: Vec<Lit> = bits(free).map(|a| g.d_lit(c, a)).collect();
                g.solver.add_clause(&choices);
                for a in bits(free) {
                    for j in 1..=top {
                        g.implies(&[r(&g, c, j).unwrap(), g.d_lit(c, a)], r(&g, c | 1 << a, j));
                    }
                }
                continue;
            }
            for j in 1..=top {
                for a in bits(free) {
                    if j > 1 {
                        g.implies(&[r(&g, c, j).unwrap()], r(&g, c | 1 << a, j - 1));
                    }
                }
            }
            if !allow_avoid {
                continue;
            }
            for b in submasks_below(c).filter(|&b| !absent[b as usize]) {
                for a in bits(free) {
                    for j in 1..=top {
                        g.implies(&[r(&g, c, j).unwrap(), g.d_lit(b, a)], r(&g, c | 1 << a, j));
                    }
                }
            }
        }
        g
    }

    fn r_lit(&self, c: u32, j: u8) -> Option<Lit> {
        (j >= 1 && j <= self.up[c as usize])
            .then(|| Var::from_index(self.r_base[c as usize] + j as usize - 1).positive())
    }

    fn d_lit(&self, c: u32, a: u32) -> Lit {
        let base = self.d_base[c as usize].expect("present receiver");
        Var::from_index(base + a as usize).positive()
    }

    /// `premises → conclusion`, where a missing conclusion is false.
    fn implies(&mut self, premises: &[Lit], conclusion: Option<Lit>) {
        let mut clause: Vec<Lit> = premises.iter().map(|&l| !l).collect();
        clause.extend(conclusion);
        self.solver.add_clause(&clause);
    }

    /// One-hot decoding table witnessing `L* ≥ k`, or `None`.
    fn feasible(&mut self, k: usize) -> Option<Vec<u32>> {
        let root = u8::try_from(k).ok().and_then(|k| self.r_lit(0, k))?;
        self.solver.assume(&[root]);
        if !self.solver.solve().expect("in-memory solver does not fail") {
            return None;
        }
        let model = self.solver.model().expect("satisfiable");
        let truth = |l: Lit| model[l.index()].is_positive();
        let mut table = vec![0u32; self.full as usize];
        for (c, slot) in table.iter_mut().enumerate() {
            if self.d_base[c].is_none() {
                continue;
            }
            let free = !(c as u32) & self.full;
            *slot = bits(free).filter(|&a| truth(self.d_lit(c as u32, a))).fold(0, |acc, a| acc | 1 << a);
        }
        Some(table)
    }

    /// A total decoding choice taking, at every present receiver, the
    /// smallest value allowed by `table` (any value when `table` is `None`).
    fn complete(&self, table: Option<&[u32]>) -> DecodingChoice {
        let mut d = DecodingChoice::new();
        for c in 0..self.full {
            if self.d_base[c as usize].is_none() {
                continue;
            }
            let allowed = table.map_or(!c & self.full, |t| t[c as usize]);
            debug_assert!(allowed != 0 && allowed & c == 0);
            d.insert_unchecked(ReceiverSet::from_mask(c), MessageIndex::from_bit(allowed.trailing_zeros()));
        }
        debug_assert!(d.is_total(self.inst));
        d
    }
}

/// Strict submasks of `c`, ascending.
fn submasks_below(c: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur == c {
            return None;
        }
        let succ = cur.wrapping_sub(c) & c;
        next = Some(succ);
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::min_skips;

    fn p1() -> PliableInstance {
        PliableInstance::from_lists(6, &[&[3], &[1, 2, 3, 4], &[3, 4, 5, 6]]).unwrap()
    }

    fn p2() -> PliableInstance {
        PliableInstance::from_lists(5, &[&[1, 2], &[1, 2, 4], &[1, 3], &[1, 3, 5]]).unwrap()
    }

    #[test]
    fn submask_helpers() {
        assert_eq!(submasks_below(0b101).collect::<Vec<_>>(), vec![0, 1, 4]);
        assert_eq!(submasks_below(0).count(), 0);
    }

    #[test]
    fn worked_examples() {
        assert_eq!(compute_l_star(&p1()).unwrap(), 1);
        assert_eq!(compute_l_star(&p2()).unwrap(), 1);
        assert_eq!(compute_l_star(&PliableInstance::from_lists(4, &[]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn option1_only_recovers_the_weaker_bound_on_p1() {
        assert_eq!(l_star_option1_only(&p1()).unwrap(), 2);
    }

    #[test]
    fn witness_attains_the_value() {
        for inst in [p1(), p2(), PliableInstance::from_lists(4, &[&[], &[1, 2], &[3, 4]]).unwrap()] {
            let (value, d) = l_star_witness(&inst).unwrap();
            assert!(d.is_total(&inst));
            assert_eq!(min_skips(&inst, &d).unwrap(), value, "{}", inst.to_json());
        }
    }

    #[test]
    fn perfect_two_nested() {
        let inst = PliableInstance::from_lists(4, &[&[], &[1, 2], &[3, 4]]).unwrap();
        assert_eq!(compute_l_star(&inst).unwrap(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = PliableInstance::from_lists(13, &[&[1]]).unwrap();
        assert_eq!(compute_l_star(&inst), Err(ChainError::TooLarge { m: 13, cap: 12 }));
    }

    #[test]
    fn ten_messages_two_halves() {
        let inst = PliableInstance::from_lists(10, &[&[], &[1, 2, 3, 4, 5], &[6, 7, 8, 9, 10]]).unwrap();
        assert_eq!(compute_l_star(&inst).unwrap(), 2);
    }
}

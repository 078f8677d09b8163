//! Bisimilarity: the binary fixpoint formula and a partition-refinement oracle.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{Formula, Literal, PositionIndex, Replacement};
use crate::lts::{Lts, LtsError, StateId};

/// `nu X. (/\ p(1) -> p(2)) & (/\ [a]_1 <a>_2 X) & {1<->2} X`
///
/// With no actions the formula only compares labels.
pub fn bisim_formula<S: AsRef<str>>(props: &[S], acts: &[S]) -> Formula {
    let x = || Formula::var("X");
    let labels = props.iter().map(|p| {
        Formula::implies(
            Literal {
                prop: p.as_ref().to_string(),
                pos: PositionIndex::of(1),
                negated: false,
            },
            Formula::lit(p.as_ref(), 2),
        )
    });
    let moves = acts
        .iter()
        .map(|a| Formula::box_(a.as_ref(), 1, Formula::diamond(a.as_ref(), 2, x())));
    let swap = Formula::repl(Replacement::swap(1, 2), x());
    let body = labels
        .chain(moves)
        .chain(std::iter::once(swap))
        .reduce(Formula::and)
        .expect("swap clause always present");
    Formula::nu("X", body)
}

/// Block index of every state in the coarsest bisimulation.
pub fn bisimulation_classes(lts: &Lts) -> Vec<usize> {
    let mut block = renumber(lts.states().map(|s| lts.labels(s).clone()).collect());
    let mut count = block.iter().max().map_or(0, |b| b + 1);
    loop {
        let sigs: Vec<(usize, BTreeSet<(&str, usize)>)> = lts
            .states()
            .map(|s| {
                let out = lts.transitions_from(s).map(|(a, t)| (a, block[t])).collect();
                (block[s], out)
            })
            .collect();
        let next = renumber(sigs);
        let next_count = next.iter().max().map_or(0, |b| b + 1);
        block = next;
        if next_count == count {
            return block;
        }
        count = next_count;
    }
}

/// Dense block ids in order of first occurrence.
fn renumber<K: Ord>(keys: Vec<K>) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    let mut out = Vec::with_capacity(keys.len());
    for key in keys {
        let next = ids.len();
        out.push(*ids.entry(key).or_insert(next));
    }
    out
}

pub fn bisimilar(lts: &Lts, s: StateId, t: StateId) -> Result<bool, LtsError> {
    for x in [s, t] {
        if x >= lts.num_states() {
            return Err(LtsError::UnknownState(x));
        }
    }
    let block = bisimulation_classes(lts);
    Ok(block[s] == block[t])
}

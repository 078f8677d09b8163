//! Rewriting arbitrary replacements into chains of simple ones.

use super::{Formula, Replacement};

/// Splits `kappa` (restricted to `1..=k`) into simple replacements
/// `[t_1, ..., t_n]` with `t_1 ∘ ... ∘ t_n = kappa`, so that the nesting
/// `t_1 (t_2 (... t_n phi))` is equivalent to `kappa phi`.
///
/// The sequence is the swaps realising the permutation part (cycle by cycle,
/// each cycle `(c0 c1 .. cl)` as `[c0<->c1], [c1<->c2], ...`), followed by one
/// copy per position that is merged onto a representative, in increasing
/// target order. Simple replacements come back unchanged.
pub fn decompose_replacement(kappa: &Replacement, k: usize) -> Vec<Replacement> {
    let k = k.max(kappa.max_index());
    if kappa.is_identity() {
        return vec![];
    }
    if kappa.is_simple() {
        return vec![kappa.clone()];
    }
    let image = |p: usize| kappa.apply(p);

    // Representative of each value in the image: the value itself when it is
    // a fixed point, otherwise its least preimage.
    let mut rep = vec![0usize; k + 1];
    for (v, slot) in rep.iter_mut().enumerate().skip(1) {
        let pre: Vec<usize> = (1..=k).filter(|&p| image(p) == v).collect();
        if pre.is_empty() {
            continue;
        }
        *slot = if pre.contains(&v) { v } else { pre[0] };
    }
    let is_rep = |p: usize| rep[image(p)] == p;

    // Permutation with perm(rep(v)) = v, extended monotonically on the rest.
    let mut perm = vec![0usize; k + 1];
    let non_reps: Vec<usize> = (1..=k).filter(|&p| !is_rep(p)).collect();
    let non_images: Vec<usize> = (1..=k).filter(|&v| rep[v] == 0).collect();
    for (p, slot) in perm.iter_mut().enumerate().skip(1) {
        if is_rep(p) {
            *slot = image(p);
        }
    }
    for (&p, &v) in non_reps.iter().zip(&non_images) {
        perm[p] = v;
    }

    let mut out = Vec::new();
    let mut visited = vec![false; k + 1];
    for start in 1..=k {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut cur = perm[start];
        while cur != start {
            visited[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        for w in cycle.windows(2) {
            out.push(Replacement::swap(w[0], w[1]));
        }
    }
    for p in non_reps {
        out.push(Replacement::copy(rep[image(p)], p));
    }
    out
}

/// Replaces every replacement by a chain of simple ones and drops identities.
///
/// Denotation, binder structure and arity are preserved.
pub fn normalize_replacements(phi: &Formula) -> Formula {
    let k = phi.arity();
    go(phi, k)
}

fn go(f: &Formula, k: usize) -> Formula {
    match f {
        Formula::Lit(_) | Formula::Var(_) => f.clone(),
        Formula::Or(a, b) => Formula::or(go(a, k), go(b, k)),
        Formula::And(a, b) => Formula::and(go(a, k), go(b, k)),
        Formula::Modal {
            modality,
            action,
            pos,
            body,
        } => Formula::Modal {
            modality: *modality,
            action: action.clone(),
            pos: *pos,
            body: Box::new(go(body, k)),
        },
        Formula::Fix { kind, var, body } => Formula::fix(*kind, var.clone(), go(body, k)),
        Formula::Repl(kappa, body) => decompose_replacement(kappa, k)
            .into_iter()
            .rev()
            .fold(go(body, k), |acc, t| Formula::Repl(t, Box::new(acc))),
    }
}

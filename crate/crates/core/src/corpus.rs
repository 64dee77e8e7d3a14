//! Seeded random strict expressions.
//!
//! Expressions are built bottom-up while tracking the coloured graph of each
//! subexpression, so every operation is chosen among those whose side
//! conditions hold at that point.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{CwExpr, Node, Partial};
use crate::graph::Color;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub max_k: Color,
    pub max_leaves: usize,
}

impl CorpusConfig {
    fn check(&self) -> Result<()> {
        if self.max_k == 0 || self.max_leaves == 0 {
            return Err(Error::Input("max-k and max-leaves must be positive".into()));
        }
        Ok(())
    }
}

/// Probability of continuing a Join/Recolor chain after each step.
const CHAIN_CONTINUE: f64 = 0.75;

pub fn generate_corpus(cfg: &CorpusConfig) -> Result<Vec<CwExpr>> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.count).map(|_| random_strict_expr(&mut rng, cfg.max_k, cfg.max_leaves)).collect()
}

/// One expression with a palette drawn from `1..=max_k` and between one and
/// `max_leaves` leaves named `v0`, `v1`, ...
pub fn random_strict_expr<R: Rng>(rng: &mut R, max_k: Color, max_leaves: usize) -> Result<CwExpr> {
    if max_k == 0 || max_leaves == 0 {
        return Err(Error::Input("max-k and max-leaves must be positive".into()));
    }
    let k = rng.gen_range(1..=max_k);
    let leaves = rng.gen_range(1..=max_leaves);
    let mut pool: Vec<(Node, Partial)> = (0..leaves)
        .map(|i| {
            let v = format!("v{i}");
            let c = rng.gen_range(1..=k);
            (Node::leaf(v.clone(), c), Partial::leaf(&v, c))
        })
        .collect();

    while pool.len() > 1 {
        // Half the time grow a spine on the first item, which gives deep chains.
        let i = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..pool.len()) };
        let (left_node, left) = pool.swap_remove(i);
        let j = rng.gen_range(0..pool.len());
        let (right_node, right) = pool.swap_remove(j);
        let (mut p, dups) = left.union(right);
        debug_assert!(dups.is_empty());
        let mut node = Node::union(left_node, right_node);
        while rng.gen_bool(CHAIN_CONTINUE) {
            match random_step(rng, &p) {
                Some(Step::Join(a, b)) => {
                    p.join(a, b);
                    node = Node::join(a, b, node);
                }
                Some(Step::Recolor(from, to)) => {
                    p.recolor(from, to);
                    node = Node::recolor(from, to, node);
                }
                None => break,
            }
        }
        pool.push((node, p));
    }
    let (root, _) = pool.pop().expect("at least one leaf");
    let e = CwExpr::new(k, root)?;
    debug_assert!(e.validate_strict().strict_valid);
    Ok(e)
}

enum Step {
    Join(Color, Color),
    Recolor(Color, Color),
}

fn random_step<R: Rng>(rng: &mut R, p: &Partial) -> Option<Step> {
    let used: Vec<Color> = p.classes.keys().copied().collect();
    let mut joins = Vec::new();
    let mut recolors = Vec::new();
    for (x, &a) in used.iter().enumerate() {
        for &b in &used[x + 1..] {
            if p.join_adds_edge(a, b) {
                joins.push((a, b));
            }
            recolors.push((a, b));
            recolors.push((b, a));
        }
    }
    // Joins are preferred: a recolor only shrinks the set of usable colours.
    let step = if !joins.is_empty() && (recolors.is_empty() || rng.gen_bool(0.6)) {
        let &(a, b) = joins.choose(rng)?;
        if rng.gen_bool(0.5) {
            Step::Join(a, b)
        } else {
            Step::Join(b, a)
        }
    } else {
        let &(from, to) = recolors.choose(rng)?;
        Step::Recolor(from, to)
    };
    Some(step)
}

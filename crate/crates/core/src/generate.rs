//! Structure corpora for exhaustive and sampled sweeps.

use rand::Rng;

use crate::prefstruct::{PreferentialStructure, Subset};

/// Every irreflexive acyclic relation on `n` labelled elements.
///
/// The count grows as the labelled-DAG numbers (1, 1, 3, 25, 543, 29281, ...),
/// so `n` beyond 5 is impractical.
pub fn all_structures(n: usize) -> impl Iterator<Item = PreferentialStructure> {
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let total = 1u64 << slots.len();
    (0..total).filter_map(move |mask| {
        let pairs: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        // a 2-cycle is detectable before building anything
        if pairs.iter().any(|&(a, b)| pairs.contains(&(b, a))) {
            return None;
        }
        PreferentialStructure::from_indices(n, &pairs).ok()
    })
}

/// Shape of a randomly generated structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// Edges of a random DAG, no closure.
    Dag,
    /// Transitive closure of a random DAG (always smooth).
    Transitive,
    /// Random layering; every element beats every element of a later layer.
    Ranked,
}

impl StructureKind {
    pub const ALL: [StructureKind; 3] = [
        StructureKind::Dag,
        StructureKind::Transitive,
        StructureKind::Ranked,
    ];
}

pub fn random_structure<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    kind: StructureKind,
) -> PreferentialStructure {
    let pairs = match kind {
        StructureKind::Dag => random_dag(rng, n),
        StructureKind::Transitive => transitive_closure(n, &random_dag(rng, n)),
        StructureKind::Ranked => {
            let layers: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n.max(1))).collect();
            let mut pairs = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if layers[a] < layers[b] {
                        pairs.push((a, b));
                    }
                }
            }
            pairs
        }
    };
    PreferentialStructure::from_indices(n, &pairs).expect("generated relation is acyclic")
}

fn random_dag<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    // orient along a random permutation so the result is acyclic
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let density: f64 = rng.gen_range(0.1..0.7);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((order[i], order[j]));
            }
        }
    }
    pairs
}

fn transitive_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut succ = vec![Subset::EMPTY; n];
    for &(a, b) in pairs {
        succ[a] = succ[a].with(b);
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            let next = succ[a].iter().fold(succ[a], |acc, b| acc | succ[b]);
            if next != succ[a] {
                succ[a] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n)
        .flat_map(|a| succ[a].iter().map(move |b| (a, b)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn labelled_dag_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_structures(n).count()).collect();
        assert_eq!(counts, vec![1, 1, 3, 25, 543]);
    }

    #[test]
    fn random_kinds_have_their_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=7 {
            for _ in 0..20 {
                let t = random_structure(&mut rng, n, StructureKind::Transitive);
                assert!(t.is_transitive() && t.is_smooth());
                let r = random_structure(&mut rng, n, StructureKind::Ranked);
                assert!(r.is_ranked());
            }
        }
    }
}

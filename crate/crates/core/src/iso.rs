//! Canonical labelling, isomorphism and automorphisms.
//!
//! Individualisation-refinement: the vertex partition is refined to an
//! equitable one (cells split by neighbour counts into every other cell,
//! sub-cells ordered by that count vector), then the first non-singleton
//! cell is individualised vertex by vertex. Each discrete leaf partition is
//! a labelling; the canonical form is the leaf whose graph6 bit string is
//! lexicographically smallest.

use serde::Serialize;

use crate::graph::Graph;
use crate::graph6::bit_pairs;

/// Canonical representative of an isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    /// graph6 string of the relabelled graph.
    pub graph6: String,
    /// `labeling[v]` is the canonical position of source vertex `v`.
    pub labeling: Vec<usize>,
}

impl CanonicalForm {
    pub fn graph(&self) -> Graph {
        Graph::from_graph6(&self.graph6).expect("canonical graph6 is well formed")
    }
}

type Cells = Vec<u16>;

/// Bit string of `g` under the labelling given by `order` (position ->
/// vertex), first pair in the most significant position.
fn key_of(g: &Graph, order: &[usize]) -> u128 {
    let mut key = 0u128;
    for (i, j) in bit_pairs(g.order()) {
        key = key << 1 | g.has_edge(order[i], order[j]) as u128;
    }
    key
}

/// graph6 bit string of `g` as labelled.
pub fn adjacency_key(g: &Graph) -> u128 {
    let order: Vec<usize> = (0..g.order()).collect();
    key_of(g, &order)
}

fn refine(g: &Graph, cells: &mut Cells) {
    loop {
        let mut next: Cells = Vec::with_capacity(g.order());
        for &cell in cells.iter() {
            if cell.count_ones() == 1 {
                next.push(cell);
                continue;
            }
            let mut keyed: Vec<(u128, usize)> = Vec::with_capacity(cell.count_ones() as usize);
            let mut bits = cell;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let row = g.row(v);
                let mut key = 0u128;
                for &other in cells.iter() {
                    key = key << 5 | (row & other).count_ones() as u128;
                }
                keyed.push((key, v));
            }
            keyed.sort_unstable();
            let mut current = 0u16;
            for (idx, &(key, v)) in keyed.iter().enumerate() {
                if idx > 0 && keyed[idx - 1].0 != key {
                    next.push(current);
                    current = 0;
                }
                current |= 1 << v;
            }
            next.push(current);
        }
        let stable = next.len() == cells.len();
        *cells = next;
        if stable {
            return;
        }
    }
}

fn initial_cells(g: &Graph) -> Cells {
    if g.order() == 0 {
        Vec::new()
    } else {
        vec![g.vertices().0]
    }
}

fn twins(g: &Graph, v: usize, w: usize) -> bool {
    g.row(v) & !(1 << w) == g.row(w) & !(1 << v)
}

struct Search<'g> {
    g: &'g Graph,
    prune_twins: bool,
    best: Option<(u128, Vec<usize>)>,
    leaves: Option<Vec<(u128, Vec<usize>)>>,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Cells) {
        refine(self.g, &mut cells);
        if cells.len() == self.g.order() {
            let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
            let key = key_of(self.g, &order);
            if self.best.as_ref().is_none_or(|(b, _)| key < *b) {
                self.best = Some((key, order.clone()));
            }
            if let Some(leaves) = self.leaves.as_mut() {
                leaves.push((key, order));
            }
            return;
        }
        let target = cells
            .iter()
            .position(|c| c.count_ones() > 1)
            .expect("non-discrete partition has a non-singleton cell");
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        let mut bits = cell;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if self.prune_twins && explored.iter().any(|&w| twins(self.g, v, w)) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1u16 << v);
            child.push(cell & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            self.run(child);
            explored.push(v);
        }
    }
}

fn labeling_from_order(order: &[usize]) -> Vec<usize> {
    let mut lab = vec![0; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        lab[v] = pos;
    }
    lab
}

fn best_leaf(g: &Graph) -> (u128, Vec<usize>) {
    let mut search = Search {
        g,
        prune_twins: true,
        best: None,
        leaves: None,
    };
    search.run(initial_cells(g));
    search.best.unwrap_or((0, Vec::new()))
}

/// Canonical form of `g`: equal for two graphs iff they are isomorphic.
pub fn canon(g: &Graph) -> CanonicalForm {
    let (_, order) = best_leaf(g);
    let labeling = labeling_from_order(&order);
    CanonicalForm {
        graph6: g.relabel(&labeling).to_graph6(),
        labeling,
    }
}

/// Canonical bit string only (cheaper than [`canon`]).
pub fn canonical_key(g: &Graph) -> u128 {
    best_leaf(g).0
}

/// Whether `g` is exactly its own canonical form.
pub fn is_canonical(g: &Graph) -> bool {
    // The identity has to be a leaf: after the root refinement the cells
    // must list the vertices in increasing order.
    let mut cells = initial_cells(g);
    refine(g, &mut cells);
    let mut next = 0usize;
    for &c in &cells {
        let len = c.count_ones() as usize;
        let expected = ((1u32 << (next + len)) - (1u32 << next)) as u16;
        if c != expected {
            return false;
        }
        next += len;
    }
    canonical_key(g) == adjacency_key(g)
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.edge_count() == b.edge_count()
        && canonical_key(a) == canonical_key(b)
}

/// An isomorphism `a -> b` as a vertex map, if one exists.
pub fn isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return None;
    }
    let (ka, oa) = best_leaf(a);
    let (kb, ob) = best_leaf(b);
    if ka != kb {
        return None;
    }
    let la = labeling_from_order(&oa);
    Some((0..a.order()).map(|v| ob[la[v]]).collect())
}

/// All automorphisms of `g`, each as a vertex permutation, sorted.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let mut search = Search {
        g,
        prune_twins: false,
        best: None,
        leaves: Some(Vec::new()),
    };
    search.run(initial_cells(g));
    let Some((best_key, best_order)) = search.best else {
        return vec![Vec::new()];
    };
    let mut out: Vec<Vec<usize>> = search
        .leaves
        .unwrap_or_default()
        .into_iter()
        .filter(|(k, _)| *k == best_key)
        .map(|(_, order)| {
            let lab = labeling_from_order(&order);
            (0..g.order()).map(|v| best_order[lab[v]]).collect()
        })
        .collect();
    out.sort();
    out
}

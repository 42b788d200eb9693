//! Definable connectedness through the adjacency graph of convex pieces.

use super::fm::conjunct_is_empty;
use super::{Atom, DefinableSet};

/// Each nonempty conjunct is convex in logarithmic coordinates. Two pieces are adjacent
/// when their closures meet inside the set; the set is connected iff this graph is.
pub fn is_connected(d: &DefinableSet) -> bool {
    let cells: Vec<&Vec<Atom>> =
        d.disjuncts.iter().filter(|c| !conjunct_is_empty(d.n, c)).collect();
    if cells.len() <= 1 {
        return true;
    }
    let closed: Vec<Vec<Atom>> =
        cells.iter().map(|c| c.iter().map(Atom::relaxed).collect()).collect();
    let k = cells.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let adjacent = cells.iter().any(|c| {
                let mut probe = closed[i].clone();
                probe.extend(closed[j].iter().cloned());
                probe.extend(c.iter().cloned());
                !conjunct_is_empty(d.n, &probe)
            });
            if adjacent {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..k).all(|i| find(&mut parent, i) == root)
}

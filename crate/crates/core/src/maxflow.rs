//! Shortest-augmenting-path max-flow for small integer capacities.

use std::collections::VecDeque;

pub(crate) const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    head: Vec<usize>,
    cap: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub(crate) fn new(n: usize) -> Self {
        Self { head: Vec::new(), cap: Vec::new(), out: vec![Vec::new(); n] }
    }

    /// Adds `u -> v` with capacity `c` forward and `c_rev` backward.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize, c: i64, c_rev: i64) {
        self.out[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(c);
        self.out[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(c_rev);
    }

    /// Maximum flow from `s` to `t`; residual capacities are kept.
    /// Augmenting paths are BFS-shortest with arcs scanned in insertion
    /// order, so the result is deterministic.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.out.len();
        let mut total = 0;
        let mut via = vec![usize::MAX; n];
        loop {
            via.iter_mut().for_each(|x| *x = usize::MAX);
            via[s] = usize::MAX - 1;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(x) = queue.pop_front() {
                for &a in &self.out[x] {
                    let y = self.head[a];
                    if self.cap[a] > 0 && via[y] == usize::MAX {
                        via[y] = a;
                        if y == t {
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if via[t] == usize::MAX {
                return total;
            }
            let mut push = INF;
            let mut y = t;
            while y != s {
                let a = via[y];
                push = push.min(self.cap[a]);
                y = self.head[a ^ 1];
            }
            let mut y = t;
            while y != s {
                let a = via[y];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                y = self.head[a ^ 1];
            }
            total += push;
        }
    }

    /// Nodes reachable from `s` in the residual network.
    pub(crate) fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // CLRS example, max flow 23
        let mut g = FlowNetwork::new(6);
        for (u, v, c) in [(0, 1, 16), (0, 2, 13), (1, 2, 10), (2, 1, 4), (1, 3, 12), (3, 2, 9), (2, 4, 14), (4, 3, 7), (3, 5, 20), (4, 5, 4)] {
            g.add_edge(u, v, c, 0);
        }
        assert_eq!(g.max_flow(0, 5), 23);
        let side = g.source_side(0);
        assert!(side[0] && !side[5]);
    }

    #[test]
    fn undirected_unit_path() {
        let mut g = FlowNetwork::new(4);
        g.add_edge(0, 1, 1, 1);
        g.add_edge(1, 2, 1, 1);
        g.add_edge(2, 3, 1, 1);
        g.add_edge(0, 2, 1, 1);
        assert_eq!(g.max_flow(0, 3), 1);
        assert_eq!(g.source_side(0), vec![true, true, true, false]);
    }

    #[test]
    fn disconnected() {
        let mut g = FlowNetwork::new(3);
        g.add_edge(0, 1, 5, 0);
        assert_eq!(g.max_flow(0, 2), 0);
    }
}

//! Cycles whose highest priority has a given parity, in a subgraph given by
//! explicit successor lists.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::game::{NodeId, NodeSet, ParityGame, Priority};

/// Strongly connected components of the subgraph induced by `keep`, without
/// the trivial ones (single node, no self-loop).
fn cyclic_components(edges: &[Vec<NodeId>], keep: &NodeSet) -> Vec<Vec<NodeId>> {
    let mut graph = DiGraph::<NodeId, ()>::with_capacity(keep.len(), 0);
    let mut index = vec![NodeIndex::end(); edges.len()];
    for v in keep.iter() {
        index[v.index()] = graph.add_node(v);
    }
    for v in keep.iter() {
        for &t in &edges[v.index()] {
            if keep.contains(t) {
                graph.add_edge(index[v.index()], index[t.index()], ());
            }
        }
    }
    tarjan_scc(&graph)
        .into_iter()
        .filter(|c| c.len() > 1 || graph.contains_edge(c[0], c[0]))
        .map(|c| c.into_iter().map(|i| graph[i]).collect())
        .collect()
}

fn priorities_of_parity(game: &ParityGame, parity: usize) -> impl Iterator<Item = Priority> + '_ {
    (0..game.d()).rev().filter(move |q| q % 2 == parity)
}

/// Nodes of `scope` lying on a cycle (within `scope`) whose maximal
/// priority has the given parity.
pub(crate) fn nodes_on_cycles(game: &ParityGame, edges: &[Vec<NodeId>], scope: &NodeSet, parity: usize) -> NodeSet {
    let mut out = NodeSet::empty(game.node_count());
    let mut below = scope.clone();
    for q in priorities_of_parity(game, parity) {
        below.assign(scope);
        for p in q + 1..game.d() {
            below.difference_with(game.priority_class(p));
        }
        if below.is_disjoint(game.priority_class(q)) {
            continue;
        }
        for component in cyclic_components(edges, &below) {
            if component.iter().any(|&v| game.priority(v) == q) {
                for v in component {
                    out.insert(v);
                }
            }
        }
    }
    out
}

/// Some cycle within `scope` whose maximal priority has the given parity, as
/// the list of its nodes starting and ending at its smallest node.
pub(crate) fn find_cycle(game: &ParityGame, edges: &[Vec<NodeId>], scope: &NodeSet, parity: usize) -> Option<Vec<NodeId>> {
    let mut below = scope.clone();
    for q in priorities_of_parity(game, parity) {
        below.assign(scope);
        for p in q + 1..game.d() {
            below.difference_with(game.priority_class(p));
        }
        for component in cyclic_components(edges, &below) {
            let Some(&start) = component.iter().find(|&&v| game.priority(v) == q) else {
                continue;
            };
            let members = NodeSet::from_nodes(game.node_count(), component.iter().copied());
            let mut cycle = path_back(edges, &members, start);
            cycle.pop();
            let first = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
            cycle.rotate_left(first);
            cycle.push(cycle[0]);
            return Some(cycle);
        }
    }
    None
}

/// Shortest cycle through `start` inside the strongly connected `members`.
fn path_back(edges: &[Vec<NodeId>], members: &NodeSet, start: NodeId) -> Vec<NodeId> {
    let mut parent: Vec<Option<NodeId>> = vec![None; edges.len()];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &t in &edges[v.index()] {
            if !members.contains(t) {
                continue;
            }
            if t == start {
                let mut path = vec![start, v];
                let mut cur = v;
                while cur != start {
                    cur = parent[cur.index()].expect("BFS tree reaches the start");
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            if parent[t.index()].is_none() {
                parent[t.index()] = Some(v);
                queue.push_back(t);
            }
        }
    }
    unreachable!("a cyclic component has a cycle through each of its nodes")
}

/// Nodes of `scope` from which `targets` is reachable along `edges`.
pub(crate) fn can_reach(edges: &[Vec<NodeId>], scope: &NodeSet, targets: &NodeSet) -> NodeSet {
    let n = edges.len();
    let mut reverse = vec![Vec::new(); n];
    for v in scope.iter() {
        for &t in &edges[v.index()] {
            reverse[t.index()].push(v);
        }
    }
    let mut seen = targets.intersection(scope);
    let mut queue: VecDeque<NodeId> = seen.iter().collect();
    while let Some(t) = queue.pop_front() {
        for &v in &reverse[t.index()] {
            if !seen.contains(v) {
                seen.insert(v);
                queue.push_back(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::e1;

    fn id(i: usize) -> NodeId {
        NodeId::new(i)
    }

    fn e1_edges(choice_at_0: usize) -> Vec<Vec<NodeId>> {
        let g = e1();
        g.nodes()
            .map(|v| if v == id(0) { vec![id(choice_at_0)] } else { g.successors(v).to_vec() })
            .collect()
    }

    #[test]
    fn odd_cycle_in_e1() {
        let g = e1();
        let all = g.all_nodes();
        let bad = e1_edges(2);
        assert_eq!(find_cycle(&g, &bad, &all, 1), Some(vec![id(0), id(2), id(3), id(0)]));
        assert_eq!(nodes_on_cycles(&g, &bad, &all, 1), NodeSet::from_nodes(5, [id(0), id(2), id(3)]));
        let good = e1_edges(1);
        assert_eq!(find_cycle(&g, &good, &all, 1), None);
        assert_eq!(find_cycle(&g, &good, &all, 0), Some(vec![id(0), id(1), id(4), id(0)]));
    }

    #[test]
    fn reachability() {
        let edges = e1_edges(1);
        let all = NodeSet::full(5);
        let reach = can_reach(&edges, &all, &NodeSet::from_nodes(5, [id(3)]));
        assert_eq!(reach, NodeSet::from_nodes(5, [id(2), id(3)]));
    }
}

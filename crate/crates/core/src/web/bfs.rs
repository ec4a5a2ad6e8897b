use std::collections::{HashMap, VecDeque};

use crate::links::{enumerate_links, ElementaryLink, Fibered, LinkMode};
use crate::polytope::PolytopeClass;

/// Breadth-first search over Mori fiber structures with polytope-level links
/// as edges. Neighbors are expanded in the sorted order returned by
/// [`enumerate_links`], so the result is deterministic.
///
/// Returns a shortest link sequence from `start` to a state accepted by
/// `is_target`, or `None` once `max_states` states have been expanded.
pub fn bfs_links(
    start: &Fibered,
    is_target: impl Fn(&Fibered) -> bool,
    class: PolytopeClass,
    bound: i64,
    max_states: usize,
) -> Option<Vec<ElementaryLink>> {
    if is_target(start) {
        return Some(vec![]);
    }
    let mut parent: HashMap<Fibered, Option<ElementaryLink>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start.clone()]);
    let mut expanded = 0;
    while let Some(state) = queue.pop_front() {
        if expanded == max_states {
            return None;
        }
        expanded += 1;
        for link in enumerate_links(&state, class, bound, LinkMode::Polytope) {
            if parent.contains_key(&link.right) {
                continue;
            }
            let next = link.right.clone();
            parent.insert(next.clone(), Some(link));
            if is_target(&next) {
                let mut path = Vec::new();
                let mut cur = next;
                while let Some(Some(l)) = parent.get(&cur) {
                    path.push(l.clone());
                    cur = l.left.clone();
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(next);
        }
    }
    None
}

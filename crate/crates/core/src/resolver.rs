//! Resolving the history heads to the register's ordered values.
//!
//! Every head is followed through restore operations (via the predecessors of
//! each restore's anchor) until set operations are reached. The path taken is
//! recorded as an [`OpIdTrace`], and values are ordered by comparing traces
//! from the head downwards, largest first. This orders siblings restored by
//! an undo or redo by the id of the restoring operation rather than by the
//! id of the set that originally wrote them.
//!
//! [`resolve_heads_cached`] memoizes, for each restore operation, the ordered
//! set operations it resolves to. Traversal stops at the first cached restore
//! and the cached sublist is spliced in with a stable sort.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::history::History;
use crate::id::OpId;
use crate::op::{OpKind, Operation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("operation {0} is referenced but not in the history")]
    DanglingReference(OpId),
    #[error("traces {0:?} and {1:?} cannot be ordered")]
    IndistinguishableTraces(Vec<OpId>, Vec<OpId>),
}

/// The ids visited on the way from a head down to a set operation.
///
/// The first id is the head, the last is a set operation and everything in
/// between is a restore operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpIdTrace(Vec<OpId>);

impl OpIdTrace {
    pub fn ids(&self) -> &[OpId] {
        &self.0
    }

    pub fn head(&self) -> &OpId {
        &self.0[0]
    }

    pub fn terminal(&self) -> &OpId {
        &self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<OpId>> for OpIdTrace {
    fn from(ids: Vec<OpId>) -> Self {
        OpIdTrace(ids)
    }
}

/// A set operation reached from a head, and how it was reached.
#[derive(Debug, Clone)]
pub struct TerminalHead<'h, V> {
    pub set_op: &'h Operation<V>,
    pub trace: OpIdTrace,
}

/// Processing order of the traversal work list. The result does not depend
/// on it; it exists so tests can check exactly that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WorkOrder {
    #[default]
    Fifo,
    Lifo,
}

// Traversal tree. Each visit points at the visit that enqueued it, so a trace
// is the parent chain read backwards.
struct Visit {
    id: OpId,
    parent: Option<usize>,
}

fn trace_of(visits: &[Visit], mut idx: usize) -> Vec<OpId> {
    let mut ids = Vec::new();
    loop {
        let visit = &visits[idx];
        ids.push(visit.id.clone());
        match visit.parent {
            Some(parent) => idx = parent,
            None => break,
        }
    }
    ids.reverse();
    ids
}

fn lookup<'h, V>(history: &'h History<V>, id: &OpId) -> Result<&'h Operation<V>, ResolveError> {
    history
        .get(id)
        .ok_or_else(|| ResolveError::DanglingReference(id.clone()))
}

pub fn resolve_heads<'h, 'a, V>(
    history: &'h History<V>,
    heads: impl IntoIterator<Item = &'a OpId>,
) -> Result<Vec<TerminalHead<'h, V>>, ResolveError> {
    resolve_heads_ordered(history, heads, WorkOrder::Fifo)
}

pub fn resolve_heads_ordered<'h, 'a, V>(
    history: &'h History<V>,
    heads: impl IntoIterator<Item = &'a OpId>,
    order: WorkOrder,
) -> Result<Vec<TerminalHead<'h, V>>, ResolveError> {
    let mut visits: Vec<Visit> = Vec::new();
    let mut todo: VecDeque<(OpId, Option<usize>)> =
        heads.into_iter().map(|h| (h.clone(), None)).collect();
    let mut terminal = Vec::new();

    loop {
        let next = match order {
            WorkOrder::Fifo => todo.pop_front(),
            WorkOrder::Lifo => todo.pop_back(),
        };
        let Some((id, parent)) = next else { break };
        let op = lookup(history, &id)?;
        let idx = visits.len();
        visits.push(Visit { id, parent });
        match &op.kind {
            OpKind::Set { .. } => terminal.push(TerminalHead {
                set_op: op,
                trace: OpIdTrace(trace_of(&visits, idx)),
            }),
            OpKind::Restore { anchor } => {
                let anchor = lookup(history, anchor)?;
                for pred in &anchor.preds {
                    todo.push_back((pred.clone(), Some(idx)));
                }
            }
        }
    }
    Ok(terminal)
}

/// Orders two traces by their first differing id.
pub fn compare_traces(a: &OpIdTrace, b: &OpIdTrace) -> Result<Ordering, ResolveError> {
    compare_id_slices(&a.0, &b.0)
}

fn compare_id_slices(a: &[OpId], b: &[OpId]) -> Result<Ordering, ResolveError> {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            decided => return Ok(decided),
        }
    }
    Err(ResolveError::IndistinguishableTraces(
        a.to_vec(),
        b.to_vec(),
    ))
}

// Stable sort, largest first. The comparator cannot fail, so the first error
// is stashed and reported after sorting.
fn sort_desc_by_trace<T>(
    items: &mut [T],
    trace: impl Fn(&T) -> &[OpId],
) -> Result<(), ResolveError> {
    let failure: Cell<Option<ResolveError>> = Cell::new(None);
    items.sort_by(|a, b| match compare_id_slices(trace(b), trace(a)) {
        Ok(ord) => ord,
        Err(e) => {
            let prev = failure.take();
            failure.set(prev.or(Some(e)));
            Ordering::Equal
        }
    });
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn sort_terminal_heads<V>(term_heads: &mut [TerminalHead<'_, V>]) -> Result<(), ResolveError> {
    sort_desc_by_trace(term_heads, |t| t.trace.ids())
}

/// Sorts terminal heads (largest trace first) and returns their values,
/// skipping deletions.
pub fn get_values<V: Clone>(
    mut term_heads: Vec<TerminalHead<'_, V>>,
) -> Result<Vec<V>, ResolveError> {
    sort_terminal_heads(&mut term_heads)?;
    Ok(term_heads
        .iter()
        .filter_map(|t| t.set_op.value().cloned())
        .collect())
}

/// Current values of the register described by `history`.
pub fn register_values<V: Clone>(
    history: &History<V>,
    cache: Option<&mut RestoreCache>,
) -> Result<Vec<V>, ResolveError> {
    match cache {
        None => get_values(resolve_heads(history, history.heads())?),
        Some(cache) => {
            let resolved = resolve_heads_cached(history, history.heads(), cache)?;
            Ok(resolved
                .set_ops
                .iter()
                .filter_map(|op| op.value().cloned())
                .collect())
        }
    }
}

/// Memoized resolution results keyed by restore operation.
///
/// Each entry holds the ids of the set operations the restore resolves to, in
/// register order. Deletions are kept; they are filtered when values are read.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RestoreCache {
    entries: HashMap<OpId, Vec<OpId>>,
}

impl RestoreCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, restore: &OpId) -> Option<&[OpId]> {
        self.entries.get(restore).map(Vec::as_slice)
    }

    pub fn contains(&self, restore: &OpId) -> bool {
        self.entries.contains_key(restore)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn remove(&mut self, restore: &OpId) -> Option<Vec<OpId>> {
        self.entries.remove(restore)
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraversalStats {
    /// Work-list items processed.
    pub visited: usize,
    /// Visits answered from the cache.
    pub cache_hits: usize,
}

#[derive(Debug, Clone)]
pub struct CachedResolution<'h, V> {
    /// Set operations in register order, deletions included.
    pub set_ops: Vec<&'h Operation<V>>,
    pub stats: TraversalStats,
}

impl<V: Clone> CachedResolution<'_, V> {
    pub fn values(&self) -> Vec<V> {
        self.set_ops
            .iter()
            .filter_map(|op| op.value().cloned())
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VisitKind {
    Set,
    CacheHit,
    Expanded,
}

/// Like [`resolve_heads`] followed by the trace sort, but stops at restores
/// already present in `cache`. Every restore expanded here is added to the
/// cache before returning.
pub fn resolve_heads_cached<'h, 'a, V>(
    history: &'h History<V>,
    heads: impl IntoIterator<Item = &'a OpId>,
    cache: &mut RestoreCache,
) -> Result<CachedResolution<'h, V>, ResolveError> {
    let mut stats = TraversalStats::default();
    let mut visits: Vec<Visit> = Vec::new();
    let mut kinds: Vec<VisitKind> = Vec::new();
    let mut todo: VecDeque<(OpId, Option<usize>)> =
        heads.into_iter().map(|h| (h.clone(), None)).collect();

    while let Some((id, parent)) = todo.pop_front() {
        stats.visited += 1;
        let op = lookup(history, &id)?;
        let idx = visits.len();
        let kind = match &op.kind {
            OpKind::Set { .. } => VisitKind::Set,
            OpKind::Restore { .. } if cache.contains(&id) => {
                stats.cache_hits += 1;
                VisitKind::CacheHit
            }
            OpKind::Restore { anchor } => {
                let anchor = lookup(history, anchor)?;
                for pred in &anchor.preds {
                    todo.push_back((pred.clone(), Some(idx)));
                }
                VisitKind::Expanded
            }
        };
        visits.push(Visit { id, parent });
        kinds.push(kind);
    }

    // Leaves carry a truncated trace: head down to the set op or cache hit.
    struct Leaf {
        idx: usize,
        trace: Vec<OpId>,
    }
    let mut leaves: Vec<Leaf> = kinds
        .iter()
        .enumerate()
        .filter(|(_, k)| **k != VisitKind::Expanded)
        .map(|(idx, _)| Leaf {
            idx,
            trace: trace_of(&visits, idx),
        })
        .collect();
    sort_desc_by_trace(&mut leaves, |l| &l.trace)?;

    let mut produced: HashMap<usize, Vec<OpId>> = kinds
        .iter()
        .enumerate()
        .filter(|(_, k)| **k == VisitKind::Expanded)
        .map(|(idx, _)| (idx, Vec::new()))
        .collect();
    let mut ordered: Vec<OpId> = Vec::new();
    for leaf in &leaves {
        let visit = &visits[leaf.idx];
        let expansion: Vec<OpId> = match kinds[leaf.idx] {
            VisitKind::Set => vec![visit.id.clone()],
            _ => cache.get(&visit.id).unwrap_or_default().to_vec(),
        };
        let mut ancestor = visit.parent;
        while let Some(a) = ancestor {
            if let Some(list) = produced.get_mut(&a) {
                list.extend(expansion.iter().cloned());
            }
            ancestor = visits[a].parent;
        }
        ordered.extend(expansion);
    }

    // Sorted order keeps every subtree contiguous, so each expanded restore
    // collected exactly its own resolution, in order.
    let mut expanded: Vec<usize> = produced.keys().copied().collect();
    expanded.sort_unstable();
    for idx in expanded {
        let id = &visits[idx].id;
        if !cache.contains(id) {
            let list = produced.remove(&idx).unwrap_or_default();
            cache.entries.insert(id.clone(), list);
        }
    }

    let set_ops = ordered
        .iter()
        .map(|id| lookup(history, id))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CachedResolution { set_ops, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{opid, walkthrough_ops};

    fn history_through(last: &OpId) -> History<i64> {
        let mut h = History::new();
        for op in walkthrough_ops().into_iter().filter(|o| o.id <= *last) {
            h.insert(op).unwrap();
        }
        h
    }

    fn history_of(ids: &[OpId]) -> History<i64> {
        let mut h = History::new();
        for op in walkthrough_ops()
            .into_iter()
            .filter(|o| ids.contains(&o.id))
        {
            h.insert(op).unwrap();
        }
        h
    }

    fn trace(ids: &[(u64, &str)]) -> OpIdTrace {
        OpIdTrace(ids.iter().map(|(c, r)| opid(*c, r)).collect())
    }

    fn as_pairs<V: Clone>(t: &[TerminalHead<'_, V>]) -> Vec<(OpId, Vec<OpId>)> {
        t.iter()
            .map(|t| (t.set_op.id.clone(), t.trace.ids().to_vec()))
            .collect()
    }

    #[test]
    fn concurrent_undo_and_set_resolve_to_traces() {
        let h = history_through(&opid(7, "B"));
        let heads: Vec<_> = h.heads().iter().cloned().collect();
        assert_eq!(heads, vec![opid(7, "A"), opid(7, "B")]);
        let mut got = as_pairs(&resolve_heads(&h, &heads).unwrap());
        got.sort();
        assert_eq!(
            got,
            vec![
                (opid(1, "A"), trace(&[(7, "B"), (1, "A")]).0),
                (opid(7, "A"), trace(&[(7, "A")]).0),
            ]
        );
        assert_eq!(
            get_values(resolve_heads(&h, &heads).unwrap()).unwrap(),
            vec![1, 6]
        );
    }

    #[test]
    fn setop_head_is_its_own_terminal_head() {
        let h = history_through(&opid(1, "A"));
        let t = resolve_heads(&h, h.heads()).unwrap();
        assert_eq!(as_pairs(&t), vec![(opid(1, "A"), vec![opid(1, "A")])]);
    }

    #[test]
    fn redo_head_expands_to_three_terminal_heads() {
        // hand-executed on the DAG: (9,B) -> anchor (6,B) -> preds (5,A),(5,B)
        // (5,B) -> anchor (4,B) -> preds (3,A),(3,B); (5,A) -> anchor (3,A) -> (2,B)
        let h = history_through(&opid(9, "B"));
        let mut t = resolve_heads(&h, h.heads()).unwrap();
        sort_terminal_heads(&mut t).unwrap();
        assert_eq!(
            as_pairs(&t),
            vec![
                (opid(3, "B"), trace(&[(9, "B"), (5, "B"), (3, "B")]).0),
                (opid(3, "A"), trace(&[(9, "B"), (5, "B"), (3, "A")]).0),
                (opid(2, "B"), trace(&[(9, "B"), (5, "A"), (2, "B")]).0),
            ]
        );
        assert_eq!(get_values(t).unwrap(), vec![3, 4, 2]);
    }

    #[test]
    fn dangling_anchor_is_reported() {
        let h = history_of(&[opid(1, "A"), opid(2, "B"), opid(3, "A")]);
        let missing = opid(4, "B");
        assert_eq!(
            resolve_heads(&h, [&missing]).unwrap_err(),
            ResolveError::DanglingReference(missing)
        );
    }

    #[test]
    fn compare_traces_examples() {
        assert_eq!(
            compare_traces(&trace(&[(7, "B"), (1, "A")]), &trace(&[(7, "A")])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            compare_traces(&trace(&[(5, "B"), (3, "B")]), &trace(&[(5, "B"), (3, "A")])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            compare_traces(&trace(&[(2, "A")]), &trace(&[(9, "B"), (5, "B"), (2, "A")])).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn prefix_traces_are_indistinguishable() {
        let a = trace(&[(9, "B"), (5, "B")]);
        let b = trace(&[(9, "B"), (5, "B"), (3, "A")]);
        assert!(matches!(
            compare_traces(&a, &b),
            Err(ResolveError::IndistinguishableTraces(..))
        ));
    }

    #[test]
    fn values_at_concurrent_undos() {
        let h = history_through(&opid(5, "B"));
        assert_eq!(register_values(&h, None).unwrap(), vec![3, 4, 2]);
    }

    #[test]
    fn deletion_terminal_head_is_skipped() {
        let mut h: History<i64> = History::new();
        h.insert(Operation::set(opid(1, "A"), [], None)).unwrap();
        let t = resolve_heads(&h, h.heads()).unwrap();
        assert_eq!(t.len(), 1);
        assert!(get_values(t).unwrap().is_empty());
    }

    #[test]
    fn values_at_later_steps() {
        assert_eq!(
            register_values(&history_through(&opid(10, "B")), None).unwrap(),
            vec![5]
        );
        let h = history_through(&opid(8, "B"));
        let t = resolve_heads(&h, h.heads()).unwrap();
        assert_eq!(
            as_pairs(&t),
            vec![(opid(2, "B"), trace(&[(8, "B"), (6, "B"), (2, "B")]).0)]
        );
        assert_eq!(register_values(&h, None).unwrap(), vec![2]);
        let empty: History<i64> = History::new();
        assert!(register_values(&empty, None).unwrap().is_empty());
    }

    #[test]
    fn warm_cache_gives_uncached_order() {
        let h = history_through(&opid(9, "B"));
        let mut cache = RestoreCache::new();
        resolve_heads_cached(&h, [&opid(5, "A"), &opid(5, "B")], &mut cache).unwrap();
        assert!(cache.contains(&opid(5, "A")) && cache.contains(&opid(5, "B")));

        let resolved = resolve_heads_cached(&h, h.heads(), &mut cache).unwrap();
        let ids: Vec<_> = resolved.set_ops.iter().map(|o| o.id.clone()).collect();
        assert_eq!(ids, vec![opid(3, "B"), opid(3, "A"), opid(2, "B")]);
        assert_eq!(resolved.values(), vec![3, 4, 2]);

        let mut oracle = resolve_heads(&h, h.heads()).unwrap();
        sort_terminal_heads(&mut oracle).unwrap();
        let oracle_ids: Vec<_> = oracle.iter().map(|t| t.set_op.id.clone()).collect();
        assert_eq!(ids, oracle_ids);
        assert!(cache.contains(&opid(9, "B")));
        assert_eq!(cache.len(), 3);
    }

    #[test]
    fn setop_head_leaves_cache_untouched() {
        let h = history_through(&opid(7, "A"));
        let mut cache = RestoreCache::new();
        let r = resolve_heads_cached(&h, [&opid(7, "A")], &mut cache).unwrap();
        assert_eq!(r.values(), vec![6]);
        assert!(cache.is_empty());
        assert_eq!(r.stats.visited, 1);
    }

    #[test]
    fn cache_entries_match_uncached_traversal() {
        let h = history_through(&opid(10, "B"));
        let mut cache = RestoreCache::new();
        resolve_heads_cached(&h, [&opid(9, "B")], &mut cache).unwrap();
        // every restore expanded below (9,B) was memoized
        for id in [opid(9, "B"), opid(5, "A"), opid(5, "B")] {
            assert!(cache.contains(&id), "{id}");
        }
        assert_eq!(cache.len(), 3);

        let restores: Vec<_> = h
            .ops()
            .filter(|o| o.is_restore())
            .map(|o| o.id.clone())
            .collect();
        for id in &restores {
            resolve_heads_cached(&h, [id], &mut cache).unwrap();
        }
        assert_eq!(cache.len(), 7);
        for id in &restores {
            let mut t = resolve_heads(&h, [id]).unwrap();
            sort_terminal_heads(&mut t).unwrap();
            let expected: Vec<_> = t.iter().map(|t| t.set_op.id.clone()).collect();
            assert_eq!(
                cache.get(id).unwrap(),
                expected.as_slice(),
                "entry for {id}"
            );
        }
    }

    #[test]
    fn restore_of_root_resolves_to_nothing() {
        let mut h: History<i64> = History::new();
        h.insert(Operation::set(opid(1, "A"), [], Some(7))).unwrap();
        h.insert(Operation::restore(
            opid(2, "A"),
            [opid(1, "A")],
            opid(1, "A"),
        ))
        .unwrap();
        assert!(resolve_heads(&h, h.heads()).unwrap().is_empty());
        let mut cache = RestoreCache::new();
        assert!(register_values(&h, Some(&mut cache)).unwrap().is_empty());
        assert_eq!(cache.get(&opid(2, "A")), Some(&[][..]));
    }

    #[test]
    fn lifo_order_gives_same_values() {
        for last in walkthrough_ops().iter().map(|o| o.id.clone()) {
            let h = history_through(&last);
            let fifo =
                get_values(resolve_heads_ordered(&h, h.heads(), WorkOrder::Fifo).unwrap()).unwrap();
            let lifo =
                get_values(resolve_heads_ordered(&h, h.heads(), WorkOrder::Lifo).unwrap()).unwrap();
            let rev: Vec<_> = h.heads().iter().rev().collect();
            let reversed = get_values(resolve_heads(&h, rev).unwrap()).unwrap();
            assert_eq!(fifo, lifo);
            assert_eq!(fifo, reversed);
        }
    }
}

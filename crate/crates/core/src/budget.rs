//! Per-thread search-node budget.
//!
//! The library never imposes limits on its own; a caller that needs one
//! (the CLI does) wraps the work in [`with_node_limit`]. Every search node
//! expanded on the current thread is charged against the limit and the
//! search aborts with [`Error::Budget`] once it is exhausted.

use std::cell::Cell;

use crate::error::{Error, Result};

thread_local! {
    static USED: Cell<u64> = const { Cell::new(0) };
    static LIMIT: Cell<Option<u64>> = const { Cell::new(None) };
}

/// Runs `f` with at most `limit` search nodes available on this thread.
pub fn with_node_limit<T>(limit: u64, f: impl FnOnce() -> T) -> T {
    let saved_limit = LIMIT.with(|l| l.replace(Some(limit)));
    let saved_used = USED.with(|u| u.replace(0));
    let out = f();
    LIMIT.with(|l| l.set(saved_limit));
    USED.with(|u| u.set(saved_used));
    out
}

/// Nodes charged on this thread since the innermost [`with_node_limit`].
pub fn nodes_used() -> u64 {
    USED.with(|u| u.get())
}

pub(crate) fn charge(nodes: u64) -> Result<()> {
    let used = USED.with(|u| {
        let v = u.get().saturating_add(nodes);
        u.set(v);
        v
    });
    match LIMIT.with(|l| l.get()) {
        Some(limit) if used > limit => Err(Error::Budget(format!(
            "search-node budget of {limit} exhausted"
        ))),
        _ => Ok(()),
    }
}

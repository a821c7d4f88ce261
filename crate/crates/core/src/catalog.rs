//! Small named structures over the binary signature `E/2`.
//!
//! Graphs store both orientations of every edge. Linear orders are strict
//! (`E` read as `<`) and use the same symbol so that every catalog member
//! can be compared with every other one.

use std::collections::BTreeSet;

use crate::structures::{disjoint_union, Signature, Structure};

/// Element names `a, b, c, …` (falling back to `v<i>` past 26).
pub fn names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if n <= 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

fn graph(name: &str, n: usize, edges: &[(usize, usize)]) -> Structure {
    Structure::graph(name, &names(n), edges).expect("catalog graph is well formed")
}

pub fn complete(n: usize) -> Structure {
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    graph(&format!("K{n}"), n, &edges)
}

/// `n` isolated vertices.
pub fn empty_graph(n: usize) -> Structure {
    graph(&format!("{n}K1"), n, &[])
}

/// Path on `n` vertices `a – b – c – …`.
pub fn path(n: usize) -> Structure {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    graph(&format!("P{n}"), n, &edges)
}

pub fn cycle(n: usize) -> Structure {
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    graph(&format!("C{n}"), n, &edges)
}

/// Star with one centre `a` and `n` leaves.
pub fn star(n: usize) -> Structure {
    let edges: Vec<_> = (1..=n).map(|i| (0, i)).collect();
    graph(&format!("S{n}"), n + 1, &edges)
}

/// Three vertices `a, b, c` with the single edge `ab`.
pub fn single_edge_plus_point() -> Structure {
    graph("E1", 3, &[(0, 1)])
}

/// The strict linear order `a < b < c < …`.
pub fn linear_order(n: usize) -> Structure {
    let lt: BTreeSet<Vec<usize>> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| vec![i, j]))
        .collect();
    Structure::from_indices(format!("L{n}"), Signature::binary(), names(n), vec![lt])
        .expect("linear order is well formed")
}

/// Directed path `a → b → …` (one orientation only).
pub fn directed_path(n: usize) -> Structure {
    let e: BTreeSet<Vec<usize>> = (1..n).map(|i| vec![i - 1, i]).collect();
    Structure::from_indices(format!("DP{n}"), Signature::binary(), names(n), vec![e])
        .expect("directed path is well formed")
}

pub fn directed_cycle(n: usize) -> Structure {
    let e: BTreeSet<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Structure::from_indices(format!("DC{n}"), Signature::binary(), names(n), vec![e])
        .expect("directed cycle is well formed")
}

/// A single vertex with a loop.
pub fn loop_vertex() -> Structure {
    Structure::from_indices(
        "Loop",
        Signature::binary(),
        names(1),
        vec![[vec![0, 0]].into_iter().collect()],
    )
    .expect("loop is well formed")
}

/// Disjoint sum renamed to `name`, elements relabelled `a, b, …`.
pub fn sum(name: &str, parts: &[Structure]) -> Structure {
    let (u, _) = disjoint_union(parts.iter()).expect("catalog parts share a signature");
    let n = u.len();
    u.with_name(name)
        .with_element_names(names(n))
        .expect("fresh names are distinct")
}

/// The fixed test catalog: graphs, orders and a few digraphs with at most
/// five elements, all over `E/2`.
pub fn standard() -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(complete(n));
    }
    for n in 2..=5 {
        out.push(empty_graph(n));
    }
    for n in 3..=5 {
        out.push(path(n));
    }
    out.push(cycle(4));
    out.push(cycle(5));
    out.push(star(3));
    out.push(single_edge_plus_point());
    out.push(sum("2K2", &[complete(2), complete(2)]));
    out.push(sum("2K2+K1", &[complete(2), complete(2), complete(1)]));
    out.push(sum("K3+K1", &[complete(3), complete(1)]));
    out.push(sum("K3+K2", &[complete(3), complete(2)]));
    out.push(sum("P3+K1", &[path(3), complete(1)]));
    out.push(sum("2K1+K2", &[empty_graph(2), complete(2)]));
    out.push(graph("K4-e", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]));
    out.push(graph("Paw", 4, &[(0, 1), (1, 2), (2, 0), (2, 3)]));
    out.push(graph("Bull", 5, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4)]));
    for n in 1..=5 {
        out.push(linear_order(n));
    }
    out.push(directed_path(3));
    out.push(directed_cycle(3));
    out.push(loop_vertex());
    out.dedup_by(|a, b| a.name() == b.name());
    out
}

/// Catalog members with at most `n` elements.
pub fn standard_up_to(n: usize) -> Vec<Structure> {
    standard().into_iter().filter(|s| s.len() <= n).collect()
}

/// Looks a catalog structure up by name (`K3`, `P4`, `C5`, `L3`, `3K1`, …).
pub fn by_name(name: &str) -> Option<Structure> {
    if let Some(s) = standard().into_iter().find(|s| s.name() == name) {
        return Some(s);
    }
    let (head, num) = name.split_at(name.find(|c: char| c.is_ascii_digit())?);
    let n: usize = num.parse().ok()?;
    if n == 0 || n > 26 {
        return None;
    }
    match head {
        "K" => Some(complete(n)),
        "P" => Some(path(n)),
        "C" if n >= 3 => Some(cycle(n)),
        "L" => Some(linear_order(n)),
        "S" => Some(star(n)),
        "DP" => Some(directed_path(n)),
        "DC" if n >= 2 => Some(directed_cycle(n)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_large_enough_and_small() {
        let c = standard();
        assert!(c.len() >= 30, "catalog has {} members", c.len());
        assert!(c.iter().all(|s| s.len() <= 5 && !s.is_empty()));
        let names: BTreeSet<_> = c.iter().map(|s| s.name().to_string()).collect();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn shapes() {
        assert_eq!(complete(4).relation(0).len(), 12);
        assert_eq!(cycle(6).relation(0).len(), 12);
        assert_eq!(linear_order(4).relation(0).len(), 6);
        assert_eq!(by_name("C6").unwrap().len(), 6);
        assert_eq!(by_name("2K2").unwrap().len(), 4);
        assert!(by_name("X3").is_none());
    }
}

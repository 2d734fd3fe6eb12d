"""Small graph utilities shared by the checkers (SCCs, BFS paths)."""
from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def sccs(n: int, succ, nodes=None) -> list[list[int]]:
    """Non-trivial strongly connected components (those containing a cycle).

    *succ* maps a node to its successors; with *nodes* given, the graph is
    restricted to that subset.
    """
    if nodes is None:
        nodes = range(n)
    nodes = list(nodes)
    if not nodes:
        return []
    index = {v: i for i, v in enumerate(nodes)}
    rows, cols = [], []
    loops = set()
    for v in nodes:
        i = index[v]
        for w in succ(v):
            j = index.get(w)
            if j is not None:
                rows.append(i)
                cols.append(j)
                if i == j:
                    loops.add(i)
    m = len(nodes)
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(m, m))
    _, labels = connected_components(mat, directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        comps.setdefault(int(lab), []).append(i)
    out = []
    for members in comps.values():
        if len(members) > 1 or members[0] in loops:
            out.append(sorted(nodes[i] for i in members))
    out.sort()
    return out


def all_sccs(n: int, succ) -> list[list[int]]:
    """Every SCC of a graph on ``0..n-1``, trivial ones included."""
    rows, cols = [], []
    for v in range(n):
        for w in succ(v):
            rows.append(v)
            cols.append(w)
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(mat, directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        comps.setdefault(int(lab), []).append(v)
    return list(comps.values())


def reachable(starts, succ) -> set:
    seen = set(starts)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def bfs_path(start, goal, succ, allowed=None) -> list | None:
    """Shortest node path of at least one step from *start* to a node in
    *goal* (a set or predicate), moving only through *allowed* nodes."""
    is_goal = goal if callable(goal) else goal.__contains__
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if allowed is not None and w not in allowed:
                continue
            if is_goal(w):
                path = [w, v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def path_to(start, goal, succ) -> list | None:
    """Shortest path from *start* to *goal* (possibly of length zero)."""
    if start == goal:
        return [start]
    return bfs_path(start, {goal}, succ)


def cycle_through(node, succ, allowed, must_visit=None) -> list:
    """A cycle ``node ... node`` inside *allowed* (node list without the
    repeated endpoint), passing through *must_visit* if given."""
    if must_visit is None or must_visit == node:
        path = bfs_path(node, {node}, succ, allowed)
        return path[:-1]
    there = bfs_path(node, {must_visit}, succ, allowed)
    back = bfs_path(must_visit, {node}, succ, allowed)
    return there[:-1] + back[:-1]

"""Small directed-graph toolkit: SCCs, shortest paths, condensation.

Graphs are adjacency dicts ``{vertex: [successor, ...]}``; every successor
must itself be a key.
"""

from __future__ import annotations

from collections import deque


def tarjan_scc(adj: dict) -> list[list]:
    """Strongly connected components, iterative Tarjan.

    Components come out in reverse topological order of the condensation
    (sinks first).
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comps: list[list] = []
    counter = 0
    for root in adj:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def induced(adj: dict, keep) -> dict:
    keep = set(keep)
    return {u: [v for v in adj[u] if v in keep] for u in adj if u in keep}


def is_strongly_connected(adj: dict) -> bool:
    return len(adj) > 0 and len(tarjan_scc(adj)) == 1


def on_cycle(adj: dict) -> set:
    """Vertices lying on a directed cycle (nontrivial SCC or self-loop)."""
    out = set()
    for comp in tarjan_scc(adj):
        if len(comp) > 1:
            out.update(comp)
        elif comp[0] in adj[comp[0]]:
            out.add(comp[0])
    return out


def terminal_components(adj: dict) -> list[frozenset]:
    """SCCs with no edge leaving them."""
    comps = [frozenset(c) for c in tarjan_scc(adj)]
    return [c for c in comps if all(w in c for v in c for w in adj[v])]


def shortest_path(adj: dict, source, target, min_len: int = 1) -> list | None:
    """Vertex list of a shortest walk ``source -> target`` with at least ``min_len`` edges.

    ``min_len`` is 0 or 1; with 1 a closed walk is required when
    ``source == target``.
    """
    return nearest_matching(adj, source, lambda v: v == target, min_len)


def nearest_matching(adj: dict, source, accept, min_len: int = 1) -> list | None:
    """Shortest walk from ``source`` to any vertex satisfying ``accept``."""
    if min_len == 0 and accept(source):
        return [source]
    parent = {}
    queue = deque()
    for w in adj[source]:
        if w not in parent:
            parent[w] = source
            queue.append(w)
    while queue:
        v = queue.popleft()
        if accept(v):
            path = [v]
            while True:
                p = parent[path[-1]]
                path.append(p)
                if p == source and len(path) >= 2:
                    break
            return path[::-1]
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return None

"""Network simplex kernel for the transportation problem.

The bipartite network has ``n`` supply nodes (rows), ``k`` demand nodes
(columns) and an artificial root joined to every node by a big-M arc. The
basis is kept strongly feasible (zero-flow tree arcs point away from the
root) and the leaving arc follows Cunningham's rule, which rules out
cycling on degenerate pivots. After a pivot only the subtree cut off by the
leaving arc is re-hung and relabeled; a full BFS rebuild is done once at
the start and once at the end.
"""

import numpy as np
from numba import njit

OPTIMAL = 0
ITERATION_LIMIT = 1
INFEASIBLE = 2


@njit(cache=True)
def _rebuild(n_nodes, root, basis, src, tgt, cost,
             parent, pred, up, depth, pot, order, adj_ptr, adj_arc):
    # adjacency of the tree in CSR form
    adj_ptr[:] = 0
    for e in basis:
        adj_ptr[src[e] + 1] += 1
        adj_ptr[tgt[e] + 1] += 1
    for v in range(n_nodes):
        adj_ptr[v + 1] += adj_ptr[v]
    fill = adj_ptr[:-1].copy()
    for e in basis:
        adj_arc[fill[src[e]]] = e
        fill[src[e]] += 1
        adj_arc[fill[tgt[e]]] = e
        fill[tgt[e]] += 1

    parent[root] = -1
    pred[root] = -1
    depth[root] = 0
    pot[root] = 0.0
    order[0] = root
    head = 0
    tail = 1
    while head < tail:
        p = order[head]
        head += 1
        for s in range(adj_ptr[p], adj_ptr[p + 1]):
            e = adj_arc[s]
            if e == pred[p]:
                continue
            if src[e] == p:
                w = tgt[e]
                up[w] = False
                pot[w] = pot[p] + cost[e]
            else:
                w = src[e]
                up[w] = True
                pot[w] = pot[p] - cost[e]
            parent[w] = p
            pred[w] = e
            depth[w] = depth[p] + 1
            order[tail] = w
            tail += 1
    return tail


@njit(cache=True)
def _unlink(c, p, first_child, next_sib, prev_sib):
    if prev_sib[c] >= 0:
        next_sib[prev_sib[c]] = next_sib[c]
    else:
        first_child[p] = next_sib[c]
    if next_sib[c] >= 0:
        prev_sib[next_sib[c]] = prev_sib[c]


@njit(cache=True)
def _link(c, p, first_child, next_sib, prev_sib):
    head = first_child[p]
    next_sib[c] = head
    prev_sib[c] = -1
    if head >= 0:
        prev_sib[head] = c
    first_child[p] = c


@njit(cache=True)
def _rehang(u_in, v_in, u_out, entering, src, cost, parent, pred, up, depth,
            pot, first_child, next_sib, prev_sib, stack):
    # reverse the tree path u_in -> u_out, then hang u_in below v_in
    _unlink(u_out, parent[u_out], first_child, next_sib, prev_sib)
    w = u_in
    new_parent = v_in
    arc = entering
    arc_up = src[entering] == u_in
    while True:
        old_parent = parent[w]
        old_arc = pred[w]
        old_up = up[w]
        if w != u_out:
            _unlink(w, old_parent, first_child, next_sib, prev_sib)
        parent[w] = new_parent
        pred[w] = arc
        up[w] = arc_up
        _link(w, new_parent, first_child, next_sib, prev_sib)
        if w == u_out:
            break
        new_parent = w
        arc = old_arc
        arc_up = not old_up
        w = old_parent

    # relabel the re-hung subtree
    top = 0
    stack[top] = u_in
    top += 1
    while top > 0:
        top -= 1
        w = stack[top]
        p = parent[w]
        depth[w] = depth[p] + 1
        if up[w]:
            pot[w] = pot[p] - cost[pred[w]]
        else:
            pot[w] = pot[p] + cost[pred[w]]
        c = first_child[w]
        while c >= 0:
            stack[top] = c
            top += 1
            c = next_sib[c]


@njit(cache=True)
def transport_simplex(C, a, b, max_pivots):
    """Solve ``min <C, X>`` over ``X >= 0, X 1 = a, X^T 1 = b``.

    ``C`` should be scaled to [0, 1]; ``a`` and ``b`` must have equal sums.
    Returns ``(X, row_pot, col_pot, status, pivots)`` where the potentials
    satisfy ``C[i, j] + row_pot[i] - col_pot[j] >= 0`` with equality on the
    basis.
    """
    n, k = C.shape
    m = n * k
    n_nodes = n + k + 1
    root = n + k
    n_arcs = m + n + k

    src = np.empty(n_arcs, np.int64)
    tgt = np.empty(n_arcs, np.int64)
    cost = np.empty(n_arcs, np.float64)
    flow = np.zeros(n_arcs, np.float64)
    for i in range(n):
        for j in range(k):
            e = i * k + j
            src[e] = i
            tgt[e] = n + j
            cost[e] = C[i, j]

    art_cost = 0.0
    for e in range(m):
        if abs(cost[e]) > art_cost:
            art_cost = abs(cost[e])
    art_cost = (art_cost + 1.0) * n_nodes

    basis = np.empty(n_nodes - 1, np.int64)
    pos = np.full(n_arcs, -1, np.int64)
    for i in range(n):
        e = m + i
        if a[i] > 0:
            src[e] = i
            tgt[e] = root
            flow[e] = a[i]
        else:
            src[e] = root
            tgt[e] = i
        cost[e] = art_cost
        basis[i] = e
        pos[e] = i
    for j in range(k):
        e = m + n + j
        src[e] = root
        tgt[e] = n + j
        flow[e] = b[j]
        cost[e] = art_cost
        basis[n + j] = e
        pos[e] = n + j

    parent = np.empty(n_nodes, np.int64)
    pred = np.empty(n_nodes, np.int64)
    up = np.zeros(n_nodes, np.bool_)
    depth = np.empty(n_nodes, np.int64)
    pot = np.empty(n_nodes, np.float64)
    order = np.empty(n_nodes, np.int64)
    adj_ptr = np.zeros(n_nodes + 1, np.int64)
    adj_arc = np.empty(2 * (n_nodes - 1), np.int64)
    _rebuild(n_nodes, root, basis, src, tgt, cost,
             parent, pred, up, depth, pot, order, adj_ptr, adj_arc)
    first_child = np.full(n_nodes, -1, np.int64)
    next_sib = np.full(n_nodes, -1, np.int64)
    prev_sib = np.full(n_nodes, -1, np.int64)
    for t in range(1, n_nodes):
        _link(order[t], parent[order[t]], first_child, next_sib, prev_sib)
    stack = np.empty(n_nodes, np.int64)

    eps = 1e-11
    block = max(int(np.sqrt(n_arcs)), 10)
    next_arc = 0
    pivots = 0
    status = OPTIMAL
    while True:
        # block search pricing
        entering = -1
        best = -eps
        scanned = 0
        cnt = 0
        e = next_arc
        while scanned < n_arcs:
            if pos[e] < 0:
                rc = cost[e] + pot[src[e]] - pot[tgt[e]]
                if rc < best:
                    best = rc
                    entering = e
            scanned += 1
            cnt += 1
            e += 1
            if e == n_arcs:
                e = 0
            if cnt == block:
                if entering >= 0:
                    break
                cnt = 0
        if entering < 0:
            break
        next_arc = e
        if pivots >= max_pivots:
            status = ITERATION_LIMIT
            break
        pivots += 1

        first = src[entering]
        second = tgt[entering]
        u = first
        v = second
        while u != v:
            if depth[u] > depth[v]:
                u = parent[u]
            elif depth[v] > depth[u]:
                v = parent[v]
            else:
                u = parent[u]
                v = parent[v]
        join = u

        # Cunningham's rule: last blocking arc along the cycle from the apex
        delta = np.inf
        u_out = -1
        out_first = True
        u = first
        while u != join:
            if up[u]:
                d = flow[pred[u]]
                if d < delta:
                    delta = d
                    u_out = u
            u = parent[u]
        u = second
        while u != join:
            if not up[u]:
                d = flow[pred[u]]
                if d <= delta:
                    delta = d
                    u_out = u
                    out_first = False
            u = parent[u]
        if u_out < 0:
            # cannot happen on a balanced transportation network
            status = INFEASIBLE
            break

        if delta > 0:
            flow[entering] += delta
            u = first
            while u != join:
                if up[u]:
                    flow[pred[u]] -= delta
                else:
                    flow[pred[u]] += delta
                u = parent[u]
            u = second
            while u != join:
                if up[u]:
                    flow[pred[u]] += delta
                else:
                    flow[pred[u]] -= delta
                u = parent[u]
        leaving = pred[u_out]
        flow[leaving] = 0.0
        slot = pos[leaving]
        pos[leaving] = -1
        basis[slot] = entering
        pos[entering] = slot
        if out_first:
            _rehang(first, second, u_out, entering, src, cost, parent, pred,
                    up, depth, pot, first_child, next_sib, prev_sib, stack)
        else:
            _rehang(second, first, u_out, entering, src, cost, parent, pred,
                    up, depth, pot, first_child, next_sib, prev_sib, stack)

    _rebuild(n_nodes, root, basis, src, tgt, cost,
             parent, pred, up, depth, pot, order, adj_ptr, adj_arc)

    # recompute basic flows from the supplies, leaves first, so the
    # marginals are not polluted by accumulated pivot updates
    excess = np.zeros(n_nodes, np.float64)
    for i in range(n):
        excess[i] = a[i]
    for j in range(k):
        excess[n + j] = -b[j]
    for e in range(n_arcs):
        flow[e] = 0.0
    for t in range(n_nodes - 1, 0, -1):
        w = order[t]
        e = pred[w]
        if up[w]:
            flow[e] = excess[w]
        else:
            flow[e] = -excess[w]
        excess[parent[w]] += excess[w]

    # degenerate basic cells come back as +-1e-18 residue; drop them
    total = 0.0
    for i in range(n):
        total += a[i]
    cutoff = 1e-14 * total
    X = np.zeros((n, k), np.float64)
    for i in range(n):
        for j in range(k):
            f = flow[i * k + j]
            if f > cutoff:
                X[i, j] = f
    art_flow = 0.0
    for e in range(m, n_arcs):
        if abs(flow[e]) > art_flow:
            art_flow = abs(flow[e])
    if status == OPTIMAL and art_flow > 1e-9:
        status = INFEASIBLE
    row_pot = pot[:n].copy()
    col_pot = pot[n:n + k].copy()
    return X, row_pot, col_pot, status, pivots

"""Pure-numpy implementations of the hot kernels.

Fallback path used when numba is unavailable or disabled via
OBJCUT_DISABLE_NUMBA=1. Arithmetic mirrors the jitted versions op-for-op so
both backends produce identical bits.
"""
import numpy as np

CUBIC_A = -0.5


def _cubic_weights(t):
    # t in [0,1): distances of the 4 taps are t+1, t, 1-t, 2-t
    def w_near(x):  # |x| <= 1
        return (CUBIC_A + 2.0) * x * x * x - (CUBIC_A + 3.0) * x * x + 1.0

    def w_far(x):  # 1 < |x| < 2
        return CUBIC_A * (x * x * x - 5.0 * x * x + 8.0 * x - 4.0)

    # polynomials are exactly 0.0 at |t| = 1 and 2, so no branch guards needed
    return w_far(t + 1.0), w_near(t), w_near(1.0 - t), w_far(2.0 - t)


def _axis_taps(n_in, n_out):
    scale = n_in / n_out
    s = (np.arange(n_out) + 0.5) * scale - 0.5
    i0 = np.floor(s)
    t = s - i0
    i0 = i0.astype(np.int64)
    idx = [np.clip(i0 + k, 0, n_in - 1) for k in (-1, 0, 1, 2)]
    return idx, _cubic_weights(t)


def _resample_axis(arr, n_out):
    # resamples the last axis; anchored on the floor tap so that identity
    # and constant inputs come out bit-exact
    idx, (w0, _, w2, w3) = _axis_taps(arr.shape[-1], n_out)
    v0, v1, v2, v3 = (arr[..., i] for i in idx)
    return v1 + (w0 * (v0 - v1) + w2 * (v2 - v1) + w3 * (v3 - v1))


def bicubic_upscale(src, out_h, out_w):
    tmp = _resample_axis(src, out_w)
    out = _resample_axis(tmp.T, out_h).T
    return np.minimum(np.maximum(out, 0.0), 255.0)


def label_components(bits, connectivity):
    h, w = bits.shape
    labels = np.zeros((h, w), dtype=np.int32)
    if connectivity == 8:
        offsets = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
    else:
        offsets = ((-1, 0), (0, -1), (0, 1), (1, 0))
    count = 0
    stack = []
    for sy in range(h):
        for sx in range(w):
            if bits[sy, sx] == 0 or labels[sy, sx] != 0:
                continue
            count += 1
            labels[sy, sx] = count
            stack.append((sy, sx))
            while stack:
                y, x = stack.pop()
                for dy, dx in offsets:
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < h and 0 <= nx < w and bits[ny, nx] != 0 and labels[ny, nx] == 0:
                        labels[ny, nx] = count
                        stack.append((ny, nx))
    return labels, count


def dinic_maxflow(n_nodes, source, sink, head, nxt, to, cap):
    """Dinic max-flow on a linked-list edge structure. Mutates cap in place
    (residual capacities); returns the flow value."""
    level = np.empty(n_nodes, dtype=np.int32)
    it = np.empty(n_nodes, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    path = np.empty(n_nodes + 1, dtype=np.int64)
    flow = 0.0
    while True:
        level[:] = -1
        level[source] = 0
        queue[0] = source
        qh, qt = 0, 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0.0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
                e = nxt[e]
        if level[sink] < 0:
            return flow
        it[:] = head
        u = source
        plen = 0
        while True:
            if u == sink:
                bottleneck = np.inf
                for k in range(plen):
                    if cap[path[k]] < bottleneck:
                        bottleneck = cap[path[k]]
                for k in range(plen):
                    cap[path[k]] -= bottleneck
                    cap[path[k] ^ 1] += bottleneck
                flow += bottleneck
                u = source
                plen = 0
                continue
            e = it[u]
            while e != -1 and not (cap[e] > 0.0 and level[to[e]] == level[u] + 1):
                e = nxt[e]
                it[u] = e
            if e != -1:
                path[plen] = e
                plen += 1
                u = to[e]
            else:
                if u == source:
                    break
                level[u] = -1  # dead end: prune from this phase
                plen -= 1
                pe = path[plen]
                u = to[pe ^ 1]
                it[u] = nxt[pe]


def residual_reachable(n_nodes, source, head, nxt, to, cap):
    """Nodes reachable from source through arcs with residual capacity."""
    seen = np.zeros(n_nodes, dtype=np.bool_)
    queue = np.empty(n_nodes, dtype=np.int64)
    seen[source] = True
    queue[0] = source
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            v = to[e]
            if cap[e] > 0.0 and not seen[v]:
                seen[v] = True
                queue[qt] = v
                qt += 1
            e = nxt[e]
    return seen

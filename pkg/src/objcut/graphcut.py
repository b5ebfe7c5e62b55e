"""Source/sink flow networks and exact min-cut via Dinic's algorithm."""
import numpy as np

from . import kernels


class FlowNetwork:
    """Directed arcs with non-negative capacities between pixel nodes and two
    terminals. Arcs into the source or out of the sink are rejected."""

    def __init__(self, n_nodes, source, sink):
        if not (0 <= source < n_nodes and 0 <= sink < n_nodes) or source == sink:
            raise ValueError("source/sink must be distinct nodes in range")
        self.n_nodes = n_nodes
        self.source = source
        self.sink = sink
        self._tails = []
        self._heads = []
        self._caps = []
        self._arrays = None

    def add_arc(self, u, v, capacity):
        if capacity < 0:
            raise ValueError(f"negative capacity {capacity}")
        if v == self.source or u == self.sink:
            raise ValueError("arcs may not enter the source or leave the sink")
        if u == v:
            raise ValueError("self-loops are not allowed")
        self._tails.append(u)
        self._heads.append(v)
        self._caps.append(float(capacity))
        self._arrays = None

    def add_arcs(self, tails, heads, capacities):
        """Bulk add; same validation as add_arc."""
        tails = np.asarray(tails, dtype=np.int64)
        heads = np.asarray(heads, dtype=np.int64)
        capacities = np.asarray(capacities, dtype=np.float64)
        if (capacities < 0).any():
            raise ValueError("negative capacity")
        if (heads == self.source).any() or (tails == self.sink).any():
            raise ValueError("arcs may not enter the source or leave the sink")
        if (tails == heads).any():
            raise ValueError("self-loops are not allowed")
        self._tails.extend(tails.tolist())
        self._heads.extend(heads.tolist())
        self._caps.extend(capacities.tolist())
        self._arrays = None

    @property
    def n_arcs(self):
        return len(self._caps)

    def arcs(self):
        """(tail, head, capacity) triples in insertion order."""
        return list(zip(self._tails, self._heads, self._caps))

    def _edge_arrays(self):
        # paired residual edges: forward at 2k, zero-capacity reverse at 2k+1
        if self._arrays is None:
            m = len(self._caps)
            if m == 0:
                self._arrays = (np.full(self.n_nodes, -1, dtype=np.int64),
                                np.empty(0, dtype=np.int64),
                                np.empty(0, dtype=np.int64),
                                np.empty(0, dtype=np.float64))
                return self._arrays
            tails = np.asarray(self._tails, dtype=np.int64)
            heads = np.asarray(self._heads, dtype=np.int64)
            to = np.empty(2 * m, dtype=np.int64)
            cap = np.zeros(2 * m, dtype=np.float64)
            to[0::2] = heads
            to[1::2] = tails
            cap[0::2] = np.asarray(self._caps, dtype=np.float64)
            # per-node linked lists, newest edge first (deterministic)
            tail_of = np.empty(2 * m, dtype=np.int64)
            tail_of[0::2] = tails
            tail_of[1::2] = heads
            order = np.argsort(tail_of, kind="stable")
            sorted_tails = tail_of[order]
            nxt = np.full(2 * m, -1, dtype=np.int64)
            same = sorted_tails[1:] == sorted_tails[:-1]
            nxt[order[1:][same]] = order[:-1][same]
            head = np.full(self.n_nodes, -1, dtype=np.int64)
            run_ends = np.flatnonzero(np.append(~same, True))
            head[sorted_tails[run_ends]] = order[run_ends]
            self._arrays = (head, nxt, to, cap)
        return self._arrays


def max_flow_min_cut(net):
    """Exact max flow and the source side of a minimum cut.

    Returns (flow_value, source_side) with source_side a boolean array over
    node ids; deterministic for a fixed network.
    """
    if net.n_arcs == 0:
        side = np.zeros(net.n_nodes, dtype=bool)
        side[net.source] = True
        return 0.0, side
    head, nxt, to, cap = net._edge_arrays()
    residual = cap.copy()
    flow = kernels.dinic_maxflow(net.n_nodes, net.source, net.sink,
                                 head, nxt, to, residual)
    side = kernels.residual_reachable(net.n_nodes, net.source,
                                      head, nxt, to, residual)
    return float(flow), np.asarray(side, dtype=bool)

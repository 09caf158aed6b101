"""Boundary profiles: optimum of G glued to H via per-side state tables.

Any solution X of G glued to H splits into ``D = X ∩ B`` and interior
parts on each side.  Whether the union is feasible depends on each side
only through a *boundary state*:

``vc``   the set D (each side must become edgeless);
``oct``  D plus, for the surviving boundary, which vertices share a
         component and their relative colour parity;
``mwc``  D plus the partition of the surviving boundary into components,
         each marked with whether it holds an interior terminal.

A side's *profile* maps each state to the fewest interior deletions that
reach it.  The glued optimum is the minimum of ``|D| + cost_G + cost_H``
over compatible state pairs, which is exact.  Profiles of all partners
are computed in one vectorised pass and deduplicated.

States are encoded per boundary position i by ``2 * root_i + bit_i``
where ``root_i`` is the smallest boundary position in i's component (k
for deleted positions) and ``bit_i`` is a colour parity (oct) or the
terminal flag of the component (mwc, stored at the root only).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

BIG = 1 << 20
_LBL = np.int16(32000)


def kind_of(problem: str) -> str:
    return {"vc": "vc", "oct": "oct", "smwc": "mwc", "dtmwc": "mwc"}[problem]


# -- state spaces -------------------------------------------------------

def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def _encode(k: int, codes: list[int]) -> int:
    base = 2 * (k + 1)
    return sum(c * base**i for i, c in enumerate(codes))


@dataclass
class StateSpace:
    kind: str
    k: int
    keys: np.ndarray  # sorted int64
    dead: np.ndarray  # dead mask of each state
    structs: list  # per state: list of (block positions, bit) or oct parity tuples
    compat: dict  # (D, bt) -> list of (gi, np.ndarray of hi)

    def index(self, keys: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.keys, keys)
        return idx


@lru_cache(maxsize=None)
def state_space(kind: str, k: int) -> StateSpace:
    entries = []  # (key, D, struct)
    for D in range(1 << k):
        alive = [i for i in range(k) if not D >> i & 1]
        dead_codes = {i: 2 * k for i in range(k) if D >> i & 1}
        if kind == "vc":
            codes = [dead_codes.get(i, 2 * i) for i in range(k)]
            entries.append((_encode(k, codes), D, ()))
            continue
        for part in _set_partitions(alive):
            blocks = [sorted(b) for b in part]
            if kind == "oct":
                members = [(b[0], m) for b in blocks for m in b[1:]]
                for bits in itertools.product((0, 1), repeat=len(members)):
                    par = {b[0]: 0 for b in blocks}
                    root = {}
                    for b in blocks:
                        for m in b:
                            root[m] = b[0]
                    for (r, m), bit in zip(members, bits):
                        par[m] = bit
                    codes = [dead_codes.get(i, 2 * root.get(i, 0) + par.get(i, 0)) for i in range(k)]
                    entries.append((_encode(k, codes), D, tuple((i, root[i], par[i]) for i in alive)))
            else:
                for bits in itertools.product((0, 1), repeat=len(blocks)):
                    codes = [2 * k] * k
                    for b, bit in zip(blocks, bits):
                        for m in b:
                            codes[m] = 2 * b[0] + (bit if m == b[0] else 0)
                    entries.append((_encode(k, codes), D, tuple((tuple(b), bit) for b, bit in zip(blocks, bits))))
    entries.sort()
    keys = np.array([e[0] for e in entries], dtype=np.int64)
    dead = np.array([e[1] for e in entries], dtype=np.int64)
    structs = [e[2] for e in entries]
    compat = _compat(kind, k, dead, structs)
    return StateSpace(kind, k, keys, dead, structs, compat)


def _find(par, x):
    while par[x] != x:
        par[x] = par[par[x]]
        x = par[x]
    return x


def _oct_consistent(k, sa, sb) -> bool:
    parent = list(range(k))
    parity = [0] * k  # parity to parent

    def find(x):
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    for struct in (sa, sb):
        for i, r, p in struct:
            (ri, pi), (rr, pr) = find(i), find(r)
            if ri == rr:
                if pi ^ pr != p:
                    return False
            else:
                parent[ri] = rr
                parity[ri] = pi ^ pr ^ p
    return True


def _mwc_join_ok(k, sa, sb, bt) -> bool:
    parent = list(range(k))
    for struct in (sa, sb):
        for block, _ in struct:
            for m in block[1:]:
                a, b = _find(parent, block[0]), _find(parent, m)
                if a != b:
                    parent[a] = b
    count: dict[int, int] = {}
    for struct in (sa, sb):
        for block, bit in struct:
            if bit:
                r = _find(parent, block[0])
                count[r] = count.get(r, 0) + 1
    for i in range(k):
        if bt >> i & 1:
            r = _find(parent, i)
            count[r] = count.get(r, 0) + 1
    return all(c <= 1 for c in count.values())


def _compat(kind, k, dead, structs):
    by_d: dict[int, list[int]] = {}
    for i, d in enumerate(dead):
        by_d.setdefault(int(d), []).append(i)
    compat = {}
    for D, idxs in by_d.items():
        if kind == "vc":
            compat[(D, 0)] = [(i, np.array([i])) for i in idxs]
            continue
        alive_mask = ((1 << k) - 1) & ~D
        bts = [0] if kind == "oct" else [bt for bt in range(1 << k) if bt & ~alive_mask == 0]
        for bt in bts:
            pairs = []
            for gi in idxs:
                his = []
                for hi in idxs:
                    if kind == "oct":
                        ok = _oct_consistent(k, structs[gi], structs[hi])
                    else:
                        ok = _mwc_join_ok(k, structs[gi], structs[hi], bt)
                    if ok:
                        his.append(hi)
                if his:
                    pairs.append((gi, np.array(his)))
            compat[(D, bt)] = pairs
    return compat


# -- vectorised component labels ------------------------------------------

def _labels_shared(nbrs: list[list[int]], alive: np.ndarray) -> np.ndarray:
    """Component labels for one graph under many alive masks (rows)."""
    R, n = alive.shape
    lab = np.where(alive, np.arange(n, dtype=np.int16)[None, :], _LBL).astype(np.int16)
    while True:
        changed = False
        for v in range(n):
            if not nbrs[v]:
                continue
            cand = lab[:, nbrs[v]].min(axis=1)
            new = np.where(alive[:, v], np.minimum(lab[:, v], cand), _LBL)
            if not changed and np.any(new != lab[:, v]):
                changed = True
            lab[:, v] = new
        if not changed:
            return lab


def _labels_batched(adj: np.ndarray, alive: np.ndarray) -> np.ndarray:
    """Component labels where every row has its own adjacency matrix."""
    R, n = alive.shape
    lab = np.where(alive, np.arange(n, dtype=np.int16)[None, :], _LBL).astype(np.int16)
    while True:
        changed = False
        for v in range(n):
            cand = np.where(adj[:, :, v], lab, _LBL).min(axis=1)
            new = np.where(alive[:, v], np.minimum(lab[:, v], cand), _LBL)
            if not changed and np.any(new != lab[:, v]):
                changed = True
            lab[:, v] = new
        if not changed:
            return lab


def _double_cover_nbrs(nbrs: list[list[int]]) -> list[list[int]]:
    n = len(nbrs)
    return [[u + n for u in nbrs[v]] for v in range(n)] + [list(nbrs[v]) for v in range(n)]


def _double_cover_adj(adj: np.ndarray) -> np.ndarray:
    R, n, _ = adj.shape
    out = np.zeros((R, 2 * n, 2 * n), dtype=bool)
    out[:, :n, n:] = adj
    out[:, n:, :n] = adj
    return out


# -- keys from labels ---------------------------------------------------

def _keys_vc(k, alive, edge_list):
    R = alive.shape[0]
    feasible = np.ones(R, dtype=bool)
    for u, v in edge_list:
        feasible &= ~(alive[:, u] & alive[:, v])
    base = 2 * (k + 1)
    key = np.zeros(R, dtype=np.int64)
    for i in range(k):
        code = np.where(alive[:, i], 2 * i, 2 * k)
        key += code.astype(np.int64) * base**i
    return key, feasible


def _keys_oct(k, n, alive, lab2):
    l0, l1 = lab2[:, :n], lab2[:, n:]
    R = alive.shape[0]
    feasible = ~np.any(alive & (l0 == l1), axis=1)
    base = 2 * (k + 1)
    key = np.zeros(R, dtype=np.int64)
    for i in range(k):
        root = np.full(R, i, dtype=np.int64)
        par = np.zeros(R, dtype=np.int64)
        for j in range(i - 1, -1, -1):
            same = alive[:, j] & (l0[:, j] == l0[:, i])
            opp = alive[:, j] & (l0[:, j] == l1[:, i])
            hit = same | opp
            root = np.where(hit, j, root)
            par = np.where(hit, np.where(same, 0, 1), par)
        code = np.where(alive[:, i], 2 * root + par, 2 * k)
        key += code * base**i
    return key, feasible


def _keys_mwc(k, alive, lab, term_cols):
    """term_cols: local indices of interior terminals."""
    R = alive.shape[0]
    feasible = np.ones(R, dtype=bool)
    for a, b in itertools.combinations(term_cols, 2):
        feasible &= ~(alive[:, a] & alive[:, b] & (lab[:, a] == lab[:, b]))
    base = 2 * (k + 1)
    key = np.zeros(R, dtype=np.int64)
    for i in range(k):
        root = np.full(R, i, dtype=np.int64)
        for j in range(i - 1, -1, -1):
            root = np.where(alive[:, j] & (lab[:, j] == lab[:, i]), j, root)
        is_root = root == i
        flag = np.zeros(R, dtype=bool)
        for t in term_cols:
            flag |= alive[:, t] & (lab[:, t] == lab[:, i])
        code = np.where(alive[:, i], 2 * root + (flag & is_root), 2 * k)
        key += code.astype(np.int64) * base**i
    return key, feasible


def _all_masks(bits: int) -> np.ndarray:
    r = np.arange(1 << bits, dtype=np.int64)
    return ((r[:, None] >> np.arange(bits)[None, :]) & 1).astype(bool)


# -- G side -------------------------------------------------------------

@dataclass(frozen=True)
class LocalSide:
    """A side relabelled so that boundary vertex i (sorted) is position i."""

    k: int
    n: int
    edges: tuple[tuple[int, int], ...]
    terminals: frozenset[int]  # interior positions only
    boundary_terminals: int  # bit mask over positions
    n_terminals: int


def localize(abg, boundary: list[int]) -> LocalSide:
    g = abg.graph.underlying_undirected() if abg.graph.arcs else abg.graph
    inner = sorted(g.vertices - set(boundary))
    pos = {v: i for i, v in enumerate(boundary)}
    pos.update({v: len(boundary) + j for j, v in enumerate(inner)})
    T = abg.terminals
    edges = tuple(sorted((pos[u], pos[v]) for u, v in g.edges))
    bt = sum(1 << pos[v] for v in T if v in pos and pos[v] < len(boundary))
    return LocalSide(len(boundary), len(pos), edges, frozenset(pos[v] for v in T if pos[v] >= len(boundary)), bt, len(T))


def side_profile(kind: str, side: LocalSide, forbid_terminal_deletion: bool) -> np.ndarray:
    k, n = side.k, side.n
    space = state_space(kind, k)
    deletable = [i for i in range(n) if not (forbid_terminal_deletion and i in side.terminals)]
    masks = _all_masks(len(deletable))
    R = masks.shape[0]
    alive = np.ones((R, n), dtype=bool)
    alive[:, deletable] = ~masks
    cost = (~alive[:, k:]).sum(axis=1)
    nbrs = [[] for _ in range(n)]
    for u, v in side.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    if kind == "vc":
        key, feas = _keys_vc(k, alive, side.edges)
    elif kind == "oct":
        lab2 = _labels_shared(_double_cover_nbrs(nbrs), np.concatenate([alive, alive], axis=1))
        key, feas = _keys_oct(k, n, alive, lab2)
    else:
        lab = _labels_shared(nbrs, alive)
        key, feas = _keys_mwc(k, alive, lab, sorted(side.terminals))
    prof = np.full(len(space.keys), BIG, dtype=np.int64)
    idx = space.index(key[feas])
    np.minimum.at(prof, idx, cost[feas])
    return prof


# -- partners -----------------------------------------------------------

def _pair_list(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def canonical_edge_masks(k: int, h: int) -> np.ndarray:
    """Edge masks on k fixed + h free vertices, one per orbit under permuting the free ones."""
    n = k + h
    pairs = _pair_list(n)
    where = {p: i for i, p in enumerate(pairs)}
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    canon = masks.copy()
    for perm in itertools.permutations(range(h)):
        if perm == tuple(range(h)):
            continue
        m = list(range(k)) + [k + p for p in perm]
        img = np.zeros_like(masks)
        for i, (a, b) in enumerate(pairs):
            x, y = sorted((m[a], m[b]))
            img |= ((masks >> i) & 1) << where[(x, y)]
        canon = np.minimum(canon, img)
    return masks[masks == canon]


@dataclass
class PartnerTable:
    """Deduplicated partner profiles for one (kind, k, h, policy)."""

    kind: str
    k: int
    h: int
    policy: str
    profiles: np.ndarray  # (U, n_states)
    counts: np.ndarray  # (U,) interior terminal count
    examples: list  # per row: (n_vertices, edges as position pairs, interior terminal positions)
    bt_options: list[int]
    n_partners: int


def _partner_profiles_for(kind, k, hp, policy, forbid_terminal_deletion):
    n = k + hp
    pairs = _pair_list(n)
    emasks = canonical_edge_masks(k, hp)
    G = len(emasks)
    space = state_space(kind, k)
    S = len(space.keys)
    dmasks = _all_masks(n)  # deletion masks over all local vertices
    M = dmasks.shape[0]
    adj = np.zeros((G, n, n), dtype=bool)
    for i, (a, b) in enumerate(pairs):
        bit = ((emasks >> i) & 1).astype(bool)
        adj[:, a, b] = bit
        adj[:, b, a] = bit
    alive = np.tile(~dmasks, (G, 1))  # row r = g * M + m
    cost = np.tile((dmasks[:, k:]).sum(axis=1), G)
    radj = np.repeat(adj, M, axis=0)
    gidx = np.repeat(np.arange(G), M)
    if kind == "vc":
        feas = ~np.any(radj & alive[:, :, None] & alive[:, None, :], axis=(1, 2))
        key, _ = _keys_vc(k, alive, [])
        variants = [(0, key, feas)]
    elif kind == "oct":
        lab2 = _labels_batched(_double_cover_adj(radj), np.concatenate([alive, alive], axis=1))
        key, feas = _keys_oct(k, n, alive, lab2)
        variants = [(0, key, feas)]
    else:
        lab = _labels_batched(radj, alive)
        variants = []
        tsets = [0] if policy == "none" else range(1 << hp)
        for tm in tsets:
            tcols = [k + j for j in range(hp) if tm >> j & 1]
            key, feas = _keys_mwc(k, alive, lab, tcols)
            if forbid_terminal_deletion and tcols:
                feas = feas & ~np.any(~alive[:, tcols], axis=1)
            variants.append((tm, key, feas))
    out_prof, out_count, out_ex = [], [], []
    for tm, key, feas in variants:
        prof = np.full(G * S, BIG, dtype=np.int64)
        flat = gidx[feas] * S + space.index(key[feas])
        np.minimum.at(prof, flat, cost[feas])
        out_prof.append(prof.reshape(G, S))
        out_count.append(np.full(G, bin(tm).count("1")))
        for gi in range(G):
            em = int(emasks[gi])
            out_ex.append((n, tuple(p for i, p in enumerate(pairs) if em >> i & 1), tuple(k + j for j in range(hp) if tm >> j & 1)))
    return np.concatenate(out_prof), np.concatenate(out_count), out_ex


@lru_cache(maxsize=None)
def partner_table(kind: str, k: int, h: int, policy: str, forbid_terminal_deletion: bool, count_matters: bool) -> PartnerTable:
    profs, counts, examples = [], [], []
    for hp in range(h + 1):
        p, c, e = _partner_profiles_for(kind, k, hp, policy, forbid_terminal_deletion)
        profs.append(p)
        counts.append(c)
        examples.extend(e)
    prof = np.concatenate(profs)
    count = np.concatenate(counts)
    n_raw = len(prof)
    keymat = np.concatenate([prof, count[:, None]], axis=1) if count_matters else prof
    _, first = np.unique(keymat, axis=0, return_index=True)
    first = np.sort(first)
    if policy == "any":
        bt_options = list(range(1 << k))
    else:
        bt_options = [0]
    return PartnerTable(kind, k, h, policy, prof[first], count[first], [examples[i] for i in first], bt_options, n_raw * len(bt_options))


def combine(
    kind: str,
    k: int,
    prof_g: np.ndarray,
    table: PartnerTable,
    bt_g: int,
    bt_h: int,
    forbid_boundary_terminal_deletion: bool,
) -> np.ndarray:
    """Glued optimum for every partner row (BIG or more means infeasible)."""
    space = state_space(kind, k)
    U = table.profiles.shape[0]
    best = np.full(U, BIG, dtype=np.int64)
    bt = bt_g | bt_h
    for D in range(1 << k):
        if forbid_boundary_terminal_deletion and D & bt:
            continue
        live_bt = 0 if kind != "mwc" else bt & ~D
        pairs = space.compat.get((D, live_bt))
        if not pairs:
            continue
        dsize = bin(D).count("1")
        for gi, his in pairs:
            cg = prof_g[gi]
            if cg >= BIG:
                continue
            if len(his) == 1:
                cand = table.profiles[:, his[0]]
            else:
                cand = table.profiles[:, his].min(axis=1)
            np.minimum(best, cand + (cg + dsize), out=best)
    return np.minimum(best, BIG)

"""Gluing-equivalence checks against enumerated or sampled partners.

Two routes compute the glued optima:

* ``engine="profile"`` (exhaustive mode only) combines boundary profiles;
  see :mod:`bkernel.oracle.profiles`.
* ``engine="direct"`` glues each partner explicitly and runs
  :func:`solve_exact` on both sides.

Both must agree; the test-suite cross-checks them.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ..bkg import serialize
from ..errors import BudgetExceeded, ParameterError, PreconditionError
from ..graph import AnnotatedBoundariedGraph, BoundariedGraph, Graph, glue
from . import profiles as P
from .exact import canonical_problem, solve_exact

DEFAULT_POLICY = {"vc": "none", "oct": "none", "smwc": "interior", "dtmwc": "any"}
MAX_PROFILE_VERTICES = 6  # |B| + h in exhaustive mode
MAX_SIDE_VERTICES = 20


@dataclass(frozen=True)
class PartnerFamily:
    """Which partners H to glue against.

    ``annotation_policy``: ``none`` (no terminals), ``interior`` (terminals
    only among H's extra vertices), ``any`` (terminals anywhere in H) or
    ``default`` (per problem: interior for smwc, any for dtmwc).
    """

    boundary: frozenset[int]
    extra_budget: int = 3
    annotation_policy: str = "default"
    mode: str = "exhaustive"
    n: int = 500
    seed: int = 0
    edge_prob: float = 0.5
    terminal_prob: float = 0.3

    def policy_for(self, problem: str) -> str:
        if problem in ("vc", "oct"):
            return "none"
        if self.annotation_policy == "default":
            return DEFAULT_POLICY[problem]
        if self.annotation_policy not in ("none", "interior", "any"):
            raise ParameterError(f"unknown annotation policy {self.annotation_policy!r}")
        return self.annotation_policy


@dataclass
class EquivalenceReport:
    passed: bool
    checked: int
    engine: str
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "engine": self.engine,
            "counterexample": self.counterexample,
        }


def _arity(problem: str) -> int:
    return 1 if problem in ("smwc", "dtmwc") else 0


def _make_partner(boundary: list[int], first_fresh: int, n_local: int, edges, terminals, problem: str) -> AnnotatedBoundariedGraph:
    k = len(boundary)
    ids = list(boundary) + list(range(first_fresh, first_fresh + n_local - k))
    g = Graph.build(ids, [(ids[a], ids[b]) for a, b in edges])
    anns = [("terminals", frozenset(ids[t] for t in terminals))] if _arity(problem) else []
    return AnnotatedBoundariedGraph(BoundariedGraph(g, frozenset(boundary)), tuple(anns))


def _local_to_partner(ex, bt_h, boundary, first_fresh, problem):
    n_local, edges, tint = ex
    terms = list(tint) + [i for i in range(len(boundary)) if bt_h >> i & 1]
    return _make_partner(boundary, first_fresh, n_local, edges, terms, problem)


def iter_partners(problem: str, partners: PartnerFamily, first_fresh: int) -> Iterator[AnnotatedBoundariedGraph]:
    """Materialise every partner (exhaustive) or the random sample (sampled)."""
    problem = canonical_problem(problem)
    boundary = sorted(partners.boundary)
    k = len(boundary)
    policy = partners.policy_for(problem)
    if partners.mode == "sampled":
        rng = np.random.default_rng(partners.seed)
        for _ in range(partners.n):
            hp = int(rng.integers(0, partners.extra_budget + 1))
            n = k + hp
            edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < partners.edge_prob]
            terms = []
            if policy != "none":
                lo = 0 if policy == "any" else k
                terms = [i for i in range(lo, n) if rng.random() < partners.terminal_prob]
            yield _make_partner(boundary, first_fresh, n, edges, terms, problem)
        return
    if partners.mode != "exhaustive":
        raise ParameterError(f"unknown partner mode {partners.mode!r}")
    for hp in range(partners.extra_budget + 1):
        n = k + hp
        pairs = list(itertools.combinations(range(n), 2))
        for em in P.canonical_edge_masks(k, hp):
            edges = [p for i, p in enumerate(pairs) if int(em) >> i & 1]
            if policy == "none":
                yield _make_partner(boundary, first_fresh, n, edges, [], problem)
                continue
            lo = 0 if policy == "any" else k
            for r in range(n - lo + 1):
                for ts in itertools.combinations(range(lo, n), r):
                    yield _make_partner(boundary, first_fresh, n, edges, ts, problem)


def _opt(problem, abg, s):
    return solve_exact(problem, abg.graph, abg.annotations, s=s).value


def _same(a, b, delta) -> bool:
    if a == math.inf or b == math.inf:
        return a == b
    return a == b + delta


def _check_boundaries(before, after, partners):
    if before.boundary != partners.boundary or after.boundary != partners.boundary:
        raise PreconditionError("before, after and partners must share one boundary")
    if before.arity != after.arity:
        raise PreconditionError("before and after differ in annotation arity")


def check_gluing_equivalence(
    problem: str,
    before: AnnotatedBoundariedGraph,
    after: AnnotatedBoundariedGraph,
    delta: int,
    partners: PartnerFamily,
    *,
    s: int | None = None,
    engine: str = "auto",
) -> EquivalenceReport:
    """Check OPT(before + H) == OPT(after + H) + delta for every partner H."""
    problem = canonical_problem(problem)
    if problem == "smwc" and s is None:
        raise ParameterError("smwc needs s")
    _check_boundaries(before, after, partners)
    if engine == "auto":
        engine = "profile" if partners.mode == "exhaustive" else "direct"
    if engine == "profile":
        if partners.mode != "exhaustive":
            raise ParameterError("the profile engine enumerates all partners; use mode='exhaustive'")
        return _check_profile(problem, before, after, delta, partners, s)
    if engine == "direct":
        return _check_direct(problem, before, after, delta, partners, s)
    raise ParameterError(f"unknown engine {engine!r}")


def _check_direct(problem, before, after, delta, partners, s) -> EquivalenceReport:
    fresh = max(before.graph.next_fresh_id, after.graph.next_fresh_id)
    checked = 0
    for h in iter_partners(problem, partners, fresh):
        checked += 1
        a = _opt(problem, glue(before, _fit(h, before)), s)
        b = _opt(problem, glue(after, _fit(h, after)), s)
        if not _same(a, b, delta):
            return EquivalenceReport(False, checked, "direct", _witness(h, a, b, delta))
    return EquivalenceReport(True, checked, "direct")


def _fit(h: AnnotatedBoundariedGraph, like: AnnotatedBoundariedGraph) -> AnnotatedBoundariedGraph:
    """Give the partner the same annotation arity as ``like``."""
    if h.arity == like.arity:
        return h
    if h.arity == 0:
        return h.replace(annotations=tuple((n, frozenset()) for n, _ in like.annotations))
    return h.replace(annotations=h.annotations[: like.arity])


def _witness(h, a, b, delta) -> dict:
    return {
        "partner_bkg": serialize(h),
        "opt_before": "inf" if a == math.inf else int(a),
        "opt_after": "inf" if b == math.inf else int(b),
        "delta": delta,
    }


def _check_profile(problem, before, after, delta, partners, s) -> EquivalenceReport:
    boundary = sorted(partners.boundary)
    k = len(boundary)
    if k + partners.extra_budget > MAX_PROFILE_VERTICES:
        raise BudgetExceeded(f"|B| + h = {k + partners.extra_budget} exceeds the exhaustive budget {MAX_PROFILE_VERTICES}")
    for side in (before, after):
        if len(side.graph.vertices) > MAX_SIDE_VERTICES:
            raise BudgetExceeded(f"{len(side.graph.vertices)} vertices exceed the profile budget {MAX_SIDE_VERTICES}")
    kind = P.kind_of(problem)
    policy = partners.policy_for(problem)
    smwc = problem == "smwc"
    table = P.partner_table(kind, k, partners.extra_budget, policy, smwc, smwc)
    sides = [P.localize(before, boundary), P.localize(after, boundary)]
    profs = [P.side_profile(kind, sd, smwc) for sd in sides]
    fresh = max(before.graph.next_fresh_id, after.graph.next_fresh_id)
    for bt_h in table.bt_options:
        opts = []
        for sd, prof in zip(sides, profs):
            o = P.combine(kind, k, prof, table, sd.boundary_terminals, bt_h, smwc)
            if smwc:
                total = sd.n_terminals + table.counts + bin(bt_h & ~sd.boundary_terminals).count("1")
                o = np.where(total > s, P.BIG, o)
            opts.append(o)
        a, b = opts
        inf_a, inf_b = a >= P.BIG, b >= P.BIG
        bad = (inf_a != inf_b) | (~inf_a & ~inf_b & (a != b + delta))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            h = _fit(_local_to_partner(table.examples[i], bt_h, boundary, fresh, problem), before)
            va = math.inf if inf_a[i] else int(a[i])
            vb = math.inf if inf_b[i] else int(b[i])
            return EquivalenceReport(False, table.n_partners, "profile", _witness(h, va, vb, delta))
    return EquivalenceReport(True, table.n_partners, "profile")


def glued_optima_profile(problem, side: AnnotatedBoundariedGraph, partners: PartnerFamily, s=None):
    """Glued optimum for each deduplicated partner row and boundary-terminal option.

    Returns ``(table, {bt_h: array})``; used for cross-checks and fixtures.
    """
    problem = canonical_problem(problem)
    boundary = sorted(partners.boundary)
    k = len(boundary)
    kind = P.kind_of(problem)
    smwc = problem == "smwc"
    table = P.partner_table(kind, k, partners.extra_budget, partners.policy_for(problem), smwc, smwc)
    sd = P.localize(side, boundary)
    prof = P.side_profile(kind, sd, smwc)
    out = {}
    for bt_h in table.bt_options:
        o = P.combine(kind, k, prof, table, sd.boundary_terminals, bt_h, smwc)
        if smwc:
            total = sd.n_terminals + table.counts + bin(bt_h & ~sd.boundary_terminals).count("1")
            o = np.where(total > s, P.BIG, o)
        out[bt_h] = o
    return table, out


def partner_from_row(problem, table, row: int, bt_h: int, boundary, first_fresh: int) -> AnnotatedBoundariedGraph:
    return _local_to_partner(table.examples[row], bt_h, sorted(boundary), first_fresh, canonical_problem(problem))

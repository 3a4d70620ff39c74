"""Shared utilities for the test suite.

Seeded instance generators, an exhaustive concept enumerator (subterms
are shared, so one memoising Evaluator prices each enumerated concept at
a single set operation), an independent matrix-based model checker, a
brute-force role closure oracle, and a trace replayer that recomputes
every recorded split from the graph alone.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from dlbisim import syntax as sx
from dlbisim.core import (
    BisimRelation,
    FeatureSet,
    Interpretation,
    Signature,
    build_interpretation,
)
from dlbisim.gen import make_signature, random_interpretation
from dlbisim.refine import RefinementTrace

ALL_PHIS = FeatureSet.all_subsets()


def seeded(seed: int) -> random.Random:
    return random.Random(seed)


def small_instance(rng: random.Random, max_concepts: int = 2, max_roles: int = 2,
                   max_individuals: int = 2, max_n: int = 12) -> Interpretation:
    """One random instance inside the small-model budget."""
    sig = make_signature(rng.randint(0, max_concepts),
                         rng.randint(0, max_roles),
                         rng.randint(0, max_individuals))
    n = rng.randint(1, max_n)
    return random_interpretation(rng, sig, n,
                                 edge_density=rng.uniform(0.05, 0.4),
                                 concept_density=rng.uniform(0.2, 0.8))


def instance_pair(rng: random.Random, max_concepts: int = 2, max_roles: int = 2,
                  max_individuals: int = 2, max_n: int = 12):
    """Two random instances over one shared signature."""
    sig = make_signature(rng.randint(0, max_concepts),
                         rng.randint(0, max_roles),
                         rng.randint(0, max_individuals))
    out = []
    for _ in range(2):
        n = rng.randint(1, max_n)
        out.append(random_interpretation(rng, sig, n,
                                         edge_density=rng.uniform(0.05, 0.4),
                                         concept_density=rng.uniform(0.2, 0.8)))
    return out[0], out[1]


def assert_clean(report) -> None:
    assert report.ok, "\n".join(report.to_lines())


# ---------------------------------------------------------------------------
# concept enumeration by syntax-tree size


@lru_cache(maxsize=None)
def enumerate_concepts(phi: FeatureSet, sig: Signature, max_size: int = 5,
                       max_bound: int = 2) -> tuple:
    """Every concept of ast_size <= max_size admitted by phi over sig.

    Number restriction bounds are capped at max_bound; names and bounds
    are free, so without a cap the set is infinite.  Returned concepts
    share subterm objects: evaluating the whole batch through a single
    Evaluator costs one set operation per distinct node.
    """
    cs: dict[int, list] = {k: [] for k in range(1, max_size + 1)}
    rs: dict[int, list] = {k: [] for k in range(1, max_size + 1)}

    cs[1] = [sx.Top(), sx.Bottom()] + [sx.ConceptName(a) for a in sig.concept_names]
    if phi.nominals:
        cs[1] += [sx.Nominal(a) for a in sig.individual_names]
    if phi.local_refl:
        cs[1] += [sx.HasSelf(r) for r in sig.role_names]
    rs[1] = [sx.RoleName(r) for r in sig.role_names] + [sx.Epsilon()]
    if phi.universal:
        rs[1].append(sx.UniversalRole())
    basic = [sx.RoleName(r) for r in sig.role_names]
    if phi.inverse:
        basic += [sx.Inverse(sx.RoleName(r)) for r in sig.role_names]

    for size in range(2, max_size + 1):
        rout: list = []
        cout: list = []
        if phi.inverse:
            rout += [sx.Inverse(r) for r in rs[size - 1]]
        rout += [sx.Star(r) for r in rs[size - 1]]
        rout += [sx.Test(c) for c in cs[size - 1]]
        cout += [sx.Not(c) for c in cs[size - 1]]
        for i in range(1, size - 1):
            j = size - 1 - i
            rout += [sx.Compose(a, b) for a in rs[i] for b in rs[j]]
            rout += [sx.RoleUnion(a, b) for a in rs[i] for b in rs[j]]
            cout += [sx.And(a, b) for a in cs[i] for b in cs[j]]
            cout += [sx.Or(a, b) for a in cs[i] for b in cs[j]]
            cout += [sx.Some(r, c) for r in rs[i] for c in cs[j]]
            cout += [sx.All(r, c) for r in rs[i] for c in cs[j]]
        if phi.counting:
            for r in basic:
                room = size - 1 - sx.ast_size(r)
                if room >= 1:
                    for c in cs[room]:
                        for b in range(0, max_bound + 1):
                            cout.append(sx.AtLeast(b, r, c))
                            cout.append(sx.AtMost(b, r, c))
        rs[size] = rout
        cs[size] = cout

    return tuple(c for k in range(1, max_size + 1) for c in cs[k])


# ---------------------------------------------------------------------------
# independent matrix-based model checker


def _role_matrix(interp: Interpretation, r) -> np.ndarray:
    n = interp.n
    if isinstance(r, sx.RoleName):
        m = np.zeros((n, n), dtype=bool)
        for x, y in interp.role_ext[r.name]:
            m[x, y] = True
        return m
    if isinstance(r, sx.Inverse):
        return _role_matrix(interp, r.role).T
    if isinstance(r, sx.Compose):
        a = _role_matrix(interp, r.left).astype(np.int64)
        b = _role_matrix(interp, r.right).astype(np.int64)
        return (a @ b) > 0
    if isinstance(r, sx.RoleUnion):
        return _role_matrix(interp, r.left) | _role_matrix(interp, r.right)
    if isinstance(r, sx.Star):
        m = _role_matrix(interp, r.role) | np.eye(n, dtype=bool)
        while True:
            nxt = m | ((m.astype(np.int64) @ m.astype(np.int64)) > 0)
            if (nxt == m).all():
                return m
            m = nxt
    if isinstance(r, sx.Test):
        return np.diag(_concept_vector(interp, r.concept))
    if isinstance(r, sx.Epsilon):
        return np.eye(n, dtype=bool)
    if isinstance(r, sx.UniversalRole):
        return np.ones((n, n), dtype=bool)
    raise TypeError(r)


def _concept_vector(interp: Interpretation, c) -> np.ndarray:
    n = interp.n
    if isinstance(c, sx.Top):
        return np.ones(n, dtype=bool)
    if isinstance(c, sx.Bottom):
        return np.zeros(n, dtype=bool)
    if isinstance(c, sx.ConceptName):
        v = np.zeros(n, dtype=bool)
        v[sorted(interp.concept_ext[c.name])] = True
        return v
    if isinstance(c, sx.Nominal):
        v = np.zeros(n, dtype=bool)
        v[interp.individual_map[c.name]] = True
        return v
    if isinstance(c, sx.Not):
        return ~_concept_vector(interp, c.concept)
    if isinstance(c, sx.And):
        return _concept_vector(interp, c.left) & _concept_vector(interp, c.right)
    if isinstance(c, sx.Or):
        return _concept_vector(interp, c.left) | _concept_vector(interp, c.right)
    if isinstance(c, sx.Some):
        m = _role_matrix(interp, c.role)
        return (m & _concept_vector(interp, c.concept)[None, :]).any(axis=1)
    if isinstance(c, sx.All):
        m = _role_matrix(interp, c.role)
        return ~((m & ~_concept_vector(interp, c.concept)[None, :]).any(axis=1))
    if isinstance(c, sx.AtLeast):
        m = _role_matrix(interp, c.role)
        deg = (m & _concept_vector(interp, c.concept)[None, :]).sum(axis=1)
        return deg >= c.bound
    if isinstance(c, sx.AtMost):
        m = _role_matrix(interp, c.role)
        deg = (m & _concept_vector(interp, c.concept)[None, :]).sum(axis=1)
        return deg <= c.bound
    if isinstance(c, sx.HasSelf):
        m = _role_matrix(interp, sx.RoleName(c.role))
        return np.diag(m).copy()
    raise TypeError(c)


def matrix_eval_concept(interp: Interpretation, concept) -> frozenset[int]:
    """Concept extension computed with boolean matrices, no shared code."""
    return frozenset(int(x) for x in np.flatnonzero(_concept_vector(interp, concept)))


def matrix_eval_role(interp: Interpretation, role) -> frozenset[tuple[int, int]]:
    m = _role_matrix(interp, role)
    return frozenset((int(x), int(y)) for x, y in zip(*np.nonzero(m)))


# ---------------------------------------------------------------------------
# brute-force role closure


def _basic_parts(part) -> tuple[str, bool]:
    if isinstance(part, sx.RoleName):
        return part.name, False
    if isinstance(part, sx.Inverse) and isinstance(part.role, sx.RoleName):
        return part.role.name, True
    raise TypeError(part)


def closure_oracle(interp: Interpretation, axioms) -> dict[str, frozenset]:
    """Least extension of the role extensions satisfying the axioms,
    computed by naive iteration to a fixpoint."""
    rel = {r: set(pairs) for r, pairs in interp.role_ext.items()}
    ident = {(x, x) for x in interp.domain}
    changed = True
    while changed:
        changed = False
        for ax in axioms:
            if isinstance(ax, sx.EpsilonSub):
                add = ident - rel[ax.role]
            else:
                pairs = set(ident)
                for part in ax.chain:
                    name, inverted = _basic_parts(part)
                    step = rel[name]
                    if inverted:
                        step = {(y, x) for x, y in step}
                    by_src: dict[int, list[int]] = {}
                    for x, y in step:
                        by_src.setdefault(x, []).append(y)
                    pairs = {(x, z) for x, y in pairs for z in by_src.get(y, ())}
                add = pairs - rel[ax.role]
            if add:
                rel[ax.role] |= add
                changed = True
    return {r: frozenset(v) for r, v in rel.items()}


# ---------------------------------------------------------------------------
# trace replay


def replay_trace(trace: RefinementTrace) -> np.ndarray:
    """Recompute every recorded split from the graph and assert that the
    events reproduce the final partition, block id for block id.

    Events sharing a time stamp come from one extraction; both the
    splitter zone and each parent zone are read from the snapshot taken
    when that extraction began.
    """
    graph = trace.graph
    n = graph.n
    n_r = graph.n_roles
    zones: dict[int, set[int]] = {}
    for x in range(n):
        zones.setdefault(int(trace.init_block_of[x]), set()).add(x)

    events = trace.events
    i = 0
    while i < len(events):
        j = i
        while j < len(events) and events[j].time == events[i].time:
            j += 1
        group = events[i:j]
        snapshot = {b: frozenset(m) for b, m in zones.items()}
        target = snapshot[group[0].splitter]
        for ev in group:
            assert ev.splitter == group[0].splitter and ev.role == group[0].role
            members = snapshot[ev.parent]
            counts = {}
            for x in members:
                if ev.role < n_r:
                    reach = graph.successors(ev.role, x)
                else:
                    reach = graph.predecessors(ev.role - n_r, x)
                c = sum(1 for y in reach if int(y) in target)
                if not trace.use_counts:
                    c = 1 if c else 0
                counts[x] = c
            observed = sorted(set(counts.values()))
            recorded = [c for _, c in ev.subs]
            assert recorded == observed, (ev, recorded, observed)
            assert len({b for b, _ in ev.subs}) == len(ev.subs)
            del zones[ev.parent]
            for b, c in ev.subs:
                zones[b] = {x for x in members if counts[x] == c}
                assert zones[b], ev
        i = j

    out = np.zeros(n, dtype=np.int64)
    for b, members in zones.items():
        for x in members:
            out[x] = b
    assert (out == trace.final_block_of).all()
    return out


# ---------------------------------------------------------------------------
# duplication with edge thinning


def duplicated_thinned(rng: random.Random, interp: Interpretation):
    """A variant with every unnamed element doubled and, per original
    edge, a random choice of copy-to-copy edges that still covers every
    source copy and every target copy.  The canonical relation (element,
    any of its copies) is a bisimulation whenever counting is off."""
    named = set(interp.individual_map.values())
    copies: dict[int, list[int]] = {}
    k = 0
    for x in interp.domain:
        reps = 1 if x in named else 2
        copies[x] = list(range(k, k + reps))
        k += reps

    concept_ext = {a: {c for x in ext for c in copies[x]}
                   for a, ext in interp.concept_ext.items()}
    role_ext: dict[str, set] = {}
    for r, pairs in interp.role_ext.items():
        out = set()
        for x, y in pairs:
            if x == y:
                # copies must keep their own loops, or self tests diverge
                chosen = {(s, s) for s in copies[x]}
            else:
                chosen = {(s, rng.choice(copies[y])) for s in copies[x]}
                for t in copies[y]:
                    if all(st != t for _, st in chosen):
                        chosen.add((rng.choice(copies[x]), t))
            for s in copies[x]:
                for t in copies[y]:
                    if (s, t) not in chosen and rng.random() < 0.3:
                        chosen.add((s, t))
            out |= chosen
        role_ext[r] = out
    individual_map = {a: copies[x][0] for a, x in interp.individual_map.items()}
    dup = build_interpretation(interp.signature, k, concept_ext, role_ext, individual_map)
    zpairs = frozenset((x, c) for x in interp.domain for c in copies[x])
    return dup, BisimRelation(interp.n, k, zpairs)

"""Quotient interpretations and concepts separating split elements.

`quotient_interpretation` collapses a partition's blocks into single
elements.  `qs_quotient` additionally remembers, per basic role and
block pair, the largest number of parallel edges any member of the
source block had into the target block, plus which blocks contained a
self loop; counting and self-loop concepts evaluated over that summary
see the structure the plain quotient forgets.

`separating_concept` turns a refinement trace into a certificate: given
two elements that ended in different blocks, it replays the recorded
splits to assemble a concept satisfied by one element and not the
other.  Certificates are exact but deliberately verbose; nothing here
tries to minimize them.  Every certificate is re-evaluated before being
returned, so a returned witness is always valid.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .core import (
    Interpretation,
    QSInterpretation,
    build_interpretation,
    build_qs_interpretation,
)
from .errors import BisimError, ElementOutOfRangeError, NotSeparatedError
from .refine import Partition, RefinementTrace, check_partition
from .semantics import eval_concept
from .syntax import (
    And,
    AtLeast,
    AtMost,
    Concept,
    ConceptName,
    HasSelf,
    Inverse,
    Nominal,
    Not,
    RoleName,
    Some,
    Top,
)


def quotient_interpretation(interp: Interpretation, partition: Partition) -> Interpretation:
    """Collapse blocks to elements; block ids follow smallest members."""
    check_partition(partition, interp.n)
    sig = interp.signature
    cls = partition.canonical_of
    concept_ext = {a: {int(cls[x]) for x in interp.concept_ext[a]} for a in sig.concept_names}
    role_ext = {r: {(int(cls[x]), int(cls[y])) for x, y in interp.role_ext[r]}
                for r in sig.role_names}
    individual_map = {a: int(cls[x]) for a, x in interp.individual_map.items()}
    return build_interpretation(sig, partition.n_blocks, concept_ext, role_ext, individual_map)


def qs_quotient(interp: Interpretation, partition: Partition) -> QSInterpretation:
    """Quotient that keeps maximal edge multiplicities and self loops."""
    base = quotient_interpretation(interp, partition)
    sig = interp.signature
    cls = partition.canonical_of
    qu: dict[tuple[str, bool], dict[tuple[int, int], int]] = {}
    for r in sig.role_names:
        fwd: dict[tuple[int, int], int] = {}
        bwd: dict[tuple[int, int], int] = {}
        for x in range(interp.n):
            for by, k in Counter(int(cls[y]) for y in interp.successors(r, x)).items():
                key = (int(cls[x]), by)
                fwd[key] = max(fwd.get(key, 0), k)
            for by, k in Counter(int(cls[y]) for y in interp.predecessors(r, x)).items():
                key = (int(cls[x]), by)
                bwd[key] = max(bwd.get(key, 0), k)
        qu[(r, False)] = fwd
        qu[(r, True)] = bwd
    se = {r: {int(cls[x]) for x in range(interp.n) if (x, x) in interp.role_ext[r]}
          for r in sig.role_names}
    return build_qs_interpretation(base, qu, se)


def _conjoin(parts: list[Concept]) -> Concept:
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def _role_node(trace: RefinementTrace, role_idx: int):
    name, inverted = trace.splitter_role(role_idx)
    node = RoleName(name)
    return Inverse(node) if inverted else node


def _splitter_degree(trace: RefinementTrace, role_idx: int, x: int) -> int:
    g = trace.graph
    if role_idx < g.n_roles:
        ptr = g.fwd_indptr[role_idx]
    else:
        ptr = g.rev_indptr[role_idx - g.n_roles]
    return int(ptr[x + 1] - ptr[x])


class _WitnessBuilder:
    """Replays a trace; builds characteristic and separating concepts."""

    def __init__(self, trace: RefinementTrace):
        self.trace = trace
        g = trace.graph
        sig = g.signature
        self.sig = sig
        # Facts per block id: (event index, count class), accumulated top
        # down so a child starts from a snapshot of its parent's list.
        facts: dict[int, list[tuple[int, int]]] = {}
        init_anc: dict[int, int] = {}
        n_init = int(trace.init_block_of.max()) + 1 if len(trace.init_block_of) else 0
        for b in range(n_init):
            facts[b] = []
            init_anc[b] = b
        for ei, ev in enumerate(trace.events):
            snapshot = list(facts[ev.parent])
            anc = init_anc[ev.parent]
            for b, c in ev.subs:
                facts[b] = snapshot + [(ei, c)]
                init_anc[b] = anc
        self.facts = facts
        self.init_anc = init_anc
        self.init_rep: dict[int, int] = {}
        for x in range(g.n):
            self.init_rep.setdefault(int(trace.init_block_of[x]), x)
        self._char_memo: dict[tuple[int, int], Concept] = {}

    def _init_probes(self):
        g = self.trace.graph
        phi = self.trace.phi
        for a_idx, a in enumerate(self.sig.concept_names):
            yield ("atom", a_idx, a)
        if phi.nominals:
            for a in self.sig.individual_names:
                yield ("nominal", a, a)
        if phi.local_refl:
            for r_idx, r in enumerate(self.sig.role_names):
                yield ("self", r_idx, r)
        if phi.counting:
            for s in range(self.trace.n_split_roles):
                yield ("degree", s, None)

    def _probe_value(self, probe, x: int):
        g = self.trace.graph
        kind, key, name = probe
        if kind == "atom":
            return bool(g.atom_bits[x, key])
        if kind == "nominal":
            return x in g.individual_nodes.get(key, ())
        if kind == "self":
            return bool(g.self_bits[x, key])
        return _splitter_degree(self.trace, key, x)

    def _probe_literal(self, probe, vx, vy) -> Concept:
        kind, key, name = probe
        if kind == "atom":
            return ConceptName(name) if vx else Not(ConceptName(name))
        if kind == "nominal":
            return Nominal(name) if vx else Not(Nominal(name))
        if kind == "self":
            return HasSelf(name) if vx else Not(HasSelf(name))
        role = _role_node(self.trace, key)
        return AtLeast(vx, role, Top()) if vx > vy else AtMost(vx, role, Top())

    def init_literals(self, rep: int) -> list[Concept]:
        out: list[Concept] = []
        for probe in self._init_probes():
            v = self._probe_value(probe, rep)
            if probe[0] == "degree":
                role = _role_node(self.trace, probe[1])
                if v:
                    out.append(AtLeast(v, role, Top()))
                out.append(AtMost(v, role, Top()))
            else:
                out.append(self._probe_literal(probe, v, not v))
        return out

    def _fact_literal(self, ei: int, c: int) -> Concept:
        ev = self.trace.events[ei]
        role = _role_node(self.trace, ev.role)
        target = self.char(ev.splitter, ev.time)
        if self.trace.use_counts:
            if c == 0:
                return AtMost(0, role, target)
            return And(AtLeast(c, role, target), AtMost(c, role, target))
        return Some(role, target) if c else Not(Some(role, target))

    def char(self, block: int, time: int) -> Concept:
        """Concept whose extension is the given block's zone as of `time`."""
        key = (block, time)
        if key not in self._char_memo:
            parts = self.init_literals(self.init_rep[self.init_anc[block]])
            for ei, c in self.facts[block]:
                if self.trace.events[ei].time < time:
                    parts.append(self._fact_literal(ei, c))
            self._char_memo[key] = _conjoin(parts)
        return self._char_memo[key]

    def separate(self, x: int, y: int) -> Concept:
        trace = self.trace
        bx, by = int(trace.final_block_of[x]), int(trace.final_block_of[y])
        if bx == by:
            raise NotSeparatedError("elements %d and %d share a block" % (x, y))
        ix, iy = int(trace.init_block_of[x]), int(trace.init_block_of[y])
        if ix != iy:
            for probe in self._init_probes():
                vx, vy = self._probe_value(probe, x), self._probe_value(probe, y)
                if vx != vy:
                    return self._probe_literal(probe, vx, vy)
            raise BisimError("internal: initial blocks differ but labels agree")
        hx, hy = self.facts[bx], self.facts[by]
        for (ex, cx), (ey, cy) in zip(hx, hy):
            if ex == ey and cx == cy:
                continue
            if ex != ey:
                raise BisimError("internal: histories diverge on different events")
            ev = trace.events[ex]
            role = _role_node(trace, ev.role)
            target = self.char(ev.splitter, ev.time)
            if trace.use_counts:
                return AtLeast(cx, role, target) if cx > cy else AtMost(cx, role, target)
            return Some(role, target) if cx else Not(Some(role, target))
        raise BisimError("internal: separated elements have matching histories")


@dataclass(frozen=True)
class WitnessConcept:
    concept: Concept
    left: int
    right: int


def separating_concept(interp: Interpretation, trace: RefinementTrace,
                       x: int, y: int) -> WitnessConcept:
    """A concept satisfied by x but not by y, read off the trace.

    Raises NotSeparatedError when the two elements share a final block
    (then no concept of the traced language family separates them).
    The result is checked by evaluation before being returned.
    """
    n = trace.graph.n
    if not (0 <= x < n and 0 <= y < n):
        raise ElementOutOfRangeError("element out of range for the traced graph")
    if x == y:
        raise NotSeparatedError("an element cannot be separated from itself")
    concept = _WitnessBuilder(trace).separate(x, y)
    ext = eval_concept(interp, concept, trace.phi)
    if x not in ext or y in ext:
        raise BisimError("internal: separating concept failed validation")
    return WitnessConcept(concept, x, y)

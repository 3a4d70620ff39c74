"""Model checking: concept and role evaluation, axiom and KB verdicts.

Role constructors get their usual relational reading: composition is a
join, union a set union, star the reflexive transitive closure, a test
C? the diagonal restricted to C, eps the diagonal, U the full square.
Number restrictions count distinct successors along a basic role.

QS-interpretations reinterpret exactly two constructor families: number
restrictions sum the stored edge multiplicities instead of counting
edges, and self tests read the stored se sets instead of the diagonal.
Everything else is inherited from the underlying interpretation.

Evaluation memoises per call on subterm object identity, so shared
subtrees (the witness builder produces heavily shared DAGs) are
evaluated once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import syntax as sx
from .core import Interpretation, QSInterpretation
from .errors import FeatureViolationError, UnknownNameError


def _require(phi, expr):
    check = sx.validate_in_language(phi, expr)
    if not check.ok:
        node, need = check.violations[0]
        raise FeatureViolationError(
            "%s is not in the active language (needs %s)" % (sx.to_text(node), need),
            check.violations,
        )


class Evaluator:
    """Evaluates concepts and roles against one interpretation.

    Reusable across many terms; memo tables are keyed by subterm object
    identity and live as long as the evaluator.
    """

    def __init__(self, interp: Interpretation, phi, qs: QSInterpretation | None = None):
        self.interp = interp
        self.phi = phi
        self.qs = qs
        self._cmemo: dict[int, frozenset] = {}
        self._rmemo: dict[int, frozenset] = {}
        self._keepalive: list = []

    def concept(self, c) -> frozenset[int]:
        _require(self.phi, c)
        sx.check_names(self.interp.signature, c)
        return self._concept(c)

    def role(self, r) -> frozenset[tuple[int, int]]:
        _require(self.phi, r)
        sx.check_names(self.interp.signature, r)
        return self._role(r)

    def _concept(self, c) -> frozenset[int]:
        got = self._cmemo.get(id(c))
        if got is not None:
            return got
        out = self._concept_raw(c)
        self._cmemo[id(c)] = out
        self._keepalive.append(c)
        return out

    def _concept_raw(self, c) -> frozenset[int]:
        interp = self.interp
        if isinstance(c, sx.Top):
            return frozenset(interp.domain)
        if isinstance(c, sx.Bottom):
            return frozenset()
        if isinstance(c, sx.ConceptName):
            return interp.concept_ext[c.name]
        if isinstance(c, sx.Nominal):
            return frozenset((interp.individual_map[c.name],))
        if isinstance(c, sx.Not):
            return frozenset(interp.domain) - self._concept(c.concept)
        if isinstance(c, sx.And):
            return self._concept(c.left) & self._concept(c.right)
        if isinstance(c, sx.Or):
            return self._concept(c.left) | self._concept(c.right)
        if isinstance(c, sx.Some):
            targets = self._concept(c.concept)
            return frozenset(x for x, y in self._role(c.role) if y in targets)
        if isinstance(c, sx.All):
            targets = self._concept(c.concept)
            bad = frozenset(x for x, y in self._role(c.role) if y not in targets)
            return frozenset(interp.domain) - bad
        if isinstance(c, sx.AtLeast):
            return self._count(c.role, self._concept(c.concept), c.bound, True)
        if isinstance(c, sx.AtMost):
            return self._count(c.role, self._concept(c.concept), c.bound, False)
        if isinstance(c, sx.HasSelf):
            if self.qs is not None:
                return self.qs.se[c.role]
            return frozenset(x for x, y in interp.role_ext[c.role] if x == y)
        raise TypeError("not a concept node: %r" % (c,))

    def _basic_neighbours(self, role, x):
        if isinstance(role, sx.RoleName):
            return self.interp.successors(role.name, x)
        return self.interp.predecessors(role.role.name, x)

    def _count(self, role, targets, bound, at_least) -> frozenset[int]:
        out = []
        if self.qs is not None:
            key = (role.name, False) if isinstance(role, sx.RoleName) else (role.role.name, True)
            counts = self.qs.qu[key]
            for x in self.interp.domain:
                total = 0
                for y in self._basic_neighbours(role, x):
                    if y in targets:
                        total += counts[(x, y)]
                if (total >= bound) if at_least else (total <= bound):
                    out.append(x)
        else:
            for x in self.interp.domain:
                total = sum(1 for y in self._basic_neighbours(role, x) if y in targets)
                if (total >= bound) if at_least else (total <= bound):
                    out.append(x)
        return frozenset(out)

    def _role(self, r) -> frozenset[tuple[int, int]]:
        got = self._rmemo.get(id(r))
        if got is not None:
            return got
        out = self._role_raw(r)
        self._rmemo[id(r)] = out
        self._keepalive.append(r)
        return out

    def _role_raw(self, r) -> frozenset[tuple[int, int]]:
        interp = self.interp
        if isinstance(r, sx.RoleName):
            return interp.role_ext[r.name]
        if isinstance(r, sx.Inverse):
            return frozenset((y, x) for x, y in self._role(r.role))
        if isinstance(r, sx.Compose):
            left = self._role(r.left)
            right_succ: dict[int, list[int]] = {}
            for y, z in self._role(r.right):
                right_succ.setdefault(y, []).append(z)
            return frozenset((x, z) for x, y in left for z in right_succ.get(y, ()))
        if isinstance(r, sx.RoleUnion):
            return self._role(r.left) | self._role(r.right)
        if isinstance(r, sx.Star):
            adj: dict[int, list[int]] = {}
            for x, y in self._role(r.role):
                adj.setdefault(x, []).append(y)
            pairs = set()
            for start in interp.domain:
                seen = {start}
                stack = [start]
                while stack:
                    x = stack.pop()
                    for y in adj.get(x, ()):
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
                pairs.update((start, y) for y in seen)
            return frozenset(pairs)
        if isinstance(r, sx.Test):
            return frozenset((x, x) for x in self._concept(r.concept))
        if isinstance(r, sx.Epsilon):
            return frozenset((x, x) for x in interp.domain)
        if isinstance(r, sx.UniversalRole):
            dom = interp.domain
            return frozenset((x, y) for x in dom for y in dom)
        raise TypeError("not a role node: %r" % (r,))


def eval_concept(interp: Interpretation, concept, phi) -> frozenset[int]:
    """Extension of the concept, validated against phi first."""
    return Evaluator(interp, phi).concept(concept)


def eval_role(interp: Interpretation, role, phi) -> frozenset[tuple[int, int]]:
    """Extension of the role, validated against phi first."""
    return Evaluator(interp, phi).role(role)


def eval_concept_qs(qsi: QSInterpretation, concept, phi) -> frozenset[int]:
    """Extension of the concept under the QS reading of counts and self."""
    return Evaluator(qsi.base, phi, qs=qsi).concept(concept)


def check_role_axiom(interp: Interpretation, axiom) -> bool:
    if isinstance(axiom, sx.EpsilonSub):
        target = interp.role_ext[axiom.role]
        return all((x, x) in target for x in interp.domain)
    if isinstance(axiom, sx.ChainSub):
        current = {(x, x) for x in interp.domain}
        for basic in axiom.chain:
            step = set()
            for x, y in current:
                if isinstance(basic, sx.RoleName):
                    step.update((x, z) for z in interp.successors(basic.name, y))
                else:
                    step.update((x, z) for z in interp.predecessors(basic.role.name, y))
            current = step
        return current <= set(interp.role_ext[axiom.role])
    raise TypeError("not a role axiom: %r" % (axiom,))


def check_gci(interp: Interpretation, gci: sx.GCI, phi) -> bool:
    ev = Evaluator(interp, phi)
    return ev.concept(gci.lhs) <= ev.concept(gci.rhs)


def check_assertion(interp: Interpretation, assertion, phi) -> bool:
    if isinstance(assertion, sx.ConceptAssertion):
        return interp.individual_map[assertion.individual] in eval_concept(interp, assertion.concept, phi)
    if isinstance(assertion, sx.RoleAssertion):
        pair = (interp.individual_map[assertion.a], interp.individual_map[assertion.b])
        return pair in eval_role(interp, assertion.role, phi)
    if isinstance(assertion, sx.NegatedRoleAssertion):
        pair = (interp.individual_map[assertion.a], interp.individual_map[assertion.b])
        return pair not in eval_role(interp, assertion.role, phi)
    if isinstance(assertion, sx.SameAs):
        return interp.individual_map[assertion.a] == interp.individual_map[assertion.b]
    if isinstance(assertion, sx.DifferentFrom):
        return interp.individual_map[assertion.a] != interp.individual_map[assertion.b]
    raise TypeError("not an assertion: %r" % (assertion,))


@dataclass
class KBReport:
    """Per-axiom verdicts for one interpretation against one KB."""

    entries: list  # (section, index, axiom, holds)

    @property
    def ok(self) -> bool:
        return all(holds for _, _, _, holds in self.entries)

    def to_lines(self) -> list[str]:
        out = []
        for section, i, axiom, holds in self.entries:
            verdict = "holds" if holds else "FAILS"
            out.append("%s[%d] %s: %s" % (section, i, verdict, sx.to_text(axiom)))
        return out


def check_kb(interp: Interpretation, kb: sx.KnowledgeBase, phi) -> KBReport:
    """Verdict per axiom; rejects the KB if it leaves the active language."""
    _require(phi, kb)
    sx.check_names(interp.signature, kb)
    entries = []
    for i, axiom in enumerate(kb.rbox):
        entries.append(("rbox", i, axiom, check_role_axiom(interp, axiom)))
    for i, axiom in enumerate(kb.tbox):
        entries.append(("tbox", i, axiom, check_gci(interp, axiom, phi)))
    for i, axiom in enumerate(kb.abox):
        entries.append(("abox", i, axiom, check_assertion(interp, axiom, phi)))
    return KBReport(entries)


def _basic_parts(basic) -> tuple[str, bool]:
    if isinstance(basic, sx.RoleName):
        return basic.name, False
    if isinstance(basic, sx.Inverse) and isinstance(basic.role, sx.RoleName):
        return basic.role.name, True
    raise TypeError("chain axioms take basic roles, got %r" % (basic,))


def least_r_extension(interp: Interpretation, axioms) -> Interpretation:
    """Smallest superset of the role extensions satisfying every axiom.

    Worklist closure: each newly derived edge is matched against every
    chain position it can instantiate, prefix and suffix sets are walked
    through the current relations, and the resulting pairs land in the
    target role.  Concept extensions and individuals are untouched.
    """
    for ax in axioms:
        if not isinstance(ax, (sx.EpsilonSub, sx.ChainSub)):
            raise TypeError("not a role axiom: %r" % (ax,))
        if isinstance(ax, sx.ChainSub):
            for b in ax.chain:
                _basic_parts(b)
        if ax.role not in interp.signature.role_index:
            raise UnknownNameError("unknown role name %r in role axiom" % ax.role)

    rels: dict[str, set] = {r: set(pairs) for r, pairs in interp.role_ext.items()}
    succ: dict[str, dict[int, set]] = {r: {} for r in rels}
    pred: dict[str, dict[int, set]] = {r: {} for r in rels}

    queue: deque = deque()

    def add(role: str, x: int, y: int):
        if (x, y) in rels[role]:
            return
        rels[role].add((x, y))
        succ[role].setdefault(x, set()).add(y)
        pred[role].setdefault(y, set()).add(x)
        queue.append((role, x, y))

    for role, pairs in interp.role_ext.items():
        for x, y in pairs:
            succ[role].setdefault(x, set()).add(y)
            pred[role].setdefault(y, set()).add(x)
            queue.append((role, x, y))
    for ax in axioms:
        if isinstance(ax, sx.EpsilonSub):
            for x in interp.domain:
                add(ax.role, x, x)

    chains = [(tuple(_basic_parts(b) for b in ax.chain), ax.role)
              for ax in axioms if isinstance(ax, sx.ChainSub)]

    def step_back(basic, frontier):
        name, inverted = basic
        out = set()
        for z in frontier:
            out |= (pred[name].get(z, set()) if not inverted else succ[name].get(z, set()))
        return out

    def step_fwd(basic, frontier):
        name, inverted = basic
        out = set()
        for z in frontier:
            out |= (succ[name].get(z, set()) if not inverted else pred[name].get(z, set()))
        return out

    while queue:
        role, x, y = queue.popleft()
        for chain, target in chains:
            for i, (name, inverted) in enumerate(chain):
                if name != role:
                    continue
                px, py = ((x, y) if not inverted else (y, x))
                left = {px}
                for j in range(i - 1, -1, -1):
                    left = step_back(chain[j], left)
                    if not left:
                        break
                if not left:
                    continue
                right = {py}
                for j in range(i + 1, len(chain)):
                    right = step_fwd(chain[j], right)
                    if not right:
                        break
                for u in left:
                    for v in right:
                        add(target, u, v)

    return Interpretation(
        interp.signature, interp.n, interp.concept_ext,
        {r: frozenset(pairs) for r, pairs in rels.items()}, interp.individual_map,
    )

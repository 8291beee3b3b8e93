"""Cutting-plane constraints for in-out gadgets inside a composed instance.

For every gadget the five families say: exactly one incoming host arc is
used (in), exactly one outgoing host arc (out), entries and exits pair up
per position (pair), an entry at i_j forces the whole unique path P_j
(path-force), and an internal arc may be used only when a path through it
was entered (path-gate).  Sums range only over arcs present in the sparse
instance.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .construct import build_inout, canonical_path
from .core import GraphError
from .gtsp import AtspInstance, ConversionMap

FAMILIES = ("in", "out", "pair", "path-force", "path-gate")


@dataclass(frozen=True)
class LinearConstraint:
    """Sum of coefficient * x_arc, compared with an integer right side."""

    label: str
    family: str
    subgraph: int
    terms: tuple[tuple[int, tuple[int, int]], ...]
    relation: str  # one of <=, =, >=
    rhs: int

    def evaluate(self, incidence: Mapping[tuple[int, int], int]) -> int:
        total = 0
        for coef, arc in self.terms:
            total += coef * incidence[arc]
        return total

    def satisfied(self, incidence: Mapping[tuple[int, int], int]) -> bool:
        lhs = self.evaluate(incidence)
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LpConstraintSet:
    constraints: tuple[LinearConstraint, ...]
    variables: tuple[tuple[int, int], ...]
    warnings: tuple[str, ...] = ()

    def by_family(self, family: str) -> list[LinearConstraint]:
        return [c for c in self.constraints if c.family == family]


def _combine(terms: list[tuple[int, tuple[int, int]]]
             ) -> tuple[tuple[int, tuple[int, int]], ...]:
    acc: dict[tuple[int, int], int] = {}
    for coef, arc in terms:
        acc[arc] = acc.get(arc, 0) + coef
    return tuple((coef, arc) for arc, coef in sorted(acc.items(), key=lambda t: t[0])
                 if coef != 0)


def emit_constraints(host: AtspInstance, cmap: ConversionMap) -> LpConstraintSet:
    """Emit the five constraint families for every gadget in the map.

    Refuses gadgets whose internal arcs differ from the canonical
    construction, since the path-force family relies on each entry-exit
    pair having a unique Hamiltonian path.
    """
    host_arcs = {(u, w) for u, w, _ in host.arcs}
    constraints: list[LinearConstraint] = []
    warnings: list[str] = []
    for gi in range(cmap.g):
        k = cmap.ks[gi]
        off = cmap.offsets[gi]
        gadget = build_inout(k)
        members = set(cmap.gadget_vertices(gi))
        expected = {(u + off, w + off) for u, w in gadget.graph.arcs}
        actual = {(u, w) for (u, w) in host_arcs
                  if u in members and w in members}
        if actual != expected:
            raise GraphError(
                f"subgraph {gi} does not match the canonical construction: "
                f"P_j uniqueness not guaranteed")
        entries = [cmap.entry_exit[(gi, s)][0] for s in range(1, k + 1)]
        exits = [cmap.entry_exit[(gi, s)][1] for s in range(1, k + 1)]
        in_arcs = {j: sorted((u, w) for (u, w) in host_arcs
                             if w == entries[j] and u not in members)
                   for j in range(k)}
        out_arcs = {j: sorted((u, w) for (u, w) in host_arcs
                              if u == exits[j] and w not in members)
                    for j in range(k)}
        if not any(in_arcs.values()):
            warnings.append(
                f"subgraph {gi} has no incoming host arcs: its 'in' "
                f"constraint is infeasible")
        constraints.append(LinearConstraint(
            label=f"c_s{gi + 1}_in", family="in", subgraph=gi,
            terms=_combine([(1, a) for arcs in in_arcs.values() for a in arcs]),
            relation="=", rhs=1))
        constraints.append(LinearConstraint(
            label=f"c_s{gi + 1}_out", family="out", subgraph=gi,
            terms=_combine([(1, a) for arcs in out_arcs.values() for a in arcs]),
            relation="=", rhs=1))
        for j in range(k):
            constraints.append(LinearConstraint(
                label=f"c_s{gi + 1}_pair_{j + 1}", family="pair", subgraph=gi,
                terms=_combine([(1, a) for a in in_arcs[j]]
                               + [(-1, a) for a in out_arcs[j]]),
                relation="=", rhs=0))
        paths = {j: tuple(((u + off), (w + off))
                          for u, w in canonical_path(k, j + 1).arcs)
                 for j in range(k)}
        for j in range(k):
            # Coefficient = |P_j|: the 2k-2 of the generic case plus the
            # k=3 correction, expressed uniformly as the path length.
            coef = len(paths[j])
            constraints.append(LinearConstraint(
                label=f"c_s{gi + 1}_path_{j + 1}", family="path-force",
                subgraph=gi,
                terms=_combine([(coef, a) for a in in_arcs[j]]
                               + [(-1, a) for a in paths[j]]),
                relation="<=", rhs=0))
        for u, w in sorted(expected):
            gating = [(1, (u, w))]
            for j in range(k):
                if (u, w) in paths[j]:
                    gating.extend((-1, a) for a in in_arcs[j])
            constraints.append(LinearConstraint(
                label=f"c_s{gi + 1}_use_{u}_{w}", family="path-gate",
                subgraph=gi, terms=_combine(gating), relation="=", rhs=0))

    variables = tuple(sorted({arc for c in constraints for _, arc in c.terms}))
    return LpConstraintSet(constraints=tuple(constraints), variables=variables,
                           warnings=tuple(warnings))


def check_constraints(
    cset: LpConstraintSet,
    incidence: Mapping[tuple[int, int], int],
) -> tuple[bool, LinearConstraint | None]:
    """Evaluate every constraint; return the first violated one, if any."""
    for c in cset.constraints:
        try:
            if not c.satisfied(incidence):
                return False, c
        except KeyError as exc:
            raise GraphError(f"incidence missing variable for arc {exc}") from None
    return True, None


def incidence_of_cycle(cycle, host: AtspInstance) -> dict[tuple[int, int], int]:
    """0/1 arc incidence of a Hamiltonian cycle over all host arcs."""
    used = set(zip(cycle, tuple(cycle[1:]) + (cycle[0],)))
    return {(u, w): int((u, w) in used) for u, w, _ in host.arcs}


def _fmt_terms(terms) -> str:
    parts = []
    for i, (coef, (u, w)) in enumerate(terms):
        var = f"x_{u}_{w}"
        mag = "" if abs(coef) == 1 else f"{abs(coef)} "
        if i == 0:
            parts.append(f"{'-' if coef < 0 else ''}{mag}{var}")
        else:
            parts.append(f"{'-' if coef < 0 else '+'} {mag}{var}")
    return " ".join(parts)


def write_lp(cset: LpConstraintSet,
             objective: Mapping[tuple[int, int], int] | None = None) -> str:
    """Render as an LP file: deterministic order, binary declarations.

    Constraints with no surviving terms are emitted as comments; LP syntax
    has no way to state an empty row.
    """
    lines = ["\\ in-out gadget constraints", "Minimize"]
    if objective:
        terms = _fmt_terms(tuple((coef, arc)
                                 for arc, coef in sorted(objective.items())
                                 if coef != 0))
        lines.append(f" obj: {terms}" if terms else " obj:")
    else:
        lines.append(" obj:")
    lines.append("Subject To")
    # emit_constraints already orders rows by subgraph, family, index, arc
    for c in cset.constraints:
        body = _fmt_terms(c.terms)
        if not body:
            lines.append(f"\\ {c.label}: 0 {c.relation} {c.rhs} "
                         f"(no terms; trivially satisfied)")
        else:
            lines.append(f" {c.label}: {body} {c.relation} {c.rhs}")
    lines.append("Binary")
    for u, w in cset.variables:
        lines.append(f" x_{u}_{w}")
    lines.append("End")
    return "\n".join(lines) + "\n"

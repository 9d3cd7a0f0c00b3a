"""Degeneracy orders for Hamiltonian digraphs without a two-block cycle.

The constructive dichotomy: a Hamiltonian digraph whose underlying graph has
minimum degree at least ``k + ell`` contains a ``c(k, ell)``, so a digraph
free of them always offers a vertex of degree at most ``k + ell - 1``.
Deleting that vertex and shortcutting the Hamiltonian cycle around it keeps
the digraph Hamiltonian and free, which peels off a ``(k + ell - 1)``-bounded
elimination order; greedy coloring along it then needs at most ``k + ell``
colors.

Any certificate discovered on a shortcut digraph is replayed back through the
added arcs (each replaced by the two-arc detour through its deleted vertex)
and re-verified level by level.
"""

from __future__ import annotations

from .coloring import Coloring, EliminationOrder, greedy_color_by_order, is_proper
from .detection import (
    AbsenceReport,
    TwoBlockCertificate,
    find_two_block_cycle,
    verify_certificate,
)
from .digraph import Digraph, DiCycle, DiPath, cycle_in, underlying_graph
from .errors import NotHamiltonian, PreconditionViolated, StructuralViolation


def _check_hamiltonian(d: Digraph, ham: DiCycle) -> None:
    if len(ham.vertices) != d.n or set(ham.vertices) != set(range(d.n)):
        raise NotHamiltonian("cycle does not span the vertex set")
    if not cycle_in(d, ham):
        raise NotHamiltonian("cycle uses an arc missing from the digraph")


def low_degree_or_certificate(
    d: Digraph,
    ham: DiCycle,
    k: int,
    ell: int,
    *,
    cap: int | None = None,
    strict: bool = True,
) -> int | TwoBlockCertificate:
    """A vertex of underlying degree <= k + ell - 1, else a verified certificate.

    When every degree is at least ``k + ell`` the certificate branch cannot
    fail: exhaustive detection reporting absence would contradict the
    minimum-degree dichotomy and raises :class:`StructuralViolation`.
    """
    if k < 1 or ell < 1 or k + ell < 3:
        raise PreconditionViolated("need k, ell >= 1 and k + ell >= 3")
    _check_hamiltonian(d, ham)
    for v in range(d.n):
        if d.underlying_degree(v) <= k + ell - 1:
            return v
    result = find_two_block_cycle(d, k, ell, cap=cap, strict=strict)
    if isinstance(result, AbsenceReport):
        raise StructuralViolation(
            "min degree >= k + ell yet exhaustive detection found no c(k, ell)"
        )
    return result


def ham_degeneracy_order(
    d: Digraph,
    ham: DiCycle,
    k: int,
    ell: int,
    *,
    cap: int | None = None,
    strict: bool = True,
) -> EliminationOrder | TwoBlockCertificate:
    """Peel a ``(k + ell - 1)``-bounded deletion order, or surface a certificate.

    The input promise (no ``c(k, ell)``) is checked first and a violation is
    returned as the certificate.  Each round then deletes the lowest-id vertex
    of underlying degree at most ``k + ell - 1`` and adds the shortcut arc
    between its cycle neighbors (set semantics: re-adding an existing arc
    changes nothing, and only genuinely new arcs participate in certificate
    replay).  Recursion stops once at most ``k + ell`` vertices remain; any
    order works there.  A round with no low-degree vertex can only happen
    after a capped (heuristic) negative; detection then runs on that level
    and the certificate is replayed back.
    """
    if k < 1 or ell < 1 or k + ell < 3:
        raise PreconditionViolated("need k, ell >= 1 and k + ell >= 3")
    _check_hamiltonian(d, ham)
    upfront = find_two_block_cycle(d, k, ell, cap=cap, strict=strict)
    if isinstance(upfront, TwoBlockCertificate):
        return upfront
    arcs = set(d.arcs)
    cycle = list(ham.vertices)
    order: list[int] = []
    # One entry per deletion round: (deleted vertex, shortcut arc, arc was new,
    # arc snapshot before the round).  Snapshots feed certificate replay.
    rounds: list[tuple[int, tuple[int, int], bool, frozenset[tuple[int, int]]]] = []

    while len(cycle) > k + ell:
        degrees = _underlying_degrees(arcs, cycle)
        candidates = [w for w in cycle if degrees[w] <= k + ell - 1]
        if not candidates:
            snapshot = frozenset(arcs)
            cert = _detect_on(sorted(cycle), snapshot, k, ell, cap, strict)
            if isinstance(cert, AbsenceReport):
                raise StructuralViolation(
                    "no low-degree vertex yet exhaustive detection found nothing"
                )
            return _replay_certificate(cert, rounds, d, k, ell)
        w = min(candidates)
        i = cycle.index(w)
        prev_v = cycle[i - 1]
        next_v = cycle[(i + 1) % len(cycle)]
        snapshot = frozenset(arcs)
        arcs = {a for a in arcs if w not in a}
        shortcut = (prev_v, next_v)
        was_new = shortcut not in arcs
        arcs.add(shortcut)
        rounds.append((w, shortcut, was_new, snapshot))
        order.append(w)
        cycle.pop(i)

    order.extend(sorted(cycle))
    return EliminationOrder(tuple(order), k + ell - 1)


def _underlying_degrees(
    arcs: set[tuple[int, int]], vertices: list[int]
) -> dict[int, int]:
    neighbors: dict[int, set[int]] = {v: set() for v in vertices}
    for t, h in arcs:
        neighbors[t].add(h)
        neighbors[h].add(t)
    return {v: len(ns) for v, ns in neighbors.items()}


def _detect_on(
    vertices: list[int],
    arcs: frozenset[tuple[int, int]],
    k: int,
    ell: int,
    cap: int | None,
    strict: bool,
) -> TwoBlockCertificate | AbsenceReport:
    # Run detection on a sub-universe digraph, mapping ids back afterwards.
    relabel = {v: i for i, v in enumerate(vertices)}
    dense = Digraph(
        len(vertices), frozenset((relabel[t], relabel[h]) for t, h in arcs)
    )
    result = find_two_block_cycle(dense, k, ell, cap=cap, strict=strict)
    if isinstance(result, AbsenceReport):
        return result
    back = dict(enumerate(vertices))
    return TwoBlockCertificate(
        back[result.u],
        back[result.v],
        DiPath(tuple(back[x] for x in result.path_a.vertices)),
        DiPath(tuple(back[x] for x in result.path_b.vertices)),
        k,
        ell,
    )


def _replay_certificate(
    cert: TwoBlockCertificate,
    rounds: list[tuple[int, tuple[int, int], bool, frozenset[tuple[int, int]]]],
    d: Digraph,
    k: int,
    ell: int,
) -> TwoBlockCertificate:
    """Lift a certificate through the shortcut rounds back into ``d``."""
    for deleted, shortcut, was_new, snapshot in reversed(rounds):
        if was_new:
            cert = TwoBlockCertificate(
                cert.u,
                cert.v,
                _expand_arc(cert.path_a, shortcut, deleted),
                _expand_arc(cert.path_b, shortcut, deleted),
                k,
                ell,
            )
        level = Digraph(d.n, snapshot)
        if not verify_certificate(level, cert, k, ell):
            raise StructuralViolation(
                "certificate replay failed verification at an intermediate level"
            )
    if not verify_certificate(d, cert, k, ell):
        raise StructuralViolation("replayed certificate invalid in the input digraph")
    return cert


def _expand_arc(path: DiPath, arc: tuple[int, int], mid: int) -> DiPath:
    vs = path.vertices
    for i in range(len(vs) - 1):
        if (vs[i], vs[i + 1]) == arc:
            return DiPath(vs[: i + 1] + (mid,) + vs[i + 1 :])
    return path


def color_hamiltonian(
    d: Digraph,
    ham: DiCycle,
    k: int,
    ell: int,
    *,
    cap: int | None = None,
    strict: bool = True,
) -> Coloring | TwoBlockCertificate:
    """Color a two-block-free Hamiltonian digraph with at most k + ell colors."""
    result = ham_degeneracy_order(d, ham, k, ell, cap=cap, strict=strict)
    if isinstance(result, TwoBlockCertificate):
        return result
    g = underlying_graph(d)
    coloring = greedy_color_by_order(g, result)
    if coloring.palette_size > k + ell or not is_proper(g, coloring):
        raise StructuralViolation(
            f"greedy coloring used {coloring.palette_size} > {k + ell} colors"
        )
    return coloring

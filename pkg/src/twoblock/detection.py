"""Certificate-producing detection of two-block cycles and exact cycle search.

A two-block cycle ``c(k, ell)`` consists of two internally vertex-disjoint
directed paths from some vertex ``u`` to some other vertex ``v``, of lengths
at least ``k`` and at least ``ell``.  A digon is not a two-block cycle: its
two arcs run in opposite directions, not from ``u`` to ``v`` twice.

The searches are exponential but aggressively pruned with bitmask
reachability, which keeps exhaustive proofs comfortable at desk scale.
Beyond the cap, strict mode refuses and heuristic mode falls back to a
randomized search whose negatives are explicitly tagged as unverified.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .digraph import Digraph, DiCycle, DiPath, cycle_segment, path_in, reach_mask
from .errors import (
    Acyclic,
    CapExceeded,
    NotAChord,
    NotOnCycle,
    PreconditionViolated,
)

DEFAULT_DETECT_CAP = 12
DEFAULT_CYCLE_CAP = 20

_HEURISTIC_TRIES = 400
_HEURISTIC_BUDGET = 20000


@dataclass(frozen=True)
class TwoBlockCertificate:
    """Positive witness of ``c(k_req, ell_req)``: two disjoint u->v paths."""

    u: int
    v: int
    path_a: DiPath
    path_b: DiPath
    k_req: int
    ell_req: int

    def to_json_dict(self) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "path_a": list(self.path_a.vertices),
            "path_b": list(self.path_b.vertices),
            "k": self.k_req,
            "ell": self.ell_req,
        }


@dataclass(frozen=True)
class AbsenceReport:
    """Negative detection result; only ``mode == "exhaustive"`` is a proof."""

    k: int
    ell: int
    mode: str
    pairs_checked: int

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "ell": self.ell,
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
        }


@dataclass(frozen=True)
class CrossingException:
    """A crossing-chord configuration where no certificate is forced.

    ``case`` is ``"a"`` (first path segment has length exactly ``k - 1`` with
    chord orientations front-forward, back-backward) or ``"b"`` (second
    segment exactly ``ell - 1`` with the opposite pattern).
    """

    case: str


def verify_certificate(
    d: Digraph, cert: TwoBlockCertificate, k: int, ell: int
) -> bool:
    """True iff ``cert`` really witnesses ``c(k, ell)`` inside ``d``."""
    a, b = cert.path_a, cert.path_b
    if cert.u == cert.v:
        return False
    if a.start != cert.u or b.start != cert.u:
        return False
    if a.end != cert.v or b.end != cert.v:
        return False
    if a.vertices == b.vertices:
        return False
    if a.interior() & b.interior():
        return False
    if a.length < k or b.length < ell:
        return False
    return path_in(d, a) and path_in(d, b)


def _certificate(
    u: int, v: int, p: tuple[int, ...], q: tuple[int, ...], k: int, ell: int
) -> TwoBlockCertificate:
    # Assign the two found paths to the (k, ell) roles.
    lp, lq = len(p) - 1, len(q) - 1
    if lp >= k and lq >= ell:
        return TwoBlockCertificate(u, v, DiPath(p), DiPath(q), k, ell)
    if lq >= k and lp >= ell:
        return TwoBlockCertificate(u, v, DiPath(q), DiPath(p), k, ell)
    raise AssertionError("internal: path pair does not fit the requested roles")


def _find_long_path(
    out_mask: tuple[int, ...],
    in_mask: tuple[int, ...],
    u: int,
    v: int,
    allowed: int,
    target: int,
    budget: list[int] | None = None,
) -> tuple[int, ...] | None:
    """One simple u->v path of length >= target inside ``allowed``, or None."""
    co = reach_mask(in_mask, v, allowed)
    if not (co >> u) & 1:
        return None
    vbit = 1 << v
    path = [u]

    def dfs(w: int, used: int) -> bool:
        if budget is not None:
            if budget[0] <= 0:
                return False
            budget[0] -= 1
        length = len(path) - 1
        nbrs = out_mask[w] & allowed & ~used
        m = nbrs
        while m:
            low = m & -m
            m ^= low
            x = low.bit_length() - 1
            if x == v:
                if length + 1 >= target:
                    path.append(v)
                    return True
                continue
            if not (co >> x) & 1:
                continue
            new_used = used | low
            rx = reach_mask(out_mask, x, (allowed & ~new_used) | low)
            if not rx & vbit:
                continue
            if length + 1 + (rx & co & ~low).bit_count() < target:
                continue
            path.append(x)
            if dfs(x, new_used):
                return True
            path.pop()
        return False

    if dfs(u, 1 << u):
        return tuple(path)
    return None


def _pair_search(
    d: Digraph,
    u: int,
    v: int,
    region: int,
    kk: int,
    ll: int,
    rng: random.Random | None = None,
    budget: list[int] | None = None,
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Two disjoint u->v paths with lengths covering (kk, ll), kk >= ll."""
    out_mask, in_mask = d.out_mask, d.in_mask
    co = reach_mask(in_mask, v, region)
    if not (co >> u) & 1:
        return None
    ubit, vbit = 1 << u, 1 << v
    path = [u]
    result: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def try_second(used: int) -> bool:
        plen = len(path)  # arcs of the complete first path including the hop to v
        if plen < ll:
            return False
        q_target = kk if plen < kk else ll
        if plen == 1:
            q_target = max(q_target, 2)
        q_allowed = region & ~(used & ~ubit)
        q = _find_long_path(out_mask, in_mask, u, v, q_allowed, q_target, budget)
        if q is None:
            return False
        result.append((tuple(path) + (v,), q))
        return True

    def dfs(w: int, used: int) -> bool:
        if budget is not None:
            if budget[0] <= 0:
                return False
            budget[0] -= 1
        length = len(path) - 1
        nbrs = out_mask[w] & region & ~used
        if rng is None:
            order = []
            m = nbrs
            while m:
                low = m & -m
                m ^= low
                order.append(low.bit_length() - 1)
        else:
            order = list(_bits(nbrs))
            rng.shuffle(order)
        for x in order:
            low = 1 << x
            if x == v:
                if try_second(used):
                    return True
                continue
            if not (co >> x) & 1:
                continue
            new_used = used | low
            rx = reach_mask(out_mask, x, (region & ~new_used) | low)
            if not rx & vbit:
                continue
            if length + 1 + (rx & co & ~low).bit_count() < ll:
                continue
            path.append(x)
            if dfs(x, new_used):
                return True
            path.pop()
        return False

    if dfs(u, ubit):
        return result[0]
    return None


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def find_two_block_cycle(
    d: Digraph,
    k: int,
    ell: int,
    *,
    cap: int | None = None,
    strict: bool = True,
    seed: int = 0,
) -> TwoBlockCertificate | AbsenceReport:
    """Search for ``c(k, ell)``; a verified certificate or an absence report.

    Within the cap the search is exhaustive, so a negative is a proof.  Above
    the cap, strict mode raises :class:`CapExceeded`; heuristic mode runs a
    randomized search and returns a ``capped`` report when it finds nothing.
    """
    if k < 1 or ell < 1:
        raise PreconditionViolated("k and ell must be positive")
    cap = DEFAULT_DETECT_CAP if cap is None else cap
    if d.n > cap:
        if strict:
            raise CapExceeded(
                f"exhaustive detection needs n <= {cap}, got {d.n}"
            )
        return _heuristic_find(d, k, ell, seed)
    kk, ll = max(k, ell), min(k, ell)
    n = d.n
    full = (1 << n) - 1
    need_interior = (kk - 1) + (ll - 1)
    for u in range(n):
        reach_u = reach_mask(d.out_mask, u, full)
        for v in range(n):
            if v == u or not (reach_u >> v) & 1:
                continue
            region = reach_u & reach_mask(d.in_mask, v, full)
            if region.bit_count() - 2 < need_interior:
                continue
            pair = _pair_search(d, u, v, region, kk, ll)
            if pair is not None:
                cert = _certificate(u, v, pair[0], pair[1], k, ell)
                assert verify_certificate(d, cert, k, ell)
                return cert
    return AbsenceReport(k, ell, "exhaustive", n * (n - 1))


def _heuristic_find(
    d: Digraph, k: int, ell: int, seed: int
) -> TwoBlockCertificate | AbsenceReport:
    rng = random.Random(seed)
    kk, ll = max(k, ell), min(k, ell)
    n = d.n
    full = (1 << n) - 1
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    rng.shuffle(pairs)
    tries = min(len(pairs), _HEURISTIC_TRIES)
    for u, v in pairs[:tries]:
        reach_u = reach_mask(d.out_mask, u, full)
        if not (reach_u >> v) & 1:
            continue
        region = reach_u & reach_mask(d.in_mask, v, full)
        if region.bit_count() - 2 < (kk - 1) + (ll - 1):
            continue
        budget = [_HEURISTIC_BUDGET]
        pair = _pair_search(d, u, v, region, kk, ll, rng=rng, budget=budget)
        if pair is not None:
            cert = _certificate(u, v, pair[0], pair[1], k, ell)
            assert verify_certificate(d, cert, k, ell)
            return cert
    return AbsenceReport(k, ell, "capped", tries)


def find_two_block_cycle_through_arc(
    d: Digraph, k: int, ell: int, arc: tuple[int, int]
) -> TwoBlockCertificate | None:
    """Exhaustive search restricted to certificates that use ``arc``.

    This is complete for the incremental question "did adding ``arc`` create
    a two-block cycle?" when the digraph without ``arc`` is known to be free:
    any new certificate must traverse the new arc.
    """
    a, b = arc
    if not d.has_arc(a, b):
        raise PreconditionViolated(f"arc {arc} not present")
    kk, ll = max(k, ell), min(k, ell)
    out_mask, in_mask = d.out_mask, d.in_mask
    full = (1 << d.n) - 1
    abit, bbit = 1 << a, 1 << b

    found: list[TwoBlockCertificate] = []

    def q_search(u: int, v: int, r_path: tuple[int, ...]) -> bool:
        rlen = len(r_path) - 1
        if rlen < ll:
            return False
        q_target = kk if rlen < kk else ll
        if rlen == 1:
            q_target = max(q_target, 2)
        interior = 0
        for x in r_path[1:-1]:
            interior |= 1 << x
        q = _find_long_path(out_mask, in_mask, u, v, full & ~interior, q_target)
        if q is None:
            return False
        found.append(_certificate(u, v, r_path, q, k, ell))
        return True

    # Suffix paths b -> v, then prefix paths u -> a avoiding the suffix.
    suffix = [b]

    def prefix_dfs(pused: int, sused: int) -> bool:
        u = prefix[0]
        if u != suffix[-1] and q_search(u, suffix[-1], tuple(prefix) + tuple(suffix)):
            return True
        preds = in_mask[u] & ~pused & ~sused
        m = preds
        while m:
            low = m & -m
            m ^= low
            x = low.bit_length() - 1
            prefix.insert(0, x)
            if prefix_dfs(pused | low, sused):
                return True
            prefix.pop(0)
        return False

    prefix = [a]

    def suffix_dfs(sused: int) -> bool:
        prefix.clear()
        prefix.append(a)
        if prefix_dfs(abit, sused):
            return True
        w = suffix[-1]
        nbrs = out_mask[w] & ~sused & ~abit
        m = nbrs
        while m:
            low = m & -m
            m ^= low
            x = low.bit_length() - 1
            suffix.append(x)
            if suffix_dfs(sused | low):
                return True
            suffix.pop()
        return False

    if suffix_dfs(bbit):
        cert = found[0]
        assert verify_certificate(d, cert, k, ell)
        return cert
    return None


def longest_cycle(
    d: Digraph, *, cap: int | None = None, strict: bool = True, seed: int = 0
) -> DiCycle:
    """An exact longest cycle with a reproducible tie-break.

    Among maximum-length cycles the one whose min-vertex-first rotation is
    lexicographically least is returned.  Heuristic mode (above the cap)
    returns the best cycle a randomized search finds; it is a genuine cycle
    but not certified longest.
    """
    cap = DEFAULT_CYCLE_CAP if cap is None else cap
    if d.n > cap:
        if strict:
            raise CapExceeded(f"exact longest cycle needs n <= {cap}, got {d.n}")
        return _heuristic_longest_cycle(d, seed)
    best: list[int] | None = None
    out_mask, in_mask = d.out_mask, d.in_mask
    full = (1 << d.n) - 1
    for s in range(d.n):
        allowed = full & ~((1 << s) - 1)
        co_s = reach_mask(in_mask, s, allowed)
        re_s = reach_mask(out_mask, s, allowed)
        region = co_s & re_s
        if region == 1 << s or region.bit_count() <= (len(best) if best else 0):
            continue
        sbit = 1 << s
        path = [s]

        def dfs(w: int, used: int) -> None:
            nonlocal best
            nbrs = out_mask[w] & region
            m = nbrs
            while m:
                low = m & -m
                m ^= low
                x = low.bit_length() - 1
                if x == s:
                    if best is None or len(path) > len(best):
                        best = path.copy()
                    continue
                if used & low:
                    continue
                new_used = used | low
                rx = reach_mask(out_mask, x, (region & ~new_used) | low | sbit)
                if not rx & sbit:
                    continue
                if best is not None:
                    potential = len(path) + (rx & co_s & ~low & ~sbit).bit_count() + 1
                    if potential <= len(best):
                        continue
                path.append(x)
                dfs(x, new_used)
                path.pop()

        dfs(s, sbit)
    if best is None:
        raise Acyclic("the digraph contains no directed cycle")
    return DiCycle(tuple(best))


def _heuristic_longest_cycle(d: Digraph, seed: int) -> DiCycle:
    rng = random.Random(seed)
    best: list[int] | None = None
    out_adj = d.out_adj
    starts = list(range(d.n))
    rng.shuffle(starts)
    for s in starts[: min(d.n, 40)]:
        for _ in range(20):
            path = [s]
            used = {s}
            while True:
                options = [x for x in out_adj[path[-1]] if x not in used]
                if d.has_arc(path[-1], s) and len(path) >= 2:
                    if best is None or len(path) > len(best):
                        best = path.copy()
                if not options:
                    break
                path.append(rng.choice(options))
                used.add(path[-1])
    if best is None:
        # Fall back to digon scan; heuristics may miss short cycles.
        for t, h in sorted(d.arcs):
            if d.has_arc(h, t):
                return DiCycle((min(t, h), max(t, h)))
        raise Acyclic("no cycle found (heuristic mode)")
    i = best.index(min(best))
    return DiCycle(tuple(best[i:] + best[:i]))


def hamiltonian_cycle(
    d: Digraph, *, cap: int | None = None, strict: bool = True
) -> DiCycle | None:
    """A spanning cycle, or ``None`` when exhaustive search proves absence."""
    cap = DEFAULT_CYCLE_CAP if cap is None else cap
    if d.n > cap:
        raise CapExceeded(f"Hamiltonicity search needs n <= {cap}, got {d.n}")
    if d.n < 2:
        return None
    out_mask, in_mask = d.out_mask, d.in_mask
    full = (1 << d.n) - 1
    if reach_mask(out_mask, 0, full) != full or reach_mask(in_mask, 0, full) != full:
        return None
    n = d.n
    path = [0]

    def dfs(w: int, used: int) -> bool:
        nbrs = out_mask[w]
        m = nbrs
        while m:
            low = m & -m
            m ^= low
            x = low.bit_length() - 1
            if x == 0:
                if len(path) == n:
                    return True
                continue
            if used & low:
                continue
            new_used = used | low
            rx = reach_mask(out_mask, x, (full & ~new_used) | low | 1)
            if not rx & 1:
                continue
            if (full & ~new_used) & ~rx:
                continue  # some unvisited vertex became unreachable
            path.append(x)
            if dfs(x, new_used):
                return True
            path.pop()
        return False

    if dfs(0, 1):
        return DiCycle(tuple(path))
    return None


def crossing_chord_case(
    c: DiCycle,
    chord1: tuple[int, int],
    chord2: tuple[int, int],
    k: int,
    ell: int,
    *,
    u: int | None = None,
    v: int | None = None,
) -> TwoBlockCertificate | CrossingException:
    """Case analysis for two crossing chords on a cycle.

    ``chord1`` joins ``{u, v}`` and ``chord2`` joins ``{x, y}`` with ``x``
    strictly inside the cycle segment from ``u`` to ``v`` and ``y`` strictly
    inside the opposite segment.  With ``|uCx| >= k - 1`` and
    ``|vCy| >= ell - 1`` the four orientation cases either force a verified
    two-block cycle built from the named segments, or land in one of the two
    exceptional equality patterns.

    The ``u``/``v`` role assignment defaults to ``chord1`` read as
    ``(u, v)``; pass them explicitly to pick the opposite reading.
    """
    if k < 1 or ell < 1:
        raise PreconditionViolated("k and ell must be positive")
    if u is None or v is None:
        u, v = chord1
    if {u, v} != set(chord1):
        raise PreconditionViolated("u, v must be the endpoints of chord1")
    x_cand = set(chord2)
    if len({u, v} | x_cand) != 4:
        raise PreconditionViolated("chord endpoints must be four distinct vertices")
    for w in (u, v, *x_cand):
        if w not in c.vertices:
            raise NotOnCycle(f"vertex {w} is not on the cycle")
    for chord in (chord1, chord2):
        t, h = chord
        if c.successor(t) == h or c.successor(h) == t:
            raise NotAChord(f"{chord} is an arc of the cycle")
    seg_uv = set(cycle_segment(c, u, v).vertices) - {u, v}
    seg_vu = set(cycle_segment(c, v, u).vertices) - {u, v}
    inside = x_cand & seg_uv
    outside = x_cand & seg_vu
    if len(inside) != 1 or len(outside) != 1:
        raise PreconditionViolated(
            "chord2 must cross chord1: one endpoint inside each segment"
        )
    x, y = inside.pop(), outside.pop()
    ucx = cycle_segment(c, u, x)
    vcy = cycle_segment(c, v, y)
    a_len, b_len = ucx.length, vcy.length
    if a_len < k - 1 or b_len < ell - 1:
        raise PreconditionViolated(
            f"need |uCx| >= {k - 1} and |vCy| >= {ell - 1}, got {a_len}, {b_len}"
        )
    uv_forward = chord1 == (u, v)
    xy_forward = chord2 == (x, y)

    if uv_forward and xy_forward:
        path_k = DiPath(ucx.vertices + (y,))
        path_l = DiPath((u,) + vcy.vertices)
        return TwoBlockCertificate(u, y, path_k, path_l, k, ell)
    if uv_forward and not xy_forward:
        if a_len == k - 1:
            return CrossingException("a")
        path_k = ucx
        path_l = DiPath((u,) + vcy.vertices + (x,))
        return TwoBlockCertificate(u, x, path_k, path_l, k, ell)
    if not uv_forward and xy_forward:
        if b_len == ell - 1:
            return CrossingException("b")
        path_k = DiPath((v,) + ucx.vertices + (y,))
        path_l = vcy
        return TwoBlockCertificate(v, y, path_k, path_l, k, ell)
    path_k = DiPath((v,) + ucx.vertices)
    path_l = DiPath(vcy.vertices + (x,))
    return TwoBlockCertificate(v, x, path_k, path_l, k, ell)

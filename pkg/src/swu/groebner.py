"""Deterministic Buchberger engine over F2 with bigraded Hilbert series.

Monomial order: degrevlex on the cohomological degree p, refined by the
weight q, with the reverse-lexicographic tie-break taken over the roster
with tau last.  The q refinement keeps the order well-founded (tau has
p = 0) and never touches comparisons between monomials of one bidegree, so
homogeneous computations see exactly "degrevlex on p, tau cheapest".  The
Rabinowitsch extension used for radical membership is not graded; there the
engine falls back to plain total-degree degrevlex.

Internally monomials are packed into single integers, 16 bits per roster
slot with a guard bit, so that multiplication is integer addition and
divisibility is one masked subtraction.  The reduced basis is canonical for
the order, hence bit-identical for identical inputs.
"""

from __future__ import annotations

import bisect
import heapq
import os
from dataclasses import dataclass, field

from .algebra import (
    ANY_DEGREE,
    NON_HOMOGENEOUS,
    Bidegree,
    Polynomial,
    RingContext,
    custom_context,
    variable,
)

SLOT = 16
_OFF = 1 << (SLOT - 1)


class ResourceLimitError(RuntimeError):
    """Raised when the S-pair queue exceeds the configured processing cap."""

    def __init__(self, message: str, pairs_processed: int, basis_size: int):
        super().__init__(message)
        self.pairs_processed = pairs_processed
        self.basis_size = basis_size


def default_pair_limit() -> int:
    """Pair-processing cap; override with the SWU_RESOURCE_LIMIT env var."""
    raw = os.environ.get("SWU_RESOURCE_LIMIT")
    if raw is None:
        return 2_000_000
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"SWU_RESOURCE_LIMIT must be an integer, got {raw!r}")


@dataclass(frozen=True)
class MonomialOrder:
    """Order metadata recorded on every basis: the kind and tie-break roster."""

    kind: str
    tie_roster: tuple[str, ...]


def default_order(ctx: RingContext) -> MonomialOrder:
    names = tuple(ctx.variables[i].name for i in ctx.tie_positions())
    return MonomialOrder("degrevlex-p", names)


class _Engine:
    """Packed-monomial arithmetic and order keys for one context."""

    def __init__(self, ctx: RingContext, plain_degree: bool = False):
        self.ctx = ctx
        k = ctx.nvars
        self.k = k
        self.guards = sum(_OFF << (SLOT * i) for i in range(k))
        if plain_degree:
            self.pw = (1,) * k
            self.qw = (0,) * k
        else:
            self.pw = tuple(v.bidegree.p for v in ctx.variables)
            self.qw = tuple(v.bidegree.q for v in ctx.variables)
        self.tie = ctx.tie_positions()
        self._keys: dict[int, int] = {}
        self._bidegs: dict[int, tuple[int, int]] = {}

    # -- packing ------------------------------------------------------------
    def pack(self, mono: tuple) -> int:
        m = 0
        for i, e in enumerate(mono):
            if e >= _OFF:
                raise OverflowError(f"exponent {e} exceeds the packed-slot range")
            m |= e << (SLOT * i)
        return m

    def unpack(self, m: int) -> tuple:
        return tuple((m >> (SLOT * i)) & (_OFF * 2 - 1) for i in range(self.k))

    # -- order and degrees ----------------------------------------------------
    def key(self, m: int) -> int:
        val = self._keys.get(m)
        if val is None:
            mono = self.unpack(m)
            p = sum(e * w for e, w in zip(mono, self.pw))
            q = sum(e * w for e, w in zip(mono, self.qw))
            val = (p << SLOT) | q
            for pos in reversed(self.tie):
                val = (val << SLOT) | (_OFF - mono[pos])
            self._keys[m] = val
        return val

    def bideg(self, m: int) -> tuple[int, int]:
        val = self._bidegs.get(m)
        if val is None:
            mono = self.unpack(m)
            val = (sum(e * w for e, w in zip(mono, self.pw)),
                   sum(e * w for e, w in zip(mono, self.qw)))
            self._bidegs[m] = val
        return val

    def pdeg(self, m: int) -> int:
        return self.bideg(m)[0]

    # -- monomial arithmetic ----------------------------------------------------
    def divides(self, d: int, m: int) -> bool:
        t = (m + self.guards) - d
        return (t & self.guards) == self.guards

    def quotient(self, m: int, d: int) -> int:
        return ((m + self.guards) - d) - self.guards

    def lcm(self, a: int, b: int) -> int:
        t = (a + self.guards) - b
        ge = t & self.guards  # guard set on slots where a_i >= b_i
        full = (ge << 1) - (ge >> (SLOT - 1))  # smear to full slot masks
        return (a & full) + b - (b & full)

    def coprime(self, a: int, b: int) -> bool:
        return self.lcm(a, b) == a + b

    def mask(self, m: int) -> int:
        out = 0
        for i in range(self.k):
            if (m >> (SLOT * i)) & (_OFF * 2 - 1):
                out |= 1 << i
        return out

    # -- polynomial conversion ---------------------------------------------------
    def from_poly(self, f: Polynomial) -> frozenset:
        return frozenset(self.pack(mono) for mono in f.terms)

    def to_poly(self, terms) -> Polynomial:
        return Polynomial(self.ctx, frozenset(self.unpack(m) for m in terms))


class _Gen:
    """A basis element: terms sorted descending with their order keys.

    Keys are affine under monomial multiplication (key(t*q) = key(t) +
    key(m) - key(lt) when m = lt*q), so reductions propagate keys with
    integer additions instead of recomputing them.
    """

    __slots__ = ("lt", "key", "mask", "terms", "term_keys")

    def __init__(self, items: dict, engine: _Engine):
        pairs = sorted(items.items(), key=lambda kv: kv[1], reverse=True)
        self.lt = pairs[0][0]
        self.key = pairs[0][1]
        self.mask = engine.mask(self.lt)
        self.terms = tuple(m for m, _ in pairs)
        self.term_keys = tuple(k for _, k in pairs)


def _reduce_full(items: dict, gens: list[_Gen], engine: _Engine) -> dict:
    """Complete normal form of {monomial: key} against gens (sorted by key).

    Returns the remainder as a {monomial: key} dict: no remaining monomial is
    divisible by any basis leading term.
    """
    cur = dict(items)
    if not cur:
        return {}
    heap = [(-k, m) for m, k in cur.items()]
    heapq.heapify(heap)
    out: dict = {}
    emask = engine.mask
    divides = engine.divides
    while heap:
        negk, m = heapq.heappop(heap)
        if m not in cur:
            continue
        mm = emask(m)
        red = None
        for g in gens:
            if g.mask & ~mm:
                continue
            if divides(g.lt, m):
                red = g
                break
        if red is None:
            del cur[m]
            out[m] = -negk
            continue
        q = m - red.lt  # exact by divisibility; no slot borrows
        delta = -negk - red.key
        terms = red.terms
        keys = red.term_keys
        for i in range(len(terms)):
            tm = terms[i] + q
            if tm in cur:
                del cur[tm]
            else:
                nk = keys[i] + delta
                cur[tm] = nk
                heapq.heappush(heap, (-nk, tm))
    return out


def _spoly(f: _Gen, g: _Gen, engine: _Engine) -> dict:
    l = engine.lcm(f.lt, g.lt)
    kl = engine.key(l)
    qf, df = l - f.lt, kl - f.key
    qg, dg = l - g.lt, kl - g.key
    acc: dict = {}
    for t, kt in zip(f.terms, f.term_keys):
        acc[t + qf] = kt + df
    for t, kt in zip(g.terms, g.term_keys):
        m = t + qg
        if m in acc:
            del acc[m]
        else:
            acc[m] = kt + dg
    return acc


@dataclass(eq=False)
class GroebnerBasis:
    """Reduced basis with its order metadata and degree-cap record.

    When ``complete`` is true every S-polynomial reduces to zero; with a
    degree cap D on homogeneous input the basis still decides membership for
    any homogeneous polynomial of p-degree at most D.
    """

    context: RingContext
    order: MonomialOrder
    generators: tuple[Polynomial, ...]
    degree_cap: int | None
    complete: bool
    pairs_processed: int = 0
    _engine: _Engine = field(default=None, repr=False)
    _gens: list = field(default_factory=list, repr=False)

    def leading_monomials(self) -> list[tuple]:
        return [g.leading_monomial() for g in self.generators]


def _sorted_input(gens: list[Polynomial], engine: _Engine) -> list[dict]:
    packed = []
    for f in gens:
        if f.is_zero:
            continue
        packed.append({m: engine.key(m) for m in engine.from_poly(f)})
    packed.sort(key=lambda items: sorted(items.values(), reverse=True))
    return packed


def _gm_update(G: list[_Gen], pairs: list, h: _Gen, engine: _Engine,
               counter: list[int]) -> list:
    """Gebauer-Moeller installation: prune new and old S-pairs, retire
    basis elements whose leading term the new one divides."""
    lcm = engine.lcm
    divides = engine.divides
    coprime = engine.coprime

    C = [(g, lcm(h.lt, g.lt)) for g in G]
    D: list[tuple[_Gen, int]] = []
    while C:
        g, l = C.pop(0)
        if coprime(h.lt, g.lt) or (
                not any(divides(l2, l) for _, l2 in C)
                and not any(divides(l2, l) for _, l2 in D)):
            D.append((g, l))
    E = [(g, l) for g, l in D if not coprime(h.lt, g.lt)]

    kept = []
    for entry in pairs:
        _, _, l, f1, f2 = entry
        if (not divides(h.lt, l)) or lcm(f1.lt, h.lt) == l or lcm(f2.lt, h.lt) == l:
            kept.append(entry)
    for g, l in E:
        counter[0] += 1
        kept.append((engine.key(l), counter[0], l, g, h))
    heapq.heapify(kept)

    G[:] = [g for g in G if not divides(h.lt, g.lt)]
    bisect.insort(G, h, key=lambda g: g.key)
    return kept


def _buchberger(inputs: list[dict], engine: _Engine, degree_cap: int | None,
                pair_limit: int) -> tuple[list[_Gen], bool, int]:
    G: list[_Gen] = []  # kept sorted ascending by leading-term key
    pairs: list = []
    counter = [0]
    complete = True
    processed = 0
    for items in inputs:
        red = _reduce_full(items, G, engine)
        if red:
            pairs = _gm_update(G, pairs, _Gen(red, engine), engine, counter)
    while pairs:
        _, _, l, f1, f2 = heapq.heappop(pairs)
        if degree_cap is not None and engine.pdeg(l) > degree_cap:
            # normal strategy pops pairs by ascending degree, so everything
            # left in the queue lies beyond the cap as well
            complete = False
            break
        processed += 1
        if processed > pair_limit:
            raise ResourceLimitError(
                f"S-pair limit {pair_limit} exceeded", processed, len(G))
        red = _reduce_full(_spoly(f1, f2, engine), G, engine)
        if red:
            pairs = _gm_update(G, pairs, _Gen(red, engine), engine, counter)
    return G, complete, processed


def _reduced_basis(G: list[_Gen], engine: _Engine) -> list[_Gen]:
    """Minimalize leading terms, then tail-reduce every element."""
    by_key = sorted(G, key=lambda g: g.key)
    minimal: list[_Gen] = []
    for g in by_key:
        if not any(engine.divides(m.lt, g.lt) for m in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = {t: k for t, k in zip(g.terms, g.term_keys) if t != g.lt}
        red_tail = _reduce_full(tail, others, engine)
        red_tail[g.lt] = g.key
        reduced.append(_Gen(red_tail, engine))
    reduced.sort(key=lambda g: g.key)
    return reduced


def groebner_basis(gens: list[Polynomial], ctx: RingContext | None = None,
                   order: MonomialOrder | None = None,
                   degree_cap: int | None = None,
                   pair_limit: int | None = None) -> GroebnerBasis:
    """Reduced deterministic Groebner basis of the given generators.

    With a degree cap all generators must be homogeneous; the result then
    decides ideal membership up to that p-degree.
    """
    if ctx is None:
        if not gens:
            raise ValueError("cannot infer a context from an empty generator list")
        ctx = gens[0].context
    for f in gens:
        if f.context != ctx:
            raise ValueError("generators lie in different contexts")
    if degree_cap is not None:
        for f in gens:
            if f.bidegree() is NON_HOMOGENEOUS:
                raise ValueError("degree-capped bases need homogeneous generators")
    engine = _Engine(ctx)
    if order is None:
        order = default_order(ctx)
    limit = pair_limit if pair_limit is not None else default_pair_limit()
    inputs = _sorted_input(list(gens), engine)
    G, complete, processed = _buchberger(inputs, engine, degree_cap, limit)
    reduced = _reduced_basis(G, engine)
    polys = tuple(engine.to_poly(g.terms) for g in reduced)
    # record a cap only when it actually truncated the run; a run that
    # exhausted its queue below the cap is a complete basis
    recorded_cap = degree_cap if not complete else None
    return GroebnerBasis(ctx, order, polys, recorded_cap, complete,
                         processed, engine, reduced)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Complete reduction of f modulo the basis; idempotent and F2-linear."""
    if f.context != gb.context:
        raise ValueError("polynomial lies outside the basis context")
    if gb.degree_cap is not None:
        deg = f.bidegree()
        if deg is NON_HOMOGENEOUS:
            raise ValueError("cannot reduce a non-homogeneous polynomial "
                             "against a degree-capped basis")
        if deg is not ANY_DEGREE and deg.p > gb.degree_cap:
            raise ValueError(
                f"p-degree {deg.p} exceeds the basis degree cap {gb.degree_cap}")
    engine = gb._engine
    items = {m: engine.key(m) for m in engine.from_poly(f)}
    red = _reduce_full(items, gb._gens, engine)
    return engine.to_poly(red)


def ideal_member(f: Polynomial, gens: list[Polynomial],
                 ctx: RingContext | None = None) -> bool:
    """Membership of f in the ideal generated by gens.

    Homogeneous data uses a Buchberger run capped at the p-degree of f; a
    non-homogeneous query or generator forces an uncapped basis.
    """
    if ctx is None:
        ctx = f.context
    if f.is_zero:
        return True
    homogeneous = f.bidegree() is not NON_HOMOGENEOUS and all(
        g.bidegree() is not NON_HOMOGENEOUS for g in gens)
    cap = f.bidegree().p if homogeneous else None
    gb = groebner_basis(gens, ctx, degree_cap=cap)
    return normal_form(f, gb).is_zero


# ---------------------------------------------------------------------------
# Hilbert series


def _minimalize(monos: list[int], engine: _Engine) -> tuple[int, ...]:
    monos = sorted(set(monos), key=engine.key)
    out: list[int] = []
    for m in monos:
        if not any(engine.divides(d, m) for d in out):
            out.append(m)
    return tuple(out)


def _series_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (p1, q1), c1 in a.items():
        for (p2, q2), c2 in b.items():
            key = (p1 + p2, q1 + q2)
            v = out.get(key, 0) + c1 * c2
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out


def _one_minus(bideg: tuple[int, int]) -> dict:
    if bideg == (0, 0):
        return {}
    return {(0, 0): 1, bideg: -1}


def _kpoly(gens: tuple[int, ...], engine: _Engine,
           memo: dict) -> dict:
    """Numerator of the Hilbert series of S/(monomial ideal), by the standard
    pivot splitting N(I) = N(I + (v^e)) + T^deg(v^e) N(I : v^e)."""
    val = memo.get(gens)
    if val is not None:
        return val
    if not gens:
        val = {(0, 0): 1}
    elif gens[0] == 0:
        val = {}
    else:
        k = engine.k
        slots = [engine.unpack(m) for m in gens]
        support = [[] for _ in range(k)]
        for mono in slots:
            for i, e in enumerate(mono):
                if e:
                    support[i].append(e)
        if all(len(s) <= 1 for s in support):
            # every variable occurs in at most one generator, so the
            # generators are pairwise coprime: N = prod (1 - T^deg)
            val = {(0, 0): 1}
            for m in gens:
                val = _series_mul(val, _one_minus(engine.bideg(m)))
        else:
            pivot_var = max(range(k), key=lambda i: len(support[i]))
            e = min(support[pivot_var])
            pivot = e << (SLOT * pivot_var)
            # N(I) = N(I + (pivot)) + T^deg(pivot) N(I : pivot)
            plus = _minimalize(list(gens) + [pivot], engine)
            colon = []
            for m, mono in zip(gens, slots):
                r = min(e, mono[pivot_var])
                colon.append(m - (r << (SLOT * pivot_var)))
            colon_min = _minimalize(colon, engine)
            npl = _kpoly(plus, engine, memo)
            ncl = _kpoly(colon_min, engine, memo)
            shift = engine.bideg(pivot)
            val = dict(npl)
            for (p, q), c in ncl.items():
                key = (p + shift[0], q + shift[1])
                v = val.get(key, 0) + c
                if v:
                    val[key] = v
                elif key in val:
                    del val[key]
    memo[gens] = val
    return val


@dataclass(eq=False)
class HilbertSeries:
    """Bivariate Hilbert series of a graded quotient, as a rational form
    numerator / prod_v (1 - t^{p_v} s^{q_v}) plus a truncated table."""

    numerator: dict
    denominator: tuple[tuple[int, int], ...]
    coefficients: dict = field(default_factory=dict)
    truncation: tuple[int, int] | None = None

    def rational_form(self) -> tuple[tuple, tuple]:
        num = tuple(sorted((p, q, c) for (p, q), c in self.numerator.items()))
        return num, self.denominator

    def same_rational_form(self, other: "HilbertSeries") -> bool:
        return self.rational_form() == other.rational_form()

    def expand(self, max_p: int, max_q: int, strict: bool = True) -> dict:
        """Coefficient table {(p, q): dim} for p <= max_p, q <= max_q.

        strict mode rejects negative coefficients, which a genuine quotient
        can never produce; predicted (Koszul) series of a sequence that
        fails to be regular may go negative and are expanded leniently.
        """
        table = [[0] * (max_q + 1) for _ in range(max_p + 1)]
        for (p, q), c in self.numerator.items():
            if 0 <= p <= max_p and 0 <= q <= max_q:
                table[p][q] += c
        for (a, b) in self.denominator:
            if a == 0 and b == 0:
                raise ValueError("denominator factor of degree (0, 0)")
            for p in range(a, max_p + 1):
                for q in range(b, max_q + 1):
                    table[p][q] += table[p - a][q - b]
        out = {}
        for p in range(max_p + 1):
            for q in range(max_q + 1):
                c = table[p][q]
                if c < 0 and strict:
                    raise ArithmeticError(
                        f"negative Hilbert coefficient at {(p, q)}")
                if c:
                    out[(p, q)] = c
        self.coefficients = out
        self.truncation = (max_p, max_q)
        return out


def _denominator(ctx: RingContext,
                 extra: tuple[tuple[int, int], ...] = ()) -> tuple:
    dens = [(v.bidegree.p, v.bidegree.q) for v in ctx.variables]
    dens.extend(extra)
    return tuple(sorted(dens))


def hilbert_series(gens: list[Polynomial], ctx: RingContext | None = None,
                   truncation: tuple[int, int] = (12, 8),
                   pair_limit: int | None = None) -> HilbertSeries:
    """Hilbert series of ctx/(gens) from the leading-term ideal of a full
    Groebner basis, with the table expanded to the requested window."""
    if ctx is None:
        if not gens:
            raise ValueError("cannot infer a context from an empty generator list")
        ctx = gens[0].context
    for f in gens:
        if f.bidegree() is NON_HOMOGENEOUS:
            raise ValueError("Hilbert series needs homogeneous generators")
    gb = groebner_basis(gens, ctx, pair_limit=pair_limit)
    return hilbert_series_of_basis(gb, truncation)


def hilbert_series_of_basis(gb: GroebnerBasis,
                            truncation: tuple[int, int] = (12, 8)) -> HilbertSeries:
    if not gb.complete:
        raise ValueError("Hilbert series needs a complete (uncapped) basis")
    engine = gb._engine
    lts = _minimalize([g.lt for g in gb._gens], engine)
    numerator = _kpoly(lts, engine, {})
    series = HilbertSeries(numerator, _denominator(gb.context))
    series.expand(*truncation)
    return series


def koszul_series(bidegrees: list[Bidegree], ctx: RingContext,
                  truncation: tuple[int, int] = (12, 8)) -> HilbertSeries:
    """The series a regular sequence of the given bidegrees would produce:
    HS(ctx) * prod_i (1 - t^{p_i} s^{q_i})."""
    num = {(0, 0): 1}
    for d in bidegrees:
        num = _series_mul(num, _one_minus((d.p, d.q)))
    series = HilbertSeries(num, _denominator(ctx))
    series.expand(*truncation, strict=False)
    return series


@dataclass(eq=False)
class RegularityCertificate:
    """Verdict plus the two rational forms whose equality decides it."""

    regular: bool
    quotient_series: HilbertSeries
    expected_series: HilbertSeries
    sequence_bidegrees: tuple[Bidegree, ...]

    def __bool__(self) -> bool:
        return self.regular


def is_regular_sequence(seq: list[Polynomial], ctx: RingContext | None = None,
                        truncation: tuple[int, int] = (12, 8),
                        pair_limit: int | None = None) -> RegularityCertificate:
    """Decide regularity of a homogeneous sequence by Hilbert factorization.

    For homogeneous elements of positive total degree in a graded polynomial
    ring, the sequence is regular exactly when the series of the quotient
    equals HS(ctx) * prod_i (1 - t^{p_i} s^{q_i}) as rational forms.
    """
    if ctx is None:
        if not seq:
            raise ValueError("cannot infer a context from an empty sequence")
        ctx = seq[0].context
    bidegs = []
    for f in seq:
        deg = f.bidegree()
        if deg is NON_HOMOGENEOUS:
            raise ValueError("regularity check needs homogeneous elements")
        if deg is ANY_DEGREE:
            raise ValueError("the zero polynomial cannot appear in a regular sequence")
        if deg.total <= 0:
            raise ValueError("regularity check needs elements of positive total degree")
        bidegs.append(deg)
    quotient = hilbert_series(list(seq), ctx, truncation, pair_limit=pair_limit)
    expected = koszul_series(bidegs, ctx, truncation)
    return RegularityCertificate(quotient.same_rational_form(expected),
                                 quotient, expected, tuple(bidegs))


# ---------------------------------------------------------------------------
# radical membership (Rabinowitsch)


def _extend_with_aux(ctx: RingContext) -> RingContext:
    z = variable("adjoined", bidegree=Bidegree(0, 0), name="z")
    return custom_context(ctx.name + "+z", ctx.mode, ctx.variables + (z,))


def radical_member(f: Polynomial, gens: list[Polynomial],
                   ctx: RingContext | None = None,
                   pair_limit: int | None = None) -> bool:
    """f lies in the radical of (gens) iff 1 is in the ideal (gens, 1 + z f)
    of the ring extended by a fresh variable z; gradings are ignored and the
    extended ring is ordered by plain total-degree degrevlex."""
    if ctx is None:
        ctx = f.context
    if f.is_zero:
        return True
    ext = _extend_with_aux(ctx)
    engine = _Engine(ext, plain_degree=True)

    def lift(p: Polynomial) -> dict:
        items = {}
        for mono in p.terms:
            m = engine.pack(mono + (0,))
            items[m] = engine.key(m)
        return items

    inputs = [lift(g) for g in gens if not g.is_zero]
    one_plus_zf = {engine.pack((0,) * ctx.nvars + (0,))}
    for mono in f.terms:
        one_plus_zf.add(engine.pack(mono + (1,)))
    inputs.append({m: engine.key(m) for m in one_plus_zf})
    inputs.sort(key=lambda items: sorted(items.values(), reverse=True))
    limit = pair_limit if pair_limit is not None else default_pair_limit()
    G, _, _ = _buchberger(inputs, engine, None, limit)
    reduced = _reduced_basis(G, engine)
    unit = 0  # the packed empty monomial
    return any(g.lt == unit for g in reduced)

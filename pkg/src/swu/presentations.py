"""Ring presentations of H(BG) for G = O_n, SO_n, Spin_n and the even
Clifford group, with the verification suites built on them.

The Spin bound k(n) is 8-periodic; the Clifford bound is l(n) =
floor((n+1)/2), and they satisfy l(n) in {k(n), k(n)+1}.  Relation ideals:
Spin_n quotients by theta_0..theta_{k-1} and adjoins a free generator
v_{2^k}; the even Clifford group quotients by theta_1..theta_{l-1}
(so u_2 = theta_0 survives) and adjoins e_{2^l}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import gf2
from .algebra import (
    Bidegree,
    Polynomial,
    RingContext,
    format_poly,
    make_bo,
    make_bso,
    make_chern,
    make_bso_top,
)
from .groebner import (
    GroebnerBasis,
    HilbertSeries,
    ResourceLimitError,
    _denominator,
    groebner_basis,
    hilbert_series_of_basis,
    is_regular_sequence,
    koszul_series,
    normal_form,
    radical_member,
)
from .reports import Report
from .steenrod import rho, sq, theta
from .groebner import _series_mul, _one_minus

GROUPS = ("O", "SO", "Spin", "GammaPlus")


def bound_indices(n: int) -> tuple[int, int]:
    """(k(n), l(n)): the 8-periodic Spin bound and floor((n+1)/2)."""
    if n < 2:
        raise ValueError(f"bound indices need n >= 2, got {n}")
    block, r = divmod(n - 1, 8)  # n = 8*block + (r+1)
    k_offsets = (0, 1, 2, 2, 3, 3, 3, 3)
    k = 4 * block + k_offsets[r]
    return k, (n + 1) // 2


@dataclass(frozen=True)
class Presentation:
    """Generators, relations and freely adjoined generators over F2[tau]."""

    group: str
    n: int
    base: str
    generators: tuple[tuple[str, Bidegree], ...]
    relations: tuple[Polynomial, ...]
    adjoined: tuple[tuple[str, Bidegree], ...]

    def to_json_dict(self) -> dict:
        return {
            "group": self.group,
            "n": self.n,
            "base": self.base,
            "generators": [{"name": name, "p": d.p, "q": d.q}
                           for name, d in self.generators],
            "relations": [format_poly(r) for r in self.relations],
            "adjoined": [{"name": name, "p": d.p, "q": d.q}
                         for name, d in self.adjoined],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def present(group: str, n: int) -> Presentation:
    """The presentation of H(BG_n) for the supported groups.

    O_n and SO_n are free; Spin_n adds relations theta_0..theta_{k(n)-1} and
    a free generator v_{2^k} of bidegree (2^k, 2^(k-1)); the even Clifford
    group adds theta_1..theta_{l(n)-1} and e_{2^l} of bidegree
    (2^l, 2^(l-1)).
    """
    if group not in GROUPS:
        raise ValueError(f"unsupported group {group!r}; expected one of {GROUPS}")
    if group == "O":
        if n < 1:
            raise ValueError("O_n needs n >= 1")
        ctx = make_bo(n)
        gens = tuple((f"u{i}", variable_bidegree(ctx, f"u{i}"))
                     for i in range(1, n + 1))
        return Presentation("O", n, "F2[tau]", gens, (), ())
    if n < 2:
        raise ValueError(f"{group}_n needs n >= 2")
    ctx = make_bso(n)
    gens = tuple((f"u{i}", variable_bidegree(ctx, f"u{i}")) for i in range(2, n + 1))
    if group == "SO":
        return Presentation("SO", n, "F2[tau]", gens, (), ())
    k, l = bound_indices(n)
    if group == "Spin":
        relations = tuple(theta(n, j) for j in range(k))
        adjoined = ((f"v{1 << k}", Bidegree(1 << k, 1 << (k - 1))),)
        return Presentation("Spin", n, "F2[tau]", gens, relations, adjoined)
    relations = tuple(theta(n, j) for j in range(1, l))
    adjoined = ((f"e{1 << l}", Bidegree(1 << l, 1 << (l - 1))),)
    for r in relations:
        if not r.is_homogeneous():
            raise AssertionError("relation is not bihomogeneous")
    return Presentation("GammaPlus", n, "F2[tau]", gens, relations, adjoined)


def variable_bidegree(ctx: RingContext, name: str) -> Bidegree:
    return ctx.variables[ctx.position(name)].bidegree


# ---------------------------------------------------------------------------
# shared theta-ideal bases


_gb_cache: dict[tuple, GroebnerBasis] = {}


def theta_ideal_basis(n: int, count: int, degree_cap: int | None = None,
                      pair_limit: int | None = None) -> GroebnerBasis:
    """Groebner basis of (theta_1..theta_count) in H(BSO_n), cached; a cached
    complete basis serves any capped request."""
    full_key = (n, count, None)
    gb = _gb_cache.get(full_key)
    if gb is None and degree_cap is not None:
        gb = _gb_cache.get((n, count, degree_cap))
    if gb is not None and (gb.complete or degree_cap is not None):
        return gb
    gens = [theta(n, j) for j in range(1, count + 1)]
    gb = groebner_basis(gens, make_bso(n), degree_cap=degree_cap,
                        pair_limit=pair_limit)
    _gb_cache[(n, count, None if gb.complete else degree_cap)] = gb
    return gb


def theta_in_ideal(n: int, j: int, count: int,
                   pair_limit: int | None = None) -> bool:
    """Whether theta_j lies in (theta_1..theta_count) in H(BSO_n), decided
    by a basis capped at the degree of theta_j."""
    f = theta(n, j)
    gb = theta_ideal_basis(n, count, degree_cap=f.bidegree().p,
                           pair_limit=pair_limit)
    return normal_form(f, gb).is_zero


# ---------------------------------------------------------------------------
# verification suites


def _guarded(report: Report, check_id: str, fn) -> bool | None:
    """Run one sub-check; a resource cap marks it unresolved, never false."""
    try:
        ok, certificate = fn()
    except ResourceLimitError as exc:
        report.add_unresolved(check_id, {"reason": str(exc)})
        return None
    report.add(check_id, ok, certificate)
    return ok


def verify_theta_sequence(n: int, pair_limit: int | None = None) -> Report:
    """Regularity of theta_1..theta_{l-1}, membership of theta_l, and the
    k/l dichotomy: when l = k+1 the class theta_k stays outside its ideal."""
    if n < 3:
        raise ValueError(f"this suite needs n >= 3, got {n}")
    k, l = bound_indices(n)
    report = Report("mq1", {"n": n, "k": k, "l": l})

    def regular():
        cert = is_regular_sequence([theta(n, j) for j in range(1, l)],
                                   make_bso(n), pair_limit=pair_limit)
        return bool(cert), certificate_payload(cert)

    _guarded(report, "theta-sequence-regular", regular)
    _guarded(report, f"theta_{l}-in-ideal",
             lambda: (theta_in_ideal(n, l, l - 1, pair_limit),
                      {"ideal": f"(theta_1..theta_{l - 1})"}))
    if l == k + 1:
        _guarded(report, f"dichotomy-theta_{k}-outside",
                 lambda: (not theta_in_ideal(n, k, k - 1, pair_limit),
                          {"ideal": f"(theta_1..theta_{k - 1})",
                           "expected": "outside"}))
    else:
        _guarded(report, f"dichotomy-theta_{k}-inside",
                 lambda: (theta_in_ideal(n, k, k - 1, pair_limit),
                          {"ideal": f"(theta_1..theta_{k - 1})",
                           "expected": "inside"}))
    return report


def verify_tau_sequence(n: int, pair_limit: int | None = None) -> Report:
    """Regularity of tau, theta_1, ..., theta_{l-1} in H(BSO_n)."""
    if n < 3:
        raise ValueError(f"this suite needs n >= 3, got {n}")
    _, l = bound_indices(n)
    ctx = make_bso(n)
    report = Report("tauseq", {"n": n, "l": l})

    def regular():
        seq = [ctx.gen("tau")] + [theta(n, j) for j in range(1, l)]
        cert = is_regular_sequence(seq, ctx, pair_limit=pair_limit)
        return bool(cert), certificate_payload(cert)

    _guarded(report, "tau-theta-sequence-regular", regular)
    return report


def verify_bound_dichotomy(max_n: int = 64) -> Report:
    """l(n) in {k(n), k(n)+1} for all 2 <= n <= max_n."""
    report = Report("kcasi", {"max_n": max_n})
    bad = [n for n in range(2, max_n + 1)
           if bound_indices(n)[1] - bound_indices(n)[0] not in (0, 1)]
    report.add("l-minus-k-in-0-1", not bad, {"violations": bad})
    return report


def certificate_payload(cert) -> dict:
    num, den = cert.quotient_series.rational_form()
    enum, eden = cert.expected_series.rational_form()
    return {
        "quotient_numerator": [list(t) for t in num],
        "expected_numerator": [list(t) for t in enum],
        "denominator": [list(t) for t in den],
        "regular": cert.regular,
    }


# ---------------------------------------------------------------------------
# Chern subring


def chern_class(i: int, n: int) -> Polynomial:
    """c_i = tau^(i mod 2) u_i^2 in H(BSO_n), of bidegree (2i, i)."""
    if not 2 <= i <= n:
        raise ValueError(f"chern_class needs 2 <= i <= n, got i={i}, n={n}")
    ctx = make_bso(n)
    exponents = {f"u{i}": 2}
    if i % 2:
        exponents["tau"] = 1
    return ctx.monomial(exponents)


def express_in_chern(f: Polynomial, n: int | None = None) -> Polynomial | None:
    """Rewrite f in the c_i = tau^(i mod 2) u_i^2 generators, or None.

    A monomial qualifies exactly when every u-exponent is even and the tau
    exponent equals the sum of the odd-index half-exponents; distinct
    monomials cannot cancel over F2, so the test is monomial-wise.
    """
    ctx = f.context
    if n is None:
        n = max(v.index for v in ctx.variables if v.family == "u")
    target = make_chern(n)
    terms: set = set()
    tau_pos = ctx.position("tau")
    for mono in f.terms:
        c_mono = [0] * target.nvars
        odd_halves = 0
        for pos, e in enumerate(mono):
            if pos == tau_pos:
                continue
            v = ctx.variables[pos]
            if e == 0:
                continue
            if e % 2:
                return None
            half = e // 2
            if v.index % 2:
                odd_halves += half
            c_mono[target.position(f"c{v.index}")] = half
        if mono[tau_pos] != odd_halves:
            return None
        terms.add(tuple(c_mono))
    return Polynomial(target, frozenset(terms))


def verify_chern_relation(n: int, j: int) -> bool:
    """tau theta_j^2 equals the composite Sq^(2^j)..Sq^4 Sq^2 applied to c_2,
    and the result lies in the Chern subring."""
    if n < 2 or j < 1:
        raise ValueError("verify_chern_relation needs n >= 2 and j >= 1")
    ctx = make_bso(n)
    lhs = ctx.gen("tau") * theta(n, j).square()
    rhs = chern_class(2, n)
    for step in range(1, j + 1):
        rhs = sq(1 << step, rhs)
    if lhs != rhs:
        return False
    return express_in_chern(lhs, n) is not None


def verify_chern_suite(n: int, max_j: int | None = None) -> Report:
    """The Steenrod-composite identity for each j below min(max_j+1, l(n))."""
    _, l = bound_indices(n)
    top = l - 1 if max_j is None else min(max_j, l - 1)
    report = Report("chern", {"n": n, "max_j": top})
    for j in range(1, top + 1):
        report.add(f"tau-theta_{j}^2-is-Sq-composite-of-c2",
                   verify_chern_relation(n, j), {})
    return report


def _chern_monomials(n: int, max_p: int) -> list[Polynomial]:
    """All c-monomials of p-degree <= max_p in F2[c_2..c_n], ascending."""
    target = make_chern(n)
    degrees = [2 * v.index for v in target.variables]
    monos: list[tuple] = []

    def rec(pos: int, left: int, current: list[int]):
        if pos == len(degrees):
            monos.append(tuple(current))
            return
        max_e = left // degrees[pos]
        for e in range(max_e + 1):
            rec(pos + 1, left - e * degrees[pos], current + [e])

    rec(0, max_p, [])
    monos.sort(key=target.sort_key)
    return [Polynomial(target, frozenset({m})) for m in monos if any(m)]


def chern_to_bso(f: Polynomial, n: int) -> Polynomial:
    """Inclusion of the Chern subring: c_i -> tau^(i mod 2) u_i^2."""
    ctx = make_bso(n)
    src = f.context
    out: set = set()
    tau_pos = ctx.position("tau")
    for mono in f.terms:
        img = [0] * ctx.nvars
        for pos, e in enumerate(mono):
            if not e:
                continue
            idx = src.variables[pos].index
            img[ctx.position(f"u{idx}")] = 2 * e
            if idx % 2:
                img[tau_pos] += e
        t = tuple(img)
        if t in out:
            out.discard(t)
        else:
            out.add(t)
    return Polynomial(ctx, frozenset(out))


def pullback_ideal_generators(n: int, max_p: int,
                              pair_limit: int | None = None) -> list[Polynomial]:
    """Spanning set of the c-polynomials of p-degree <= max_p that land in
    (theta_1..theta_{l-1}) under the Chern inclusion, found degree by degree
    with F2 linear algebra against normal forms."""
    _, l = bound_indices(n)
    gb = theta_ideal_basis(n, l - 1, degree_cap=max_p, pair_limit=pair_limit)
    monos = _chern_monomials(n, max_p)
    by_bidegree: dict[tuple[int, int], list[Polynomial]] = {}
    for mono in monos:
        d = mono.bidegree()
        by_bidegree.setdefault((d.p, d.q), []).append(mono)
    gens: list[Polynomial] = []
    for _, slice_monos in sorted(by_bidegree.items()):
        images = [normal_form(chern_to_bso(m, n), gb) for m in slice_monos]
        # kernel of the span: rows indexed by slice monomials
        basis_monos: dict[tuple, int] = {}
        rows = []
        for img in images:
            bits = 0
            for t in img.terms:
                col = basis_monos.setdefault(t, len(basis_monos))
                bits |= 1 << col
            rows.append(bits)
        width = len(slice_monos)
        # transpose: solve sum_i a_i img_i = 0 over F2
        cols = len(basis_monos)
        mat = []
        for c in range(cols):
            row = 0
            for i, bits in enumerate(rows):
                if (bits >> c) & 1:
                    row |= 1 << i
            mat.append(row)
        for v in gf2.kernel_basis(mat, width):
            combo = slice_monos[0].context.zero()
            for i in range(width):
                if (v >> i) & 1:
                    combo = combo + slice_monos[i]
            if not combo.is_zero:
                gens.append(combo)
    return gens


def radical_equal_on_generators(n: int, degree_bound: int | None = None,
                                pair_limit: int | None = None) -> Report:
    """Equality of radicals in F2[c_2..c_n]: the ideal generated by the
    c-expressions of tau theta_j^2 versus the bounded-degree pullback of the
    theta ideal, checked by Rabinowitsch membership in both directions."""
    _, l = bound_indices(n)
    direct: list[Polynomial] = []
    for j in range(1, l):
        ctx = make_bso(n)
        f = ctx.gen("tau") * theta(n, j).square()
        expressed = express_in_chern(f, n)
        if expressed is None:
            raise AssertionError(f"tau theta_{j}^2 is not in the Chern subring")
        direct.append(expressed)
    if degree_bound is None:
        degree_bound = 2 * theta(n, l - 1).bidegree().p if l > 1 else 8
    scanned = pullback_ideal_generators(n, degree_bound, pair_limit)
    report = Report("radical", {"n": n, "degree_bound": degree_bound,
                                "direct": len(direct), "scanned": len(scanned)})
    target = make_chern(n)
    _guarded(report, "direct-generators-in-radical-of-pullback",
             lambda: (all(radical_member(g, scanned, target,
                                         pair_limit=pair_limit)
                          for g in direct), {}))
    _guarded(report, "pullback-generators-in-radical-of-direct",
             lambda: (all(radical_member(g, direct, target,
                                         pair_limit=pair_limit)
                          for g in scanned), {}))
    return report


# ---------------------------------------------------------------------------
# Hilbert series of presentations and the topological comparison


def presentation_hilbert(pres: Presentation,
                         truncation: tuple[int, int] = (12, 8),
                         pair_limit: int | None = None) -> HilbertSeries:
    """Series of (base ring / relations) tensored with the free adjoined
    generators; the Koszul shortcut applies once the relations are verified
    regular, otherwise the leading-term route is used."""
    ctx = make_bo(pres.n) if pres.group == "O" else make_bso(pres.n)
    extra = tuple((d.p, d.q) for _, d in pres.adjoined)
    if not pres.relations:
        series = HilbertSeries({(0, 0): 1}, _denominator(ctx, extra))
        series.expand(*truncation)
        return series
    cert = is_regular_sequence(list(pres.relations), ctx, truncation,
                               pair_limit=pair_limit)
    if cert.regular:
        num = {(0, 0): 1}
        for d in cert.sequence_bidegrees:
            num = _series_mul(num, _one_minus((d.p, d.q)))
    else:
        gb = groebner_basis(list(pres.relations), ctx, pair_limit=pair_limit)
        num = hilbert_series_of_basis(gb, truncation).numerator
    series = HilbertSeries(num, _denominator(ctx, extra))
    series.expand(*truncation)
    return series


def topological_comparison(n: int) -> bool:
    """The tau -> 1 reduction of the Clifford relations must give exactly
    rho_1..rho_{l-1}, with the adjoined generator degree 2^l on both sides."""
    if n < 3:
        raise ValueError(f"topological comparison needs n >= 3, got {n}")
    from .steenrod import t_map

    pres = present("GammaPlus", n)
    _, l = bound_indices(n)
    mapped = [t_map(r) for r in pres.relations]
    expected = [rho(n, j) for j in range(1, l)]
    if mapped != expected:
        return False
    (name, deg), = pres.adjoined
    return deg.p == 1 << l == 2 ** l and name == f"e{1 << l}"


def topological_comparison_report(n: int) -> Report:
    report = Report("topcmp", {"n": n})
    report.add("relations-map-to-rho-list", topological_comparison(n), {})
    return report


def spin_ideal_in_extended_clifford_ideal(n: int,
                                          pair_limit: int | None = None) -> bool:
    """Each theta_0..theta_{k-1} lies in (theta_1..theta_{l-1}) + (u_2)."""
    k, l = bound_indices(n)
    ctx = make_bso(n)
    gens = [theta(n, j) for j in range(1, l)] + [ctx.gen("u2")]
    cap = max((theta(n, j).bidegree().p for j in range(k)), default=2)
    gb = groebner_basis(gens, ctx, degree_cap=cap, pair_limit=pair_limit)
    return all(normal_form(theta(n, j), gb).is_zero for j in range(k))

"""Steenrod squares on characteristic-class rings.

Generators are handled by the Wu formula and products by the Cartan formula.
In motivic (bigraded) contexts Sq^m shifts bidegree by (m, floor(m/2)); the
Cartan formula picks up a tau twist on odd-odd splits, and each Wu term
carries the tau exponent forced by weight balancing.  Topological contexts
use the same recursion with tau dropped.

Also provides the iterated classes theta_j (motivic, from u_2) and rho_j
(topological, from w_2), and the comparison maps t, h, i between the motivic
and topological rings of BSO_n.

All functions are pure; per-context memo tables live on the context object
and are only mutated under the interpreter lock, so results are independent
of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    Bidegree,
    Polynomial,
    RingContext,
    make_bso,
    make_bso_top,
)


@dataclass(frozen=True)
class SteenrodOp:
    """The operation Sq^m; on bidegree (p, q) it lands in (p+m, q+floor(m/2))."""

    index: int

    def bidegree_shift(self) -> Bidegree:
        return Bidegree(self.index, self.index // 2)

    def __call__(self, f: Polynomial) -> Polynomial:
        return sq(self.index, f)


def _binom2(m: int, k: int) -> int:
    """C(m, k) mod 2 with the boundary conventions C(-1, 0) = 1 and all
    other negative-top binomials 0; non-negative cases by Lucas' theorem."""
    if k == 0:
        return 1 if m >= -1 else 0
    if m < 0 or k < 0 or k > m:
        return 0
    return int((k & (m - k)) == 0)


def _sw_positions(ctx: RingContext) -> dict[int, int]:
    """Map generator index -> roster position for the u/w family of ctx."""
    cache = ctx.steenrod_cache
    table = cache.get("sw_positions")
    if table is None:
        fams = {v.family for v in ctx.variables}
        family = "u" if "u" in fams else ("w" if "w" in fams else None)
        if family is None:
            raise ValueError(
                f"context {ctx.name} has no Stiefel-Whitney generator family")
        table = {v.index: i for i, v in enumerate(ctx.variables) if v.family == family}
        cache["sw_positions"] = table
    return table


def _tau_position(ctx: RingContext) -> int | None:
    for i, v in enumerate(ctx.variables):
        if v.family == "tau":
            return i
    return None


def sq_gen(a: int, b: int, ctx: RingContext) -> Polynomial:
    """Sq^a on the generator of index b (u_b, or w_b in topological mode).

    Wu formula: sum over t of C(b-a+t-1, t) tau^eps(a,b,t) u_{a-t} u_{b+t},
    with u_0 = 1 and absent roster indices equal to 0.  The tau exponent on
    each term is fixed by weight balancing and must land in {0, 1}.
    """
    if a < 0:
        raise ValueError("Sq index must be non-negative")
    positions = _sw_positions(ctx)
    if b not in positions:
        raise ValueError(f"context {ctx.name} has no generator of index {b}")
    if a > b:
        return ctx.zero()
    tau_pos = _tau_position(ctx)
    nv = ctx.nvars
    terms: set = set()
    for t in range(a + 1):
        if not _binom2(b - a + t - 1, t):
            continue
        lo, hi = a - t, b + t
        mono = [0] * nv
        ok = True
        for idx in (lo, hi):
            if idx == 0:
                continue
            pos = positions.get(idx)
            if pos is None:
                ok = False  # u_1 in BSO, or index beyond n: the class is 0
                break
            mono[pos] += 1
        if not ok:
            continue
        eps = (a // 2 + b // 2) - (lo // 2 + hi // 2)
        if eps not in (0, 1):
            raise ArithmeticError(
                f"weight balancing failed for Sq^{a} on index {b} (term t={t}: "
                f"tau exponent {eps} outside {{0,1}})")
        if eps and ctx.mode == "motivic":
            mono[tau_pos] += 1
        m = tuple(mono)
        if m in terms:
            terms.discard(m)
        else:
            terms.add(m)
    return Polynomial(ctx, frozenset(terms))


def _sq_gen_terms(ctx: RingContext, a: int, pos: int) -> frozenset:
    """Memoized term set of Sq^a applied to the roster variable at pos."""
    cache = ctx.steenrod_cache.setdefault("sq_gen", {})
    key = (a, pos)
    val = cache.get(key)
    if val is None:
        b = ctx.variables[pos].index
        val = sq_gen(a, b, ctx).terms
        cache[key] = val
    return val


def _sq_mono(ctx: RingContext, mono: tuple, m: int) -> frozenset:
    """Sq^m on a single tau-free monomial, by the Cartan formula.

    The monomial is split off one generator at a time; the split Sq^i x Sq^j
    carries tau^((i mod 2)(j mod 2)) in motivic mode.
    """
    cache = ctx.steenrod_cache.setdefault("sq_mono", {})
    key = (mono, m)
    val = cache.get(key)
    if val is not None:
        return val
    if m == 0:
        val = frozenset({mono})
        cache[key] = val
        return val
    head = next((i for i, e in enumerate(mono) if e), None)
    if head is None:  # Sq^m(1) = 0 for m > 0
        val = frozenset()
        cache[key] = val
        return val
    if ctx.variables[head].family not in ("u", "w"):
        raise ValueError(
            f"Steenrod action is defined only on Stiefel-Whitney generators, "
            f"not on {ctx.variables[head].name}")
    rest = tuple(e - 1 if i == head else e for i, e in enumerate(mono))
    tau_pos = _tau_position(ctx)
    motivic = ctx.mode == "motivic"
    acc: set = set()
    for i in range(m + 1):
        left = _sq_gen_terms(ctx, i, head)
        if not left:
            continue
        right = _sq_mono(ctx, rest, m - i)
        if not right:
            continue
        twist = 1 if motivic and (i & 1) and ((m - i) & 1) else 0
        for t1 in left:
            for t2 in right:
                prod = tuple(a + b for a, b in zip(t1, t2))
                if twist:
                    prod = tuple(e + 1 if k == tau_pos else e
                                 for k, e in enumerate(prod))
                if prod in acc:
                    acc.discard(prod)
                else:
                    acc.add(prod)
    val = frozenset(acc)
    cache[key] = val
    return val


def sq(m: int, f: Polynomial) -> Polynomial:
    """Sq^m on a polynomial, termwise; Sq^0 is the identity and Sq^m tau = 0
    for m > 0, so tau powers pass through untouched."""
    if m < 0:
        raise ValueError("Sq index must be non-negative")
    if m == 0 or f.is_zero:
        return f
    ctx = f.context
    tau_pos = _tau_position(ctx)
    acc: set = set()
    for mono in f.terms:
        if tau_pos is not None and mono[tau_pos]:
            e_tau = mono[tau_pos]
            base = tuple(0 if i == tau_pos else e for i, e in enumerate(mono))
        else:
            e_tau = 0
            base = mono
        for t in _sq_mono(ctx, base, m):
            if e_tau:
                t = tuple(e + e_tau if i == tau_pos else e for i, e in enumerate(t))
            if t in acc:
                acc.discard(t)
            else:
                acc.add(t)
    result = Polynomial(ctx, frozenset(acc))
    deg = f.bidegree()
    if isinstance(deg, Bidegree) and not result.is_zero:
        shift = Bidegree(m, m // 2 if ctx.mode == "motivic" else 0)
        expected = deg + shift
        got = result.bidegree()
        if got != expected:
            raise ArithmeticError(
                f"Sq^{m} violated the bidegree shift: got {got}, expected {expected}")
    return result


_theta_cache: dict[tuple[int, int], Polynomial] = {}
_rho_cache: dict[tuple[int, int], Polynomial] = {}


def theta(n: int, j: int) -> Polynomial:
    """theta_j in H(BSO_n): theta_0 = u_2 and theta_j = Sq^(2^(j-1)) theta_(j-1),
    homogeneous of bidegree (2^j + 1, 2^(j-1)) for j >= 1."""
    if n < 2:
        raise ValueError(f"theta needs n >= 2, got {n}")
    if j < 0:
        raise ValueError(f"theta needs j >= 0, got {j}")
    key = (n, j)
    val = _theta_cache.get(key)
    if val is None:
        ctx = make_bso(n)
        if j == 0:
            val = ctx.gen("u2")
        else:
            val = sq(1 << (j - 1), theta(n, j - 1))
            expected = Bidegree((1 << j) + 1, 1 << (j - 1))
            if not val.is_zero and val.bidegree() != expected:
                raise ArithmeticError(
                    f"theta_{j} in BSO_{n} has bidegree {val.bidegree()}, "
                    f"expected {expected}")
        _theta_cache[key] = val
    return val


def rho(n: int, j: int) -> Polynomial:
    """rho_j in the topological F2[w_2..w_n]: the same recursion from w_2."""
    if n < 2:
        raise ValueError(f"rho needs n >= 2, got {n}")
    if j < 0:
        raise ValueError(f"rho needs j >= 0, got {j}")
    key = (n, j)
    val = _rho_cache.get(key)
    if val is None:
        ctx = make_bso_top(n)
        if j == 0:
            val = ctx.gen("w2")
        else:
            val = sq(1 << (j - 1), rho(n, j - 1))
        _rho_cache[key] = val
    return val


# ---------------------------------------------------------------------------
# comparison maps between the motivic and topological rings of BSO_n


def _bso_rank(ctx: RingContext) -> int:
    return max(v.index for v in ctx.variables if v.family in ("u", "w"))


def t_map(f: Polynomial) -> Polynomial:
    """Ring map H(BSO_n) -> F2[w_2..w_n]: tau -> 1 and u_i -> w_i."""
    ctx = f.context
    if ctx.mode != "motivic":
        raise ValueError("t is defined on the motivic ring of BSO_n")
    top = make_bso_top(_bso_rank(ctx))
    positions = {top.position(f"w{v.index}"): ctx.position(v.name)
                 for v in ctx.variables if v.family == "u"}
    acc: set = set()
    for mono in f.terms:
        img = tuple(mono[positions[i]] for i in range(top.nvars))
        if img in acc:
            acc.discard(img)
        else:
            acc.add(img)
    return Polynomial(top, frozenset(acc))


def i_map(x: Polynomial) -> Polynomial:
    """Ring map F2[w_2..w_n] -> H(BSO_n): w_i -> u_i."""
    top = x.context
    if top.mode != "topological":
        raise ValueError("i is defined on the topological ring of BSO_n")
    ctx = make_bso(_bso_rank(top))
    positions = {ctx.position(f"u{v.index}"): top.position(v.name)
                 for v in top.variables}
    acc: set = set()
    for mono in x.terms:
        img = tuple(0 if i not in positions else mono[positions[i]]
                    for i in range(ctx.nvars))
        if img in acc:
            acc.discard(img)
        else:
            acc.add(img)
    return Polynomial(ctx, frozenset(acc))


def h_map(x: Polynomial) -> Polynomial:
    """Linear (not multiplicative) map F2[w_2..w_n] -> H(BSO_n): a monomial
    goes to tau^(floor(p/2) - q) times its i-image of bidegree (p, q)."""
    top = x.context
    if top.mode != "topological":
        raise ValueError("h is defined on the topological ring of BSO_n")
    ctx = make_bso(_bso_rank(top))
    tau_pos = _tau_position(ctx)
    positions = {ctx.position(f"u{v.index}"): top.position(v.name)
                 for v in top.variables}
    acc: set = set()
    for mono in x.terms:
        img = [0] * ctx.nvars
        for i, src in positions.items():
            img[i] = mono[src]
        deg = ctx.mono_bidegree(tuple(img))
        exp = deg.p // 2 - deg.q
        if exp < 0:
            raise ArithmeticError(
                f"h-map exponent is negative on {top.format_monomial(mono)}")
        img[tau_pos] = exp
        t = tuple(img)
        if t in acc:
            acc.discard(t)
        else:
            acc.add(t)
    return Polynomial(ctx, frozenset(acc))

"""Sparse bigraded polynomial arithmetic over F2 in named variable contexts.

A monomial is a dense tuple of exponents indexed by the roster order of the
owning :class:`RingContext`; a polynomial is the set of its monomials
(presence = coefficient 1 over F2), so addition is symmetric difference and
squaring doubles exponents.  All values are immutable after construction and
can be shared freely between concurrent tasks.

Grading conventions: the bidegree (p, q) pairs the cohomological degree p
with the weight q.  Motivic-mode contexts are bigraded; topological-mode
contexts carry the single grading p (every variable has q = 0 and tau is
absent).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache


class _DegreeMarker:
    """Distinguished non-Bidegree results of :meth:`Polynomial.bidegree`."""

    __slots__ = ("_label",)

    def __init__(self, label: str):
        self._label = label

    def __repr__(self) -> str:
        return self._label


#: bidegree of the zero polynomial (uniform under any grading)
ANY_DEGREE = _DegreeMarker("AnyDegree")
#: marker for polynomials whose monomials do not share a single bidegree
NON_HOMOGENEOUS = _DegreeMarker("NonHomogeneous")


@dataclass(frozen=True, order=True)
class Bidegree:
    """Pair (p, q): cohomological degree and weight, additive under products."""

    p: int
    q: int

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.p + other.p, self.q + other.q)

    def scaled(self, k: int) -> "Bidegree":
        return Bidegree(k * self.p, k * self.q)

    @property
    def total(self) -> int:
        return self.p + self.q


_FAMILIES = ("tau", "u", "w", "x", "y", "c", "adjoined")


@dataclass(frozen=True)
class Variable:
    """A named ring generator with its family, index and bidegree."""

    family: str
    index: int | None
    bidegree: Bidegree
    name: str


def variable(family: str, index: int | None = None, bidegree: Bidegree | None = None,
             name: str | None = None, topological: bool = False) -> Variable:
    """Build a variable with the conventional bidegree of its family.

    u_i carries (i, floor(i/2)) motivically and (i, 0) in topological mode;
    w_i is (i, 0); x_i is (1, 0); y_i is (2, 1); c_i is (2i, i); tau is (0, 1).
    Adjoined variables must state both name and bidegree explicitly.
    """
    if family not in _FAMILIES:
        raise ValueError(f"unknown variable family {family!r}")
    if family == "tau":
        return Variable("tau", None, Bidegree(0, 1), "tau")
    if family == "adjoined":
        if name is None or bidegree is None:
            raise ValueError("adjoined variables need an explicit name and bidegree")
        return Variable("adjoined", index, bidegree, name)
    if index is None or index < 0:
        raise ValueError(f"family {family!r} needs a non-negative index")
    if bidegree is None:
        if family == "u":
            bidegree = Bidegree(index, 0 if topological else index // 2)
        elif family == "w":
            bidegree = Bidegree(index, 0)
        elif family == "x":
            bidegree = Bidegree(1, 0)
        elif family == "y":
            bidegree = Bidegree(2, 1)
        elif family == "c":
            bidegree = Bidegree(2 * index, index)
    return Variable(family, index, bidegree, f"{family}{index}")


class RingContext:
    """Ordered variable roster plus grading mode; monomials index into it.

    Equality is structural (mode and variables); the name is a display label.
    The tie-break roster used by the monomial order is the declared roster
    with tau moved last, so tau-free leading terms are preferred.
    """

    __slots__ = ("name", "mode", "variables", "_pos", "_pw", "_qw", "_tie",
                 "_sig", "_key_cache", "steenrod_cache")

    def __init__(self, name: str, mode: str, variables: tuple[Variable, ...]):
        if mode not in ("motivic", "topological"):
            raise ValueError(f"unknown grading mode {mode!r}")
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if mode == "topological":
            if any(v.family == "tau" for v in variables):
                raise ValueError("tau is not allowed in a topological context")
            if any(v.bidegree.q for v in variables):
                raise ValueError("topological variables carry a single grading (q = 0)")
        for v in variables:
            if v.bidegree.p < 0 or v.bidegree.q < 0:
                raise ValueError(f"variable {v.name} has a negative bidegree component")
        self.name = name
        self.mode = mode
        self.variables = tuple(variables)
        self._pos = {v.name: i for i, v in enumerate(variables)}
        self._pw = tuple(v.bidegree.p for v in variables)
        self._qw = tuple(v.bidegree.q for v in variables)
        tie = [i for i, v in enumerate(variables) if v.family != "tau"]
        tie += [i for i, v in enumerate(variables) if v.family == "tau"]
        self._tie = tuple(tie)
        self._sig = (mode, tuple((v.family, v.index, v.bidegree.p, v.bidegree.q, v.name)
                                 for v in variables))
        self._key_cache: dict[tuple, tuple] = {}
        self.steenrod_cache: dict = {}

    # -- identity ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, RingContext) and self._sig == other._sig

    def __hash__(self) -> int:
        return hash(self._sig)

    def __repr__(self) -> str:
        return f"RingContext({self.name!r}, {self.mode}, {len(self.variables)} vars)"

    # -- roster helpers ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def position(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} for context {self.name}") from None

    def has_variable(self, name: str) -> bool:
        return name in self._pos

    def tie_positions(self) -> tuple[int, ...]:
        return self._tie

    # -- monomial helpers --------------------------------------------------
    def unit_monomial(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    def mono_mul(self, m1: tuple, m2: tuple) -> tuple:
        return tuple(a + b for a, b in zip(m1, m2))

    def mono_bidegree(self, mono: tuple) -> Bidegree:
        p = sum(e * w for e, w in zip(mono, self._pw))
        q = sum(e * w for e, w in zip(mono, self._qw))
        return Bidegree(p, q)

    def sort_key(self, mono: tuple) -> tuple:
        """Monomial-order key: ascending tuple order = ascending monomial order.

        Primary: p-degree; secondary: weight q; tie-break: reverse
        lexicographic over the roster with tau last (rightmost smaller
        exponent wins), encoded as negated exponents scanned tau-first.
        """
        key = self._key_cache.get(mono)
        if key is None:
            p = sum(e * w for e, w in zip(mono, self._pw))
            q = sum(e * w for e, w in zip(mono, self._qw))
            key = (p, q) + tuple(-mono[i] for i in reversed(self._tie))
            self._key_cache[mono] = key
        return key

    def format_monomial(self, mono: tuple) -> str:
        parts = []
        for v, e in zip(self.variables, mono):
            if e == 1:
                parts.append(v.name)
            elif e > 1:
                parts.append(f"{v.name}^{e}")
        return "*".join(parts) if parts else "1"

    # -- element constructors ------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, frozenset())

    def one(self) -> "Polynomial":
        return Polynomial(self, frozenset({self.unit_monomial()}))

    def gen(self, name: str) -> "Polynomial":
        i = self.position(name)
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, frozenset({mono}))

    def gens(self) -> dict[str, "Polynomial"]:
        return {v.name: self.gen(v.name) for v in self.variables}

    def monomial(self, exponents: dict[str, int]) -> "Polynomial":
        mono = [0] * self.nvars
        for name, e in exponents.items():
            if e < 0:
                raise ValueError("negative exponent")
            mono[self.position(name)] = e
        return Polynomial(self, frozenset({tuple(mono)}))

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)


@dataclass(frozen=True)
class Polynomial:
    """F2 polynomial: frozenset of exponent tuples in a fixed context."""

    context: RingContext
    terms: frozenset

    def _check_context(self, other: "Polynomial") -> None:
        if self.context != other.context:
            raise ValueError(
                f"mismatched contexts: {self.context.name} vs {other.context.name}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_context(other)
        return Polynomial(self.context, self.terms.symmetric_difference(other.terms))

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_context(other)
        if not self.terms or not other.terms:
            return self.context.zero()
        acc: set = set()
        small, large = sorted((self.terms, other.terms), key=len)
        for m1 in small:
            for m2 in large:
                m = tuple(a + b for a, b in zip(m1, m2))
                if m in acc:
                    acc.discard(m)
                else:
                    acc.add(m)
        return Polynomial(self.context, frozenset(acc))

    def square(self) -> "Polynomial":
        # Frobenius: char 2, so cross terms cancel and exponents double.
        return Polynomial(self.context,
                          frozenset(tuple(2 * e for e in m) for m in self.terms))

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power")
        result = self.context.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base.square()
            e >>= 1
        return result

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def bidegree(self):
        """Common bidegree of all terms, NON_HOMOGENEOUS, or ANY_DEGREE for 0."""
        if not self.terms:
            return ANY_DEGREE
        it = iter(self.terms)
        deg = self.context.mono_bidegree(next(it))
        for m in it:
            if self.context.mono_bidegree(m) != deg:
                return NON_HOMOGENEOUS
        return deg

    def is_homogeneous(self) -> bool:
        return self.bidegree() is not NON_HOMOGENEOUS

    def sorted_terms(self) -> list[tuple]:
        """Terms in descending monomial order (leading monomial first)."""
        return sorted(self.terms, key=self.context.sort_key, reverse=True)

    def leading_monomial(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.context.sort_key)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"<{self.context.name}: {format_poly(self)}>"


def bidegree_of(f: Polynomial):
    return f.bidegree()


# ---------------------------------------------------------------------------
# ring maps


@dataclass(frozen=True)
class RingMap:
    """Ring homomorphism determined by generator images.

    Degree discipline: nonzero images must be homogeneous; p is always
    preserved, and q as well when both contexts are motivic.
    """

    domain: RingContext
    codomain: RingContext
    images: tuple[Polynomial, ...]

    def image_of(self, name: str) -> Polynomial:
        return self.images[self.domain.position(name)]

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_ring_map(self, f)


def ring_map(domain: RingContext, codomain: RingContext,
             images: dict[str, "Polynomial | str"]) -> RingMap:
    """Validate and build a RingMap; string images are parsed in the codomain."""
    vec = []
    both_motivic = domain.mode == "motivic" and codomain.mode == "motivic"
    for v in domain.variables:
        if v.name not in images:
            raise ValueError(f"no image given for variable {v.name}")
        img = images[v.name]
        if isinstance(img, str):
            img = parse_poly(img, codomain)
        if img.context != codomain:
            raise ValueError(f"image of {v.name} lies outside the codomain")
        if not img.is_zero:
            deg = img.bidegree()
            if deg is NON_HOMOGENEOUS:
                raise ValueError(f"image of {v.name} is not homogeneous")
            if deg.p != v.bidegree.p:
                raise ValueError(
                    f"image of {v.name} has degree p={deg.p}, expected {v.bidegree.p}")
            if both_motivic and deg.q != v.bidegree.q:
                raise ValueError(
                    f"image of {v.name} has weight q={deg.q}, expected {v.bidegree.q}")
        vec.append(img)
    extra = set(images) - {v.name for v in domain.variables}
    if extra:
        raise ValueError(f"images given for unknown variables: {sorted(extra)}")
    return RingMap(domain, codomain, tuple(vec))


def apply_ring_map(m: RingMap, f: Polynomial) -> Polynomial:
    """Substitute generator images and reduce mod 2."""
    if f.context != m.domain:
        raise ValueError(f"polynomial lies outside the domain of the map")
    acc: set = set()
    power_cache: dict[tuple[int, int], Polynomial] = {}
    for mono in f.terms:
        prod = m.codomain.one()
        for pos, e in enumerate(mono):
            if e == 0:
                continue
            key = (pos, e)
            power = power_cache.get(key)
            if power is None:
                power = m.images[pos] ** e
                power_cache[key] = power
            prod = prod * power
            if prod.is_zero:
                break
        for t in prod.terms:
            if t in acc:
                acc.discard(t)
            else:
                acc.add(t)
    return Polynomial(m.codomain, frozenset(acc))


# ---------------------------------------------------------------------------
# parsing and formatting


class PolyParseError(ValueError):
    """Syntax or lookup error while parsing a polynomial, with position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(tau|[uwxycev][0-9]+)|([0-9]+)|([*+^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            bad_at = len(text) - len(rest)
            raise PolyParseError(f"unexpected character {rest[0]!r}", bad_at)
        if m.group(1):
            tokens.append(("var", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("nat", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return tokens


def parse_poly(text: str, ctx: RingContext) -> Polynomial:
    """Parse poly := term ('+' term)*; term := factor ('*' factor)*;
    factor := var ('^' nat)? with var in the context roster.  The literals
    "0" and "1" are accepted as factors (empty sum / empty monomial)."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial text", 0)
    i = 0
    n = len(tokens)
    terms: set = set()

    def expect_factor():
        nonlocal i
        kind, value, at = tokens[i]
        if kind == "nat":
            if value not in ("0", "1"):
                raise PolyParseError(f"numeric literal {value} is not 0 or 1", at)
            i += 1
            return None if value == "1" else "zero"
        if kind != "var":
            raise PolyParseError(f"expected a variable, found {value!r}", at)
        if not ctx.has_variable(value):
            raise PolyParseError(
                f"unknown variable {value!r} for context {ctx.name}", at)
        pos = ctx.position(value)
        i += 1
        exp = 1
        if i < n and tokens[i][:2] == ("op", "^"):
            i += 1
            if i >= n or tokens[i][0] != "nat":
                at2 = tokens[i][2] if i < n else len(text)
                raise PolyParseError("expected an exponent after '^'", at2)
            exp = int(tokens[i][1])
            i += 1
        return (pos, exp)

    while True:
        mono = [0] * ctx.nvars
        zero_term = False
        while True:
            fac = expect_factor()
            if fac == "zero":
                zero_term = True
            elif fac is not None:
                mono[fac[0]] += fac[1]
            if i < n and tokens[i][:2] == ("op", "*"):
                i += 1
                continue
            break
        if not zero_term:
            t = tuple(mono)
            if t in terms:
                terms.discard(t)
            else:
                terms.add(t)
        if i < n and tokens[i][:2] == ("op", "+"):
            i += 1
            continue
        break
    if i < n:
        raise PolyParseError(f"unexpected token {tokens[i][1]!r}", tokens[i][2])
    return Polynomial(ctx, frozenset(terms))


def format_poly(f: Polynomial) -> str:
    """Canonical text: monomials in descending monomial order, variables in
    roster order inside each monomial; zero polynomial prints as "0"."""
    if not f.terms:
        return "0"
    return " + ".join(f.context.format_monomial(m) for m in f.sorted_terms())


# ---------------------------------------------------------------------------
# context factories


@lru_cache(maxsize=None)
def make_bo(n: int) -> RingContext:
    """H(BO_n) = F2[tau][u_1..u_n], bigraded."""
    if n < 1:
        raise ValueError(f"BO_n needs n >= 1, got {n}")
    vs = (variable("tau"),) + tuple(variable("u", i) for i in range(1, n + 1))
    return RingContext(f"BO_{n}", "motivic", vs)


@lru_cache(maxsize=None)
def make_bso(n: int) -> RingContext:
    """H(BSO_n) = F2[tau][u_2..u_n], bigraded."""
    if n < 2:
        raise ValueError(f"BSO_n needs n >= 2, got {n}")
    vs = (variable("tau"),) + tuple(variable("u", i) for i in range(2, n + 1))
    return RingContext(f"BSO_{n}", "motivic", vs)


@lru_cache(maxsize=None)
def make_bso_top(n: int) -> RingContext:
    """Singular cohomology of BSO_n: F2[w_2..w_n], single-graded."""
    if n < 2:
        raise ValueError(f"topological BSO_n needs n >= 2, got {n}")
    vs = tuple(variable("w", i) for i in range(2, n + 1))
    return RingContext(f"BSO_top_{n}", "topological", vs)


@lru_cache(maxsize=None)
def make_sym(n: int) -> RingContext:
    """S_n = F2[u_1..u_n] with the single grading deg u_i = i."""
    if n < 1:
        raise ValueError(f"S_n needs n >= 1, got {n}")
    vs = tuple(variable("u", i, topological=True) for i in range(1, n + 1))
    return RingContext(f"S_{n}", "topological", vs)


@lru_cache(maxsize=None)
def make_split(n: int) -> RingContext:
    """R_n: F2[x_1,y_1,..,x_m,y_m] for n=2m, plus x_{m+1} for n=2m+1.

    Roster order is y_1..y_m then x_1..x_{m(+1)}: with the x's cheapest in
    the tie-break, the twisted bilinear ideals keep small Groebner bases.
    """
    if n < 2:
        raise ValueError(f"R_n needs n >= 2, got {n}")
    m = n // 2
    vs = [variable("y", i) for i in range(1, m + 1)]
    vs += [variable("x", i) for i in range(1, m + 1)]
    if n % 2:
        vs.append(variable("x", m + 1))
    return RingContext(f"R_{n}", "motivic", tuple(vs))


@lru_cache(maxsize=None)
def make_chern(n: int) -> RingContext:
    """Chern subring presentation ring F2[c_2..c_n], c_i in bidegree (2i, i)."""
    if n < 2:
        raise ValueError(f"Chern ring needs n >= 2, got {n}")
    vs = tuple(variable("c", i) for i in range(2, n + 1))
    return RingContext(f"Chern_{n}", "motivic", vs)


_RING_SPEC = re.compile(r"^\s*([A-Za-z-]+)\s*,\s*n\s*=\s*([0-9]+)\s*$")

_FAMILY_FACTORIES = {
    "BO": make_bo,
    "BSO": make_bso,
    "BSO-TOP": make_bso_top,
    "S": make_sym,
    "R": make_split,
    "CHERN": make_chern,
}


def make_ring(spec: str) -> RingContext:
    """Build a context from a description like "BSO, n=4" or "R, n=5".

    Supported families: BO, BSO, BSO-top, S, R, Chern.
    """
    m = _RING_SPEC.match(spec)
    if m is None:
        raise ValueError(f"cannot parse ring description {spec!r}")
    family = m.group(1).upper()
    n = int(m.group(2))
    factory = _FAMILY_FACTORIES.get(family)
    if factory is None:
        raise ValueError(f"unsupported ring family {m.group(1)!r}")
    return factory(n)


def custom_context(name: str, mode: str, variables: tuple[Variable, ...]) -> RingContext:
    return RingContext(name, mode, variables)


def inclusion_map(small: RingContext, big: RingContext) -> RingMap:
    """Variable-wise inclusion of a smaller roster into a larger one."""
    return ring_map(small, big, {v.name: big.gen(v.name) for v in small.variables})


def truncation_map(big: RingContext, small: RingContext) -> RingMap:
    """Send roster variables to themselves when present, else to 0."""
    images = {}
    for v in big.variables:
        images[v.name] = small.gen(v.name) if small.has_variable(v.name) else small.zero()
    return ring_map(big, small, images)

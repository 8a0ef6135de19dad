"""Exact piecewise-affine self-maps of a rational interval.

Every coordinate, slope, and intercept is a `fractions.Fraction`, so
evaluation, lateral limits, preimages, composition, and powers are all exact.
A map is stored as an ordered list of open affine pieces abutting at interior
breakpoints.  Special points (jumps and turns) are computed semantically from
lateral limits and monotone directions, never read off the stored breakpoint
list: a breakpoint whose sides agree in value and direction is representation
noise.  Collinear neighbours are merged on construction, so two maps that
agree as functions have identical piece lists.

The map value at a jump is left undefined (`value` returns None there); at a
turn or a removable breakpoint it is the common lateral limit, and the
endpoint values are the inward limits.
"""

from __future__ import annotations

import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence, Union

Side = Literal["minus", "plus"]
MINUS: Side = "minus"
PLUS: Side = "plus"

RationalLike = Union[Fraction, int, str]

# Default guards; callers may override per operation.
MAX_PIECES = 10**6
MAX_POWER = 12


class PwdynError(Exception):
    """Base class for all errors raised by this package."""


class MapSyntaxError(PwdynError):
    """Malformed map text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MapInvariantError(PwdynError):
    """A structural invariant of a map (or of an exact operation) failed."""


class PieceLimitError(PwdynError):
    """A composition grew past the configured piece-count guard."""


class PowerLimitError(PwdynError):
    """A power exceeded the configured maximum."""


_RATIONAL_RE = re.compile(r"-?\d+(?:/\d+)?")


def parse_rational(token: str, *, line: int = 0, column: int = 0) -> Fraction:
    """Parse `p`, `-p`, or `p/q` (q > 0) into an exact Fraction."""
    if not _RATIONAL_RE.fullmatch(token):
        raise MapSyntaxError(f"invalid rational {token!r}", line, column)
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise MapSyntaxError("zero denominator", line, column)
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def format_rational(q: Fraction) -> str:
    return str(q)


def as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def opposite(side: Side) -> Side:
    return MINUS if side == PLUS else PLUS


@dataclass(frozen=True)
class AffinePiece:
    """One open affine branch (left, right) -> slope*x + intercept."""

    left: Fraction
    right: Fraction
    slope: Fraction
    intercept: Fraction

    def value_at(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def image(self) -> tuple[Fraction, Fraction]:
        """Closure of the image, as an ordered pair."""
        v1 = self.value_at(self.left)
        v2 = self.value_at(self.right)
        return (v1, v2) if v1 <= v2 else (v2, v1)

    def solve(self, y: Fraction) -> Fraction:
        return (y - self.intercept) / self.slope


@dataclass(frozen=True)
class SpecialPoints:
    """Semantic special points: jumps (discontinuities) and turns."""

    points: tuple[Fraction, ...]
    turning: tuple[Fraction, ...]
    discontinuities: tuple[Fraction, ...]


class PiecewiseMap:
    """An exact piecewise-affine self-map of [a, b].

    Instances are immutable after construction and safe to share; the private
    attributes only cache derived data.
    """

    __slots__ = ("a", "b", "pieces", "_lefts", "_special", "_powers", "_cache")

    def __init__(self, a: RationalLike, b: RationalLike,
                 pieces: Iterable[AffinePiece], *, merge: bool = True):
        a = as_fraction(a)
        b = as_fraction(b)
        plist = [AffinePiece(as_fraction(p.left), as_fraction(p.right),
                             as_fraction(p.slope), as_fraction(p.intercept))
                 for p in pieces]
        if a >= b:
            raise MapInvariantError(f"empty interval: {a} >= {b}")
        if not plist:
            raise MapInvariantError("map needs at least one piece")
        if merge:
            plist = _merge_collinear(plist)
        _validate(a, b, plist)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "pieces", tuple(plist))
        object.__setattr__(self, "_lefts", [p.left for p in plist])
        object.__setattr__(self, "_special", None)
        object.__setattr__(self, "_powers", {})
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("PiecewiseMap is immutable")

    def __eq__(self, other):
        return (isinstance(other, PiecewiseMap)
                and self.a == other.a and self.b == other.b
                and self.pieces == other.pieces)

    def __hash__(self):
        return hash((self.a, self.b, self.pieces))

    def __repr__(self):
        return f"PiecewiseMap([{self.a}, {self.b}], {len(self.pieces)} pieces)"

    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        """Interior representation breakpoints, in increasing order."""
        return tuple(p.left for p in self.pieces[1:])

    # -- lookup ------------------------------------------------------------

    def piece_right_of(self, p: Fraction) -> AffinePiece:
        """The piece covering (p, p + eps).  Requires p < b."""
        if not self.a <= p < self.b:
            raise ValueError(f"no right-hand branch at {p}")
        return self.pieces[bisect_right(self._lefts, p) - 1]

    def piece_left_of(self, p: Fraction) -> AffinePiece:
        """The piece covering (p - eps, p).  Requires p > a."""
        if not self.a < p <= self.b:
            raise ValueError(f"no left-hand branch at {p}")
        return self.pieces[bisect_left(self._lefts, p) - 1]

    # -- core operations ----------------------------------------------------

    def lateral(self, p: RationalLike, side: Side) -> Fraction:
        """Exact one-sided limit at p from the given side."""
        p = as_fraction(p)
        if side == PLUS:
            return self.piece_right_of(p).value_at(p)
        return self.piece_left_of(p).value_at(p)

    def value(self, x: RationalLike) -> Optional[Fraction]:
        """Map value at x, or None at a discontinuity point.

        At a breakpoint with matching lateral limits (turn or removable
        break) the common limit is returned; the endpoints take the inward
        limits.
        """
        x = as_fraction(x)
        if x < self.a or x > self.b:
            raise ValueError(f"{x} outside [{self.a}, {self.b}]")
        if x == self.a:
            return self.pieces[0].value_at(x)
        if x == self.b:
            return self.pieces[-1].value_at(x)
        i = bisect_right(self._lefts, x) - 1
        piece = self.pieces[i]
        if x > piece.left:
            return piece.value_at(x)
        # x is an interior breakpoint shared by pieces[i-1] and pieces[i].
        v_left = self.pieces[i - 1].value_at(x)
        v_right = piece.value_at(x)
        return v_left if v_left == v_right else None

    def special_points(self) -> SpecialPoints:
        """Jumps and turns, derived from lateral limits (cached)."""
        if self._special is None:
            turning = []
            jumps = []
            for prev, nxt in zip(self.pieces, self.pieces[1:]):
                w = prev.right
                if prev.value_at(w) != nxt.value_at(w):
                    jumps.append(w)
                elif (prev.slope > 0) != (nxt.slope > 0):
                    turning.append(w)
            special = SpecialPoints(tuple(sorted(turning + jumps)),
                                    tuple(turning), tuple(jumps))
            object.__setattr__(self, "_special", special)
        return self._special

    def preimage(self, y: RationalLike) -> tuple[Fraction, ...]:
        """All x in [a, b] with a defined value equal to y, sorted.

        Points where the map is undefined (jumps) are never included.
        """
        y = as_fraction(y)
        found = set()
        for piece in self.pieces:
            x = piece.solve(y)
            if piece.left < x < piece.right:
                found.add(x)
        for w in (self.a, self.b, *self.breakpoints):
            if self.value(w) == y:
                found.add(w)
        return tuple(sorted(found))

    def power(self, n: int, *, max_power: int = MAX_POWER,
              guard: int = MAX_PIECES, check: bool = True) -> "PiecewiseMap":
        """Exact n-th iterate, built by repeated composition (cached)."""
        if n < 1:
            raise ValueError("power requires n >= 1")
        if n > max_power:
            raise PowerLimitError(f"power {n} exceeds limit {max_power}")
        if n == 1:
            return self
        current = self
        for k in range(2, n + 1):
            if k in self._powers:
                current = self._powers[k]
                continue
            current = compose(self, current, guard=guard, check=check)
            if check:
                allowed = set(self.special_preimage_set(k))
                got = set(current.special_points().points)
                if not got <= allowed:
                    raise MapInvariantError(
                        "special points of a power escaped the iterated "
                        f"preimage set at n={k}")
            self._powers[k] = current
        return current

    def special_preimage_set(self, n: int) -> tuple[Fraction, ...]:
        """Points whose first n-1 iterates (or the point itself) hit a
        special point: the union of iterated preimages of the special set."""
        if n < 1:
            raise ValueError("requires n >= 1")
        key = ("msets", n)
        if key not in self._cache:
            level = set(self.special_points().points)
            acc = set(level)
            for _ in range(n - 1):
                level = {x for y in level for x in self.preimage(y)}
                acc |= level
            self._cache[key] = tuple(sorted(acc))
        return self._cache[key]

    def to_text(self) -> str:
        lines = [f"interval {self.a} {self.b}"]
        for p in self.pieces:
            lines.append(f"piece {p.left} {p.right} : "
                         f"slope {p.slope} intercept {p.intercept}")
        return "\n".join(lines) + "\n"


def _merge_collinear(pieces: list[AffinePiece]) -> list[AffinePiece]:
    merged: list[AffinePiece] = []
    for piece in pieces:
        if (merged and merged[-1].slope == piece.slope
                and merged[-1].intercept == piece.intercept
                and merged[-1].right == piece.left):
            merged[-1] = AffinePiece(merged[-1].left, piece.right,
                                     piece.slope, piece.intercept)
        else:
            merged.append(piece)
    return merged


def _validate(a: Fraction, b: Fraction, pieces: Sequence[AffinePiece]) -> None:
    if pieces[0].left != a or pieces[-1].right != b:
        raise MapInvariantError("pieces do not cover the interval")
    for piece in pieces:
        if piece.left >= piece.right:
            raise MapInvariantError(f"empty piece ({piece.left}, {piece.right})")
        if piece.slope == 0:
            raise MapInvariantError(f"zero slope on ({piece.left}, {piece.right})")
        lo, hi = piece.image()
        if lo < a or hi > b:
            raise MapInvariantError(
                f"image of ({piece.left}, {piece.right}) escapes [{a}, {b}]")
    for prev, nxt in zip(pieces, pieces[1:]):
        if prev.right != nxt.left:
            raise MapInvariantError(
                f"pieces do not abut at {prev.right} vs {nxt.left}")


# -- map file format --------------------------------------------------------

def parse_map(text: str) -> PiecewiseMap:
    """Parse the line-oriented map format.

    Format: optional '#' comments; a header `interval <rat> <rat>`; then one
    `piece <rat> <rat> : slope <rat> intercept <rat>` line per piece, listed
    left to right.
    """
    header: Optional[tuple[Fraction, Fraction]] = None
    pieces: list[AffinePiece] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = line.split()
        col = lambda tok: raw.index(tok) + 1  # noqa: E731 - local helper
        if header is None:
            if tokens[0] != "interval":
                raise MapSyntaxError("expected 'interval' header", lineno,
                                     col(tokens[0]))
            if len(tokens) != 3:
                raise MapSyntaxError("header needs two rationals", lineno, 1)
            header = (parse_rational(tokens[1], line=lineno, column=col(tokens[1])),
                      parse_rational(tokens[2], line=lineno, column=col(tokens[2])))
            continue
        if tokens[0] != "piece":
            raise MapSyntaxError(f"expected 'piece', got {tokens[0]!r}",
                                 lineno, col(tokens[0]))
        if len(tokens) != 8 or tokens[3] != ":" or tokens[4] != "slope" \
                or tokens[6] != "intercept":
            raise MapSyntaxError(
                "expected 'piece <rat> <rat> : slope <rat> intercept <rat>'",
                lineno, 1)
        vals = [parse_rational(tokens[i], line=lineno, column=col(tokens[i]))
                for i in (1, 2, 5, 7)]
        pieces.append(AffinePiece(vals[0], vals[1], vals[2], vals[3]))
    if header is None:
        raise MapSyntaxError("missing 'interval' header", 1, 1)
    if not pieces:
        raise MapSyntaxError("no pieces", 1, 1)
    return PiecewiseMap(header[0], header[1], pieces)


def map_to_text(f: PiecewiseMap) -> str:
    return f.to_text()


# -- module-level operation aliases -----------------------------------------

def evaluate(f: PiecewiseMap, x: RationalLike) -> Optional[Fraction]:
    return f.value(x)


def lateral_limit(f: PiecewiseMap, p: RationalLike, side: Side) -> Fraction:
    return f.lateral(p, side)


def special_points(f: PiecewiseMap) -> SpecialPoints:
    return f.special_points()


def preimage(f: PiecewiseMap, y: RationalLike) -> tuple[Fraction, ...]:
    return f.preimage(y)


def special_preimage_set(f: PiecewiseMap, n: int) -> tuple[Fraction, ...]:
    return f.special_preimage_set(n)


def iterate(f: PiecewiseMap, n: int, *, max_power: int = MAX_POWER,
            guard: int = MAX_PIECES, check: bool = True) -> PiecewiseMap:
    return f.power(n, max_power=max_power, guard=guard, check=check)


def compose(outer: PiecewiseMap, inner: PiecewiseMap, *,
            guard: int = MAX_PIECES, check: bool = True) -> PiecewiseMap:
    """Exact composition outer(inner(x)) as a normalized piecewise map.

    A point where `inner` jumps, or lands on a jump of `outer`, stays
    undefined in the result only if the result's own lateral limits differ
    there; otherwise the composition is continuous at that point and takes
    the common limit.
    """
    if (outer.a, outer.b) != (inner.a, inner.b):
        raise ValueError("composition requires maps on the same interval")
    cuts = [p.left for p in outer.pieces[1:]]
    new_pieces: list[AffinePiece] = []
    for piece in inner.pieces:
        lo, hi = piece.image()
        i0 = bisect_right(cuts, lo)
        i1 = bisect_left(cuts, hi)
        xs = sorted(piece.solve(c) for c in cuts[i0:i1])
        bounds = [piece.left] + [x for x in xs
                                 if piece.left < x < piece.right] + [piece.right]
        for p, q in zip(bounds, bounds[1:]):
            if p >= q:
                continue
            mid = (p + q) / 2
            y = piece.value_at(mid)
            target = outer.pieces[bisect_right(outer._lefts, y) - 1]
            new_pieces.append(AffinePiece(
                p, q, target.slope * piece.slope,
                target.slope * piece.intercept + target.intercept))
            if len(new_pieces) > guard:
                raise PieceLimitError(f"composition exceeds {guard} pieces")
    result = PiecewiseMap(outer.a, outer.b, new_pieces)
    if check:
        _check_sandwich(outer, inner, result)
    return result


def _check_sandwich(outer: PiecewiseMap, inner: PiecewiseMap,
                    result: PiecewiseMap) -> None:
    """Internal consistency: special points of the composition sit between
    the turns of the inner map plus pullbacks of the outer special set
    (lower bound) and the full inner special set plus pullbacks (upper).

    The lower bound is clipped to the open interval: a pulled-back domain
    endpoint marks a one-sided extremum at the boundary, which is not a
    turning point (special points are interior by definition).
    """
    pulled = {x for w in outer.special_points().points
              for x in inner.preimage(w)}
    inner_special = inner.special_points()
    upper = set(inner_special.points) | pulled
    lower = {x for x in set(inner_special.turning) | pulled
             if inner.a < x < inner.b}
    got = set(result.special_points().points)
    if not (lower <= got <= upper):
        raise MapInvariantError(
            "special points of the composition escaped their exact bounds")

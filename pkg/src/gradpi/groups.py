"""Groups with canonical normal forms, homomorphisms and limits of diagrams.

Every group kind works on *raw* normal forms (tuples or ints) through
``mul``/``inv``/``word_of``; :class:`GroupElement` wraps a raw form together
with its group for the public API.

Kinds:

* :class:`FiniteAbelian` -- product of cyclic groups given by invariant factors
* :class:`FiniteTable` -- arbitrary finite group given by a multiplication table
* :class:`Free` -- free group on ``s1 .. sr`` (reduced words)
* :class:`FreeProductCyclic` -- free product of cyclic groups (syllable words)
* :class:`DirectProduct` -- direct product of any of the above
* :class:`CompatibleTuples` -- subgroup of a direct product cut out by
  homomorphism constraints; this is how limits are represented
"""

from __future__ import annotations

import itertools
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import prod
from typing import Iterable, Optional, Sequence


class GroupMismatch(ValueError):
    pass


class UnknownGenerator(ValueError):
    pass


class InvalidHomomorphism(ValueError):
    pass


class UnsupportedShape(ValueError):
    pass


class ConeDoesNotCommute(ValueError):
    pass


class CertificateFailure(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# base class


class Group:
    """Common interface.  Subclasses implement the raw operations."""

    # -- raw interface -------------------------------------------------------
    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def gens(self) -> list:
        raise NotImplementedError

    def gen_names(self) -> list[str]:
        raise NotImplementedError

    def word_of(self, a) -> list[tuple[int, int]]:
        """Express ``a`` as a product of generator powers, left to right."""
        raise NotImplementedError

    def length(self, a) -> int:
        raise NotImplementedError

    def ball(self, radius: int) -> list:
        """All elements of length at most ``radius``, deterministic order."""
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def order(self) -> Optional[int]:
        """Cardinality, or None when infinite."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def name(self) -> str:
        raise NotImplementedError

    # -- derived -------------------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.order() is not None

    @property
    def is_trivial(self) -> bool:
        return self.order() == 1

    def elements(self) -> list:
        if not self.is_finite:
            raise ValueError(f"{self.name()} is infinite")
        return self.ball(10**9)

    def is_identity(self, a) -> bool:
        return a == self.identity()

    def power(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.identity()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element_order(self, a, bound: int = 100_000) -> Optional[int]:
        x = a
        for k in range(1, bound + 1):
            if self.is_identity(x):
                return k
            x = self.mul(x, a)
        return None

    def normalize(self, word) -> "GroupElement":
        """Normal form of a formal word.

        ``word`` is a string (``"s1*s2^-1"``) or a sequence of
        ``(generator, exponent)`` pairs where the generator is an index or a
        name.
        """
        if isinstance(word, str):
            return GroupElement(self, self.parse(word))
        names = self.gen_names()
        gens = self.gens()
        acc = self.identity()
        for g, e in word:
            if isinstance(g, str):
                if g not in names:
                    raise UnknownGenerator(g)
                g = names.index(g)
            if not 0 <= g < len(gens):
                raise UnknownGenerator(g)
            acc = self.mul(acc, self.power(gens[g], e))
        return GroupElement(self, acc)

    def __call__(self, value) -> "GroupElement":
        if isinstance(value, GroupElement):
            if value.group != self:
                raise GroupMismatch(f"{value.group.name()} vs {self.name()}")
            return value
        if isinstance(value, str):
            return GroupElement(self, self.parse(value))
        return GroupElement(self, value)

    def one(self) -> "GroupElement":
        return GroupElement(self, self.identity())

    def generators(self) -> list["GroupElement"]:
        return [GroupElement(self, g) for g in self.gens()]

    def _parse_power_word(self, text: str):
        """Parse ``g1^e1*g2^e2*...`` using this group's generator names."""
        text = text.replace(" ", "")
        if text in ("1", "e", ""):
            return self.identity()
        names = self.gen_names()
        acc = self.identity()
        for tok in text.split("*"):
            base, _, exp = tok.partition("^")
            if base not in names:
                raise UnknownGenerator(base)
            e = int(exp) if exp else 1
            acc = self.mul(acc, self.power(self.gens()[names.index(base)], e))
        return acc

    def _format_power_word(self, word: Sequence[tuple[int, int]]) -> str:
        if not word:
            return "1"
        names = self.gen_names()
        return "*".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in word)


@dataclass(frozen=True)
class GroupElement:
    group: Group
    nf: object

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group != self.group:
            raise GroupMismatch(f"{self.group.name()} vs {other.group.name()}")
        return GroupElement(self.group, self.group.mul(self.nf, other.nf))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inv(self.nf))

    def __pow__(self, e: int) -> "GroupElement":
        return GroupElement(self.group, self.group.power(self.nf, e))

    def is_identity(self) -> bool:
        return self.group.is_identity(self.nf)

    def length(self) -> int:
        return self.group.length(self.nf)

    def order(self) -> Optional[int]:
        return self.group.element_order(self.nf)

    def __str__(self) -> str:
        return self.group.format(self.nf)

    def __repr__(self) -> str:
        return f"<{self.group.name()}: {self}>"


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def invert(a: GroupElement) -> GroupElement:
    return a.inverse()


def normalize(group: Group, word) -> GroupElement:
    return group.normalize(word)


# ---------------------------------------------------------------------------
# finite abelian


@dataclass(frozen=True)
class FiniteAbelian(Group):
    """Product of cyclic groups C_{n1} x ... x C_{nk} with n1 | n2 | ... | nk."""

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))
        if any(n < 2 for n in self.factors):
            raise ValueError("invariant factors must be at least 2")
        if any(b % a for a, b in zip(self.factors, self.factors[1:])):
            raise ValueError(f"invariant factors {self.factors} are not divisor-chained")

    def identity(self):
        return (0,) * len(self.factors)

    def mul(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.factors))

    def inv(self, a):
        return tuple((-x) % n for x, n in zip(a, self.factors))

    def power(self, a, e):
        return tuple((x * e) % n for x, n in zip(a, self.factors))

    def gens(self):
        k = len(self.factors)
        return [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]

    def gen_names(self):
        if len(self.factors) == 1:
            return ["t"]
        return [self.format(g) for g in self.gens()]

    def word_of(self, a):
        return [(i, x) for i, x in enumerate(a) if x]

    def length(self, a):
        return sum(min(x, n - x) for x, n in zip(a, self.factors))

    def ball(self, radius):
        elems = itertools.product(*(range(n) for n in self.factors))
        return [e for e in elems if self.length(e) <= radius]

    def order(self):
        return prod(self.factors)

    def element_order(self, a, bound=None):
        from math import gcd

        out = 1
        for x, n in zip(a, self.factors):
            o = n // gcd(x, n)
            out = out * o // gcd(out, o)
        return out

    @staticmethod
    def _fmt_t(x):
        return "1" if x == 0 else ("t" if x == 1 else f"t^{x}")

    def format(self, a):
        if len(self.factors) == 1:
            return self._fmt_t(a[0])
        if not self.factors:
            return "1"
        return "(" + ",".join(self._fmt_t(x) for x in a) + ")"

    def parse(self, text):
        text = text.replace(" ", "")
        if not self.factors:
            if text in ("1", "()", "e"):
                return ()
            raise UnknownGenerator(text)
        if len(self.factors) == 1 and not text.startswith("("):
            return (self._parse_t(text) % self.factors[0],)
        if not (text.startswith("(") and text.endswith(")")):
            if text in ("1", "e"):
                return self.identity()
            raise UnknownGenerator(text)
        parts = text[1:-1].split(",")
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} coordinates in {text!r}")
        return tuple(self._parse_t(p) % n for p, n in zip(parts, self.factors))

    @staticmethod
    def _parse_t(tok):
        if tok in ("1", "e"):
            return 0
        exp = 0
        for piece in tok.split("*"):
            base, _, e = piece.partition("^")
            if base != "t":
                raise UnknownGenerator(base)
            exp += int(e) if e else 1
        return exp

    def to_json(self):
        return {"kind": "finite_abelian", "factors": list(self.factors)}

    def name(self):
        if not self.factors:
            return "1"
        return " x ".join(f"C{n}" for n in self.factors)


def cyclic(n: int) -> FiniteAbelian:
    return FiniteAbelian((n,)) if n > 1 else FiniteAbelian(())


TRIVIAL = FiniteAbelian(())


# ---------------------------------------------------------------------------
# finite table


@dataclass(frozen=True, eq=False)
class FiniteTable(Group):
    """Finite group given by a multiplication table over 0..n-1."""

    table: tuple[tuple[int, ...], ...]
    generator_indices: tuple[int, ...]
    labels: Optional[tuple[str, ...]] = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))
        object.__setattr__(self, "generator_indices", tuple(self.generator_indices))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
        if self.check:
            self._validate()

    def __eq__(self, other):
        return (
            isinstance(other, FiniteTable)
            and self.table == other.table
            and self.generator_indices == other.generator_indices
        )

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.table, self.generator_indices))

    def _validate(self):
        n = len(self.table)
        t = self.table
        if any(len(r) != n or sorted(r) != list(range(n)) for r in t):
            raise ValueError("table rows must be permutations")
        e = self.identity()
        if any(t[e][x] != x or t[x][e] != x for x in range(n)):
            raise ValueError("table has no identity")
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise ValueError("table is not associative")
        if len(self._words) != n:
            raise ValueError("listed generators do not generate the table group")

    @cached_property
    def _identity(self):
        for e, row in enumerate(self.table):
            if all(row[x] == x for x in range(len(row))):
                return e
        raise ValueError("no identity")

    def identity(self):
        return self._identity

    def mul(self, a, b):
        return self.table[a][b]

    @cached_property
    def _inverses(self):
        e = self.identity()
        return tuple(row.index(e) for row in self.table)

    def inv(self, a):
        return self._inverses[a]

    def gens(self):
        return list(self.generator_indices)

    def gen_names(self):
        return [self.format(g) for g in self.generator_indices]

    @cached_property
    def _words(self) -> dict:
        # breadth-first words over generators and their inverses
        words = {self.identity(): []}
        queue = deque([self.identity()])
        steps = []
        for i, g in enumerate(self.generator_indices):
            steps.append((i, 1, g))
            steps.append((i, -1, self._inverses[g]))
        while queue:
            x = queue.popleft()
            for i, e, g in steps:
                y = self.table[x][g]
                if y not in words:
                    words[y] = words[x] + [(i, e)]
                    queue.append(y)
        return words

    def word_of(self, a):
        return list(self._words[a])

    def length(self, a):
        return len(self._words[a])

    def ball(self, radius):
        return [x for x, w in sorted(self._words.items(), key=lambda kv: (len(kv[1]), kv[0])) if len(w) <= radius]

    def order(self):
        return len(self.table)

    def format(self, a):
        if self.labels is not None:
            return self.labels[a]
        return "e" if a == self.identity() else f"g{a}"

    def parse(self, text):
        text = text.strip()
        if self.labels is not None and text in self.labels:
            return self.labels.index(text)
        if text in ("e", "1"):
            return self.identity()
        if text.startswith("g") and text[1:].isdigit():
            return int(text[1:])
        raise UnknownGenerator(text)

    def to_json(self):
        out = {
            "kind": "finite_table",
            "table": [list(r) for r in self.table],
            "generators": list(self.generator_indices),
        }
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    def name(self):
        return f"G{self.order()}"


def permutation_group(generators: Sequence[Sequence[int]]) -> FiniteTable:
    """Table group generated by permutations of 0..m-1 (in one-line form)."""
    gens = [tuple(g) for g in generators]
    m = len(gens[0])
    e = tuple(range(m))
    elems = [e]
    seen = {e}
    for x in elems:
        for g in gens:
            y = tuple(g[x[i]] for i in range(m))  # apply x, then g
            if y not in seen:
                seen.add(y)
                elems.append(y)
    idx = {x: i for i, x in enumerate(elems)}
    table = [[idx[tuple(a[b[i]] for i in range(m))] for b in elems] for a in elems]
    labels = ["".join(map(str, x)) for x in elems]
    return FiniteTable(tuple(map(tuple, table)), tuple(idx[g] for g in gens), tuple(labels))


def symmetric_group(m: int) -> FiniteTable:
    if m < 2:
        return FiniteTable(((0,),), ())
    return permutation_group([(1, 0) + tuple(range(2, m)), tuple(range(1, m)) + (0,)])


# ---------------------------------------------------------------------------
# free groups


@dataclass(frozen=True)
class Free(Group):
    """Free group on ``s1 .. s_rank``; a word is a tuple of nonzero ints,
    ``+i`` for s_i and ``-i`` for its inverse."""

    rank: int

    def identity(self):
        return ()

    def mul(self, a, b):
        out = list(a)
        for x in b:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def gens(self):
        return [(i,) for i in range(1, self.rank + 1)]

    def gen_names(self):
        return [f"s{i}" for i in range(1, self.rank + 1)]

    def word_of(self, a):
        out: list[tuple[int, int]] = []
        for x in a:
            g, e = abs(x) - 1, (1 if x > 0 else -1)
            if out and out[-1][0] == g:
                out[-1] = (g, out[-1][1] + e)
            else:
                out.append((g, e))
        return out

    def length(self, a):
        return len(a)

    def ball(self, radius):
        letters = []
        for i in range(1, self.rank + 1):
            letters += [i, -i]
        out = [()]
        layer = [()]
        for _ in range(radius):
            nxt = []
            for w in layer:
                for x in letters:
                    if not w or w[-1] != -x:
                        nxt.append(w + (x,))
            out += nxt
            layer = nxt
            if not nxt:
                break
        return out

    def order(self):
        return 1 if self.rank == 0 else None

    def format(self, a):
        return self._format_power_word(self.word_of(a))

    def parse(self, text):
        text = text.replace(" ", "")
        if self.rank == 1:
            text = re.sub(r"\bs(?!\d)", "s1", text)
        return self._parse_power_word(text)

    def to_json(self):
        return {"kind": "free", "rank": self.rank}

    def name(self):
        if self.rank == 0:
            return "1"
        return "Z" if self.rank == 1 else f"F{self.rank}"


# ---------------------------------------------------------------------------
# free products of cyclic groups


@dataclass(frozen=True)
class FreeProductCyclic(Group):
    """Free product of cyclic groups; ``None`` in ``orders`` means infinite.

    Elements are tuples of syllables ``(factor, exponent)`` with adjacent
    syllables in different factors and exponents reduced (nonzero, and in
    ``1..n-1`` for a finite factor of order n).  Generators are named
    ``a, b, c, ...``.
    """

    orders: tuple[Optional[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(None if o is None else int(o) for o in self.orders))
        if any(o is not None and o < 2 for o in self.orders):
            raise ValueError("cyclic free factors must have order >= 2 (or be infinite)")

    def _reduce_exp(self, f, e):
        n = self.orders[f]
        return e if n is None else e % n

    def identity(self):
        return ()

    def mul(self, a, b):
        out = list(a)
        for f, e in b:
            if out and out[-1][0] == f:
                ne = self._reduce_exp(f, out[-1][1] + e)
                if ne == 0:
                    out.pop()
                else:
                    out[-1] = (f, ne)
            else:
                out.append((f, e))
        return tuple(out)

    def inv(self, a):
        return tuple((f, self._reduce_exp(f, -e)) for f, e in reversed(a))

    def gens(self):
        return [((i, 1),) for i in range(len(self.orders))]

    def gen_names(self):
        return [chr(ord("a") + i) for i in range(len(self.orders))]

    def word_of(self, a):
        return [(f, e) for f, e in a]

    def length(self, a):
        return len(a)

    def _syllable_exps(self, f, radius):
        n = self.orders[f]
        if n is None:
            return [e for k in range(1, radius + 1) for e in (k, -k)]
        return list(range(1, n))

    def ball(self, radius):
        """Syllable ball; exponents of infinite factors are bounded by radius."""
        out = [()]
        layer = [()]
        for _ in range(radius):
            nxt = []
            for w in layer:
                for f in range(len(self.orders)):
                    if w and w[-1][0] == f:
                        continue
                    for e in self._syllable_exps(f, radius):
                        nxt.append(w + ((f, e),))
            out += nxt
            layer = nxt
        return out

    def order(self):
        nontrivial = len(self.orders)
        if nontrivial == 0:
            return 1
        if nontrivial == 1:
            return self.orders[0]
        return None

    def format(self, a):
        return self._format_power_word(self.word_of(a))

    def parse(self, text):
        return self._parse_power_word(text)

    def to_json(self):
        return {"kind": "free_product_cyclic", "orders": ["inf" if o is None else o for o in self.orders]}

    def name(self):
        if not self.orders:
            return "1"
        return "*".join("Z" if o is None else f"C{o}" for o in self.orders)


# ---------------------------------------------------------------------------
# direct products


def _split_top(text: str, sep: str = ";") -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


@dataclass(frozen=True)
class DirectProduct(Group):
    factors: tuple[Group, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def _offsets(self):
        offs, k = [], 0
        for f in self.factors:
            offs.append(k)
            k += len(f.gens())
        return offs

    def gens(self):
        out = []
        for i, f in enumerate(self.factors):
            ident = list(self.identity())
            for g in f.gens():
                ident_i = list(ident)
                ident_i[i] = g
                out.append(tuple(ident_i))
        return out

    def gen_names(self):
        return [self.format(g) for g in self.gens()]

    def factor_of_gen(self, gi: int) -> tuple[int, int]:
        for i, off in enumerate(self._offsets()):
            if gi < off + len(self.factors[i].gens()):
                return i, gi - off
        raise IndexError(gi)

    def word_of(self, a):
        out = []
        for off, f, x in zip(self._offsets(), self.factors, a):
            out += [(off + g, e) for g, e in f.word_of(x)]
        return out

    def length(self, a):
        return max((f.length(x) for f, x in zip(self.factors, a)), default=0)

    def ball(self, radius):
        return [tuple(t) for t in itertools.product(*(f.ball(radius) for f in self.factors))]

    def order(self):
        orders = [f.order() for f in self.factors]
        if any(o is None for o in orders):
            return None
        return prod(orders)

    def format(self, a):
        return "[" + "; ".join(f.format(x) for f, x in zip(self.factors, a)) + "]"

    def parse(self, text):
        text = text.strip()
        if text in ("1", "e"):
            return self.identity()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"product element must look like [x; y]: {text!r}")
        parts = _split_top(text[1:-1])
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} coordinates in {text!r}")
        return tuple(f.parse(p) for f, p in zip(self.factors, parts))

    def to_json(self):
        return {"kind": "direct_product", "factors": [f.to_json() for f in self.factors]}

    def name(self):
        def wrap(g):
            n = g.name()
            return f"({n})" if "*" in n or " x " in n and isinstance(g, DirectProduct) else n

        return " x ".join(wrap(f) for f in self.factors)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """A homomorphism given by the images of the source's generators."""

    source: Group
    target: Group
    images: tuple
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        imgs = []
        for x in self.images:
            if isinstance(x, GroupElement):
                if x.group != self.target:
                    raise GroupMismatch("image outside target")
                x = x.nf
            elif isinstance(x, str):
                x = self.target.parse(x)
            imgs.append(x)
        object.__setattr__(self, "images", tuple(imgs))
        if len(self.images) != len(self.source.gens()):
            raise InvalidHomomorphism(
                f"{len(self.images)} images for {len(self.source.gens())} generators"
            )
        object.__setattr__(self, "_cache", {})
        if self.check:
            self.validate()

    def __eq__(self, other):
        return (
            isinstance(other, Homomorphism)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def apply(self, a):
        """Image of a raw element."""
        try:
            return self._cache[a]
        except (KeyError, TypeError):
            pass
        T = self.target
        out = T.identity()
        for g, e in self.source.word_of(a):
            out = T.mul(out, T.power(self.images[g], e))
        if len(self._cache) < 200_000:
            self._cache[a] = out
        return out

    def __call__(self, x):
        if isinstance(x, GroupElement):
            if x.group != self.source:
                raise GroupMismatch("argument outside source")
            return GroupElement(self.target, self.apply(x.nf))
        if isinstance(x, str):
            return GroupElement(self.target, self.apply(self.source.parse(x)))
        return self.apply(x)

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """``self o first``."""
        if first.target != self.source:
            raise GroupMismatch("homomorphisms do not compose")
        return Homomorphism(first.source, self.target, tuple(self.apply(x) for x in first.images), check=False)

    def validate(self):
        _check_relations(self)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "images": [self.target.format(x) for x in self.images],
        }

    @classmethod
    def from_json(cls, data) -> "Homomorphism":
        src = group_from_json(data["source"])
        tgt = group_from_json(data["target"])
        return cls(src, tgt, tuple(tgt.parse(s) for s in data["images"]))


def identity_map(G: Group) -> Homomorphism:
    return Homomorphism(G, G, tuple(G.gens()), check=False)


def trivial_map(G: Group, H: Group) -> Homomorphism:
    return Homomorphism(G, H, tuple(H.identity() for _ in G.gens()), check=False)


def _check_relations(h: Homomorphism):
    S, T = h.source, h.target
    imgs = h.images
    if isinstance(S, FiniteAbelian):
        for x, n in zip(imgs, S.factors):
            if not T.is_identity(T.power(x, n)):
                raise InvalidHomomorphism(f"image {T.format(x)} does not have order dividing {n}")
        for x, y in itertools.combinations(imgs, 2):
            if T.mul(x, y) != T.mul(y, x):
                raise InvalidHomomorphism("images of commuting generators do not commute")
    elif isinstance(S, FiniteTable):
        phi = {}
        for a in range(S.order()):
            phi[a] = h.apply(a)
        for a in range(S.order()):
            for gi, g in enumerate(S.gens()):
                if phi[S.mul(a, g)] != T.mul(phi[a], imgs[gi]):
                    raise InvalidHomomorphism("table relation violated")
    elif isinstance(S, Free):
        return
    elif isinstance(S, FreeProductCyclic):
        for x, n in zip(imgs, S.orders):
            if n is not None and not T.is_identity(T.power(x, n)):
                raise InvalidHomomorphism(f"image {T.format(x)} does not have order dividing {n}")
    elif isinstance(S, DirectProduct):
        k = 0
        blocks = []
        for f in S.factors:
            m = len(f.gens())
            sub = Homomorphism(f, T, imgs[k : k + m], check=True)
            blocks.append(sub.images)
            k += m
        for (i, bi), (j, bj) in itertools.combinations(enumerate(blocks), 2):
            for x in bi:
                for y in bj:
                    if T.mul(x, y) != T.mul(y, x):
                        raise InvalidHomomorphism("images of different factors do not commute")
    else:
        elems = S.ball(2)[:200]
        for a in elems:
            for b in elems:
                if h.apply(S.mul(a, b)) != T.mul(h.apply(a), h.apply(b)):
                    raise InvalidHomomorphism("map is not multiplicative")


# ---------------------------------------------------------------------------
# compatible tuples (limits)


@dataclass(frozen=True, eq=False)
class CompatibleTuples(Group):
    """Tuples ``(x_0, .., x_k)`` over ``nodes`` with ``phi(x_i) = x_j`` for
    every arrow ``(i, j, phi)``.

    At most one node (``lead``) may be infinite; every generator of the lead
    node must extend to a compatible tuple.
    """

    nodes: tuple[Group, ...]
    arrows: tuple[tuple[int, int, Homomorphism], ...]
    lead: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        inf = [i for i, G in enumerate(self.nodes) if not G.is_finite]
        if len(inf) > 1 or (inf and inf != [self.lead]):
            raise UnsupportedShape("compatible tuples support at most one infinite (lead) node")

    def __eq__(self, other):
        return (
            isinstance(other, CompatibleTuples)
            and self.nodes == other.nodes
            and self.lead == other.lead
            and [(i, j, h.images) for i, j, h in self.arrows]
            == [(i, j, h.images) for i, j, h in other.arrows]
        )

    def __hash__(self):
        return hash((self.nodes, self.lead, tuple((i, j, h.images) for i, j, h in self.arrows)))

    def contains(self, t) -> bool:
        return all(h.apply(t[i]) == t[j] for i, j, h in self.arrows)

    def completions(self, fixed: dict, radius: Optional[int] = None) -> list:
        """All compatible tuples extending the partial assignment ``fixed``."""
        return list(_enumerate_compatible(self.nodes, self.arrows, fixed, radius))

    @cached_property
    def _kernel(self) -> list:
        fixed = {} if self.lead is None else {self.lead: self.nodes[self.lead].identity()}
        return self.completions(fixed)

    @cached_property
    def _lifts(self) -> list:
        if self.lead is None:
            return []
        lifts = []
        for s in self.nodes[self.lead].gens():
            found = _first(_enumerate_compatible(self.nodes, self.arrows, {self.lead: s}, None))
            if found is None:
                raise UnsupportedShape("a lead generator has no compatible extension")
            lifts.append(found)
        return lifts

    @cached_property
    def _kernel_gens(self) -> list:
        return _greedy_generators(self, self._kernel)

    @cached_property
    def _kernel_words(self) -> dict:
        words = {self.identity(): []}
        queue = deque([self.identity()])
        off = len(self._lifts)
        steps = []
        for i, g in enumerate(self._kernel_gens):
            steps.append((off + i, 1, g))
            steps.append((off + i, -1, self.inv(g)))
        while queue:
            x = queue.popleft()
            for gi, e, g in steps:
                y = self.mul(x, g)
                if y not in words:
                    words[y] = words[x] + [(gi, e)]
                    queue.append(y)
        return words

    def identity(self):
        return tuple(G.identity() for G in self.nodes)

    def mul(self, a, b):
        return tuple(G.mul(x, y) for G, x, y in zip(self.nodes, a, b))

    def inv(self, a):
        return tuple(G.inv(x) for G, x in zip(self.nodes, a))

    def gens(self):
        return list(self._lifts) + list(self._kernel_gens)

    def gen_names(self):
        return [self.format(g) for g in self.gens()]

    def word_of(self, a):
        word = []
        acc = self.identity()
        if self.lead is not None:
            L = self.nodes[self.lead]
            for g, e in L.word_of(a[self.lead]):
                word.append((g, e))
                acc = self.mul(acc, self.power(self._lifts[g], e))
        rest = self.mul(self.inv(acc), a)
        return word + self._kernel_words[rest]

    def length(self, a):
        return max((G.length(x) for G, x in zip(self.nodes, a)), default=0)

    def ball(self, radius):
        return self.completions({}, radius)

    def order(self):
        if self.lead is not None:
            return None
        return len(self._kernel)

    def format(self, a):
        return "[" + "; ".join(G.format(x) for G, x in zip(self.nodes, a)) + "]"

    def parse(self, text):
        text = text.strip()
        if text in ("1", "e"):
            return self.identity()
        parts = _split_top(text.strip()[1:-1])
        t = tuple(G.parse(p) for G, p in zip(self.nodes, parts))
        if not self.contains(t):
            raise ValueError(f"{text} is not a compatible tuple")
        return t

    def to_json(self):
        return {
            "kind": "compatible_tuples",
            "nodes": [G.to_json() for G in self.nodes],
            "arrows": [
                {"source": i, "target": j, "images": [h.target.format(x) for x in h.images]}
                for i, j, h in self.arrows
            ],
            "lead": self.lead,
        }

    def name(self):
        return "lim(" + ", ".join(G.name() for G in self.nodes) + ")"


def _first(it):
    for x in it:
        return x
    return None


def _enumerate_compatible(nodes, arrows, fixed: dict, radius: Optional[int]):
    """Backtracking enumeration of compatible tuples.

    A node whose value is forced by an arrow from an assigned node is computed
    rather than enumerated.
    """
    k = len(nodes)
    into = {j: [(i, h) for i, jj, h in arrows if jj == j] for j in range(k)}
    order: list[int] = [i for i in range(k) if i in fixed]
    remaining = [i for i in range(k) if i not in fixed]
    # prefer nodes that are forced by already ordered ones, then finite ones
    while remaining:
        forced = [j for j in remaining if any(i in order for i, _ in into[j])]
        pick = forced[0] if forced else min(remaining, key=lambda j: (not nodes[j].is_finite, j))
        order.append(pick)
        remaining.remove(pick)
    pos = {v: n for n, v in enumerate(order)}
    checks = {v: [(i, j, h) for i, j, h in arrows if max(pos[i], pos[j]) == pos[v]] for v in order}

    def candidates(v, partial):
        if v in fixed:
            return [fixed[v]]
        for i, h in into[v]:
            if i in partial:
                x = h.apply(partial[i])
                if radius is not None and nodes[v].length(x) > radius:
                    return []
                return [x]
        return nodes[v].ball(radius if radius is not None else 10**9)

    partial: dict = {}

    def rec(depth):
        if depth == k:
            yield tuple(partial[i] for i in range(k))
            return
        v = order[depth]
        for x in candidates(v, partial):
            partial[v] = x
            if all(h.apply(partial[i]) == partial[j] for i, j, h in checks[v]):
                yield from rec(depth + 1)
            del partial[v]

    yield from rec(0)


def _closure(G: Group, gens: Iterable, limit: Optional[int] = None) -> set:
    gens = list(gens)
    seen = {G.identity()}
    queue = deque([G.identity()])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
                if limit is not None and len(seen) > limit:
                    return seen
    return seen


def _greedy_generators(G: Group, elements: Sequence) -> list:
    gens: list = []
    sub = {G.identity()}
    for x in sorted(elements, key=lambda e: (G.length(e), str(e))):
        if x not in sub:
            gens.append(x)
            sub = _closure(G, gens)
            if len(sub) == len(elements):
                break
    return gens


# ---------------------------------------------------------------------------
# generation


def _stallings_is_whole(rank: int, words: Sequence[tuple]) -> bool:
    """Fold the subgroup graph of ``words`` and test for the full rose."""
    edges: set[tuple[int, int, int]] = set()
    nxt = 1
    for w in words:
        if not w:
            continue
        cur = 0
        for pos, x in enumerate(w):
            end = 0 if pos == len(w) - 1 else nxt
            if end:
                nxt += 1
            g = abs(x)
            edges.add((cur, g, end) if x > 0 else (end, g, cur))
            cur = end
    while True:
        merge = None
        for u, g, v in sorted(edges):
            for u2, g2, v2 in sorted(edges):
                if (u2, g2, v2) <= (u, g, v):
                    continue
                if g == g2 and u == u2 and v != v2:
                    merge = (min(v, v2), max(v, v2))
                elif g == g2 and v == v2 and u != u2:
                    merge = (min(u, u2), max(u, u2))
                if merge:
                    break
            if merge:
                break
        if not merge:
            break
        keep, drop = merge
        edges = {(keep if a == drop else a, g, keep if b == drop else b) for a, g, b in edges}
    vertices = {a for a, _, _ in edges} | {b for _, _, b in edges} | {0}
    return vertices == {0} and edges == {(0, g, 0) for g in range(1, rank + 1)}


def _bounded_subgroup_contains(G: Group, subset: Sequence, targets: Sequence, depth: int = 4, limit: int = 20_000) -> bool:
    steps = list(subset) + [G.inv(x) for x in subset]
    seen = {G.identity()}
    layer = [G.identity()]
    want = set(targets)
    for _ in range(depth):
        nxt = []
        for x in layer:
            for s in steps:
                y = G.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
            if len(seen) > limit:
                break
        layer = nxt
        if want <= seen:
            return True
    return want <= seen


def generates(G: Group, subset: Iterable) -> Optional[bool]:
    """Whether ``subset`` generates ``G``.

    Exact for finite and free groups.  Free products and other infinite kinds
    return True/False when a sufficient test decides, else None (unknown).
    """
    subset = [x.nf if isinstance(x, GroupElement) else x for x in subset]
    if G.is_finite:
        return len(_closure(G, subset)) == G.order()
    if isinstance(G, Free):
        return _stallings_is_whole(G.rank, subset)
    gens = G.gens()
    if set(gens) <= set(subset) or _bounded_subgroup_contains(G, subset, gens):
        return True
    for quotient in _finite_quotients(G):
        if not generates(quotient.target, [quotient.apply(x) for x in subset]):
            return False
    if isinstance(G, DirectProduct):
        for i, f in enumerate(G.factors):
            if generates(f, [x[i] for x in subset]) is False:
                return False
    return None


def _finite_quotients(G: Group) -> list[Homomorphism]:
    """Some finite quotients used to refute generation."""
    out = []
    if isinstance(G, FreeProductCyclic):
        for inf_order in (2, 3):
            orders = [inf_order if o is None else o for o in G.orders]
            Q = DirectProduct(tuple(cyclic(n) for n in orders))
            imgs = Q.gens()
            out.append(Homomorphism(G, Q, tuple(imgs), check=False))
    elif isinstance(G, Free):
        for n in (2, 3):
            Q = DirectProduct(tuple(cyclic(n) for _ in range(G.rank)))
            out.append(Homomorphism(G, Q, tuple(Q.gens()), check=False))
    elif isinstance(G, DirectProduct):
        parts = []
        for f in G.factors:
            if f.is_finite:
                parts.append([identity_map(f)])
            else:
                parts.append(_finite_quotients(f))
        for choice in itertools.product(*parts):
            Q = DirectProduct(tuple(q.target for q in choice))
            imgs = []
            for gi in range(len(G.gens())):
                fi, local = G.factor_of_gen(gi)
                img = list(Q.identity())
                img[fi] = choice[fi].images[local]
                imgs.append(tuple(img))
            out.append(Homomorphism(G, Q, tuple(imgs), check=False))
    return out


def is_surjective(h: Homomorphism) -> Optional[bool]:
    return generates(h.target, h.images)


# ---------------------------------------------------------------------------
# isomorphism invariants of finite groups


def is_abelian(G: Group) -> bool:
    gens = G.gens()
    return all(G.mul(x, y) == G.mul(y, x) for x in gens for y in gens)


def finite_invariants(G: Group) -> tuple:
    """(order, abelian?, element-order statistics): a complete invariant for
    finite abelian groups."""
    elems = G.elements()
    stats = Counter(G.element_order(x) for x in elems)
    return (len(elems), is_abelian(G), tuple(sorted(stats.items())))


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariant_factors(G: Group) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group, read off element orders.

    If ``p^L(k)`` elements satisfy ``x^(p^k) = 1`` then the number of cyclic
    p-primary factors of exponent at least k is ``L(k) - L(k-1)``.
    """
    orders = [G.element_order(x) for x in G.elements()]
    n = len(orders)
    by_prime: dict[int, list[int]] = {}
    for p in _prime_factors(n):
        logs = [0]
        k = 1
        while True:
            c = sum(1 for o in orders if p**k % o == 0)
            e = 0
            while c % p == 0 and c > 1:
                c //= p
                e += 1
            if e == logs[-1]:
                break
            logs.append(e)
            k += 1
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
        exps = []
        for k in range(len(at_least) - 1):
            exps += [k + 1] * (at_least[k] - at_least[k + 1])
        by_prime[p] = sorted((p**e for e in exps), reverse=True)
    width = max((len(v) for v in by_prime.values()), default=0)
    factors = [prod(v[i] for v in by_prime.values() if i < len(v)) for i in range(width)]
    return tuple(sorted(factors))


def find_isomorphism(G: Group, H: Group) -> Optional[Homomorphism]:
    """Brute-force search for an isomorphism between small finite groups."""
    if G.order() != H.order():
        return None
    if finite_invariants(G) != finite_invariants(H):
        return None
    gens = G.gens()
    pool = H.elements()
    orders = [G.element_order(g) for g in gens]
    options = [[y for y in pool if H.element_order(y) == o] for o in orders]
    for imgs in itertools.product(*options):
        try:
            h = Homomorphism(G, H, tuple(imgs))
        except InvalidHomomorphism:
            continue
        if generates(H, imgs):
            return h
    return None


# ---------------------------------------------------------------------------
# quotients and subgroups of finite groups


def subgroup_generated(G: Group, elems: Iterable) -> frozenset:
    return frozenset(_closure(G, [e.nf if isinstance(e, GroupElement) else e for e in elems]))


def all_subgroups(G: Group) -> list[frozenset]:
    """Subgroups of a small finite group generated by at most two elements,
    plus the whole group (complete for groups of rank <= 2)."""
    elems = G.elements()
    subs = {frozenset([G.identity()]), frozenset(elems)}
    for x, y in itertools.combinations_with_replacement(elems, 2):
        subs.add(frozenset(_closure(G, [x, y])))
    return sorted(subs, key=lambda s: (len(s), sorted(map(str, s))))


def quotient_by(G: Group, N: Iterable) -> Homomorphism:
    """Projection of a finite group onto G/N (N normal, given by generators
    or as a subset) as a table group."""
    N = subgroup_generated(G, N)
    elems = G.elements()
    for g in elems:
        for n in N:
            if G.mul(G.mul(g, n), G.inv(g)) not in N:
                raise ValueError("subgroup is not normal")
    cosets: list[frozenset] = []
    index: dict = {}
    for g in elems:
        if g in index:
            continue
        c = frozenset(G.mul(g, n) for n in N)
        for x in c:
            index[x] = len(cosets)
        cosets.append(c)
    reps = [min(c, key=lambda x: (G.length(x), str(x))) for c in cosets]
    table = [[index[G.mul(a, b)] for b in reps] for a in reps]
    gen_idx = sorted({index[g] for g in G.gens()} - {index[G.identity()]})
    labels = tuple(G.format(r) + "N" if i != index[G.identity()] else "1" for i, r in enumerate(reps))
    Q = FiniteTable(tuple(tuple(r) for r in table), tuple(gen_idx) or (index[G.identity()],), labels)
    return Homomorphism(G, Q, tuple(index[g] for g in G.gens()))


# ---------------------------------------------------------------------------
# diagrams and limits


@dataclass(frozen=True)
class GroupDiagram:
    nodes: tuple[Group, ...]
    arrows: tuple[tuple[int, int, Homomorphism], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        for i, j, h in self.arrows:
            if h.source != self.nodes[i] or h.target != self.nodes[j]:
                raise GroupMismatch(f"arrow {i}->{j} does not match its nodes")

    def check_surjective(self):
        for i, j, h in self.arrows:
            if is_surjective(h) is not True:
                raise ValueError(f"arrow {i}->{j} is not (known to be) surjective")

    def to_json(self) -> dict:
        return {
            "nodes": [G.to_json() for G in self.nodes],
            "arrows": [
                {"source": i, "target": j, "images": [h.target.format(x) for x in h.images]}
                for i, j, h in self.arrows
            ],
        }

    @classmethod
    def from_json(cls, data) -> "GroupDiagram":
        nodes = tuple(group_from_json(g) for g in data["nodes"])
        arrows = tuple(
            (a["source"], a["target"], Homomorphism(nodes[a["source"]], nodes[a["target"]], tuple(a["images"])))
            for a in data["arrows"]
        )
        return cls(nodes, arrows)


@dataclass
class Limit:
    group: Group
    projections: dict  # node index -> Homomorphism(group -> node)
    methods: list  # per component: (node indices, case)
    pruned: list  # trivial node indices removed before computing


def _components(k: int, arrows) -> list[list[int]]:
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in arrows:
        parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for v in range(k):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


def _droppable(d: GroupDiagram, i: int) -> bool:
    # a trivial node only constrains the limit through arrows leaving it
    # (it forces their targets to the identity), so only sinks are dropped
    return d.nodes[i].is_trivial and all(d.nodes[j].is_trivial for a, j, _ in d.arrows if a == i)


def diagram_limit(d: GroupDiagram, prune: bool = True) -> Limit:
    """Limit of a diagram of groups, componentwise, with projections.

    Components (after deleting trivial sink nodes) must be all finite, have an
    initial node with an arrow onto every other node, or be a cospan
    G1 -> K <- G2 with K and one of G1, G2 finite.
    """
    keep = [i for i in range(len(d.nodes)) if not (prune and _droppable(d, i))]
    pruned = [i for i in range(len(d.nodes)) if i not in keep]
    remap = {v: n for n, v in enumerate(keep)}
    arrows = [(remap[i], remap[j], h) for i, j, h in d.arrows if i in remap and j in remap]
    nodes = [d.nodes[i] for i in keep]

    finite_nodes: list[int] = []
    parts: list[tuple[Group, dict]] = []  # (group, {local node -> proj from that group})
    methods = []
    for comp in _components(len(nodes), arrows):
        comp_arrows = [(i, j, h) for i, j, h in arrows if i in comp]
        if all(nodes[v].is_finite for v in comp):
            finite_nodes += comp
            methods.append(([keep[v] for v in comp], "finite"))
            continue
        initial = _initial_node(nodes, comp, comp_arrows)
        if initial is not None:
            G = nodes[initial]
            projs = {initial: identity_map(G)}
            for i, j, h in comp_arrows:
                if i == initial:
                    projs[j] = h
            parts.append((G, projs))
            methods.append(([keep[v] for v in comp], "initial"))
            continue
        sources = {i for i, _, _ in comp_arrows}
        targets = {j for _, j, _ in comp_arrows}
        if len(comp) == 3 and len(comp_arrows) == 2 and len(targets) == 1 and len(sources) == 2:
            (K,) = targets
            infinite = [v for v in comp if not nodes[v].is_finite]
            if nodes[K].is_finite and len(infinite) == 1:
                local = sorted(comp)
                lm = {v: n for n, v in enumerate(local)}
                ct = CompatibleTuples(
                    tuple(nodes[v] for v in local),
                    tuple((lm[i], lm[j], h) for i, j, h in comp_arrows),
                    lead=lm[infinite[0]],
                )
                projs = {v: _coordinate_projection(ct, lm[v]) for v in local}
                parts.append((ct, projs))
                methods.append(([keep[v] for v in comp], "fibre_product"))
                continue
        raise UnsupportedShape(f"component {[keep[v] for v in comp]} has no supported limit shape")

    if finite_nodes:
        local = sorted(finite_nodes)
        lm = {v: n for n, v in enumerate(local)}
        ct = CompatibleTuples(
            tuple(nodes[v] for v in local),
            tuple((lm[i], lm[j], h) for i, j, h in arrows if i in lm),
        )
        parts.append((ct, {v: _coordinate_projection(ct, lm[v]) for v in local}))

    if not parts:
        group: Group = TRIVIAL
        projections = {}
    elif len(parts) == 1:
        group, projections = parts[0][0], dict(parts[0][1])
    else:
        group = DirectProduct(tuple(g for g, _ in parts))
        projections = {}
        for fi, (g, projs) in enumerate(parts):
            pr = _factor_projection(group, fi)
            for v, h in projs.items():
                projections[v] = h.compose(pr)
    out = {keep[v]: h for v, h in projections.items()}
    for i in pruned:
        out[i] = trivial_map(group, d.nodes[i])
    return Limit(group, out, methods, pruned)


def _initial_node(nodes, comp, comp_arrows) -> Optional[int]:
    for v in comp:
        outs = {j: h for i, j, h in comp_arrows if i == v}
        if set(outs) | {v} != set(comp):
            continue
        G = nodes[v]
        ok = True
        for i, j, h in comp_arrows:
            pi = identity_map(G) if i == v else outs.get(i)
            pj = identity_map(G) if j == v else outs.get(j)
            if pi is None or pj is None:
                ok = False
                break
            if any(h.apply(pi.apply(g)) != pj.apply(g) for g in G.gens()):
                ok = False
                break
        if ok:
            return v
    return None


def _coordinate_projection(ct: CompatibleTuples, i: int) -> Homomorphism:
    return Homomorphism(ct, ct.nodes[i], tuple(g[i] for g in ct.gens()), check=False)


def _factor_projection(P: DirectProduct, fi: int) -> Homomorphism:
    return Homomorphism(P, P.factors[fi], tuple(g[fi] for g in P.gens()), check=False)


def brute_force_limit_size(d: GroupDiagram) -> int:
    """Oracle: count compatible tuples of a finite diagram by filtering the
    full cartesian product."""
    count = 0
    for t in itertools.product(*(G.elements() for G in d.nodes)):
        if all(h.apply(t[i]) == t[j] for i, j, h in d.arrows):
            count += 1
    return count


# ---------------------------------------------------------------------------
# bounded isomorphism certificates


@dataclass
class LimitCertificate:
    radius: int
    candidate: str
    candidate_elements: int
    compatible_tuples: int
    method: str = "bounded"

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "radius": self.radius,
            "candidate": self.candidate,
            "candidate_elements": self.candidate_elements,
            "compatible_tuples": self.compatible_tuples,
        }


def certify_limit_iso(d: GroupDiagram, candidate: Group, cone: dict, radius: int) -> LimitCertificate:
    """Check, up to ``radius``, that ``candidate`` with the cone maps is
    isomorphic to the limit of ``d``.

    Every candidate element of length <= radius must map to a distinct
    compatible tuple, and every compatible tuple whose coordinates have
    length <= radius must be hit.
    """
    live = [i for i in range(len(d.nodes)) if not _droppable(d, i)]
    for i in live:
        if i not in cone:
            raise ConeDoesNotCommute(f"no cone map to node {i}")
        if cone[i].source != candidate or cone[i].target != d.nodes[i]:
            raise GroupMismatch(f"cone map {i} has wrong source or target")
    for i, j, h in d.arrows:
        if i not in cone or j not in cone:
            continue
        for g in candidate.gens():
            if h.apply(cone[i].apply(g)) != cone[j].apply(g):
                raise ConeDoesNotCommute(
                    f"arrow {i}->{j} does not commute on generator {candidate.format(g)}"
                )
    seen: dict = {}
    elems = candidate.ball(radius)
    for x in elems:
        t = tuple(cone[i].apply(x) for i in live)
        if t in seen:
            raise CertificateFailure(
                f"not injective: {candidate.format(seen[t])} and {candidate.format(x)} have the same image",
                witness=(candidate.format(seen[t]), candidate.format(x)),
            )
        seen[t] = x
    nodes = tuple(d.nodes[i] for i in live)
    lm = {v: n for n, v in enumerate(live)}
    arrows = tuple((lm[i], lm[j], h) for i, j, h in d.arrows if i in lm and j in lm)
    count = 0
    missing = []
    for t in _enumerate_compatible(nodes, arrows, {}, radius):
        count += 1
        if t not in seen:
            missing.append(t)
    # a short tuple can need a longer preimage (t^3 in C6 maps to short
    # coordinates), so look a little further out before giving up
    extra = _finite_diameter(candidate)
    r = radius
    while missing and r < radius + extra:
        r += 1
        for x in candidate.ball(r):
            if candidate.length(x) == r:
                seen.setdefault(tuple(cone[i].apply(x) for i in live), x)
        missing = [t for t in missing if t not in seen]
    if missing:
        shown = "[" + "; ".join(G.format(x) for G, x in zip(nodes, missing[0])) + "]"
        raise CertificateFailure(f"not surjective: tuple {shown} is not hit", witness=shown)
    return LimitCertificate(radius, candidate.name(), len(elems), count)


def _finite_diameter(G: Group) -> int:
    """Longest word needed in the finite direct factors of G."""
    parts = G.factors if isinstance(G, DirectProduct) else (G,)
    return sum(max(F.length(x) for x in F.elements()) for F in parts if F.is_finite)


# ---------------------------------------------------------------------------
# JSON


def group_from_json(data) -> Group:
    kind = data["kind"]
    if kind == "finite_abelian":
        return FiniteAbelian(tuple(data["factors"]))
    if kind == "finite_table":
        labels = data.get("labels")
        return FiniteTable(
            tuple(tuple(r) for r in data["table"]),
            tuple(data["generators"]),
            tuple(labels) if labels else None,
        )
    if kind == "free":
        return Free(int(data["rank"]))
    if kind == "free_product_cyclic":
        return FreeProductCyclic(tuple(None if o in (None, "inf") else int(o) for o in data["orders"]))
    if kind == "direct_product":
        return DirectProduct(tuple(group_from_json(f) for f in data["factors"]))
    if kind == "compatible_tuples":
        nodes = tuple(group_from_json(g) for g in data["nodes"])
        arrows = tuple(
            (a["source"], a["target"], Homomorphism(nodes[a["source"]], nodes[a["target"]], tuple(a["images"])))
            for a in data["arrows"]
        )
        return CompatibleTuples(nodes, arrows, data.get("lead"))
    raise ValueError(f"unknown group kind {kind!r}")


def parse_group(text: str) -> Group:
    """Parse short names: ``C4``, ``C2xC2``, ``F2``, ``Z``, ``C2*C2``, ``1``."""
    text = text.replace(" ", "")
    if text in ("1", "trivial"):
        return TRIVIAL
    if "*" in text:
        orders = []
        for tok in text.split("*"):
            orders.append(None if tok == "Z" else int(tok.lstrip("C")))
        return FreeProductCyclic(tuple(orders))
    if text == "Z":
        return Free(1)
    if text.startswith("F"):
        return Free(int(text[1:]))
    parts = [int(t.lstrip("C")) for t in text.split("x")]
    try:
        return FiniteAbelian(tuple(parts))
    except ValueError:
        return DirectProduct(tuple(cyclic(n) for n in parts))

"""Free-group words, group presentations and Dehn's metric algorithm.

Words are stored freely reduced.  Generator identifiers are strings with a
natural total order (``r2 < r10``).  Inside the package words are usually
handled in *encoded* form: a tuple of non-zero ints where ``+k`` / ``-k``
stand for the k-th generator of a presentation's alphabet and its inverse.
"""
from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from . import kernels

_TOKEN_INV = "^-1"
_NAT_SPLIT = re.compile(r"(\d+)")


def natural_key(name: str):
    """Sort key that orders embedded integers numerically."""
    return tuple(
        (0, int(tok), "") if tok.isdigit() else (1, 0, tok)
        for tok in _NAT_SPLIT.split(name)
        if tok
    )


class Letter(NamedTuple):
    gen: str
    sign: int = 1

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def __str__(self):
        return self.gen if self.sign > 0 else self.gen + _TOKEN_INV

    @classmethod
    def parse(cls, token: str) -> "Letter":
        if token.endswith(_TOKEN_INV):
            gen, sign = token[: -len(_TOKEN_INV)], -1
        else:
            gen, sign = token, 1
        if not gen or "^" in gen:
            raise ValueError(f"malformed letter token {token!r}")
        return cls(gen, sign)


def _reduce_letters(letters: Iterable[Letter]) -> tuple:
    out: list = []
    for l in letters:
        if out and out[-1].gen == l.gen and out[-1].sign == -l.sign:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word.  Build with ``Word.of``/``Word.parse`` to reduce."""

    letters: tuple = ()

    @classmethod
    def of(cls, letters: Iterable) -> "Word":
        return cls(_reduce_letters(Letter(*l) if not isinstance(l, Letter) else l for l in letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        return cls.of(Letter.parse(tok) for tok in text.split())

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __str__(self):
        return " ".join(str(l) for l in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __mul__(self, other: "Word") -> "Word":
        return compose(self, other)

    def generators(self) -> set:
        return {l.gen for l in self.letters}


EMPTY = Word()


def as_word(w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w)
    return Word.of(w)


def free_reduce(w) -> Word:
    if isinstance(w, Word):
        return Word(_reduce_letters(w.letters))
    return as_word(w)


def compose(w1, w2) -> Word:
    return Word(_reduce_letters(as_word(w1).letters + as_word(w2).letters))


def invert(w) -> Word:
    return Word(tuple(l.inverse() for l in reversed(as_word(w).letters)))


def cyclic_reduce(w):
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with core cyclically reduced."""
    letters = free_reduce(w).letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == letters[j - 1].inverse():
        i += 1
        j -= 1
    return Word(letters[i:j]), Word(letters[:i])


def rotations(w: Word):
    n = len(w)
    return [Word(w.letters[i:] + w.letters[:i]) for i in range(n)]


def symmetricize(relations: Iterable) -> tuple:
    """Closure under rotation and inversion of the cyclic cores, sorted by string."""
    out = set()
    for r in relations:
        core, _ = cyclic_reduce(as_word(r))
        if not core:
            continue
        for rot in rotations(core):
            out.add(rot)
            out.add(invert(rot))
    return tuple(sorted(out, key=lambda x: (len(x), str(x))))


class Equivalence(enum.Enum):
    PROVEN_EQUAL = "proven_equal"
    NOT_PROVEN = "not_proven"

    def __bool__(self):
        return self is Equivalence.PROVEN_EQUAL


class Presentation:
    """Immutable group presentation <alphabet | relations>.

    ``alphabet`` defaults to the generators occurring in ``relations``.
    """

    def __init__(self, alphabet: Iterable[str] | None = None, relations: Iterable = ()):
        rels = tuple(as_word(r) for r in relations)
        gens = set(alphabet) if alphabet is not None else set()
        used = set().union(*(r.generators() for r in rels)) if rels else set()
        if alphabet is None:
            gens = used
        elif not used <= gens:
            raise ValueError(f"relation letters outside alphabet: {sorted(used - gens)}")
        self._alphabet = tuple(sorted(gens, key=natural_key))
        self._index = {g: i + 1 for i, g in enumerate(self._alphabet)}
        self._relations = rels
        self._sym = symmetricize(rels)
        enc = sorted(set(self.encode(r) for r in self._sym))
        self._relset = kernels.RelationSet(enc)

    @property
    def alphabet(self) -> tuple:
        return self._alphabet

    @property
    def relations(self) -> tuple:
        return self._relations

    @property
    def symmetricized(self) -> tuple:
        return self._sym

    @property
    def relation_set(self):
        return self._relset

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self._alphabet == other._alphabet
            and self._relations == other._relations
        )

    def __hash__(self):
        return hash((self._alphabet, self._relations))

    def __repr__(self):
        return f"Presentation({len(self._alphabet)} generators, {len(self._relations)} relations)"

    # encoded form -------------------------------------------------------

    def index(self, gen: str) -> int:
        return self._index[gen]

    def encode(self, w) -> tuple:
        try:
            return tuple(self._index[l.gen] * l.sign for l in as_word(w).letters)
        except KeyError as e:
            raise ValueError(f"letter {e.args[0]!r} not in alphabet") from None

    def decode(self, seq: Sequence[int]) -> Word:
        return Word(tuple(Letter(self._alphabet[abs(x) - 1], 1 if x > 0 else -1) for x in seq))

    def reduce_encoded(self, seq, cyclic: bool = False) -> tuple:
        if cyclic:
            return kernels.dehn_cyclic(seq, self._relset)
        return kernels.dehn_linear(seq, self._relset)

    def key_encoded(self, seq) -> tuple:
        return kernels.dehn_linear(seq, self._relset)

    # serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self._alphabet),
            "relations": [str(r) for r in self._relations],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Presentation":
        return cls(d["alphabet"], [Word.parse(s) for s in d["relations"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        return cls.from_dict(json.loads(text))


def _with_extras(w: Word, p: Presentation):
    # words may mention generators absent from p; give them fresh codes
    extra = sorted({l.gen for l in w.letters} - set(p.alphabet), key=natural_key)
    if not extra:
        return p.encode(w), p.decode
    base = len(p.alphabet)
    idx = {g: base + i + 1 for i, g in enumerate(extra)}
    names = p.alphabet + tuple(extra)
    enc = tuple((p._index.get(l.gen) or idx[l.gen]) * l.sign for l in w.letters)

    def dec(seq):
        return Word(tuple(Letter(names[abs(x) - 1], 1 if x > 0 else -1) for x in seq))

    return enc, dec


def dehn_reduce(w, p: Presentation, cyclic: bool = False) -> Word:
    """Greedy Dehn rewriting.

    With ``cyclic=False`` matches are contiguous subwords of the open word;
    with ``cyclic=True`` the word is treated as a cyclic word and the result
    is cyclically reduced.  An empty result proves ``w`` trivial in the group.
    """
    enc, dec = _with_extras(as_word(w), p)
    if cyclic:
        return dec(kernels.dehn_cyclic(enc, p.relation_set))
    return dec(kernels.dehn_linear(enc, p.relation_set))


def equivalent(w1, w2, p: Presentation) -> Equivalence:
    diff = compose(w1, invert(w2))
    core = dehn_reduce(diff, p, cyclic=True)
    return Equivalence.PROVEN_EQUAL if len(core) == 0 else Equivalence.NOT_PROVEN


def equivalent_encoded(a: Sequence[int], b: Sequence[int], p: Presentation) -> Equivalence:
    diff = tuple(a) + tuple(-x for x in reversed(b))
    core = kernels.dehn_cyclic(diff, p.relation_set)
    return Equivalence.PROVEN_EQUAL if len(core) == 0 else Equivalence.NOT_PROVEN


def canonical_key(w, p: Presentation) -> str:
    """Serialized linear Dehn normal form; equal keys imply equal group elements."""
    return str(dehn_reduce(w, p, cyclic=False))

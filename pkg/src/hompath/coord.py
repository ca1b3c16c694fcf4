"""Letters, relations and edge signatures for N point robots on a grid.

Robot ``k`` (1-based) at cell ``(x_k, y_k)``.  The half-hyperplane
``u:m,p/s`` collects configurations with ``x_m = x_p``, ``y_m < y_p`` and,
for each ``m < n < p``, ``s_n = '-'`` when ``x_n >= x_m`` and ``'+'``
otherwise.  Joint moves interpolate linearly; coordinates are perturbed
symbolically as ``x_k + k*eps + k^2*eps^3`` and ``y_k + k*eps^2`` so every
comparison is decided exactly with integer arithmetic.

Orientation: crossing ``u:m,p/s`` while ``x_p - x_m`` increases gives the
letter with exponent ``+1`` when ``s`` has an even number of ``'+'`` entries
and ``-1`` otherwise (the reverse crossing flips it).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .words import Letter, Presentation, Word, natural_key


class InvalidConfigError(ValueError):
    pass


class CollisionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SignedLetter:
    m: int
    p: int
    signs: str = ""

    def __post_init__(self):
        if not (1 <= self.m < self.p):
            raise ValueError("need 1 <= m < p")
        if len(self.signs) != self.p - self.m - 1 or set(self.signs) - {"+", "-"}:
            raise ValueError(f"sign vector must have {self.p - self.m - 1} entries from '+-'")

    @property
    def id(self) -> str:
        base = f"u:{self.m},{self.p}"
        return f"{base}/{self.signs}" if self.signs else base

    @classmethod
    def parse(cls, text: str) -> "SignedLetter":
        if not text.startswith("u:"):
            raise ValueError(f"not a coordination letter: {text!r}")
        body = text[2:]
        pair, _, signs = body.partition("/")
        m, p = (int(v) for v in pair.split(","))
        return cls(m, p, signs)

    def __str__(self):
        return self.id


def enumerate_letters(N: int) -> list:
    if N < 2:
        raise ValueError("need at least two robots")
    out = []
    for m in range(1, N + 1):
        for p in range(m + 1, N + 1):
            for s in itertools.product("+-", repeat=p - m - 1):
                out.append(SignedLetter(m, p, "".join(s)))
    return sorted(out, key=lambda l: natural_key(l.id))


def _flip(letter: SignedLetter) -> int:
    return -1 if letter.signs.count("+") % 2 else 1


def _lw(*items) -> Word:
    # items: (SignedLetter, raw exponent) with raw exponents in the
    # "x_p - x_m increasing" convention; applies the parity flip
    return Word.of(Letter(l.id, e * _flip(l)) for l, e in items)


def triple_relations(N: int) -> list:
    """Relations from loops around triple collisions and their partial versions."""
    rels = []
    for m, n, p in itertools.combinations(range(1, N + 1), 3):
        others = [k for k in range(m + 1, p) if k != n]
        for s in itertools.product("+-", repeat=len(others)):
            sv = dict(zip(others, s))
            alpha = "".join(sv[k] for k in range(m + 1, n))
            beta = "".join(sv[k] for k in range(n + 1, p))

            def mp(sig):
                return "".join(sig if k == n else sv[k] for k in range(m + 1, p))

            a = SignedLetter(m, n, alpha)
            c = SignedLetter(m, p, mp("-"))
            b = SignedLetter(m, p, mp("+"))
            d = SignedLetter(n, p, beta)
            rels.append(_lw((a, 1), (c, 1), (d, 1), (a, -1), (b, -1), (d, -1)))
            rels.append(_lw((a, 1), (c, 1), (a, -1), (b, -1)))
            rels.append(_lw((c, 1), (d, 1), (b, -1), (d, -1)))
    return rels


def commutator_relations(N: int) -> list:
    letters = enumerate_letters(N)
    rels = []
    for i, u in enumerate(letters):
        for v in letters[i + 1:]:
            if {u.m, u.p} & {v.m, v.p}:
                continue
            rels.append(Word.parse(f"{u.id} {v.id} {u.id}^-1 {v.id}^-1"))
    return rels


def enumerate_relations(N: int) -> Presentation:
    letters = enumerate_letters(N)
    return Presentation([l.id for l in letters], triple_relations(N) + commutator_relations(N))


# ---------------------------------------------------------------------------
# joint configurations


@dataclass(frozen=True)
class CoordScene:
    """``N`` robots on a ``width x height`` grid of cells."""

    N: int
    grid: tuple
    cell_size: float = 1.0
    start: tuple | None = None
    goal: tuple | None = None

    def __post_init__(self):
        if int(self.N) < 2:
            raise InvalidConfigError("N must be at least 2")
        g = tuple(int(v) for v in self.grid)
        if len(g) != 2 or min(g) < 1:
            raise InvalidConfigError("grid must be [width, height] with positive entries")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "grid", g)
        for name in ("start", "goal"):
            cfg = getattr(self, name)
            if cfg is not None:
                cfg = joint_config(cfg)
                self.validate(cfg, name)
                object.__setattr__(self, name, cfg)

    def validate(self, cfg, what="configuration"):
        if len(cfg) != self.N:
            raise InvalidConfigError(f"{what}: expected {self.N} robots, got {len(cfg)}")
        w, h = self.grid
        for i, (x, y) in enumerate(cfg):
            if not (0 <= x < w and 0 <= y < h):
                raise InvalidConfigError(f"{what}: robot {i + 1} out of bounds")
        if len(set(cfg)) != len(cfg):
            raise InvalidConfigError(f"{what}: two robots share a cell")

    def to_dict(self) -> dict:
        d = {"format": 1, "N": self.N, "grid": list(self.grid)}
        if self.cell_size != 1.0:
            d["cell_size"] = self.cell_size
        if self.start is not None:
            d["start"] = [list(p) for p in self.start]
        if self.goal is not None:
            d["goal"] = [list(p) for p in self.goal]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CoordScene":
        return cls(
            d["N"], tuple(d["grid"]), float(d.get("cell_size", 1.0)), d.get("start"), d.get("goal")
        )


def joint_config(positions) -> tuple:
    """Canonical joint configuration: a tuple of integer (x, y) cells."""
    return tuple((int(p[0]), int(p[1])) for p in positions)


def move_collides(frm, to) -> bool:
    """True if linear interpolation brings two robots onto one point."""
    N = len(frm)
    for m in range(N):
        xm, ym = frm[m]
        dxm, dym = to[m][0] - xm, to[m][1] - ym
        for p in range(m + 1, N):
            D0 = xm - frm[p][0]
            E0 = ym - frm[p][1]
            dD = dxm - (to[p][0] - frm[p][0])
            dE = dym - (to[p][1] - frm[p][1])
            if dD == 0:
                if D0 != 0:
                    continue
                if dE == 0:
                    if E0 == 0:
                        return True
                    continue
                # E0 + t dE = 0 for t in [0, 1]
                if 0 <= -E0 * dE <= dE * dE:
                    return True
                continue
            # t = -D0/dD in [0, 1], and y difference vanishes there
            if not (0 <= -D0 * dD <= dD * dD):
                continue
            if E0 * dD - D0 * dE == 0:
                return True
    return False


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def crossing_events(frm, to) -> list:
    """Letter crossings of a joint move, each ``(sort key, SignedLetter, exponent)``."""
    N = len(frm)
    events = []
    for mi in range(N):
        m = mi + 1
        xm, ym = frm[mi]
        dxm, dym = to[mi][0] - xm, to[mi][1] - ym
        for pi in range(mi + 1, N):
            p = pi + 1
            D0 = xm - frm[pi][0]
            dD = dxm - (to[pi][0] - frm[pi][0])
            if dD == 0:
                continue
            s0 = _sgn(D0) or -1
            s1 = _sgn(D0 + dD) or -1
            if s0 == s1:
                continue
            E0 = ym - frm[pi][1]
            dE = dym - (to[pi][1] - frm[pi][1])
            # y_m - y_p at the crossing instant, scaled by dD^2
            lead = (E0 * dD - D0 * dE) * dD or (p - m) * dE * dD or (m - p)
            if lead >= 0:
                continue
            signs = []
            for ni in range(mi + 1, pi):
                n = ni + 1
                a0 = frm[ni][0] - xm
                b = (to[ni][0] - frm[ni][0]) - dxm
                q = (
                    (a0 * dD - D0 * b) * dD
                    or (b * (p - m) + (n - m) * dD) * dD
                    or (b * (p * p - m * m) + (n * n - m * m) * dD) * dD
                )
                signs.append("-" if q > 0 else "+")
            letter = SignedLetter(m, p, "".join(signs))
            expo = (1 if dD < 0 else -1) * _flip(letter)
            key = (Fraction(-D0, dD), Fraction(p - m, dD), Fraction(p * p - m * m, dD), m, p)
            events.append((key, letter, expo))
    events.sort(key=lambda e: e[0])
    return events


def _codes(frm, to, index) -> tuple:
    out = []
    for _, letter, e in crossing_events(frm, to):
        x = e * index[letter.id]
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def signature_codes_coord(frm, to, index) -> tuple:
    """Encoded signature with exact reversal: evaluated in a canonical direction."""
    if tuple(frm) > tuple(to):
        return tuple(-x for x in reversed(_codes(to, frm, index)))
    return _codes(frm, to, index)


_NAME_INDEX: dict = {}


def _index_for(N):
    if N not in _NAME_INDEX:
        names = sorted((l.id for l in enumerate_letters(N)), key=natural_key)
        _NAME_INDEX[N] = ({g: i + 1 for i, g in enumerate(names)}, names)
    return _NAME_INDEX[N]


def edge_signature_coord(frm, to, N: int | None = None) -> Word:
    frm = joint_config(frm)
    to = joint_config(to)
    N = N if N is not None else len(frm)
    if len(frm) != N or len(to) != N:
        raise InvalidConfigError("configuration size mismatch")
    if move_collides(frm, to):
        raise CollisionError(f"move {frm} -> {to} passes through a collision")
    index, names = _index_for(N)
    codes = signature_codes_coord(frm, to, index)
    return Word(tuple(Letter(names[abs(x) - 1], 1 if x > 0 else -1) for x in codes))


def path_signature_coord(configs, N: int | None = None) -> Word:
    w = Word()
    for a, b in zip(configs[:-1], configs[1:]):
        w = w * edge_signature_coord(a, b, N)
    return w


ROBOT_STEPS = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))


def joint_moves(cfg, scene: CoordScene):
    """Collision-free joint moves from ``cfg``: list of (target, cost)."""
    w, h = scene.grid
    options = []
    for x, y in cfg:
        opts = []
        for dx, dy in ROBOT_STEPS:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h:
                opts.append(((nx, ny), dx != 0 or dy != 0))
        options.append(opts)
    out = []
    for combo in itertools.product(*options):
        cost = sum(1 for _, moved in combo if moved)
        if cost == 0:
            continue
        tgt = tuple(c for c, _ in combo)
        if len(set(tgt)) != len(tgt):
            continue
        if move_collides(cfg, tgt):
            continue
        out.append((tgt, cost))
    return out

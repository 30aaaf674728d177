"""Finite presentations and Todd-Coxeter coset enumeration."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import EnumerationOverflow, InvalidSpec, ParseError
from .perm import PermGroup

_NAME = re.compile(r"[a-z][a-z0-9_]*")
_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*")


@dataclass(frozen=True)
class Presentation:
    """Generators 1..n; a relator is a tuple of signed 1-based generator indices."""

    generator_count: int
    relators: tuple = ()
    names: tuple = field(default=())

    def __post_init__(self):
        if self.generator_count < 1:
            raise InvalidSpec("a presentation needs at least one generator")
        for rel in self.relators:
            for s in rel:
                if s == 0 or abs(s) > self.generator_count:
                    raise InvalidSpec(f"relator letter {s} out of range")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i + 1}" for i in range(self.generator_count)))

    def word_str(self, word):
        parts = [self.names[abs(s) - 1] if s > 0 else self.names[abs(s) - 1].upper() for s in word]
        return "*".join(parts) or "1"

    def __str__(self):
        return ",".join(self.names) + " | " + ", ".join(self.word_str(r) for r in self.relators)


def _parse_word(text, lookup, line, col0):
    word = []
    if text.strip() in ("", "1"):
        return word
    pos = 0
    for chunk in text.split("*"):
        m = _TOKEN.fullmatch(chunk)
        if not m:
            raise ParseError(f"bad word factor {chunk.strip()!r}", line, col0 + pos + 1)
        name, power = m.group(1), int(m.group(2) or 1)
        sign = 1
        if name not in lookup:
            if name.lower() in lookup and name == name.upper():
                sign = -1
                name = name.lower()
            else:
                raise ParseError(f"unknown generator {name!r}", line, col0 + pos + 1)
        letter = lookup[name] * sign
        if power < 0:
            letter, power = -letter, -power
        word.extend([letter] * power)
        pos += len(chunk) + 1
    return word


def free_reduce(word):
    out = []
    for s in word:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return out


def parse_presentation(text: str, line: int | None = None) -> Presentation:
    """Parse ``x,y | x^4, x^2*Y^2, Y*x*y*x``; ``lhs = rhs`` is accepted too."""
    if text.count("|") != 1:
        raise ParseError("presentation must have the form '<gens> | <relators>'", line, 1)
    gens_txt, rels_txt = text.split("|")
    names = [g.strip() for g in gens_txt.split(",")]
    for i, n in enumerate(names):
        if not _NAME.fullmatch(n):
            raise ParseError(f"bad generator name {n!r}", line, gens_txt.find(n) + 1 if n else 1)
    if len(set(names)) != len(names):
        raise ParseError("repeated generator name", line, 1)
    lookup = {n: i + 1 for i, n in enumerate(names)}
    rels = []
    offset = len(gens_txt) + 1
    for chunk in rels_txt.split(","):
        if "=" in chunk:
            lhs, rhs = chunk.split("=", 1)
            w = _parse_word(lhs, lookup, line, offset) + [-s for s in reversed(_parse_word(rhs, lookup, line, offset))]
        else:
            w = _parse_word(chunk, lookup, line, offset)
        w = free_reduce(w)
        if w:
            rels.append(tuple(w))
        offset += len(chunk) + 1
    return Presentation(len(names), tuple(rels), tuple(names))


class _CosetTable:
    def __init__(self, ngens, max_cosets):
        self.ncols = 2 * ngens
        self.rows = [[None] * self.ncols]
        self.fwd = [0]
        self.max_cosets = max_cosets

    def rep(self, c):
        fwd = self.fwd
        r = c
        while fwd[r] != r:
            r = fwd[r]
        while fwd[c] != r:
            fwd[c], c = r, fwd[c]
        return r

    def define(self, c, x):
        n = len(self.rows)
        if n >= self.max_cosets:
            raise EnumerationOverflow(f"coset table exceeded {self.max_cosets} cosets")
        self.rows.append([None] * self.ncols)
        self.fwd.append(n)
        self.rows[c][x] = n
        self.rows[n][x ^ 1] = c

    def scan_and_fill(self, c, word):
        rows = self.rows
        f = b = c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and rows[f][word[i]] is not None:
                f = rows[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and rows[b][word[j] ^ 1] is not None:
                b = rows[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                rows[f][word[i]] = b
                rows[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def coincidence(self, a, b):
        rows = self.rows
        queue = []

        def merge(k, l):
            k, l = self.rep(k), self.rep(l)
            if k != l:
                lo, hi = min(k, l), max(k, l)
                self.fwd[hi] = lo
                queue.append(hi)

        merge(a, b)
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            for x in range(self.ncols):
                f = rows[e][x]
                if f is None:
                    continue
                if rows[f][x ^ 1] == e:
                    rows[f][x ^ 1] = None
                e1, f1 = self.rep(e), self.rep(f)
                if rows[e1][x] is not None:
                    merge(f1, rows[e1][x])
                elif rows[f1][x ^ 1] is not None:
                    merge(e1, rows[f1][x ^ 1])
                else:
                    rows[e1][x] = f1
                    rows[f1][x ^ 1] = e1

    def live(self, c):
        return self.fwd[c] == c


def _letters_to_cols(word):
    return [2 * (s - 1) if s > 0 else 2 * (-s - 1) + 1 for s in word]


def coset_table(p: Presentation, max_cosets: int = 1_000_000):
    """HLT enumeration over the trivial subgroup; returns standardised columns."""
    if max_cosets < 1:
        raise InvalidSpec("max_cosets must be positive")
    tab = _CosetTable(p.generator_count, max_cosets)
    rels = [_letters_to_cols(r) for r in p.relators]
    c = 0
    while c < len(tab.rows):
        for r in rels:
            if not tab.live(c):
                break
            tab.scan_and_fill(c, r)
        if tab.live(c):
            for x in range(tab.ncols):
                if tab.rows[c][x] is None:
                    tab.define(c, x)
        c += 1
    # standardise: breadth-first renumbering from coset 0
    order = {0: 0}
    queue = [0]
    for c in queue:
        for x in range(tab.ncols):
            d = tab.rep(tab.rows[c][x])
            if d not in order:
                order[d] = len(queue)
                queue.append(d)
    cols = np.empty((p.generator_count, len(queue)), dtype=np.int64)
    for c in queue:
        for g in range(p.generator_count):
            cols[g, order[c]] = order[tab.rep(tab.rows[c][2 * g])]
    return cols


def coset_enumerate(p: Presentation, max_cosets: int = 1_000_000) -> PermGroup:
    """Regular permutation representation of the finitely presented group."""
    cols = coset_table(p, max_cosets)
    # the coset action on the trivial subgroup is regular, so |G| = #cosets
    return PermGroup(list(cols), cols.shape[1], known_order=cols.shape[1])


def evaluate_word(word, gen_arrays):
    """Image array of a signed-letter word at the given generator arrays."""
    deg = len(gen_arrays[0])
    cur = np.arange(deg)
    invs = {}
    for s in word:
        g = gen_arrays[abs(s) - 1]
        if s < 0:
            g = invs.setdefault(s, np.argsort(g))
        cur = g[cur]
    return cur

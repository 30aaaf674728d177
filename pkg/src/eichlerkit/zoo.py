"""Named groups: cyclic, quaternion, binary polyhedral, products, catalogs."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import InvalidSpec, ParseError, ValidationError
from .perm import Permutation, PermGroup
from .presentation import coset_enumerate, parse_presentation

KINDS = ("cyclic", "quaternion", "binary_tetrahedral", "binary_octahedral",
         "binary_icosahedral", "product", "semidirect", "presentation", "perm", "catalog_ref")
_PROVENANCE_RANK = {"builtin": 0, "presentation_file": 1, "external": 2}
_BO_PRESENTATION = "r,s,t | r^2 = s^3, s^3 = t^4, t^4 = r*s*t"


@dataclass(frozen=True)
class GroupSpec:
    """A recipe for a group.

    ``params`` by kind: cyclic/quaternion ``(n,)`` (the order); product a
    tuple of factor specs; presentation ``(text, key)``; perm
    ``(degree, cycles_per_generator)``; semidirect ``(base, acting,
    images)``; catalog_ref ``(name, resolved_spec)``.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown group kind {self.kind!r}")
        if self.kind == "quaternion":
            n4 = self.params[0]
            if n4 < 8 or n4 % 4:
                raise InvalidSpec(f"Q({n4}) needs order 4n with n >= 2")
        if self.kind == "cyclic" and self.params[0] < 1:
            raise InvalidSpec("C(n) needs n >= 1")
        if self.kind == "product" and not self.params:
            raise InvalidSpec("a product needs at least one factor")

    def __str__(self):
        k, p = self.kind, self.params
        if k == "cyclic":
            return f"C{p[0]}"
        if k == "quaternion":
            return f"Q{p[0]}"
        if k == "binary_tetrahedral":
            return "BT"
        if k == "binary_octahedral":
            return "BO"
        if k == "binary_icosahedral":
            return "BI"
        if k == "product":
            return " x ".join(f"({f})" if f.kind in ("product", "semidirect") else str(f) for f in p)
        if k == "presentation":
            return p[1] or "<" + p[0] + ">"
        if k == "catalog_ref":
            return p[0]
        if k == "perm":
            return f"perm[{p[0]}]"
        return f"({p[0]}):({p[1]})"


def cyclic(n):
    return GroupSpec("cyclic", (n,))


def quaternion(n4):
    return GroupSpec("quaternion", (n4,))


BT = GroupSpec("binary_tetrahedral")
BO = GroupSpec("binary_octahedral")
BI = GroupSpec("binary_icosahedral")


def product(*factors):
    flat = []
    for f in factors:
        flat.extend(f.params if f.kind == "product" else [f])
    return GroupSpec("product", tuple(flat))


def small_group(order, ident):
    key = f"SG({order},{ident})"
    table = presentation_table()
    if key not in table:
        raise InvalidSpec(f"no shipped presentation for {key}")
    return GroupSpec("presentation", (table[key][1], key, order))


@dataclass(eq=False)
class NamedGroup:
    """A group with a display name, its permutation group and its factors."""

    name: str
    group: PermGroup
    factors: list = field(default_factory=list)
    provenance: str = "builtin"
    declared_order: int | None = None
    spec: GroupSpec | None = None
    meta: dict = field(default_factory=dict)

    @property
    def perm_group(self) -> PermGroup:
        return self.group

    @property
    def factor_tables(self):
        return self.factors

    def order(self) -> int:
        if self.factors:
            out = 1
            for f in self.factors:
                out *= f.order()
            return out
        return self.group.order()

    def __repr__(self):
        return f"NamedGroup({self.name!r}, order={self.order()})"


def _sl2_action(p):
    vecs = [(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)]
    index = {v: i for i, v in enumerate(vecs)}

    def mat(m):
        return [index[((m[0] * a + m[1] * b) % p, (m[2] * a + m[3] * b) % p)] for a, b in vecs]

    return PermGroup([mat((1, 1, 0, 1)), mat((0, p - 1, 1, 0))])


def direct_product_group(groups) -> PermGroup:
    """Direct product acting on disjoint blocks of points."""
    degree = sum(g.degree for g in groups)
    gens, offset = [], 0
    for g in groups:
        for a in g.gen_arrays:
            img = np.arange(degree)
            img[offset:offset + g.degree] = a + offset
            gens.append(img)
        offset += g.degree
    known = 1
    for g in groups:
        known *= g.order()
    return PermGroup(gens, degree, known_order=known)


def semidirect_group(base: PermGroup, acting: PermGroup, images) -> PermGroup:
    """base x| acting, acting generator i sending base generator j to images[i][j].

    Each image is a word (list of signed 1-based base generator indices).
    The group acts on base elements (x -> phi_a(x) b) and on acting's points.
    """
    from .presentation import evaluate_word

    tab = base.table()
    bgens = base.gen_arrays
    if len(images) != len(acting.gen_arrays):
        raise InvalidSpec("need one automorphism per acting generator")
    autos = []
    for imgs in images:
        if len(imgs) != len(bgens):
            raise InvalidSpec("an automorphism must give an image for every base generator")
        gen_img = [tab.index_of(evaluate_word(w, bgens)) for w in imgs]
        phi = np.full(tab.size, -1, dtype=np.int64)
        phi[0] = 0
        frontier = np.array([0])
        while frontier.size:
            nxt = []
            for j, gm in enumerate(tab.gen_maps):
                child = gm[frontier]
                new = phi[child] < 0
                child, par = child[new], frontier[new]
                child, first = np.unique(child, return_index=True)
                phi[child] = tab.mul(phi[par[first]], gen_img[j])
                nxt.append(child)
            frontier = np.concatenate(nxt)
        if len(set(phi.tolist())) != tab.size:
            raise InvalidSpec("automorphism images are not bijective")
        for j, gm in enumerate(tab.gen_maps):
            if not np.array_equal(phi[gm], tab.mul(phi, gen_img[j])):
                raise InvalidSpec("generator images do not define a homomorphism")
        autos.append(phi)
    n, m = tab.size, acting.degree
    gens = []
    for gm in tab.gen_maps:
        gens.append(np.concatenate([gm, n + np.arange(m)]))
    for phi, a in zip(autos, acting.gen_arrays):
        gens.append(np.concatenate([phi, n + a]))
    g = PermGroup(gens, n + m)
    expected = n * acting.order()
    if g.order() != expected:
        raise InvalidSpec(f"action is not a homomorphism into Aut(base): order {g.order()} != {expected}")
    return g


@lru_cache(maxsize=None)
def build(spec: GroupSpec) -> NamedGroup:
    """Construct (and cache) the named group described by ``spec``."""
    k, p = spec.kind, spec.params
    name = str(spec)
    if k == "cyclic":
        n = p[0]
        g = PermGroup([np.roll(np.arange(n), -1)], n)
        return NamedGroup(name, g, spec=spec, declared_order=n)
    if k == "quaternion":
        n = p[0] // 4
        text = f"x,y | x^{2 * n}, y^2*x^{-n}, Y*x*y*x"
        g = coset_enumerate(parse_presentation(text), 20 * p[0])
        return NamedGroup(name, _checked(g, p[0], name), spec=spec, declared_order=p[0])
    if k == "binary_tetrahedral":
        return NamedGroup(name, _checked(_sl2_action(3), 24, name), spec=spec, declared_order=24)
    if k == "binary_icosahedral":
        return NamedGroup(name, _checked(_sl2_action(5), 120, name), spec=spec, declared_order=120)
    if k == "binary_octahedral":
        g = coset_enumerate(parse_presentation(_BO_PRESENTATION), 20 * 48)
        return NamedGroup(name, _checked(g, 48, name), spec=spec, declared_order=48)
    if k == "product":
        factors = [build(f) for f in p]
        if len(factors) == 1:
            return factors[0]
        g = direct_product_group([f.group for f in factors])
        prov = max((f.provenance for f in factors), key=_PROVENANCE_RANK.get)
        return NamedGroup(name, g, factors, prov, spec=spec)
    if k == "presentation":
        text, key = p[0], p[1]
        expected = p[2] if len(p) > 2 else None
        cap = 20 * expected if expected else 1_000_000
        g = coset_enumerate(parse_presentation(text), cap)
        if expected:
            g = _checked(g, expected, name)
        prov = "presentation_file" if key else "external"
        return NamedGroup(name, g, provenance=prov, spec=spec, declared_order=expected)
    if k == "perm":
        degree, gens = p
        perms = [Permutation.from_cycles(c, degree) for c in gens] or [Permutation.identity(degree)]
        return NamedGroup(name, PermGroup(perms, degree), provenance="external", spec=spec)
    if k == "semidirect":
        base, acting, images = p
        g = semidirect_group(build(base).group, build(acting).group, images)
        return NamedGroup(name, g, provenance="external", spec=spec)
    if k == "catalog_ref":
        inner = build(p[1])
        return inner
    raise InvalidSpec(f"unknown kind {k}")


def _checked(g, expected, name):
    if g.order() != expected:
        raise ValidationError(f"order of {name}", expected, g.order())
    return g


# -- presentation data -------------------------------------------------------
@lru_cache(maxsize=None)
def presentation_table(path: str | None = None) -> dict:
    """key -> (order, presentation text) from a presentations file."""
    if path is None:
        text = resources.files("eichlerkit").joinpath("data/presentations.dat").read_text()
    else:
        text = Path(path).read_text()
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"(\S+)\s+order=(\d+)\s*\|\s*(.*)", line)
        if not m:
            raise ParseError("expected '<key> order=<n> | <presentation>'", lineno, 1)
        parse_presentation(m.group(3), lineno)
        out[m.group(1)] = (int(m.group(2)), m.group(3))
    return out


# -- catalog format ------------------------------------------------------------
_BUILTIN_WORDS = {"BT": BT, "BO": BO, "BI": BI}


def _split_top(text, sep):
    """Split on ``sep`` outside brackets; returns (piece, offset) pairs."""
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            parts.append((text[start:i], start))
            start = i + len(sep)
            i = start
            continue
        i += 1
    parts.append((text[start:], start))
    return parts


def parse_group_expr(text: str, names: dict | None = None, line: int | None = None,
                     col: int = 1) -> GroupSpec:
    """Parse a catalog group expression such as ``BT x C(2)`` or ``Q(24)``."""
    names = names or {}
    parts = _split_top(text, " x ")
    if len(parts) > 1:
        return product(*(parse_group_expr(t, names, line, col + off) for t, off in parts))
    lead = len(text) - len(text.lstrip())
    t = text.strip()
    col += lead
    if not t:
        raise ParseError("empty group expression", line, col)
    if t.startswith("(") and t.endswith(")") and _split_top(t[1:-1], " x ") and _balanced(t[1:-1]):
        return parse_group_expr(t[1:-1], names, line, col + 1)
    if t in _BUILTIN_WORDS:
        return _BUILTIN_WORDS[t]
    m = re.fullmatch(r"(C|Q)\(\s*(\d+)\s*\)", t)
    if m:
        n = int(m.group(2))
        try:
            return cyclic(n) if m.group(1) == "C" else quaternion(n)
        except InvalidSpec as exc:
            raise ParseError(str(exc), line, col) from None
    m = re.fullmatch(r"SG\(\s*(\d+)\s*,\s*([A-Za-z0-9_]+)\s*\)(?::(.*))?", t, re.S)
    if m:
        order, ident, inline = int(m.group(1)), m.group(2), m.group(3)
        key = f"SG({order},{ident})"
        if inline is not None:
            try:
                parse_presentation(inline, line)
            except ParseError as exc:
                raise ParseError(exc.args[0].split(" (")[0], line, col + m.start(3)) from None
            return GroupSpec("presentation", (inline.strip(), key, order))
        table = presentation_table()
        if key not in table:
            raise ParseError(f"no shipped presentation for {key}", line, col)
        return GroupSpec("presentation", (table[key][1], key, order))
    m = re.fullmatch(r"perm\[\s*(\d+)\s*\]\s*:(.*)", t, re.S)
    if m:
        return _parse_perm(int(m.group(1)), m.group(2), line, col + m.start(2))
    m = re.fullmatch(r"SD\((.*)\)", t, re.S)
    if m:
        return _parse_semidirect(m.group(1), names, line, col + 3)
    if t in names:
        return GroupSpec("catalog_ref", (t, names[t]))
    raise ParseError(f"unknown group expression {t!r}", line, col)


def _balanced(t):
    depth = 0
    for ch in t:
        depth += ch in "([{"
        depth -= ch in ")]}"
        if depth < 0:
            return False
    return depth == 0


def _parse_perm(degree, body, line, col):
    gens = []
    for chunk, off in _split_top(body, ";"):
        off += len(chunk) - len(chunk.lstrip())
        chunk = chunk.strip()
        if not chunk or chunk == "()":
            gens.append(())
            continue
        if not re.fullmatch(r"(\(\s*\d+(\s*,\s*\d+)*\s*\)\s*)+", chunk):
            raise ParseError(f"bad cycle list {chunk!r}", line, col + off)
        cycles = tuple(tuple(int(x) for x in c.split(",")) for c in re.findall(r"\(([^)]*)\)", chunk))
        try:
            Permutation.from_cycles(cycles, degree)
        except InvalidSpec as exc:
            raise ParseError(str(exc), line, col + off) from None
        gens.append(cycles)
    return GroupSpec("perm", (degree, tuple(gens)))


def _parse_semidirect(body, names, line, col):
    """``SD(base, acting, {w,...}, {w,...})`` with words in g1, g2, ..."""
    parts = _split_top(body, ",")
    if len(parts) < 3:
        raise ParseError("SD needs base, acting group and one image list per acting generator", line, col)
    base = parse_group_expr(parts[0][0], names, line, col + parts[0][1])
    acting = parse_group_expr(parts[1][0], names, line, col + parts[1][1])
    images = []
    for chunk, off in parts[2:]:
        chunk = chunk.strip()
        if not (chunk.startswith("{") and chunk.endswith("}")):
            raise ParseError("automorphism images must be wrapped in {...}", line, col + off)
        words = [w.strip() for w in chunk[1:-1].split(",")]
        images.append(tuple(tuple(_parse_gword(w, line, col + off)) for w in words))
    return GroupSpec("semidirect", (base, acting, tuple(images)))


def _parse_gword(word, line, col):
    out = []
    if word in ("", "1"):
        return out
    for tok in word.split("*"):
        m = re.fullmatch(r"\s*([gG])(\d+)\s*(?:\^\s*(-?\d+))?\s*", tok)
        if not m:
            raise ParseError(f"bad automorphism word factor {tok!r}", line, col)
        letter = int(m.group(2)) * (1 if m.group(1) == "g" else -1)
        power = int(m.group(3) or 1)
        if power < 0:
            letter, power = -letter, -power
        out.extend([letter] * power)
    return out


@dataclass
class CatalogEntry:
    name: str
    spec: GroupSpec
    declared_order: int | None
    meta: dict
    line: int


def parse_catalog(text: str) -> list[CatalogEntry]:
    """Parse ``name = <expr>  # order=<k> key=value ...`` lines."""
    entries, names = [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        if not body.strip():
            continue
        if "=" not in body:
            raise ParseError("expected 'name = <group expression>'", lineno, 1)
        name, expr = body.split("=", 1)
        name = name.strip()
        if not re.fullmatch(r"[^\s=#]+", name or " "):
            raise ParseError(f"bad entry name {name!r}", lineno, 1)
        if name in names:
            raise ParseError(f"duplicate entry name {name!r}", lineno, 1)
        spec = parse_group_expr(expr, names, lineno, len(body.split("=", 1)[0]) + 2)
        if name in _BUILTIN_WORDS and spec != _BUILTIN_WORDS[name]:
            raise ParseError(f"entry name {name!r} clashes with a builtin", lineno, 1)
        meta = dict(re.findall(r"(\w+)=(\S+)", comment))
        order = None
        if "order" in meta:
            try:
                order = int(meta["order"])
            except ValueError:
                raise ParseError(f"bad order {meta['order']!r}", lineno, len(body) + 2) from None
        names[name] = spec
        entries.append(CatalogEntry(name, spec, order, meta, lineno))
    return entries


def load_catalog(path=None) -> list[NamedGroup]:
    """Build and validate every entry of a catalog file (default: the shipped one)."""
    if path is None:
        text = resources.files("eichlerkit").joinpath("data/appendixA.catalog").read_text()
    else:
        text = Path(path).read_text()
    out = []
    for entry in parse_catalog(text):
        inner = build(entry.spec)
        ng = NamedGroup(entry.name, inner.group, inner.factors, inner.provenance,
                        entry.declared_order, entry.spec, dict(entry.meta))
        if entry.declared_order is not None and ng.order() != entry.declared_order:
            raise ValidationError(f"order of catalog entry {entry.name}", entry.declared_order, ng.order())
        ng.meta["line"] = entry.line
        out.append(ng)
    return out


def get_group(expr: str, catalog: list[NamedGroup] | None = None) -> NamedGroup:
    """Resolve a catalog name or a group expression to a NamedGroup."""
    catalog = catalog if catalog is not None else default_catalog()
    for g in catalog:
        if g.name == expr.strip():
            return g
    names = {g.name: g.spec for g in catalog}
    spec = parse_group_expr(expr, names)
    inner = build(spec)
    return NamedGroup(str(spec) if spec.kind != "catalog_ref" else spec.params[0], inner.group,
                      inner.factors, inner.provenance, inner.declared_order, spec)


@lru_cache(maxsize=1)
def _default_catalog():
    return tuple(load_catalog())


def default_catalog() -> list[NamedGroup]:
    return list(_default_catalog())

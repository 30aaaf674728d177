import cmath
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eichlerkit.perm import PermGroup  # noqa: E402
from eichlerkit.zoo import default_catalog  # noqa: E402


def cyclic_gens(n):
    return [tuple((i + 1) % n for i in range(n))]


def dihedral_gens(n):
    return [tuple((i + 1) % n for i in range(n)), tuple((-i) % n for i in range(n))]


def disjoint(*gen_lists):
    """Generators of the direct product acting on disjoint blocks."""
    degrees = [len(g[0]) for g in gen_lists]
    total = sum(degrees)
    out, offset = [], 0
    for gens, d in zip(gen_lists, degrees):
        for g in gens:
            p = list(range(total))
            for i, x in enumerate(g):
                p[offset + i] = offset + x
            out.append(tuple(p))
        offset += d
    return out


def matrix_group_gens(mats, mod=None):
    """Right-regular permutations of the group generated by 2x2 matrices."""
    def key(m):
        if mod:
            return tuple(int(x) % mod for x in m.ravel())
        return tuple(complex(round(z.real, 8), round(z.imag, 8)) for z in m.ravel())

    def mul(a, b):
        c = a @ b
        return c % mod if mod else c

    ident = np.eye(2, dtype=object if mod else complex)
    elems = {key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in mats:
                y = mul(x, g)
                if key(y) not in elems:
                    elems[key(y)] = y
                    nxt.append(y)
        frontier = nxt
    keys = sorted(elems, key=str)
    pos = {k: i for i, k in enumerate(keys)}
    return [tuple(pos[key(mul(elems[k], g))] for k in keys) for g in mats]


def quaternion_gens(n4):
    n = n4 // 4
    z = cmath.exp(1j * cmath.pi / n)
    x = np.array([[z, 0], [0, 1 / z]])
    y = np.array([[0, -1], [1, 0]], dtype=complex)
    return matrix_group_gens([x, y])


def sl23_gens():
    a = np.array([[1, 1], [0, 1]], dtype=object)
    b = np.array([[0, 2], [1, 0]], dtype=object)
    return matrix_group_gens([a, b], mod=3)


def c3_c8_gens():
    w = cmath.exp(2j * cmath.pi / 3)
    z = cmath.exp(2j * cmath.pi / 8)
    return matrix_group_gens([np.array([[w, 0], [0, 1 / w]]), np.array([[0, z], [z, 0]])])


SMALL = {
    "C1": [(0,)],
    "C2": cyclic_gens(2),
    "C3": cyclic_gens(3),
    "C4": cyclic_gens(4),
    "C2xC2": disjoint(cyclic_gens(2), cyclic_gens(2)),
    "C5": cyclic_gens(5),
    "C6": cyclic_gens(6),
    "S3": dihedral_gens(3),
    "C7": cyclic_gens(7),
    "C8": cyclic_gens(8),
    "C4xC2": disjoint(cyclic_gens(4), cyclic_gens(2)),
    "C2^3": disjoint(cyclic_gens(2), cyclic_gens(2), cyclic_gens(2)),
    "D8": dihedral_gens(4),
    "Q8": quaternion_gens(8),
    "C9": cyclic_gens(9),
    "C3xC3": disjoint(cyclic_gens(3), cyclic_gens(3)),
    "D10": dihedral_gens(5),
    "C12": cyclic_gens(12),
    "A4": [(1, 2, 0, 3), (1, 0, 3, 2)],
    "D12": dihedral_gens(6),
    "Q12": quaternion_gens(12),
    "D14": dihedral_gens(7),
    "Q16": quaternion_gens(16),
    "D16": dihedral_gens(8),
    "SD16": [tuple((i + 1) % 8 for i in range(8)), tuple((3 * i) % 8 for i in range(8))],
    "Q8xC2": disjoint(quaternion_gens(8), cyclic_gens(2)),
    "C4xC4": disjoint(cyclic_gens(4), cyclic_gens(4)),
    "D18": dihedral_gens(9),
    "C3xS3": disjoint(cyclic_gens(3), dihedral_gens(3)),
    "F20": [tuple((i + 1) % 5 for i in range(5)), tuple((2 * i) % 5 for i in range(5))],
    "Q20": quaternion_gens(20),
    "D20": dihedral_gens(10),
    "C7:C3": [tuple((i + 1) % 7 for i in range(7)), tuple((2 * i) % 7 for i in range(7))],
    "D22": dihedral_gens(11),
    "S4": [(1, 0, 2, 3), (1, 2, 3, 0)],
    "SL(2,3)": sl23_gens(),
    "Q24": quaternion_gens(24),
    "D24": dihedral_gens(12),
    "C3:C8": c3_c8_gens(),
    "A4xC2": disjoint([(1, 2, 0, 3), (1, 0, 3, 2)], cyclic_gens(2)),
    "S3xC4": disjoint(dihedral_gens(3), cyclic_gens(4)),
    "C24": cyclic_gens(24),
}


def perm_group(gens):
    return PermGroup([np.array(g) for g in gens], len(gens[0]))


@pytest.fixture(scope="session")
def catalog():
    return {g.name: g for g in default_catalog()}

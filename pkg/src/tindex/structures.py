"""Angle structures and index structures, decided by exact LP with certificates."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import rank
from .lp import check_certificate, lp_feasible
from .nzdata import GluingData, IndexInput, RankError

Quad = Tuple[int, ...]   # entries in {1, 2, 3}


@dataclass(frozen=True)
class StructureWitness:
    alpha: Tuple[Fraction, ...]
    beta: Tuple[Fraction, ...]
    gamma: Tuple[Fraction, ...]

    @classmethod
    def from_flat(cls, x: Sequence[Fraction], s: int) -> "StructureWitness":
        return cls(tuple(x[:s]), tuple(x[s:2 * s]), tuple(x[2 * s:3 * s]))

    def flat(self) -> List[Fraction]:
        return list(self.alpha) + list(self.beta) + list(self.gamma)

    def triples(self):
        return list(zip(self.alpha, self.beta, self.gamma))

    def min_angle(self) -> Fraction:
        return min(self.flat())

    def to_json(self) -> List[List[int]]:
        return [[v.numerator, v.denominator] for v in self.flat()]

    def rotate(self, i: int) -> "StructureWitness":
        """(alpha_i, beta_i, gamma_i) -> (beta_i, gamma_i, alpha_i)."""
        a, b, g = list(self.alpha), list(self.beta), list(self.gamma)
        a[i], b[i], g[i] = b[i], g[i], a[i]
        return StructureWitness(tuple(a), tuple(b), tuple(g))


@dataclass(frozen=True)
class RayCertificate:
    k0: Tuple[int, ...]
    quad: Quad

    def to_json(self) -> dict:
        return {"k0": list(self.k0), "quad": list(self.quad)}


# --- angle structures on gluing data ---------------------------------------------

def _angle_system(g: GluingData):
    n = g.num_tet
    E, b = [], []
    for ra, rb, rc in zip(g.edge_A, g.edge_B, g.edge_C):
        E.append(list(ra) + list(rb) + list(rc))
        b.append(2)
    for i in range(n):
        row = [0] * (3 * n)
        row[i] = row[n + i] = row[2 * n + i] = 1
        E.append(row)
        b.append(1)
    return E, b


def check_angle_structure(g: GluingData, w: StructureWitness, regime: str = "generalized") -> bool:
    E, b = _angle_system(g)
    x = w.flat()
    if any(sum(Fraction(c) * v for c, v in zip(row, x)) != rhs for row, rhs in zip(E, b)):
        return False
    if regime == "semi":
        return all(v >= 0 for v in x)
    if regime == "strict":
        return all(v > 0 for v in x)
    return True


def _angle(g: GluingData, regime: str) -> Optional[StructureWitness]:
    E, b = _angle_system(g)
    n3 = 3 * g.num_tet
    strict = range(n3) if regime == "strict" else ()
    nonneg = range(n3) if regime == "semi" else ()
    res = lp_feasible(E, b, strict, nonneg, certificate=False)
    if res.point is None:
        return None
    w = StructureWitness.from_flat(res.point, g.num_tet)
    assert check_angle_structure(g, w, regime)
    return w


def generalized_angle_structure(g: GluingData) -> Optional[StructureWitness]:
    return _angle(g, "generalized")


def semi_angle_structure(g: GluingData) -> Optional[StructureWitness]:
    return _angle(g, "semi")


def strict_angle_structure(g: GluingData) -> Optional[StructureWitness]:
    return _angle(g, "strict")


# --- index structures on M = (A | B | nu) ----------------------------------------

def _index_system(M: IndexInput):
    s = M.s
    E, b = [], []
    for ra, rb, v in zip(M.A, M.B, M.nu):
        E.append(list(ra) + [0] * s + list(rb))
        b.append(v)
    for i in range(s):
        row = [0] * (3 * s)
        row[i] = row[s + i] = row[2 * s + i] = 1
        E.append(row)
        b.append(1)
    return E, b


def check_rank(M: IndexInput) -> None:
    rk = rank([a + b for a, b in zip(M.A, M.B)])
    if rk != M.R:
        raise RankError(f"rank of (A|B) is {rk}, expected {M.R}")


def check_index_witness(M: IndexInput, w: StructureWitness, quad: Optional[Quad] = None,
                        strict: bool = False) -> bool:
    """Exact re-verification of A alpha + B gamma = nu, alpha + beta + gamma = 1 and signs."""
    for ra, rb, v in zip(M.A, M.B, M.nu):
        if sum(Fraction(x) * y for x, y in zip(ra, w.alpha)) + \
                sum(Fraction(x) * y for x, y in zip(rb, w.gamma)) != v:
            return False
    if any(a + b + c != 1 for a, b, c in w.triples()):
        return False
    if strict and any(v <= 0 for v in w.flat()):
        return False
    if quad is not None:
        for i, qi in enumerate(quad):
            if w.triples()[i][qi - 1] <= 0:
                return False
    return True


def _quad_strict_set(quad: Quad, s: int) -> List[int]:
    return [(qi - 1) * s + i for i, qi in enumerate(quad)]


def certificate_to_ray(M: IndexInput, y: Sequence[Fraction], quad: Quad) -> RayCertificate:
    k = list(y[:M.R])
    den = lcm(*[Fraction(v).denominator for v in k]) if k else 1
    k0 = [int(v * den) for v in k]
    from math import gcd
    g = 0
    for v in k0:
        g = gcd(g, v)
    if g > 1:
        k0 = [v // g for v in k0]
    return RayCertificate(tuple(k0), tuple(quad))


def check_ray(M: IndexInput, cert: RayCertificate) -> bool:
    """Integer check of the divergence conditions along the ray N k0.

    Q(i)=1: b_i.k = 0, a_i.k >= 0;  Q(i)=2: (a_i - b_i).k = 0, -b_i.k >= 0;
    Q(i)=3: a_i.k = 0, b_i.k >= 0;  and (nu - sum_{Q(i)=2} b_i).k <= 0.
    """
    k = cert.k0
    if not any(k) or len(k) != M.R:
        return False
    total = sum(v * x for v, x in zip(M.nu, k))
    for i, qi in enumerate(cert.quad):
        a, b = M.col(i)
        ak = sum(x * y for x, y in zip(a, k))
        bk = sum(x * y for x, y in zip(b, k))
        if qi == 1:
            ok = bk == 0 and ak >= 0
        elif qi == 2:
            ok = ak == bk and -bk >= 0
            total -= bk
        elif qi == 3:
            ok = ak == 0 and bk >= 0
        else:
            return False
        if not ok:
            return False
    return total <= 0


@dataclass
class IndexReport:
    exists: bool
    witnesses: Dict[Quad, StructureWitness] = field(default_factory=dict)
    failures: Dict[Quad, RayCertificate] = field(default_factory=dict)
    checked: int = 0

    @property
    def failing_quad(self) -> Optional[Quad]:
        return min(self.failures) if self.failures else None

    @property
    def ray(self) -> Optional[RayCertificate]:
        q = self.failing_quad
        return self.failures[q] if q is not None else None


def quad_feasible(M: IndexInput, quad: Quad):
    """Witness for one quad, or a RayCertificate."""
    E, b = _index_system(M)
    res = lp_feasible(E, b, _quad_strict_set(quad, M.s))
    if res.point is not None:
        w = StructureWitness.from_flat(res.point, M.s)
        assert check_index_witness(M, w, quad)
        return w
    y = res.certificate
    if y is None:
        raise RuntimeError("LP reported infeasibility without a certificate")
    assert check_certificate(E, b, _quad_strict_set(quad, M.s), (), y)
    cert = certificate_to_ray(M, y, quad)
    assert check_ray(M, cert), "Farkas multipliers did not give a ray"
    return cert


def index_structure(M: IndexInput, full: bool = False) -> IndexReport:
    """Decide whether every quad admits a witness.

    A witness positive on several quads' coordinates covers all of them, so only
    uncovered quads trigger a new LP.  Without ``full`` the loop stops at the
    first infeasible quad (in lexicographic order).
    """
    check_rank(M)
    s = M.s
    report = IndexReport(True)
    covering: List[StructureWitness] = []
    for quad in itertools.product((1, 2, 3), repeat=s):
        report.checked += 1
        if any(all(w.triples()[i][q - 1] > 0 for i, q in enumerate(quad)) for w in covering):
            continue
        out = quad_feasible(M, quad)
        if isinstance(out, RayCertificate):
            report.exists = False
            report.failures[quad] = out
            if not full:
                return report
        else:
            report.witnesses[quad] = out
            covering.append(out)
    return report


def strict_index_structure(M: IndexInput) -> Optional[StructureWitness]:
    """All 3s coordinates positive; the returned witness maximizes the least angle."""
    check_rank(M)
    E, b = _index_system(M)
    res = lp_feasible(E, b, range(3 * M.s), certificate=False)
    if res.point is None:
        return None
    w = StructureWitness.from_flat(res.point, M.s)
    assert check_index_witness(M, w, strict=True)
    return w


def balanced_witness(M: IndexInput) -> Optional[StructureWitness]:
    """A solution of the index equations maximizing the least angle (which may be <= 0).

    Used only as a decomposition device for bounding lattice-sum degrees.
    """
    from .lp import LP, FREE, NONNEG
    E, b = _index_system(M)
    n = 3 * M.s
    lp = LP()
    x = lp.vars(n, FREE)
    t = lp.var(FREE)
    for row, rhs in zip(E, b):
        lp.add({x[j]: v for j, v in enumerate(row)}, "==", rhs)
    for j in range(n):
        lp.add({x[j]: 1, t: -1}, ">=", 0)
    lp.add({t: 1}, "<=", 1)
    res = lp.solve(maximize={t: 1})
    if res.status != "optimal":
        return None
    return StructureWitness.from_flat(res.x[:n], M.s)

"""Euler characteristic, Betti numbers and integral homology of cube complexes."""
from __future__ import annotations

from dataclasses import dataclass, field

from .complex import CubeComplex, ResourceLimitError
from .linalg import DEFAULT_PRIME, rank_mod_p, smith_invariants

DEFAULT_SNF_CAP = 2 * 10**4


class RankDiscrepancyError(ArithmeticError):
    pass


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def torsion_free(self) -> bool:
        return not self.torsion


@dataclass
class InvariantReport:
    f_vector: list[int]
    euler: int
    betti: list[int]
    prime: int
    torsion: list[list[int] | None] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "f_vector": list(self.f_vector),
            "euler": self.euler,
            "betti": list(self.betti),
            "torsion": [None if t is None else list(t) for t in self.torsion],
            "prime": self.prime,
        }


def euler_characteristic(c: CubeComplex) -> int:
    return sum((-1) ** d * f for d, f in enumerate(c.f_vector))


def connected_components(c: CubeComplex) -> int:
    return len(set(c.one_skeleton_components()))


def boundary_ranks(c: CubeComplex, prime: int = DEFAULT_PRIME) -> list[int]:
    """ranks[d] = rank of the boundary map from d-cells, with ranks[0] = 0."""
    top = len(c.f_vector)
    ranks = [0] * (top + 1)
    for d in range(1, top):
        ranks[d] = rank_mod_p(c.boundary_matrix(d), prime)
    return ranks


def betti_numbers(c: CubeComplex, prime: int = DEFAULT_PRIME) -> list[int]:
    """Betti numbers over GF(prime); b_0 is cross-checked against union-find."""
    if prime < 2:
        raise ValueError("prime must be >= 2")
    f = c.f_vector
    if c.dim < 0:
        return [0]
    ranks = boundary_ranks(c, prime)
    betti = [f[d] - ranks[d] - ranks[d + 1] for d in range(len(f))]
    components = connected_components(c)
    if betti[0] != components:
        raise RankDiscrepancyError(f"b_0 = {betti[0]} but union-find finds {components} components")
    return betti


def trim_betti(betti: list[int]) -> list[int]:
    """Drop trailing zeros, keeping b_0, so complexes of different dimension compare."""
    out = list(betti)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def integral_homology(c: CubeComplex, d: int, cap: int = DEFAULT_SNF_CAP) -> HomologyGroup:
    """H_d over the integers via Smith normal form of the adjacent boundary maps."""
    if d < 0:
        raise ValueError("dimension must be non-negative")
    f_d = c.count(d)
    cols_in = c.count(d)
    cols_out = c.count(d + 1)
    if max(cols_in, cols_out) > cap:
        raise ResourceLimitError(f"boundary matrices around dimension {d} exceed the SNF cap of {cap} columns")
    rank_out = len(smith_invariants(c.boundary_matrix(d))) if d >= 1 and f_d else 0
    if cols_out and d + 1 < len(c.cells):
        factors = smith_invariants(c.boundary_matrix(d + 1))
    else:
        factors = []
    rank = f_d - rank_out - len(factors)
    return HomologyGroup(rank, tuple(x for x in factors if x > 1))


def rational_betti(c: CubeComplex, cap: int = DEFAULT_SNF_CAP) -> list[int]:
    return [integral_homology(c, d, cap).rank for d in range(len(c.f_vector))]


def invariant_report(
    c: CubeComplex,
    prime: int = DEFAULT_PRIME,
    torsion: bool = True,
    snf_cap: int = DEFAULT_SNF_CAP,
) -> InvariantReport:
    """Full report. Torsion is computed where the SNF cap allows, else ``None``.
    A modular/rational rank disagreement is recorded in ``notes``."""
    betti = betti_numbers(c, prime)
    report = InvariantReport(c.f_vector, euler_characteristic(c), betti, prime)
    alternating = sum((-1) ** d * b for d, b in enumerate(betti))
    if alternating != report.euler:
        raise RankDiscrepancyError(f"Euler characteristic {report.euler} != alternating Betti sum {alternating}")
    for d in range(len(betti)):
        if not torsion:
            report.torsion.append(None)
            continue
        try:
            h = integral_homology(c, d, snf_cap)
        except ResourceLimitError:
            report.torsion.append(None)
            report.notes.append(f"H_{d}: torsion not computed (size cap)")
            continue
        if h.rank != betti[d]:
            report.notes.append(f"H_{d}: rational rank {h.rank} differs from GF({prime}) Betti number {betti[d]}")
        report.torsion.append(list(h.torsion))
    return report

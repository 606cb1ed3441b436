"""Chart-level bookkeeping for the real oriented blow-up.

In polar coordinates ``x_i = r_i e^{i theta_i}`` and ``y_j = s_j e^{i phi_j}`` a
monomial chart becomes a monomial map on radii and an integer linear map on
angles. Nothing here builds a manifold; only the combinatorial shadow that the
weight spectral sequence and the monodromy model need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvariantNegative, NotComplete
from .fiber_space import ChartModel, check_proper
from .special_fiber import SpecialFiberStratification
from .toric_cohomology import CohClass, divisor_class


@dataclass(frozen=True)
class BlowupChartMap:
    chart: ChartModel
    radial: tuple[tuple[tuple[int, int], ...], ...]  # per j: (variable, exponent) pairs
    angular: tuple[tuple[int, ...], ...]  # m' x n'

    def formulas(self) -> list[str]:
        out = []
        for j, block in enumerate(self.radial, start=1):
            rad = "*".join(f"r{i}" + (f"^{l}" if l > 1 else "") for i, l in block)
            ang = " + ".join((f"{l}*" if l > 1 else "") + f"theta{i}" for i, l in block)
            out.append(f"s{j} = {rad}")
            out.append(f"phi{j} = {ang}")
        return out


def blowup_chart_map(chart: ChartModel) -> BlowupChartMap:
    radial = []
    angular = []
    for j in range(chart.m_prime):
        lo, hi = chart.blocks[j], chart.blocks[j + 1]
        radial.append(tuple((i + 1, chart.exponents[i]) for i in range(lo, hi)))
        angular.append(tuple(chart.exponents[i] if lo <= i < hi else 0 for i in range(chart.n_prime)))
    return BlowupChartMap(chart, tuple(radial), tuple(angular))


@dataclass(frozen=True)
class FiberInvariant:
    """Exponents of ``[0,1)^a x (S^1)^b x (D^2)^c``."""

    a: int
    b: int
    c: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def fiber_invariants(chart: ChartModel) -> FiberInvariant:
    a = chart.n_prime - chart.m_prime
    c = chart.n - chart.n_prime - chart.m + chart.m_prime
    if a < 0 or c < 0:
        raise InvariantNegative(f"chart gives negative exponents ({a}, {a}, {c})")
    return FiberInvariant(a, a, c)


@dataclass(frozen=True)
class BundleTower:
    index_set: tuple[int, ...]
    cut_rays: tuple[int, ...]  # one circle bundle per ray
    euler_classes: tuple[CohClass, ...]
    trivial_circles: int  # the (S^1)^{m'} factor

    @property
    def length(self) -> int:
        return len(self.cut_rays)


def bundle_tower(st: SpecialFiberStratification, index_set: Sequence[int]) -> BundleTower:
    """Euler classes of the circle bundles over ``E_I`` in the blown-up fiber.

    Over each target ray the lowest source ray of the stratum cone carries the
    trivial factor; every other ray contributes its divisor class restricted to
    the stratum.
    """
    if not check_proper(st.fs):
        raise NotComplete("stratum is not complete")
    I = tuple(sorted(index_set))
    if I not in st.strata:
        raise KeyError(f"E_{I} is empty")
    gamma = st.strata[I]
    ring = st.ring(gamma)
    base = first_rays(st, gamma)
    cut = tuple(r for r in gamma if r not in base)
    classes = tuple(divisor_class(ring, r) for r in cut)
    return BundleTower(I, cut, classes, len(st.tau))


def first_rays(st: SpecialFiberStratification, gamma: Sequence[int]) -> tuple[int, ...]:
    """The smallest ray of ``gamma`` over each target ray."""
    best: dict[int, int] = {}
    for r in gamma:
        j = st.fs.ray_data[r][0]
        if j is not None and (j not in best or r < best[j]):
            best[j] = r
    return tuple(sorted(best.values()))

"""Fractional Dehn twist coefficients at boundary circles and across reduction curves.

Convention: the boundary twist ``T_d`` has coefficient 1, so ``T_a T_b`` on
the one-holed torus has 1/6. A reduction curve sits in a chain of seams and
annulus blocks; its two-sided sum adds the coefficients of the return power
at every circle of the chain, which is what survives when the curve is
viewed from both sides at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import TYPE_CHECKING

from .surface_kernel import MappingClass

if TYPE_CHECKING:
    from .nt_classify import NTDecomposition

__all__ = [
    "FdtcReport",
    "fdtc",
    "label_orbit_length",
    "chain_return_power",
    "chain_sum",
    "fdtc_report",
    "ibundle_sum_check",
]


def fdtc(f: MappingClass, label: str) -> Fraction:
    """Coefficient of ``f`` at the boundary circle ``label``; ``f`` must fix that circle."""
    if f.label_map()[label] != label:
        raise ValueError(f"boundary {label} is not preserved")
    if f.reversing:
        raise ValueError("orientation reversing maps have no coefficient")
    return f.fdtc_at(label)


def label_orbit_length(f: MappingClass, label: str) -> int:
    lm = f.label_map()
    n, cur = 1, lm[label]
    while cur != label:
        cur = lm[cur]
        n += 1
    return n


def chain_return_power(f: MappingClass, chain: list[str]) -> int:
    """Smallest power fixing every circle of the chain (and so preserving the curve with orientation)."""
    k = 1
    for lab in chain:
        n = label_orbit_length(f, lab)
        k = k * n // gcd(k, n)
    if f.reversing and k % 2:
        k *= 2
    return k


def chain_sum(f: MappingClass, chain: list[str], power: int | None = None) -> Fraction:
    """Two-sided coefficient sum of ``f**power`` along a chain of circles."""
    k = chain_return_power(f, chain) if power is None else power
    g = f.power(k)
    return sum((g.fdtc_at(lab) for lab in chain), Fraction(0))


@dataclass
class FdtcReport:
    per_boundary: dict[str, Fraction] = field(default_factory=dict)
    per_chain: dict[tuple[str, ...], Fraction] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "boundary": {k: str(v) for k, v in sorted(self.per_boundary.items())},
            "chains": {",".join(k): str(v) for k, v in sorted(self.per_chain.items())},
        }


def fdtc_report(f: MappingClass) -> FdtcReport:
    """Coefficients of the return powers at every circle, plus chain sums."""
    rep = FdtcReport()
    if f.reversing:
        return rep
    for b in f.domain.blocks:
        for lab in b.boundaries:
            k = label_orbit_length(f, lab)
            rep.per_boundary[lab] = f.power(k).fdtc_at(lab)
    for chain in f.twist_chains():
        owners = [f.domain.blocks[f.domain.owner(x)[0]] for x in chain]
        if any(o.is_disk() for o in owners):
            continue
        rep.per_chain[tuple(chain)] = chain_sum(f, chain)
    return rep


def ibundle_sum_check(d: "NTDecomposition", delta1: list[str]) -> bool:
    """True iff the two-sided sum at the reduction curve ``delta1`` vanishes.

    Both adjacent pieces must be pseudo-Anosov.
    """
    for piece in d.adjacent_pieces(delta1):
        if piece.tag != "pA":
            raise ValueError("adjacent piece is periodic")
    return chain_sum(d.f, delta1) == 0

"""Stokes pseudo-spin operators as polynomials in the ladder operators.

J_u^X = (c_+^dag c_+ - c_-^dag c_-)/2 for each arm X, with the basis pairs
  z: c_{+,-} = a_h, a_v
  x: c_{+,-} = (a_h +- a_v)/sqrt(2)
  y: c_{+,-} = (a_h +- i a_v)/sqrt(2)
and J = J^A + J^B. Products keep operator order, so the quartic strings of J^2
are evaluated exactly by the Wick engine for either statistics.
"""
import math
from collections import defaultdict
from typing import Dict, Iterator, List, Tuple

import numpy as np

from pdcsim.gaussian.modes import Arm, ModeIndex, OperatorFactor, Polarization

Term = Tuple[OperatorFactor, ...]
ModeCombination = List[Tuple[ModeIndex, complex]]

AXES = ("x", "y", "z")
_PRUNE = 1e-15


class OperatorPolynomial:
    """Finite linear combination of ordered operator products."""

    def __init__(self, terms: Dict[Term, complex] = None):
        self.terms: Dict[Term, complex] = {}
        for term, coeff in (terms or {}).items():
            if abs(coeff) > _PRUNE:
                self.terms[tuple(term)] = complex(coeff)

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        merged: Dict[Term, complex] = defaultdict(complex, self.terms)
        for term, coeff in other.terms.items():
            merged[term] += coeff
        return OperatorPolynomial(merged)

    def __mul__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        product: Dict[Term, complex] = defaultdict(complex)
        for left, a in self.terms.items():
            for right, b in other.terms.items():
                product[left + right] += a * b
        return OperatorPolynomial(product)

    def scale(self, factor: complex) -> "OperatorPolynomial":
        return OperatorPolynomial({term: coeff * factor for term, coeff in self.terms.items()})

    def __iter__(self) -> Iterator[Tuple[Term, complex]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)


def bilinear(left: ModeCombination, right: ModeCombination) -> OperatorPolynomial:
    """c_left^dagger c_right for linear mode combinations c = sum w_k a_k."""
    terms: Dict[Term, complex] = defaultdict(complex)
    for mode_k, w_k in left:
        for mode_l, w_l in right:
            terms[(OperatorFactor(mode_k, True), OperatorFactor(mode_l, False))] += np.conj(w_k) * w_l
    return OperatorPolynomial(terms)


def polarization_basis(arm: Arm, axis: str) -> Tuple[ModeCombination, ModeCombination]:
    """The (+, -) mode pair of one arm whose number difference gives twice J_axis."""
    h = ModeIndex.of(arm, Polarization.H)
    v = ModeIndex.of(arm, Polarization.V)
    norm = 1.0 / math.sqrt(2.0)
    if axis == "z":
        return [(h, 1.0)], [(v, 1.0)]
    if axis == "x":
        return [(h, norm), (v, norm)], [(h, norm), (v, -norm)]
    if axis == "y":
        return [(h, norm), (v, 1j * norm)], [(h, norm), (v, -1j * norm)]
    raise ValueError(f"unknown Stokes axis: {axis}")


def stokes_component(arm: Arm, axis: str) -> OperatorPolynomial:
    plus, minus = polarization_basis(arm, axis)
    return (bilinear(plus, plus) + bilinear(minus, minus).scale(-1.0)).scale(0.5)


def total_spin_components() -> Dict[str, OperatorPolynomial]:
    """J_u = J_u^A + J_u^B for u in x, y, z."""
    return {axis: stokes_component(Arm.A, axis) + stokes_component(Arm.B, axis) for axis in AXES}


def total_number_polynomial() -> OperatorPolynomial:
    return OperatorPolynomial({(OperatorFactor(mode, True), OperatorFactor(mode, False)): 1.0
                               for mode in ModeIndex})


def j_squared_polynomial() -> OperatorPolynomial:
    """J^2 = sum_u J_u J_u expanded into ordered quartic strings."""
    total = OperatorPolynomial()
    for component in total_spin_components().values():
        total = total + component * component
    return total

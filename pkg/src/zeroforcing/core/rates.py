from typing import Tuple

import numpy as np
from scipy.special import comb

from src.zeroforcing.core.errors import NumericalError, PreconditionError
from src.zeroforcing.core.models.phase_portrait import ScaledState

PROBABILITY_TOL = 1e-9

# Smart d=3 states are flattened as y_{i,k} -> index 2i + (k - 1)
SMART_SHAPE = (3, 2)
# Binomial coefficients C(2, a) for the two free points of a smart-greedy vertex
SMART_BINOMIAL = comb(2, np.arange(3))


def smartIndex(i: int, k: int) -> int:
    return 2 * i + (k - 1)


def _undominatedMass(y: np.ndarray, strict: bool) -> float:
    u = 1.0 - float(np.sum(y))
    if u <= 0.0:
        if strict:
            raise NumericalError(f"Undominated mass u={u:.3e} is not positive")
        u = np.finfo(float).tiny
    return u


def _clampProbability(p: float, name: str, strict: bool) -> float:
    if strict and (p < -PROBABILITY_TOL or p > 1.0 + PROBABILITY_TOL):
        raise NumericalError(f"{name}={p:.6g} outside [0, 1]")
    return min(1.0, max(0.0, p))


def dominatedProbability(y: np.ndarray, d: int, strict: bool = True) -> float:
    """
    Probability that a free point of an undominated vertex is paired with a dominated vertex.

    :param y: Scaled type counts y_0..y_{d-1}.
    :type y: np.ndarray
    :param d: Degree.
    :type d: int
    :param strict: Raise on u <= 0 or P outside [0, 1] instead of clamping.
    :type strict: bool
    :return: P = (Σ ℓ y_ℓ) / (d u).
    :rtype: float
    """
    u = _undominatedMass(y, strict)
    p = float(np.dot(np.arange(len(y)), y)) / (d * u)
    return _clampProbability(p, "P", strict)


def rateMatrix(y: np.ndarray, d: int, strict: bool = True) -> np.ndarray:
    """
    Expected change of every scaled type count per step of every type.

    :param y: Scaled type counts y_0..y_{d-1}.
    :type y: np.ndarray
    :param d: Degree.
    :type d: int
    :param strict: Raise on an invalid state instead of clamping.
    :type strict: bool
    :return: Matrix F with F[i, j - 1] = f_{i,j} for 0 <= i <= d-1 and 1 <= j <= d-1.
    :rtype: np.ndarray
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (d,):
        raise PreconditionError(f"State has {y.shape} components, expected ({d},)")
    u = _undominatedMass(y, strict)
    p = dominatedProbability(y, d, strict)

    i = np.arange(d)
    j = np.arange(1, d)
    # numpy defines 0.0 ** 0 = 1, which the y = 0 start relies on
    binomial = comb(d - 1, i) * p ** (d - 1 - i) * (1.0 - p) ** i
    shifted = np.append(y[1:], 0.0)
    migration = (d - 1) * ((i + 1) * shifted - i * y) / (d * u)

    rates = np.outer(binomial, j) + np.outer(migration, j)
    rates[j, j - 1] -= 1.0
    rates[0, :] += 1.0
    return rates


def rateF(i: int, j: int, state: ScaledState, d: int) -> float:
    """
    Expected change of T_i, divided by one, in a step of type j.

    :param i: Type whose change is measured.
    :type i: int
    :param j: Type of the processed vertex.
    :type j: int
    :param state: Scaled state.
    :type state: ScaledState
    :param d: Degree.
    :type d: int
    :return: f_{i,j}.
    :rtype: float
    """
    if not 0 <= i <= d - 1:
        raise PreconditionError(f"Type i={i} outside [0, {d - 1}]")
    if not 1 <= j <= d - 1:
        raise PreconditionError(f"Step type j={j} outside [1, {d - 1}]")
    return float(rateMatrix(state.y, d)[i, j - 1])


def _smartContext(y: np.ndarray, strict: bool) -> Tuple[np.ndarray, float, float, float]:
    cells = np.asarray(y, dtype=float).reshape(SMART_SHAPE)
    totals = cells.sum(axis=1)
    u = _undominatedMass(cells, strict)
    p = _clampProbability((totals[1] + 2.0 * totals[2]) / (3.0 * u), "P", strict)
    points = totals[1] + 2.0 * totals[2]
    q = (cells[1, 0] + 2.0 * cells[2, 0]) / points if points > 0.0 else 0.0
    return cells, u, p, min(1.0, max(0.0, q))


def _pairProbability(a: int, b: int, p: float) -> float:
    weight = 2.0 if a != b else 1.0
    return weight * SMART_BINOMIAL[a] * SMART_BINOMIAL[b] * p ** (4 - a - b) * (1.0 - p) ** (a + b)


def _smartStep(cells: np.ndarray, u: float, p: float, q: float, j: int, l: int) -> np.ndarray:
    i = np.arange(3)
    shifted = np.vstack([cells[1:], np.zeros((1, 2))])
    rates = 2.0 * j * ((i + 1)[:, None] * shifted - i[:, None] * cells) / (3.0 * u)
    own = l - 1

    if j == 1:
        rates[0, own] += 1.0
        rates[1, own] -= 1.0
        rates[:, 1] += SMART_BINOMIAL * p ** (2 - i) * (1.0 - p) ** i
        return rates

    for a, b in ((2, 2), (2, 1), (1, 1)):
        mass = _pairProbability(a, b, p)
        # The neighbour with fewer undominated neighbours becomes the witness
        rates[a, 0] += mass
        rates[b, 1] += mass
        rates[0, own] += mass
        rates[2, own] -= mass

    trigger = q * q if l == 1 else 0.0
    for a in (1, 2):
        mass = _pairProbability(a, 0, p)
        inserted, plain = mass * trigger, mass * (1.0 - trigger)
        rates[a, 1] += inserted
        rates[0, 0] += inserted
        rates[0, 1] += inserted
        rates[2, 0] -= inserted
        rates[a, 0] += plain
        rates[0, 1] += plain
        rates[0, own] += plain
        rates[2, own] -= plain

    mass = _pairProbability(0, 0, p)
    trigger = 1.0 - (1.0 - q * q) ** 2 if l == 1 else 0.0
    inserted, plain = mass * trigger, mass * (1.0 - trigger)
    rates[0, 0] += inserted
    rates[0, 1] += 2.0 * inserted
    rates[2, 0] -= inserted
    rates[0, 0] += plain
    rates[0, 1] += plain
    rates[0, own] += plain
    rates[2, own] -= plain
    return rates


def smartRateMatrix(y: np.ndarray, strict: bool = True) -> np.ndarray:
    """
    Expected changes of the six smart-greedy cells for every step kind.

    A step kind is the type j of the processed vertex and the set ℓ it is taken from. An
    if-triggered step inserts a type-0 neighbour u with N(u) inside T1 before the witness
    is chosen; q is the chance that a dominated neighbour point sits in T1.

    :param y: The six cells y_{i,k}.
    :type y: np.ndarray
    :param strict: Raise on an invalid state instead of clamping.
    :type strict: bool
    :return: Array R with R[j - 1, ℓ - 1, i, k - 1] = f_{i,j,k,ℓ}.
    :rtype: np.ndarray
    """
    if np.shape(y) != (6,):
        raise PreconditionError(f"Smart state has shape {np.shape(y)}, expected (6,)")
    cells, u, p, q = _smartContext(y, strict)
    rates = np.empty((2, 2) + SMART_SHAPE)
    for j in (1, 2):
        for l in (1, 2):
            rates[j - 1, l - 1] = _smartStep(cells, u, p, q, j, l)
    return rates


def smartRateF(i: int, j: int, k: int, l: int, state: ScaledState) -> float:
    if not (0 <= i <= 2 and 1 <= j <= 2 and k in (1, 2) and l in (1, 2)):
        raise PreconditionError(f"Smart rate index (i={i}, j={j}, k={k}, l={l}) out of range")
    return float(smartRateMatrix(state.y)[j - 1, l - 1, i, k - 1])

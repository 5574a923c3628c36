"""Small SDP instances with known facial-reduction behaviour."""
from fractions import Fraction

import numpy as np

from ..errors import BadOrder
from .model import SdpProblem


def notminex() -> SdpProblem:
    """Three 3x3 matrices whose only feasible point is zero; (A1, A2, A3)
    is an FR sequence of length 3 and (A3, A1) one of length 2."""
    A1 = [[1, 0, 0], [0, 0, 0], [0, 0, 0]]
    A2 = [[-1, 1, 0], [1, 1, 0], [0, 0, 0]]
    A3 = [[0, 0, 0], [0, 1, 0], [0, 0, 1]]
    return SdpProblem.from_dense([A1, A2, A3], [0, 0, 0])


def sdpex2() -> SdpProblem:
    """5x5 instance where the minimum-rank first step (A3) yields a short
    sequence while (A1, A2, A3) is longer."""
    A1 = np.diag([1, 1, 1, 0, 0]).tolist()
    A2 = np.zeros((5, 5), dtype=int)
    A2[2, 3] = A2[3, 2] = A2[3, 3] = 1
    A3 = np.diag([0, 0, 0, 1, 1]).tolist()
    return SdpProblem.from_dense([A1, A2.tolist(), A3], [0, 0, 0])


def worst_case_instance(n: int) -> SdpProblem:
    """``X11 = 1``, ``X22 = 0`` and ``X_{k+1,k+1} = X_{1k}`` for
    ``k = 2..n-1``; its singularity degree is ``n - 1``."""
    if n < 2:
        raise BadOrder(f"order must be at least 2, got {n}")
    half = Fraction(1, 2)
    mats = [{(0, 0): Fraction(1)}, {(1, 1): Fraction(1)}]
    for k in range(2, n):
        # X_{k+1,k+1} - X_{1,k} = 0 with 0-based rows k and (0, k-1)
        mats.append({(k, k): Fraction(1), (0, k - 1): -half})
    b = [1] + [0] * (n - 1)
    return SdpProblem(n, tuple(mats), tuple(b))


def slater_instance(n: int = 2) -> SdpProblem:
    return SdpProblem(n, ({(i, i): 1 for i in range(n)},), (1,))

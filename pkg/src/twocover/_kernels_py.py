"""Pure-Python fixed-point enumeration, used when the compiled kernel is absent."""

from __future__ import annotations


def count_fixed_points(moduli: list[int], delta: list[list[int]]) -> int:
    """Count ``x`` in ``Z/m_0 + ... + Z/m_{n-1}`` with ``delta x == 0``.

    ``delta[i][k]`` must already be reduced mod ``moduli[i]``, and every
    column ``k`` must satisfy ``m_k * delta[i][k] == 0 mod m_i`` (true for
    ``C - I`` with ``C`` well defined on the group).  The residue vector is
    updated incrementally: stepping any digit of the mixed-radix counter,
    including the wrap back to 0, adds column ``k`` once.
    """
    n = len(moduli)
    if n == 0:
        return 1
    cols = [[delta[i][k] for i in range(n)] for k in range(n)]
    res = [0] * n
    nonzero = 0
    count = 0
    digits = [0] * n
    while True:
        if nonzero == 0:
            count += 1
        k = 0
        while True:
            col = cols[k]
            for i in range(n):
                c = col[i]
                if c:
                    old = res[i]
                    new = old + c
                    if new >= moduli[i]:
                        new -= moduli[i]
                    res[i] = new
                    if old == 0:
                        nonzero += 1
                    elif new == 0:
                        nonzero -= 1
            digits[k] += 1
            if digits[k] < moduli[k]:
                break
            digits[k] = 0
            k += 1
            if k == n:
                return count
